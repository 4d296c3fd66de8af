"""Command-line workbench.

Usage:
    monodromy-lab verify [--tol jacobi=1e-12]
    monodromy-lab pendulum --epsilon 0.05 --samples 2048 --format json --out cert.json
    monodromy-lab braid loop.txt | monodromy-lab braid --example
    monodromy-lab gate --m 1 | monodromy-lab gate --certificate cert.json
    monodromy-lab curve --g2 4 --g3 0
    monodromy-lab theta --z 0.1+0.05j --tau 1j --k 2 --j 1

Data goes to stdout (or ``--out``), diagnostics to stderr. Exit codes:
0 success, 1 failed check or certification, 2 usage or parse error.
"""

from __future__ import annotations

import contextlib
import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import click
import jsonschema

from . import __version__
from .braidtrack import LoopSamples, braid_to_matrix, polygonal_refinement, track_roots
from .errors import (
    DegenerateSampleError,
    MonodromyLabError,
    NonIntegralVariationError,
    RangeError,
    RefinementExceededError,
    RefinementNeeded,
)
from .monodromy import B1, B2, PhaseGate, UnimodularMatrix, phase_gate, verify_gate_against_theta
from .pendulum import (
    EPSILON_DEFAULT,
    EPSILON_MAX,
    INTEGER_TOL,
    N_DEFAULT,
    N_MIN,
    PERIOD_RTOL,
    CircuitSample,
    CircuitTrace,
    MonodromyCertificate,
    certify,
    trace_circuit,
)
from .suites import DEFAULT_TOLERANCES, run_all
from .thetafn import ModularParameter, level_theta, modified_level_theta, theta1, theta2, theta3, theta4
from .weierstrass import curve_from_invariants, theta_root_residuals

__all__ = [
    "RunConfig",
    "TOLERANCES",
    "cli",
    "dumps",
    "parse_loop_file",
    "certificate_to_dict",
    "certificate_from_dict",
    "load_schema",
]

SCHEMA_VERSION = 1
TOLERANCES = {**DEFAULT_TOLERANCES, "integer": INTEGER_TOL, "period": PERIOD_RTOL}
GATE_SAMPLE = (0.1 + 0.05j, 0.2 + 1.1j)
BRAID_MAX_DEPTH = 6


class UsageFailure(click.ClickException):
    exit_code = 2


class CheckFailure(click.ClickException):
    exit_code = 1


# ---------------------------------------------------------------- config


@dataclass(frozen=True)
class RunConfig:
    command: str
    epsilon: float = EPSILON_DEFAULT
    samples: int = N_DEFAULT
    center: tuple = (0.0, 1.0)
    turns: int = 1
    tolerances: dict = field(default_factory=dict)
    output_path: str | None = None
    output_format: str = "json"

    def __post_init__(self):
        if not 0 < self.epsilon <= EPSILON_MAX:
            raise UsageFailure(f"--epsilon must lie in (0, {EPSILON_MAX}], got {self.epsilon}")
        s = self.samples
        if s < N_MIN or s & (s - 1):
            raise UsageFailure(f"--samples must be a power of two >= {N_MIN}, got {s}")
        if self.turns < 1:
            raise UsageFailure("--turns must be positive")
        if self.output_format not in ("csv", "json"):
            raise UsageFailure(f"unknown format {self.output_format!r}")
        for name in self.tolerances:
            if name not in TOLERANCES:
                raise UsageFailure(f"unknown tolerance {name!r}; known: {', '.join(sorted(TOLERANCES))}")

    def tol(self, name: str) -> float:
        return self.tolerances.get(name, TOLERANCES[name])

    def echo(self) -> dict:
        return {
            "command": self.command,
            "epsilon": self.epsilon,
            "samples": self.samples,
            "center": list(self.center),
            "turns": self.turns,
            "format": self.output_format,
            "tolerances": dict(sorted(self.tolerances.items())),
        }


def _parse_tolerances(items) -> dict:
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise UsageFailure(f"--tol expects NAME=VAL, got {item!r}")
        try:
            v = float(value)
        except ValueError:
            raise UsageFailure(f"tolerance {name!r} has a non-numeric value {value!r}") from None
        if not (v > 0 and math.isfinite(v)):
            raise UsageFailure(f"tolerance {name!r} must be positive and finite")
        out[name.strip()] = v
    return out


def _parse_center(text: str) -> tuple:
    try:
        j0, h0 = (float(p) for p in text.split(","))
    except ValueError:
        raise UsageFailure(f"--center expects J,H, got {text!r}") from None
    return j0, h0


def _parse_complex(text: str, flag: str) -> complex:
    try:
        v = complex(text.replace(" ", ""))
    except ValueError:
        raise UsageFailure(f"{flag} expects a complex number such as 0.1+0.2j, got {text!r}") from None
    if not (math.isfinite(v.real) and math.isfinite(v.imag)):
        raise UsageFailure(f"{flag} must be finite")
    return v


# ---------------------------------------------------------------- output


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite number {x!r}")
    s = format(x, ".17g")
    return s if any(c in s for c in ".en") else s + ".0"


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _csv_text(header: list[str], rows, comment: str) -> str:
    buf = io.StringIO()
    buf.write(f"# {comment}; schema={SCHEMA_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt_float(float(v)) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise


def load_schema() -> dict:
    text = resources.files("monodromy_lab").joinpath("data/report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _validated(report: dict) -> str:
    jsonschema.validate(report, load_schema())
    return dumps(report) + "\n"


def _emit(outputs: list[tuple[Path | None, str]]) -> None:
    """Write every artifact only once all of them have been rendered."""
    for path, text in outputs:
        if path is None:
            click.echo(text, nl=False)
        else:
            _atomic_write(path, text)


def _complex_pair(z: complex) -> list[float]:
    # + 0.0 folds -0.0 into 0.0
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


def _field_rows(body: dict) -> list[tuple]:
    """Flatten a report body into (field, value) CSV rows; nested values as compact JSON."""
    rows = []
    for k, v in body.items():
        if k == "config":
            continue
        if isinstance(v, (list, dict)):
            v = " ".join(line.strip() for line in dumps(v).splitlines())
        rows.append((k, v))
    return rows


def _report(kind: str, body: dict) -> dict:
    return {"schema": SCHEMA_VERSION, "kind": kind, "version": __version__, **body}


# ---------------------------------------------------------------- certificates


def certificate_to_dict(cert: MonodromyCertificate) -> dict:
    return {
        "delta_theta_hat": float(cert.delta_theta_hat),
        "delta_T": float(cert.delta_T),
        "mean_T": float(cert.mean_T),
        "m": int(cert.m),
        "classical_matrix": cert.classical_matrix.rows(),
        "quantum_matrix": cert.quantum_matrix.rows(),
        "gate": {
            "quarter_turns": cert.gate.quarter_turns,
            "origin": cert.gate.origin,
            "diagonal": [_complex_pair(complex(cert.gate.matrix[i, i])) for i in range(2)],
        },
    }


def certificate_from_dict(d: dict) -> MonodromyCertificate:
    return MonodromyCertificate(
        delta_theta_hat=float(d["delta_theta_hat"]),
        delta_T=float(d["delta_T"]),
        m=int(d["m"]),
        classical_matrix=UnimodularMatrix.from_rows(d["classical_matrix"]),
        quantum_matrix=UnimodularMatrix.from_rows(d["quantum_matrix"]),
        gate=PhaseGate(d["gate"]["quarter_turns"], d["gate"]["origin"]),
        mean_T=float(d["mean_T"]),
    )


def _trace_block(trace: CircuitTrace) -> dict:
    rows = [list(s.row()) for s in trace.samples] + [list(trace.closure.row())]
    return {"columns": list(CircuitSample.COLUMNS), "rows": rows}


# ---------------------------------------------------------------- loop files


def parse_loop_file(text: str) -> LoopSamples:
    """Parse ``t_count=<N>`` followed by N rows ``c3 c2 c1 c0``.

    Coefficients may be complex in Python literal form (``2.5+0.1j``).
    Blank lines and lines starting with ``#`` are ignored.
    """
    from .weierstrass import CubicPoly

    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty loop file")
    key, sep, value = lines[0].partition("=")
    if key.strip() != "t_count" or not sep:
        raise ValueError("first line must be t_count=<N>")
    try:
        n = int(value)
    except ValueError:
        raise ValueError(f"t_count is not an integer: {value!r}") from None
    rows = lines[1:]
    if len(rows) != n:
        raise ValueError(f"t_count={n} but {len(rows)} coefficient rows follow")
    polys = []
    for k, row in enumerate(rows):
        tokens = row.split()
        if len(tokens) != 4:
            raise ValueError(f"row {k + 1}: expected 4 coefficients, got {len(tokens)}")
        try:
            coeffs = [complex(t) for t in tokens]
        except ValueError:
            raise ValueError(f"row {k + 1}: unparsable coefficient") from None
        if not all(math.isfinite(c.real) and math.isfinite(c.imag) for c in coeffs):
            raise ValueError(f"row {k + 1}: non-finite coefficient")
        if coeffs[0] == 0:
            raise ValueError(f"row {k + 1}: leading coefficient is zero")
        polys.append(CubicPoly(*(c.real if c.imag == 0 else c for c in coeffs)))
    return LoopSamples(tuple(range(n)), tuple(polys))


def _track_stable(loop: LoopSamples, max_depth: int) -> tuple:
    """Track with polygonal refinement until two successive levels agree."""
    previous = None
    for depth in range(max_depth + 1):
        try:
            result = track_roots(loop)
        except RefinementNeeded:
            previous = None
        else:
            key = (result.permutation, result.word.letters)
            if previous == key:
                return result, depth - 1
            previous = key
        if depth < max_depth:
            loop = polygonal_refinement(loop)
    raise RefinementExceededError(f"root tracking did not stabilise within {max_depth} refinements")


# ---------------------------------------------------------------- commands


def _common(f):
    f = click.option("--out", "out", type=click.Path(dir_okay=False), default=None, help="Write to PATH atomically.")(f)
    f = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="json", show_default=True)(f)
    f = click.option("--tol", "tols", multiple=True, metavar="NAME=VAL", help="Override a named tolerance.")(f)
    return f


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="monodromy-lab")
def cli():
    """Theta functions, elliptic curves, braids and pendulum monodromy."""


@cli.command()
@_common
def verify(tols, fmt, out):
    """Run the identity suites and report the worst residual of each."""
    cfg = RunConfig("verify", tolerances=_parse_tolerances(tols), output_path=out, output_format=fmt)
    checks = run_all({k: v for k, v in cfg.tolerances.items() if k in DEFAULT_TOLERANCES})
    for c in checks:
        click.echo(f"{'PASS' if c.passed else 'FAIL'} {c.name:<18} residual={c.residual:.3e} tol={c.tolerance:.1e}", err=True)
    ok = all(c.passed for c in checks)
    if fmt == "json":
        text = _validated(
            _report(
                "verify",
                {
                    "config": cfg.echo(),
                    "passed": ok,
                    "checks": [
                        {"name": c.name, "residual": c.residual, "tolerance": c.tolerance, "cases": c.cases, "passed": c.passed}
                        for c in checks
                    ],
                },
            )
        )
    else:
        rows = [(c.name, c.residual, c.tolerance, c.cases, "pass" if c.passed else "fail") for c in checks]
        text = _csv_text(["name", "residual", "tolerance", "cases", "status"], rows, "identity suite")
    _emit([(Path(out) if out else None, text)])
    if not ok:
        raise CheckFailure("one or more identity checks failed")


@cli.command()
@click.option("--epsilon", type=float, default=EPSILON_DEFAULT, show_default=True, help="Circuit radius.")
@click.option("--samples", type=int, default=N_DEFAULT, show_default=True, help="Samples per turn (power of two).")
@click.option("--center", default="0,1", show_default=True, help="Circuit centre J,H.")
@click.option("--turns", type=int, default=1, show_default=True)
@click.option("--reverse", is_flag=True, help="Traverse the circuit clockwise.")
@_common
def pendulum(epsilon, samples, center, turns, reverse, tols, fmt, out):
    """Trace the pendulum circuit and certify its monodromy."""
    cfg = RunConfig(
        "pendulum",
        epsilon=epsilon,
        samples=samples,
        center=_parse_center(center),
        turns=turns,
        tolerances=_parse_tolerances(tols),
        output_path=out,
        output_format=fmt,
    )
    try:
        trace = trace_circuit(cfg.epsilon, cfg.samples, center=cfg.center, turns=cfg.turns, orientation=-1 if reverse else 1)
        cert = certify(trace, integer_tol=cfg.tol("integer"), period_rtol=cfg.tol("period"))
    except (NonIntegralVariationError, RefinementExceededError) as exc:
        raise CheckFailure(str(exc)) from None
    except MonodromyLabError as exc:
        raise CheckFailure(f"circuit evaluation failed: {exc}") from None

    click.echo(
        f"delta_theta_hat={cert.delta_theta_hat:+.6f} m={cert.m} "
        f"mu_c={cert.classical_matrix} mu_q={cert.quantum_matrix} N={trace.n_per_turn}",
        err=True,
    )
    report = _report(
        "certificate",
        {
            "certificate": certificate_to_dict(cert),
            "provenance": {
                "config": cfg.echo(),
                "orientation": trace.orientation,
                "sample_count": len(trace.samples),
                "samples_per_turn": trace.n_per_turn,
                "refinement_depth": trace.refinements,
                "max_residuals": {
                    "max_step": trace.max_step,
                    "integrality_defect": abs(cert.delta_theta_hat - round(cert.delta_theta_hat)),
                    "delta_T_relative": abs(cert.delta_T) / cert.mean_T,
                },
            },
        },
    )
    path = Path(out) if out else None
    if fmt == "json":
        report["trace"] = _trace_block(trace)
        _emit([(path, _validated(report))])
    else:
        rows = [s.row() for s in trace.samples] + [trace.closure.row()]
        table = _csv_text(list(CircuitSample.COLUMNS), rows, "pendulum circuit trace")
        outputs = [(path, table)]
        if path is not None:
            outputs.append((path.with_name(path.stem + ".certificate.json"), _validated(report)))
        _emit(outputs)


@cli.command()
@click.argument("loop_file", type=click.Path(exists=True, dir_okay=False), required=False)
@click.option("--example", is_flag=True, help="Use the bundled loop of x^3 - 3x + c around c = 2.")
@click.option("--max-depth", type=click.IntRange(0, 12), default=BRAID_MAX_DEPTH, show_default=True)
@_common
def braid(loop_file, example, max_depth, tols, fmt, out):
    """Continue the roots along a loop of cubics and report the braid."""
    cfg = RunConfig("braid", tolerances=_parse_tolerances(tols), output_path=out, output_format=fmt)
    if bool(loop_file) == bool(example):
        raise UsageFailure("give exactly one of LOOP_FILE or --example")
    if example:
        text = resources.files("monodromy_lab").joinpath("data/example_loop.txt").read_text(encoding="utf-8")
        source = "example_loop.txt"
    else:
        try:
            text = Path(loop_file).read_text(encoding="utf-8")
        except UnicodeDecodeError:
            raise UsageFailure(f"{loop_file}: not a text file") from None
        source = Path(loop_file).name
    try:
        loop = parse_loop_file(text)
    except (ValueError, MonodromyLabError) as exc:
        raise UsageFailure(f"{source}: {exc}") from None
    try:
        result, depth = _track_stable(loop, max_depth)
    except DegenerateSampleError as exc:
        raise CheckFailure(f"{source}: {exc}") from None
    except RefinementExceededError as exc:
        raise CheckFailure(f"{source}: {exc}") from None

    mat = braid_to_matrix(result.word)
    click.echo(f"permutation={result.permutation} word={result.word} matrix={mat} det={mat.det()}", err=True)
    body = {
        "config": cfg.echo(),
        "source": source,
        "samples": len(loop),
        "refinement_depth": depth,
        "permutation": list(result.permutation),
        "word": str(result.word),
        "letters": list(result.word.letters),
        "matrix": mat.rows(),
        "det": mat.det(),
        "det_ok": mat.det() == 1,
    }
    if fmt == "json":
        text = _validated(_report("braid", body))
    else:
        rows = _field_rows(body)
        text = _csv_text(["field", "value"], rows, "braid report")
    _emit([(Path(out) if out else None, text)])


@cli.command()
@click.option("--m", "m", type=str, default=None, help="Net tau-translation m.")
@click.option("--certificate", type=click.Path(exists=True, dir_okay=False), default=None, help="Certificate JSON.")
@_common
def gate(m, certificate, tols, fmt, out):
    """Phase gate Q(Z0)^m with the matching SL(2, Z) images."""
    cfg = RunConfig("gate", tolerances=_parse_tolerances(tols), output_path=out, output_format=fmt)
    if (m is None) == (certificate is None):
        raise UsageFailure("give exactly one of --m or --certificate")
    if certificate is not None:
        try:
            data = json.loads(Path(certificate).read_text(encoding="utf-8"))
            jsonschema.validate(data, load_schema())
            m_val = certificate_from_dict(data["certificate"]).m
        except (ValueError, KeyError, TypeError, jsonschema.ValidationError, MonodromyLabError) as exc:
            raise UsageFailure(f"{certificate}: not a certificate report ({exc.__class__.__name__})") from None
    else:
        try:
            m_val = int(m)
        except ValueError:
            raise UsageFailure(f"--m must be an integer, got {m!r}") from None
    z, tau = GATE_SAMPLE
    try:
        residual = verify_gate_against_theta(m_val, z, tau)
    except RangeError as exc:
        raise UsageFailure(str(exc)) from None
    g = phase_gate(m_val)
    ok = residual < cfg.tol("gate")
    click.echo(f"m={m_val} Q=diag(1, {complex(g.matrix[1, 1])}) residual={residual:.3e}", err=True)
    body = {
        "config": cfg.echo(),
        "m": m_val,
        "quarter_turns": g.quarter_turns,
        "is_identity": g.is_identity(),
        "diagonal": [_complex_pair(complex(g.matrix[i, i])) for i in range(2)],
        "classical_matrix": (B2**m_val).rows(),
        "quantum_matrix": (B1**m_val).rows(),
        "sample": {"z": _complex_pair(z), "tau": _complex_pair(tau)},
        "residual": residual,
        "passed": ok,
    }
    if fmt == "json":
        text = _validated(_report("gate", body))
    else:
        rows = _field_rows(body)
        text = _csv_text(["field", "value"], rows, "phase gate")
    _emit([(Path(out) if out else None, text)])
    if not ok:
        raise CheckFailure(f"gate residual {residual:.3e} exceeds {cfg.tol('gate'):.1e}")


@cli.command()
@click.option("--g2", type=float, required=True)
@click.option("--g3", type=float, required=True)
@_common
def curve(g2, g3, tols, fmt, out):
    """Roots, periods, tau and modulus of y^2 = 4x^3 - g2 x - g3."""
    cfg = RunConfig("curve", tolerances=_parse_tolerances(tols), output_path=out, output_format=fmt)
    try:
        c = curve_from_invariants(g2, g3)
    except MonodromyLabError as exc:
        raise UsageFailure(str(exc)) from None
    residuals = theta_root_residuals(c)
    ok = max(residuals) < cfg.tol("bridge")
    body = {
        "config": cfg.echo(),
        "g2": float(g2),
        "g3": float(g3),
        "roots": [float(complex(e).real) for e in c.roots],
        "omega": _complex_pair(complex(c.omega)),
        "omega_prime": _complex_pair(complex(c.omega_prime)),
        "tau": _complex_pair(c.tau.value),
        "k_sq": float(complex(c.k_sq).real),
        "kp_sq": float(complex(c.kp_sq).real),
        "bridge_residuals": [float(r) for r in residuals],
        "passed": ok,
    }
    click.echo(f"roots={body['roots']} tau={c.tau.value} k^2={body['k_sq']:.17g}", err=True)
    if fmt == "json":
        text = _validated(_report("curve", body))
    else:
        rows = _field_rows(body)
        text = _csv_text(["field", "value"], rows, "weierstrass curve")
    _emit([(Path(out) if out else None, text)])
    if not ok:
        raise CheckFailure("root/theta bridge residual exceeds tolerance")


@cli.command()
@click.option("--z", "z_text", default="0", show_default=True)
@click.option("--tau", "tau_text", default="1j", show_default=True)
@click.option("--k", type=int, default=2, show_default=True)
@click.option("--j", type=int, default=0, show_default=True)
@_common
def theta(z_text, tau_text, k, j, tols, fmt, out):
    """Jacobi thetas and the k-level theta at (z, tau)."""
    cfg = RunConfig("theta", tolerances=_parse_tolerances(tols), output_path=out, output_format=fmt)
    z = _parse_complex(z_text, "--z")
    try:
        tau = ModularParameter(_parse_complex(tau_text, "--tau"))
        values = {
            "theta1": theta1(z, tau),
            "theta2": theta2(z, tau),
            "theta3": theta3(z, tau),
            "theta4": theta4(z, tau),
            "level_theta": level_theta(k, j, z, tau),
            "modified_level_theta": modified_level_theta(k, j, z, tau),
        }
    except (MonodromyLabError, OverflowError) as exc:
        raise UsageFailure(str(exc)) from None
    body = {
        "config": cfg.echo(),
        "z": _complex_pair(z),
        "tau": _complex_pair(tau.value),
        "k": k,
        "j": j,
        "values": {name: _complex_pair(v) for name, v in values.items()},
    }
    if fmt == "json":
        text = _validated(_report("theta", body))
    else:
        rows = [(name, float(v.real), float(v.imag)) for name, v in values.items()]
        text = _csv_text(["name", "real", "imag"], rows, "theta values")
    _emit([(Path(out) if out else None, text)])


def main() -> None:  # pragma: no cover
    cli()


if __name__ == "__main__":  # pragma: no cover
    main()
