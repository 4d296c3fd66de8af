"""Root continuation of cubic families along closed loops, and braid words.

Strands are the three roots. Positions are the ranks of the roots ordered
by real part (ties broken by imaginary part), counted from the left.
A letter sigma_i (``+i``) records a counterclockwise half-twist of the
strands in positions i and i+1: the strand moving rightwards passes below,
i.e. with the smaller imaginary part. ``-i`` is the inverse letter.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import DegenerateSampleError, DomainError, RefinementNeeded
from .monodromy import B1, B2, IDENTITY, UnimodularMatrix
from .weierstrass import CubicPoly

MIN_SAMPLES = 16
MATCH_FRACTION = 1.0 / 3.0
# a double root is only resolved to ~sqrt(machine eps), so the gap test sits above that
DEGENERATE_RTOL = 1e-7

__all__ = [
    "BraidWord",
    "LoopSamples",
    "TrackResult",
    "track_roots",
    "braid_to_matrix",
    "sample_family",
    "polygonal_refinement",
]


@dataclass(frozen=True)
class BraidWord:
    """Freely reduced word in sigma_1^{+-1}, sigma_2^{+-1}, stored as +-1, +-2."""

    letters: tuple = ()

    def __post_init__(self):
        out: list[int] = []
        for g in self.letters:
            g = int(g)
            if g not in (1, -1, 2, -2):
                raise DomainError(f"braid letter must be one of +-1, +-2, got {g}")
            if out and out[-1] == -g:
                out.pop()
            else:
                out.append(g)
        object.__setattr__(self, "letters", tuple(out))

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        return BraidWord(self.letters + other.letters)

    def __pow__(self, m: int) -> "BraidWord":
        base = self if m >= 0 else self.inverse()
        return BraidWord(base.letters * abs(int(m)))

    def __len__(self) -> int:
        return len(self.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(tuple(-g for g in reversed(self.letters)))

    def permutation(self) -> tuple:
        """Image in S_3: perm[p] is the final position of the strand starting at p."""
        at = [0, 1, 2]  # strand occupying each position
        for g in self.letters:
            i = abs(g) - 1
            at[i], at[i + 1] = at[i + 1], at[i]
        perm = [0, 0, 0]
        for pos, strand in enumerate(at):
            perm[strand] = pos
        return tuple(perm)

    def __str__(self) -> str:
        if not self.letters:
            return "e"
        return " ".join(f"s{abs(g)}" + ("^-1" if g < 0 else "") for g in self.letters)


@dataclass(frozen=True)
class LoopSamples:
    """Samples of a closed loop of cubics; the step from last back to first is implied.

    If ``params`` repeats its first value at the end, the duplicated
    endpoint is dropped.
    """

    params: tuple
    polys: tuple

    def __post_init__(self):
        params, polys = tuple(self.params), tuple(self.polys)
        if len(params) != len(polys):
            raise DomainError("params and polys must have the same length")
        if len(params) >= 2 and params[0] == params[-1]:
            if polys[0] != polys[-1]:
                raise DomainError("loop is closed in parameter space but not in the family")
            params, polys = params[:-1], polys[:-1]
        if len(polys) < MIN_SAMPLES:
            raise DomainError(f"a loop needs at least {MIN_SAMPLES} samples, got {len(polys)}")
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "polys", polys)

    def __len__(self) -> int:
        return len(self.polys)


@dataclass(frozen=True)
class TrackResult:
    permutation: tuple
    word: BraidWord
    steps: int

    def __iter__(self):
        return iter((self.permutation, self.word))


def _position_order(z: Sequence[complex]) -> list[int]:
    return sorted(range(3), key=lambda k: (z[k].real, z[k].imag))


def _sample_roots(loop: LoopSamples) -> list[tuple]:
    out = []
    for idx, p in enumerate(loop.polys):
        r = tuple(complex(v) for v in p.roots())
        scale = max(1.0, max(abs(v) for v in r))
        gap = min(abs(r[0] - r[1]), abs(r[0] - r[2]), abs(r[1] - r[2]))
        if gap <= DEGENERATE_RTOL * scale:
            raise DegenerateSampleError(idx)
        out.append(r)
    return out


def _min_gap(r) -> float:
    return min(abs(r[0] - r[1]), abs(r[0] - r[2]), abs(r[1] - r[2]))


def _match(cur: Sequence[complex], new: Sequence[complex], index: int) -> list[complex]:
    """Assign each current strand to its nearest new root, or demand refinement."""
    radius = MATCH_FRACTION * min(_min_gap(cur), _min_gap(new))
    chosen = []
    for z in cur:
        k = min(range(3), key=lambda i: abs(new[i] - z))
        if abs(new[k] - z) >= radius:
            raise RefinementNeeded(index, f"root displacement between samples {index} and {index + 1} exceeds matching radius")
        chosen.append(k)
    if len(set(chosen)) != 3:  # pragma: no cover - excluded by the radius bound
        raise RefinementNeeded(index)
    return [new[k] for k in chosen]


def _crossings(cur, nxt, order: list[int], index: int) -> list[int]:
    """Braid letters for the straight-line motion cur -> nxt, updating ``order``."""
    new_order = _position_order(nxt)
    rank_old = {s: p for p, s in enumerate(order)}
    rank_new = {s: p for p, s in enumerate(new_order)}
    events = []
    for a in range(3):
        for b in range(a + 1, 3):
            if (rank_old[a] - rank_old[b]) * (rank_new[a] - rank_new[b]) < 0:
                d0 = cur[a].real - cur[b].real
                d1 = nxt[a].real - nxt[b].real
                s = d0 / (d0 - d1) if d0 != d1 else 0.5
                events.append((min(1.0, max(0.0, s)), a, b))
    letters = []
    for s, a, b in sorted(events):
        pa, pb = order.index(a), order.index(b)
        if abs(pa - pb) != 1:
            raise RefinementNeeded(index, f"simultaneous crossings between samples {index} and {index + 1}")
        left, right = (a, b) if pa < pb else (b, a)
        im_left = cur[left].imag + s * (nxt[left].imag - cur[left].imag)
        im_right = cur[right].imag + s * (nxt[right].imag - cur[right].imag)
        if im_left == im_right:
            raise RefinementNeeded(index, "strands meet on the real projection")
        gen = min(pa, pb) + 1
        letters.append(gen if im_left < im_right else -gen)
        i = min(pa, pb)
        order[i], order[i + 1] = order[i + 1], order[i]
    if order != new_order:
        raise RefinementNeeded(index, f"ordering between samples {index} and {index + 1} is ambiguous")
    return letters


def track_roots(loop: LoopSamples) -> TrackResult:
    """Continue the roots around the loop.

    Returns the induced permutation (in position convention, see
    :meth:`BraidWord.permutation`) and the braid word of the motion.
    """
    roots = _sample_roots(loop)
    n = len(roots)
    start = roots[0]
    order = _position_order(start)
    cur = list(start)
    letters: list[int] = []
    for k in range(n):
        nxt = _match(cur, roots[(k + 1) % n], k)
        letters.extend(_crossings(cur, nxt, order, k))
        cur = nxt
    start_pos = {s: p for p, s in enumerate(_position_order(start))}
    perm = [0, 0, 0]
    for strand in range(3):
        # strand began at start[strand]; it now sits on one of the start roots
        k = min(range(3), key=lambda i: abs(start[i] - cur[strand]))
        perm[start_pos[strand]] = start_pos[k]
    return TrackResult(tuple(perm), BraidWord(tuple(letters)), n)


def braid_to_matrix(word: BraidWord) -> UnimodularMatrix:
    """Image under sigma_1 -> b1 = [[1,0],[-1,1]], sigma_2 -> b2 = [[1,1],[0,1]]."""
    gens = {1: B1, -1: B1.inverse(), 2: B2, -2: B2.inverse()}
    result = IDENTITY
    for g in word.letters:
        result = result @ gens[g]
    return result


def sample_family(family: Callable[[float], CubicPoly], n: int, turns: int = 1) -> LoopSamples:
    """Sample a family parametrised by s in [0, 1) at n points per turn."""
    total = n * turns
    params = tuple(k / n for k in range(total))
    return LoopSamples(params, tuple(family(s % 1.0) for s in params))


def polygonal_refinement(loop: LoopSamples) -> LoopSamples:
    """Insert coefficient midpoints between consecutive samples (closing step included)."""
    polys = []
    n = len(loop)
    for k in range(n):
        p, q = loop.polys[k], loop.polys[(k + 1) % n]
        polys.append(p)
        polys.append(CubicPoly(*((a + b) / 2 for a, b in zip(p.coefficients, q.coefficients))))
    # parameters only label samples; keep them strictly increasing
    return LoopSamples(tuple(range(2 * n)), tuple(polys))
