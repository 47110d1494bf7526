"""Equidistant a/b sequences that exclude lattice periods.

A witness is an axis-parallel progression ``anchor + r*j*e_i`` in which
``l-1`` points of colour ``a`` are followed by one point of colour ``b``,
repeated.  Together with two conditions on the level-1 superelements of
``a`` and ``b`` (they never agree pointwise, and there is a position where
``a`` reproduces ``a`` while ``b`` reproduces ``b``) it rules out every
one-coloured lattice whose period along ``e_i`` has length
``q^k * n * r`` with ``n`` not a multiple of ``l``.

Only finite windows are ever checked, so a verified witness means
"verified at finite scale".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .coincidence import NonCongruentSupports, sqcap
from .lattice import Point
from .mfs import MatrixFunctionSystem
from .patch import Patch, superelement

DEFAULT_MIN_REPETITIONS = 4

CHECKERBOARD_NOTE = (
    "To conclude that no colour class is a model set, show separately that "
    "every one-coloured lattice contained in the system must have a period "
    "length of the excluded form along this direction (for instance by a "
    "parity argument on the colour classes).  Since a model set would be a "
    "union of such lattices up to density zero, this yields a contradiction.  "
    "That step is not automated."
)


class WindowTooSmall(ValueError):
    pass


class UnverifiedWitness(ValueError):
    pass


@dataclass(frozen=True)
class SequenceWitness:
    direction: int
    stride: int
    period: int
    a: int
    b: int
    anchor: Point
    repetitions: int

    def __post_init__(self):
        if self.stride < 1:
            raise ValueError(f"stride must be >= 1, got {self.stride}")
        if self.period < 2:
            raise ValueError(f"period must be >= 2, got {self.period}")
        if self.a == self.b:
            raise ValueError("the two colours of a sequence witness must differ")
        if not 0 <= self.direction < len(self.anchor):
            raise ValueError(f"direction {self.direction} outside 0..{len(self.anchor) - 1}")

    def position(self, j: int) -> Point:
        p = list(self.anchor)
        p[self.direction] += self.stride * j
        return tuple(p)

    def expected(self, j: int) -> int:
        return self.b if j % self.period == self.period - 1 else self.a


def _pattern_length(patch: Patch, anchor: Point, direction: int, stride: int,
                    period: int, a: int, b: int) -> int:
    """Number of consecutive progression points from ``anchor`` matching the pattern."""
    j = 0
    p = list(anchor)
    while True:
        c = patch.get(tuple(p))
        want = b if j % period == period - 1 else a
        if c != want:
            return j
        j += 1
        p[direction] += stride


def find_sequences(patch: Patch, direction: int, stride: int, period: int,
                   min_repetitions: int = DEFAULT_MIN_REPETITIONS) -> List[SequenceWitness]:
    """Maximal a/b runs in ``patch`` along ``e_direction`` with the given stride.

    Only run starts are reported: an anchor is dropped when the same
    pattern extends one full period backwards.  Output is sorted by
    anchor, then colours.
    """
    if stride < 1 or period < 2:
        raise ValueError("need stride >= 1 and period >= 2")
    if not 0 <= direction < patch.dim:
        raise ValueError(f"direction {direction} outside 0..{patch.dim - 1}")
    need = min_repetitions * period
    found = []
    for x, a in patch.items():
        q = list(x)
        q[direction] += stride * (period - 1)
        b = patch.get(tuple(q))
        if b is None or b == a:
            continue
        back = list(x)
        back[direction] -= stride * period
        back = tuple(back)
        if back in patch and _pattern_length(patch, back, direction, stride, period, a, b) >= period:
            continue
        n = _pattern_length(patch, x, direction, stride, period, a, b)
        if n >= need:
            found.append(SequenceWitness(direction, stride, period, a, b, x, n // period))
    return found


@dataclass(frozen=True)
class WitnessCheck:
    witness: SequenceWitness
    equidistant: bool  # condition (1)
    axis_parallel: bool  # condition (2)
    pattern: bool  # condition (3)
    disjoint_superelements: Optional[bool]  # condition (4); None if undecidable
    shared_position: Optional[Point]  # condition (5) position, if any
    note: str = ""

    @property
    def reproducing(self) -> bool:
        return self.shared_position is not None

    @property
    def conditions(self) -> Tuple[bool, bool, bool, bool, bool]:
        return (self.equidistant, self.axis_parallel, self.pattern,
                bool(self.disjoint_superelements), self.reproducing)

    @property
    def verified(self) -> bool:
        return all(self.conditions)


def check_witness_conditions(phi: MatrixFunctionSystem, w: SequenceWitness, patch: Patch,
                             min_repetitions: int = DEFAULT_MIN_REPETITIONS) -> WitnessCheck:
    if len(w.anchor) != phi.dim or patch.dim != phi.dim:
        raise ValueError("witness, patch and system dimensions differ")
    length = min_repetitions * w.period
    if any(w.position(j) not in patch for j in (0, length - 1)):
        raise WindowTooSmall(
            f"patch does not contain {min_repetitions} full periods "
            f"({length} points at stride {w.stride}) from {w.anchor}")
    pattern = all(patch.get(w.position(j)) == w.expected(j) for j in range(length))

    specified = set(phi.specified_columns())
    if w.a not in specified or w.b not in specified:
        missing = [phi.colors[c] for c in (w.a, w.b) if c not in specified]
        return WitnessCheck(w, True, True, pattern, None, None,
                            f"substitution of colour(s) {', '.join(missing)} unspecified")
    sa = superelement(phi, w.a, 1)
    sb = superelement(phi, w.b, 1)
    try:
        disjoint = not sqcap(sa, sb)
    except NonCongruentSupports as exc:
        return WitnessCheck(w, True, True, pattern, None, None, str(exc))
    shared = None
    for x, c in sa.items():
        if c == w.a and sb.get(x) == w.b:
            shared = x
            break
    return WitnessCheck(w, True, True, pattern, disjoint, shared)


@dataclass(frozen=True)
class ExclusionReport:
    """Excluded lattice period lengths ``q^k * n * r`` (k >= 0, n not in l*N)."""

    witness: SequenceWitness
    factor: int
    scale: str = "witness verified at finite scale"
    density: str = ("there is a subset of positive relative density containing "
                    "no point of such a lattice")
    guidance: str = CHECKERBOARD_NOTE

    @property
    def direction(self) -> int:
        return self.witness.direction

    def excluded(self, length: int) -> bool:
        """Whether a lattice period of ``length`` (lattice units) along the direction is excluded."""
        if length < 1:
            return False
        r, l, q = self.witness.stride, self.witness.period, self.factor
        unit = r
        while unit <= length:
            if length % unit == 0 and (length // unit) % l != 0:
                return True
            unit *= q
        return False

    def describe(self) -> str:
        w = self.witness
        return (f"{{{self.factor}^k * n * {w.stride} : k >= 0, n >= 1, "
                f"n not divisible by {w.period}}}")


def exclusion_report(phi: MatrixFunctionSystem, check: WitnessCheck) -> ExclusionReport:
    if not check.verified:
        raise UnverifiedWitness("all five witness conditions must hold")
    return ExclusionReport(check.witness, phi.factor ** phi.level)
