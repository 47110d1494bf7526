"""Deciding whether a lattice substitution system consists of model sets.

Two routes are combined:

* row disjointness: if the entries of every row of the matrix function
  system are pairwise disjoint and the system is primitive and
  nonperiodic, no colour class contains a translate of a full lattice, so
  the system is not a model set (and not pure point diffractive);
* modular coincidence: some residue class modulo ``q^k L'`` whose maps in
  ``phi^k`` all sit in one row.  Finding one proves every colour class is
  a regular model set.  The search is unbounded in the negative case, so
  it stops at ``max_k`` and reports UNKNOWN.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .lattice import (
    AffineLatticeMap,
    IntegerLattice,
    LatticeAccumulator,
    Point,
    add,
    lattice_sum,
    residue,
    scale,
    scale_lattice,
    sub,
)
from .mfs import (
    MatrixFunctionSystem,
    Primitivity,
    ValidationReport,
    inflation_matrix,
    is_primitive,
    powers,
)
from .patch import (
    DEFAULT_BUDGET,
    DEFAULT_SEED_BOUND,
    BudgetExceeded,
    Patch,
    Seed,
    find_seed,
    generate_levels,
)

DEFAULT_MAX_K = 8
DEFAULT_SCAN_RADIUS = 8


class InvalidSystem(ValueError):
    def __init__(self, message: str, report: Optional[ValidationReport] = None):
        super().__init__(message)
        self.report = report


class CosetError(RuntimeError):
    pass


class NonCongruentSupports(ValueError):
    pass


# -- the coincidence operator ------------------------------------------------


def sqcap(a: Patch, b: Patch) -> frozenset:
    """Points of ``a`` whose colour agrees with the aligned point of ``b``.

    ``b``'s support must be a translate of ``a``'s; the translation is
    read off the lower corners.
    """
    if not a.points and not b.points:
        return frozenset()
    if not a.points or not b.points or len(a) != len(b):
        raise NonCongruentSupports("supports differ in size")
    t = sub(b.bounds()[0], a.bounds()[0])
    out = []
    for z, c in a.points.items():
        other = b.points.get(add(z, t))
        if other is None:
            raise NonCongruentSupports(f"{add(z, t)} missing from the second support")
        if other == c:
            out.append(z)
    return frozenset(out)


@dataclass(frozen=True)
class RowDisjointness:
    disjoint: bool
    # (row, column, column', shared map) on failure
    violation: Optional[Tuple[int, int, int, AffineLatticeMap]] = None

    def __bool__(self):
        return self.disjoint


def row_disjointness(phi: MatrixFunctionSystem) -> RowDisjointness:
    for i in range(phi.m):
        row = phi.entries[i]
        for j in range(phi.m):
            cell = set(row[j])
            for jj in range(j + 1, phi.m):
                shared = cell.intersection(row[jj])
                if shared:
                    return RowDisjointness(False, (i, j, jj, min(shared)))
    return RowDisjointness(True)


# -- nonperiodicity evidence -------------------------------------------------


def dense(patch: Patch) -> Tuple[np.ndarray, Point]:
    """Colour array over the bounding box of ``patch`` (-1 marks holes)."""
    lo, hi = patch.bounds()
    shape = tuple(h - l + 1 for l, h in zip(lo, hi))
    arr = np.full(shape, -1, dtype=np.int64)
    pts = np.array(list(patch.points.keys()), dtype=np.int64).reshape(-1, patch.dim)
    cols = np.fromiter(patch.points.values(), dtype=np.int64, count=len(patch))
    arr[tuple((pts - np.array(lo)).T)] = cols
    return arr, lo


def _period_vectors(d: int, radius: int):
    for p in itertools.product(range(-radius, radius + 1), repeat=d):
        nz = [c for c in p if c]
        if nz and nz[0] > 0:
            yield p


def scan_periods(patch: Patch, radius: int) -> List[Point]:
    """Vectors p != 0, |p|_inf <= radius (one per +-pair), leaving the patch invariant.

    Invariance is tested on the overlap of the patch with its translate;
    an empty overlap never counts as a period.
    """
    arr, _ = dense(patch)
    found = []
    for p in _period_vectors(patch.dim, radius):
        src, dst = [], []
        ok = True
        for c, n in zip(p, arr.shape):
            if abs(c) >= n:
                ok = False
                break
            if c >= 0:
                src.append(slice(0, n - c))
                dst.append(slice(c, n))
            else:
                src.append(slice(-c, n))
                dst.append(slice(0, n + c))
        if not ok:
            continue
        a, b = arr[tuple(src)], arr[tuple(dst)]
        mask = (a >= 0) & (b >= 0)
        if mask.any() and np.array_equal(a[mask], b[mask]):
            found.append(tuple(p))
    return found


@dataclass(frozen=True)
class NonperiodicityEvidence:
    basis: str  # "scan" | "assumed"
    radius: int = 0
    window: int = 0  # side length of the scanned block
    periods: Tuple[Point, ...] = ()

    @property
    def nonperiodic(self) -> bool:
        return self.basis == "assumed" or not self.periods


def nonperiodicity_scan(phi: MatrixFunctionSystem, seed: Seed, radius: int = DEFAULT_SCAN_RADIUS,
                        budget: int = DEFAULT_BUDGET) -> NonperiodicityEvidence:
    target = max(4 * radius, 16)
    patch = None
    for n, p in generate_levels(phi, seed, budget):
        patch = p
        if phi.expansion ** (seed.level * n) >= target:
            break
    if patch is None:
        raise BudgetExceeded("budget too small for a single level of the fixed point")
    lo, hi = patch.bounds()
    window = min(h - l + 1 for l, h in zip(lo, hi))
    return NonperiodicityEvidence("scan", radius, window, tuple(scan_periods(patch, radius)))


# -- colour classes and L' ---------------------------------------------------


@dataclass(frozen=True)
class ColorCosetData:
    lattices: Tuple[IntegerLattice, ...]  # L_i = <V_i - V_i>
    lattice_sum: IntegerLattice  # L'
    representatives: Tuple[Point, ...]  # V_j in c_j + L'
    level: int  # patch level at which the data stabilised
    points_checked: int = 0
    violations_seen: int = 0


def _coset_data(patch: Patch, m: int):
    first: List[Optional[Point]] = [None] * m
    accs = [LatticeAccumulator(patch.dim) for _ in range(m)]
    for x, c in patch.points.items():
        if first[c] is None:
            first[c] = x
        else:
            accs[c].add(sub(x, first[c]))
    lats = [acc.lattice for acc in accs]
    if any(l is None for l in lats):
        return None
    total = lats[0]
    for l in lats[1:]:
        total = lattice_sum(total, l)
    reps = tuple(residue(x, total) for x in first)
    return tuple(lats), total, reps


def compute_color_cosets(phi: MatrixFunctionSystem, seed: Seed,
                         budget: int = DEFAULT_BUDGET,
                         stable_levels: int = 2) -> ColorCosetData:
    """Estimate L_i, L' and the coset representatives from fixed-point patches.

    The patch level grows until the data is unchanged over ``stable_levels``
    consecutive levels.  Each new level is also checked point by point
    against the previous estimate; a point outside its colour's coset means
    L' was under-approximated, and the search simply continues.
    """
    history = []
    violations = 0
    last = None
    for n, patch in generate_levels(phi, seed, budget):
        if last is not None:
            _, lp, reps = last
            for x, c in patch.points.items():
                if residue(sub(x, reps[c]), lp) != (0,) * phi.dim:
                    violations += 1
        data = _coset_data(patch, phi.m)
        history.append(data)
        last = data
        if (data is not None and len(history) >= stable_levels
                and all(h == data for h in history[-stable_levels:])):
            lats, total, reps = data
            return ColorCosetData(lats, total, reps, n, len(patch), violations)
    raise CosetError(
        f"colour lattices did not stabilise within the point budget ({budget}); "
        f"levels tried: {len(history)}, coset violations seen: {violations}, "
        f"last estimate: {'incomplete' if last is None else str(last[1])}")


# -- modular coincidence -----------------------------------------------------


@dataclass(frozen=True)
class Coincidence:
    k: int
    residue: Point
    row: int
    modulus: IntegerLattice  # q^k L'
    method: str  # "common-element" | "residue-grouping"


@dataclass(frozen=True)
class CoincidenceSearch:
    found: Optional[Coincidence]
    bound: int

    def __bool__(self):
        return self.found is not None


def coincidence_key(f: AffineLatticeMap, rep: Point, modulus: IntegerLattice) -> Point:
    """Residue of f(c_j) modulo Q L' for the colour-j coset representative c_j."""
    return residue(add(scale(f.expansion, rep), f.translation), modulus)


def _fiber_rows(pk: MatrixFunctionSystem, reps, modulus, key) -> set:
    rows = set()
    for j in range(pk.m):
        for i, f in pk.column(j):
            if coincidence_key(f, reps[j], modulus) == key:
                rows.add(i)
                if len(rows) > 1:
                    return rows
    return rows


def _common_element_candidates(pk: MatrixFunctionSystem, reps, modulus):
    for i in range(pk.m):
        cells = [set(c) for c in pk.entries[i]]
        common = set.intersection(*cells) if cells else set()
        for f in sorted(common):
            for j in range(pk.m):
                yield i, coincidence_key(f, reps[j], modulus)


def find_coincidence_at(pk: MatrixFunctionSystem, cosets: ColorCosetData,
                        k: int) -> Optional[Coincidence]:
    modulus = scale_lattice(cosets.lattice_sum, pk.expansion)
    reps = cosets.representatives
    # cheap pass: a map shared by every entry of one row
    for i, key in _common_element_candidates(pk, reps, modulus):
        if _fiber_rows(pk, reps, modulus, key) == {i}:
            return Coincidence(k, key, i, modulus, "common-element")
    fibers: Dict[Point, set] = {}
    for j in range(pk.m):
        for i, f in pk.column(j):
            fibers.setdefault(coincidence_key(f, reps[j], modulus), set()).add(i)
    single = sorted(key for key, rows in fibers.items() if len(rows) == 1)
    if single:
        key = single[0]
        return Coincidence(k, key, next(iter(fibers[key])), modulus, "residue-grouping")
    return None


def modular_coincidence(phi: MatrixFunctionSystem, cosets: ColorCosetData,
                        max_k: int = DEFAULT_MAX_K) -> CoincidenceSearch:
    """Search phi, phi^2, ..., phi^max_k for a modular coincidence (smallest k wins)."""
    for k, pk in enumerate(powers(phi), start=1):
        if k > max_k:
            break
        hit = find_coincidence_at(pk, cosets, k)
        if hit is not None:
            return CoincidenceSearch(hit, max_k)
    return CoincidenceSearch(None, max_k)


# -- the pipeline ------------------------------------------------------------


class Outcome(enum.Enum):
    MODEL_SET = "MODEL_SET"
    NOT_MODEL_SET = "NOT_MODEL_SET"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class RowDisjointnessWitness:
    primitivity_exponent: int
    nonperiodicity: NonperiodicityEvidence


@dataclass(frozen=True)
class BoundReached:
    reason: str
    bound: Optional[int] = None


@dataclass(frozen=True)
class AnalysisOptions:
    max_k: int = DEFAULT_MAX_K
    seed_bound: int = DEFAULT_SEED_BOUND
    budget: int = DEFAULT_BUDGET
    assume_nonperiodic: bool = False
    period_scan_radius: int = DEFAULT_SCAN_RADIUS
    # also run the coincidence search when row disjointness already decided
    cross_check: bool = False


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    witness: object
    validation: ValidationReport
    primitivity: Primitivity
    seed: Optional[Seed] = None
    nonperiodicity: Optional[NonperiodicityEvidence] = None
    row_disjointness: Optional[RowDisjointness] = None
    cosets: Optional[ColorCosetData] = None
    search: Optional[CoincidenceSearch] = None

    def __post_init__(self):
        expected = {
            Outcome.MODEL_SET: (Coincidence,),
            Outcome.NOT_MODEL_SET: (RowDisjointnessWitness,) + _sequence_witness_types(),
            Outcome.UNKNOWN: (BoundReached,),
        }[self.outcome]
        if not isinstance(self.witness, expected):
            raise TypeError(f"{type(self.witness).__name__} cannot witness {self.outcome.value}")


def _sequence_witness_types():
    from .sequences import ExclusionReport
    return (ExclusionReport,)


def analyze(phi: MatrixFunctionSystem, options: AnalysisOptions = AnalysisOptions()) -> Verdict:
    if phi.partial:
        raise InvalidSystem("cannot analyse a fragment: some columns are unspecified")
    report = phi.validation
    if not report.ok:
        raise InvalidSystem(f"invalid matrix function system: {report}", report)

    prim = is_primitive(inflation_matrix(phi))
    if not prim:
        return Verdict(Outcome.UNKNOWN,
                       BoundReached(f"inflation matrix is not primitive (checked up to power {prim.bound})",
                                    prim.bound),
                       report, prim)

    seed = find_seed(phi, options.seed_bound)
    if options.assume_nonperiodic:
        evidence = NonperiodicityEvidence("assumed")
    else:
        evidence = nonperiodicity_scan(phi, seed, options.period_scan_radius, options.budget)
    rd = row_disjointness(phi)

    if rd and evidence.nonperiodic:
        search = None
        if options.cross_check:
            cosets = compute_color_cosets(phi, seed, options.budget)
            search = modular_coincidence(phi, cosets, options.max_k)
            assert not search, (
                "row disjointness and a modular coincidence both hold: "
                f"{search.found}")
        return Verdict(Outcome.NOT_MODEL_SET,
                       RowDisjointnessWitness(prim.exponent, evidence),
                       report, prim, seed, evidence, rd, search=search)

    cosets = compute_color_cosets(phi, seed, options.budget)
    search = modular_coincidence(phi, cosets, options.max_k)
    if search:
        return Verdict(Outcome.MODEL_SET, search.found, report, prim, seed, evidence, rd,
                       cosets, search)
    return Verdict(Outcome.UNKNOWN,
                   BoundReached(f"no modular coincidence up to k={options.max_k}", options.max_k),
                   report, prim, seed, evidence, rd, cosets, search)
