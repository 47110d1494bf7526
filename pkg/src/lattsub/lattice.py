"""Exact integer algebra on Z^d: points, affine maps x -> Qx + t, sublattices.

Lattices are kept in column Hermite normal form: the basis matrix B
(columns are basis vectors) is lower triangular with a positive diagonal,
and every entry left of the diagonal is reduced into ``[0, B[r][r])``.
Two lattices are equal iff their HNF bases are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

Point = Tuple[int, ...]


class LatticeError(ValueError):
    pass


class DimensionError(LatticeError):
    pass


class RankError(LatticeError):
    """Generators do not span a full-rank sublattice."""


def as_point(coords: Iterable[int]) -> Point:
    pt = tuple(coords)
    for c in pt:
        if isinstance(c, bool) or not isinstance(c, int):
            raise TypeError(f"lattice coordinates must be integers, got {c!r}")
    return pt


def _check_dims(*points: Sequence[int]) -> int:
    d = len(points[0])
    for p in points[1:]:
        if len(p) != d:
            raise DimensionError(f"dimension mismatch: {len(p)} != {d}")
    return d


def add(x: Point, y: Point) -> Point:
    _check_dims(x, y)
    return tuple(a + b for a, b in zip(x, y))


def sub(x: Point, y: Point) -> Point:
    _check_dims(x, y)
    return tuple(a - b for a, b in zip(x, y))


def scale(s: int, x: Point) -> Point:
    return tuple(s * a for a in x)


def zero(d: int) -> Point:
    return (0,) * d


@dataclass(frozen=True, order=True)
class AffineLatticeMap:
    """The map x -> expansion * x + translation on Z^d."""

    expansion: int
    translation: Point

    def __post_init__(self):
        if isinstance(self.expansion, bool) or not isinstance(self.expansion, int):
            raise TypeError("expansion must be an integer")
        if self.expansion < 2:
            raise ValueError(f"expansion must be >= 2, got {self.expansion}")
        object.__setattr__(self, "translation", as_point(self.translation))
        if not self.translation:
            raise ValueError("translation must have dimension >= 1")

    @property
    def dim(self) -> int:
        return len(self.translation)

    def __call__(self, x: Point) -> Point:
        return apply_map(self, x)

    def __str__(self):
        t = self.translation
        t = str(t[0]) if len(t) == 1 else "(" + ",".join(map(str, t)) + ")"
        return f"{self.expansion}x+{t}"


def apply_map(f: AffineLatticeMap, x: Point) -> Point:
    if len(x) != f.dim:
        raise DimensionError(f"point of dimension {len(x)} given to map on Z^{f.dim}")
    q = f.expansion
    return tuple(q * a + b for a, b in zip(x, f.translation))


def compose_maps(outer: AffineLatticeMap, inner: AffineLatticeMap) -> AffineLatticeMap:
    """Return ``outer o inner``: x -> Qo (Qi x + ti) + to."""
    if outer.dim != inner.dim:
        raise DimensionError(f"cannot compose maps on Z^{outer.dim} and Z^{inner.dim}")
    return AffineLatticeMap(
        outer.expansion * inner.expansion,
        apply_map(outer, inner.translation),
    )


# -- Hermite normal form -----------------------------------------------------


def _echelon(vectors: Iterable[Sequence[int]], d: int) -> list:
    """Reduced echelon rows (as lists) of the Z-span of ``vectors``.

    Row ``k`` of the result has its pivot at some position ``p_k``
    (strictly increasing), positive pivot, and the entries of the other
    rows at ``p_k`` lie in ``[0, pivot)``.  Zero rows are dropped, so the
    length of the result is the rank.
    """
    rows = [list(v) for v in vectors if any(v)]
    for v in rows:
        if len(v) != d:
            raise DimensionError(f"generator of dimension {len(v)} in Z^{d}")
    done = []
    for col in range(d):
        active = [r for r in rows if r[col] != 0]
        if not active:
            continue
        rest = [r for r in rows if r[col] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            piv = active[0]
            nxt = [piv]
            for r in active[1:]:
                f = r[col] // piv[col]
                if f:
                    for c in range(col, d):
                        r[c] -= f * piv[c]
                (nxt if r[col] != 0 else rest).append(r)
            active = nxt
        piv = active[0]
        if piv[col] < 0:
            piv[:] = [-a for a in piv]
        done.append((col, piv))
        rows = [r for r in rest if any(r)]
    # reduce entries above each pivot
    for k, (col, piv) in enumerate(done):
        for _, other in done[:k]:
            f = other[col] // piv[col]
            if f:
                for c in range(col, d):
                    other[c] -= f * piv[c]
    return [piv for _, piv in done]


@dataclass(frozen=True)
class IntegerLattice:
    """Full-rank sublattice of Z^d; ``basis`` holds the HNF columns."""

    basis: Tuple[Point, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def columns(self) -> Tuple[Point, ...]:
        return self.basis

    @property
    def diagonal(self) -> Point:
        return tuple(b[i] for i, b in enumerate(self.basis))

    @property
    def determinant(self) -> int:
        det = 1
        for v in self.diagonal:
            det *= v
        return det

    def __contains__(self, x) -> bool:
        return not any(residue(tuple(x), self))

    def __str__(self):
        return " ".join("(" + ",".join(map(str, b)) + ")" for b in self.basis)


def hnf(generators: Iterable[Sequence[int]], dim: int | None = None) -> IntegerLattice:
    """Canonical basis of the subgroup of Z^d generated by ``generators``.

    Raises RankError when the span is not full rank.
    """
    gens = [tuple(g) for g in generators]
    if dim is None:
        if not gens:
            raise RankError("no generators and no dimension given")
        dim = len(gens[0])
    rows = _echelon(gens, dim)
    if len(rows) < dim:
        raise RankError(f"generators span a rank-{len(rows)} subgroup of Z^{dim}")
    return IntegerLattice(tuple(tuple(r) for r in rows))


def standard_lattice(d: int) -> IntegerLattice:
    return IntegerLattice(tuple(tuple(int(i == j) for i in range(d)) for j in range(d)))


def lattice_sum(a: IntegerLattice, b: IntegerLattice) -> IntegerLattice:
    if a.dim != b.dim:
        raise DimensionError(f"cannot add lattices in Z^{a.dim} and Z^{b.dim}")
    return hnf(a.basis + b.basis, a.dim)


def residue(x: Point, m: IntegerLattice) -> Point:
    """Canonical representative of ``x + m``; coordinate i lies in [0, diag_i)."""
    if len(x) != m.dim:
        raise DimensionError(f"point of dimension {len(x)} reduced modulo lattice in Z^{m.dim}")
    x = list(x)
    for i, col in enumerate(m.basis):
        f = x[i] // col[i]
        if f:
            for c in range(i, len(x)):
                x[c] -= f * col[c]
    return tuple(x)


def scale_lattice(m: IntegerLattice, s: int) -> IntegerLattice:
    if s < 1:
        raise ValueError(f"scale factor must be >= 1, got {s}")
    return IntegerLattice(tuple(scale(s, b) for b in m.basis))


class LatticeAccumulator:
    """Grows the Z-span of a stream of vectors without storing all of them.

    Vectors already in the current span are skipped with a cheap residue
    test once the span is full rank.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: list = []
        self._lattice: IntegerLattice | None = None

    def add(self, v: Sequence[int]) -> bool:
        """Add ``v``; return True if the span grew."""
        if not any(v):
            return False
        if self._lattice is not None and not any(residue(tuple(v), self._lattice)):
            return False
        rows = _echelon(self._rows + [list(v)], self.dim)
        if rows == self._rows:
            return False
        self._rows = rows
        if len(rows) == self.dim:
            self._lattice = IntegerLattice(tuple(tuple(r) for r in rows))
        return True

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def lattice(self) -> IntegerLattice | None:
        """The span if it is full rank, else None."""
        return self._lattice
