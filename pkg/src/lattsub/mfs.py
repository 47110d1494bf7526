"""Matrix function systems: the substitution rule of a lattice substitution system.

Entry ``(i, j)`` holds the maps that send a point of colour ``j`` to the
points of colour ``i`` it produces, so rows are produced colours and
columns are consumed colours.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

from .lattice import AffineLatticeMap, Point, compose_maps

Matrix = Tuple[Tuple[int, ...], ...]


class MFSError(ValueError):
    """Structurally malformed matrix function system."""


@dataclass(frozen=True)
class MatrixFunctionSystem:
    dim: int
    factor: int
    colors: Tuple[str, ...]
    entries: Tuple[Tuple[Tuple[AffineLatticeMap, ...], ...], ...]
    level: int = 1
    # a fragment: columns without any map are unspecified rather than empty
    partial: bool = False

    def __post_init__(self):
        m = len(self.colors)
        if self.dim < 1:
            raise MFSError(f"dimension must be >= 1, got {self.dim}")
        if self.factor < 2:
            raise MFSError(f"factor must be >= 2, got {self.factor}")
        if self.level < 1:
            raise MFSError(f"level must be >= 1, got {self.level}")
        if m < 1:
            raise MFSError("at least one colour is required")
        if len(set(self.colors)) != m:
            raise MFSError("colour names must be distinct")
        if len(self.entries) != m or any(len(row) != m for row in self.entries):
            raise MFSError(f"entries must form a {m}x{m} array")
        q = self.expansion
        canon = []
        for i, row in enumerate(self.entries):
            crow = []
            for j, cell in enumerate(row):
                cell = tuple(sorted(cell, key=lambda f: f.translation))
                for f in cell:
                    if f.expansion != q:
                        raise MFSError(
                            f"map {f} in entry ({self.colors[i]}, {self.colors[j]}) "
                            f"has expansion {f.expansion}, expected {q}")
                    if f.dim != self.dim:
                        raise MFSError(f"map {f} is not on Z^{self.dim}")
                for f, g in zip(cell, cell[1:]):
                    if f == g:
                        raise MFSError(
                            f"duplicate map {f} in entry ({self.colors[i]}, {self.colors[j]})")
                crow.append(cell)
            canon.append(tuple(crow))
        object.__setattr__(self, "entries", tuple(canon))

    @classmethod
    def from_translations(cls, dim, factor, colors, cells, level=1, partial=False):
        """Build from ``{(row_colour, col_colour): [translation, ...]}``."""
        colors = tuple(colors)
        idx = {c: k for k, c in enumerate(colors)}
        m = len(colors)
        grid = [[[] for _ in range(m)] for _ in range(m)]
        q = factor ** level
        for (ri, cj), ts in cells.items():
            for t in ts:
                t = (t,) if isinstance(t, int) else tuple(t)
                grid[idx[ri]][idx[cj]].append(AffineLatticeMap(q, t))
        return cls(dim, factor, colors,
                   tuple(tuple(tuple(c) for c in row) for row in grid),
                   level, partial)

    @property
    def m(self) -> int:
        return len(self.colors)

    @property
    def expansion(self) -> int:
        return self.factor ** self.level

    def color_index(self, name: str) -> int:
        try:
            return self.colors.index(name)
        except ValueError:
            raise KeyError(f"unknown colour {name!r}") from None

    def entry(self, i: int, j: int) -> Tuple[AffineLatticeMap, ...]:
        return self.entries[i][j]

    def column(self, j: int) -> List[Tuple[int, AffineLatticeMap]]:
        """All (row, map) pairs of column ``j``."""
        return [(i, f) for i in range(self.m) for f in self.entries[i][j]]

    def specified_columns(self) -> List[int]:
        if not self.partial:
            return list(range(self.m))
        return [j for j in range(self.m) if any(self.entries[i][j] for i in range(self.m))]

    @cached_property
    def validation(self) -> "ValidationReport":
        return validate_block_structure(self)


# -- block structure ---------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    column: str
    kind: str  # "missing" | "duplicate" | "out_of_range"
    translation: Point

    def __str__(self):
        t = self.translation
        t = str(t[0]) if len(t) == 1 else "(" + ",".join(map(str, t)) + ")"
        return f"column {self.column}: {self.kind.replace('_', ' ')} residue {t}"


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()
    unspecified: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "valid"
        return "; ".join(map(str, self.violations))


def block(side: int, d: int):
    """Lattice points of {0, ..., side-1}^d in lexicographic order."""
    return itertools.product(range(side), repeat=d)


def validate_block_structure(phi: MatrixFunctionSystem) -> ValidationReport:
    """Check that every column maps a point onto exactly one full block.

    The translations of column ``j`` (over all rows) must be each element of
    ``{0, ..., Q-1}^d`` exactly once, ``Q = factor**level``.
    """
    side = phi.expansion
    found: List[Violation] = []
    specified = set(phi.specified_columns())
    for j in range(phi.m):
        if j not in specified:
            continue
        name = phi.colors[j]
        seen = set()
        for _, f in phi.column(j):
            t = f.translation
            if any(c < 0 or c >= side for c in t):
                found.append(Violation(name, "out_of_range", t))
            elif t in seen:
                found.append(Violation(name, "duplicate", t))
            seen.add(t)
        for t in block(side, phi.dim):
            if t not in seen:
                found.append(Violation(name, "missing", t))
    unspecified = tuple(phi.colors[j] for j in range(phi.m) if j not in specified)
    return ValidationReport(tuple(found), unspecified)


# -- inflation matrix and primitivity ----------------------------------------


def inflation_matrix(phi: MatrixFunctionSystem) -> Matrix:
    return tuple(tuple(len(cell) for cell in row) for row in phi.entries)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b)) if b else []
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def matrix_power(a: Matrix, k: int) -> Matrix:
    if k < 0:
        raise ValueError("negative exponent")
    n = len(a)
    result: Matrix = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    base = a
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result


@dataclass(frozen=True)
class Primitivity:
    primitive: bool
    exponent: Optional[int]
    bound: int

    def __bool__(self):
        return self.primitive


def is_primitive(a: Matrix) -> Primitivity:
    """Least k <= (m-1)^2 + 1 with a^k strictly positive, if any (Wielandt)."""
    m = len(a)
    bound = (m - 1) ** 2 + 1
    # only the zero pattern matters; keep entries boolean-sized
    pattern = tuple(tuple(int(x > 0) for x in row) for row in a)
    cur = pattern
    for k in range(1, bound + 1):
        if all(x > 0 for row in cur for x in row):
            return Primitivity(True, k, bound)
        cur = tuple(tuple(int(x > 0) for x in row) for row in matmul(cur, pattern))
    return Primitivity(False, None, bound)


# -- powers ------------------------------------------------------------------


def compose_systems(outer: MatrixFunctionSystem,
                    inner: MatrixFunctionSystem) -> MatrixFunctionSystem:
    """Substitute with ``inner`` first, then ``outer``.

    ``(outer . inner)_ij = U_l { f o g : f in outer_il, g in inner_lj }``.
    """
    if (outer.dim, outer.factor, outer.colors) != (inner.dim, inner.factor, inner.colors):
        raise MFSError("systems differ in dimension, factor or colours")
    m = outer.m
    out = []
    for i in range(m):
        row = []
        for j in range(m):
            cell = set()
            for l in range(m):
                for g in inner.entries[l][j]:
                    for f in outer.entries[i][l]:
                        cell.add(compose_maps(f, g))
            row.append(tuple(cell))
        out.append(tuple(row))
    return MatrixFunctionSystem(outer.dim, outer.factor, outer.colors, tuple(out),
                                outer.level + inner.level, outer.partial or inner.partial)


def power(phi: MatrixFunctionSystem, k: int) -> MatrixFunctionSystem:
    """The k-times applied substitution."""
    if k < 1:
        raise ValueError(f"power must be >= 1, got {k}")
    result = phi
    for _ in range(k - 1):
        result = compose_systems(result, phi)
    return result


def powers(phi: MatrixFunctionSystem):
    """Yield phi, phi^2, phi^3, ... (each built from the previous one)."""
    cur = phi
    while True:
        yield cur
        cur = compose_systems(cur, phi)


def with_entries(phi: MatrixFunctionSystem, entries: Sequence) -> MatrixFunctionSystem:
    return MatrixFunctionSystem(phi.dim, phi.factor, phi.colors,
                                tuple(tuple(tuple(c) for c in row) for row in entries),
                                phi.level, phi.partial)
