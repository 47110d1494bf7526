"""Superelements and fixed-point patches of a substitution Delone multiset."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, Mapping, Optional, Tuple

from .lattice import Point, apply_map, zero
from .mfs import MatrixFunctionSystem, power, powers

DEFAULT_BUDGET = 10 ** 7
DEFAULT_SEED_BOUND = 8


class BudgetExceeded(RuntimeError):
    pass


class OverlapError(AssertionError):
    """Two maps produced the same point with different colours."""


class NoSeedError(LookupError):
    pass


@dataclass(frozen=True)
class Patch:
    """A finite coloured point set: lattice point -> colour index."""

    dim: int
    points: Mapping[Point, int]
    seed_color: Optional[int] = field(default=None, compare=False)
    iterations: int = field(default=0, compare=False)

    def __len__(self):
        return len(self.points)

    def __contains__(self, x):
        return x in self.points

    def __getitem__(self, x: Point) -> int:
        return self.points[x]

    def get(self, x: Point, default=None):
        return self.points.get(x, default)

    def items(self) -> Iterator[Tuple[Point, int]]:
        """Points in lexicographic order."""
        for x in sorted(self.points):
            yield x, self.points[x]

    def support(self) -> frozenset:
        return frozenset(self.points)

    def census(self, m: int) -> Tuple[int, ...]:
        counts = [0] * m
        for c in self.points.values():
            counts[c] += 1
        return tuple(counts)

    def bounds(self) -> Tuple[Point, Point]:
        """Componentwise minimum and maximum of the support."""
        if not self.points:
            raise ValueError("empty patch has no bounds")
        lo = tuple(min(c) for c in zip(*self.points))
        hi = tuple(max(c) for c in zip(*self.points))
        return lo, hi

    def restrict(self, pred) -> "Patch":
        return Patch(self.dim, {x: c for x, c in self.points.items() if pred(x)},
                     self.seed_color, self.iterations)


def single(dim: int, color: int, at: Optional[Point] = None) -> Patch:
    return Patch(dim, {zero(dim) if at is None else at: color}, color, 0)


def substitute(phi: MatrixFunctionSystem, p: Patch) -> Patch:
    """Apply the substitution once: (x, j) -> {(f(x), i) : f in phi_ij}.

    Points whose colour has an unspecified column (fragments) vanish.
    """
    cols = [phi.column(j) for j in range(phi.m)]
    out: Dict[Point, int] = {}
    for x, j in p.points.items():
        for i, f in cols[j]:
            y = apply_map(f, x)
            prev = out.get(y)
            if prev is not None and prev != i:
                raise OverlapError(
                    f"point {y} receives colours {phi.colors[prev]} and {phi.colors[i]}")
            out[y] = i
    return Patch(p.dim, out, p.seed_color, p.iterations + 1)


def _check_budget(phi: MatrixFunctionSystem, k: int, budget: int):
    size = phi.expansion ** (k * phi.dim)
    if size > budget:
        raise BudgetExceeded(
            f"{size} points requested (factor {phi.expansion}, {k} iterations, "
            f"d={phi.dim}) exceeds the budget of {budget}")


def superelement(phi: MatrixFunctionSystem, color: int, k: int,
                 budget: int = DEFAULT_BUDGET) -> Patch:
    """phi^k applied to the single point (0, color)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    _check_budget(phi, k, budget)
    p = single(phi.dim, color)
    for _ in range(k):
        p = substitute(phi, p)
    return p


@dataclass(frozen=True)
class Seed:
    color: int
    level: int


def find_seed(phi: MatrixFunctionSystem, bound: int = DEFAULT_SEED_BOUND) -> Seed:
    """Least level k (then least colour i) with x -> Qx in (phi^k)_ii."""
    origin = zero(phi.dim)
    for k, pk in enumerate(powers(phi), start=1):
        if k > bound:
            break
        for i in range(phi.m):
            if any(f.translation == origin for f in pk.entries[i][i]):
                return Seed(i, k)
    raise NoSeedError(f"no seed within bound {bound}")


def generate(phi: MatrixFunctionSystem, seed: Seed, n: int,
             budget: int = DEFAULT_BUDGET) -> Patch:
    """Level-n patch of the corner fixed point anchored by ``seed``."""
    if n < 1:
        raise ValueError("iterations must be >= 1")
    return superelement(power(phi, seed.level), seed.color, n, budget)


def generate_levels(phi: MatrixFunctionSystem, seed: Seed,
                    budget: int = DEFAULT_BUDGET) -> Iterator[Tuple[int, Patch]]:
    """Yield (n, generate(phi, seed, n)) for n = 1, 2, ... until the budget stops it."""
    step = power(phi, seed.level)
    p = single(phi.dim, seed.color)
    n = 0
    while True:
        n += 1
        if step.expansion ** (n * phi.dim) > budget:
            return
        p = substitute(step, p)
        yield n, p
