"""Reading and writing ``.lss`` system files.

Line oriented, ``#`` starts a comment, tokens are whitespace separated::

    dim 1
    factor 2
    colors a b
    map a <- a : 0
    map b <- a : 1

``dim``, ``factor`` and ``colors`` must precede the first ``map``; map
lines may come in any order.  ``map i <- j : t`` puts x -> q*x + t into
entry (i, j), i.e. a point of colour j produces a point of colour i.
The extra directive ``partial`` marks a fragment whose map-less columns
are unspecified.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

from .lattice import Point
from .mfs import MatrixFunctionSystem, MFSError


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass
class SystemFile:
    dim: int
    factor: int
    colors: Tuple[str, ...]
    maps: List[Tuple[str, str, Point]] = field(default_factory=list)
    partial: bool = False

    def to_system(self) -> MatrixFunctionSystem:
        cells = {}
        for row, col, t in self.maps:
            cells.setdefault((row, col), []).append(t)
        return MatrixFunctionSystem.from_translations(
            self.dim, self.factor, self.colors, cells, partial=self.partial)


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"{what} must be an integer, got {tok!r}") from None


def parse_file(text: str) -> SystemFile:
    dim = factor = None
    colors = None
    partial = False
    maps = []
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "dim":
            if dim is not None:
                raise ParseError(lineno, "dim declared twice")
            if len(rest) != 1:
                raise ParseError(lineno, "expected 'dim <d>'")
            dim = _int(rest[0], lineno, "dimension")
            if dim < 1:
                raise ParseError(lineno, "dimension must be >= 1")
        elif head == "factor":
            if factor is not None:
                raise ParseError(lineno, "factor declared twice")
            if len(rest) != 1:
                raise ParseError(lineno, "expected 'factor <q>'")
            factor = _int(rest[0], lineno, "factor")
            if factor < 2:
                raise ParseError(lineno, "factor must be an integer >= 2")
        elif head == "colors":
            if colors is not None:
                raise ParseError(lineno, "colors declared twice")
            if not rest:
                raise ParseError(lineno, "expected at least one colour name")
            if len(set(rest)) != len(rest):
                raise ParseError(lineno, "colour names must be distinct")
            colors = tuple(rest)
        elif head == "partial":
            if rest:
                raise ParseError(lineno, "'partial' takes no arguments")
            partial = True
        elif head == "map":
            if dim is None or factor is None or colors is None:
                raise ParseError(lineno, "dim, factor and colors must precede the first map")
            if len(rest) < 4 or rest[1] != "<-" or rest[3] != ":":
                raise ParseError(lineno, "expected 'map <row> <- <col> : <t1> ... <td>'")
            row, col, coords = rest[0], rest[2], rest[4:]
            for c in (row, col):
                if c not in colors:
                    raise ParseError(lineno, f"unknown colour {c!r}")
            if len(coords) != dim:
                raise ParseError(lineno, f"translation has {len(coords)} coordinates, expected {dim}")
            t = tuple(_int(c, lineno, "translation coordinate") for c in coords)
            key = (row, col, t)
            if key in seen:
                raise ParseError(lineno, f"duplicate map declaration (first on line {seen[key]})")
            seen[key] = lineno
            maps.append(key)
        else:
            raise ParseError(lineno, f"unknown directive {head!r}")
    for name, val in (("dim", dim), ("factor", factor), ("colors", colors)):
        if val is None:
            raise ParseError(0, f"missing '{name}' declaration")
    return SystemFile(dim, factor, colors, maps, partial)


def parse_system(text: str) -> MatrixFunctionSystem:
    """Parse ``.lss`` text; the block-structure report is available as ``.validation``."""
    try:
        return parse_file(text).to_system()
    except MFSError as exc:
        raise ParseError(0, str(exc)) from None


def load_system(path) -> MatrixFunctionSystem:
    with open(path, encoding="utf-8") as fh:
        return parse_system(fh.read())


def format_system(phi: MatrixFunctionSystem) -> str:
    """Canonical text: header, then maps by column, row and translation."""
    if phi.level != 1:
        raise ValueError("only level-1 systems have a file representation")
    lines = [f"dim {phi.dim}", f"factor {phi.factor}", "colors " + " ".join(phi.colors)]
    if phi.partial:
        lines.append("partial")
    for j in range(phi.m):
        for i in range(phi.m):
            for f in phi.entries[i][j]:
                t = " ".join(map(str, f.translation))
                lines.append(f"map {phi.colors[i]} <- {phi.colors[j]} : {t}")
    return "\n".join(lines) + "\n"
