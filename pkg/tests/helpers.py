"""Shared fixtures: the bundled corpus, random systems and independent oracles."""

import itertools
import random
from importlib import resources

from lattsub.lssformat import load_system
from lattsub.mfs import MatrixFunctionSystem

# criterion number -> "PASS ..."/"FAIL ..." line, printed at the end of the run
ACCEPTANCE = {}

CORPUS = ["thue_morse", "period_doubling", "aba_bab", "rudin_shapiro", "table"]
FRAGMENTS = ["box_fragment"]


def corpus_path(name):
    return str(resources.files("lattsub") / "data" / f"{name}.lss")


def corpus(name) -> MatrixFunctionSystem:
    return load_system(corpus_path(name))


def random_system(rng: random.Random, row_disjoint=False, dims=(1, 2),
                  max_colors=4) -> MatrixFunctionSystem:
    """A random system with the exact-cover block structure.

    With ``row_disjoint`` every translation is sent to pairwise different
    rows by the different columns, which makes each row's entries disjoint.
    """
    d = rng.choice(dims)
    q = rng.choice((2, 3)) if d == 1 else 2
    m = rng.randint(1, max_colors)
    colors = [f"c{i}" for i in range(m)]
    cells = {}
    for t in itertools.product(range(q), repeat=d):
        if row_disjoint:
            rows = list(range(m))
            rng.shuffle(rows)
        else:
            rows = [rng.randrange(m) for _ in range(m)]
        for j, i in enumerate(rows):
            cells.setdefault((colors[i], colors[j]), []).append(t)
    return MatrixFunctionSystem.from_translations(d, q, colors, cells)


def random_systems(seed, count, **kw):
    rng = random.Random(seed)
    return [random_system(rng, **kw) for _ in range(count)]


def rewrite(rules, word, k):
    """Iterate a constant-length word substitution ``k`` times (1-D oracle)."""
    for _ in range(k):
        word = [c for letter in word for c in rules[letter]]
    return word


def thue_morse_word(n):
    """t(i) = parity of the binary digit sum of i."""
    return [bin(i).count("1") % 2 for i in range(n)]


def brute_span(generators, box, coeff_range):
    """Integer combinations of ``generators`` that land in ``box`` (a set of points)."""
    d = len(generators[0])
    found = set()
    for coeffs in itertools.product(range(-coeff_range, coeff_range + 1), repeat=len(generators)):
        p = tuple(sum(c * g[k] for c, g in zip(coeffs, generators)) for k in range(d))
        if p in box:
            found.add(p)
    return found
