"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
All checks are exact; runtimes are wall-clock limits.
"""

import itertools
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np

from helpers import ACCEPTANCE, CORPUS, corpus, corpus_path, random_system
from lattsub.coincidence import (
    AnalysisOptions,
    Outcome,
    RowDisjointnessWitness,
    analyze,
    compute_color_cosets,
    modular_coincidence,
    row_disjointness,
    sqcap,
)
from lattsub.lattice import IntegerLattice, hnf, lattice_sum, residue
from lattsub.mfs import inflation_matrix, is_primitive, power, validate_block_structure
from lattsub.patch import Seed, find_seed, generate, substitute, superelement
from lattsub.sequences import (
    SequenceWitness,
    check_witness_conditions,
    exclusion_report,
    find_sequences,
)

MIN_CASES = 200


@contextmanager
def criterion(key, title, limit=None):
    info = {"note": ""}
    start = time.perf_counter()
    try:
        yield info
        elapsed = time.perf_counter() - start
        if limit is not None:
            assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
    except BaseException as exc:
        ACCEPTANCE[key] = f"FAIL  {key:<3} {title}: {str(exc).splitlines()[0] if str(exc) else type(exc).__name__}"
        print(ACCEPTANCE[key])
        raise
    note = f"; {info['note']}" if info["note"] else ""
    ACCEPTANCE[key] = f"PASS  {key:<3} {title} ({elapsed:.2f}s{note})"
    print(ACCEPTANCE[key])


# -- 1-4, 8: verdicts ----------------------------------------------------------


def test_criterion_1_thue_morse():
    with criterion("1", "Thue-Morse is NOT_MODEL_SET by row disjointness", limit=1.0) as info:
        v = analyze(corpus("thue_morse"))
        assert v.outcome is Outcome.NOT_MODEL_SET
        assert isinstance(v.witness, RowDisjointnessWitness)
        assert v.witness.nonperiodicity.basis == "scan" and not v.witness.nonperiodicity.periods
        info["note"] = f"primitivity exponent {v.witness.primitivity_exponent}"


def test_criterion_2_table():
    with criterion("2", "table tiling is NOT_MODEL_SET", limit=1.0) as info:
        v = analyze(corpus("table"))
        assert v.outcome is Outcome.NOT_MODEL_SET
        assert isinstance(v.witness, RowDisjointnessWitness)
        info["note"] = f"scan window {v.nonperiodicity.window}"


def _fibers(phi, reps, modulus):
    """Hand grouping of level-1 keys (q*c_j + t) mod modulus, 1-D."""
    out = {}
    for j in range(phi.m):
        for i, f in phi.column(j):
            out.setdefault((phi.factor * reps[j] + f.translation[0]) % modulus, set()).add(i)
    return out


def test_criterion_3_period_doubling():
    with criterion("3", "period doubling is MODEL_SET, coincidence at k=1", limit=1.0):
        phi = corpus("period_doubling")
        v = analyze(phi)
        assert v.outcome is Outcome.MODEL_SET
        assert v.witness.k == 1 and v.witness.residue == (0,) and v.witness.row == 0
        # oracle: L' = Z, key 0 modulo 2 holds only row-a maps
        assert v.cosets.lattice_sum == IntegerLattice(((1,),))
        assert _fibers(phi, [0, 0], 2)[0] == {0}


def test_criterion_4_aba_bab():
    with criterion("4", "a->aba, b->bab is MODEL_SET with L' = 2Z at k=1", limit=1.0):
        phi = corpus("aba_bab")
        v = analyze(phi)
        assert v.outcome is Outcome.MODEL_SET
        assert v.cosets.lattice_sum == IntegerLattice(((2,),))
        assert v.cosets.representatives == ((0,), (1,))
        assert v.witness.k == 1 and v.witness.residue == (0,) and v.witness.row == 0
        assert _fibers(phi, [0, 1], 6)[0] == {0}
        # without the coset shift every key would mix rows
        assert all(len(rows) == 2 for rows in _fibers(phi, [0, 0], 3).values())


def test_criterion_8_negative_search_bound():
    with criterion("8", "Thue-Morse: no coincidence up to k=6, verdict stays NOT_MODEL_SET",
                   limit=30.0):
        phi = corpus("thue_morse")
        seed = find_seed(phi)
        search = modular_coincidence(phi, compute_color_cosets(phi, seed), max_k=6)
        assert not search and search.bound == 6
        v = analyze(phi, AnalysisOptions(max_k=6))
        assert v.outcome is Outcome.NOT_MODEL_SET
        cross = analyze(phi, AnalysisOptions(max_k=6, cross_check=True))
        assert cross.outcome is Outcome.NOT_MODEL_SET and not cross.search


# -- 5: box fragment -----------------------------------------------------------


def test_criterion_5_box_witness():
    with criterion("5", "box fragment: conditions 4 and 5 hold for a=5, b=11, r=2, l=2",
                   limit=1.0) as info:
        box = corpus("box_fragment")
        patch = generate(box, Seed(box.color_index("2"), 1), 5)
        a, b = box.color_index("5"), box.color_index("11")
        w = SequenceWitness(0, 2, 2, a, b, (0, 1, 0), 4)
        check = check_witness_conditions(box, w, patch)
        assert check.disjoint_superelements is True
        assert check.shared_position is not None
        assert check.verified
        rep = exclusion_report(box, check)
        assert all(rep.excluded(2 * n) for n in range(1, 1001, 2))
        info["note"] = f"condition 5 at {check.shared_position}"


# -- 6: property suite ---------------------------------------------------------


def _random_pool(seed, n, **kw):
    rng = random.Random(seed)
    return [random_system(rng, **kw) for _ in range(n)]


def test_criterion_6a_census():
    with criterion("6a", "census equals inflation-matrix powers, k <= 3") as info:
        cases = 0
        systems = [corpus(n) for n in CORPUS] + _random_pool(61, 60)
        for phi in systems:
            a = np.array(inflation_matrix(phi), dtype=np.int64)
            for k in range(4):
                ak = np.linalg.matrix_power(a, k)
                for j in range(phi.m):
                    assert superelement(phi, j, k).census(phi.m) == tuple(ak[:, j]), (phi, j, k)
                    cases += 1
        assert cases >= MIN_CASES
        info["note"] = f"{cases} cases"


def test_criterion_6b_exact_cover():
    with criterion("6b", "exact cover of every column of phi^k, k <= 3") as info:
        cases = 0
        systems = [corpus(n) for n in CORPUS] + _random_pool(62, 70)
        for phi in systems:
            for k in range(1, 4):
                pk = power(phi, k)
                side = phi.factor ** k
                for j in range(phi.m):
                    ts = sorted(f.translation for _, f in pk.column(j))
                    assert ts == sorted(itertools.product(range(side), repeat=phi.dim))
                    cases += 1
                assert validate_block_structure(pk).ok
        assert cases >= MIN_CASES
        info["note"] = f"{cases} columns"


def test_criterion_6c_sqcap_propagation():
    with criterion("6c", "row-disjoint systems keep empty superelement sqcap, k <= 3") as info:
        cases = 0
        systems = [corpus(n) for n in CORPUS] + _random_pool(63, 40, row_disjoint=True)
        for phi in systems:
            if not row_disjointness(phi):
                continue
            for k in range(1, 4):
                for i, j in itertools.combinations(range(phi.m), 2):
                    assert not sqcap(superelement(phi, i, k), superelement(phi, j, k))
                    cases += 1
        assert cases >= MIN_CASES
        info["note"] = f"{cases} colour pairs"


def test_criterion_6d_power_stability():
    with criterion("6d", "analyze(phi) and analyze(phi^2) agree in outcome") as info:
        cases = 0
        for name in CORPUS:
            phi = corpus(name)
            a = analyze(phi, AnalysisOptions(max_k=8, seed_bound=16))
            b = analyze(power(phi, 2), AnalysisOptions(max_k=4))
            assert a.outcome is b.outcome, name
            cases += 1
        rng = random.Random(64)
        seen = set()
        while cases < MIN_CASES:
            phi = random_system(rng, row_disjoint=cases % 2 == 1, max_colors=3)
            if not is_primitive(inflation_matrix(phi)) or find_seed(phi).level > 2:
                continue
            a = analyze(phi, AnalysisOptions(max_k=4, budget=200_000, seed_bound=16))
            b = analyze(power(phi, 2), AnalysisOptions(max_k=2, budget=200_000))
            assert a.outcome is b.outcome, phi
            seen.add(a.outcome.value)
            cases += 1
        info["note"] = f"{cases} systems, outcomes {'/'.join(sorted(seen))}"


def _solve_member(v, lat):
    c = []
    for r in range(lat.dim):
        acc = Fraction(v[r]) - sum(c[k] * lat.basis[k][r] for k in range(r))
        c.append(acc / lat.basis[r][r])
    return all(x.denominator == 1 for x in c)


def test_criterion_6e_lattice_suite():
    with criterion("6e", "HNF idempotence, lattice_sum algebra, residue well-definedness") as info:
        rng = random.Random(65)

        def gens(d):
            out = [tuple(rng.randint(-9, 9) for _ in range(d)) for _ in range(rng.randint(d, d + 3))]
            s = rng.randint(1, 7)
            return out + [tuple(s * int(i == j) for i in range(d)) for j in range(d)]

        for _ in range(MIN_CASES):
            d = rng.randint(1, 3)
            g, h, k = gens(d), gens(d), gens(d)
            A, B, C = hnf(g), hnf(h), hnf(k)
            assert hnf(A.basis) == A
            assert lattice_sum(A, B) == lattice_sum(B, A)
            assert lattice_sum(lattice_sum(A, B), C) == lattice_sum(A, lattice_sum(B, C))
            assert lattice_sum(A, A) == A
            assert hnf(g + h) == lattice_sum(A, B)
            x = tuple(rng.randint(-40, 40) for _ in range(d))
            y = tuple(rng.randint(-40, 40) for _ in range(d))
            diff = tuple(p - q for p, q in zip(x, y))
            assert (residue(x, A) == residue(y, A)) == _solve_member(diff, A)
        info["note"] = f"{MIN_CASES} cases per property"


def test_criterion_6f_self_reproduction():
    with criterion("6f", "box witnesses reproduce under substitution (stride r -> q r)") as info:
        box = corpus("box_fragment")
        q = box.factor
        patch = generate(box, Seed(box.color_index("2"), 1), 5)
        images = [patch]
        for _ in range(2):
            images.append(substitute(box, images[-1]))
        cases = 0
        for direction, stride, period in itertools.product(range(3), (1, 2, 4), (2, 3, 4)):
            for w in find_sequences(patch, direction, stride, period):
                check = check_witness_conditions(box, w, patch)
                if not check.verified:
                    continue
                z = check.shared_position
                for depth in (1, 2):
                    image = images[depth]
                    scale = q ** depth
                    # z_depth = q^(depth-1) z + ... + z
                    shift = tuple(c * (scale - 1) // (q - 1) for c in z)
                    for j in range(w.repetitions * w.period):
                        x = w.position(j)
                        y = tuple(scale * c + s for c, s in zip(x, shift))
                        assert image[y] == w.expected(j), (w, depth, j)
                    cases += 1
        assert cases >= MIN_CASES
        info["note"] = f"{cases} witness runs x depths"


# -- 7: determinism ------------------------------------------------------------


def _commands():
    seq_args = {
        "box_fragment": ["--dir", "0", "--r", "2", "--l", "2"],
    }
    for name in CORPUS + ["box_fragment"]:
        path = corpus_path(name)
        yield ["print", path]
        yield ["validate", path]
        if name != "box_fragment":
            yield ["analyze", path]
            yield ["analyze", path, "--json"]
        yield ["generate", path, "--iters", "2" if name == "box_fragment" else "3"]
        yield ["render", path, "--iters", "3"]
        yield ["sequences", path] + seq_args.get(name, ["--dir", "0", "--r", "1", "--l", "2"])


def test_criterion_7_determinism():
    with criterion("7", "every subcommand is byte-identical across two runs") as info:
        runs = 0
        for argv in _commands():
            outs = [subprocess.run([sys.executable, "-m", "lattsub", *argv],
                                   capture_output=True, check=False)
                    for _ in range(2)]
            first, second = outs
            assert (first.returncode, first.stdout, first.stderr) == \
                (second.returncode, second.stdout, second.stderr), argv
            assert first.stdout or first.stderr
            runs += 1
        info["note"] = f"{runs} commands"
