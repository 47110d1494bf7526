"""Command line front end.

Exit codes: 0 analysis completed (any verdict), 1 input or usage error,
2 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import coincidence as co
from .lattice import IntegerLattice, Point
from .lssformat import ParseError, format_system, load_system
from .mfs import MatrixFunctionSystem, inflation_matrix
from .patch import BudgetExceeded, NoSeedError, find_seed, generate
from .render import RenderError, dump_text, render_svg
from .sequences import (
    CHECKERBOARD_NOTE,
    DEFAULT_MIN_REPETITIONS,
    check_witness_conditions,
    exclusion_report,
    find_sequences,
)

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def fmt_point(p: Point) -> str:
    return str(p[0]) if len(p) == 1 else "(" + ",".join(map(str, p)) + ")"


def fmt_lattice(lat: IntegerLattice) -> str:
    return " ".join("(" + ",".join(map(str, b)) + ")" for b in lat.basis)


# -- analyze -----------------------------------------------------------------


def _witness_line(phi: MatrixFunctionSystem, v: co.Verdict) -> str:
    w = v.witness
    if isinstance(w, co.Coincidence):
        return (f"modular coincidence k={w.k} residue={fmt_point(w.residue)} "
                f"row={phi.colors[w.row]}")
    if isinstance(w, co.RowDisjointnessWitness):
        return "row-disjointness"
    return f"bound reached: {w.reason}"


def verdict_record(phi: MatrixFunctionSystem, v: co.Verdict) -> dict:
    """Structured form of a verdict; the text output is rendered from this."""
    names = phi.colors
    ev = {
        "system": f"dim={phi.dim} factor={phi.factor} colors={phi.m}",
        "validation": str(v.validation),
        "inflation_matrix": " ".join("[" + ",".join(map(str, r)) + "]"
                                     for r in inflation_matrix(phi)),
        "primitivity": (f"primitive exponent={v.primitivity.exponent}" if v.primitivity
                        else f"not primitive bound={v.primitivity.bound}"),
    }
    if v.seed is not None:
        ev["seed"] = f"color={names[v.seed.color]} level={v.seed.level}"
    npe = v.nonperiodicity
    if npe is not None:
        if npe.basis == "assumed":
            ev["nonperiodicity"] = "assumed by user"
        else:
            periods = ",".join(fmt_point(p) for p in npe.periods) or "none"
            ev["nonperiodicity"] = (f"scan radius={npe.radius} window={npe.window} "
                                    f"periods={periods}")
    rd = v.row_disjointness
    if rd is not None:
        if rd:
            ev["row_disjointness"] = "disjoint"
        else:
            i, j, jj, f = rd.violation
            ev["row_disjointness"] = (f"violated row={names[i]} columns={names[j]},{names[jj]} "
                                      f"map={f}")
    if v.cosets is not None:
        c = v.cosets
        ev["color_lattices"] = " ".join(f"{n}={fmt_lattice(l)}" for n, l in zip(names, c.lattices))
        ev["lattice_sum"] = fmt_lattice(c.lattice_sum)
        ev["cosets"] = " ".join(f"{n}={fmt_point(r)}" for n, r in zip(names, c.representatives))
        ev["coset_level"] = str(c.level)
    if v.search is not None:
        s = v.search
        if s.found is not None:
            ev["coincidence_search"] = (f"found k={s.found.k} max_k={s.bound} "
                                        f"method={s.found.method} "
                                        f"modulus={fmt_lattice(s.found.modulus)}")
        else:
            ev["coincidence_search"] = f"none max_k={s.bound}"
    elif v.outcome is co.Outcome.NOT_MODEL_SET:
        ev["coincidence_search"] = "not needed"
    ev["consequence"] = {
        co.Outcome.MODEL_SET: "every colour class is a regular model set; pure point diffractive",
        co.Outcome.NOT_MODEL_SET: "no colour class is a model set; not pure point diffractive",
        co.Outcome.UNKNOWN: "undecided",
    }[v.outcome]
    return {"verdict": v.outcome.value, "witness": _witness_line(phi, v), "evidence": ev}


def format_verdict(record: dict) -> str:
    lines = [f"VERDICT: {record['verdict']}", f"WITNESS: {record['witness']}"]
    lines += [f"EVIDENCE.{k}: {val}" for k, val in record["evidence"].items()]
    return "\n".join(lines) + "\n"


def cmd_analyze(args) -> int:
    phi = load_system(args.file)
    opts = co.AnalysisOptions(max_k=args.max_k, seed_bound=args.seed_bound,
                              budget=args.budget, assume_nonperiodic=args.assume_nonperiodic,
                              period_scan_radius=args.period_scan_radius)
    rec = verdict_record(phi, co.analyze(phi, opts))
    if args.json:
        sys.stdout.write(json.dumps(rec, indent=2) + "\n")
    else:
        sys.stdout.write(format_verdict(rec))
    return EXIT_OK


# -- generate / render -------------------------------------------------------


def _fixed_point_patch(phi, iters, seed_bound, budget):
    seed = find_seed(phi, seed_bound)
    return generate(phi, seed, iters, budget)


def _write(text: str, path: Optional[str]):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_generate(args) -> int:
    phi = load_system(args.file)
    _require_valid(phi)
    if args.render and phi.dim > 2:
        raise RenderError(f"SVG unsupported for d={phi.dim}")
    patch = _fixed_point_patch(phi, args.iters, args.seed_bound, args.budget)
    text = render_svg(patch, phi.colors) if args.render else dump_text(patch, phi.colors)
    _write(text, args.output)
    return EXIT_OK


def cmd_render(args) -> int:
    args.render = True
    return cmd_generate(args)


def _require_valid(phi):
    if not phi.validation.ok:
        raise co.InvalidSystem(f"invalid matrix function system: {phi.validation}")


# -- sequences ---------------------------------------------------------------


def _flag(state) -> str:
    return "unknown" if state is None else ("pass" if state else "fail")


def _auto_iterations(phi, seed, stride, period, reps, budget):
    target = max(2 * stride * period * reps, 32)
    step = phi.expansion ** seed.level
    n = 1
    while step ** n < target and step ** ((n + 1) * phi.dim) <= budget:
        n += 1
    return n


def cmd_sequences(args) -> int:
    if args.l < 2:
        raise UsageError("--l must be >= 2")
    if args.r < 1:
        raise UsageError("--r must be >= 1")
    phi = load_system(args.file)
    _require_valid(phi)
    if not 0 <= args.dir < phi.dim:
        raise UsageError(f"--dir must be in 0..{phi.dim - 1}")
    want = {}
    for key in ("a", "b"):
        name = getattr(args, key)
        if name is not None:
            if name not in phi.colors:
                raise UsageError(f"unknown colour {name!r}")
            want[key] = phi.color_index(name)
    seed = find_seed(phi, args.seed_bound)
    iters = args.iters or _auto_iterations(phi, seed, args.r, args.l, args.min_reps, args.budget)
    patch = generate(phi, seed, iters, args.budget)

    names = phi.colors
    out = [
        f"SYSTEM: dim={phi.dim} factor={phi.factor} colors={phi.m}"
        + (" partial" if phi.partial else ""),
        f"PATCH: seed={names[seed.color]} level={seed.level} iterations={iters} "
        f"points={len(patch)}",
        f"SEARCH: direction={args.dir} stride={args.r} period={args.l} "
        f"min_repetitions={args.min_reps}",
    ]
    groups = {}
    for w in find_sequences(patch, args.dir, args.r, args.l, args.min_reps):
        if all(getattr(w, k) == v for k, v in want.items()):
            groups.setdefault((w.a, w.b), []).append(w)
    verified = 0
    for (a, b), ws in sorted(groups.items()):
        first = ws[0]
        check = check_witness_conditions(phi, first, patch, args.min_reps)
        states = list(check.conditions)
        if check.disjoint_superelements is None:
            states[3] = states[4] = None
        flags = " ".join(f"{n}={_flag(ok)}" for n, ok in enumerate(states, start=1))
        out.append(f"CANDIDATE: a={names[a]} b={names[b]} runs={len(ws)} "
                   f"anchor={fmt_point(first.anchor)} "
                   f"repetitions={max(w.repetitions for w in ws)}")
        pos = f" position={fmt_point(check.shared_position)}" if check.reproducing else ""
        out.append(f"CONDITIONS: {flags}{pos}" + (f" note={check.note}" if check.note else ""))
        if check.verified:
            verified += 1
            rep = exclusion_report(phi, check)
            out.append(f"STATUS: verified ({rep.scale})")
            out.append(f"EXCLUDED: direction={rep.direction} lengths={rep.describe()}")
            out.append(f"DENSITY: {rep.density}")
        else:
            out.append("STATUS: not verified")
    out.append(f"SUMMARY: candidates={len(groups)} verified={verified}")
    if verified:
        out.append(f"GUIDANCE: {CHECKERBOARD_NOTE}")
    sys.stdout.write("\n".join(out) + "\n")
    return EXIT_OK


# -- print / validate --------------------------------------------------------


def cmd_print(args) -> int:
    sys.stdout.write(format_system(load_system(args.file)))
    return EXIT_OK


def cmd_validate(args) -> int:
    phi = load_system(args.file)
    rep = phi.validation
    sys.stdout.write(f"VALID: {'yes' if rep.ok else 'no'}\n")
    for v in rep.violations:
        sys.stdout.write(f"VIOLATION: {v}\n")
    if rep.unspecified:
        sys.stdout.write(f"UNSPECIFIED: {' '.join(rep.unspecified)}\n")
    return EXIT_OK if rep.ok else EXIT_INPUT


# -- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lattsub", description="Lattice substitution systems: patches and model-set tests.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("file", help=".lss system file")
        sp.add_argument("--seed-bound", type=int, default=co.DEFAULT_SEED_BOUND)
        sp.add_argument("--budget", type=int, default=10 ** 7, help="maximum patch size in points")

    a = sub.add_parser("analyze", help="decide model-set status")
    common(a)
    a.add_argument("--max-k", type=int, default=co.DEFAULT_MAX_K)
    a.add_argument("--assume-nonperiodic", action="store_true")
    a.add_argument("--period-scan-radius", type=int, default=co.DEFAULT_SCAN_RADIUS)
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze)

    g = sub.add_parser("generate", help="fixed-point patch as text (or SVG with --render)")
    common(g)
    g.add_argument("--iters", type=int, required=True)
    g.add_argument("--render", action="store_true")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("render", help="fixed-point patch as SVG (d <= 2)")
    common(r)
    r.add_argument("--iters", type=int, required=True)
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_render)

    s = sub.add_parser("sequences", help="search and verify equidistant a/b witnesses")
    common(s)
    s.add_argument("--dir", type=int, required=True, help="axis index")
    s.add_argument("--r", type=int, required=True, help="stride")
    s.add_argument("--l", type=int, required=True, help="pattern period (>= 2)")
    s.add_argument("--a")
    s.add_argument("--b")
    s.add_argument("--iters", type=int)
    s.add_argument("--min-reps", type=int, default=DEFAULT_MIN_REPETITIONS)
    s.set_defaults(func=cmd_sequences)

    pr = sub.add_parser("print", help="canonical form of a system file")
    pr.add_argument("file")
    pr.set_defaults(func=cmd_print)

    v = sub.add_parser("validate", help="check the block structure")
    v.add_argument("file")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BudgetExceeded, co.CosetError) as exc:
        print(f"lattsub: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ParseError, co.InvalidSystem, UsageError, RenderError, NoSeedError, OSError) as exc:
        print(f"lattsub: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
