"""Command-line entry point.

Every subcommand prints a report on standard output whose first line is
``schema=liftlab.<command>/1`` followed by ``key=value`` lines. Exit codes:
0 success, 1 verification failure, 2 usage or format error. Artifacts are
written atomically into the output directory (``--out-dir``, else
``$LIFTLAB_OUTPUT_DIR``, else the current directory).
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
import tempfile
from fractions import Fraction

from . import oracle, trees
from .compose import BudgetExceeded, compose_block
from .formula import BlockStructure, CnfFormula, FormulaError, parse_dimacs, to_dimacs
from .gadget import GadgetError, next_power_of_two
from .proofs.common import ProofError
from .proofs.cutting_planes import parse_cp, verify_cp
from .proofs.dags import format_dag, parse_dag, verify_decision_dag
from .proofs.protocols import protocol_from_json, protocol_to_json
from .proofs.resolution import parse_resolution, verify_resolution
from .relations import CnfRelation, RelationError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def write_atomic(path: str, text: str) -> str:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)
    return path


def _out_path(args, name: str) -> str:
    return os.path.join(args.out_dir, name)


def _stem(path: str) -> str:
    base = os.path.basename(path)
    return base[:-4] if base.endswith(".cnf") else os.path.splitext(base)[0]


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _fraction_unit(text: str) -> Fraction:
    q = _fraction(text)
    if not 0 < q <= 1:
        raise argparse.ArgumentTypeError(f"threshold fraction {q} is not in (0, 1]")
    return q


def _cnf(args) -> CnfFormula:
    return parse_dimacs(_read(args.cnf))


def _blocks(args, formula: CnfFormula) -> BlockStructure:
    if getattr(args, "blocks", None):
        return BlockStructure.from_json(_read(args.blocks))
    ell = getattr(args, "ell", 1) or 1
    if formula.var_count % ell:
        raise UsageError(f"{formula.var_count} variables do not split into blocks of {ell}")
    return BlockStructure.contiguous(formula.var_count // ell, ell)


def _gadget_size(args, out) -> int:
    m = next_power_of_two(args.m)
    out.append(f"m={m}")
    out.append(f"m_requested={args.m}")
    return m


def _emit(command: str, lines: list) -> None:
    sys.stdout.write(f"schema=liftlab.{command}/1\n")
    for line in lines:
        sys.stdout.write(line + "\n")


# --- subcommands -----------------------------------------------------------

def cmd_compose(args, out) -> int:
    formula = _cnf(args)
    blocks = _blocks(args, formula)
    m = _gadget_size(args, out)
    composed, manifest = compose_block(formula, blocks, m, budget=args.budget,
                                       m_requested=args.m)
    stem = _stem(args.cnf)
    cnf_path = write_atomic(_out_path(args, f"{stem}.lifted.cnf"), to_dimacs(composed))
    man_path = write_atomic(_out_path(args, f"{stem}.manifest.json"), manifest.to_json())
    out += [f"vars={composed.var_count}", f"clauses={len(composed.clauses)}",
            f"cnf={cnf_path}", f"manifest={man_path}"]
    return EXIT_OK


def _verdict_lines(verdict, out) -> int:
    out.append(f"verdict={'accept' if verdict.ok else 'reject'}")
    if not verdict.ok:
        out.append(f"reason={verdict.reason}")
        if verdict.step is not None:
            out.append(f"step={verdict.step}")
    for k in sorted(verdict.measures):
        out.append(f"{k}={verdict.measures[k]}")
    return EXIT_OK if verdict.ok else EXIT_FAIL


def cmd_verify_res(args, out) -> int:
    formula = _cnf(args)
    proof = parse_resolution(_read(args.proof), tree_like=args.tree)
    blocks = _blocks(args, formula) if (args.blocks or args.ell) else None
    return _verdict_lines(verify_resolution(formula, proof, blocks), out)


def cmd_verify_cp(args, out) -> int:
    formula = _cnf(args)
    proof = parse_cp(_read(args.proof), tree_like=args.tree)
    return _verdict_lines(verify_cp(formula, proof, args.mode, args.support_cap), out)


def cmd_verify_dag(args, out) -> int:
    formula = _cnf(args)
    dag = parse_dag(_read(args.dag))
    blocks = _blocks(args, formula) if (args.blocks or args.ell) else None
    verdict = verify_decision_dag(CnfRelation(formula), dag, exhaustive=not args.fast,
                                  blocks=blocks)
    return _verdict_lines(verdict, out)


def cmd_measure(args, out) -> int:
    formula = _cnf(args)
    proof = parse_resolution(_read(args.proof), tree_like=args.tree)
    verdict = verify_resolution(formula, proof, _blocks(args, formula))
    return _verdict_lines(verdict, out)


def cmd_oracle(args, out) -> int:
    formula = _cnf(args)
    measure = args.measure
    if measure == "depth":
        value = oracle.min_depth(formula)
    elif measure == "size":
        value = oracle.min_tree_size(formula)
    elif measure == "width":
        value = oracle.min_width(formula)
    elif measure == "block-width":
        value = oracle.min_block_width(formula, _blocks(args, formula))
    else:
        value = oracle.min_relation_depth(CnfRelation(formula))
    out.append(f"{measure}={value}")
    if args.lift_m:
        d = oracle.min_depth(formula)
        if d is oracle.SAT:
            raise UsageError("formula is satisfiable; no composed depth to compute")
        ms, depths = [], []
        for raw in args.lift_m:
            m = next_power_of_two(raw)
            composed, _ = compose_block(formula, BlockStructure.unit(formula.var_count), m,
                                        budget=args.budget)
            if composed.var_count > 24:
                raise UsageError(f"composed formula at m={m} has {composed.var_count} > 24 bits")
            depth = oracle.min_relation_depth(CnfRelation(composed))
            ms.append(m)
            depths.append(depth)
            out.append(f"composed_depth m={m} depth={depth}")
        if args.plot:
            from .plots import plot_depth_gap
            out.append(f"plot={plot_depth_gap(ms, depths, d, args.plot)}")
    elif args.plot:
        raise UsageError("--plot needs --lift-m")
    return EXIT_OK if value is not oracle.SAT else EXIT_FAIL


def cmd_lift_dag(args, out) -> int:
    from .lift import lift_dag_refutation
    formula = _cnf(args)
    blocks = _blocks(args, formula)
    m = _gadget_size(args, out)
    proof = parse_resolution(_read(args.proof), tree_like=args.tree)
    lifted = lift_dag_refutation(formula, proof, blocks, m, budget=args.budget)
    stem = _stem(args.cnf)
    out.append(f"size={lifted.dag.size}")
    out.append(f"size_bound={lifted.size_bound}")
    if args.check:
        verdict = verify_decision_dag(CnfRelation(lifted.composed), lifted.dag,
                                      exhaustive=False)
        out.append(f"verdict={'accept' if verdict.ok else 'reject'}")
        if not verdict.ok:
            return EXIT_FAIL
    out.append(f"dag={write_atomic(_out_path(args, f'{stem}.lifted.dag'), format_dag(lifted.dag))}")
    out.append(f"cnf={write_atomic(_out_path(args, f'{stem}.lifted.cnf'), to_dimacs(lifted.composed))}")
    out.append(f"manifest={write_atomic(_out_path(args, f'{stem}.manifest.json'), lifted.manifest.to_json())}")
    return EXIT_OK if lifted.dag.size <= lifted.size_bound else EXIT_FAIL


def cmd_lift_tree(args, out) -> int:
    import math
    from .lift import lift_tree_refutation, verify_tree_against_formula
    formula = _cnf(args)
    m = _gadget_size(args, out)
    if args.tree_file:
        tree = trees.loads(_read(args.tree_file))
    else:
        d, tree = oracle.optimal_depth_tree(formula)
        if d is oracle.SAT:
            raise UsageError("formula is satisfiable")
    d = trees.depth(tree)
    lifted, composed, manifest = lift_tree_refutation(tree, formula, m, budget=args.budget)
    depth = trees.depth(lifted)
    bound = d * (int(math.log2(m)) + 1)
    out += [f"source_depth={d}", f"depth={depth}", f"depth_bound={bound}"]
    if args.check:
        try:
            verify_tree_against_formula(lifted, composed)
            out.append("verdict=accept")
        except ProofError as e:
            out += ["verdict=reject", f"reason={e}"]
            return EXIT_FAIL
    stem = _stem(args.cnf)
    out.append(f"tree={write_atomic(_out_path(args, f'{stem}.lifted.tree.json'), trees.dumps(lifted))}")
    out.append(f"cnf={write_atomic(_out_path(args, f'{stem}.lifted.cnf'), to_dimacs(composed))}")
    out.append(f"manifest={write_atomic(_out_path(args, f'{stem}.manifest.json'), manifest.to_json())}")
    return EXIT_OK if depth <= bound else EXIT_FAIL


def cmd_entropy(args, out) -> int:
    from .structure.distributions import (FiniteDistribution, blockwise_min_entropy,
                                          deficiency, min_entropy)
    from .structure.exact import fmt
    dist = FiniteDistribution.from_json(_read(args.dist))
    out.append(f"min_entropy={fmt(min_entropy(dist))}")
    out.append(f"blockwise_min_entropy={fmt(blockwise_min_entropy(dist))}")
    out.append(f"deficiency={fmt(deficiency(dist, args.domain_size))}")
    return EXIT_OK


def _points(path: str) -> list:
    try:
        doc = json.loads(_read(path))
        return [tuple(tuple(e) if isinstance(e, list) else e for e in p) for p in doc]
    except (ValueError, TypeError) as e:
        raise UsageError(f"bad point list in {path}: {e}") from None


def cmd_partition(args, out) -> int:
    from .structure.partition import check_partition, restore_partition
    X = _points(args.points)
    part = restore_partition(X, args.m, args.theta)
    for k, p in enumerate(part.parts, start=1):
        coords = ",".join(str(c + 1) for c in p.coords) or "-"
        alpha = ",".join(map(str, p.alpha)) or "-"
        out.append(f"part={k} I={coords} alpha={alpha} size={len(p.members)} "
                   f"selected_prob={p.selected_prob}")
    problems = check_partition(X, part)
    out += [f"problem={p}" for p in problems]
    out.append(f"pass={'false' if problems else 'true'}")
    if args.plot:
        from .plots import plot_partition
        out.append(f"plot={plot_partition(part.parts, args.plot)}")
    return EXIT_FAIL if problems else EXIT_OK


def cmd_round(args, out) -> int:
    from .structure.round_lemma import RoundLemmaError, RoundParams, round_lemma_find
    params = RoundParams(theta=args.theta, entropy_frac=args.entropy_frac,
                         y_deficiency_bound=args.y_deficiency_bound)
    X, Y = _points(args.x), _points(args.y)
    try:
        res = round_lemma_find(X, Y, args.m, params,
                               check_preconditions=not args.skip_preconditions)
    except RoundLemmaError as e:
        out.append(f"error={str(e).splitlines()[0]}")
        out += [line for line in str(e).splitlines()[1:]]
        for k, coords, eps, ok in e.attempts:
            out.append(f"attempt part={k + 1} I={','.join(str(c + 1) for c in coords) or '-'} "
                       f"eps={eps} ok={str(ok).lower()}")
        return EXIT_FAIL
    out.append(f"I={','.join(str(c + 1) for c in res.coords) or '-'}")
    out.append(f"alpha={','.join(map(str, res.alpha)) or '-'}")
    out.append(f"eps={res.eps}")
    out += res.preconditions.lines()
    for z, br in sorted(res.branches.items()):
        out.append(f"branch z={''.join(map(str, z)) or '-'} |X|={len(br.X)} |Y|={len(br.Y)}")
        out += br.report.lines()
    return EXIT_OK


def cmd_cleanup(args, out) -> int:
    from .structure.simplex import OrderedSimplex, bob_cleanup, check_cleanup
    T = OrderedSimplex.from_json(_read(args.simplex))
    res = bob_cleanup(T, args.m, args.n, args.ell, args.threshold)
    for (i, j), rows in sorted(res.error_sets.items()):
        out.append(f"condition=error_density_{i}_{j} measured={Fraction(len(rows), 2 ** args.m)} "
                   f"threshold={res.bound} pass={str(Fraction(len(rows), 2 ** args.m) <= res.bound).lower()}")
    out.append(f"fired={len(res.fired)} choices={res.choices}")
    problems = check_cleanup(T, res, args.m, args.n, args.ell)
    out += [f"problem={p}" for p in problems]
    return EXIT_FAIL if problems else EXIT_OK


def cmd_simulate(args, out) -> int:
    from .protocol_sim import check_protocol, protocol_from_tree, simulate_protocol
    formula = _cnf(args)
    m = _gadget_size(args, out)
    if args.protocol:
        protocol = protocol_from_json(_read(args.protocol))
    else:
        d, tree = oracle.optimal_depth_tree(formula)
        if d is oracle.SAT:
            raise UsageError("formula is satisfiable")
        protocol = protocol_from_tree(tree, formula, m)
        if args.save_protocol:
            out.append(f"protocol={write_atomic(args.save_protocol, protocol_to_json(protocol))}")
    try:
        check_protocol(protocol, formula)
    except ProofError as e:
        out.append(f"error={e}")
        return EXIT_FAIL
    if args.z:
        zs = [tuple(int(c) for c in args.z)]
        if len(zs[0]) != formula.var_count:
            raise UsageError(f"--z needs {formula.var_count} bits")
    else:
        zs = list(itertools.product((0, 1), repeat=formula.var_count))
    failed, runs = False, {}
    for z in zs:
        res = simulate_protocol(protocol, formula, m, z, budget=args.budget_queries)
        label = "".join(map(str, z))
        out.append(f"z={label}")
        out += res.transcript().splitlines()
        runs[label] = res.steps
        failed |= not (res.correct and res.fixing_ok and res.within_budget)
    if args.plot:
        from .plots import plot_simulation
        out.append(f"plot={plot_simulation(runs, args.plot)}")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_fourier(args, out) -> int:
    from .structure.distributions import FiniteDistribution
    from .structure.exact import fmt
    from .structure.fourier import PreconditionUnmet, check_fourier_bound
    lam = FiniteDistribution.from_json(_read(args.selectors))
    gam = FiniteDistribution.from_json(_read(args.signs))
    coords = tuple(int(c) for c in args.coords.split(",") if c)
    try:
        res = check_fourier_bound(lam, gam, coords)
    except PreconditionUnmet as e:
        out.append(f"error={e}")
        return EXIT_FAIL
    out.append(f"beta={fmt(res.beta)} deficiency={fmt(res.deficiency)}")
    out.append(f"condition=character_bound measured={abs(res.lhs)} "
               f"threshold={res.bound:.9g} pass={str(res.holds).lower()}")
    out.append(f"slack={res.slack:.9g}")
    return EXIT_OK if res.holds else EXIT_FAIL


# --- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    env_out = os.environ.get("LIFTLAB_OUTPUT_DIR", ".")
    try:
        env_jobs = int(os.environ.get("LIFTLAB_JOBS", "1"))
    except ValueError:
        env_jobs = 1
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out-dir", default=env_out, help="directory for artifacts")
    common.add_argument("--jobs", type=int, default=env_jobs,
                        help="worker count (accepted for scripting; runs are sequential)")
    common.add_argument("--budget", type=int, default=10 ** 7,
                        help="maximum composed clause count")

    p = argparse.ArgumentParser(prog="liftlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    def cnf(sp, blocks=False):
        sp.add_argument("--cnf", required=True)
        if blocks:
            sp.add_argument("--blocks", help="block structure JSON")
            sp.add_argument("--ell", type=int, help="contiguous blocks of this size")

    sp = add("compose", cmd_compose, "compose a CNF with the index gadget")
    cnf(sp, True)
    sp.add_argument("--m", type=int, required=True)

    sp = add("verify-res", cmd_verify_res, "check a resolution refutation")
    cnf(sp, True)
    sp.add_argument("--proof", required=True)
    sp.add_argument("--tree", action="store_true", help="require tree-like")

    sp = add("verify-cp", cmd_verify_cp, "check a cutting planes refutation")
    cnf(sp)
    sp.add_argument("--proof", required=True)
    sp.add_argument("--mode", choices=("syntactic", "semantic"), default="syntactic")
    sp.add_argument("--support-cap", type=int, default=24)
    sp.add_argument("--tree", action="store_true")

    sp = add("verify-dag", cmd_verify_dag, "check a decision-dag for S_F")
    cnf(sp, True)
    sp.add_argument("--dag", required=True)
    sp.add_argument("--fast", action="store_true", help="symbolic leaf check")

    sp = add("measure", cmd_measure, "length, width and block-width of a proof")
    cnf(sp, True)
    sp.add_argument("--proof", required=True)
    sp.add_argument("--tree", action="store_true")

    sp = add("oracle", cmd_oracle, "brute-force complexity measures")
    cnf(sp, True)
    sp.add_argument("--measure", required=True,
                    choices=("depth", "size", "width", "block-width", "relation-depth"))
    sp.add_argument("--lift-m", type=int, nargs="*", help="also compute composed depth")
    sp.add_argument("--plot", help="figure path for the composed depths")

    sp = add("lift-dag", cmd_lift_dag, "lift a resolution refutation to the composed formula")
    cnf(sp, True)
    sp.add_argument("--proof", required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--tree", action="store_true")
    sp.add_argument("--check", action="store_true", help="verify the lifted dag")

    sp = add("lift-tree", cmd_lift_tree, "lift a decision tree to the composed formula")
    cnf(sp)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--tree-file", help="tree JSON; default is a depth-optimal tree")
    sp.add_argument("--check", action="store_true")

    sp = add("entropy", cmd_entropy, "entropy measures of a distribution")
    sp.add_argument("--dist", required=True)
    sp.add_argument("--domain-size", type=int)

    sp = add("partition", cmd_partition, "restoring partition of a selector set")
    sp.add_argument("--points", required=True, help="JSON list of selector tuples")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--theta", type=_fraction_unit, default=Fraction(19, 20))
    sp.add_argument("--plot")

    sp = add("round", cmd_round, "one round of rectangle restoration")
    sp.add_argument("--x", required=True, help="JSON list of selector tuples")
    sp.add_argument("--y", required=True, help="JSON list of row tuples")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--theta", type=_fraction_unit, default=Fraction(19, 20))
    sp.add_argument("--entropy-frac", type=_fraction_unit, default=Fraction(9, 10))
    sp.add_argument("--y-deficiency-bound", type=_fraction)
    sp.add_argument("--skip-preconditions", action="store_true")

    sp = add("cleanup", cmd_cleanup, "error sets for a simplex")
    sp.add_argument("--simplex", required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--ell", type=int, default=1)
    sp.add_argument("--threshold", type=_fraction_unit)

    sp = add("simulate", cmd_simulate, "simulate a real protocol by a decision tree")
    cnf(sp)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--protocol", help="protocol JSON; default is built from an optimal tree")
    sp.add_argument("--save-protocol")
    sp.add_argument("--z", help="one input as a bit string; default is every input")
    sp.add_argument("--budget-queries", type=int)
    sp.add_argument("--plot")

    sp = add("fourier", cmd_fourier, "character expectation against its bound")
    sp.add_argument("--selectors", required=True, help="selector distribution JSON")
    sp.add_argument("--signs", required=True, help="sign-vector distribution JSON")
    sp.add_argument("--coords", default="", help="comma-separated 1-based coordinates")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    out: list = []
    try:
        code = args.fn(args, out)
    except (UsageError, FormulaError, GadgetError, ProofError, RelationError,
            BudgetExceeded, ValueError) as e:
        _emit(args.command, out + [f"error={e}"])
        return EXIT_USAGE
    _emit(args.command, out)
    return code


def main() -> None:
    sys.exit(run())
