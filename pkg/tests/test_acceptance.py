"""Acceptance criteria, one test per criterion; each prints a pass/fail line."""

import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from liftlab import trees
from liftlab.compose import compose_block, compose_single
from liftlab.formula import BlockStructure, CnfFormula, falsified_clauses
from liftlab.lift import lift_dag_refutation, lift_tree_refutation
from liftlab.oracle import min_block_width, min_relation_depth, optimal_depth_tree, optimal_size_tree
from liftlab.proofs.cutting_planes import (BoolAxiom, ClauseAxiom, CpLine, CpProof, Divide, LinComb,
                                           Semantic, coefficient_gcd, derive_lines,
                                           semantic_counterexample, verify_cp)
from liftlab.proofs.dags import verify_decision_dag
from liftlab.proofs.protocols import ProtocolLeaf, node
from liftlab.proofs.resolution import derive_clauses, proof_to_dag
from liftlab.protocol_sim import check_protocol, protocol_from_tree, quadrant_select, simulate_protocol
from liftlab.relations import CnfRelation
from liftlab.structure.boxes import Box, box_image, cube, find_good_x, is_rho_like, is_rho_structured, union_bound
from liftlab.structure.distributions import FiniteDistribution, blockwise_min_entropy
from liftlab.structure.fourier import check_fourier_bound
from liftlab.structure.partition import restore_partition
from liftlab.structure.simplex import OrderedSimplex, bob_cleanup, check_cleanup

from conftest import UNIT, XOR2, complete_contradiction, random_formula, random_unsat

pytestmark = pytest.mark.acceptance

SEED = 20240601


@pytest.fixture
def verdict(capsys):
    """Print one summary line per criterion, visible even under capture."""
    def emit(number: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} {detail}")
    return emit


# 1. composition exactness ----------------------------------------------------

def _random_blocks(rng, n, ell):
    vs = list(range(1, n * ell + 1))
    rng.shuffle(vs)
    return BlockStructure(n, ell, tuple(tuple(sorted(vs[i * ell:(i + 1) * ell]))
                                        for i in range(n)))


def _all_points(bits: int) -> np.ndarray:
    idx = np.arange(1 << bits, dtype=np.int64)
    return ((idx[:, None] >> np.arange(bits)[None, :]) & 1).astype(np.uint8)


def _clause_falsified(points: np.ndarray, clause) -> np.ndarray:
    mask = np.ones(len(points), dtype=bool)
    for lit in clause:
        col = points[:, abs(lit) - 1]
        mask &= (col == 0) if lit > 0 else (col == 1)
    return mask


def _check_encoding(formula, blocks, m):
    composed, man = compose_block(formula, blocks, m)
    t = man.params.t
    # count: one clause per source clause and selector value on its blocks
    want = sum(m ** len({blocks.block_of(abs(l)) for l in c}) for c in formula.clauses)
    if len(composed.clauses) != want:
        return False
    pts = _all_points(man.var_count)
    # decode independently: selector value from MSB-first bits, then the pointed bit
    sel = np.zeros((len(pts), blocks.block_count), dtype=np.int64)
    for i in range(1, blocks.block_count + 1):
        for k in range(1, t + 1):
            sel[:, i - 1] = sel[:, i - 1] * 2 + pts[:, man.selector_var(i, k) - 1]
        sel[:, i - 1] += 1
    z = np.zeros((len(pts), formula.var_count), dtype=np.uint8)
    rows = np.arange(len(pts))
    for i in range(1, blocks.block_count + 1):
        for j, var in enumerate(blocks.blocks[i - 1], start=1):
            cols = np.array([man.matrix_var(i, j, c) - 1 for c in range(1, m + 1)])
            z[:, var - 1] = pts[rows[:, None], cols[None, :]][rows, sel[:, i - 1] - 1]
    source_false = {c: _clause_falsified(z, formula.clause(c))
                    for c in range(1, len(formula.clauses) + 1)}
    for k, (c, selectors) in enumerate(man.provenance, start=1):
        expect = source_false[c].copy()
        for i, v in selectors:
            expect &= sel[:, i - 1] == v
        if not np.array_equal(_clause_falsified(pts, composed.clause(k)), expect):
            return False
    # completeness: every input falsifies a composed clause iff z falsifies a source clause
    any_source = np.zeros(len(pts), dtype=bool)
    for mask in source_false.values():
        any_source |= mask
    any_composed = np.zeros(len(pts), dtype=bool)
    for clause in composed.clauses:
        any_composed |= _clause_falsified(pts, clause)
    return bool(np.array_equal(any_source, any_composed))


def test_criterion_1_composition_exactness(verdict):
    rng = random.Random(SEED + 1)
    # (m, n, ell) with n*ell <= 4 and at most 20 composed bits
    configs = [(m, n, ell) for m in (2, 4) for n in range(1, 5) for ell in range(1, 5)
               if n * ell <= 4 and n * (m.bit_length() - 1 + ell * m) <= 20]
    failures = []
    for k in range(50):
        m, n, ell = configs[k % len(configs)]
        nv = n * ell
        f = random_formula(rng, nv, rng.randint(1, 4), max_width=min(3, nv))
        blocks = _random_blocks(rng, n, ell)
        if not _check_encoding(f, blocks, m):
            failures.append((m, n, ell, f.clauses))
    ok = not failures
    verdict(1, ok, f"formulas=50 configs={len(configs)} failures={len(failures)}")
    assert ok, failures[:3]


# 2. verifier cross-soundness ---------------------------------------------------

def _fuzz_cp(rng):
    n = rng.randint(2, 12)
    f = random_formula(rng, n, rng.randint(1, 5), max_width=3)
    steps = []
    for _ in range(rng.randint(2, 4)):
        if rng.random() < 0.6:
            steps.append(ClauseAxiom(rng.randint(1, len(f.clauses))))
        else:
            steps.append(BoolAxiom(rng.randint(1, n), rng.randint(0, 1)))
    for _ in range(rng.randint(1, 10)):
        current = derive_lines(f, CpProof(tuple(steps)))
        r = rng.random()
        if r < 0.6:
            i, j = rng.randint(1, len(steps)), rng.randint(1, len(steps))
            c1, c2 = rng.randint(0, 3), rng.randint(1, 3)
            steps.append(LinComb(i, j, c1, c2))
        elif r < 0.8:
            i = rng.randint(1, len(steps))
            if not current[i - 1].terms:
                continue
            steps.append(Divide(i, coefficient_gcd(current[i - 1])))
        else:
            steps.append(ClauseAxiom(rng.randint(1, len(f.clauses))) if rng.random() < 0.5
                         else BoolAxiom(rng.randint(1, n), rng.randint(0, 1)))
    return f, CpProof(tuple(steps))


def _implied_by_formula(f: CnfFormula, lines) -> bool:
    """Every line holds on every satisfying assignment of f (brute force)."""
    pts = _all_points(f.var_count)
    sat = np.ones(len(pts), dtype=bool)
    for clause in f.clauses:
        sat &= ~_clause_falsified(pts, clause)
    cols = pts.astype(np.int64)
    for line in lines:
        lhs = np.zeros(len(pts), dtype=np.int64)
        for v, c in line.terms:
            lhs += c * cols[:, v - 1]
        if (sat & (lhs < line.bound)).any():
            return False
    return True


def _mutate(rng, f, proof):
    """One mutation known to make the proof invalid; returns (kind, proof)."""
    steps = list(proof.steps)
    lines = derive_lines(f, proof)
    n = f.var_count
    while True:
        kind = rng.choice(["forward", "negative", "divisor", "axiom", "boolvar", "strengthen"])
        if kind == "forward":
            k = rng.randint(1, len(steps))
            steps_m = steps[:k - 1] + [LinComb(k, 1, 1, 1)] + steps[k:]
            return kind, CpProof(tuple(steps_m))
        if kind == "negative":
            k = rng.randint(2, len(steps) + 1)
            return kind, CpProof(tuple(steps[:k - 1] + [LinComb(1, k - 1, 1, -rng.randint(1, 3))]
                                       + steps[k - 1:]))
        if kind == "divisor":
            cands = [k for k, l in enumerate(lines, start=1) if l.terms]
            if not cands:
                continue
            k = rng.choice(cands)
            c = coefficient_gcd(lines[k - 1]) + rng.randint(1, 3)
            return kind, CpProof(tuple(steps + [Divide(k, c)]))
        if kind == "axiom":
            return kind, CpProof(tuple(steps + [ClauseAxiom(len(f.clauses) + rng.randint(1, 3))]))
        if kind == "boolvar":
            return kind, CpProof(tuple(steps + [BoolAxiom(n + rng.randint(1, 3), 0)]))
        # replace a derived step by a semantic step asserting a strictly
        # stronger line; kept only when brute force shows it is unsound
        cands = [k for k, s in enumerate(steps, start=1) if isinstance(s, (LinComb, Divide))]
        if not cands:
            continue
        k = rng.choice(cands)
        s = steps[k - 1]
        prem = (s.left, s.right) if isinstance(s, LinComb) else (s.line, s.line)
        line = lines[k - 1]
        strong = CpLine(line.terms, line.bound + rng.randint(1, 2))
        if semantic_counterexample([lines[p - 1] for p in prem], strong) is None:
            continue
        return kind, CpProof(tuple(steps[:k - 1] + [Semantic(prem[0], prem[1], strong)]
                                   + steps[k:]))


def test_criterion_2_verifier_cross_soundness(verdict):
    rng = random.Random(SEED + 2)
    valid_fail, implied_fail, corpus = 0, 0, []
    for _ in range(1000):
        f, proof = _fuzz_cp(rng)
        syn = verify_cp(f, proof, "syntactic", require_refutation=False)
        sem = verify_cp(f, proof, "semantic", require_refutation=False)
        lines = derive_lines(f, proof)
        if max(len(l.support) for l in lines) > 12:
            raise AssertionError("generator exceeded support 12")
        if not (syn.ok and sem.ok and sem.measures["unchecked"] == 0):
            valid_fail += 1
        if not _implied_by_formula(f, lines):
            implied_fail += 1
        corpus.append((f, proof))
    kinds, missed = {}, []
    for k in range(1000):
        f, proof = corpus[k]
        kind, bad = _mutate(rng, f, proof)
        kinds[kind] = kinds.get(kind, 0) + 1
        syn = verify_cp(f, bad, "syntactic", require_refutation=False)
        sem = verify_cp(f, bad, "semantic", require_refutation=False)
        if syn.ok and sem.ok:
            missed.append((kind, bad))
    ok = valid_fail == 0 and implied_fail == 0 and not missed
    verdict(2, ok, f"valid_rejected={valid_fail} unsound_lines={implied_fail} "
                   f"mutants_accepted={len(missed)} kinds={dict(sorted(kinds.items()))}")
    assert ok


# 3. lifting upper bounds ---------------------------------------------------------

def _lift_instances():
    rng = random.Random(SEED + 3)
    out = [UNIT, XOR2, complete_contradiction(1), complete_contradiction(2),
           complete_contradiction(3)]
    while len(out) < 10:
        f = random_unsat(rng, rng.choice((2, 3, 4)))
        if f not in out:
            out.append(f)
    return out


def _tree_exhaustively_correct(tree, composed, bits):
    for point in itertools.product((0, 1), repeat=bits):
        label, _ = trees.evaluate(tree, lambda v: point[v - 1])
        if label not in falsified_clauses(composed, point):
            return False
    return True


def _proof_block_width(f, proof, blocks):
    clauses, _ = derive_clauses(f, proof)
    return max(len({blocks.block_of(abs(l)) for l in c}) for c in clauses)


def test_criterion_3_lifting_upper_bounds(verdict):
    tree_runs = dag_runs = 0
    problems = []
    for f in _lift_instances():
        d, tree = optimal_depth_tree(f)
        for m in (2, 4):
            t = m.bit_length() - 1
            if f.var_count * (t + m) > 16:
                continue
            lifted, composed, man = lift_tree_refutation(tree, f, m)
            tree_runs += 1
            if trees.depth(lifted) > d * (math.log2(m) + 1):
                problems.append(("tree depth", f.clauses, m))
            if not _tree_exhaustively_correct(lifted, composed, man.var_count):
                problems.append(("tree wrong", f.clauses, m))
        structures = [BlockStructure.unit(f.var_count)]
        if f.var_count % 2 == 0:
            structures.append(BlockStructure.contiguous(f.var_count // 2, 2))
        for blocks in structures:
            _, proof = min_block_width(f, blocks, with_proof=True)
            bw = _proof_block_width(f, proof, blocks)
            size = proof_to_dag(f, proof).size
            for m in (2, 4):
                t = m.bit_length() - 1
                if blocks.block_count * (t + blocks.block_size * m) > 16:
                    continue
                res = lift_dag_refutation(f, proof, blocks, m)
                dag_runs += 1
                if res.dag.size > m ** (bw + 1) * size:
                    problems.append(("dag size", f.clauses, m, res.dag.size))
                if not verify_decision_dag(CnfRelation(res.composed), res.dag, exhaustive=True):
                    problems.append(("dag verify", f.clauses, m))
    ok = not problems
    verdict(3, ok, f"tree_lifts={tree_runs} dag_lifts={dag_runs} problems={len(problems)}")
    assert ok, problems[:3]


# 4. oracle gap regression ---------------------------------------------------------

# min_relation_depth of the composed complete contradiction, computed once by
# brute force and frozen: (d, m) -> depth
DEPTH_REGRESSION = {(1, 2): 2, (1, 4): 3, (2, 2): 4, (2, 4): 6, (3, 2): 6, (3, 4): 9}


def test_criterion_4_oracle_gap_regression(verdict):
    measured, problems = {}, []
    for (d, m), want in DEPTH_REGRESSION.items():
        composed, _ = compose_single(complete_contradiction(d), m)
        got = min_relation_depth(CnfRelation(composed))
        measured[(d, m)] = got
        if got != want:
            problems.append(("regression", d, m, got, want))
        if not d <= got <= d * (math.log2(m) + 1):
            problems.append(("bounds", d, m, got))
    for d in (1, 2, 3):
        if not measured[(d, 2)] < measured[(d, 4)]:
            problems.append(("monotone", d))
    ok = not problems
    verdict(4, ok, " ".join(f"d={d},m={m}:{v}" for (d, m), v in sorted(measured.items())))
    assert ok, problems


# 5. good selectors at micro scale ------------------------------------------------

ROWS4 = list(itertools.product((0, 1), repeat=4))


def _row_families(max_fixed: int):
    """Row sets of {0,1}^4 fixing a set of positions to given bits."""
    fams = []
    for size in range(0, max_fixed + 1):
        for pos in itertools.combinations(range(4), size):
            for bits in itertools.product((0, 1), repeat=size):
                fams.append(frozenset(r for r in ROWS4
                                      if all(r[p] == b for p, b in zip(pos, bits))))
    return fams


def _selector_families(n: int):
    subsets = [frozenset(s) for k in range(1, 5) for s in itertools.combinations(range(1, 5), k)]
    if n == 1:
        return [frozenset((v,) for v in s) for s in subsets]
    sides = [frozenset({1, 2, 3, 4}), frozenset({1, 2}), frozenset({2, 4}), frozenset({1, 2, 3})]
    fams = [frozenset(itertools.product(a, b)) for a in sides for b in sides]
    full = list(itertools.product(range(1, 5), repeat=2))
    fams.append(frozenset(p for p in full if p[0] != p[1]))
    fams.append(frozenset(p for p in full if (p[0] + p[1]) % 2 == 0))
    return fams


def _micro_boxes():
    """(box, rho) over n, ell in {1, 2} at m = 4."""
    for n, ell in itertools.product((1, 2), repeat=2):
        keys = [(i, j) for i in range(1, n + 1) for j in range(1, ell + 1)]
        rows = _row_families(2 if n * ell <= 2 else 1)
        for X in _selector_families(n):
            for combo in itertools.product(rows, repeat=len(keys)):
                yield Box(4, n, ell, X, dict(zip(keys, combo))), [None] * n
            if n == 2:
                # second block fixed by constant rows
                for b in (0, 1):
                    const = frozenset({(b,) * 4})
                    free_keys = [k for k in keys if k[0] == 1]
                    for combo in itertools.product(rows, repeat=len(free_keys)):
                        Y = dict(zip(free_keys, combo))
                        Y.update({k: const for k in keys if k[0] == 2})
                        yield Box(4, n, ell, X, Y), [None, (b,) * ell]


def _slice_image(box: Box, x) -> set:
    ys = [[box.Y[(i, j)] for j in range(1, box.ell + 1)] for i in range(1, box.n + 1)]
    out = set()
    per_block = []
    for i in range(box.n):
        choices = []
        for rows in itertools.product(*ys[i]):
            choices.append(tuple(r[x[i] - 1] for r in rows))
        per_block.append(set(choices))
    for z in itertools.product(*per_block):
        out.add(z)
    return out


def test_criterion_5_good_selectors(verdict):
    # thresholds scaled to m = 4: entropy 1/2 log m, row deficiency sqrt(m)
    frac, bound = Fraction(1, 2), 2
    total = feasible = found = 0
    problems = []
    for box, rho in _micro_boxes():
        total += 1
        ok, _ = is_rho_structured(box, rho, frac, bound)
        if not ok:
            continue
        crude, _ = union_bound(box, rho)
        if crude >= 1:
            continue
        feasible += 1
        try:
            good = find_good_x(box, rho, frac, bound)
        except Exception as e:    # any failure counts against the criterion
            problems.append((box, rho, repr(e)))
            continue
        sl = box.with_x(good.x)
        want = cube(rho, box.ell)
        if is_rho_like(sl, rho) and _slice_image(box, good.x) == want == box_image(sl):
            found += 1
        else:
            problems.append((box, rho, "slice not rho-like"))
    ok = feasible > 0 and found == feasible and not problems
    verdict(5, ok, f"boxes={total} feasible={feasible} found={found}")
    assert ok, problems[:2]


# 6. Fourier bound -----------------------------------------------------------------

def test_criterion_6_fourier_bound(verdict):
    signs = [(a, b) for a in (1, -1) for b in (1, -1)]
    sign_points = list(itertools.product(signs, repeat=2))
    selectors = list(itertools.product((1, 2), repeat=2))
    checked = skipped = 0
    failures = []
    for k in range(1, 5):
        for lam_support in itertools.combinations(selectors, k):
            lam = FiniteDistribution.uniform(lam_support, [2, 2])
            if not blockwise_min_entropy(lam) > Fraction(1, 2):
                skipped += 1
                continue
            for s in range(1, 5):
                for gam_support in itertools.combinations(sign_points, s):
                    gam = FiniteDistribution.uniform(gam_support, [4, 4])
                    for coords in ((), (1,), (2,), (1, 2)):
                        checked += 1
                        if not check_fourier_bound(lam, gam, coords).holds:
                            failures.append((lam_support, gam_support, coords))
    ok = not failures and checked > 0
    verdict(6, ok, f"checked={checked} lambda_below_precondition={skipped} "
                   f"failures={len(failures)}")
    assert ok, failures[:3]


# 7. restoring partition ----------------------------------------------------------

def _exceeds(q: Fraction, theta: Fraction, m: int, size: int) -> bool:
    """q > m^(-theta*size), exactly."""
    return q ** theta.denominator * m ** (theta.numerator * size) > 1


def test_criterion_7_restoring_partition(verdict):
    rng = random.Random(SEED + 7)
    problems = []
    for _ in range(200):
        m, N = rng.choice([(2, 2), (2, 3), (2, 4), (4, 2), (4, 3), (3, 2)])
        domain = list(itertools.product(range(1, m + 1), repeat=N))
        X = rng.sample(domain, rng.randint(1, len(domain)))
        part = restore_partition(X, m)
        theta = part.theta
        seen = set()
        remaining = set(X)
        for p in part.parts:
            if seen & p.members:
                problems.append("overlap")
            seen |= p.members
            if p.coords:
                hits = [x for x in remaining if tuple(x[c] for c in p.coords) == p.alpha]
                q = Fraction(len(hits), len(remaining))
                if not _exceeds(q, theta, m, len(p.coords)) or set(hits) != set(p.members):
                    problems.append(("selection", p.coords, p.alpha))
            elif p.members != remaining:
                problems.append("empty-I part does not take the rest")
            remaining -= p.members
            # blockwise min-entropy off I, by direct subset enumeration
            rest = [c for c in range(N) if c not in p.coords]
            members = list(p.members)
            for size in range(1, len(rest) + 1):
                for J in itertools.combinations(rest, size):
                    counts = {}
                    for x in members:
                        key = tuple(x[c] for c in J)
                        counts[key] = counts.get(key, 0) + 1
                    q = Fraction(max(counts.values()), len(members))
                    if _exceeds(q, theta, m, size):
                        problems.append(("entropy", p.coords, J))
        if seen != set(X):
            problems.append("not exhaustive")
    ok = not problems
    verdict(7, ok, f"sets=200 problems={len(problems)}")
    assert ok, problems[:3]


# 8. Bob cleanup -------------------------------------------------------------------

def test_criterion_8_bob_cleanup(verdict):
    rng = random.Random(SEED + 8)
    m, threshold = 4, Fraction(1, 4)
    problems, fired_total = [], 0
    for k in range(50):
        n = 1 if k < 30 else 2
        xs = tuple(range(1, rng.randint(1, 3) + 1))
        row_orders = []
        for _ in range(n):
            rows = list(ROWS4)
            rng.shuffle(rows)
            row_orders.append(tuple(rows))
        parts = [xs] + row_orders
        gens = [tuple(rng.choice(p) for p in parts) for _ in range(rng.randint(1, 4))]
        T = OrderedSimplex.down_closure(parts, gens)
        res = bob_cleanup(T, m, n, 1, threshold)
        fired_total += len(res.fired)
        problems += check_cleanup(T, res, m, n, 1)
        for key, d in res.densities(m).items():
            # configured bound: each choice fires at most once, adding
            # fewer than threshold * 2^m rows
            if not d <= res.bound or not d < len(res.fired) * threshold + (d == 0):
                problems.append(("density", key, d, res.bound, len(res.fired)))
    ok = not problems
    verdict(8, ok, f"simplices=50 firings={fired_total} problems={len(problems)}")
    assert ok, problems[:3]


# 9. end-to-end simulation ---------------------------------------------------------

def _simulation_instances():
    rng = random.Random(SEED + 9)
    out = [(UNIT, 2), (XOR2, 2), (complete_contradiction(3), 2), (UNIT, 4), (XOR2, 4)]
    while len(out) < 20:
        m = rng.choice((2, 4))
        n = rng.choice((2, 3)) if m == 2 else 2
        f = random_unsat(rng, n)
        if (f, m) not in out:
            out.append((f, m))
    return out


def test_criterion_9_end_to_end_simulation(verdict):
    runs = 0
    problems = []
    for k, (f, m) in enumerate(_simulation_instances()):
        tree = (optimal_depth_tree(f) if k % 2 == 0 else optimal_size_tree(f))[1]
        protocol = protocol_from_tree(tree, f, m)
        check_protocol(protocol, f)
        for z in itertools.product((0, 1), repeat=f.var_count):
            res = simulate_protocol(protocol, f, m, z)
            runs += 1
            if res.output not in falsified_clauses(f, z):
                problems.append(("output", f.clauses, m, z))
            if not all(s.fixing_ok for s in res.steps) or not res.final_fixing.ok:
                problems.append(("fixing", f.clauses, m, z))
    ok = not problems
    verdict(9, ok, f"instances=20 runs={runs} problems={len(problems)}")
    assert ok, problems[:3]


# 10. quadrant fact -------------------------------------------------------------------

def test_criterion_10_quadrant_fact(verdict):
    # odd row labels and even column labels realise every interleaving
    # of up to four row values with up to four column values
    row_levels, col_levels = (1, 3, 5, 7), (0, 2, 4, 6, 8)
    cases = 0
    problems = []
    for a_len, b_len in itertools.product(range(1, 5), repeat=2):
        X, Y = tuple(range(a_len)), tuple(range(b_len))
        for a in itertools.product(row_levels, repeat=a_len):
            for b in itertools.product(col_levels, repeat=b_len):
                nd = node(X, Y, lambda x: a[x], lambda y: b[y], ProtocolLeaf(0), ProtocolLeaf(1))
                for strategy in ("quadrant", "largest"):
                    cases += 1
                    q = quadrant_select(X, Y, nd, strategy)
                    cells = [(x, y) for x in q.X for y in q.Y]
                    inside = [a[x] < b[y] for x, y in cells]
                    same = all(inside) if q.inside else not any(inside)
                    sub = set(q.X) <= set(X) and set(q.Y) <= set(Y)
                    if not (same and sub and 4 * len(cells) >= a_len * b_len):
                        problems.append((a, b, strategy))
    ok = not problems
    verdict(10, ok, f"cases={cases} problems={len(problems)}")
    assert ok, problems[:3]
