"""Brute-force complexity measures for small formulas and relations.

Every function returns either an integer or the :data:`SAT` marker when
the formula is satisfiable (no refutation exists).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from . import trees
from .formula import BlockStructure, CnfFormula, clause_block_width, make_clause
from .proofs.resolution import Axiom, Resolve, ResolutionProof
from .relations import RelationError, SearchRelation


class _Sat:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "SAT"

    __str__ = __repr__


SAT = _Sat()


def _assign(clauses: frozenset, var: int, value: int) -> frozenset:
    sat_lit = var if value else -var
    out = set()
    for c in clauses:
        if sat_lit in c:
            continue
        if -sat_lit in c:
            c = tuple(l for l in c if l != -sat_lit)
        out.add(c)
    return frozenset(out)


def _vars(clauses) -> list:
    return sorted({abs(l) for c in clauses for l in c})


def is_satisfiable(formula: CnfFormula) -> bool:
    """Small DPLL with unit propagation."""
    def dpll(cs: frozenset) -> bool:
        while True:
            if () in cs:
                return False
            if not cs:
                return True
            unit = next((c[0] for c in cs if len(c) == 1), None)
            if unit is None:
                break
            cs = _assign(cs, abs(unit), 1 if unit > 0 else 0)
        v = min(_vars(cs))
        return dpll(_assign(cs, v, 0)) or dpll(_assign(cs, v, 1))
    return dpll(frozenset(formula.clauses))


def _min_tree(formula: CnfFormula, combine):
    """Shared recursion for depth and tree size. Returns (value, tree)."""
    @lru_cache(maxsize=None)
    def rec(cs: frozenset):
        empty = [c for c in cs if not c]
        if empty:
            return 0, None
        if not cs:
            return math.inf, None
        best, best_var = math.inf, None
        for v in _vars(cs):
            a, _ = rec(_assign(cs, v, 0))
            b, _ = rec(_assign(cs, v, 1))
            val = combine(a, b)
            if val < best:
                best, best_var = val, v
        return best, best_var

    def build(cs: frozenset, fixed: dict) -> trees.Node:
        _, v = rec(cs)
        if v is None:
            # first formula clause falsified by the path
            for k, clause in enumerate(formula.clauses, start=1):
                if all(fixed.get(abs(l)) == (0 if l > 0 else 1) for l in clause):
                    return trees.Leaf(k)
            raise AssertionError("no falsified clause at a leaf")
        return trees.Query(v, build(_assign(cs, v, 0), {**fixed, v: 0}),
                           build(_assign(cs, v, 1), {**fixed, v: 1}))

    root = frozenset(formula.clauses)
    value, _ = rec(root)
    if value == math.inf:
        return SAT, None
    return value, build(root, {})


def min_depth(formula: CnfFormula):
    return _min_tree(formula, lambda a, b: 1 + max(a, b))[0]


def min_tree_size(formula: CnfFormula):
    """Least number of nodes (queries plus leaves) of a decision tree for
    S_F, equal to the least length of a tree-like resolution refutation."""
    internal = _min_tree(formula, lambda a, b: a + b + 1)[0]
    return internal if internal is SAT else 2 * internal + 1


def optimal_depth_tree(formula: CnfFormula):
    """(depth, tree) for a depth-optimal decision tree, or (SAT, None)."""
    return _min_tree(formula, lambda a, b: 1 + max(a, b))


def optimal_size_tree(formula: CnfFormula):
    """(query count, tree) for a tree with fewest queries, or (SAT, None)."""
    return _min_tree(formula, lambda a, b: a + b + 1)


def tree_to_resolution(formula: CnfFormula, tree: trees.Node) -> ResolutionProof:
    """Refutation read off a decision tree solving S_F.

    A subtree yields a clause falsified by every input reaching it; a query
    node resolves its children's clauses on the queried variable, or reuses
    one child's clause when that clause does not mention the variable.
    """
    steps: list = []

    def rec(node) -> tuple:
        if isinstance(node, trees.Leaf):
            steps.append(Axiom(node.label))
            return len(steps), formula.clause(node.label)
        k0, c0 = rec(node.zero)
        if node.var not in c0:
            return k0, c0
        k1, c1 = rec(node.one)
        if -node.var not in c1:
            return k1, c1
        steps.append(Resolve(k0, k1, node.var))
        lits = [l for l in c0 + c1 if abs(l) != node.var]
        return len(steps), make_clause(lits, allow_tautology=True)

    final, _ = rec(tree)
    steps = steps[:final]
    return _prune(ResolutionProof(tuple(steps)))


def _prune(proof: ResolutionProof) -> ResolutionProof:
    """Keep only steps the final step depends on, renumbered."""
    need, stack = set(), [len(proof.steps)]
    while stack:
        k = stack.pop()
        if k in need:
            continue
        need.add(k)
        s = proof.steps[k - 1]
        if isinstance(s, Resolve):
            stack.extend((s.left, s.right))
    order = sorted(need)
    new_index = {k: i for i, k in enumerate(order, start=1)}
    steps = []
    for k in order:
        s = proof.steps[k - 1]
        steps.append(s if isinstance(s, Axiom)
                     else Resolve(new_index[s.left], new_index[s.right], s.pivot))
    uses: dict = {}
    for s in steps:
        if isinstance(s, Resolve):
            for p in (s.left, s.right):
                uses[p] = uses.get(p, 0) + 1
    return ResolutionProof(tuple(steps), tree_like=all(u == 1 for u in uses.values()))


@dataclass
class Saturation:
    refuted: bool
    clauses: dict          # clause -> ("a", k) or ("r", c1, c2, pivot)
    order: list

    def proof(self) -> ResolutionProof:
        if not self.refuted:
            raise ValueError("saturation did not derive the empty clause")
        index, steps = {}, []
        for c in self.order:
            how = self.clauses[c]
            steps.append(Axiom(how[1]) if how[0] == "a"
                         else Resolve(index[how[1]], index[how[2]], how[3]))
            index[c] = len(steps)
            if not c:
                break
        return _prune(ResolutionProof(tuple(steps)))


def saturate(formula: CnfFormula, accept) -> Saturation:
    """Resolution closure restricted to clauses for which ``accept`` holds
    (tautologies are never added). Stops once the empty clause appears."""
    clauses, order = {}, []
    queue = []
    for k, c in enumerate(formula.clauses, start=1):
        if accept(c) and c not in clauses:
            clauses[c] = ("a", k)
            order.append(c)
            queue.append(c)
    occ: dict = {}
    head = 0
    while head < len(queue) and () not in clauses:
        c = queue[head]
        head += 1
        for lit in c:
            for d in list(occ.get(-lit, ())):
                lits = set(c) | set(d)
                lits.discard(lit)
                lits.discard(-lit)
                if any(-l in lits for l in lits):
                    continue
                r = tuple(sorted(lits, key=lambda l: (abs(l), l)))
                if r in clauses or not accept(r):
                    continue
                clauses[r] = ("r", c, d, abs(lit)) if lit in c else ("r", d, c, abs(lit))
                order.append(r)
                queue.append(r)
                if not r:
                    return Saturation(True, clauses, order)
        for lit in c:
            occ.setdefault(lit, []).append(c)
    return Saturation(() in clauses, clauses, order)


def width_saturation(formula: CnfFormula, w: int) -> Saturation:
    return saturate(formula, lambda c: len(c) <= w)


def min_width(formula: CnfFormula, with_proof: bool = False):
    if not formula.has_empty_clause() and is_satisfiable(formula):
        return (SAT, None) if with_proof else SAT
    for w in range(0, formula.var_count + 1):
        s = width_saturation(formula, w)
        if s.refuted:
            return (w, s.proof()) if with_proof else w
    raise AssertionError("unsatisfiable formula not refuted at full width")


def min_block_width(formula: CnfFormula, blocks: BlockStructure, with_proof: bool = False):
    if not formula.has_empty_clause() and is_satisfiable(formula):
        return (SAT, None) if with_proof else SAT
    for b in range(0, blocks.block_count + 1):
        s = saturate(formula, lambda c: clause_block_width(c, blocks) <= b)
        if s.refuted:
            return (b, s.proof()) if with_proof else b
    raise AssertionError("unsatisfiable formula not refuted at full block-width")


def min_block_width_semantic(formula: CnfFormula, blocks: BlockStructure, limit: int = 10):
    """Independent route: least b such that a decision-dag over all
    consistent conjunctions of block-width <= b solves S_F.

    Subcubes are bitmasks over all 2^n inputs. A conjunction is solved if
    its subcube lies inside one clause's falsifying set, or inside the
    union of two solved subcubes; iterate to a fixpoint.
    """
    n = formula.var_count
    if n > limit:
        raise ValueError(f"{n} variables exceeds the semantic oracle limit {limit}")
    if not formula.has_empty_clause() and is_satisfiable(formula):
        return SAT
    points = range(1 << n)

    def cube(fixed: dict) -> int:
        mask = 0
        for p in points:
            if all((p >> (v - 1)) & 1 == b for v, b in fixed.items()):
                mask |= 1 << p
        return mask

    bad = [cube({abs(l): 0 if l > 0 else 1 for l in c}) for c in formula.clauses]
    for b in range(0, blocks.block_count + 1):
        cubes = set()
        for chosen in itertools.combinations(range(1, blocks.block_count + 1), b):
            vars_ = [v for i in chosen for v in blocks.blocks[i - 1]]
            for vals in itertools.product((None, 0, 1), repeat=len(vars_)):
                cubes.add(cube({v: x for v, x in zip(vars_, vals) if x is not None}))
        solved = {c for c in cubes if any(c & ~f == 0 for f in bad)}
        changed = True
        while changed:
            changed = False
            sl = list(solved)
            for c in cubes - solved:
                if any(c & ~(a | d) == 0 for a, d in itertools.combinations_with_replacement(sl, 2)):
                    solved.add(c)
                    changed = True
        if cube({}) in solved:
            return b
    raise AssertionError("unsatisfiable formula not solved at full block-width")


def min_relation_depth(relation: SearchRelation, check_total: bool = True) -> int:
    """Least depth of a decision tree solving the relation.

    Decision version with memoised lower/upper bounds per subproblem and
    the relation's own lower-bound and relevance hooks.
    """
    if relation.n_bits > 24:
        raise RelationError("relation depth search is limited to 24 input bits")
    if check_total:
        relation.check_total()
    memo: dict = {}

    def solve(fixed: dict, budget: int) -> bool:
        key = relation.memo_key(fixed)
        lo, hi = memo.get(key, (0, math.inf))
        if budget >= hi:
            return True
        if budget < lo:
            return False
        if relation.constant_output(fixed) is not None:
            memo[key] = (0, 0)
            return True
        lo = max(lo, relation.lower_bound(fixed), 1)
        if budget < lo:
            memo[key] = (lo, hi)
            return False
        for v in relation.relevant_vars(fixed):
            if all(solve({**fixed, v: b}, budget - 1) for b in (0, 1)):
                memo[key] = (lo, budget)
                return True
        memo[key] = (budget + 1, hi)
        return False

    d = relation.lower_bound({})
    while not solve({}, d):
        d += 1
    return d


def saturation_bound(n: int, w: int) -> int:
    """Number of non-tautological clauses of width <= w over n variables."""
    return sum(math.comb(n, i) * 2 ** i for i in range(w + 1))
