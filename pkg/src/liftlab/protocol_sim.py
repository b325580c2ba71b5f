"""Turn a real protocol for S_F composed with Ind_m into a decision tree
for S_F by walking the protocol on a shrinking rectangle.

Inputs are pairs (x, y) with x in [m]^n and y a tuple of n rows of m bits;
the gadget output for block i is y[i][x[i] - 1].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

from . import trees
from .formula import CnfFormula, falsified_clauses
from .gadget import selector_bits
from .proofs.common import ProofError
from .proofs.protocols import (ProtocolLeaf, ProtocolNode, RealProtocol, eval_protocol,
                               node as make_node)
from .structure.round_lemma import RoundLemmaError, RoundParams, round_lemma_find

TRANSCRIPT_SCHEMA = "liftlab.transcript/1"


class SimulationError(RuntimeError):
    pass


def x_domain(m: int, n: int) -> list:
    return list(itertools.product(range(1, m + 1), repeat=n))


def y_domain(m: int, n: int) -> list:
    rows = list(itertools.product((0, 1), repeat=m))
    return list(itertools.product(rows, repeat=n))


def gadget_output(x, y) -> tuple:
    return tuple(row[s - 1] for s, row in zip(x, y))


@dataclass
class QuadrantChoice:
    X: list
    Y: list
    inside: bool          # True: contained in the triangle, False: disjoint
    label: str            # "R", "R1", "R4" or "largest"


def _sorted_sides(X, Y, nd: ProtocolNode):
    rows = sorted(range(len(X)), key=lambda k: (nd.row_label[X[k]], k))
    cols = sorted(range(len(Y)), key=lambda k: (-nd.col_label[Y[k]], k))
    return [X[k] for k in rows], [Y[k] for k in cols]


def _relation(X, Y, nd: ProtocolNode):
    inside = all(nd.in_triangle(x, y) for x in X for y in Y)
    outside = not any(nd.in_triangle(x, y) for x in X for y in Y)
    return inside, outside


def quadrant_select(X: Sequence, Y: Sequence, nd: ProtocolNode,
                    strategy: str = "quadrant") -> QuadrantChoice:
    """A subrectangle of X x Y with at least a quarter of its size that is
    contained in or disjoint from the node's triangle.

    ``quadrant`` returns R itself when it already qualifies and otherwise
    the first or fourth quadrant (ceiling halves, first preferred).
    ``largest`` returns the largest qualifying prefix-by-prefix or
    suffix-by-suffix rectangle in the sorted orders.
    """
    if not X or not Y:
        raise SimulationError("empty rectangle")
    X, Y = _sorted_sides(list(X), list(Y), nd)
    inside, outside = _relation(X, Y, nd)
    if inside or outside:
        choice = QuadrantChoice(X, Y, inside, "R")
    elif strategy == "quadrant":
        hx, hy = -(-len(X) // 2), -(-len(Y) // 2)
        if nd.in_triangle(X[hx - 1], Y[hy - 1]):
            choice = QuadrantChoice(X[:hx], Y[:hy], True, "R1")
        else:
            choice = QuadrantChoice(X[-hx:], Y[-hy:], False, "R4")
    elif strategy == "largest":
        best = None
        for p in range(1, len(X) + 1):
            a = nd.row_label[X[p - 1]]
            q_in = sum(1 for y in Y if nd.col_label[y] > a)
            q_out = sum(1 for y in Y if nd.col_label[y] <= a)
            cands = [(p * q_in, 1, p, QuadrantChoice(X[:p], Y[:q_in], True, "largest")),
                     ((len(X) - p + 1) * q_out, 0, len(X) - p + 1,
                      QuadrantChoice(X[p - 1:], Y[len(Y) - q_out:], False, "largest"))]
            for c in cands:
                if c[0] and (best is None or c[:3] > best[:3]):
                    best = c
        choice = best[3]
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    ok_in, ok_out = _relation(choice.X, choice.Y, nd)
    if not (ok_in if choice.inside else ok_out):
        raise AssertionError("quadrant is neither contained in nor disjoint from the triangle")
    if 4 * len(choice.X) * len(choice.Y) < len(X) * len(Y):
        raise AssertionError("quadrant smaller than a quarter of the rectangle")
    return choice


@dataclass
class FixingResult:
    ok: bool
    violations: list      # block indices (1-based) with the wrong image
    image: set


def fixing_check(X, Y, rho, m: int = None) -> FixingResult:
    """Exact image Z of X x Y: fixed blocks must show only rho's bit and
    free blocks must show both bits."""
    image = {gadget_output(x, y) for x in X for y in Y}
    violations = []
    for i, v in enumerate(rho):
        seen = {z[i] for z in image}
        want = {0, 1} if v is None else {v[0] if isinstance(v, tuple) else v}
        if seen != want:
            violations.append(i + 1)
    return FixingResult(not violations, violations, image)


@dataclass
class Step:
    node: int
    quadrant: str
    inside: bool
    queried: tuple        # 1-based blocks
    answers: tuple
    x_size: int
    y_size: int
    eps: object
    round_ok: bool
    fixing_ok: bool

    def line(self) -> str:
        q = ",".join(map(str, self.queried)) or "-"
        a = "".join(map(str, self.answers)) or "-"
        eps = "inf" if self.eps == float("inf") else str(self.eps)
        return (f"node={self.node} quadrant={self.quadrant} inside={str(self.inside).lower()} "
                f"queried={q} answers={a} |X|={self.x_size} |Y|={self.y_size} "
                f"eps={eps} round_ok={str(self.round_ok).lower()} "
                f"fixing_ok={str(self.fixing_ok).lower()}")


@dataclass
class SimulationResult:
    output: object
    correct: bool
    queries: int
    within_budget: bool
    fixing_ok: bool
    steps: list = field(default_factory=list)
    final_fixing: FixingResult = None

    def transcript(self) -> str:
        lines = [s.line() for s in self.steps]
        lines.append(f"output={self.output} correct={str(self.correct).lower()} "
                     f"queries={self.queries} within_budget={str(self.within_budget).lower()} "
                     f"fixing_ok={str(self.fixing_ok).lower()}")
        return "\n".join(lines) + "\n"


def _node_ids(root) -> dict:
    ids, stack = {}, [root]
    while stack:
        nd = stack.pop()
        ids[id(nd)] = len(ids) + 1
        if isinstance(nd, ProtocolNode):
            stack.extend((nd.right, nd.left))
    return ids


def simulate_protocol(protocol: RealProtocol, formula: CnfFormula, m: int,
                      z: Union[Sequence[int], Callable[[int], int]],
                      params: RoundParams = RoundParams(), strategy: str = "largest",
                      budget: int = None) -> SimulationResult:
    """Walk the protocol, shrinking the rectangle at each node and querying
    z on the coordinates the round step fixes. ``z`` is a 0/1 sequence or a
    callback from a 1-based block index to a bit."""
    n = formula.var_count
    ask = z if callable(z) else (lambda i: z[i - 1])
    ids = _node_ids(protocol.root)
    X, Y = list(protocol.x_domain), list(protocol.y_domain)
    rho: list = [None] * n
    answers: dict = {}
    steps, all_fixing = [], True
    cur = protocol.root
    while isinstance(cur, ProtocolNode):
        q = quadrant_select(X, Y, cur, strategy)
        X, Y = q.X, q.Y
        free = [i for i in range(n) if rho[i] is None]
        queried, eps, round_ok = (), 0, True
        if free:
            xs = {tuple(x[i] for i in free): x for x in X}
            ys = {tuple(y[i] for i in free): y for y in Y}
            try:
                out = round_lemma_find(list(xs), list(ys), m, params,
                                       check_preconditions=False, strict=False)
            except RoundLemmaError as e:
                raise SimulationError(f"round step failed at node {ids[id(cur)]}: {e}; "
                                      f"rho={rho} |X|={len(X)} |Y|={len(Y)}") from None
            queried = tuple(free[c] + 1 for c in out.coords)
            for b in queried:
                if b not in answers:
                    answers[b] = ask(b)
            z_I = tuple(answers[b] for b in queried)
            br = out.branches[z_I]
            X = [xs[p] for p in sorted(br.X)]
            Y = [ys[p] for p in sorted(br.Y)]
            for b, bit in zip(queried, z_I):
                rho[b - 1] = bit
            eps, round_ok = out.eps, out.ok
        fx = fixing_check(X, Y, rho)
        all_fixing &= fx.ok
        steps.append(Step(ids[id(cur)], q.label, q.inside, queried,
                          tuple(answers[b] for b in queried), len(X), len(Y), eps,
                          round_ok, fx.ok))
        cur = cur.left if q.inside else cur.right
    final = fixing_check(X, Y, rho)
    all_fixing &= final.ok
    output = cur.output
    full_z = [ask(i) if i not in answers else answers[i] for i in range(1, n + 1)]
    correct = output in falsified_clauses(formula, full_z)
    return SimulationResult(output, correct, len(answers),
                            budget is None or len(answers) <= budget, all_fixing, steps, final)


def protocol_from_tree(tree: trees.Node, formula: CnfFormula, m: int) -> RealProtocol:
    """The natural protocol from a decision tree for S_F: for each query of
    z_i, Alice sends the selector bits of x_i (most significant first) and
    Bob then sends the pointed bit of row i."""
    n = formula.var_count
    X, Y = x_domain(m, n), y_domain(m, n)
    t = m.bit_length() - 1
    half = Fraction(1, 2)

    def rec(nd):
        if isinstance(nd, trees.Leaf):
            return ProtocolLeaf(nd.label)
        i = nd.var

        def alice(k: int, prefix: tuple):
            if k == t:
                value = 1 + int("".join(map(str, prefix)), 2) if prefix else 1
                # left when Bob's pointed bit is 1
                return make_node(X, Y, lambda x: half, lambda y: y[i - 1][value - 1],
                                 rec(nd.one), rec(nd.zero))
            # left when Alice's bit k is 0
            return make_node(X, Y, lambda x: selector_bits(x[i - 1], t)[k], lambda y: half,
                             alice(k + 1, prefix + (0,)), alice(k + 1, prefix + (1,)))

        return alice(0, ())

    return RealProtocol(X, Y, rec(tree))


def protocol_counterexample(protocol: RealProtocol, formula: CnfFormula):
    """An input (x, y) where the protocol's output clause is not falsified
    by the gadget outputs, or None when the protocol solves the problem."""
    for x in protocol.x_domain:
        for y in protocol.y_domain:
            out, _ = eval_protocol(protocol, x, y)
            if out not in falsified_clauses(formula, gadget_output(x, y)):
                return x, y
    return None


def check_protocol(protocol: RealProtocol, formula: CnfFormula) -> None:
    bad = protocol_counterexample(protocol, formula)
    if bad is not None:
        raise ProofError(f"protocol fails on x={bad[0]} y={bad[1]}")
