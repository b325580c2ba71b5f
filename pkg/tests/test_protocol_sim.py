import itertools
from fractions import Fraction

import pytest

from liftlab.formula import CnfFormula
from liftlab.oracle import optimal_depth_tree
from liftlab.proofs.common import ProofError
from liftlab.proofs.protocols import ProtocolLeaf, RealProtocol, eval_protocol, node
from liftlab.protocol_sim import (check_protocol, fixing_check, gadget_output,
                                  protocol_counterexample, protocol_from_tree, quadrant_select,
                                  simulate_protocol, x_domain, y_domain)

from conftest import UNIT, XOR2


def _triangle(X, Y, a, b):
    return node(X, Y, lambda x: a[x], lambda y: b[y], ProtocolLeaf(0), ProtocolLeaf(1))


def test_contained_rectangle_is_returned_whole():
    nd = _triangle((1, 2), (1, 2), {1: 0, 2: 0}, {1: 1, 2: 1})
    q = quadrant_select([1, 2], [1, 2], nd)
    assert q.label == "R" and q.inside and len(q.X) * len(q.Y) == 4


def test_disjoint_rectangle_is_returned_whole():
    nd = _triangle((1, 2), (1, 2), {1: 2, 2: 2}, {1: 1, 2: 1})
    q = quadrant_select([1, 2], [1, 2], nd)
    assert q.label == "R" and not q.inside


def test_diagonal_split_hits_quarter_boundary():
    # a(x) < b(y) only at (x=1, y=1)
    nd = _triangle((1, 2), (1, 2), {1: 0, 2: 1}, {1: 1, 2: 0})
    q = quadrant_select([1, 2], [1, 2], nd)
    assert len(q.X) * len(q.Y) == 1
    assert all(nd.in_triangle(x, y) == q.inside for x in q.X for y in q.Y)


def test_largest_strategy_is_at_least_a_quarter():
    nd = _triangle((1, 2, 3), (1, 2, 3), {1: 0, 2: 1, 3: 2}, {1: 3, 2: 1, 3: 0})
    q = quadrant_select([1, 2, 3], [1, 2, 3], nd, strategy="largest")
    assert 4 * len(q.X) * len(q.Y) >= 9


def test_fixing_check_examples():
    X, Y = x_domain(2, 1), y_domain(2, 1)
    assert fixing_check(X, Y, [None]).ok
    Y1 = [y for y in Y if gadget_output((1,), y) == (1,) and gadget_output((2,), y) == (1,)]
    assert fixing_check(X, Y1, [1]).ok
    res = fixing_check(X, Y1, [None])
    assert not res.ok and res.violations == [1]


def test_protocol_from_tree_solves_the_composed_problem():
    _, tree = optimal_depth_tree(XOR2)
    protocol = protocol_from_tree(tree, XOR2, 2)
    assert protocol_counterexample(protocol, XOR2) is None
    assert protocol.depth == 4


def test_wrong_protocol_is_caught():
    X, Y = x_domain(2, 1), y_domain(2, 1)
    bad = RealProtocol(X, Y, ProtocolLeaf(1))
    with pytest.raises(ProofError):
        check_protocol(bad, UNIT)


def test_simulation_of_unit_queries_once():
    _, tree = optimal_depth_tree(UNIT)
    protocol = protocol_from_tree(tree, UNIT, 2)
    for z in ((0,), (1,)):
        res = simulate_protocol(protocol, UNIT, 2, z)
        assert res.correct and res.fixing_ok and res.queries == 1


def test_simulation_with_empty_clause_needs_no_queries():
    f = CnfFormula(1, ((),))
    protocol = RealProtocol(x_domain(2, 1), y_domain(2, 1), ProtocolLeaf(1))
    res = simulate_protocol(protocol, f, 2, (0,))
    assert res.correct and res.queries == 0 and res.steps == []


def test_simulation_on_two_blocks_within_budget():
    _, tree = optimal_depth_tree(XOR2)
    protocol = protocol_from_tree(tree, XOR2, 2)
    for z in itertools.product((0, 1), repeat=2):
        res = simulate_protocol(protocol, XOR2, 2, z, budget=2)
        assert res.correct and res.within_budget and res.fixing_ok
        assert "output=" in res.transcript()


def test_step_lines_have_fixed_fields():
    _, tree = optimal_depth_tree(UNIT)
    res = simulate_protocol(protocol_from_tree(tree, UNIT, 2), UNIT, 2, (1,))
    keys = [kv.split("=")[0] for kv in res.steps[0].line().split()]
    assert keys == ["node", "quadrant", "inside", "queried", "answers", "|X|", "|Y|", "eps",
                    "round_ok", "fixing_ok"]


def test_gadget_output_reads_pointed_bits():
    assert gadget_output((2, 1), ((0, 1), (1, 0))) == (1, 1)


def test_protocol_evaluation_matches_direct_reevaluation(rng):
    X, Y = x_domain(4, 1), y_domain(2, 2)[:4]
    a = {x: Fraction(rng.randint(0, 6), 2) for x in X}
    b = {y: Fraction(rng.randint(0, 6), 2) for y in Y}
    p = RealProtocol(X, Y, _triangle(X, Y, a, b))
    for x in X:
        for y in Y:
            out, path = eval_protocol(p, x, y)
            assert out == (0 if a[x] < b[y] else 1) and len(path) == 1
