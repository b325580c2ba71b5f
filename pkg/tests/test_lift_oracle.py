import itertools

import numpy as np
import pytest

from liftlab import trees
from liftlab.compose import compose_single
from liftlab.formula import BlockStructure, CnfFormula, falsified_clauses
from liftlab.lift import lift_dag_refutation, lift_tree_refutation, verify_tree_against_formula
from liftlab.oracle import (SAT, is_satisfiable, min_block_width, min_block_width_semantic,
                            min_depth, min_relation_depth, min_tree_size, min_width,
                            optimal_depth_tree, optimal_size_tree, saturation_bound,
                            tree_to_resolution)
from liftlab.proofs.common import ProofError
from liftlab.proofs.dags import verify_decision_dag
from liftlab.proofs.resolution import verify_resolution
from liftlab.relations import (CnfRelation, ComposedRelation, ExplicitRelation, RelationError,
                               subcube_points)

from conftest import UNIT, XOR2, complete_contradiction, random_unsat


def test_sat_detection():
    assert is_satisfiable(CnfFormula(2, ((1, 2), (-1,))))
    assert not is_satisfiable(XOR2)
    assert min_depth(CnfFormula(1, ((1,),))) is SAT
    assert min_width(CnfFormula(1, ((1,),))) is SAT


def test_xor_measures():
    assert min_depth(XOR2) == 2
    assert min_tree_size(XOR2) == 7
    assert optimal_size_tree(XOR2)[0] == 3
    assert min_width(XOR2) == 2
    assert min_block_width(XOR2, BlockStructure.contiguous(1, 2)) == 1
    assert min_block_width(XOR2, BlockStructure.unit(2)) == 2


@pytest.mark.parametrize("d", [1, 2, 3])
def test_complete_contradiction_depth(d):
    assert min_depth(complete_contradiction(d)) == d
    assert min_width(complete_contradiction(d)) == d


def test_block_width_two_routes_agree(rng):
    for _ in range(15):
        f = random_unsat(rng, 4)
        for blocks in (BlockStructure.unit(4), BlockStructure.contiguous(2, 2)):
            w, proof = min_block_width(f, blocks, with_proof=True)
            assert min_block_width_semantic(f, blocks) == w
            assert verify_resolution(f, proof, blocks).measures["block_width"] <= w


def test_width_proof_verifies(rng):
    for _ in range(10):
        f = random_unsat(rng, 5)
        w, proof = min_width(f, with_proof=True)
        v = verify_resolution(f, proof)
        assert v.ok and v.measures["width"] <= w


def test_saturation_bound_counts_clauses():
    assert saturation_bound(2, 2) == 1 + 4 + 4
    assert saturation_bound(3, 0) == 1


def test_relation_depth_on_explicit_relation():
    # output the parity of two bits
    rel = ExplicitRelation.from_function(2, lambda p: {p[0] ^ p[1]})
    assert min_relation_depth(rel) == 2
    rel = ExplicitRelation.from_function(2, lambda p: {0, 1})
    assert min_relation_depth(rel) == 0


def test_relation_depth_rejects_partial_relation():
    with pytest.raises(RelationError):
        min_relation_depth(CnfRelation(CnfFormula(1, ((1,),))))


def test_subcube_points_enumerates_extensions():
    pts = list(subcube_points(3, {2: 1}))[0]
    assert len(pts) == 4 and set(pts[:, 1]) == {1}


def test_composed_relation_matches_cnf_relation():
    g, man = compose_single(XOR2, 2)
    a, b = CnfRelation(g), ComposedRelation(XOR2, man)
    pts = next(subcube_points(man.var_count, {}))
    # a source clause is falsified iff one of its composed clauses is
    for c in range(1, len(XOR2.clauses) + 1):
        union = np.zeros(len(pts), dtype=bool)
        for alpha in itertools.product((1, 2), repeat=2):
            k = man.composed_clause_index(c, dict(zip((1, 2), alpha)))
            union |= a.valid_mask(pts, k)
        assert (union == b.valid_mask(pts, c)).all()


def test_lift_tree_depth_and_correctness():
    f = complete_contradiction(2)
    _, tree = optimal_depth_tree(f)
    for m, bound in ((2, 4), (4, 6)):
        lifted, composed, man = lift_tree_refutation(tree, f, m)
        assert trees.depth(lifted) <= bound
        verify_tree_against_formula(lifted, composed)
        for bits in itertools.product((0, 1), repeat=man.var_count):
            label, _ = trees.evaluate(lifted, lambda v: bits[v - 1])
            assert label in falsified_clauses(composed, bits)


def test_lift_tree_rejects_bad_source_tree():
    bad = trees.Query(1, trees.Leaf(2), trees.Leaf(1))
    with pytest.raises(ProofError):
        lift_tree_refutation(bad, UNIT, 2)


@pytest.mark.parametrize("blocks", [BlockStructure.unit(2), BlockStructure.contiguous(1, 2)])
def test_lift_dag_size_and_verification(blocks):
    _, proof = min_block_width(XOR2, blocks, with_proof=True)
    lifted = lift_dag_refutation(XOR2, proof, blocks, 2)
    assert lifted.dag.size <= lifted.size_bound
    assert verify_decision_dag(CnfRelation(lifted.composed), lifted.dag).ok


def test_lift_dag_rejects_invalid_proof():
    from liftlab.proofs.resolution import parse_resolution
    with pytest.raises(ProofError):
        lift_dag_refutation(XOR2, parse_resolution("a 1\n"), BlockStructure.unit(2), 2)


def test_tree_to_resolution_on_complete_contradiction():
    f = complete_contradiction(3)
    _, tree = optimal_depth_tree(f)
    v = verify_resolution(f, tree_to_resolution(f, tree))
    assert v.ok and v.measures["width"] <= 3
