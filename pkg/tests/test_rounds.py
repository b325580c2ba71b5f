import itertools
from fractions import Fraction

import pytest

from liftlab.structure.round_lemma import (RoundLemmaError, RoundParams, pointed_distribution,
                                           preconditions, round_lemma_find)
from liftlab.structure.simplex import (OrderedSimplex, SimplexError, bob_cleanup, check_cleanup,
                                       covers, default_threshold, largest_cube)

ROWS4 = list(itertools.product((0, 1), repeat=4))
Y_FULL = list(itertools.product(ROWS4, repeat=2))
X_FULL = list(itertools.product(range(1, 5), repeat=2))


# round lemma

def test_full_rectangle_needs_no_query():
    out = round_lemma_find(X_FULL, Y_FULL, 4)
    assert out.ok and out.coords == ()
    assert len(out.branches[()].Y) == len(Y_FULL)


def test_fixed_coordinate_is_queried():
    X = [(1, b) for b in range(1, 5)]
    out = round_lemma_find(X, Y_FULL, 4, RoundParams(theta=Fraction(1, 2)),
                           check_preconditions=False)
    assert out.ok and out.coords == (0,) and out.alpha == (1,)
    assert set(out.branches) == {(0,), (1,)}
    for z, br in out.branches.items():
        assert all(y[0][0] == z[0] for y in br.Y)
        assert br.report.get("d_slack").passed
        # the rows off I stay uniform; the allowance is D(Y) + |I| + 1 = 2
        cond = br.report.get("d_y_deficiency")
        assert cond.measured == 0 and cond.threshold == 2


def test_preconditions_reject_low_entropy_x():
    X = [(1, b) for b in range(1, 5)]
    assert not preconditions(X, Y_FULL, 4, RoundParams()).ok
    with pytest.raises(RoundLemmaError):
        round_lemma_find(X, Y_FULL, 4)


def test_empty_rectangle_is_an_error():
    with pytest.raises(RoundLemmaError):
        round_lemma_find([], Y_FULL, 4)


def test_pointed_distribution_counts_bits():
    Y = [((0, 1, 0, 0), (0, 0, 0, 0)), ((1, 1, 0, 0), (0, 0, 0, 0))]
    d = pointed_distribution(Y, (0,), (1,))
    assert d.probs == {(0,): Fraction(1, 2), (1,): Fraction(1, 2)}


def test_random_round_outcomes_are_consistent(rng):
    for _ in range(10):
        X = rng.sample(X_FULL, rng.randint(4, 16))
        Y = rng.sample(Y_FULL, rng.randint(64, 256))
        try:
            out = round_lemma_find(X, Y, 4, RoundParams(theta=Fraction(1, 2)),
                                   check_preconditions=False, strict=False)
        except RoundLemmaError:
            continue
        for z, br in out.branches.items():
            assert br.X and br.Y and set(br.X) <= set(X) and set(br.Y) <= set(Y)
            for x in br.X:
                for y in br.Y:
                    assert tuple(y[c][x[c] - 1] for c in out.coords) == z


# ordered simplices

def _diag():
    parts = [tuple(range(1, 5))] * 2
    return OrderedSimplex.down_closure(parts, [(a, b) for a in range(1, 5)
                                              for b in range(1, 5) if a + b <= 3])


def test_simplex_must_be_down_closed():
    with pytest.raises(SimplexError):
        OrderedSimplex(((1, 2), (1, 2)), frozenset({(2, 2)}))


def test_full_simplex_is_heavy():
    T = OrderedSimplex.full([(1, 2, 3, 4)] * 2)
    res = largest_cube(T, Fraction(1, 4))
    assert res.kind == "heavy" and res.M == 4


def test_empty_simplex():
    T = OrderedSimplex(((1, 2), (1, 2)), frozenset())
    res = largest_cube(T, Fraction(1, 4))
    assert res.kind == "empty" and res.M == 0
    assert all(not e for e in res.error_sets)


def test_diagonal_simplex_cube():
    T = _diag()
    assert largest_cube(T, Fraction(1, 4)).kind == "heavy"
    light = largest_cube(T, Fraction(1, 2))
    assert light.kind == "light" and light.M == 1
    assert covers(T, light.error_sets)


def test_simplex_json_round_trip():
    T = _diag()
    assert OrderedSimplex.from_json(T.to_json()) == T


def test_default_threshold():
    assert default_threshold(4) == Fraction(1, 4)
    with pytest.raises(SimplexError):
        default_threshold(8)


# Bob cleanup

def test_cleanup_of_empty_simplex():
    T = OrderedSimplex(((1, 2), tuple(ROWS4)), frozenset())
    res = bob_cleanup(T, 4, 1, 1)
    assert all(not v for v in res.error_sets.values())


def test_cleanup_of_full_product_adds_nothing():
    T = OrderedSimplex.full([(1, 2), tuple(ROWS4)])
    res = bob_cleanup(T, 4, 1, 1)
    assert all(not v for v in res.error_sets.values()) and not res.fired
    assert check_cleanup(T, res, 4, 1, 1) == []


def test_cleanup_of_thin_staircase():
    T = OrderedSimplex.down_closure([(1, 2), tuple(ROWS4)], [(1, ROWS4[3]), (2, ROWS4[0])])
    res = bob_cleanup(T, 4, 1, 1, bound=Fraction(1, 2))
    assert res.fired
    assert check_cleanup(T, res, 4, 1, 1) == []
    assert all(d <= Fraction(1, 2) for d in res.densities(4).values())


def test_cleanup_checks_part_count():
    T = OrderedSimplex.full([(1, 2)])
    with pytest.raises(SimplexError):
        bob_cleanup(T, 4, 1, 1)
