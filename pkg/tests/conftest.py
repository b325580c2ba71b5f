import itertools
import random

import pytest

from liftlab.formula import CnfFormula, make_clause


def complete_contradiction(d: int) -> CnfFormula:
    """All 2^d full-width clauses over d variables; needs depth d."""
    clauses = tuple(make_clause([v if s else -v for v, s in zip(range(1, d + 1), signs)])
                    for signs in itertools.product((1, 0), repeat=d))
    return CnfFormula(d, clauses)


def random_formula(rng: random.Random, n: int, clause_count: int, max_width: int = 3) -> CnfFormula:
    clauses = []
    for _ in range(clause_count):
        width = rng.randint(1, min(max_width, n))
        vars_ = rng.sample(range(1, n + 1), width)
        clauses.append(make_clause([v if rng.random() < 0.5 else -v for v in vars_]))
    return CnfFormula(n, tuple(clauses))


def random_unsat(rng: random.Random, n: int, max_width: int = 3) -> CnfFormula:
    """Random clauses until unsatisfiable (checked by the DPLL oracle)."""
    from liftlab.oracle import is_satisfiable
    clauses = []
    while True:
        width = rng.randint(1, min(max_width, n))
        vars_ = rng.sample(range(1, n + 1), width)
        clauses.append(make_clause([v if rng.random() < 0.5 else -v for v in vars_]))
        f = CnfFormula(n, tuple(dict.fromkeys(clauses)))
        if not is_satisfiable(f):
            return f


@pytest.fixture
def rng():
    return random.Random(20240601)


XOR2 = CnfFormula(2, ((1, 2), (1, -2), (-1, 2), (-1, -2)))
UNIT = CnfFormula(1, ((1,), (-1,)))
