"""Constructive search for one round of the simulation's rectangle update.

Given R = X x Y with X in [m]^N and Y in ({0,1}^m)^N, find coordinates I
and, for every answer z on I, a subrectangle R' whose gadget outputs on I
equal z, whose selector part is dense again off I, and whose deficiencies
grew only as allowed. Coordinates are 0-based positions throughout.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from ..reports import Report, new_report
from .distributions import FiniteDistribution, blockwise_at_least, multiplicative_uniformity
from .exact import LogValue, log_threshold
from .partition import DEFAULT_THETA, restore_partition


class RoundLemmaError(RuntimeError):
    def __init__(self, message, attempts=None):
        super().__init__(message)
        self.attempts = attempts or []


@dataclass(frozen=True)
class RoundParams:
    theta: Fraction = DEFAULT_THETA               # restored entropy, fraction of log m
    entropy_frac: Fraction = Fraction(9, 10)      # precondition on X
    x_loss: Fraction = Fraction(1, 10)            # (c): per-coordinate drop, fraction of log m
    x_const: Fraction = Fraction(1)               # (c): additive constant, bits
    y_per_coord: Fraction = Fraction(1)           # (d): bits per fixed coordinate
    y_const: Fraction = Fraction(1)               # (d): additive constant, bits
    y_deficiency_bound: object = None             # precondition on D(Y) in bits, None to skip


@dataclass
class Branch:
    z: tuple
    X: frozenset
    Y: frozenset
    report: Report


@dataclass
class RoundOutcome:
    coords: tuple
    alpha: tuple
    part_index: int
    eps: object
    branches: dict                 # z -> Branch
    ok: bool
    preconditions: Report
    attempts: list = field(default_factory=list)   # (part index, coords, eps, ok)


def _x_deficiency(points, m: int, width: int) -> LogValue:
    return LogValue(Fraction(m ** width, len(points)))


def _y_deficiency(points, m: int, width: int) -> LogValue:
    return LogValue(Fraction(2 ** (m * width), len(points)))


def _project(points, coords) -> frozenset:
    return frozenset(tuple(p[c] for c in coords) for p in points)


def pointed_distribution(Y, coords, alpha) -> FiniteDistribution:
    counts = defaultdict(int)
    for y in Y:
        counts[tuple(y[c][a - 1] for c, a in zip(coords, alpha))] += 1
    total = len(Y)
    return FiniteDistribution(tuple(coords), (2,) * len(coords),
                              {k: Fraction(v, total) for k, v in counts.items()})


def preconditions(X, Y, m: int, params: RoundParams) -> Report:
    width = len(next(iter(X)))
    report = new_report()
    xd = FiniteDistribution.uniform(X, [m] * width)
    ok, _, _ = blockwise_at_least(xd, params.entropy_frac, m)
    report.add("x_blockwise_min_entropy_at_least", "holds" if ok else "violated",
               log_threshold(params.entropy_frac, m), ok)
    yd = _y_deficiency(Y, m, width)
    report.add("y_min_entropy", LogValue(Fraction(len(Y))), "info", True)
    if params.y_deficiency_bound is None:
        report.add("y_deficiency", yd, "unchecked", True)
    else:
        bound = Fraction(params.y_deficiency_bound)
        report.add("y_deficiency", yd, bound, yd <= bound)
    return report


def _branch(X, Y, coords, alpha, z, members, m, width, params, dx, dy):
    rest = [c for c in range(width) if c not in coords]
    slice_ = [y for y in Y if all(y[c][a - 1] == b for c, a, b in zip(coords, alpha, z))]
    if not slice_:
        return None
    groups = defaultdict(list)
    for y in slice_:
        groups[tuple(y[c] for c in coords)].append(y)
    a = min(groups, key=lambda key: (-len(groups[key]), key))
    X1, Y1 = frozenset(members), frozenset(groups[a])

    report = new_report()
    xs_fixed = _project(X1, coords)
    ys_fixed = _project(Y1, coords)
    outputs = {tuple(row[s - 1] for row, s in zip(yr, xr)) for xr in xs_fixed for yr in ys_fixed}
    cond_a = len(xs_fixed) == 1 and len(ys_fixed) == 1 and outputs == {tuple(z)}
    report.add("a_fixed_and_outputs_z", len(xs_fixed) * len(ys_fixed), 1, cond_a)

    x_rest, y_rest = _project(X1, rest), _project(Y1, rest)
    if rest:
        xd = FiniteDistribution.uniform(x_rest, [m] * len(rest))
        ok_b, _, _ = blockwise_at_least(xd, params.theta, m)
        report.add("b_blockwise_min_entropy_at_least", "holds" if ok_b else "violated",
                   log_threshold(params.theta, m), ok_b)
    else:
        report.add("b_blockwise_min_entropy_at_least", "vacuous", "vacuous", True)

    dx1 = _x_deficiency(x_rest, m, len(rest))
    bound_c = dx - log_threshold(params.x_loss, m, len(coords)) + LogValue.rational(params.x_const)
    report.add("c_x_deficiency", dx1, bound_c, dx1 <= bound_c)
    report.add("c_measured_constant", dx1 - dx + log_threshold(params.x_loss, m, len(coords)),
               params.x_const, True)

    dy1 = _y_deficiency(y_rest, m, len(rest))
    bound_d = dy + LogValue.rational(params.y_per_coord * len(coords) + params.y_const)
    report.add("d_y_deficiency", dy1, bound_d, dy1 <= bound_d)
    report.add("d_slack", bound_d - dy1, 0, True)
    return Branch(tuple(z), X1, Y1, report)


def round_lemma_find(X, Y, m: int, params: RoundParams = RoundParams(),
                     check_preconditions: bool = True, strict: bool = True) -> RoundOutcome:
    """Partition X, rank parts by how uniform their pointed bits are, and
    return the first part whose every branch meets (a)-(d).

    With ``strict`` False, a part whose branches all exist is returned even
    when (b)-(d) fail, with ``ok`` False.
    """
    X = sorted(set(tuple(x) for x in X))
    Y = sorted(set(tuple(tuple(r) for r in y) for y in Y))
    if not X or not Y:
        raise RoundLemmaError("empty rectangle")
    width = len(X[0])
    pre = preconditions(X, Y, m, params)
    if check_preconditions and not pre.ok:
        raise RoundLemmaError("preconditions unmet:\n" + pre.text())

    dx, dy = _x_deficiency(X, m, width), _y_deficiency(Y, m, width)
    partition = restore_partition(X, m, params.theta)
    ranked = []
    for k, part in enumerate(partition.parts):
        dist = pointed_distribution(Y, part.coords, part.alpha)
        eps = multiplicative_uniformity(dist, itertools.product((0, 1), repeat=len(part.coords)))
        ranked.append((eps, k, part))
    ranked.sort(key=lambda r: (r[0], r[1]))

    attempts, fallback = [], None
    for eps, k, part in ranked:
        branches = {}
        for z in itertools.product((0, 1), repeat=len(part.coords)):
            b = _branch(X, Y, part.coords, part.alpha, z, part.members, m, width, params, dx, dy)
            if b is None:
                branches = None
                break
            branches[z] = b
        if branches is None:
            attempts.append((k, part.coords, eps, False))
            continue
        ok = all(b.report.ok for b in branches.values())
        attempts.append((k, part.coords, eps, ok))
        outcome = RoundOutcome(part.coords, part.alpha, k, eps, branches, ok, pre, attempts)
        if ok:
            return outcome
        if fallback is None:
            fallback = outcome
    if not strict and fallback is not None:
        return fallback
    raise RoundLemmaError("no part satisfies (a)-(d) at this scale", attempts)
