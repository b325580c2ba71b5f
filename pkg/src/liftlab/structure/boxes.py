"""Product boxes X x prod Y^{ij}, their gadget images, and good selectors."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from mpmath import iv

from ..formula import check_block_assignment, fixed_blocks, free_blocks
from ..reports import Report, new_report
from .distributions import FiniteDistribution, blockwise_min_entropy
from .exact import LogValue, certified_le, log_threshold


class BoxError(ValueError):
    pass


@dataclass(frozen=True)
class Box:
    """X is a set of selector tuples in [m]^n; Y maps (block, row) to a set
    of m-bit tuples."""

    m: int
    n: int
    ell: int
    X: frozenset
    Y: dict

    def __post_init__(self):
        X = frozenset(tuple(x) for x in self.X)
        Y = {k: frozenset(tuple(r) for r in v) for k, v in self.Y.items()}
        if not X:
            raise BoxError("empty selector set")
        for x in X:
            if len(x) != self.n or any(not 1 <= v <= self.m for v in x):
                raise BoxError(f"selector {x} outside [{self.m}]^{self.n}")
        want = {(i, j) for i in range(1, self.n + 1) for j in range(1, self.ell + 1)}
        if set(Y) != want:
            raise BoxError("row sets must be indexed by every (block, row)")
        for k, rows in Y.items():
            if not rows:
                raise BoxError(f"empty row set at {k}")
            if any(len(r) != self.m or any(b not in (0, 1) for b in r) for r in rows):
                raise BoxError(f"row set {k} holds a non-{self.m}-bit row")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)

    @classmethod
    def full(cls, m: int, n: int, ell: int) -> "Box":
        rows = frozenset(itertools.product((0, 1), repeat=m))
        return cls(m, n, ell, frozenset(itertools.product(range(1, m + 1), repeat=n)),
                   {(i, j): rows for i in range(1, n + 1) for j in range(1, ell + 1)})

    def with_x(self, x) -> "Box":
        return Box(self.m, self.n, self.ell, frozenset([tuple(x)]), self.Y)

    def points(self):
        """All (x, ys) with ys[i-1][j-1] the row chosen for (i, j)."""
        keys = sorted(self.Y)
        for x in sorted(self.X):
            for rows in itertools.product(*(sorted(self.Y[k]) for k in keys)):
                ys = tuple(tuple(rows[(i - 1) * self.ell + j - 1] for j in range(1, self.ell + 1))
                           for i in range(1, self.n + 1))
                yield x, ys

    def x_distribution(self, blocks: Sequence[int]) -> FiniteDistribution:
        """Uniform X marginal on the given 1-based blocks."""
        return FiniteDistribution.uniform({tuple(x[i - 1] for i in blocks) for x in self.X},
                                          [self.m] * len(blocks), coords=blocks)

    def to_json(self) -> str:
        doc = {"m": self.m, "n": self.n, "ell": self.ell,
               "X": sorted(list(x) for x in self.X),
               "Y": [[i, j, sorted(list(r) for r in self.Y[(i, j)])] for i, j in sorted(self.Y)]}
        return json.dumps(doc, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Box":
        try:
            doc = json.loads(text)
            return cls(doc["m"], doc["n"], doc["ell"], frozenset(tuple(x) for x in doc["X"]),
                       {(i, j): frozenset(tuple(r) for r in rows) for i, j, rows in doc["Y"]})
        except (KeyError, TypeError, ValueError) as e:
            raise BoxError(f"bad box document: {e}") from None


def decode(x, ys) -> tuple:
    """Gadget output block string: z_i = (ys[i][j][x_i]) over rows j."""
    return tuple(tuple(row[xi - 1] for row in rows) for xi, rows in zip(x, ys))


def cube(rho, ell: int) -> set:
    choices = [[tuple(v)] if v is not None else list(itertools.product((0, 1), repeat=ell))
               for v in rho]
    return set(itertools.product(*choices))


def pointed_bits(rows: Iterable, selector: int) -> frozenset:
    return frozenset(r[selector - 1] for r in rows)


def box_image(box: Box) -> set:
    """Exact image of the box under decode, computed per selector."""
    image = set()
    for x in box.X:
        per_block = []
        for i in range(1, box.n + 1):
            bits = [sorted(pointed_bits(box.Y[(i, j)], x[i - 1])) for j in range(1, box.ell + 1)]
            per_block.append(list(itertools.product(*bits)))
        image.update(itertools.product(*per_block))
    return image


def is_rho_like(A, rho, ell: int = None) -> bool:
    """Whether decode(A) equals Cube(rho); A is a Box or an iterable of
    (x, ys) points."""
    if isinstance(A, Box):
        check_block_assignment(rho, A.n, A.ell)
        return box_image(A) == cube(rho, A.ell)
    if ell is None:
        raise BoxError("ell is required for an explicit point set")
    return {decode(x, ys) for x, ys in A} == cube(rho, ell)


def fixed_positions(rows: Iterable) -> frozenset:
    """1-based bit positions on which all rows agree."""
    rows = list(rows)
    return frozenset(p for p in range(1, len(rows[0]) + 1)
                     if len({r[p - 1] for r in rows}) == 1)


def row_deficiency(box: Box, key) -> LogValue:
    return LogValue(Fraction(2 ** box.m, len(box.Y[key])))


def _defect_le(d: LogValue, bound, m: int) -> bool:
    if bound is None:
        root = math.isqrt(m)
        if root * root == m:
            return d <= root
        return certified_le(d.interval, lambda: iv.sqrt(iv.mpf(m)))
    return d <= Fraction(bound)


def is_rho_structured(box: Box, rho, entropy_frac=Fraction(9, 10), defect_bound=None):
    """(ok, report) for the three box conditions.

    ``defect_bound`` None means sqrt(m); ``entropy_frac`` scales log m.
    """
    check_block_assignment(rho, box.n, box.ell)
    report = new_report()
    fixed, free = fixed_blocks(rho), free_blocks(rho)

    bad = 0
    for x in box.X:
        for i in fixed:
            for j in range(1, box.ell + 1):
                if pointed_bits(box.Y[(i, j)], x[i - 1]) != {rho[i - 1][j - 1]}:
                    bad += 1
    report.add("fixed_gadgets_violations", bad, 0, bad == 0)

    if free:
        h = blockwise_min_entropy(box.x_distribution(free))
        need = log_threshold(entropy_frac, box.m)
        report.add("free_blockwise_min_entropy", h, need, h >= need)
    else:
        report.add("free_blockwise_min_entropy", "vacuous", "vacuous", True)

    threshold = f"{math.sqrt(box.m):.9g}" if defect_bound is None else Fraction(defect_bound)
    for i in free:
        for j in range(1, box.ell + 1):
            d = row_deficiency(box, (i, j))
            report.add(f"row_deficiency_{i}_{j}", d, threshold, _defect_le(d, defect_bound, box.m))
    return report.ok, report


@dataclass
class GoodX:
    x: tuple
    report: Report


class UnionBoundInfeasible(BoxError):
    pass


def union_bound(box: Box, rho) -> tuple:
    """(crude, exact) sums over free (i, j) of the chance that a selector
    lands on a fixed bit position: crude uses |fixed| * max Pr[x_i = v],
    exact sums Pr[x_i in fixed positions]."""
    crude, exact = Fraction(0), Fraction(0)
    for i in free_blocks(rho):
        dist = box.x_distribution([i])
        pmax = dist.max_prob()
        for j in range(1, box.ell + 1):
            fixedp = fixed_positions(box.Y[(i, j)])
            crude += len(fixedp) * pmax
            exact += sum((q for (v,), q in dist.probs.items() if v in fixedp), Fraction(0))
    return crude, exact


def is_good(box: Box, rho, x) -> bool:
    return all(x[i - 1] not in fixed_positions(box.Y[(i, j)])
               for i in free_blocks(rho) for j in range(1, box.ell + 1))


def find_good_x(box: Box, rho, entropy_frac=Fraction(9, 10), defect_bound=None,
                require_structured: bool = True, require_union_bound: bool = True) -> GoodX:
    """First selector (in sorted order) whose slice is rho-like."""
    ok, report = is_rho_structured(box, rho, entropy_frac, defect_bound)
    if require_structured and not ok:
        raise BoxError("box is not rho-structured:\n" + report.text())
    crude, exact = union_bound(box, rho)
    report.add("union_bound_crude", crude, 1, crude < 1)
    report.add("union_bound_exact", exact, 1, exact < 1)
    if require_union_bound and crude >= 1:
        raise UnionBoundInfeasible(f"union bound infeasible: measured {crude} >= 1, "
                                   f"slack {1 - crude}")
    for x in sorted(box.X):
        if is_good(box, rho, x):
            if is_rho_like(box.with_x(x), rho):
                return GoodX(x, report)
            if ok:
                raise AssertionError(f"good selector {x} gives a slice that is not rho-like")
    raise BoxError(f"no good selector exists; union bound slack {1 - crude}")
