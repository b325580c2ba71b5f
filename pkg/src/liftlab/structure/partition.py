"""Restoring partitions of selector sets and megacoordinate groupings."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .distributions import FiniteDistribution, violates

DEFAULT_THETA = Fraction(19, 20)


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class Part:
    coords: tuple        # I_j, 0-based coordinate positions
    alpha: tuple         # values of x on I_j
    members: frozenset   # X^j
    selected_prob: Fraction   # Pr[X_I = alpha] over the remaining set when chosen


@dataclass
class RestoringPartition:
    parts: list
    m: int
    width: int           # N
    theta: Fraction      # threshold as a fraction of log m


def _outcome_counts(points, coords) -> Counter:
    return Counter(tuple(p[c] for c in coords) for p in points)


def first_violation(points: list, m: int, theta: Fraction, sizes=None):
    """First (I, alpha, prob) in size-descending then lexicographic order
    with Pr[x_I = alpha] > m^(-theta |I|) for x uniform on ``points``;
    returns ((), (), 1) when no nonempty I violates."""
    width = len(points[0])
    total = len(points)
    order = sizes if sizes is not None else range(width, 0, -1)
    for size in order:
        for coords in itertools.combinations(range(width), size):
            counts = _outcome_counts(points, coords)
            for alpha in sorted(counts):
                q = Fraction(counts[alpha], total)
                if violates(q, theta, m, size):
                    return coords, alpha, q
    return (), (), Fraction(1)


def restore_partition(X: Iterable, m: int, theta=DEFAULT_THETA) -> RestoringPartition:
    """Greedy loop: pick a largest violating coordinate set and an outcome
    on it, split off the matching selectors, repeat on the rest."""
    theta = Fraction(theta)
    remaining = sorted(set(tuple(x) for x in X))
    if not remaining:
        raise PartitionError("empty selector set")
    width = len(remaining[0])
    if width > 16:
        raise PartitionError("restoring partition enumerates subsets; N <= 16")
    parts = []
    while remaining:
        coords, alpha, q = first_violation(remaining, m, theta)
        members = [x for x in remaining if tuple(x[c] for c in coords) == alpha]
        parts.append(Part(coords, alpha, frozenset(members), q))
        chosen = set(members)
        remaining = [x for x in remaining if x not in chosen]
    return RestoringPartition(parts, m, width, theta)


def restored_entropy_ok(part: Part, m: int, theta) -> tuple:
    """Whether the part, projected off I_j, meets blockwise min-entropy
    theta * log m. Returns (ok, witness subset or None)."""
    rest = [c for c in range(len(next(iter(part.members)))) if c not in part.coords]
    if not rest:
        return True, None
    pts = [tuple(x[c] for c in rest) for x in part.members]
    total = len(pts)
    for size in range(1, len(rest) + 1):
        for sub in itertools.combinations(range(len(rest)), size):
            for alpha, cnt in _outcome_counts(pts, sub).items():
                if violates(Fraction(cnt, total), theta, m, size):
                    return False, tuple(rest[s] for s in sub)
    return True, None


def check_partition(X: Iterable, partition: RestoringPartition) -> list:
    """Problems found by an independent re-check; empty when all hold."""
    X = set(tuple(x) for x in X)
    problems = []
    seen: set = set()
    remaining = set(X)
    for k, part in enumerate(partition.parts, start=1):
        if seen & part.members:
            problems.append(f"part {k} overlaps earlier parts")
        seen |= part.members
        # the chosen outcome must have violated the threshold on what was left
        if part.coords:
            cnt = sum(1 for x in remaining if tuple(x[c] for c in part.coords) == part.alpha)
            q = Fraction(cnt, len(remaining))
            if q != part.selected_prob or not violates(q, partition.theta, partition.m,
                                                       len(part.coords)):
                problems.append(f"part {k}: outcome did not violate the threshold")
        want = {x for x in remaining if tuple(x[c] for c in part.coords) == part.alpha}
        if want != part.members:
            problems.append(f"part {k}: members differ from the matching selectors")
        ok, witness = restored_entropy_ok(part, partition.m, partition.theta)
        if not ok:
            problems.append(f"part {k}: entropy not restored, violated on {witness}")
        remaining -= part.members
    if seen != X:
        problems.append("parts do not cover X")
    return problems


@dataclass(frozen=True)
class MegaGrouping:
    """h maps coordinate positions 0..N-1 to megacoordinates 1..K."""

    h: tuple
    K: int

    def __post_init__(self):
        N = len(self.h)
        if self.K <= 0 or N % self.K:
            raise PartitionError(f"{N} coordinates cannot split evenly into {self.K} groups")
        counts = Counter(self.h)
        if set(counts) != set(range(1, self.K + 1)) or len(set(counts.values())) != 1:
            raise PartitionError(f"grouping {self.h} is not balanced")

    @property
    def group_size(self) -> int:
        return len(self.h) // self.K

    def members(self, k: int) -> tuple:
        return tuple(i for i, g in enumerate(self.h) if g == k)


def balanced_maps(N: int, K: int):
    """Every balanced grouping of N coordinates into K megacoordinates."""
    if N % K:
        raise PartitionError(f"{N} is not divisible by {K}")
    size = N // K

    def rec(prefix, counts):
        if len(prefix) == N:
            yield MegaGrouping(tuple(prefix), K)
            return
        for k in range(1, K + 1):
            if counts[k] < size:
                counts[k] += 1
                yield from rec(prefix + [k], counts)
                counts[k] -= 1

    yield from rec([], Counter())


@dataclass
class MegaFilter:
    kept: list          # parts whose I_j hits each megacoordinate at most once
    X_h: frozenset
    survival: Fraction


def mega_filter(partition: RestoringPartition, h: MegaGrouping) -> MegaFilter:
    if len(h.h) != partition.width:
        raise PartitionError("grouping width differs from the partition's")
    kept = [p for p in partition.parts
            if len({h.h[c] for c in p.coords}) == len(p.coords)]
    X_h = frozenset().union(*(p.members for p in kept)) if kept else frozenset()
    total = sum(len(p.members) for p in partition.parts)
    return MegaFilter(kept, X_h, Fraction(len(X_h), total))


def average_survival(partition: RestoringPartition, K: int) -> Fraction:
    fractions = [mega_filter(partition, h).survival for h in balanced_maps(partition.width, K)]
    return sum(fractions, Fraction(0)) / len(fractions)


def alpha_h_distribution(partition: RestoringPartition, h: MegaGrouping) -> FiniteDistribution:
    """Exact law of the megacoordinate selector alpha^h.

    Coordinate k of alpha^h is a pair (value in [m], position within the
    megacoordinate's member list): a selector x is drawn uniformly from
    X_h; megacoordinates hit by its part's I_j copy that part's value at
    the hitting coordinate, all others are uniform over (position, value).
    """
    filt = mega_filter(partition, h)
    if not filt.X_h:
        raise PartitionError("no part survives the grouping")
    m, size = partition.m, h.group_size
    acc: Counter = Counter()
    free_pairs = [(v, pos) for pos in range(1, size + 1) for v in range(1, m + 1)]
    for part in filt.kept:
        weight = Fraction(len(part.members), len(filt.X_h))
        pinned = {}
        for c, a in zip(part.coords, part.alpha):
            pinned[h.h[c]] = (a, h.members(h.h[c]).index(c) + 1)
        open_groups = [k for k in range(1, h.K + 1) if k not in pinned]
        share = weight / len(free_pairs) ** len(open_groups)
        for choice in itertools.product(free_pairs, repeat=len(open_groups)):
            point = dict(pinned)
            point.update(zip(open_groups, choice))
            acc[tuple(point[k] for k in range(1, h.K + 1))] += share
    return FiniteDistribution(tuple(range(1, h.K + 1)), (m * size,) * h.K, dict(acc))
