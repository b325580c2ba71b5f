"""Ordered simplices, their largest cubes, and Bob's error-set cleanup.

A simplex here is a down-closed subset of a product of totally ordered
parts: if t is a member and t' is below t in every part's order, t' is a
member too. Rank 1 is the first element of a part's declared order.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class SimplexError(ValueError):
    pass


@dataclass(frozen=True)
class OrderedSimplex:
    parts: tuple          # one tuple of elements per part, in declared order
    members: frozenset    # tuples with one element per part

    def __post_init__(self):
        parts = tuple(tuple(p) for p in self.parts)
        members = frozenset(tuple(t) for t in self.members)
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "_rank", [{e: r for r, e in enumerate(p, start=1)}
                                           for p in parts])
        for p in parts:
            if len(set(p)) != len(p):
                raise SimplexError("a part lists an element twice")
        for t in members:
            if len(t) != len(parts) or any(e not in self._rank[k] for k, e in enumerate(t)):
                raise SimplexError(f"member {t} lies outside the product domain")
        bad = self.monotonicity_violation()
        if bad is not None:
            raise SimplexError(f"not down-closed: {bad[0]} is a member but {bad[1]} is not")

    def rank(self, part: int, element) -> int:
        return self._rank[part][element]

    def monotonicity_violation(self):
        """A (member, missing lower neighbour) pair, or None. Checking
        one-step predecessors in each part covers the whole product order."""
        for t in sorted(self.members, key=repr):
            for k, e in enumerate(t):
                r = self._rank[k][e]
                if r > 1:
                    lower = t[:k] + (self.parts[k][r - 2],) + t[k + 1:]
                    if lower not in self.members:
                        return t, lower
        return None

    def __contains__(self, t) -> bool:
        return tuple(t) in self.members

    @classmethod
    def down_closure(cls, parts, generators) -> "OrderedSimplex":
        parts = tuple(tuple(p) for p in parts)
        members = set()
        for g in generators:
            ranges = [p[:p.index(e) + 1] for p, e in zip(parts, g)]
            members.update(itertools.product(*ranges))
        return cls(parts, frozenset(members))

    @classmethod
    def full(cls, parts) -> "OrderedSimplex":
        parts = tuple(tuple(p) for p in parts)
        return cls(parts, frozenset(itertools.product(*parts)))

    def to_json(self) -> str:
        doc = {"parts": [[_enc(e) for e in p] for p in self.parts],
               "members": sorted([_enc(e) for e in t] for t in self.members)}
        return json.dumps(doc, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "OrderedSimplex":
        try:
            doc = json.loads(text)
            return cls(tuple(tuple(_dec(e) for e in p) for p in doc["parts"]),
                       frozenset(tuple(_dec(e) for e in t) for t in doc["members"]))
        except (KeyError, TypeError, ValueError) as e:
            raise SimplexError(f"bad simplex document: {e}") from None


def _enc(e):
    return list(e) if isinstance(e, tuple) else e


def _dec(e):
    return tuple(e) if isinstance(e, list) else e


@dataclass(frozen=True)
class CubeResult:
    kind: str             # "heavy", "light" or "empty"
    M: int
    cube: tuple           # first M elements of each part
    error_sets: tuple     # for "light": the same prefixes, as frozensets
    densities: tuple      # M / domain size, per part


def largest_cube(T: OrderedSimplex, threshold, domain_sizes: Sequence[int] = None) -> CubeResult:
    """Take the largest M with (M, ..., M) in T; the prefixes of length M
    form a cube inside T. If some prefix is lighter than ``threshold`` the
    prefixes instead serve as error sets covering T."""
    bad = T.monotonicity_violation()
    if bad is not None:
        raise SimplexError(f"not down-closed: {bad}")
    sizes = tuple(domain_sizes) if domain_sizes is not None else tuple(len(p) for p in T.parts)
    M = 0
    limit = min(len(p) for p in T.parts) if T.parts else 0
    while M < limit and tuple(p[M] for p in T.parts) in T.members:
        M += 1
    cube = tuple(p[:M] for p in T.parts)
    densities = tuple(Fraction(M, s) for s in sizes)
    if not T.members:
        return CubeResult("empty", 0, cube, tuple(frozenset() for _ in T.parts), densities)
    if all(d >= Fraction(threshold) for d in densities):
        return CubeResult("heavy", M, cube, tuple(frozenset() for _ in T.parts), densities)
    return CubeResult("light", M, cube, tuple(frozenset(c) for c in cube), densities)


def covers(T: OrderedSimplex, error_sets) -> bool:
    """Every member has some coordinate inside that part's error set."""
    return all(any(e in s for e, s in zip(t, error_sets)) for t in T.members)


def default_threshold(m: int) -> Fraction:
    """2^(-sqrt m) when m is a perfect square."""
    root = math.isqrt(m)
    if root * root != m:
        raise SimplexError(f"pass an explicit threshold for non-square m={m}")
    return Fraction(1, 2 ** root)


@dataclass
class CleanupResult:
    error_sets: dict      # (i, j) -> frozenset of rows
    fired: list           # (I, alpha, gamma, x, M) for every choice that added errors
    choices: int
    threshold: Fraction
    bound: Fraction       # configured density bound for each error set

    def densities(self, m: int) -> dict:
        return {k: Fraction(len(v), 2 ** m) for k, v in self.error_sets.items()}


def _row_keys(n: int, ell: int) -> list:
    return [(i, j) for i in range(1, n + 1) for j in range(1, ell + 1)]


def _choices(n: int, ell: int, m: int, xs):
    for size in range(0, n + 1):
        for blocks in itertools.combinations(range(1, n + 1), size):
            for alpha in itertools.product(range(1, m + 1), repeat=size):
                for gamma in itertools.product(itertools.product((0, 1), repeat=ell), repeat=size):
                    for x in xs:
                        yield blocks, alpha, gamma, x


def slice_simplex(T: OrderedSimplex, n: int, ell: int, blocks, alpha, gamma, x,
                  error_sets: dict) -> OrderedSimplex:
    """T restricted to selector x and rows agreeing with gamma at alpha on
    the chosen blocks, minus error rows; parts keep their relative order."""
    keys = _row_keys(n, ell)
    where = dict(zip(blocks, zip(alpha, gamma)))
    domains = []
    for k, (i, j) in enumerate(keys, start=1):
        allowed = []
        for row in T.parts[k]:
            if row in error_sets[(i, j)]:
                continue
            if i in where and row[where[i][0] - 1] != where[i][1][j - 1]:
                continue
            allowed.append(row)
        domains.append(tuple(allowed))
    sets = [set(d) for d in domains]
    members = frozenset(t[1:] for t in T.members
                        if t[0] == x and all(e in s for e, s in zip(t[1:], sets)))
    return OrderedSimplex(tuple(domains), members)


def bob_cleanup(T: OrderedSimplex, m: int, n: int, ell: int, threshold=None,
                bound=None) -> CleanupResult:
    """Grow error sets until every slice is empty or contains a cube whose
    parts all have density >= threshold within {0,1}^m.

    T's parts are the selector part followed by row parts (1,1), (1,2), ...
    in block-major order. ``bound`` defaults to (number of choices) times
    the threshold, since each choice fires at most once.
    """
    if len(T.parts) != 1 + n * ell:
        raise SimplexError(f"expected {1 + n * ell} parts, got {len(T.parts)}")
    threshold = default_threshold(m) if threshold is None else Fraction(threshold)
    keys = _row_keys(n, ell)
    errors = {k: frozenset() for k in keys}
    xs = T.parts[0]
    choices = list(_choices(n, ell, m, xs))
    if bound is None:
        bound = len(choices) * threshold
    fired = []
    changed = True
    while changed:
        changed = False
        for blocks, alpha, gamma, x in choices:
            sl = slice_simplex(T, n, ell, blocks, alpha, gamma, x, errors)
            res = largest_cube(sl, threshold, [2 ** m] * len(keys))
            if res.kind == "light":
                for k, extra in zip(keys, res.error_sets):
                    errors[k] = errors[k] | extra
                fired.append((blocks, alpha, gamma, x, res.M))
                changed = True
    return CleanupResult(errors, fired, len(choices), threshold, Fraction(bound))


def check_cleanup(T: OrderedSimplex, result: CleanupResult, m: int, n: int, ell: int) -> list:
    """Independent re-check of the exit state; returns the problems found.

    A slice is heavy when it contains a product of its parts' first q rows
    with q = ceil(threshold * 2^m); that is equivalent to holding any
    product set of that per-part density, because the slice is down-closed.
    """
    problems = []
    q = math.ceil(result.threshold * 2 ** m)
    for blocks, alpha, gamma, x in _choices(n, ell, m, T.parts[0]):
        sl = slice_simplex(T, n, ell, blocks, alpha, gamma, x, result.error_sets)
        if not sl.members:
            continue
        if q == 0:
            continue
        if any(len(p) < q for p in sl.parts) or not all(
                t in sl.members for t in itertools.product(*(p[:q] for p in sl.parts))):
            problems.append(f"slice {blocks} {alpha} {gamma} {x} is neither empty nor heavy")
    for k, rows in result.error_sets.items():
        if Fraction(len(rows), 2 ** m) > result.bound:
            problems.append(f"error set {k} density {Fraction(len(rows), 2 ** m)} above bound")
    return problems
