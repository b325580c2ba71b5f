"""Finite distributions over named product domains, with exact entropies."""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Iterable, Sequence

from .exact import LogValue

INFINITY = float("inf")


class DistributionError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteDistribution:
    """Probabilities on tuples, one entry per coordinate.

    ``coords`` names the coordinates and ``sizes`` gives each coordinate's
    alphabet size (used only for deficiency). Support points are tuples of
    arbitrary hashable values; zero-probability points are dropped.
    """

    coords: tuple
    sizes: tuple
    probs: dict = field(compare=False)

    def __post_init__(self):
        if len(self.coords) != len(self.sizes):
            raise DistributionError("one alphabet size per coordinate")
        probs = {tuple(p): Fraction(q) for p, q in self.probs.items() if q}
        if any(q < 0 for q in probs.values()):
            raise DistributionError("negative probability")
        if probs and sum(probs.values()) != 1:
            raise DistributionError(f"probabilities sum to {sum(probs.values())}, not 1")
        for p in probs:
            if len(p) != len(self.coords):
                raise DistributionError(f"point {p} has wrong arity")
        object.__setattr__(self, "coords", tuple(self.coords))
        object.__setattr__(self, "sizes", tuple(self.sizes))
        object.__setattr__(self, "probs", dict(sorted(probs.items())))

    @classmethod
    def uniform(cls, points: Iterable, sizes: Sequence[int], coords=None) -> "FiniteDistribution":
        pts = sorted(set(tuple(p) for p in points))
        if not pts:
            raise DistributionError("uniform distribution over an empty set")
        coords = tuple(coords) if coords is not None else tuple(range(1, len(sizes) + 1))
        q = Fraction(1, len(pts))
        return cls(coords, tuple(sizes), {p: q for p in pts})

    @property
    def support(self) -> list:
        return list(self.probs)

    @property
    def domain_size(self) -> int:
        return prod(self.sizes)

    def marginal(self, positions: Sequence[int]) -> "FiniteDistribution":
        """Marginal on the given 0-based coordinate positions."""
        acc: Counter = Counter()
        for p, q in self.probs.items():
            acc[tuple(p[k] for k in positions)] += q
        return FiniteDistribution(tuple(self.coords[k] for k in positions),
                                  tuple(self.sizes[k] for k in positions), dict(acc))

    def max_prob(self) -> Fraction:
        if not self.probs:
            raise DistributionError("empty support")
        return max(self.probs.values())

    def to_json(self) -> str:
        doc = {"coords": list(self.coords), "sizes": list(self.sizes),
               "support": [[list(p), str(q)] for p, q in self.probs.items()]}
        return json.dumps(doc, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "FiniteDistribution":
        try:
            doc = json.loads(text)
            return cls(tuple(doc["coords"]), tuple(doc["sizes"]),
                       {tuple(_freeze(v) for v in p): Fraction(q) for p, q in doc["support"]})
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            raise DistributionError(f"bad distribution document: {e}") from None


def _freeze(v):
    return tuple(_freeze(e) for e in v) if isinstance(v, list) else v


def min_entropy(d: FiniteDistribution) -> LogValue:
    return LogValue.of(1 / d.max_prob())


def blockwise_min_entropy(d: FiniteDistribution, with_witness: bool = False):
    """min over nonempty coordinate subsets S of H(x_S) / |S|.

    With no coordinates the minimum is over an empty family; we return
    +inf in that case (every threshold is met vacuously).
    """
    k = len(d.coords)
    if k > 16:
        raise DistributionError("blockwise min-entropy enumerates 2^k subsets; k <= 16")
    if not d.probs:
        raise DistributionError("empty support")
    best, witness = None, None
    for size in range(1, k + 1):
        for subset in itertools.combinations(range(k), size):
            h = min_entropy(d.marginal(subset)).scale(Fraction(1, size))
            if best is None or h < best:
                best, witness = h, subset
    if best is None:
        best = INFINITY
    return (best, witness) if with_witness else best


def blockwise_at_least(d: FiniteDistribution, frac, m: int):
    """Whether every nonempty S has Pr[x_S = a] <= m^(-frac |S|) for all a,
    i.e. blockwise min-entropy >= frac * log m. Returns (ok, S, a) with the
    first violating subset and outcome in size-then-lex order."""
    frac = Fraction(frac)
    k = len(d.coords)
    for size in range(1, k + 1):
        for subset in itertools.combinations(range(k), size):
            for a, q in d.marginal(subset).probs.items():
                if violates(q, frac, m, size):
                    return False, subset, a
    return True, None, None


def violates(q: Fraction, frac: Fraction, m: int, size: int) -> bool:
    """q > m^(-frac * size), by integer cross-multiplication."""
    frac = Fraction(frac)
    num, den = frac.numerator, frac.denominator
    # q^den > m^(-num*size)  <=>  q^den * m^(num*size) > 1
    lhs = q ** den * Fraction(m) ** (num * size)
    return lhs > 1


def deficiency(d: FiniteDistribution, domain_size: int = None) -> LogValue:
    """log |domain| - H(d) = log(|domain| * max prob)."""
    size = d.domain_size if domain_size is None else domain_size
    return LogValue.of(size * d.max_prob())


def multiplicative_uniformity(d: FiniteDistribution, target: Iterable):
    """Least eps with Pr[x = s] = (1 +- eps)/|S| for every s in the target
    set S; INFINITY when the support differs from S."""
    target = set(tuple(s) for s in target)
    if set(d.probs) != target:
        return INFINITY
    n = len(target)
    return max(abs(q * n - 1) for q in d.probs.values())


def pushforward(d: FiniteDistribution, fn, coords, sizes) -> FiniteDistribution:
    acc: Counter = Counter()
    for p, q in d.probs.items():
        acc[tuple(fn(p))] += q
    return FiniteDistribution(tuple(coords), tuple(sizes), dict(acc))
