"""Character expectations of indexed sign vectors and the bound on them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import iv

from .distributions import (FiniteDistribution, blockwise_min_entropy, deficiency,
                            multiplicative_uniformity, pushforward)
from .exact import LogValue, certified_le, interval_precision


class FourierError(ValueError):
    pass


class PreconditionUnmet(FourierError):
    pass


def _check_dims(lam: FiniteDistribution, gam: FiniteDistribution):
    k = len(lam.coords)
    if len(gam.coords) != k:
        raise FourierError(f"selector has {k} coordinates, sign vectors {len(gam.coords)}")
    for x in lam.probs:
        for xi, size in zip(x, lam.sizes):
            if not 1 <= xi <= size:
                raise FourierError(f"selector {x} outside its alphabet")
    return k


def character_expectation(lam: FiniteDistribution, gam: FiniteDistribution, coords) -> Fraction:
    """E[prod_{i in I} y_i(x_i)] for independent x ~ lam, y ~ gam, where
    gam's points are tuples of +-1 vectors and I is 1-based."""
    _check_dims(lam, gam)
    coords = tuple(coords)
    total = Fraction(0)
    for x, px in lam.probs.items():
        for y, py in gam.probs.items():
            sign = 1
            for i in coords:
                sign *= y[i - 1][x[i - 1] - 1]
            total += px * py * sign
    return total


@dataclass
class FourierCheck:
    holds: bool
    lhs: Fraction
    beta: LogValue
    deficiency: LogValue
    bound: float          # decimal rendering of the bound
    slack: float          # bound - |lhs|


def _bound_iv(beta: LogValue, s: LogValue, k: int, size: int):
    return (iv.mpf(2) ** (-beta.interval() / 2 - 1) * (k + s.interval())) ** size


@lru_cache(maxsize=4096)
def _bound_float(beta: LogValue, s: LogValue, k: int, size: int) -> float:
    with interval_precision(80):
        b = _bound_iv(beta, s, k, size)
    return float(b.mid)


def check_fourier_bound(lam: FiniteDistribution, gam: FiniteDistribution, coords,
                        sign_domain_size: int = None) -> FourierCheck:
    """Compare |E[chi_I]| with (2^(-beta/2 - 1) (k + s))^|I|.

    beta is lam's blockwise min-entropy and s is gam's deficiency over
    ({+-1}^ell)^k (or ``sign_domain_size``). Raises PreconditionUnmet when
    beta <= 1/2.
    """
    k = _check_dims(lam, gam)
    beta = blockwise_min_entropy(lam)
    if beta <= Fraction(1, 2):
        raise PreconditionUnmet(f"blockwise min-entropy {beta} is not above 1/2")
    if sign_domain_size is None:
        ell = len(next(iter(gam.probs))[0])
        sign_domain_size = 2 ** (ell * k)
    s = deficiency(gam, sign_domain_size)
    lhs = character_expectation(lam, gam, coords)
    size = len(tuple(coords))
    bound = _bound_float(beta, s, k, size)
    if size == 0:
        holds = abs(lhs) <= 1
    elif lhs == 0:
        holds = True
    else:
        a = abs(lhs)
        holds = certified_le(lambda: iv.mpf(a.numerator) / a.denominator,
                             lambda: _bound_iv(beta, s, k, size))
    return FourierCheck(holds, lhs, beta, s, bound, bound - float(abs(lhs)))


def sign_of(bit: int) -> int:
    return 1 - 2 * bit


@dataclass
class SelectorResult:
    x: tuple
    eps: object
    certificate: list     # (I, E_y[chi_I(y_x)], threshold k^(-10|I|), good)


def induced_output(x, ydist: FiniteDistribution) -> FiniteDistribution:
    """Law of (y_1[x_1], ..., y_k[x_k]) for y ~ ydist with bit rows."""
    k = len(x)
    return pushforward(ydist, lambda y: tuple(y[i][x[i] - 1] for i in range(k)),
                       tuple(range(1, k + 1)), (2,) * k)


def goodness_certificate(x, ydist: FiniteDistribution, exponent: int = 10) -> list:
    k = len(x)
    out = []
    for size in range(1, k + 1):
        for coords in itertools.combinations(range(k), size):
            e = sum((q * _prod(sign_of(y[i][x[i] - 1]) for i in coords)
                     for y, q in ydist.probs.items()), Fraction(0))
            threshold = Fraction(1, k ** (exponent * size)) if k > 1 else Fraction(1)
            out.append((tuple(c + 1 for c in coords), e, threshold, abs(e) <= threshold))
    return out


def _prod(it) -> int:
    r = 1
    for v in it:
        r *= v
    return r


def find_uniform_selector(xdist: FiniteDistribution, ydist: FiniteDistribution,
                          eps_target) -> SelectorResult:
    """First x in supp(xdist) whose induced gadget output is eps_target
    multiplicatively close to uniform on {0,1}^k."""
    k = len(xdist.coords)
    target = list(itertools.product((0, 1), repeat=k))
    best = None
    for x in xdist.support:
        eps = multiplicative_uniformity(induced_output(x, ydist), target)
        if best is None or eps < best[1]:
            best = (x, eps)
        if eps <= eps_target:
            return SelectorResult(x, eps, goodness_certificate(x, ydist))
    raise FourierError(f"no selector reaches eps {eps_target}; best {best[1]} at {best[0]}")
