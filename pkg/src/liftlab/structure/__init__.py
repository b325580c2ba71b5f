"""Exact entropy measures and structural predicates on micro domains."""

from .distributions import (FiniteDistribution, blockwise_min_entropy, deficiency,
                            min_entropy, multiplicative_uniformity)
from .exact import LogValue

__all__ = ["FiniteDistribution", "LogValue", "blockwise_min_entropy", "deficiency",
           "min_entropy", "multiplicative_uniformity"]
