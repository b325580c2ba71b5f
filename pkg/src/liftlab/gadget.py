"""The index gadget and the column-index gadget.

Selector values live in 1..m. For decision trees and CNF encodings a
selector value ``v`` is written as the t-bit binary expansion of ``v - 1``,
most significant bit first (t = log2 m).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .trees import Leaf, Node, Query


class GadgetError(ValueError):
    pass


def is_power_of_two(m: int) -> bool:
    return m >= 2 and m & (m - 1) == 0


def next_power_of_two(m: int) -> int:
    p = 2
    while p < m:
        p *= 2
    return p


@dataclass(frozen=True)
class GadgetParams:
    m: int
    ell: int = 1

    def __post_init__(self):
        if not is_power_of_two(self.m):
            raise GadgetError(f"m={self.m} must be a power of two >= 2")
        if self.ell < 1:
            raise GadgetError("output width must be >= 1")

    @property
    def t(self) -> int:
        return self.m.bit_length() - 1


def selector_bits(value: int, t: int) -> tuple:
    """MSB-first bits of ``value - 1``."""
    if not 1 <= value <= 1 << t:
        raise GadgetError(f"selector {value} out of range 1..{1 << t}")
    v = value - 1
    return tuple((v >> (t - 1 - k)) & 1 for k in range(t))


def selector_value(bits: Sequence[int]) -> int:
    v = 0
    for b in bits:
        v = (v << 1) | b
    return v + 1


def eval_index(m: int, x: int, y: Sequence[int]) -> int:
    """Ind_m(x, y) = y_x."""
    if len(y) != m:
        raise GadgetError(f"row has {len(y)} bits, expected {m}")
    if not 1 <= x <= m:
        raise GadgetError(f"selector {x} out of range 1..{m}")
    return y[x - 1]


def eval_column_index(params: GadgetParams, x: int, y: Sequence[Sequence[int]]) -> tuple:
    """Column ``x`` of the ell-by-m matrix ``y``, top row first."""
    if len(y) != params.ell:
        raise GadgetError(f"matrix has {len(y)} rows, expected {params.ell}")
    return tuple(eval_index(params.m, x, row) for row in y)


def gadget_query_tree(params: GadgetParams,
                      selector_var: Callable[[int], object] = lambda k: ("x", k),
                      matrix_var: Callable[[int, int], object] = lambda r, c: ("y", r, c),
                      ) -> Node:
    """Query all t selector bits, then the ell bits of the pointed column.

    ``selector_var(k)`` names selector bit k (1 = most significant) and
    ``matrix_var(row, col)`` names a matrix bit; leaves carry the output
    column as a tuple. Depth is exactly t + ell.
    """
    t, ell = params.t, params.ell

    def column(col: int, row: int, acc: tuple) -> Node:
        if row > ell:
            return Leaf(acc)
        return Query(matrix_var(row, col),
                     column(col, row + 1, acc + (0,)),
                     column(col, row + 1, acc + (1,)))

    def select(k: int, prefix: tuple) -> Node:
        if k > t:
            return column(selector_value(prefix), 1, ())
        return Query(selector_var(k), select(k + 1, prefix + (0,)),
                     select(k + 1, prefix + (1,)))

    return select(1, ())
