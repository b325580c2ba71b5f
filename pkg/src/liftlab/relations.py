"""Finite search relations S over boolean inputs.

A relation fixes a number of input bits (variables 1..n_bits) and says,
for a batch of total inputs, which outputs are valid. Subcubes are given
as partial assignments ``{var: bit}``.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

import numpy as np

from .compose import CompositionManifest
from .formula import CnfFormula, FormulaError, restrict

CHUNK_BITS = 16


class RelationError(ValueError):
    pass


def subcube_points(n_bits: int, fixed: Mapping[int, int],
                   chunk_bits: int = CHUNK_BITS) -> Iterator[np.ndarray]:
    """All total inputs extending ``fixed``, as uint8 arrays (P, n_bits)
    in chunks of at most 2**chunk_bits rows."""
    free = [v for v in range(1, n_bits + 1) if v not in fixed]
    base = np.zeros(n_bits, dtype=np.uint8)
    for v, b in fixed.items():
        if not 1 <= v <= n_bits:
            raise RelationError(f"variable {v} out of range 1..{n_bits}")
        base[v - 1] = b
    total = 1 << len(free)
    step = 1 << min(chunk_bits, len(free))
    shifts = np.arange(len(free), dtype=np.int64)
    cols = np.array([v - 1 for v in free], dtype=np.int64)
    for start in range(0, total, step):
        idx = np.arange(start, min(total, start + step), dtype=np.int64)
        pts = np.repeat(base[None, :], len(idx), axis=0)
        if len(free):
            pts[:, cols] = ((idx[:, None] >> shifts[None, :]) & 1).astype(np.uint8)
        yield pts


class SearchRelation:
    """Base class. Subclasses implement ``valid_mask``; the remaining
    hooks have safe defaults and exist only to speed up search."""

    n_bits: int
    outputs: tuple

    def valid_mask(self, points: np.ndarray, output) -> np.ndarray:
        raise NotImplementedError

    def valid_outputs(self, point: Iterable[int]) -> set:
        pts = np.asarray([list(point)], dtype=np.uint8)
        return {o for o in self.outputs if self.valid_mask(pts, o)[0]}

    def holds_on(self, fixed: Mapping[int, int], output) -> bool:
        """Is ``output`` valid on every point of the subcube?"""
        return all(self.valid_mask(pts, output).all()
                   for pts in subcube_points(self.n_bits, fixed))

    def constant_output(self, fixed: Mapping[int, int]):
        """Some output valid on the whole subcube, or None."""
        for o in self.outputs:
            if self.holds_on(fixed, o):
                return o
        return None

    def check_total(self) -> None:
        for pts in subcube_points(self.n_bits, {}):
            covered = np.zeros(len(pts), dtype=bool)
            for o in self.outputs:
                covered |= self.valid_mask(pts, o)
            if not covered.all():
                bad = pts[np.argmin(covered)]
                raise RelationError(f"relation is not total: no output for {bad.tolist()}")

    # search hooks
    def lower_bound(self, fixed: Mapping[int, int]) -> int:
        return 0 if self.constant_output(fixed) is not None else 1

    def relevant_vars(self, fixed: Mapping[int, int]) -> list:
        return [v for v in range(1, self.n_bits + 1) if v not in fixed]

    def memo_key(self, fixed: Mapping[int, int]):
        return frozenset(fixed.items())


class ExplicitRelation(SearchRelation):
    """Relation given by a table over all 2**n_bits inputs.

    ``table`` maps an input, read as an integer with variable 1 as the
    least significant bit, to its set of valid outputs.
    """

    def __init__(self, n_bits: int, table: Mapping[int, Iterable]):
        if n_bits > 24:
            raise RelationError("explicit relations are limited to 24 input bits")
        self.n_bits = n_bits
        outs = sorted({o for s in table.values() for o in s}, key=repr)
        self.outputs = tuple(outs)
        self._col = {o: k for k, o in enumerate(outs)}
        grid = np.zeros((1 << n_bits, len(outs)), dtype=bool)
        for x, s in table.items():
            for o in s:
                grid[x, self._col[o]] = True
        self._grid = grid
        self._weights = (1 << np.arange(n_bits, dtype=np.int64))

    @classmethod
    def from_function(cls, n_bits: int, fn) -> "ExplicitRelation":
        """``fn(bits)`` returns the valid outputs for a tuple of bits
        (index 0 = variable 1)."""
        table = {}
        for x in range(1 << n_bits):
            bits = tuple((x >> k) & 1 for k in range(n_bits))
            table[x] = frozenset(fn(bits))
        return cls(n_bits, table)

    def valid_mask(self, points, output):
        col = self._col.get(output)
        if col is None:
            return np.zeros(len(points), dtype=bool)
        idx = points.astype(np.int64) @ self._weights
        return self._grid[idx, col]


class CnfRelation(SearchRelation):
    """S_F: outputs are 1-based indices of falsified clauses."""

    def __init__(self, formula: CnfFormula):
        self.formula = formula
        self.n_bits = formula.var_count
        self.outputs = tuple(range(1, len(formula.clauses) + 1))

    def valid_mask(self, points, output):
        clause = self.formula.clause(output)
        mask = np.ones(len(points), dtype=bool)
        for lit in clause:
            col = points[:, abs(lit) - 1]
            mask &= (col == 0) if lit > 0 else (col == 1)
        return mask

    def holds_on(self, fixed, output):
        # a clause is false on a whole subcube iff the fixing falsifies each literal
        return all(fixed.get(abs(lit)) == (0 if lit > 0 else 1)
                   for lit in self.formula.clause(output))

    def lower_bound(self, fixed):
        # a leaf needs some clause fully falsified: count its unfixed literals
        best = None
        for clause in restrict(self.formula, fixed).clauses:
            if best is None or len(clause) < best:
                best = len(clause)
        if best is None:
            raise RelationError("restriction satisfies the formula")
        return best

    def relevant_vars(self, fixed):
        return sorted({abs(lit) for c in restrict(self.formula, fixed).clauses for lit in c})

    def memo_key(self, fixed):
        return restrict(self.formula, fixed).key()


class ComposedRelation(SearchRelation):
    """S_F o Ind: inputs are composed assignments, outputs are source
    clause indices falsified by the decoded assignment."""

    def __init__(self, formula: CnfFormula, manifest: CompositionManifest):
        if manifest.blocks.var_count != formula.var_count:
            raise FormulaError("manifest does not match the source formula")
        self.formula = formula
        self.manifest = manifest
        self.n_bits = manifest.var_count
        self.outputs = tuple(range(1, len(formula.clauses) + 1))
        t = manifest.params.t
        self._sel_cols = [[manifest.selector_var(i, k) - 1 for k in range(1, t + 1)]
                          for i in range(1, manifest.n + 1)]
        self._weights = np.array([1 << (t - 1 - k) for k in range(t)], dtype=np.int64)

    def decode(self, points: np.ndarray) -> np.ndarray:
        """Decoded source assignments, shape (P, n*ell), column v-1 = var v."""
        man = self.manifest
        m, ell = man.params.m, man.ell
        out = np.zeros((len(points), man.blocks.var_count), dtype=np.uint8)
        for i in range(1, man.n + 1):
            sel = points[:, self._sel_cols[i - 1]].astype(np.int64) @ self._weights
            for j in range(1, ell + 1):
                first = man.matrix_var(i, j, 1) - 1
                row = points[:, first:first + m]
                var = man.blocks.blocks[i - 1][j - 1]
                out[:, var - 1] = row[np.arange(len(points)), sel]
        return out

    def valid_mask(self, points, output):
        z = self.decode(points)
        mask = np.ones(len(points), dtype=bool)
        for lit in self.formula.clause(output):
            col = z[:, abs(lit) - 1]
            mask &= (col == 0) if lit > 0 else (col == 1)
        return mask
