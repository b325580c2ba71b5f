"""Composed formulas F o Ind via certificate enumeration.

Composed variable layout, block i (1-based) occupying a contiguous range
starting after ``(i - 1) * (t + ell * m)``: first the t selector bits
(MSB first), then the matrix bits row by row, column 1..m within a row.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from .formula import (BlockStructure, CnfFormula, FormulaError, to_dimacs,
                      touched_blocks)
from .gadget import GadgetParams, eval_index, selector_bits, selector_value

SCHEMA = "liftlab.compose/1"
DEFAULT_CLAUSE_BUDGET = 10 ** 7


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Certificate:
    """Selector values for the touched blocks plus the pointed bit values
    that falsify the source clause."""

    source_clause: int
    selectors: tuple          # ((block, value), ...)
    pointed_bits: tuple       # ((block, row, col, bit), ...)
    t: int

    @property
    def size(self) -> int:
        return len(self.selectors) * self.t + len(self.pointed_bits)


@dataclass(frozen=True)
class CompositionManifest:
    source_sha256: str
    blocks: BlockStructure
    params: GadgetParams
    m_requested: int
    provenance: tuple         # (source clause, ((block, value), ...)) per composed clause

    @property
    def n(self) -> int:
        return self.blocks.block_count

    @property
    def ell(self) -> int:
        return self.blocks.block_size

    @property
    def stride(self) -> int:
        return self.params.t + self.ell * self.params.m

    @property
    def var_count(self) -> int:
        return self.n * self.stride

    def selector_var(self, block: int, k: int) -> int:
        return (block - 1) * self.stride + k

    def matrix_var(self, block: int, row: int, col: int) -> int:
        return (block - 1) * self.stride + self.params.t + (row - 1) * self.params.m + col

    def describe_var(self, var: int) -> tuple:
        """Inverse of the layout: ("x", block, k) or ("y", block, row, col)."""
        block, off = divmod(var - 1, self.stride)
        if off < self.params.t:
            return ("x", block + 1, off + 1)
        off -= self.params.t
        row, col = divmod(off, self.params.m)
        return ("y", block + 1, row + 1, col + 1)

    def composed_clause_index(self, source_clause: int, selectors: Mapping[int, int]) -> int:
        """1-based index of the composed clause for a certificate."""
        return self._index()[(source_clause, tuple(sorted(selectors.items())))]

    def _index(self) -> dict:
        cache = self.__dict__.get("_prov_index")
        if cache is None:
            cache = {p: k for k, p in enumerate(self.provenance, start=1)}
            object.__setattr__(self, "_prov_index", cache)
        return cache

    def to_json(self) -> str:
        t, m = self.params.t, self.params.m
        doc = {
            "schema": SCHEMA,
            "source_sha256": self.source_sha256,
            "gadget": {"m": m, "m_requested": self.m_requested, "ell": self.ell,
                       "t": t, "selector_encoding": "binary of value-1, msb first"},
            "blocks": [list(b) for b in self.blocks.blocks],
            "layout": [{"selector": [self.selector_var(i, k) for k in range(1, t + 1)],
                        "matrix": [[self.matrix_var(i, r, c) for c in range(1, m + 1)]
                                   for r in range(1, self.ell + 1)]}
                       for i in range(1, self.n + 1)],
            "var_count": self.var_count,
            "clause_count": len(self.provenance),
            "provenance": [[k, [list(s) for s in sel]] for k, sel in self.provenance],
        }
        return json.dumps(doc, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CompositionManifest":
        doc = json.loads(text)
        if doc.get("schema") != SCHEMA:
            raise FormulaError(f"unsupported manifest schema {doc.get('schema')!r}")
        blocks = doc["blocks"]
        bs = BlockStructure(len(blocks), len(blocks[0]) if blocks else 0, blocks)
        g = doc["gadget"]
        prov = tuple((k, tuple(tuple(s) for s in sel)) for k, sel in doc["provenance"])
        return cls(doc["source_sha256"], bs, GadgetParams(g["m"], g["ell"]),
                   g["m_requested"], prov)


def formula_sha256(formula: CnfFormula) -> str:
    return hashlib.sha256(to_dimacs(formula).encode()).hexdigest()


def composed_clause_count(formula: CnfFormula, blocks: BlockStructure, m: int) -> int:
    return sum(m ** len(touched_blocks(c, blocks)) for c in formula.clauses)


def certificates(formula: CnfFormula, blocks: BlockStructure, params: GadgetParams):
    """Certificates in the deterministic order (clause index, then
    selector assignment lexicographically)."""
    for k, clause in enumerate(formula.clauses, start=1):
        touched = touched_blocks(clause, blocks)
        for alpha in itertools.product(range(1, params.m + 1), repeat=len(touched)):
            sel = dict(zip(touched, alpha))
            pointed = []
            for lit in clause:
                i, j = blocks.locate(abs(lit))
                pointed.append((i, j, sel[i], 0 if lit > 0 else 1))
            yield Certificate(k, tuple(sorted(sel.items())), tuple(pointed), params.t)


def certificate_clause(cert: Certificate, manifest: CompositionManifest) -> tuple:
    """The disjunction negating a certificate."""
    lits = []
    for block, value in cert.selectors:
        for k, bit in enumerate(selector_bits(value, cert.t), start=1):
            var = manifest.selector_var(block, k)
            lits.append(-var if bit else var)
    for block, row, col, bit in cert.pointed_bits:
        var = manifest.matrix_var(block, row, col)
        lits.append(-var if bit else var)
    return tuple(sorted(lits, key=abs))


def compose_block(formula: CnfFormula, blocks: BlockStructure, m: int,
                  budget: int = DEFAULT_CLAUSE_BUDGET, m_requested: int = None):
    """Build F o Ind_{ell x m}^n: one clause per certificate.

    Returns (composed formula, manifest).
    """
    if blocks.var_count != formula.var_count:
        raise FormulaError(
            f"block structure covers {blocks.var_count} variables, formula has "
            f"{formula.var_count}")
    params = GadgetParams(m, blocks.block_size)
    total = composed_clause_count(formula, blocks, m)
    if total > budget:
        raise BudgetExceeded(f"composition needs {total} clauses, budget is {budget}")
    certs = list(certificates(formula, blocks, params))
    manifest = CompositionManifest(formula_sha256(formula), blocks, params,
                                   m if m_requested is None else m_requested,
                                   tuple((c.source_clause, c.selectors) for c in certs))
    clauses = tuple(certificate_clause(c, manifest) for c in certs)
    return CnfFormula(manifest.var_count, clauses), manifest


def compose_single(formula: CnfFormula, m: int, budget: int = DEFAULT_CLAUSE_BUDGET,
                   m_requested: int = None):
    """F o Ind_m^n with one single-bit gadget per variable."""
    return compose_block(formula, BlockStructure.unit(formula.var_count), m,
                         budget=budget, m_requested=m_requested)


def _bits(manifest: CompositionManifest, assignment) -> list:
    if isinstance(assignment, Mapping):
        missing = [v for v in range(1, manifest.var_count + 1) if v not in assignment]
        if missing:
            raise FormulaError(f"composed assignment is partial ({len(missing)} unset)")
        return [None] + [assignment[v] for v in range(1, manifest.var_count + 1)]
    bits = list(assignment)
    if len(bits) != manifest.var_count:
        raise FormulaError(f"composed assignment has {len(bits)} bits, "
                           f"expected {manifest.var_count}")
    return [None] + bits


def split_assignment(manifest: CompositionManifest, assignment) -> tuple:
    """Composed bits -> (selectors x in [m]^n, matrices y) with y[i][j] a row."""
    bits = _bits(manifest, assignment)
    t, m = manifest.params.t, manifest.params.m
    xs, ys = [], []
    for i in range(1, manifest.n + 1):
        xs.append(selector_value([bits[manifest.selector_var(i, k)] for k in range(1, t + 1)]))
        ys.append(tuple(tuple(bits[manifest.matrix_var(i, r, c)] for c in range(1, m + 1))
                        for r in range(1, manifest.ell + 1)))
    return tuple(xs), tuple(ys)


def join_assignment(manifest: CompositionManifest, xs: Sequence[int], ys) -> tuple:
    """Inverse of :func:`split_assignment`."""
    t, m = manifest.params.t, manifest.params.m
    bits = [0] * (manifest.var_count + 1)
    for i in range(1, manifest.n + 1):
        for k, b in enumerate(selector_bits(xs[i - 1], t), start=1):
            bits[manifest.selector_var(i, k)] = b
        for r in range(1, manifest.ell + 1):
            for c in range(1, m + 1):
                bits[manifest.matrix_var(i, r, c)] = ys[i - 1][r - 1][c - 1]
    return tuple(bits[1:])


def decode_blocks(manifest: CompositionManifest, assignment) -> tuple:
    """z = (Ind_{ell x m}(x_1, y_1), ..., Ind_{ell x m}(x_n, y_n))."""
    xs, ys = split_assignment(manifest, assignment)
    m = manifest.params.m
    return tuple(tuple(eval_index(m, x, row) for row in y) for x, y in zip(xs, ys))


def decode_assignment(manifest: CompositionManifest, assignment) -> tuple:
    """Decoded source assignment as 0/1 values for source variables 1..n*ell."""
    z = decode_blocks(manifest, assignment)
    out = [0] * manifest.blocks.var_count
    for i, block in enumerate(manifest.blocks.blocks):
        for j, var in enumerate(block):
            out[var - 1] = z[i][j]
    return tuple(out)
