"""Cutting Planes lines, proofs and verification.

Proof text, one step per line (1-based step numbers)::

    a <k>                       clause k as an inequality
    b <var> <0|1>               x_var >= 0  (0)  or  -x_var >= -1  (1)
    l <i> <j> <c1> <c2>         c1 * line_i + c2 * line_j
    d <i> <c>                   divide line i by c (must be the gcd)
    s <i> <j> : <terms> >= <b>  semantic step asserting the given line

Terms are written ``<coef> x<var>``, for example ``2 x1 -3 x4``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Mapping, Union

import numpy as np

from ..formula import CnfFormula
from .common import ProofError, Verdict, content_lines, parse_int, reject

DEFAULT_SUPPORT_CAP = 24


@dataclass(frozen=True)
class CpLine:
    """sum(coef * x_var) >= bound with integer coefficients; zero
    coefficients are never stored."""

    terms: tuple     # ((var, coef), ...) sorted by var, coef != 0
    bound: int

    @classmethod
    def make(cls, coeffs: Mapping[int, int], bound: int) -> "CpLine":
        return cls(tuple(sorted((v, int(c)) for v, c in coeffs.items() if c)), int(bound))

    @property
    def coeffs(self) -> dict:
        return dict(self.terms)

    @property
    def support(self) -> frozenset:
        return frozenset(v for v, _ in self.terms)

    def is_contradiction(self) -> bool:
        return not self.terms and self.bound >= 1

    def holds(self, point: Mapping[int, int]) -> bool:
        return sum(c * point[v] for v, c in self.terms) >= self.bound

    def mask(self, columns: Mapping[int, np.ndarray], n_points: int) -> np.ndarray:
        """Vectorised ``holds`` given one 0/1 column per support variable."""
        big = any(abs(c) > 2 ** 40 for _, c in self.terms) or abs(self.bound) > 2 ** 40
        dtype = object if big else np.int64
        total = np.zeros(n_points, dtype=dtype)
        for v, c in self.terms:
            total = total + columns[v].astype(dtype) * c
        return np.asarray(total >= self.bound, dtype=bool)

    def __str__(self):
        if not self.terms:
            return f"0 >= {self.bound}"
        return " ".join(f"{c} x{v}" for v, c in self.terms) + f" >= {self.bound}"


def clause_to_inequality(clause, n: int = None) -> CpLine:
    """x_i for positive and (1 - x_i) for negative literals, summed >= 1,
    with the constants moved to the right-hand side."""
    coeffs, negs = {}, 0
    for lit in clause:
        if n is not None and abs(lit) > n:
            raise ValueError(f"literal {lit} out of range 1..{n}")
        coeffs[abs(lit)] = coeffs.get(abs(lit), 0) + (1 if lit > 0 else -1)
        negs += lit < 0
    return CpLine.make(coeffs, 1 - negs)


def lin_comb(a: CpLine, b: CpLine, c1: int, c2: int) -> CpLine:
    coeffs = {v: c1 * c for v, c in a.terms}
    for v, c in b.terms:
        coeffs[v] = coeffs.get(v, 0) + c2 * c
    return CpLine.make(coeffs, c1 * a.bound + c2 * b.bound)


def coefficient_gcd(line: CpLine) -> int:
    g = 0
    for _, c in line.terms:
        g = gcd(g, c)
    return g


def divide(line: CpLine, c: int) -> CpLine:
    if not line.terms:
        raise ValueError("cannot divide the all-zero form")
    if c != coefficient_gcd(line):
        raise ValueError(f"divisor {c} differs from coefficient gcd {coefficient_gcd(line)}")
    return CpLine(tuple((v, a // c) for v, a in line.terms), -((-line.bound) // c))


@dataclass(frozen=True)
class ClauseAxiom:
    clause: int


@dataclass(frozen=True)
class BoolAxiom:
    var: int
    upper: int       # 0: x >= 0, 1: -x >= -1


@dataclass(frozen=True)
class LinComb:
    left: int
    right: int
    c1: int
    c2: int


@dataclass(frozen=True)
class Divide:
    line: int
    c: int


@dataclass(frozen=True)
class Semantic:
    left: int
    right: int
    asserted: CpLine


CpStep = Union[ClauseAxiom, BoolAxiom, LinComb, Divide, Semantic]


@dataclass(frozen=True)
class CpProof:
    steps: tuple
    tree_like: bool = False


def _premises(step) -> tuple:
    if isinstance(step, (LinComb, Semantic)):
        return (step.left, step.right)
    if isinstance(step, Divide):
        return (step.line,)
    return ()


def parse_terms(toks, no: int) -> CpLine:
    if ">=" not in toks:
        raise ProofError(f"line {no}: asserted line needs '>='")
    k = toks.index(">=")
    if len(toks) != k + 2:
        raise ProofError(f"line {no}: expected one bound after '>='")
    body = toks[:k]
    if len(body) % 2:
        raise ProofError(f"line {no}: terms must be '<coef> x<var>' pairs")
    coeffs = {}
    for c_tok, v_tok in zip(body[::2], body[1::2]):
        if not v_tok.startswith("x"):
            raise ProofError(f"line {no}: bad variable token {v_tok!r}")
        v = parse_int(v_tok[1:], no)
        coeffs[v] = coeffs.get(v, 0) + parse_int(c_tok, no)
    return CpLine.make(coeffs, parse_int(toks[k + 1], no))


def parse_cp(text: str, tree_like: bool = False) -> CpProof:
    steps = []
    for no, toks in content_lines(text):
        kind, rest = toks[0], toks[1:]
        if kind == "tree" and not rest:
            tree_like = True
        elif kind == "a" and len(rest) == 1:
            steps.append(ClauseAxiom(parse_int(rest[0], no)))
        elif kind == "b" and len(rest) == 2:
            sign = parse_int(rest[1], no)
            if sign not in (0, 1):
                raise ProofError(f"line {no}: boolean axiom sign must be 0 or 1")
            steps.append(BoolAxiom(parse_int(rest[0], no), sign))
        elif kind == "l" and len(rest) == 4:
            steps.append(LinComb(*(parse_int(t, no) for t in rest)))
        elif kind == "d" and len(rest) == 2:
            steps.append(Divide(parse_int(rest[0], no), parse_int(rest[1], no)))
        elif kind == "s" and len(rest) >= 4 and rest[2] == ":":
            steps.append(Semantic(parse_int(rest[0], no), parse_int(rest[1], no),
                                  parse_terms(rest[3:], no)))
        else:
            raise ProofError(f"line {no}: cannot parse {' '.join(toks)!r}")
    return CpProof(tuple(steps), tree_like)


def format_cp(proof: CpProof) -> str:
    out = ["tree"] if proof.tree_like else []
    for s in proof.steps:
        if isinstance(s, ClauseAxiom):
            out.append(f"a {s.clause}")
        elif isinstance(s, BoolAxiom):
            out.append(f"b {s.var} {s.upper}")
        elif isinstance(s, LinComb):
            out.append(f"l {s.left} {s.right} {s.c1} {s.c2}")
        elif isinstance(s, Divide):
            out.append(f"d {s.line} {s.c}")
        else:
            terms = " ".join(f"{c} x{v}" for v, c in s.asserted.terms)
            terms = terms + " " if terms else ""
            out.append(f"s {s.left} {s.right} : {terms}>= {s.asserted.bound}")
    return "\n".join(out) + "\n"


def semantic_counterexample(premises, conclusion: CpLine,
                            support_cap: int = DEFAULT_SUPPORT_CAP):
    """A 0/1 point on the joint support satisfying every premise but not
    the conclusion, or None if the implication holds.

    Variables outside every support cannot change any of the three truth
    values, so enumerating the joint support is enough.
    """
    support = sorted(set(conclusion.support).union(*(p.support for p in premises)))
    if len(support) > support_cap:
        raise ValueError(f"joint support {len(support)} exceeds cap {support_cap}")
    k = len(support)
    idx = np.arange(1 << k, dtype=np.int64)
    cols = {v: ((idx >> s) & 1) for s, v in enumerate(support)}
    ok = np.ones(1 << k, dtype=bool)
    for p in premises:
        ok &= p.mask(cols, 1 << k)
    bad = ok & ~conclusion.mask(cols, 1 << k)
    if not bad.any():
        return None
    i = int(np.argmax(bad))
    return {v: int(cols[v][i]) for v in support}


def derive(formula: CnfFormula, step, lines: list) -> CpLine:
    """Apply one rule syntactically; raises ValueError on a bad step."""
    if isinstance(step, ClauseAxiom):
        return clause_to_inequality(formula.clause(step.clause), formula.var_count)
    if isinstance(step, BoolAxiom):
        if not 1 <= step.var <= formula.var_count:
            raise ValueError(f"variable {step.var} out of range")
        return CpLine.make({step.var: 1}, 0) if step.upper == 0 else CpLine.make({step.var: -1}, -1)
    if isinstance(step, LinComb):
        if step.c1 < 0 or step.c2 < 0:
            raise ValueError("negative combination coefficient")
        return lin_comb(lines[step.left - 1], lines[step.right - 1], step.c1, step.c2)
    if isinstance(step, Divide):
        if step.c <= 0:
            raise ValueError("divisor must be positive")
        return divide(lines[step.line - 1], step.c)
    return step.asserted


def verify_cp(formula: CnfFormula, proof: CpProof, mode: str = "syntactic",
              support_cap: int = DEFAULT_SUPPORT_CAP,
              require_refutation: bool = True) -> Verdict:
    """Check every step; in semantic mode semantic steps are allowed and
    every derived line is also checked by brute force over its support
    (lines over the cap that came from a syntactic rule are skipped and
    counted)."""
    if mode not in ("syntactic", "semantic"):
        raise ValueError(f"unknown mode {mode!r}")
    if not proof.steps:
        return reject("empty proof")
    lines, used = [], {}
    unchecked = 0
    for k, step in enumerate(proof.steps, start=1):
        prem = _premises(step)
        for p in prem:
            if not 1 <= p < k:
                return reject(f"premise {p} does not precede step {k}", k)
        if proof.tree_like:
            for p in set(prem):
                used[p] = used.get(p, 0) + 1
                if used[p] > 1:
                    return reject(f"line {p} used twice in a tree-like proof", k)
        if isinstance(step, ClauseAxiom) and not 1 <= step.clause <= len(formula.clauses):
            return reject(f"axiom refers to missing clause {step.clause}", k)
        if isinstance(step, Semantic) and mode == "syntactic":
            return reject(f"semantic step {k} not allowed in syntactic mode", k)
        try:
            line = derive(formula, step, lines)
        except ValueError as e:
            return reject(f"step {k}: {e}", k)
        if mode == "semantic" and prem:
            premises = [lines[p - 1] for p in prem]
            support = set(line.support).union(*(p.support for p in premises))
            if len(support) > support_cap:
                if isinstance(step, Semantic):
                    return reject(f"step {k}: joint support {len(support)} exceeds cap "
                                  f"{support_cap}", k)
                unchecked += 1
            else:
                bad = semantic_counterexample(premises, line, support_cap)
                if bad is not None:
                    return reject(f"step {k}: unsound, counter-assignment {sorted(bad.items())}",
                                  k)
        lines.append(line)
    if require_refutation and not lines[-1].is_contradiction():
        return reject(f"final line {lines[-1]} is not 0 >= 1", len(lines))
    return Verdict(True, measures={"length": len(lines), "unchecked": unchecked,
                                   "max_support": max(len(l.support) for l in lines)})


def derive_lines(formula: CnfFormula, proof: CpProof) -> list:
    """Lines of a proof without any checks beyond rule application."""
    lines = []
    for step in proof.steps:
        lines.append(derive(formula, step, lines))
    return lines
