"""Resolution refutations: text format, verifier and dag translation.

Format, one step per line (1-based step numbers)::

    a <k>             axiom: clause k of the formula
    r <i> <j> <var>   resolve steps i and j on var
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..formula import BlockStructure, CnfFormula, clause_block_width, make_clause
from .common import ProofError, Verdict, content_lines, parse_int, reject
from .dags import ConjunctionDag, DagVertex


@dataclass(frozen=True)
class Axiom:
    clause: int


@dataclass(frozen=True)
class Resolve:
    left: int
    right: int
    pivot: int


Step = Union[Axiom, Resolve]


@dataclass(frozen=True)
class ResolutionProof:
    steps: tuple
    tree_like: bool = False


def parse_resolution(text: str, tree_like: bool = False) -> ResolutionProof:
    steps = []
    for no, toks in content_lines(text):
        kind, args = toks[0], [parse_int(t, no) for t in toks[1:]]
        if kind == "a" and len(args) == 1:
            steps.append(Axiom(args[0]))
        elif kind == "r" and len(args) == 3:
            steps.append(Resolve(*args))
        elif kind == "tree" and not args:
            tree_like = True
        else:
            raise ProofError(f"line {no}: cannot parse {' '.join(toks)!r}")
    return ResolutionProof(tuple(steps), tree_like)


def format_resolution(proof: ResolutionProof) -> str:
    out = ["tree"] if proof.tree_like else []
    for s in proof.steps:
        out.append(f"a {s.clause}" if isinstance(s, Axiom) else f"r {s.left} {s.right} {s.pivot}")
    return "\n".join(out) + "\n"


def resolvent(c1: tuple, c2: tuple, pivot: int) -> tuple:
    """Resolve on ``pivot``; raises ValueError if it does not occur with
    opposite signs in the two clauses."""
    if pivot in c1 and -pivot in c2:
        pass
    elif -pivot in c1 and pivot in c2:
        pass
    else:
        raise ValueError(f"pivot {pivot} does not occur with opposite signs")
    lits = [l for l in c1 + c2 if abs(l) != pivot]
    return make_clause(lits, allow_tautology=True)


def derive_clauses(formula: CnfFormula, proof: ResolutionProof):
    """Return (clauses per step, None) or (partial list, Verdict) on error."""
    clauses = []
    used = {}
    for k, step in enumerate(proof.steps, start=1):
        if isinstance(step, Axiom):
            if not 1 <= step.clause <= len(formula.clauses):
                return clauses, reject(f"axiom refers to missing clause {step.clause}", k)
            clauses.append(formula.clause(step.clause))
            continue
        for p in (step.left, step.right):
            if not 1 <= p < k:
                return clauses, reject(f"premise {p} does not precede step {k}", k)
            used[p] = used.get(p, 0) + 1
            if proof.tree_like and used[p] > 1:
                return clauses, reject(f"step {p} used twice in a tree-like proof", k)
        if step.left == step.right and proof.tree_like:
            return clauses, reject(f"step {step.left} used twice in a tree-like proof", k)
        try:
            clauses.append(resolvent(clauses[step.left - 1], clauses[step.right - 1], step.pivot))
        except ValueError as e:
            return clauses, reject(f"step {k}: {e}", k)
    return clauses, None


def verify_resolution(formula: CnfFormula, proof: ResolutionProof,
                      blocks: BlockStructure = None) -> Verdict:
    if not proof.steps:
        return reject("empty proof")
    clauses, err = derive_clauses(formula, proof)
    if err is not None:
        return err
    if clauses[-1]:
        return reject(f"final clause {list(clauses[-1])} is not empty", len(clauses))
    measures = {"length": len(clauses), "width": max(len(c) for c in clauses)}
    if blocks is not None:
        measures["block_width"] = max(clause_block_width(c, blocks) for c in clauses)
    if proof.tree_like:
        depth = []
        for step in proof.steps:
            if isinstance(step, Axiom):
                depth.append(0)
            else:
                depth.append(1 + max(depth[step.left - 1], depth[step.right - 1]))
        measures["depth"] = depth[-1]
    return Verdict(True, measures=measures)


def reachable_steps(proof: ResolutionProof) -> list:
    """Steps (1-based) from which the final step is derived, ascending."""
    seen, stack = set(), [len(proof.steps)]
    while stack:
        k = stack.pop()
        if k in seen:
            continue
        seen.add(k)
        step = proof.steps[k - 1]
        if isinstance(step, Resolve):
            stack.extend((step.left, step.right))
    return sorted(seen)


def proof_to_dag(formula: CnfFormula, proof: ResolutionProof) -> ConjunctionDag:
    """Standard translation: each clause becomes the conjunction of its
    negated literals; a resolution step points at its two premises and an
    axiom outputs its clause index."""
    verdict = verify_resolution(formula, proof)
    if not verdict:
        raise ProofError(f"proof does not verify: {verdict.reason}")
    clauses, _ = derive_clauses(formula, proof)
    vertices = {}
    for k in reachable_steps(proof):
        step = proof.steps[k - 1]
        conj = tuple(-lit for lit in clauses[k - 1])
        if isinstance(step, Axiom):
            vertices[k] = DagVertex(conj, (), step.clause)
        else:
            kids = (step.left,) if step.left == step.right else (step.left, step.right)
            vertices[k] = DagVertex(conj, kids, None)
    prov = {k: f"step {k}" for k in vertices}
    return ConjunctionDag(vertices, len(proof.steps), prov)
