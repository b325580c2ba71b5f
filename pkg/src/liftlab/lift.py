"""Lift refutations of F to refutations of the composed formula.

Dag lifting turns each vertex of a resolution dag (a conjunction touching
blocks I) into one conjunction per selector assignment over I; when a
resolution step introduces a pivot from a block the vertex does not touch,
a small selector-reading tree connects the vertex to its children.
Tree lifting replaces each source query by the gadget's query tree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import trees
from .compose import CompositionManifest, compose_block
from .formula import BlockStructure, CnfFormula, touched_blocks
from .gadget import GadgetParams, gadget_query_tree, selector_bits
from .proofs.common import ProofError
from .proofs.dags import ConjunctionDag, DagVertex
from .proofs.resolution import Axiom, ResolutionProof, proof_to_dag, verify_resolution


@dataclass
class LiftedDag:
    dag: ConjunctionDag
    composed: CnfFormula
    manifest: CompositionManifest
    source_size: int
    source_block_width: int

    @property
    def size_bound(self) -> int:
        """m^(bw + 1) * |source dag|."""
        return self.manifest.params.m ** (self.source_block_width + 1) * self.source_size


def lift_literal(lit: int, selector: int, blocks: BlockStructure,
                 manifest: CompositionManifest) -> tuple:
    """Literals stating that gadget output bit (i, j) equals the value
    making ``lit`` true, given selector value ``selector`` for block i."""
    i, j = blocks.locate(abs(lit))
    y = manifest.matrix_var(i, j, selector)
    return (y if lit > 0 else -y,)


def selector_literals(block: int, value: int, manifest: CompositionManifest) -> tuple:
    bits = selector_bits(value, manifest.params.t)
    return tuple(manifest.selector_var(block, k) * (1 if b else -1)
                 for k, b in enumerate(bits, start=1))


def _lift_conj(conj, alpha: dict, blocks, manifest) -> tuple:
    lits = []
    for i in sorted(alpha):
        lits.extend(selector_literals(i, alpha[i], manifest))
    for lit in conj:
        lits.extend(lift_literal(lit, alpha[blocks.block_of(abs(lit))], blocks, manifest))
    return tuple(sorted(set(lits), key=lambda l: (abs(l), l)))


def lift_dag_refutation(formula: CnfFormula, proof: ResolutionProof,
                        blocks: BlockStructure, m: int, budget: int = 10 ** 7) -> LiftedDag:
    verdict = verify_resolution(formula, proof, blocks)
    if not verdict:
        raise ProofError(f"input proof does not verify: {verdict.reason}")
    composed, manifest = compose_block(formula, blocks, m, budget=budget)
    source = proof_to_dag(formula, proof)
    touched = {v: touched_blocks(vert.conj, blocks) for v, vert in source.vertices.items()}

    ids: dict = {}
    vertices: dict = {}
    prov: dict = {}

    def vid(key) -> int:
        if key not in ids:
            ids[key] = len(ids) + 1
        return ids[key]

    def member(v: int, alpha: dict) -> int:
        return vid(("v", v, tuple(sorted((i, alpha[i]) for i in touched[v]))))

    for v in sorted(source.vertices):
        vert = source.vertices[v]
        step = proof.steps[v - 1]
        for values in itertools.product(range(1, m + 1), repeat=len(touched[v])):
            alpha = dict(zip(touched[v], values))
            key = member(v, alpha)
            conj = _lift_conj(vert.conj, alpha, blocks, manifest)
            prov[key] = f"step {v} selectors {sorted(alpha.items())}"
            if isinstance(step, Axiom):
                out = manifest.composed_clause_index(step.clause, alpha)
                vertices[key] = DagVertex(conj, (), out)
                continue
            pivot_block = blocks.block_of(step.pivot)
            kids_of = lambda full: tuple(dict.fromkeys(
                member(c, {i: full[i] for i in touched[c]}) for c in vert.children))
            new = [c for c in vert.children if not set(touched[c]) <= set(touched[v])]
            if not new:
                vertices[key] = DagVertex(conj, kids_of(alpha))
                continue
            extra = set().union(*(set(touched[c]) - set(touched[v]) for c in vert.children))
            if extra != {pivot_block}:
                raise ProofError(f"step {v}: children touch new blocks {sorted(extra)}, "
                                 f"expected only the pivot block")
            # connector: read the pivot block's selector bit by bit
            t = manifest.params.t

            def connector(prefix: tuple) -> int:
                node = vid(("c", key, prefix))
                sel = tuple(manifest.selector_var(pivot_block, k) * (1 if bit else -1)
                            for k, bit in enumerate(prefix, start=1))
                lits = tuple(sorted(set(conj + sel), key=lambda l: (abs(l), l)))
                if len(prefix) < t:
                    prov[node] = f"step {v} selectors {sorted(alpha.items())} prefix {prefix}"
                    vertices[node] = DagVertex(lits, (connector(prefix + (0,)),
                                                      connector(prefix + (1,))))
                    return node
                full = dict(alpha)
                full[pivot_block] = 1 + int("".join(map(str, prefix)), 2)
                prov[node] = f"step {v} selectors {sorted(full.items())} connector"
                vertices[node] = DagVertex(lits, kids_of(full))
                return node

            vertices[key] = DagVertex(conj, (connector((0,)), connector((1,))))

    root = member(source.root, {})
    dag = ConjunctionDag(vertices, root, prov)
    return LiftedDag(dag, composed, manifest, source.size, verdict.measures["block_width"])


def verify_tree_against_formula(tree: trees.Node, formula: CnfFormula) -> None:
    """Every consistent leaf path must falsify its labelled clause."""
    for path, label in trees.leaves(tree):
        fixed = {}
        consistent = True
        for var, bit in path:
            if fixed.setdefault(var, bit) != bit:
                consistent = False
        if not consistent:
            continue
        if not isinstance(label, int) or not 1 <= label <= len(formula.clauses):
            raise ProofError(f"leaf label {label!r} is not a clause index")
        clause = formula.clause(label)
        if any(fixed.get(abs(l)) != (0 if l > 0 else 1) for l in clause):
            raise ProofError(f"leaf path {path} does not falsify clause {label}")


def lift_tree_refutation(tree: trees.Node, formula: CnfFormula, m: int,
                         budget: int = 10 ** 7):
    """Returns (lifted tree, composed formula, manifest).

    Queries of z_i become the gadget's query tree for block i; a leaf
    outputs the composed clause of its certificate.
    """
    verify_tree_against_formula(tree, formula)
    composed, manifest = compose_block(formula, BlockStructure.unit(formula.var_count), m,
                                       budget=budget)
    params = GadgetParams(m, 1)

    def rec(node, selectors: dict) -> trees.Node:
        if isinstance(node, trees.Leaf):
            clause = formula.clause(node.label)
            alpha = {abs(l): selectors[abs(l)] for l in clause}
            return trees.Leaf(manifest.composed_clause_index(node.label, alpha))
        i = node.var
        gadget = gadget_query_tree(params, lambda k: manifest.selector_var(i, k),
                                   lambda r, c: manifest.matrix_var(i, r, c))
        return graft(gadget, i, selectors, node)

    def graft(g, i, selectors, node, sel_bits=()):
        if isinstance(g, trees.Leaf):
            value = g.label[0]
            sel = dict(selectors)
            sel[i] = 1 + int("".join(map(str, sel_bits)), 2)
            return rec(node.one if value else node.zero, sel)
        is_selector = manifest.describe_var(g.var)[0] == "x"
        return trees.Query(g.var,
                           graft(g.zero, i, selectors, node,
                                 sel_bits + ((0,) if is_selector else ())),
                           graft(g.one, i, selectors, node,
                                 sel_bits + ((1,) if is_selector else ())))

    return rec(tree, {}), composed, manifest
