"""Decision-dags whose vertices carry conjunctions of literals.

Text format::

    dag <vertex count> root <id>
    v <id> <lits...> -> <child> [<child>]
    v <id> <lits...> => <output>
    prov <id> <free text>

A vertex with ``->`` is internal (one or two children, possibly equal);
a vertex with ``=>`` is a leaf. Vertex ids are integers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..formula import BlockStructure, clause_block_width
from ..relations import SearchRelation
from .common import ProofError, Verdict, content_lines, parse_int, reject


@dataclass(frozen=True)
class DagVertex:
    conj: tuple            # literals, conjunction; () is the constant-true function
    children: tuple = ()
    output: object = None

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass
class ConjunctionDag:
    vertices: dict         # id -> DagVertex
    root: int
    provenance: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def width(self) -> int:
        return max((len(set(v.conj)) for v in self.vertices.values()), default=0)

    def block_width(self, blocks: BlockStructure) -> int:
        return max((clause_block_width(v.conj, blocks) for v in self.vertices.values()),
                   default=0)


def conj_fixing(conj) -> dict:
    """Partial assignment forced by a conjunction, or None if contradictory."""
    fixed = {}
    for lit in conj:
        b = 1 if lit > 0 else 0
        if fixed.get(abs(lit), b) != b:
            return None
        fixed[abs(lit)] = b
    return fixed


def _satisfies(fixed: dict, conj) -> bool:
    return all(fixed[abs(l)] == (1 if l > 0 else 0) for l in conj)


def _topological(dag: ConjunctionDag):
    """Returns (order, error)."""
    indeg = {v: 0 for v in dag.vertices}
    for vid, vert in dag.vertices.items():
        for c in set(vert.children):
            if c not in dag.vertices:
                return None, f"vertex {vid} points at missing vertex {c}"
            indeg[c] += 1
    roots = [v for v, d in indeg.items() if d == 0]
    if len(roots) != 1:
        return None, f"expected exactly one root, found {len(roots)}: {sorted(roots)[:5]}"
    if roots[0] != dag.root:
        return None, f"declared root {dag.root} is not the unique source {roots[0]}"
    order, queue = [], list(roots)
    while queue:
        v = queue.pop()
        order.append(v)
        for c in set(dag.vertices[v].children):
            indeg[c] -= 1
            if indeg[c] == 0:
                queue.append(c)
    if len(order) != len(dag.vertices):
        return None, "dag has a cycle"
    return order, None


def cover_counterexample(parent, kids) -> dict:
    """A point of the parent's subcube outside every child's subcube, or
    None. Enumerates only variables the children mention beyond the parent."""
    fixed = conj_fixing(parent)
    if fixed is None:
        return None
    extra = sorted({abs(l) for c in kids for l in c} - set(fixed))
    for bits in itertools.product((0, 1), repeat=len(extra)):
        point = dict(fixed)
        point.update(zip(extra, bits))
        if not any(_satisfies(point, c) for c in kids):
            return point
    return None


def verify_decision_dag(relation: SearchRelation, dag: ConjunctionDag,
                        exhaustive: bool = True, blocks: BlockStructure = None) -> Verdict:
    """Root, covering and leaf conditions.

    With ``exhaustive`` every leaf is checked by enumerating its whole
    subcube; otherwise the relation's own shortcut is used.
    """
    if dag.root not in dag.vertices:
        return reject(f"root {dag.root} is not a vertex")
    order, err = _topological(dag)
    if err:
        return reject(err)
    if dag.vertices[dag.root].conj:
        return reject("root conjunction must be empty")
    for vid in order:
        vert = dag.vertices[vid]
        for l in vert.conj:
            if not 1 <= abs(l) <= relation.n_bits:
                return reject(f"vertex {vid}: literal {l} out of range", vid)
        if vert.is_leaf:
            if vert.output is None:
                return reject(f"leaf {vid} has no output", vid)
            fixed = conj_fixing(vert.conj)
            if fixed is None:
                continue
            holds = (SearchRelation.holds_on(relation, fixed, vert.output) if exhaustive
                     else relation.holds_on(fixed, vert.output))
            if not holds:
                return reject(f"leaf {vid}: output {vert.output} is not valid on its subcube", vid)
        else:
            if vert.output is not None:
                return reject(f"vertex {vid} has both children and an output", vid)
            if len(vert.children) > 2:
                return reject(f"vertex {vid} has out-degree {len(vert.children)}", vid)
            kids = [dag.vertices[c].conj for c in vert.children]
            bad = cover_counterexample(vert.conj, kids)
            if bad is not None:
                return reject(f"vertex {vid}: children do not cover point {sorted(bad.items())}",
                              vid)
    measures = {"size": dag.size, "width": dag.width}
    if blocks is not None:
        measures["block_width"] = dag.block_width(blocks)
    return Verdict(True, measures=measures)


def _parse_output(tok: str):
    try:
        return int(tok)
    except ValueError:
        return tok


def parse_dag(text: str) -> ConjunctionDag:
    root, declared = None, None
    vertices, prov = {}, {}
    for no, toks in content_lines(text):
        if toks[0] == "dag":
            if len(toks) != 4 or toks[2] != "root":
                raise ProofError(f"line {no}: bad header")
            declared, root = parse_int(toks[1], no), parse_int(toks[3], no)
        elif toks[0] == "v":
            vid = parse_int(toks[1], no)
            if vid in vertices:
                raise ProofError(f"line {no}: duplicate vertex {vid}")
            rest = toks[2:]
            if "->" in rest:
                k = rest.index("->")
                kids = tuple(parse_int(t, no) for t in rest[k + 1:])
                if not kids:
                    raise ProofError(f"line {no}: '->' without children")
                vertices[vid] = DagVertex(tuple(parse_int(t, no) for t in rest[:k]), kids)
            elif "=>" in rest:
                k = rest.index("=>")
                if len(rest) != k + 2:
                    raise ProofError(f"line {no}: leaf needs exactly one output")
                vertices[vid] = DagVertex(tuple(parse_int(t, no) for t in rest[:k]), (),
                                          _parse_output(rest[k + 1]))
            else:
                raise ProofError(f"line {no}: vertex needs '->' or '=>'")
        elif toks[0] == "prov":
            prov[parse_int(toks[1], no)] = " ".join(toks[2:])
        else:
            raise ProofError(f"line {no}: unknown record {toks[0]!r}")
    if root is None:
        raise ProofError("missing dag header")
    if declared != len(vertices):
        raise ProofError(f"header declares {declared} vertices, found {len(vertices)}")
    return ConjunctionDag(vertices, root, prov)


def format_dag(dag: ConjunctionDag) -> str:
    out = [f"dag {dag.size} root {dag.root}"]
    for vid in sorted(dag.vertices):
        v = dag.vertices[vid]
        lits = " ".join(str(l) for l in v.conj)
        lits = lits + " " if lits else ""
        if v.is_leaf:
            out.append(f"v {vid} {lits}=> {v.output}")
        else:
            out.append(f"v {vid} {lits}-> {' '.join(str(c) for c in v.children)}")
    for vid in sorted(dag.provenance):
        out.append(f"prov {vid} {dag.provenance[vid]}")
    return "\n".join(out) + "\n"
