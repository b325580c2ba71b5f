"""Real communication protocols: binary trees branching on triangles.

At an internal node the input (x, y) goes left when a(x) < b(y), with
rational labelings a over X and b over Y.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

from .common import ProofError


@dataclass(frozen=True)
class ProtocolLeaf:
    output: object


@dataclass(frozen=True)
class ProtocolNode:
    row_label: dict          # x -> Fraction
    col_label: dict          # y -> Fraction
    left: "ProtocolTree"
    right: "ProtocolTree"

    def in_triangle(self, x, y) -> bool:
        return self.row_label[x] < self.col_label[y]


ProtocolTree = Union[ProtocolLeaf, ProtocolNode]


@dataclass
class RealProtocol:
    x_domain: tuple
    y_domain: tuple
    root: ProtocolTree

    def __post_init__(self):
        self.x_domain = tuple(self.x_domain)
        self.y_domain = tuple(self.y_domain)
        self.x_set, self.y_set = frozenset(self.x_domain), frozenset(self.y_domain)
        for node in self.internal_nodes():
            if set(node.row_label) != self.x_set or set(node.col_label) != self.y_set:
                raise ProofError("labelings must be total over the declared domains")

    def internal_nodes(self):
        stack = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, ProtocolNode):
                yield node
                stack.extend((node.right, node.left))

    @property
    def depth(self) -> int:
        def rec(node):
            if isinstance(node, ProtocolLeaf):
                return 0
            return 1 + max(rec(node.left), rec(node.right))
        return rec(self.root)


def node(x_domain, y_domain, a: Callable, b: Callable, left, right) -> ProtocolNode:
    """Internal node from labeling functions, tabulated over the domains."""
    return ProtocolNode({x: Fraction(a(x)) for x in x_domain},
                        {y: Fraction(b(y)) for y in y_domain}, left, right)


def eval_protocol(protocol: RealProtocol, x, y) -> tuple:
    """(leaf output, path) where path lists 'L'/'R' moves from the root."""
    if x not in protocol.x_set:
        raise ProofError(f"x={x!r} is outside the declared X domain")
    if y not in protocol.y_set:
        raise ProofError(f"y={y!r} is outside the declared Y domain")
    path, cur = [], protocol.root
    while isinstance(cur, ProtocolNode):
        if cur.in_triangle(x, y):
            path.append("L")
            cur = cur.left
        else:
            path.append("R")
            cur = cur.right
    return cur.output, path


def _key(v):
    return json.loads(json.dumps(v))


def _tuplify(v):
    return tuple(_tuplify(e) for e in v) if isinstance(v, list) else v


def protocol_to_json(protocol: RealProtocol) -> str:
    def enc(node):
        if isinstance(node, ProtocolLeaf):
            return {"output": node.output}
        return {"a": [[_key(x), str(node.row_label[x])] for x in protocol.x_domain],
                "b": [[_key(y), str(node.col_label[y])] for y in protocol.y_domain],
                "left": enc(node.left), "right": enc(node.right)}
    doc = {"x_domain": [_key(x) for x in protocol.x_domain],
           "y_domain": [_key(y) for y in protocol.y_domain],
           "tree": enc(protocol.root)}
    return json.dumps(doc, sort_keys=True) + "\n"


def protocol_from_json(text: str) -> RealProtocol:
    try:
        doc = json.loads(text)

        def dec(d):
            if "output" in d:
                return ProtocolLeaf(_tuplify(d["output"]))
            return ProtocolNode({_tuplify(x): Fraction(q) for x, q in d["a"]},
                                {_tuplify(y): Fraction(q) for y, q in d["b"]},
                                dec(d["left"]), dec(d["right"]))
        return RealProtocol([_tuplify(x) for x in doc["x_domain"]],
                            [_tuplify(y) for y in doc["y_domain"]], dec(doc["tree"]))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise ProofError(f"bad protocol document: {e}") from None
