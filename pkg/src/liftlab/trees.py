"""Decision trees over named boolean variables."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Callable, Iterator, Union


@dataclass(frozen=True)
class Leaf:
    label: Any


@dataclass(frozen=True)
class Query:
    var: Any
    zero: "Node"
    one: "Node"


Node = Union[Leaf, Query]


def depth(tree: Node) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + max(depth(tree.zero), depth(tree.one))


def size(tree: Node) -> int:
    if isinstance(tree, Leaf):
        return 1
    return 1 + size(tree.zero) + size(tree.one)


def evaluate(tree: Node, value: Callable[[Any], int]) -> tuple:
    """Walk the tree; returns (leaf label, path as [(var, bit), ...])."""
    path = []
    while isinstance(tree, Query):
        bit = value(tree.var)
        path.append((tree.var, bit))
        tree = tree.one if bit else tree.zero
    return tree.label, path


def leaves(tree: Node, path: tuple = ()) -> Iterator[tuple]:
    """Yield (path, label) for every leaf; a path is a tuple of (var, bit)."""
    if isinstance(tree, Leaf):
        yield path, tree.label
    else:
        yield from leaves(tree.zero, path + ((tree.var, 0),))
        yield from leaves(tree.one, path + ((tree.var, 1),))


def to_dict(tree: Node) -> dict:
    if isinstance(tree, Leaf):
        return {"leaf": tree.label}
    return {"query": tree.var, "0": to_dict(tree.zero), "1": to_dict(tree.one)}


def from_dict(doc: dict) -> Node:
    if "leaf" in doc:
        label = doc["leaf"]
        return Leaf(tuple(label) if isinstance(label, list) else label)
    var = doc["query"]
    if isinstance(var, list):
        var = tuple(var)
    return Query(var, from_dict(doc["0"]), from_dict(doc["1"]))


def dumps(tree: Node) -> str:
    return json.dumps(to_dict(tree), sort_keys=True) + "\n"


def loads(text: str) -> Node:
    return from_dict(json.loads(text))
