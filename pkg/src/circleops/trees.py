"""Planar rooted trees with ordered children.

A tree is either the free-living edge (no vertex at all) or a vertex carrying
an ordered, possibly empty tuple of child trees.  Terms are immutable and
compared structurally, so equality coincides with planar isomorphism.

Text form: ``tree ::= "|" | "(" tree* ")"`` with single spaces between the
children of a vertex.  ``corolla(2)`` prints as ``(| |)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


class ParseError(ValueError):
    """Raised on malformed text input; carries the byte offset of the fault."""

    def __init__(self, offset: int, message: str):
        super().__init__(f"offset {offset}: {message}")
        self.offset = offset
        self.reason = message


@dataclass(frozen=True)
class Leaf:
    """The free-living edge; it has one leaf and no vertices."""

    def __str__(self) -> str:
        return "|"


@dataclass(frozen=True)
class Node:
    """A vertex with an ordered tuple of child trees (possibly empty)."""

    children: tuple

    def __str__(self) -> str:
        return "(" + " ".join(str(c) for c in self.children) + ")"


LEAF = Leaf()

PlanarTree = Leaf | Node


def node(*children) -> Node:
    return Node(tuple(children))


def corolla(n: int) -> Node:
    """The tree with one vertex and n leaves."""
    if n < 0:
        raise ValueError("corolla arity must be nonnegative")
    return Node((LEAF,) * n)


def leaves(t) -> int:
    if isinstance(t, Leaf):
        return 1
    return sum(leaves(c) for c in t.children)


def vertices(t) -> int:
    if isinstance(t, Leaf):
        return 0
    return 1 + sum(vertices(c) for c in t.children)


def parse_tree(text: str):
    """Parse the text form of a planar tree; errors carry byte offsets."""
    t, pos = _parse_tree_at(text, _skip_spaces(text, 0))
    pos = _skip_spaces(text, pos)
    if pos != len(text):
        raise ParseError(pos, "trailing input after tree")
    return t


def _skip_spaces(text: str, pos: int) -> int:
    while pos < len(text) and text[pos] == " ":
        pos += 1
    return pos


def _parse_tree_at(text: str, pos: int):
    if pos >= len(text):
        raise ParseError(pos, "unexpected end of input, expected a tree")
    ch = text[pos]
    if ch == "|":
        return LEAF, pos + 1
    if ch == "(":
        pos += 1
        children = []
        while True:
            pos = _skip_spaces(text, pos)
            if pos >= len(text):
                raise ParseError(pos, "unclosed '('")
            if text[pos] == ")":
                return Node(tuple(children)), pos + 1
            child, pos = _parse_tree_at(text, pos)
            children.append(child)
    raise ParseError(pos, f"unexpected character {ch!r}")


def graft(base, replacements):
    """Replace the leaves of base, left to right, with the given trees."""
    reps = list(replacements)
    if leaves(base) != len(reps):
        raise ValueError(
            f"graft arity mismatch: base has {leaves(base)} leaves, got {len(reps)} replacements"
        )
    it = iter(reps)
    return _graft(base, it)


def _graft(t, it):
    if isinstance(t, Leaf):
        return next(it)
    return Node(tuple(_graft(c, it) for c in t.children))


def subtree_at_vertex(t, v: int):
    """The subtree rooted at the vertex with preorder index v."""
    found = _find_vertex(t, v)
    if found is None:
        raise ValueError(f"vertex index {v} out of range")
    return found


def _find_vertex(t, v: int):
    if isinstance(t, Leaf):
        return None
    if v == 0:
        return t
    v -= 1
    for c in t.children:
        found = _find_vertex(c, v)
        if found is not None:
            return found
        v -= vertices(c)
        if v < 0:
            return None
    return None


def insert_at_vertex(s, v: int, t):
    """Insert t inside the vertex v of s.

    The vertex is replaced by the whole of t and the former child subtrees of
    v are grafted onto the leaves of t in planar order, so t must have exactly
    as many leaves as v has child edges.
    """
    old = subtree_at_vertex(s, v)
    if leaves(t) != len(old.children):
        raise ValueError(
            f"insertion arity mismatch: vertex {v} has {len(old.children)} child edges,"
            f" tree has {leaves(t)} leaves"
        )
    replaced, _ = _replace_vertex(s, v, graft(t, old.children))
    return replaced


def _replace_vertex(t, v: int, new):
    if isinstance(t, Leaf):
        return t, v
    if v == 0:
        return new, -1
    v -= 1
    out = []
    for c in t.children:
        if v >= 0:
            c, v = _replace_vertex(c, v, new)
        out.append(c)
    return Node(tuple(out)), v


def tree_sort_key(t):
    """Total order used by the enumerators: size first, then text."""
    return (vertices(t), leaves(t), str(t))


def enumerate_trees(max_vertices: int, max_leaves: int):
    """All planar trees within the given bounds, smallest first, no duplicates."""
    out = []
    for nv in range(max_vertices + 1):
        out.extend(_trees_exact(nv, max_leaves))
    return tuple(sorted(out, key=tree_sort_key))


@lru_cache(maxsize=None)
def _trees_exact(nv: int, max_leaves: int):
    if nv == 0:
        return (LEAF,) if max_leaves >= 1 else ()
    return tuple(Node(f) for f in _forests(nv - 1, max_leaves))


@lru_cache(maxsize=None)
def _forests(nv: int, max_leaves: int):
    # Ordered forests with nv vertices in total and at most max_leaves leaves.
    # Leading leaf entries cost leaf budget, so the recursion terminates.
    out = [()] if nv == 0 else []
    for first_nv in range(nv + 1):
        for first in _trees_exact(first_nv, max_leaves):
            rest_budget = max_leaves - leaves(first)
            if rest_budget < 0:
                continue
            for rest in _forests(nv - first_nv, rest_budget):
                out.append((first,) + rest)
    return tuple(out)
