"""Explicit tree and morphism constructions.

The central construction doubles every marked vertex of a tree (non-root,
at most one child) by two fresh immediate successors, realizing every subset
of the marked set as the disagreement set of a witness connection.  The
remaining builders put forests on top of designated vertices, adjoin roots,
and add single extension leaves.

Constructions return canonical trees together with explicit index
translation tables, since canonical renumbering moves vertices around.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .morphisms import CONN, Connection, TreeMap
from .trees import ROOT, Forest, OrderedTree, marked_set, tree_to_record

_Node = tuple


def _renumber(children: dict, root: _Node) -> tuple[tuple[int, ...], dict]:
    """Preorder-number a children structure; returns (parent, node -> index)."""
    parent: list[int] = []
    index: dict = {}
    stack: list[tuple[_Node, int]] = [(root, ROOT)]
    while stack:
        node, par = stack.pop()
        idx = len(parent)
        parent.append(par)
        index[node] = idx
        for child in reversed(children.get(node, ())):
            stack.append((child, idx))
    return tuple(parent), index


@dataclass(frozen=True)
class DoublingResult:
    """The doubled tree with its witness surjection and embeddings.

    ``base_index`` maps each original vertex to its index in the doubled
    tree; ``doubles`` maps each marked vertex to the indices of its two new
    immediate successors, first one below the old child when there was one.
    """

    base: OrderedTree
    tree: OrderedTree
    surj: TreeMap
    base_index: tuple[int, ...]
    doubles: dict[int, tuple[int, int]]

    @property
    def marked(self) -> tuple[int, ...]:
        return tuple(sorted(self.doubles))

    def base_embedding(self) -> TreeMap:
        """The inclusion of the original tree, equal to the induced embedding
        of the witness surjection."""
        return TreeMap(self.base, self.tree, self.base_index)

    def embedding_for(self, subset: Iterable[int]) -> TreeMap:
        """The embedding sending each chosen marked vertex to its first
        double and fixing everything else."""
        chosen = frozenset(subset)
        extra = chosen - set(self.doubles)
        if extra:
            raise ValueError(f"vertices {sorted(extra)} are not marked in the base tree")
        vals = list(self.base_index)
        for b in chosen:
            vals[b] = self.doubles[b][0]
        return TreeMap(self.base, self.tree, tuple(vals))

    def connection_for(self, subset: Iterable[int]) -> Connection:
        return Connection(CONN, self.surj, self.embedding_for(subset))

    def subsets(self) -> Iterator[frozenset[int]]:
        """All subsets of the marked set, in binary-counter order."""
        marked = self.marked
        for mask in range(1 << len(marked)):
            yield frozenset(marked[i] for i in range(len(marked)) if mask >> i & 1)

    def to_record(self) -> dict:
        return {
            "base": tree_to_record(self.base),
            "tree": tree_to_record(self.tree),
            "surjection": list(self.surj.values),
            "vertex_map": list(self.base_index),
            "doubles": [[b, *self.doubles[b]] for b in self.marked],
            "embeddings": [
                {"marked": sorted(B), "emb": list(self.embedding_for(B).values)}
                for B in self.subsets()
            ],
        }


def doubling_tree(S: OrderedTree) -> DoublingResult:
    """Double every marked vertex of S by two fresh immediate successors.

    Each marked vertex a gains new children a1 < a2; the former unique child
    of a (when present) becomes a child of a1.  The surjection collapses
    a1, a2 back onto a and is the identity elsewhere; its induced embedding
    is the inclusion of S.
    """
    A = marked_set(S)
    children: dict = {}
    for v in range(S.n):
        node = ("o", v)
        if v in A:
            children[node] = [("d", v, 1), ("d", v, 2)]
            children[("d", v, 1)] = [("o", c) for c in S.children[v]]
            children[("d", v, 2)] = []
        else:
            children[node] = [("o", c) for c in S.children[v]]
    parent, index = _renumber(children, ("o", 0))
    tree = OrderedTree(parent)
    base_index = tuple(index[("o", v)] for v in range(S.n))
    doubles = {a: (index[("d", a, 1)], index[("d", a, 2)]) for a in sorted(A)}
    svals = [0] * tree.n
    for v in range(S.n):
        svals[base_index[v]] = v
    for a, (a1, a2) in doubles.items():
        svals[a1] = a
        svals[a2] = a
    surj = TreeMap(tree, S, tuple(svals))
    return DoublingResult(S, tree, surj, base_index, doubles)


@dataclass(frozen=True)
class GraftResult:
    tree: OrderedTree
    base_index: tuple[int, ...]
    forest_index: tuple[tuple[int, ...], ...]

    def to_record(self) -> dict:
        return {
            "tree": tree_to_record(self.tree),
            "vertex_map": list(self.base_index),
            "forest_maps": [list(m) for m in self.forest_index],
        }


def graft(T: OrderedTree, anchors: Sequence[int], forests: Sequence[Forest]) -> GraftResult:
    """Put each forest on top of its anchor vertex.

    The components of forest i become the last children of anchors[i], so in
    the resulting order each forest occupies the final interval of its
    anchor's successor set.
    """
    if len(anchors) != len(forests):
        raise ValueError("need exactly one forest per anchor")
    if len(set(anchors)) != len(anchors):
        raise ValueError("anchors must be distinct")
    for x in anchors:
        T._check_vertex(x)
    children: dict = {}
    for v in range(T.n):
        children[("t", v)] = [("t", c) for c in T.children[v]]
    for i, (x, F) in enumerate(zip(anchors, forests)):
        for w in range(F.n):
            children[("f", i, w)] = [("f", i, c) for c in F.children[w]]
        children[("t", x)].extend(("f", i, r) for r in F.roots)
    parent, index = _renumber(children, ("t", 0))
    tree = OrderedTree(parent)
    base_index = tuple(index[("t", v)] for v in range(T.n))
    forest_index = tuple(
        tuple(index[("f", i, w)] for w in range(F.n)) for i, F in enumerate(forests)
    )
    return GraftResult(tree, base_index, forest_index)


def add_root(F: Forest) -> OrderedTree:
    """Adjoin a fresh root below every component of the forest."""
    return OrderedTree((ROOT,) + tuple(0 if p == ROOT else p + 1 for p in F.parent))


def plus_leaf(S: OrderedTree) -> OrderedTree:
    """One new vertex above the last vertex, placed last in the order."""
    return OrderedTree(S.parent + (S.n - 1,))


def star_extend(S: OrderedTree) -> OrderedTree:
    """One new leaf under the root, last in the root's child order."""
    return OrderedTree(S.parent + (0,))
