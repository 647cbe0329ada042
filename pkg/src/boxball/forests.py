"""Rooted-forest view of Motzkin paths.

Each excursion of a path away from 0 is the depth-first contour of a planted
tree: a root at level 0 with a single child, and below it one node per
upstroke.  Hill flattening becomes leaf deletion (``trim``) and the excursion
operator becomes a cut along the path to the deepest node (``lop``).

A forest is stored as a parent array in DFS preorder (``-1`` marks a root),
with levels, subtree sizes and child lists cached at construction so that
``lop`` and the permutation formulas read them in O(1).

Equality is up to the canonical form: a root with several children is the
same as several planted trees side by side, and bare roots are ignored.
This is exactly the information a path carries once its h-strokes at
height 0 are removed, so ``contour`` is injective on canonical forms.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .diagram import YoungDiagram, transpose
from .errors import DomainError, InvariantViolation, ParseError
from .paths import LatticePath

__all__ = [
    "RootedForest",
    "forest_of_path",
    "contour",
    "trim",
    "lop",
    "young_from_forest",
    "serialize_forest",
    "parse_forest",
]


class RootedForest:
    """Ordered forest of ordered rooted trees, nodes numbered in DFS preorder."""

    __slots__ = ("_parent", "_level", "_size", "_children", "_canon")

    def __init__(self, parents: Sequence[int] = ()):
        parent = tuple(int(p) for p in parents)
        n = len(parent)
        level = [0] * n
        children: list[list[int]] = [[] for _ in range(n)]
        stack: list[int] = []
        for v, p in enumerate(parent):
            # preorder means the parent is on the current root-to-node stack
            if p == -1:
                stack.clear()
            else:
                while stack and stack[-1] != p:
                    stack.pop()
                if not stack:
                    raise DomainError(f"node {v} has parent {p}, which breaks DFS preorder")
                level[v] = level[p] + 1
                children[p].append(v)
            stack.append(v)
        size = [1] * n
        for v in range(n - 1, -1, -1):
            if parent[v] >= 0:
                size[parent[v]] += size[v]
        self._parent = parent
        self._level = tuple(level)
        self._size = tuple(size)
        self._children = tuple(tuple(c) for c in children)
        self._canon: tuple[str, ...] | None = None

    # -- structure ----------------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self._parent)

    @property
    def parents(self) -> tuple[int, ...]:
        return self._parent

    @property
    def levels(self) -> tuple[int, ...]:
        return self._level

    @property
    def subtree_sizes(self) -> tuple[int, ...]:
        return self._size

    def children(self, v: int) -> tuple[int, ...]:
        return self._children[v]

    @property
    def roots(self) -> list[int]:
        return [v for v, p in enumerate(self._parent) if p == -1]

    @property
    def leaves(self) -> list[int]:
        """Childless nodes other than roots."""
        return [v for v in range(self.node_count) if self._parent[v] >= 0 and not self._children[v]]

    @property
    def max_level(self) -> int:
        return max(self._level, default=0)

    @property
    def trees(self) -> list[str]:
        """Each tree as a balanced-parentheses string, bare roots included."""
        return [self._paren(r) for r in self.roots]

    def _paren(self, v: int) -> str:
        return "(" + "".join(self._paren(c) for c in self._children[v]) + ")"

    def __len__(self) -> int:
        return len(self.roots)

    # -- canonical form -----------------------------------------------------

    def canonical(self) -> tuple[str, ...]:
        """Planted trees in order, one per child of a root."""
        if self._canon is None:
            self._canon = tuple(
                "(" + self._paren(c) + ")" for r in self.roots for c in self._children[r]
            )
        return self._canon

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RootedForest):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    def __repr__(self) -> str:
        text = serialize_forest(self)
        if len(text) > 60:
            text = f"<{len(self)} trees, {self.node_count} nodes>"
        return f"RootedForest({text})"


def serialize_forest(forest: RootedForest) -> str:
    return " ".join(forest.trees)


def parse_forest(text: str) -> RootedForest:
    parents: list[int] = []
    for start, token in _tokens(text):
        stack: list[int] = []
        for i, ch in enumerate(token):
            if ch == "(":
                parents.append(stack[-1] if stack else -1)
                if not stack and i:
                    raise ParseError("one tree per token", start + i + 1)
                stack.append(len(parents) - 1)
            elif ch == ")":
                if not stack:
                    raise ParseError("unbalanced ')'", start + i + 1)
                stack.pop()
            else:
                raise ParseError(f"invalid character {ch!r} in forest", start + i + 1)
        if stack:
            raise ParseError("unclosed '('", start + len(token))
    return RootedForest(parents)


def _tokens(text: str):
    pos = 0
    for token in text.split(" "):
        if token:
            yield pos, token
        pos += len(token) + 1


# -- path <-> forest --------------------------------------------------------

def forest_of_path(path) -> RootedForest:
    """One planted tree per excursion from 0; flats stay on the current node."""
    h = path.heights if isinstance(path, LatticePath) else np.asarray(path)
    if h.size and (h[0] != 0 or h.min() < 0):
        raise DomainError("forest_of_path needs a nonnegative path starting at 0")
    parents: list[int] = []
    stack: list[int] = []
    for step in np.diff(h).tolist():
        if step == 1:
            if not stack:
                parents.append(-1)
                stack.append(len(parents) - 1)
            parents.append(stack[-1])
            stack.append(len(parents) - 1)
        elif step == -1:
            stack.pop()
            if len(stack) == 1:
                stack.pop()
    return RootedForest(parents)


def contour(forest: RootedForest) -> LatticePath:
    """Depth-first level sequence of the canonical planted trees, no h-strokes."""
    out = [0]
    for r in forest.roots:
        for c in forest.children(r):
            lo, hi = c, c + forest.subtree_sizes[c]
            # walk the subtree: up into each node, down after its subtree closes
            stack: list[int] = []
            for v in range(lo, hi):
                lv = forest.levels[v]
                while stack and forest.levels[stack[-1]] >= lv:
                    stack.pop()
                    out.append(out[-1] - 1)
                out.append(lv)
                stack.append(v)
            while stack:
                stack.pop()
                out.append(out[-1] - 1)
    return LatticePath._trusted(np.array(out, dtype=np.int64))


# -- operators ----------------------------------------------------------------

def _build(components) -> RootedForest:
    """Assemble a forest from ``(source, root, kept_children)`` components.

    Each component becomes one tree: a fresh root followed by verbatim copies
    of the listed child subtrees of ``source``.
    """
    parents: list[int] = []
    for src, _root, kids in components:
        base = len(parents)
        parents.append(-1)
        for c in kids:
            offset = len(parents) - c
            parents.append(base)
            for v in range(c + 1, c + src.subtree_sizes[c]):
                parents.append(src.parents[v] + offset)
    return RootedForest(parents)


def trim(forest: RootedForest) -> RootedForest:
    """Delete every leaf; trees reduced to a bare root are dropped."""
    keep = [
        v for v in range(forest.node_count)
        if forest.parents[v] == -1 or forest.children(v)
    ]
    new_index = {v: i for i, v in enumerate(keep)}
    parents = [-1 if forest.parents[v] == -1 else new_index[forest.parents[v]] for v in keep]
    pruned = RootedForest(parents)
    keep_roots = [r for r in pruned.roots if pruned.children(r)]
    return _build([(pruned, r, pruned.children(r)) for r in keep_roots])


def lop(forest: RootedForest) -> RootedForest:
    """Cut the trunk from a root to the last deepest node and split the forest there.

    Nodes up to the deepest node ``v`` in DFS order keep their order, with
    each trunk node becoming a root that holds its children left of the
    trunk.  Then come ``v`` and the trunk nodes bottom-up, each holding its
    children right of the trunk, and finally the trees after ``v``'s tree.
    Bare roots are kept; they matter for node counts but not for equality.
    """
    if forest.max_level == 0:
        return forest
    levels = forest.levels
    top = max(levels)
    v = max(i for i, lv in enumerate(levels) if lv == top)
    trunk = [v]
    while forest.parents[trunk[-1]] != -1:
        trunk.append(forest.parents[trunk[-1]])
    trunk.reverse()
    u0 = trunk[0]
    roots = forest.roots
    left: list = [(forest, r, forest.children(r)) for r in roots if r < u0]
    right: list = []
    for i, u in enumerate(trunk):
        nxt = trunk[i + 1] if i + 1 < len(trunk) else None
        kids = forest.children(u)
        if nxt is None:
            left.append((forest, u, ()))
            right.append((forest, u, ()))
        else:
            left.append((forest, u, tuple(c for c in kids if c < nxt)))
            right.append((forest, u, tuple(c for c in kids if c > nxt)))
    right.reverse()
    later = [(forest, r, forest.children(r)) for r in roots if r > u0]
    return _build(left + right + later)


def young_from_forest(forest: RootedForest) -> YoungDiagram:
    """Rows are leaf counts under repeated trimming; columns are max levels under repeated lopping."""
    rows: list[int] = []
    cur = forest
    while True:
        count = len(cur.leaves)
        if count == 0:
            break
        rows.append(count)
        cur = trim(cur)
    cols: list[int] = []
    cur = forest
    while cur.max_level > 0:
        cols.append(cur.max_level)
        cur = lop(cur)
    if transpose(cols) != tuple(rows):
        raise InvariantViolation(f"forest rows {rows} and columns {cols} are not transposes")
    return YoungDiagram(tuple(cols), tuple(rows))
