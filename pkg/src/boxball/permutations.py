"""Permutations attached to a configuration.

Labelling the balls 1..m from the left and running one carrier sweep as a
stack (push at a ball, pop at an empty box) lists the labels in their new
left-to-right order.  That permutation avoids 312, its Robinson-Schensted
shape is the soliton diagram, and its inverse can be read straight off the
path or the forest.
"""

from __future__ import annotations

import bisect
from collections.abc import Iterable, Sequence
from itertools import combinations

import numpy as np

from .config import BoxBallConfig
from .diagram import YoungDiagram
from .errors import DomainError, ParseError
from .forests import RootedForest
from .paths import LatticePath

__all__ = [
    "Permutation",
    "sigma_of_config",
    "sigma_of_path",
    "sigma_of_forest",
    "inverse",
    "rs_shape",
    "avoids",
    "greedy_lambda_rho",
    "parse_permutation",
]


class Permutation(tuple):
    """One-line notation of a bijection of 1..m."""

    __slots__ = ()

    def __new__(cls, values: Iterable[int] = ()):
        vals = tuple(int(v) for v in values)
        if sorted(vals) != list(range(1, len(vals) + 1)):
            raise DomainError(f"{vals} is not a permutation of 1..{len(vals)}")
        return super().__new__(cls, vals)

    @classmethod
    def _trusted(cls, values) -> Permutation:
        return super().__new__(cls, (int(v) for v in values))

    def inverse(self) -> Permutation:
        inv = [0] * len(self)
        for i, v in enumerate(self, start=1):
            inv[v - 1] = i
        return Permutation._trusted(inv)

    def __str__(self) -> str:
        return " ".join(map(str, self))

    def __repr__(self) -> str:
        return f"Permutation({str(self)!r})"


def parse_permutation(text: str) -> Permutation:
    try:
        return Permutation(int(tok) for tok in text.split())
    except ValueError as exc:
        raise ParseError(f"bad permutation {text!r}") from exc


def inverse(perm: Sequence[int]) -> Permutation:
    return Permutation(perm).inverse()


def sigma_of_config(cfg: BoxBallConfig) -> Permutation:
    """Labels in the order the carrier drops them during one sweep."""
    out: list[int] = []
    stack: list[int] = []
    label = 0
    prev = 0
    for box in cfg.occupied:
        # empty boxes between the previous ball and this one
        gap = box - prev - 1
        for _ in range(min(gap, len(stack))):
            out.append(stack.pop())
        label += 1
        stack.append(label)
        prev = box
    out.extend(reversed(stack))
    return Permutation._trusted(out)


def sigma_of_path(path) -> Permutation:
    """Inverse permutation read off the path.

    For the k-th upstroke, ending at height ``h``, count the upstrokes made
    before the path first drops below ``h`` again; the value is
    ``k + 1 + count - h``.  On a path with no flats above 0 the count is half
    the length of that stretch.
    """
    h = path.heights if isinstance(path, LatticePath) else np.asarray(path)
    if h.size and (h[0] != 0 or h.min() < 0):
        raise DomainError("sigma_of_path needs a nonnegative path starting at 0")
    steps = np.diff(h).tolist()
    m = sum(1 for s in steps if s == 1)
    out = [0] * m
    height_at = [0] * m
    open_: list[int] = []
    ups = 0
    for s in steps:
        if s == 1:
            height_at[ups] = len(open_) + 1
            open_.append(ups)
            ups += 1
        elif s == -1:
            k = open_.pop()
            out[k] = (k + 1) + 1 + (ups - k - 1) - height_at[k]
    # a path that ends above 0 never closes the remaining upstrokes
    for k in open_:
        out[k] = (k + 1) + 1 + (ups - k - 1) - height_at[k]
    return Permutation(out)


def sigma_of_forest(forest: RootedForest) -> Permutation:
    """Value at the k-th non-root node in DFS order: k + subtree size - level."""
    out: list[int] = []
    k = 0
    for v in range(forest.node_count):
        if forest.parents[v] == -1:
            continue
        k += 1
        out.append(k + forest.subtree_sizes[v] - forest.levels[v])
    return Permutation(out)


def rs_shape(perm: Sequence[int]) -> YoungDiagram:
    """Shape of the Robinson-Schensted insertion tableau; rows are the diagram's rows."""
    rows: list[list[int]] = []
    for x in perm:
        for row in rows:
            i = bisect.bisect_right(row, x)
            if i == len(row):
                row.append(x)
                break
            row[i], x = x, row[i]
        else:
            rows.append([x])
    return YoungDiagram.from_rows([len(r) for r in rows])


def _avoids3(perm: Sequence[int], pattern: Sequence[int]) -> bool:
    a, b, c = pattern
    vals = list(perm)
    m = len(vals)
    for j in range(1, m - 1):
        x = vals[j]
        left = [v for v in vals[:j] if (v < x) == (a < b)]
        right = [v for v in vals[j + 1:] if (v < x) == (c < b)]
        if not left or not right:
            continue
        if (a < b) != (c < b):
            return False
        # both on the same side of the middle value: compare extremes
        if a > c and max(left) > min(right):
            return False
        if a < c and min(left) < max(right):
            return False
    return True


def avoids(perm: Sequence[int], pattern: Sequence[int]) -> bool:
    """True when no subsequence of ``perm`` is order-isomorphic to ``pattern``."""
    pattern = tuple(pattern)
    k = len(pattern)
    if k < 2:
        raise DomainError("pattern must have length at least 2")
    if sorted(pattern) != list(range(1, k + 1)):
        raise DomainError(f"{pattern} is not a permutation")
    if k == 3:
        return _avoids3(perm, pattern)
    order = tuple(np.argsort(pattern))
    for sub in combinations(perm, k):
        if tuple(np.argsort(sub)) == order:
            return False
    return True


def _first_longest(vals: list[int], decreasing: bool) -> list[int]:
    """Positions of the lexicographically first longest monotone subsequence."""
    m = len(vals)
    arr = np.asarray(vals)
    best = np.ones(m, dtype=np.int64)
    for i in range(m - 2, -1, -1):
        later = arr[i + 1:] < arr[i] if decreasing else arr[i + 1:] > arr[i]
        if later.any():
            best[i] = 1 + best[i + 1:][later].max()
    length = int(best.max())
    pos = [int(np.argmax(best == length))]
    for need in range(length - 1, 0, -1):
        i = pos[-1]
        for j in range(i + 1, m):
            ok = vals[j] < vals[i] if decreasing else vals[j] > vals[i]
            if ok and best[j] == need:
                pos.append(j)
                break
    return pos


def _greedy(vals: list[int], decreasing: bool) -> list[int]:
    out: list[int] = []
    while vals:
        pos = set(_first_longest(vals, decreasing))
        out.append(len(pos))
        vals = [v for i, v in enumerate(vals) if i not in pos]
    return out


def greedy_lambda_rho(perm: Sequence[int]) -> tuple[list[int], list[int], bool]:
    """Lengths from repeatedly deleting a longest decreasing (increasing) subsequence.

    Ties go to the lexicographically first set of positions.  The third value
    says whether both lists agree with the Robinson-Schensted shape.
    """
    vals = list(perm)
    lam = _greedy(vals, decreasing=True)
    rho = _greedy(vals, decreasing=False)
    shape = rs_shape(vals)
    return lam, rho, (tuple(lam) == shape.columns and tuple(rho) == shape.rows)
