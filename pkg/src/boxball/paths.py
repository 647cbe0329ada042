"""Lattice-path encoding of configurations and the Young-diagram operators.

Every configuration maps to an h-restricted Motzkin path: up at a ball,
down at an empty box while the height is positive, flat at height 0
otherwise.  The height is the carrier's load, so the same path drives the
sweep, and two operators on it recover the soliton diagram:

* hill flattening lowers every hill by one; the hill counts of the successive
  flattenings are the rows;
* the excursion operator subtracts the running minimum towards the rightmost
  maximum; the maxima of its successive iterates are the columns.

Paths store their explicit prefix only.  The path continues forever at its
final value, and every operator here is written so that tail is respected.

The ``*_array`` kernels work on plain numpy arrays and are what the Monte
Carlo runner calls; the object-level functions wrap them.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .config import BoxBallConfig
from .diagram import YoungDiagram, transpose
from .errors import DomainError, InvariantViolation, ParseError

__all__ = [
    "LatticePath",
    "HillInterval",
    "motzkin_heights",
    "path_of_config",
    "config_of_path",
    "next_config_of_path",
    "backward_path",
    "hill_intervals",
    "hill_flatten",
    "pivot_excursion",
    "rightmost_argmax",
    "excursion",
    "young_rows",
    "young_columns",
    "young_diagram",
    "rows_by_peak_contraction",
    "hill_count_array",
    "flatten_array",
    "excursion_array",
    "row_lengths",
    "column_lengths",
    "serialize_path",
    "parse_path",
]


class HillInterval(NamedTuple):
    a: int
    b: int

    def __contains__(self, k: object) -> bool:
        return isinstance(k, (int, np.integer)) and self.a <= k <= self.b


class LatticePath:
    """Nearest-neighbour integer path, held as its explicit prefix of heights."""

    __slots__ = ("_h",)

    def __init__(self, heights):
        h = np.array(heights, dtype=np.int64).ravel()
        if h.size == 0:
            h = np.zeros(1, dtype=np.int64)
        if h.size > 1 and np.abs(np.diff(h)).max() > 1:
            k = int(np.flatnonzero(np.abs(np.diff(h)) > 1)[0])
            raise DomainError(f"step {k}->{k + 1} is {int(h[k + 1] - h[k])}, not in {{-1, 0, 1}}")
        h.flags.writeable = False
        self._h = h

    @classmethod
    def _trusted(cls, h: np.ndarray) -> LatticePath:
        obj = cls.__new__(cls)
        h = np.asarray(h, dtype=np.int64)
        h.flags.writeable = False
        obj._h = h
        return obj

    @property
    def heights(self) -> np.ndarray:
        return self._h

    def at(self, k: int) -> int:
        return int(self._h[min(k, self._h.size - 1)])

    @property
    def max(self) -> int:
        return int(self._h.max())

    @property
    def is_motzkin(self) -> bool:
        h = self._h
        return bool(h[0] == 0 and h[-1] == 0 and h.min() >= 0)

    @property
    def is_h_restricted(self) -> bool:
        h = self._h
        flat = h[1:] == h[:-1]
        return self.is_motzkin and not bool(np.any(flat & (h[:-1] != 0)))

    def canonical(self) -> np.ndarray:
        """Heights with the trailing constant run collapsed to one sample."""
        h = self._h
        changed = np.flatnonzero(h[1:] != h[:-1])
        end = int(changed[-1]) + 2 if changed.size else 1
        return h[:end]

    def without_zero_flats(self) -> LatticePath:
        """Drop every h-stroke at height 0 (the forest-side canonical form)."""
        h = self._h
        keep = np.ones(h.size, dtype=bool)
        keep[1:] = ~((h[1:] == 0) & (h[:-1] == 0))
        return LatticePath._trusted(h[keep])

    def __len__(self) -> int:
        return int(self._h.size)

    def __getitem__(self, k):
        return self._h[k]

    def __iter__(self):
        return iter(int(x) for x in self._h)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LatticePath):
            return np.array_equal(self.canonical(), other.canonical())
        if isinstance(other, (list, tuple, np.ndarray)):
            return self == LatticePath(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.canonical().tobytes())

    def __repr__(self) -> str:
        if self._h.size <= 30:
            return f"LatticePath([{serialize_path(self)}])"
        return f"LatticePath(<{self._h.size} steps, max={self.max}>)"


def serialize_path(path: LatticePath) -> str:
    return ",".join(str(int(x)) for x in path.heights)


def parse_path(text: str) -> LatticePath:
    try:
        return LatticePath([int(x) for x in text.split(",") if x.strip()])
    except ValueError as exc:
        raise ParseError(f"bad path {text!r}") from exc


def _heights(f) -> np.ndarray:
    return f.heights if isinstance(f, LatticePath) else np.asarray(f)


def _rewrap(like, arr: np.ndarray):
    return LatticePath._trusted(arr) if isinstance(like, LatticePath) else arr


# -- array kernels ---------------------------------------------------------

def motzkin_heights(bits) -> np.ndarray:
    """Heights Γ_0..Γ_L of the path of a 0/1 array of length n.

    The path is extended by downstrokes after box n until it returns to 0,
    so ``L = n + Γ_n``.
    """
    bits = np.asarray(bits)
    n = bits.size
    steps = np.where(bits != 0, 1, -1).astype(np.int32)
    walk = np.cumsum(steps, dtype=np.int32)
    floor = np.minimum.accumulate(walk) if n else walk
    np.minimum(floor, 0, out=floor)
    top = int(walk[-1] - floor[-1]) if n else 0
    out = np.empty(n + 1 + top, dtype=np.int64)
    out[0] = 0
    np.subtract(walk, floor, out=out[1:n + 1])
    out[n + 1:] = np.arange(top - 1, -1, -1)
    return out


def _hill_runs(h: np.ndarray):
    """Run-length encode ``h`` and flag the hill runs.

    The height just before index 0 counts as 0; the run touching the end of
    the prefix continues into the constant tail, so it is never a hill.
    """
    n = h.size
    change = np.flatnonzero(h[1:] != h[:-1]) + 1
    starts = np.concatenate(([0], change))
    stops = np.concatenate((change, [n]))
    vals = h[starts]
    left = np.empty_like(vals)
    left[0] = 0
    left[1:] = vals[:-1]
    right = np.empty_like(vals)
    right[:-1] = vals[1:]
    right[-1] = vals[-1]
    hill = (left == vals - 1) & (right == vals - 1)
    return starts, stops, hill


def hill_count_array(h) -> int:
    return int(_hill_runs(np.asarray(h))[2].sum())


def flatten_array(h) -> np.ndarray:
    h = np.asarray(h)
    starts, stops, hill = _hill_runs(h)
    return h - np.repeat(hill, stops - starts).astype(h.dtype)


def excursion_array(f, pivot: int) -> np.ndarray:
    """``f(t) - min f`` over the closed interval between ``t`` and ``pivot``."""
    f = np.asarray(f)
    low = np.empty_like(f)
    low[:pivot + 1] = np.minimum.accumulate(f[pivot::-1])[::-1]
    low[pivot:] = np.minimum.accumulate(f[pivot:])
    return f - low


def _rightmost_argmax(f: np.ndarray) -> int:
    return int(f.size - 1 - np.argmax(f[::-1]))


def row_lengths(h, limit: int | None = None) -> list[int]:
    """ρ_1, ρ_2, ...: hill counts of the successive flattenings of ``h``."""
    cur = np.asarray(h)
    rows: list[int] = []
    while limit is None or len(rows) < limit:
        starts, stops, hill = _hill_runs(cur)
        count = int(hill.sum())
        if count == 0:
            break
        rows.append(count)
        cur = cur - np.repeat(hill, stops - starts).astype(cur.dtype)
    return rows


def column_lengths(h, limit: int | None = None) -> list[int]:
    """λ_1, λ_2, ...: maxima of the successive excursion iterates of ``h``."""
    cur = np.asarray(h)
    cols: list[int] = []
    while limit is None or len(cols) < limit:
        m = _rightmost_argmax(cur)
        top = cur[m]
        if top <= 0:
            break
        cols.append(int(top))
        cur = excursion_array(cur, m)
    return cols


# -- configuration <-> path ------------------------------------------------

def path_of_config(cfg: BoxBallConfig) -> LatticePath:
    return LatticePath._trusted(motzkin_heights(cfg.bits()))


def config_of_path(path: LatticePath) -> BoxBallConfig:
    path = path if isinstance(path, LatticePath) else LatticePath(path)
    if not path.is_h_restricted:
        raise DomainError("config_of_path needs an h-restricted Motzkin path")
    return BoxBallConfig._trusted(np.flatnonzero(np.diff(path.heights) == 1) + 1)


def next_config_of_path(path: LatticePath) -> BoxBallConfig:
    """Balls at the downstrokes: the configuration one sweep later."""
    h = _heights(path)
    return BoxBallConfig._trusted(np.flatnonzero(np.diff(h) == -1) + 1)


def backward_path(cfg: BoxBallConfig) -> LatticePath:
    """Path read right to left from the rightmost ball (zero from there on)."""
    r = cfg.last
    if r == 0:
        return LatticePath._trusted(np.zeros(1, dtype=np.int64))
    reversed_heights = motzkin_heights(cfg.bits()[::-1])[: r + 1]
    return LatticePath._trusted(reversed_heights[::-1].copy())


# -- hills and excursions --------------------------------------------------

def hill_intervals(path) -> list[HillInterval]:
    starts, stops, hill = _hill_runs(_heights(path))
    return [HillInterval(int(a), int(b) - 1) for a, b in zip(starts[hill], stops[hill])]


def hill_flatten(path):
    return _rewrap(path, flatten_array(_heights(path)))


def pivot_excursion(f, b: int):
    h = _heights(f)
    if not 0 <= b < h.size:
        raise DomainError(f"pivot {b} outside 0..{h.size - 1}")
    return _rewrap(f, excursion_array(h, b))


def rightmost_argmax(f) -> int:
    return _rightmost_argmax(_heights(f))


def excursion(f):
    h = _heights(f)
    return _rewrap(f, excursion_array(h, _rightmost_argmax(h)))


def young_rows(path) -> list[int]:
    return row_lengths(_heights(path))


def young_columns(path) -> list[int]:
    """Columns by iterated excursion, checking that each step removes exactly one hill.

    The hill removed must be the one holding the rightmost maximum; anything
    else means the operator and the hill bookkeeping disagree.
    """
    cur = _heights(path)
    hills = set(hill_intervals(cur))
    cols: list[int] = []
    for _ in range(len(hills)):
        m = _rightmost_argmax(cur)
        if cur[m] < 1:
            raise InvariantViolation(f"column {len(cols) + 1} is empty with hills {sorted(hills)} left")
        cols.append(int(cur[m]))
        cur = excursion_array(cur, m)
        after = set(hill_intervals(cur))
        removed = hills - after
        if after > hills or len(removed) != 1 or m not in next(iter(removed)):
            raise InvariantViolation(
                f"excursion at pivot {m} changed hills {sorted(hills)} -> {sorted(after)}"
            )
        hills = after
    if cur.max() != 0:
        raise InvariantViolation("hills exhausted but the path is not flat")
    return cols


def young_diagram(path) -> YoungDiagram:
    rows = young_rows(path)
    cols = young_columns(path)
    if transpose(cols) != tuple(rows):
        raise InvariantViolation(f"rows {rows} and columns {cols} are not transposes")
    return YoungDiagram(tuple(cols), tuple(rows))


def rows_by_peak_contraction(cfg: BoxBallConfig) -> list[int]:
    """Rows from the configuration alone: count "1 0" patterns, delete them, repeat."""
    bits = np.append(cfg.bits(), 0).astype(np.int8)
    rows: list[int] = []
    while True:
        peaks = np.flatnonzero((bits[:-1] == 1) & (bits[1:] == 0))
        if peaks.size == 0:
            return rows
        rows.append(int(peaks.size))
        keep = np.ones(bits.size, dtype=bool)
        keep[peaks] = False
        keep[peaks + 1] = False
        bits = np.append(bits[keep], 0)
