"""Box-ball configurations and the carrier sweep.

A configuration is a finite set of occupied boxes on 1, 2, 3, ...  Boxes are
1-based everywhere in the public interface.  Internally the ball positions are
kept as a sorted, read-only ``int64`` array; the sweep itself runs on a dense
0/1 array using prefix scans, and a pure-Python stack carrier is kept as an
independent reference implementation.
"""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from .errors import BudgetExceededError, DomainError, ParseError, PreconditionError

__all__ = [
    "BoxBallConfig",
    "parse_config",
    "serialize_config",
    "carrier_update",
    "carrier_update_stack",
    "evolve",
    "runs",
    "is_stable",
    "stabilize",
    "default_sweep_budget",
    "soliton_lengths",
]


class BoxBallConfig:
    """Immutable finite-support ball configuration."""

    __slots__ = ("_pos",)

    def __init__(self, occupied: Iterable[int] = ()):
        if isinstance(occupied, np.ndarray):
            arr = occupied.astype(np.int64, copy=False).ravel()
        else:
            arr = np.fromiter(occupied, dtype=np.int64)
        pos = np.unique(arr)
        if pos.size and pos[0] < 1:
            raise DomainError(f"box indices must be >= 1, got {int(pos[0])}")
        pos.flags.writeable = False
        self._pos = pos

    @classmethod
    def from_bits(cls, bits) -> BoxBallConfig:
        """Build from a 0/1 sequence whose first entry is box 1."""
        arr = np.asarray(bits)
        return cls._trusted(np.flatnonzero(arr) + 1)

    @classmethod
    def _trusted(cls, pos: np.ndarray) -> BoxBallConfig:
        # caller guarantees sorted, unique, >= 1
        obj = cls.__new__(cls)
        pos = np.asarray(pos, dtype=np.int64)
        pos.flags.writeable = False
        obj._pos = pos
        return obj

    @property
    def positions(self) -> np.ndarray:
        return self._pos

    @property
    def occupied(self) -> tuple[int, ...]:
        return tuple(int(k) for k in self._pos)

    @property
    def ball_count(self) -> int:
        return int(self._pos.size)

    @property
    def last(self) -> int:
        """Index of the rightmost ball, 0 when empty."""
        return int(self._pos[-1]) if self._pos.size else 0

    def bits(self, length: int | None = None) -> np.ndarray:
        """Dense ``uint8`` occupancy of boxes ``1..length``."""
        if length is None:
            length = self.last
        if length < self.last:
            raise ValueError(f"length {length} cuts off the ball at box {self.last}")
        out = np.zeros(length, dtype=np.uint8)
        out[self._pos - 1] = 1
        return out

    def __len__(self) -> int:
        return self.ball_count

    def __contains__(self, k: object) -> bool:
        if not isinstance(k, (int, np.integer)):
            return False
        i = np.searchsorted(self._pos, k)
        return bool(i < self._pos.size and self._pos[i] == k)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, BoxBallConfig):
            return np.array_equal(self._pos, other._pos)
        if isinstance(other, (set, frozenset)):
            return set(self.occupied) == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._pos.tobytes())

    def __repr__(self) -> str:
        if self.ball_count <= 12:
            return f"BoxBallConfig({set(self.occupied) or '{}'})"
        return f"BoxBallConfig(<{self.ball_count} balls, last={self.last}>)"

    def __str__(self) -> str:
        return serialize_config(self)


def parse_config(text: str) -> BoxBallConfig:
    """Parse a ``'0'``/``'1'`` string; character ``i`` (1-based) is box ``i``."""
    text = text.strip()
    raw = np.frombuffer(text.encode("ascii", errors="replace"), dtype=np.uint8)
    bad = np.flatnonzero((raw != ord("0")) & (raw != ord("1")))
    if bad.size:
        i = int(bad[0])
        raise ParseError(f"invalid character {text[i]!r} in configuration", i + 1)
    return BoxBallConfig._trusted(np.flatnonzero(raw == ord("1")) + 1)


def serialize_config(cfg: BoxBallConfig, length: int | None = None) -> str:
    """Inverse of :func:`parse_config`; trailing zeros are dropped unless ``length`` pads."""
    return (cfg.bits(length) + ord("0")).tobytes().decode("ascii")


def carrier_update(cfg: BoxBallConfig) -> BoxBallConfig:
    """One sweep of the carrier.

    Runs as a prefix scan: with steps +1 at balls and -1 at empty boxes, the
    carrier load is the walk minus its running minimum (floored at 0), and a
    ball lands wherever the load drops.
    """
    if cfg.ball_count == 0:
        return cfg
    n = cfg.last
    steps = np.full(n, -1, dtype=np.int32)
    steps[cfg.positions - 1] = 1
    walk = np.cumsum(steps, dtype=np.int32)
    floor = np.minimum.accumulate(walk)
    np.minimum(floor, 0, out=floor)
    load = walk - floor
    drops = np.empty(n, dtype=bool)
    drops[0] = False  # the carrier starts empty, so box 1 never receives a ball
    np.less(load[1:], load[:-1], out=drops[1:])
    landed = np.flatnonzero(drops) + 1
    tail = np.arange(n + 1, n + 1 + int(load[-1]), dtype=np.int64)
    return BoxBallConfig._trusted(np.concatenate([landed, tail]))


def carrier_update_stack(cfg: BoxBallConfig) -> BoxBallConfig:
    """Reference sweep: literal push/pop carrier over the sparse ball list."""
    balls = cfg.occupied
    out: list[int] = []
    stack = 0
    i = 0
    box = balls[0] if balls else 0
    while i < len(balls) or stack:
        if i < len(balls) and balls[i] == box:
            stack += 1
            i += 1
        elif stack:
            out.append(box)
            stack -= 1
        else:
            box = balls[i]
            continue
        box += 1
    return BoxBallConfig._trusted(np.array(out, dtype=np.int64))


def evolve(cfg: BoxBallConfig, sweeps: int) -> BoxBallConfig:
    if sweeps < 0:
        raise ValueError("sweeps must be >= 0")
    for _ in range(sweeps):
        cfg = carrier_update(cfg)
    return cfg


def runs(cfg: BoxBallConfig) -> list[tuple[int, int]]:
    """Maximal runs of occupied boxes as ``(start, length)`` pairs, left to right."""
    pos = cfg.positions
    if pos.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(pos) > 1) + 1
    starts = np.concatenate([[0], breaks])
    ends = np.concatenate([breaks, [pos.size]])
    return [(int(pos[s]), int(e - s)) for s, e in zip(starts, ends)]


def is_stable(cfg: BoxBallConfig) -> bool:
    """True when run lengths are nondecreasing and each gap is at least the run before it."""
    blocks = runs(cfg)
    for (s0, l0), (s1, l1) in zip(blocks, blocks[1:]):
        gap = s1 - (s0 + l0)
        if l0 > l1 or gap < l0:
            return False
    return True


def default_sweep_budget(cfg: BoxBallConfig) -> int:
    m = cfg.ball_count
    span = cfg.last - int(cfg.positions[0]) + 1 if m else 0
    return m * m + m + 1 + span


def stabilize(cfg: BoxBallConfig, max_sweeps: int | None = None) -> tuple[BoxBallConfig, int]:
    """Sweep until :func:`is_stable`; returns the stable configuration and sweeps used."""
    if max_sweeps is None:
        max_sweeps = default_sweep_budget(cfg)
    if max_sweeps < 0:
        raise ValueError("max_sweeps must be >= 0")
    used = 0
    while not is_stable(cfg):
        if used >= max_sweeps:
            raise BudgetExceededError(
                f"not stable after {max_sweeps} sweeps ({cfg.ball_count} balls)"
            )
        cfg = carrier_update(cfg)
        used += 1
    return cfg, used


def soliton_lengths(cfg: BoxBallConfig) -> list[int]:
    if not is_stable(cfg):
        raise PreconditionError("soliton_lengths needs a stable configuration")
    return [length for _, length in runs(cfg)]
