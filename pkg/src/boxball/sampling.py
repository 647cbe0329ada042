"""Seeded random objects: Bernoulli configurations, Harris walks, geometric
Galton-Watson forests, and uniform Dyck paths / stack-sortable permutations.

Randomness comes from Philox streams keyed by ``(seed, trial)``, so trial ``t``
draws the same numbers whether it runs first, last, or in another process.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import BoxBallConfig
from .errors import DomainError
from .forests import RootedForest
from .paths import LatticePath
from .permutations import Permutation, sigma_of_path

__all__ = [
    "RandomParams",
    "WalkTrace",
    "trial_rng",
    "parse_seed",
    "sample_bits",
    "sample_config",
    "harris_walk",
    "sample_gw_forest",
    "dual_config",
    "subexcursion_heights",
    "subexcursion_count",
    "uniform_dyck_path",
    "uniform_stack_sortable",
]


def trial_rng(seed: int, trial: int = 0, stream: int = 0) -> np.random.Generator:
    """Independent stream for one trial of one seeded run.

    ``stream`` separates samplers that share a trial; stream 0 is the
    configuration stream.
    """
    key = (trial,) if stream == 0 else (trial, stream)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


def parse_seed(text: str | int) -> int:
    if isinstance(text, int):
        value = text
    else:
        text = text.strip().lower()
        value = int(text, 16) if text.startswith("0x") else int(text)
    if not 0 <= value < 2**64:
        raise DomainError(f"seed {value} is outside 0..2^64-1")
    return value


def _rng(source) -> np.random.Generator:
    if isinstance(source, np.random.Generator):
        return source
    return trial_rng(parse_seed(source))


@dataclass(frozen=True)
class RandomParams:
    n: int
    p: float
    seed: int = 0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n}")
        if not 0.0 < self.p < 1.0:
            raise DomainError(f"p must lie in (0, 1), got {self.p}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "seed", parse_seed(self.seed))

    @property
    def regime(self) -> str:
        if self.p < 0.5:
            return "subcritical"
        if self.p > 0.5:
            return "supercritical"
        return "critical"

    def rng(self, trial: int = 0, stream: int = 0) -> np.random.Generator:
        return trial_rng(self.seed, trial, stream)


def sample_bits(rng: np.random.Generator, n: int, p: float) -> np.ndarray:
    """i.i.d. Bernoulli(p) occupancy of boxes 1..n as a bool array."""
    return rng.random(n) < p


def sample_config(params: RandomParams, trial: int = 0) -> BoxBallConfig:
    return BoxBallConfig.from_bits(sample_bits(params.rng(trial), params.n, params.p))


@dataclass(frozen=True)
class WalkTrace:
    """Increments of the walk with the free and the reflected (Harris) trajectories."""

    xi: np.ndarray
    S: np.ndarray = field(repr=False)
    H: np.ndarray = field(repr=False)

    @classmethod
    def from_increments(cls, xi) -> WalkTrace:
        xi = np.asarray(xi, dtype=np.int64)
        if xi.size and not np.all(np.abs(xi) == 1):
            raise DomainError("increments must be +1 or -1")
        S = np.concatenate(([0], np.cumsum(xi)))
        H = S - np.minimum(np.minimum.accumulate(S), 0)
        for a in (xi, S, H):
            a.flags.writeable = False
        return cls(xi, S, H)

    @property
    def n(self) -> int:
        return int(self.xi.size)

    def harris_by_recursion(self) -> np.ndarray:
        """``H_k = max(H_{k-1} + xi_k, 0)`` step by step."""
        out = np.zeros(self.n + 1, dtype=np.int64)
        h = 0
        for k, x in enumerate(self.xi.tolist(), start=1):
            h = max(h + x, 0)
            out[k] = h
        return out


def harris_walk(cfg: BoxBallConfig, n: int) -> WalkTrace:
    """Walk stepping up at balls and down at empty boxes over 1..n."""
    if cfg.last > n:
        raise DomainError(f"ball at box {cfg.last} lies beyond the horizon {n}")
    return WalkTrace.from_increments(np.where(cfg.bits(n) == 1, 1, -1))


def sample_gw_forest(params: RandomParams, trial: int = 0) -> RootedForest:
    """Geometric Galton-Watson forest explored depth first for ``n`` steps.

    Each node draws its offspring count ``P(x) = p^x (1 - p)`` when first
    reached.  A step either opens the next child of the current node or, once
    its children are used up, returns to the parent; a finished root hands
    over to a fresh root.  Nodes not reached within ``n`` steps are never drawn.
    Draws come from stream 1 of the trial, so they are independent of
    :func:`sample_config` for the same trial.
    """
    rng = params.rng(trial, stream=1)
    q = 1.0 - params.p
    parents: list[int] = [-1]
    remaining: list[int] = [int(rng.geometric(q)) - 1]
    stack: list[int] = [0]
    for _ in range(params.n):
        top = stack[-1]
        if remaining[top] > 0:
            remaining[top] -= 1
            parents.append(top)
            remaining.append(int(rng.geometric(q)) - 1)
            stack.append(len(parents) - 1)
        elif len(stack) > 1:
            stack.pop()
        else:
            parents.append(-1)
            remaining.append(int(rng.geometric(q)) - 1)
            stack[0] = len(parents) - 1
    return RootedForest(parents)


def dual_config(cfg: BoxBallConfig, n: int) -> BoxBallConfig:
    """Reverse boxes 1..n and swap balls with holes."""
    if cfg.last > n:
        raise DomainError(f"ball at box {cfg.last} lies beyond the horizon {n}")
    return BoxBallConfig.from_bits(1 - cfg.bits(n)[::-1])


def subexcursion_heights(trace: WalkTrace) -> np.ndarray:
    """Histogram of heights of the subexcursions of ``S`` that close within the trace.

    A subexcursion starts at each upstep and ends at the first return to its
    starting level; entry ``i`` of the result counts those of height ``i``.
    """
    counts: dict[int, int] = {}
    open_tops: list[int] = []  # running max above the start level, per open subexcursion
    for x in trace.xi.tolist():
        if x == 1:
            open_tops.append(1)
        elif open_tops:
            # the innermost open subexcursion returns to its start
            h = open_tops.pop()
            counts[h] = counts.get(h, 0) + 1
            if open_tops:
                open_tops[-1] = max(open_tops[-1], h + 1)
    size = max(counts, default=0) + 1
    out = np.zeros(size, dtype=np.int64)
    for h, c in counts.items():
        out[h] = c
    return out


def subexcursion_count(trace: WalkTrace, i: int) -> int:
    if i < 1:
        raise DomainError("height must be >= 1")
    hist = subexcursion_heights(trace)
    return int(hist[i]) if i < hist.size else 0


def uniform_dyck_path(n: int, seed=0) -> LatticePath:
    """Uniform Dyck path with ``n`` upsteps, by cyclic shift of a shuffled word.

    Among the rotations of a word with ``n`` ups and ``n + 1`` downs exactly
    one keeps every proper prefix nonnegative: the one starting just after
    the first minimum of the partial sums.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    rng = _rng(seed)
    word = np.full(2 * n + 1, -1, dtype=np.int64)
    word[:n] = 1
    rng.shuffle(word)
    k = int(np.argmin(np.cumsum(word))) + 1
    steps = np.concatenate((word[k:], word[:k]))[:-1]
    return LatticePath._trusted(np.concatenate(([0], np.cumsum(steps))))


def uniform_stack_sortable(n: int, seed=0) -> Permutation:
    """Uniform 231-avoiding permutation of length ``n``."""
    return sigma_of_path(uniform_dyck_path(n, seed))
