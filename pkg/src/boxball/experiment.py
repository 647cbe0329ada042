"""Monte Carlo runner: simulate, measure soliton statistics, compare to references.

Each kind fixes what is simulated and which gates are applied:

=======================  =====================================================
kind                     simulated / checked
=======================  =====================================================
rows                     rho_1..rho_5 of Bernoulli(p); mean rho_i/n vs mu_i
rows-clt                 rho_1 only; standardized mean, variance, KS vs normal
columns-subcritical      lambda_1..5, p < 1/2; CDF of lambda_1 - center vs envelopes
columns-critical         lambda_1..5, p = 1/2; lambda_1/sqrt(n) vs reflected-BM law
columns-supercritical    lambda_1..5, p > 1/2; Gaussian lambda_1, small lambda_2
permutation              uniform 231-avoiding perms of length n (p ignored)
gw-coupling              leaf counts of path forests vs sampled GW forests
=======================  =====================================================

Trial ``t`` always uses stream ``(seed, t)``, and results are gathered by trial
index, so a report does not depend on how many worker processes ran it.
Wall-clock data lives under ``metadata`` and is left out of comparisons.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .config import BoxBallConfig, stabilize
from .errors import DomainError, InvariantViolation, RegimeError
from .forests import forest_of_path
from .paths import column_lengths, motzkin_heights, row_lengths, young_diagram
from .permutations import rs_shape, sigma_of_path
from .sampling import RandomParams, sample_bits, sample_gw_forest, uniform_dyck_path
from .stats import (
    chi_square_homogeneity,
    critical_cdf,
    ks_distance,
    mu_i_theoretical,
    row_clt_reference,
    standardize,
    subcritical_reference,
    supercritical_reference,
)

__all__ = ["KINDS", "DEFAULT_TRIALS", "ExperimentReport", "run_experiment", "default_threads"]

KINDS = (
    "rows",
    "rows-clt",
    "columns-subcritical",
    "columns-critical",
    "columns-supercritical",
    "permutation",
    "gw-coupling",
)

DEFAULT_TRIALS = {
    "rows": 200,
    "rows-clt": 10_000,
    "columns-subcritical": 1000,
    "columns-critical": 1000,
    "columns-supercritical": 1000,
    "permutation": 1000,
    "gw-coupling": 10_000,
}

DEPTH = 5
BASE_COLUMNS = [f"rho{i}" for i in range(1, DEPTH + 1)] + [f"lambda{j}" for j in range(1, DEPTH + 1)] + ["sweeps"]
EXTRA_COLUMNS = {"gw-coupling": ["gw_leaves"]}
SWEEP_LIMIT = 1000  # stabilization is only timed up to this many boxes
MISSING = -1

THREADS_ENV = "BOXBALL_THREADS"


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _check_kind(kind: str, params: RandomParams) -> None:
    if kind not in KINDS:
        raise DomainError(f"unknown experiment kind {kind!r}; choose from {', '.join(KINDS)}")
    need = {
        "columns-subcritical": "subcritical",
        "columns-critical": "critical",
        "columns-supercritical": "supercritical",
    }.get(kind)
    if need and params.regime != need:
        raise RegimeError(f"{kind} needs a {need} p, got p={params.p}")


def _pad(values: list[int]) -> list[int]:
    return (values + [0] * DEPTH)[:DEPTH]


def _trial(kind: str, n: int, p: float, seed: int, t: int, cross_check: bool) -> list[int]:
    params = RandomParams(n, p, seed)
    rng = params.rng(t)
    row = {c: MISSING for c in BASE_COLUMNS + EXTRA_COLUMNS.get(kind, [])}
    if kind == "permutation":
        dyck = uniform_dyck_path(n, rng)
        h = dyck.heights
        rows, cols = row_lengths(h, DEPTH), column_lengths(h, DEPTH)
        if cross_check:
            shape = rs_shape(sigma_of_path(dyck))
            if shape.rows[:DEPTH] != tuple(rows) or shape.columns[:DEPTH] != tuple(cols):
                raise InvariantViolation(f"trial {t}: RS shape {shape} disagrees with path {rows}/{cols}")
        row.update(zip(BASE_COLUMNS[:DEPTH], _pad(rows)))
        row.update(zip(BASE_COLUMNS[DEPTH:2 * DEPTH], _pad(cols)))
        return list(row.values())
    if kind == "gw-coupling":
        bits = sample_bits(rng, n, p)
        h = motzkin_heights(bits)
        row["rho1"] = len(forest_of_path(h).leaves)
        row["gw_leaves"] = len(sample_gw_forest(params, t).leaves)
        return list(row.values())
    bits = sample_bits(rng, n, p)
    if kind == "rows-clt":
        # solitons of a path counted as peaks: "1 0" pairs plus a final ball
        row["rho1"] = int(np.count_nonzero(bits[:-1] & ~bits[1:])) + int(bits[-1])
    else:
        h = motzkin_heights(bits)
        if kind == "rows":
            row.update(zip(BASE_COLUMNS[:DEPTH], _pad(row_lengths(h, DEPTH))))
        else:
            row.update(zip(BASE_COLUMNS[DEPTH:2 * DEPTH], _pad(column_lengths(h, DEPTH))))
        if cross_check:
            diagram = young_diagram(h)
            got = row_lengths(h, DEPTH), column_lengths(h, DEPTH)
            if tuple(got[0]) != diagram.rows[:DEPTH] or tuple(got[1]) != diagram.columns[:DEPTH]:
                raise InvariantViolation(f"trial {t}: fast kernels disagree with the checked diagram")
    if n <= SWEEP_LIMIT:
        row["sweeps"] = stabilize(BoxBallConfig.from_bits(bits))[1]
    return list(row.values())


def _run_chunk(kind, n, p, seed, start, stop, cross_check):
    out = np.empty((stop - start, len(BASE_COLUMNS) + len(EXTRA_COLUMNS.get(kind, []))), dtype=np.int64)
    times = np.empty(stop - start, dtype=np.int64)
    for i, t in enumerate(range(start, stop)):
        t0 = time.perf_counter_ns()
        out[i] = _trial(kind, n, p, seed, t, cross_check)
        times[i] = (time.perf_counter_ns() - t0) // 1000
    return start, out, times


@dataclass
class ExperimentReport:
    kind: str
    n: int
    p: float
    seed: int
    trials: int
    columns: list[str]
    data: np.ndarray
    aggregates: dict = field(default_factory=dict)
    reference: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]

    @property
    def passed(self) -> bool:
        return all(v["passed"] for v in self.verdicts.values())

    def primary(self) -> dict:
        """Everything except wall-clock metadata; reproducible from the inputs."""
        return {
            "kind": self.kind,
            "params": {"n": self.n, "p": self.p, "seed": self.seed},
            "trials": self.trials,
            "aggregates": self.aggregates,
            "reference": self.reference,
            "verdicts": self.verdicts,
            "per_trial": {
                c: [None if v == MISSING else int(v) for v in self.column(c)] for c in self.columns
            },
        }

    def to_json(self, metadata: bool = True) -> str:
        doc = self.primary()
        if metadata:
            doc["metadata"] = self.metadata
        return json.dumps(doc, indent=2, sort_keys=True)

    def to_csv(self, timings: bool = False) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["trial"] + self.columns + ["us"])
        us = self.metadata.get("trial_us") if timings else None
        for t in range(self.trials):
            cells = ["" if v == MISSING else int(v) for v in self.data[t]]
            w.writerow([t] + cells + [us[t] if us else ""])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"{self.kind}: n={self.n} p={self.p} seed={self.seed} trials={self.trials}"]
        for name, agg in self.aggregates.items():
            lines.append(f"  {name:<10} mean={agg['mean']:.6g} var={agg['var']:.6g} median={agg['median']:.6g}")
        for name, v in self.verdicts.items():
            lines.append(f"  [{'PASS' if v['passed'] else 'FAIL'}] {name}: {v['detail']}")
        return "\n".join(lines)

    def ecdf_series(self) -> dict[str, np.ndarray]:
        """Two-column (x, F_n(x)) arrays for the quantities each kind compares against a law."""
        scaled = {
            "rows": [("rho1_over_n", "rho1", self.n)],
            "rows-clt": [("rho1_std", "rho1", None)],
            "columns-subcritical": [("lambda1_centered", "lambda1", None)],
            "columns-critical": [(f"lambda{j}_over_sqrt_n", f"lambda{j}", math.sqrt(self.n)) for j in (1, 2, 3)],
            "columns-supercritical": [("lambda1_std", "lambda1", None), ("lambda2", "lambda2", 1.0)],
            "permutation": [("lambda1_over_sqrt_n", "lambda1", math.sqrt(self.n))],
            "gw-coupling": [("path_leaves", "rho1", 1.0), ("gw_leaves", "gw_leaves", 1.0)],
        }[self.kind]
        out = {}
        for label, col, scale in scaled:
            x = self.column(col).astype(float)
            if scale is None:
                x = _transform(self, col, x)
            else:
                x = x / scale
            xs = np.sort(x)
            out[label] = np.column_stack((xs, np.arange(1, xs.size + 1) / xs.size))
        return out

    def write(self, out: str | os.PathLike, fmt: str = "json", timings: bool = False) -> list[Path]:
        """Write the report and one ``.ecdf.dat`` file per compared quantity next to it."""
        out = Path(out)
        out.parent.mkdir(parents=True, exist_ok=True)
        text = self.to_csv(timings) if fmt == "csv" else self.to_text() + "\n" if fmt == "text" else self.to_json() + "\n"
        out.write_text(text)
        written = [out]
        for label, arr in self.ecdf_series().items():
            path = out.with_name(f"{out.stem}.{label}.ecdf.dat")
            np.savetxt(path, arr, fmt="%.10g", header=f"{label} x F_n(x)")
            written.append(path)
        return written


def _transform(report: ExperimentReport, col: str, x: np.ndarray) -> np.ndarray:
    if report.kind == "rows-clt":
        ref = row_clt_reference(report.n, report.p)
        return standardize(x, ref.mean, math.sqrt(ref.variance))
    if report.kind == "columns-subcritical":
        return x - subcritical_reference(report.n, report.p).center
    ref = supercritical_reference(report.n, report.p)
    return standardize(x, ref.mean, ref.sd)


def _aggregate(columns: list[str], data: np.ndarray) -> dict:
    out = {}
    for i, name in enumerate(columns):
        col = data[:, i]
        if np.all(col == MISSING):
            continue
        x = col.astype(float)
        out[name] = {
            "mean": float(x.mean()),
            "var": float(x.var(ddof=1)) if x.size > 1 else 0.0,
            "median": float(np.median(x)),
            "min": int(col.min()),
            "max": int(col.max()),
        }
    return out


def _gate(passed: bool, value, threshold, detail: str) -> dict:
    return {"passed": bool(passed), "value": value, "threshold": threshold, "detail": detail}


def _normality_gates(z: np.ndarray, prefix: str) -> dict:
    from scipy.special import ndtr

    m, v = float(z.mean()), float(z.var(ddof=1))
    ks = ks_distance(z, ndtr)
    return {
        f"{prefix}_mean": _gate(abs(m) < 0.05, m, 0.05, f"|mean| = {abs(m):.4f} < 0.05"),
        f"{prefix}_variance": _gate(abs(v - 1) < 0.05, v, 0.05, f"|var - 1| = {abs(v - 1):.4f} < 0.05"),
        f"{prefix}_ks": _gate(ks <= 0.02, ks, 0.02, f"KS vs normal = {ks:.4f} <= 0.02"),
    }


def _evaluate(report: ExperimentReport) -> None:
    kind, n, p = report.kind, report.n, report.p
    ref, gates = report.reference, report.verdicts
    col = report.column
    if kind == "rows":
        for i in (1, 2, 3):
            mu = mu_i_theoretical(i, p)
            got = float(col(f"rho{i}").mean()) / n
            rel = abs(got / mu - 1)
            ref[f"mu{i}"] = mu
            gates[f"rho{i}_over_n"] = _gate(rel < 0.01, got, mu, f"mean rho{i}/n = {got:.6f} vs {mu:.6f}, rel err {rel:.4%} < 1%")
    elif kind == "rows-clt":
        r = row_clt_reference(n, p)
        ref.update(mean=r.mean, variance=r.variance, exact_variance=r.exact_variance_rho1)
        gates.update(_normality_gates(standardize(col("rho1"), r.mean, math.sqrt(r.variance)), "rho1_std"))
    elif kind == "columns-subcritical":
        r = subcritical_reference(n, p)
        ref.update(center=r.center, theta=r.theta)
        x = np.linspace(-3.0, 6.0, 901)
        shifted = np.sort(col("lambda1").astype(float) - r.center)
        emp = np.searchsorted(shifted, x, side="right") / shifted.size
        below = float(np.max(r.lower(x) - emp))
        above = float(np.max(emp - r.upper(x)))
        worst = max(below, above)
        gates["sandwich"] = _gate(
            worst <= 0.03, worst, 0.03,
            f"ECDF of lambda1 - center leaves the envelopes by at most {worst:.4f} <= 0.03 on [-3, 6]",
        )
    elif kind == "columns-critical":
        s = math.sqrt(n)
        l1, l2, l3 = (col(f"lambda{j}") / s for j in (1, 2, 3))
        ks = ks_distance(l1, critical_cdf)
        mean = float(l1.mean())
        target = math.sqrt(math.pi / 2)
        rel = abs(mean / target - 1)
        grid = np.unique(np.concatenate((l1, l2, l3)))
        ecdf = [np.searchsorted(np.sort(a), grid, side="right") / a.size for a in (l1, l2, l3)]
        dominated = bool(np.all(ecdf[0] <= ecdf[1]) and np.all(ecdf[1] <= ecdf[2]))
        med2, med3 = float(np.median(l2)), float(np.median(l3))
        ref.update(mean_lambda1_over_sqrt_n=target)
        gates["ks_lambda1"] = _gate(ks <= 0.05, ks, 0.05, f"KS(lambda1/sqrt n) = {ks:.4f} <= 0.05")
        gates["mean_lambda1"] = _gate(rel < 0.02, mean, target, f"mean lambda1/sqrt n = {mean:.4f} vs {target:.4f}, rel err {rel:.4%} < 2%")
        gates["dominance"] = _gate(dominated, dominated, True, "ECDFs ordered lambda1 <= lambda2 <= lambda3 stochastically")
        gates["medians"] = _gate(min(med2, med3) > 0.1, [med2, med3], 0.1, f"medians lambda2, lambda3 over sqrt n = {med2:.3f}, {med3:.3f} > 0.1")
    elif kind == "columns-supercritical":
        r = supercritical_reference(n, p)
        thr = r.second_threshold(0.5)
        ref.update(mean=r.mean, sd=r.sd, lambda2_threshold=thr)
        l1, l2 = col("lambda1"), col("lambda2")
        gates.update(_normality_gates(standardize(l1, r.mean, r.sd), "lambda1_std"))
        big = float(np.mean(l1 > (2 * p - 1 - 0.05) * n))
        second = float(np.mean(l2 > thr))
        gates["lambda1_linear"] = _gate(big > 0.95, big, 0.95, f"P(lambda1 > (2p-1-0.05)n) = {big:.4f} > 0.95")
        gates["lambda2_small"] = _gate(second < 0.05, second, 0.05, f"P(lambda2 > {thr:.2f}) = {second:.4f} < 0.05")
    elif kind == "permutation":
        rho1, lam1 = col("rho1").astype(float), col("lambda1").astype(float)
        checks = [
            ("mean_rho1", float(rho1.mean()), (n + 1) / 2, 0.01),
            ("mean_lambda1", float(lam1.mean()), math.sqrt(math.pi * n) - 1.5, 0.03),
            ("mean_lambda1_over_sqrt_n", float(lam1.mean()) / math.sqrt(n), math.sqrt(math.pi), 0.03),
        ]
        checks += [
            (f"rho{i}_over_2n", float(col(f"rho{i}").mean()) / (2 * n), mu_i_theoretical(i, 0.5), 0.02)
            for i in (1, 2, 3)
        ]
        for name, got, target, tol in checks:
            rel = abs(got / target - 1)
            ref[name] = target
            gates[name] = _gate(rel < tol, got, target, f"{got:.5f} vs {target:.5f}, rel err {rel:.4%} < {tol:.0%}")
    elif kind == "gw-coupling":
        stat, dof, pval = chi_square_homogeneity(col("rho1"), col("gw_leaves"))
        ref.update(chi2=stat, dof=dof)
        gates["leaf_histograms"] = _gate(pval > 0.01, pval, 0.01, f"chi2 = {stat:.2f} on {dof} dof, p = {pval:.4f} > 0.01")


def run_experiment(
    kind: str,
    params: RandomParams,
    trials: int | None = None,
    threads: int | None = None,
    cross_check: bool = False,
) -> ExperimentReport:
    """Run ``trials`` independent trials and evaluate the gates for ``kind``."""
    _check_kind(kind, params)
    trials = DEFAULT_TRIALS[kind] if trials is None else int(trials)
    if trials < 1:
        raise DomainError("trials must be >= 1")
    threads = default_threads() if threads is None else max(1, int(threads))
    columns = BASE_COLUMNS + EXTRA_COLUMNS.get(kind, [])
    data = np.empty((trials, len(columns)), dtype=np.int64)
    times = np.empty(trials, dtype=np.int64)
    started = datetime.now(timezone.utc).isoformat()
    t0 = time.perf_counter()
    args = (kind, params.n, params.p, params.seed)
    if threads == 1 or trials == 1:
        _, data[:], times[:] = _run_chunk(*args, 0, trials, cross_check)
    else:
        size = max(1, math.ceil(trials / (threads * 4)))
        bounds = [(a, min(a + size, trials)) for a in range(0, trials, size)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_run_chunk, *args, a, b, cross_check) for a, b in bounds]
            for fut in futures:
                start, block, tblock = fut.result()
                data[start:start + len(block)] = block
                times[start:start + len(block)] = tblock
    report = ExperimentReport(
        kind=kind, n=params.n, p=params.p, seed=params.seed, trials=trials,
        columns=columns, data=data, aggregates=_aggregate(columns, data),
    )
    _evaluate(report)
    report.metadata = {
        "started": started,
        "wall_seconds": time.perf_counter() - t0,
        "threads": threads,
        "trial_us": times.tolist(),
    }
    return report
