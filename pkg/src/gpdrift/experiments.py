"""Monte Carlo harness: drift estimates, inequality checks, cycle sweeps.

Trials are independent walks with per-trial seeds derived from the batch
seed by a splitmix64 step, so results are identical for any worker count
and any execution order.  Statistical pass thresholds sit at four binomial
standard errors (or a one-sided 99% Wilson limit for rare events): these
are one-sided sanity checks of proved inequalities, so false alarms should
be negligible across a whole suite.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace
from multiprocessing import Pool
from random import Random
from typing import Sequence

from .drift import PivotIncrementDistribution, drift_lower_bound, increment_mean
from .graphs import Graph, cycle_graph, graph_stats
from .groups import VertexGroup
from .walk import WalkConfig, run_walk

_MASK64 = (1 << 64) - 1

# One-sided 99% normal quantile, for Wilson upper confidence limits.
_Z99 = 2.3263478740408408


def derive_seed(base_seed: int, index: int) -> int:
    """splitmix64 finalizer of base_seed + index * golden-gamma.

    Gives every trial an independent, platform-stable stream.
    """
    z = (base_seed + index * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


@dataclass(frozen=True)
class TrialBatch:
    graph: Graph
    groups: tuple[VertexGroup, ...]
    nu: object
    steps: int
    trials: int
    base_seed: int


@dataclass(frozen=True)
class TrialMetrics:
    trial: int
    syllables: int
    pivotal_count: int  # strictly-before-the-horizon count
    active_counts: tuple[int, ...]  # surviving candidates after each step


@dataclass(frozen=True)
class DriftEstimate:
    mean: float
    stderr: float | None
    trials: int
    steps: int


@dataclass(frozen=True)
class CheckReport:
    name: str
    statistic: float
    threshold: float
    passed: bool
    skipped: bool = False
    detail: str = ""


@dataclass(frozen=True)
class SweepRow:
    d: int
    b: int
    c: int
    kappa: float | None
    t_star: float | None
    mean_increment: float | None
    mgf: float | None


def _trial_metrics(batch: TrialBatch, trial: int) -> TrialMetrics:
    cfg = WalkConfig(
        graph=batch.graph,
        groups=batch.groups,
        nu=batch.nu,
        steps=batch.steps,
        seed=derive_seed(batch.base_seed, trial),
    )
    trace = run_walk(cfg)
    return TrialMetrics(
        trial=trial,
        syllables=trace.piling_after(trace.n).syllables,
        pivotal_count=trace.strict_counts[-1] if trace.strict_counts else 0,
        active_counts=tuple(trace.active_counts),
    )


_WORKER_BATCH: TrialBatch | None = None


def _init_worker(batch: TrialBatch) -> None:
    global _WORKER_BATCH
    _WORKER_BATCH = batch


def _worker_run(trial: int) -> TrialMetrics:
    assert _WORKER_BATCH is not None
    return _trial_metrics(_WORKER_BATCH, trial)


def worker_count() -> int:
    """Worker processes for batches, from GPDRIFT_WORKERS (default 1).

    The count never changes results, only wall time.
    """
    raw = os.environ.get("GPDRIFT_WORKERS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"GPDRIFT_WORKERS must be an integer, got {raw!r}")
    return max(1, n)


def run_batch(batch: TrialBatch) -> list[TrialMetrics]:
    if batch.trials < 1:
        raise ValueError("need at least one trial")
    if batch.steps < 0:
        raise ValueError("steps must be nonnegative")
    workers = worker_count()
    if workers == 1:
        return [_trial_metrics(batch, t) for t in range(batch.trials)]
    chunk = max(1, batch.trials // (workers * 8))
    with Pool(workers, initializer=_init_worker, initargs=(batch,)) as pool:
        return list(pool.map(_worker_run, range(batch.trials), chunksize=chunk))


def estimate_drift(batch: TrialBatch) -> DriftEstimate:
    """Sample mean and standard error of syllables-per-step at the horizon."""
    if batch.steps < 1:
        raise ValueError("drift needs at least one step")
    metrics = run_batch(batch)
    ratios = [m.syllables / batch.steps for m in metrics]
    mean = sum(ratios) / len(ratios)
    if len(ratios) < 2:
        return DriftEstimate(mean, None, batch.trials, batch.steps)
    var = sum((x - mean) ** 2 for x in ratios) / (len(ratios) - 1)
    return DriftEstimate(
        mean, math.sqrt(var / len(ratios)), batch.trials, batch.steps
    )


def wilson_upper(successes: int, n: int, z: float = _Z99) -> float:
    """One-sided upper Wilson score limit for a binomial proportion."""
    if n < 1:
        raise ValueError("need at least one observation")
    phat = successes / n
    z2 = z * z
    centre = phat + z2 / (2 * n)
    radius = z * math.sqrt(phat * (1 - phat) / n + z2 / (4 * n * n))
    return min(1.0, (centre + radius) / (1 + z2 / n))


def check_lower_tail(batch: TrialBatch, kappa_value: float) -> CheckReport:
    """Empirical lower-tail frequency of the syllable length against the
    exponential bound exp(-kappa * n).

    Passes when the Wilson 99% upper limit is consistent with the bound,
    or when both the empirical frequency and the bound sit below the
    resolution 1/trials (the usual case: the bound is astronomically
    small and no trial ever lands in the tail).
    """
    metrics = run_batch(batch)
    cutoff = kappa_value * batch.steps
    successes = sum(1 for m in metrics if m.syllables <= cutoff)
    phat = successes / batch.trials
    bound = math.exp(-kappa_value * batch.steps)
    upper = wilson_upper(successes, batch.trials)
    resolution = 1.0 / batch.trials
    passed = upper <= bound or (phat < resolution and bound < resolution)
    return CheckReport(
        name="lower_tail_bound",
        statistic=upper,
        threshold=bound,
        passed=passed,
        detail=f"empirical={phat:.6g} successes={successes}",
    )


def check_pivot_step_probability(batch: TrialBatch) -> CheckReport:
    """Pooled frequency of a step creating a new surviving pivotal time,
    which must be at least (d-b-c)/d up to binomial noise."""
    stats = graph_stats(batch.graph)
    d, b, c = stats.vertex_count, stats.max_neighbourhood, stats.max_clique
    if d - b - c <= 0:
        return CheckReport(
            name="pivot_step_probability",
            statistic=math.nan,
            threshold=math.nan,
            passed=True,
            skipped=True,
            detail=f"vacuous bound: d - b - c = {d - b - c} <= 0",
        )
    if batch.steps < 1:
        raise ValueError("need at least one step")
    metrics = run_batch(batch)
    events = 0
    total = 0
    for m in metrics:
        prev = 0
        for count in m.active_counts:
            if count >= prev + 1:
                events += 1
            total += 1
            prev = count
    p0 = (d - b - c) / d
    sigma = math.sqrt(p0 * (1 - p0) / total)
    phat = events / total
    threshold = p0 - 4 * sigma
    return CheckReport(
        name="pivot_step_probability",
        statistic=phat,
        threshold=threshold,
        passed=phat >= threshold,
        detail=f"events={events} steps={total} bound={p0:.6g}",
    )


def check_domination(
    batch: TrialBatch, dist: PivotIncrementDistribution
) -> CheckReport:
    """Marginal stochastic domination of the next pivotal count over the
    current one plus an independent increment.

    Walks run one step past ``batch.steps``; the increment draws use
    trial indices offset by the trial count so they never collide with the
    walk streams.  Compares the two empirical upper CDFs at every observed
    level with a 4-sigma combined allowance.
    """
    n = batch.steps
    if n < 0:
        raise ValueError("steps must be nonnegative")
    metrics = run_batch(replace(batch, steps=n + 1))
    a_now = []
    a_next = []
    for m in metrics:
        a_now.append(m.active_counts[n - 1] if n >= 1 else 0)
        a_next.append(m.active_counts[n])
    plus_u = []
    for m in metrics:
        rng = Random(derive_seed(batch.base_seed, batch.trials + m.trial))
        plus_u.append((a_now[m.trial]) + dist.sample(rng))
    trials = batch.trials
    lo = min(min(a_next), min(plus_u))
    hi = max(max(a_next), max(plus_u))
    worst = math.inf
    worst_i = None
    for i in range(lo, hi + 2):
        p1 = sum(1 for x in a_next if x >= i) / trials
        p2 = sum(1 for x in plus_u if x >= i) / trials
        sigma = math.sqrt(
            p1 * (1 - p1) / trials + p2 * (1 - p2) / trials
        )
        margin = p1 - p2 + 4 * sigma
        if margin < worst:
            worst = margin
            worst_i = i
    return CheckReport(
        name="increment_domination",
        statistic=worst,
        threshold=0.0,
        passed=worst >= 0.0,
        detail=f"worst level i={worst_i} over [{lo}, {hi + 1}]",
    )


def sweep_cycles(d_values: Sequence[int], grid_points: int = 10_000) -> list[SweepRow]:
    """One bound per cycle length; non-qualifying lengths get nan markers.

    Clique statistics are recomputed from the actual cycle rather than
    assumed, so small lengths (triangle, square) report their true values.
    """
    rows = []
    for d in d_values:
        stats = graph_stats(cycle_graph(d))
        dd, b, c = stats.vertex_count, stats.max_neighbourhood, stats.max_clique
        mean_inc = float(increment_mean(b, c, dd)) if dd > 2 * b + c else None
        if stats.small_cliques:
            bound = drift_lower_bound(b, c, dd, grid_points=grid_points)
            rows.append(
                SweepRow(dd, b, c, bound.kappa, bound.t_star, mean_inc, bound.mgf_at_t_star)
            )
        else:
            rows.append(SweepRow(dd, b, c, None, None, mean_inc, None))
    return rows


def log_spaced_ints(lo: int, hi: int, points: int) -> list[int]:
    """Distinct integers spread evenly on a log scale, endpoints included."""
    if lo < 1 or hi < lo or points < 1:
        raise ValueError("need 1 <= lo <= hi and points >= 1")
    if points == 1:
        return [lo]
    out = []
    for i in range(points):
        x = math.exp(math.log(lo) + (math.log(hi) - math.log(lo)) * i / (points - 1))
        out.append(round(x))
    out[0], out[-1] = lo, hi
    return sorted(set(out))


def _fmt(x) -> str:
    if x is None:
        return "nan"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{x:.12g}"


def trials_csv_text(metrics: Sequence[TrialMetrics]) -> str:
    lines = ["trial,syllables,A_n"]
    for m in metrics:
        lines.append(f"{m.trial},{m.syllables},{m.pivotal_count}")
    return "\n".join(lines) + "\n"


def checks_csv_text(reports: Sequence[CheckReport]) -> str:
    lines = ["check,statistic,threshold,pass"]
    for r in reports:
        status = "skipped" if r.skipped else _fmt(r.passed)
        lines.append(f"{r.name},{_fmt(r.statistic)},{_fmt(r.threshold)},{status}")
    return "\n".join(lines) + "\n"


def sweep_csv_text(rows: Sequence[SweepRow]) -> str:
    lines = ["D,B,C,kappa,t_star,mean_U,mgf"]
    for r in rows:
        lines.append(
            f"{r.d},{r.b},{r.c},{_fmt(r.kappa)},{_fmt(r.t_star)},"
            f"{_fmt(r.mean_increment)},{_fmt(r.mgf)}"
        )
    return "\n".join(lines) + "\n"


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
