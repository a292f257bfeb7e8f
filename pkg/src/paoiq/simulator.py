"""FCFS information-update queue simulation and peak-age extraction.

Single-source paths run the Lindley waiting-time recursion through the
kernel backend.  Two-source paths merge both arrival streams into one FCFS
queue (ties broken toward source 1) and extract per-source peak-age traces.

Conventions: the first arrival occurs at time T_1 (the first interarrival
draw is the delay from time zero), and per-replication warmup discards the
leading fraction of samples before averaging.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ValidationError
from .seeding import ROLE_ARRIVAL_1, ROLE_ARRIVAL_2, ROLE_SERVICE, derive_seed
from .stochastic import DistributionSpec, SampleStream, sample_stream


@dataclass(frozen=True)
class SystemParams:
    """One queueing scenario: per-source arrival rate, service rate, path length."""

    lam: float
    mu: float
    n: int
    sources: int = 1

    def __post_init__(self) -> None:
        if not self.lam > 0:
            raise ValidationError(f"lam must be > 0, got {self.lam}")
        if not self.mu > 0:
            raise ValidationError(f"mu must be > 0, got {self.mu}")
        if self.n < 1:
            raise ValidationError(f"n must be >= 1, got {self.n}")
        if self.sources not in (1, 2):
            raise ValidationError(f"sources must be 1 or 2, got {self.sources}")

    @property
    def load(self) -> float:
        """Total offered load: lam/mu for one source, 2*lam/mu for two."""
        return self.sources * self.lam / self.mu

    @property
    def stable(self) -> bool:
        return self.load < 1.0


@dataclass
class QueueResult:
    """Per-update timestamps of one simulated FCFS sample path."""

    arrival_times: np.ndarray
    service_times: np.ndarray
    waiting_times: np.ndarray
    finish_times: np.ndarray
    system_times: np.ndarray
    source_ids: np.ndarray | None = None  # 1-based, two-source paths only

    def __len__(self) -> int:
        return len(self.arrival_times)


@dataclass
class PAoITrace:
    """Peak-age samples P_i = T_i + S_i for deliveries i = 2..n of one source."""

    peaks: np.ndarray
    interarrivals: np.ndarray
    system_times: np.ndarray

    def __len__(self) -> int:
        return len(self.peaks)


@dataclass
class ReplicationSummary:
    """Across-replication averages of post-warmup PAoI and system time."""

    sources: int
    replications: int
    warmup_fraction: float
    mean_paoi: float
    mean_system_time: float
    ci95_paoi: float
    per_source_paoi: tuple[float, float] | None
    stable: bool
    paoi_rep_means: np.ndarray = field(repr=False, default=None)


def _values(x) -> np.ndarray:
    if isinstance(x, SampleStream):
        x = x.values
    return np.ascontiguousarray(np.asarray(x, dtype=np.float64))


def _check_path(interarrivals: np.ndarray, services: np.ndarray) -> None:
    if len(interarrivals) != len(services):
        raise ValidationError(
            f"stream length mismatch: {len(interarrivals)} interarrivals vs "
            f"{len(services)} services"
        )
    if len(services) < 1:
        raise ValidationError("empty sample path")
    # the first entry is the delay from time zero and may be 0
    if interarrivals[0] < 0 or (len(interarrivals) > 1 and not np.all(interarrivals[1:] > 0)):
        raise ValidationError("interarrival times must be positive")
    if not np.all(services > 0):
        raise ValidationError("service times must be positive")


def simulate_fcfs(interarrivals, services) -> QueueResult:
    """Run one single-server FCFS path; arrival i happens at cumsum(T)[i]."""
    t = _values(interarrivals)
    x = _values(services)
    _check_path(t, x)
    arrivals = np.cumsum(t)
    s = kernels.lindley_system_times(t, x)
    return QueueResult(
        arrival_times=arrivals,
        service_times=x,
        waiting_times=s - x,
        finish_times=arrivals + s,
        system_times=s,
    )


def paoi_trace_single(result: QueueResult, interarrivals) -> PAoITrace:
    """Peak ages of a single-source path: P_i = T_i + S_i for i >= 2."""
    t = _values(interarrivals)
    if len(t) != len(result):
        raise ValidationError(
            f"interarrival stream length {len(t)} does not match path length {len(result)}"
        )
    if len(t) > 1:
        # diff(cumsum(t)) wobbles at the scale of the time horizon, not of t
        slack = 1e-9 * max(abs(result.arrival_times[-1]), 1.0)
        if not np.allclose(np.diff(result.arrival_times), t[1:], rtol=0.0, atol=slack):
            raise ValidationError("interarrival stream does not match the simulated path")
    if len(result) < 2:
        empty = np.empty(0, dtype=np.float64)
        return PAoITrace(empty, empty, empty)
    t_tail = t[1:]
    s_tail = result.system_times[1:]
    return PAoITrace(peaks=t_tail + s_tail, interarrivals=t_tail, system_times=s_tail)


def merge_arrivals(arrivals_1: np.ndarray, arrivals_2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Merge two arrival-time sequences into FCFS order.

    Returns (merged arrival times, source ids).  Ties go to source 1; each
    source's internal order is preserved and no update is dropped.
    """
    a1 = np.asarray(arrivals_1, dtype=np.float64)
    a2 = np.asarray(arrivals_2, dtype=np.float64)
    if len(a1) + len(a2) == 0:
        raise ValidationError("both arrival streams are empty")
    times = np.concatenate([a1, a2])
    ids = np.concatenate([np.ones(len(a1), dtype=np.int64), np.full(len(a2), 2, dtype=np.int64)])
    order = np.lexsort((ids, times))  # primary: time, secondary: source id
    return times[order], ids[order]


def simulate_two_source(
    interarrivals_1,
    interarrivals_2,
    service_spec: DistributionSpec,
    seed: int,
    services=None,
) -> QueueResult:
    """Run one FCFS path fed by two merged symmetric sources.

    Each merged update receives the next service-time draw from
    ``service_spec`` (seeded); pass ``services`` explicitly to pin the
    draws, e.g. in tests.
    """
    t1 = _values(interarrivals_1)
    t2 = _values(interarrivals_2)
    merged_times, ids = merge_arrivals(np.cumsum(t1), np.cumsum(t2))
    n = len(merged_times)
    if services is None:
        if service_spec is None:
            raise ValidationError("need either a service spec or explicit service times")
        x = sample_stream(service_spec, n, seed).values
    else:
        x = _values(services)
        if len(x) != n:
            raise ValidationError(f"need {n} service times, got {len(x)}")
    merged_t = np.empty(n, dtype=np.float64)
    merged_t[0] = merged_times[0]
    merged_t[1:] = np.diff(merged_times)
    s = kernels.lindley_system_times(merged_t, x)
    return QueueResult(
        arrival_times=merged_times,
        service_times=x,
        waiting_times=s - x,
        finish_times=merged_times + s,
        system_times=s,
        source_ids=ids,
    )


def paoi_trace_two_source(result: QueueResult) -> tuple[PAoITrace, PAoITrace]:
    """Per-source peak ages of a merged two-source path."""
    if result.source_ids is None:
        raise ValidationError("result does not carry source ids; not a two-source path")
    traces = []
    for sid in (1, 2):
        mask = result.source_ids == sid
        a = result.arrival_times[mask]
        f = result.finish_times[mask]
        if len(a) < 2:
            empty = np.empty(0, dtype=np.float64)
            traces.append(PAoITrace(empty, empty, empty))
            continue
        t_tail = np.diff(a)
        s_tail = f[1:] - a[1:]
        traces.append(PAoITrace(peaks=t_tail + s_tail, interarrivals=t_tail, system_times=s_tail))
    return traces[0], traces[1]


def _post_warmup(x: np.ndarray, fraction: float) -> np.ndarray:
    return x[int(fraction * len(x)):]


def replicate(
    params: SystemParams,
    interarrival_spec: DistributionSpec,
    service_spec: DistributionSpec,
    replications: int = 50,
    warmup_fraction: float = 0.1,
    master_seed: int = 0,
) -> ReplicationSummary:
    """Average post-warmup PAoI over independent seeded replications.

    Deterministic in ``master_seed``: replication r derives its stream
    seeds as (master_seed, r, role).  Unstable parameter sets still run but
    are flagged (their means need not converge).
    """
    if replications < 1:
        raise ValidationError(f"replications must be >= 1, got {replications}")
    if not 0.0 <= warmup_fraction <= 0.5:
        raise ValidationError(f"warmup fraction must be in [0, 0.5], got {warmup_fraction}")
    if not params.stable:
        warnings.warn(
            f"unstable configuration (load {params.load:.3f} >= 1); "
            "simulation runs but means may diverge",
            RuntimeWarning,
            stacklevel=2,
        )

    paoi_means = np.empty(replications)
    system_means = np.empty(replications)
    src_means = np.empty((replications, 2)) if params.sources == 2 else None

    for r in range(replications):
        if params.sources == 1:
            t = sample_stream(interarrival_spec, params.n,
                              derive_seed(master_seed, r, ROLE_ARRIVAL_1))
            x = sample_stream(service_spec, params.n,
                              derive_seed(master_seed, r, ROLE_SERVICE))
            result = simulate_fcfs(t, x)
            trace = paoi_trace_single(result, t)
            peaks = _post_warmup(trace.peaks, warmup_fraction)
            paoi_means[r] = peaks.mean()
        else:
            n1 = (params.n + 1) // 2
            n2 = params.n // 2
            t1 = sample_stream(interarrival_spec, n1,
                               derive_seed(master_seed, r, ROLE_ARRIVAL_1))
            t2 = sample_stream(interarrival_spec, n2,
                               derive_seed(master_seed, r, ROLE_ARRIVAL_2))
            result = simulate_two_source(
                t1, t2, service_spec, derive_seed(master_seed, r, ROLE_SERVICE)
            )
            tr1, tr2 = paoi_trace_two_source(result)
            kept = [_post_warmup(tr.peaks, warmup_fraction) for tr in (tr1, tr2)]
            src_means[r] = [k.mean() for k in kept]
            paoi_means[r] = np.concatenate(kept).mean()
        system_means[r] = _post_warmup(result.system_times, warmup_fraction).mean()

    if replications > 1:
        half_width = 1.96 * paoi_means.std(ddof=1) / np.sqrt(replications)
    else:
        half_width = 0.0
    return ReplicationSummary(
        sources=params.sources,
        replications=replications,
        warmup_fraction=warmup_fraction,
        mean_paoi=float(paoi_means.mean()),
        mean_system_time=float(system_means.mean()),
        ci95_paoi=float(half_width),
        per_source_paoi=(
            tuple(float(v) for v in src_means.mean(axis=0)) if src_means is not None else None
        ),
        stable=params.stable,
        paoi_rep_means=paoi_means,
    )
