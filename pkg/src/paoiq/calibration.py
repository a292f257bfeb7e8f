"""Mapping distribution moments to uncertainty-set variability parameters.

The mapping is

    gamma_a = sigma_a
    gamma_s = sqrt(theta0 + theta1*sigma_s^2 + theta2*sigma_a^2*rho^2) - sigma_a

with rho = lam/mu the per-source traffic density.  Built-in (theta0,
theta1, theta2) triples ship for the one- and two-source scenarios;
``fit_theta`` re-derives them from simulation data by ordinary least
squares on the linearized form y = (gamma_s* + sigma_a)^2 against
[1, sigma_s^2, sigma_a^2*rho^2], which inverts the mapping exactly.

Target gamma_s* values are extracted per instance by inverting the
closed-form worst-case bound against the simulated mean system time
(bisection; the bound is strictly increasing in gamma_s).  The tail
coefficient is fixed to alpha = 2 throughout calibration.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CalibrationRangeError,
    NoSolutionError,
    SingularDesignError,
    ValidationError,
)
from .robust_bounds import UncertaintyParams, bound_robust2_single, bound_robust3_two
from .seeding import derive_seed
from .simulator import DistributionSpec, SystemParams, replicate
from .stochastic import spec_from_dict

SCENARIOS = ("single", "two")

CALIBRATION_ALPHA = 2.0

_DATASET_HEADER = ("rho", "sigma_a", "sigma_s", "gamma_s_star", "kind_a", "kind_s", "seed")


@dataclass(frozen=True)
class CalibrationCoefficients:
    theta0: float
    theta1: float
    theta2: float
    scenario: str

    def __post_init__(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ValidationError(f"scenario must be one of {SCENARIOS}, got {self.scenario!r}")


# Built-in service-adaptation coefficients per scenario.
_BUILTIN = {
    "single": (-0.376, 3.978, 0.5),
    "two": (-1.302, 6.021, 0.7),
}


def builtin_theta(scenario: str) -> CalibrationCoefficients:
    """The shipped regression coefficients for a scenario."""
    if scenario not in _BUILTIN:
        raise ValidationError(f"scenario must be one of {SCENARIOS}, got {scenario!r}")
    t0, t1, t2 = _BUILTIN[scenario]
    return CalibrationCoefficients(t0, t1, t2, scenario)


def map_variability(
    sigma_a: float,
    sigma_s: float,
    rho: float,
    theta: CalibrationCoefficients,
) -> tuple[float, float]:
    """(gamma_a, gamma_s) from the moment mapping.

    A negative radicand is an error (the regression is being evaluated far
    outside its fitted region); a real but negative gamma_s is clamped to 0
    with a warning, since the uncertainty set needs gamma_s >= 0.
    """
    if sigma_a < 0 or sigma_s < 0:
        raise ValidationError("sigma values must be >= 0")
    radicand = theta.theta0 + theta.theta1 * sigma_s**2 + theta.theta2 * sigma_a**2 * rho**2
    if radicand < 0:
        raise CalibrationRangeError(
            f"variability mapping radicand is negative ({radicand:.6g}) at "
            f"sigma_a={sigma_a}, sigma_s={sigma_s}, rho={rho}"
        )
    gamma_s = math.sqrt(radicand) - sigma_a
    if gamma_s < 0:
        warnings.warn(
            f"mapped gamma_s = {gamma_s:.6g} < 0 clamped to 0 "
            "(mapping extrapolated below its fitted region)",
            RuntimeWarning,
            stacklevel=2,
        )
        gamma_s = 0.0
    return float(sigma_a), gamma_s


def invert_gamma_s(
    sys: SystemParams,
    alpha: float,
    gamma_a: float,
    target_system_time: float,
    value_rtol: float = 1e-8,
) -> float:
    """The unique gamma_s >= 0 whose closed-form bound equals the target.

    The bound is strictly increasing in gamma_s, so the root is found by
    doubling the upper bracket and bisecting until the re-evaluated bound is
    within ``value_rtol * target`` of the target.
    """
    bound_fn = bound_robust2_single if sys.sources == 1 else bound_robust3_two

    def value(gs: float) -> float:
        return bound_fn(sys, UncertaintyParams(alpha, gamma_a, gs)).value

    v0 = value(0.0)
    if target_system_time < v0:
        raise NoSolutionError(
            f"target system time {target_system_time:.6g} is below the gamma_s=0 "
            f"bound {v0:.6g}; no gamma_s >= 0 can reach it"
        )
    tol = value_rtol * abs(target_system_time)
    if target_system_time - v0 <= tol:
        return 0.0

    hi = 1.0
    for _ in range(200):
        if value(hi) >= target_system_time:
            break
        hi *= 2.0
    else:  # pragma: no cover - bound grows without limit in gamma_s
        raise NoSolutionError("could not bracket the target system time")

    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        v = value(mid)
        if abs(v - target_system_time) <= tol:
            return mid
        if v < target_system_time:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class CalibrationRow:
    rho: float
    sigma_a: float
    sigma_s: float
    gamma_s_star: float
    kind_a: str
    kind_s: str
    seed: int


@dataclass
class CalibrationDataset:
    scenario: str
    rows: list[CalibrationRow] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def design(self) -> tuple[np.ndarray, np.ndarray]:
        """(X, y) of the linearized regression."""
        x = np.array([[1.0, r.sigma_s**2, r.sigma_a**2 * r.rho**2] for r in self.rows])
        y = np.array([(r.gamma_s_star + r.sigma_a) ** 2 for r in self.rows])
        return x, y


def fit_theta(dataset: CalibrationDataset, scenario: str | None = None) -> CalibrationCoefficients:
    """Least-squares (theta0, theta1, theta2) from a calibration dataset."""
    scenario = scenario or dataset.scenario
    if len(dataset) < 3:
        raise SingularDesignError(
            f"need at least 3 calibration rows, got {len(dataset)}"
        )
    x, y = dataset.design()
    coef, _, rank, _ = np.linalg.lstsq(x, y, rcond=None)
    if rank < 3:
        raise SingularDesignError(
            f"calibration design matrix is rank deficient (rank {rank} < 3)"
        )
    return CalibrationCoefficients(float(coef[0]), float(coef[1]), float(coef[2]), scenario)


def build_calibration_dataset(
    grid: list[tuple[float, DistributionSpec, DistributionSpec]],
    scenario: str,
    mu: float,
    n: int = 20_000,
    replications: int = 10,
    warmup_fraction: float = 0.1,
    master_seed: int = 0,
) -> CalibrationDataset:
    """Simulate every (lam, interarrival spec, service spec) grid point and
    invert the bound against its mean system time.

    Rows whose inversion fails (target below the gamma_s = 0 bound; typical
    at light load, where the worst case already exceeds the mean) are
    reported and skipped.  Heavy-tailed specs are rejected: this path needs
    finite sigma values.
    """
    if scenario not in SCENARIOS:
        raise ValidationError(f"scenario must be one of {SCENARIOS}, got {scenario!r}")
    sources = 1 if scenario == "single" else 2
    dataset = CalibrationDataset(scenario=scenario)
    for i, (lam, spec_a, spec_s) in enumerate(grid):
        params = SystemParams(lam=lam, mu=mu, n=n, sources=sources)
        if not params.stable:
            raise ValidationError(
                f"grid point {i} is unstable for the {scenario} scenario: "
                f"lam={lam}, mu={mu}"
            )
        sigma_a = spec_a.std
        sigma_s = spec_s.std
        seed = derive_seed(master_seed, i)
        summary = replicate(
            params, spec_a, spec_s,
            replications=replications,
            warmup_fraction=warmup_fraction,
            master_seed=seed,
        )
        try:
            gamma_s_star = invert_gamma_s(
                params, CALIBRATION_ALPHA, sigma_a, summary.mean_system_time
            )
        except NoSolutionError as exc:
            warnings.warn(
                f"skipping grid point {i} (lam={lam}): {exc}", RuntimeWarning, stacklevel=2
            )
            continue
        dataset.rows.append(
            CalibrationRow(
                rho=lam / mu,
                sigma_a=sigma_a,
                sigma_s=sigma_s,
                gamma_s_star=gamma_s_star,
                kind_a=spec_a.kind,
                kind_s=spec_s.kind,
                seed=seed,
            )
        )
    return dataset


def write_dataset_csv(dataset: CalibrationDataset, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_DATASET_HEADER)
        for r in dataset.rows:
            writer.writerow(
                [_fmt(r.rho), _fmt(r.sigma_a), _fmt(r.sigma_s), _fmt(r.gamma_s_star),
                 r.kind_a, r.kind_s, r.seed]
            )


def read_dataset_csv(path, scenario: str) -> CalibrationDataset:
    dataset = CalibrationDataset(scenario=scenario)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != _DATASET_HEADER:
            raise ValidationError(f"unexpected dataset header {header}")
        for row in reader:
            dataset.rows.append(
                CalibrationRow(
                    rho=float(row[0]), sigma_a=float(row[1]), sigma_s=float(row[2]),
                    gamma_s_star=float(row[3]), kind_a=row[4], kind_s=row[5],
                    seed=int(row[6]),
                )
            )
    return dataset


def write_theta_json(theta: CalibrationCoefficients, path, provenance: dict | None = None) -> None:
    doc = {
        "scenario": theta.scenario,
        "theta0": theta.theta0,
        "theta1": theta.theta1,
        "theta2": theta.theta2,
        "provenance": provenance or {},
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def read_theta_json(path) -> CalibrationCoefficients:
    with open(path) as fh:
        doc = json.load(fh)
    try:
        return CalibrationCoefficients(
            float(doc["theta0"]), float(doc["theta1"]), float(doc["theta2"]),
            doc["scenario"],
        )
    except KeyError as exc:
        raise ValidationError(f"theta file {path} is missing field {exc}") from exc


def grid_from_config(doc: dict) -> list[tuple[float, DistributionSpec, DistributionSpec]]:
    """Parse the calibrate grid file: {"points": [{"lam", "interarrival", "service"}]}."""
    try:
        points = doc["points"]
    except KeyError as exc:
        raise ValidationError("calibration grid config needs a 'points' list") from exc
    grid = []
    for p in points:
        grid.append((float(p["lam"]), spec_from_dict(p["interarrival"]),
                     spec_from_dict(p["service"])))
    return grid


def _fmt(x: float) -> str:
    return format(float(x), ".12g")
