"""Distribution specifications with closed-form moments and seeded sampling.

Four positive-support families are provided:

* ``exponential`` with a rate parameter,
* ``folded_normal``: the absolute value of a normal with the given
  pre-folding location and scale (moments reported are post-folding),
* ``uniform``: uniform on [0, 2*mean], a single-parameter family pinned to
  its mean,
* ``pareto``: classic Pareto on [scale, inf) with tail index ``shape``;
  shape <= 2 marks the spec heavy-tailed (infinite variance).

Sampling is inverse-transform from PCG64 uniforms drawn on the open
interval via ``integers(1, 2**53) * 2**-53``, so streams are reproducible
for a fixed (spec, seed, count) and every sampled value is strictly
positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri

from .errors import ValidationError

KINDS = ("exponential", "folded_normal", "uniform", "pareto")

_TWO_53 = float(2**53)


@dataclass(frozen=True)
class DistributionSpec:
    """Parametric law of a positive random variable with known moments."""

    kind: str
    params: tuple[tuple[str, float], ...]
    mean: float
    variance: float | None  # None when infinite (heavy-tailed Pareto)

    @property
    def heavy_tailed(self) -> bool:
        return self.variance is None

    @property
    def std(self) -> float:
        if self.variance is None:
            raise ValidationError(
                f"{self.kind} spec with {dict(self.params)} has infinite variance"
            )
        return math.sqrt(self.variance)

    def param(self, name: str) -> float:
        return dict(self.params)[name]

    def to_dict(self) -> dict:
        return {"kind": self.kind, **dict(self.params)}


def make_exponential(rate: float) -> DistributionSpec:
    """Exponential law with the given rate; mean 1/rate, variance 1/rate^2."""
    if not rate > 0:
        raise ValidationError(f"exponential rate must be > 0, got {rate}")
    return DistributionSpec(
        kind="exponential",
        params=(("rate", float(rate)),),
        mean=1.0 / rate,
        variance=1.0 / rate**2,
    )


def make_folded_normal(location: float, scale: float) -> DistributionSpec:
    """|N(location, scale^2)| with exact post-folding moments.

    mean = scale*sqrt(2/pi)*exp(-location^2/(2 scale^2))
           + location*(1 - 2*Phi(-location/scale))
    variance = location^2 + scale^2 - mean^2
    """
    if not scale > 0:
        raise ValidationError(f"folded-normal scale must be > 0, got {scale}")
    z = location / scale
    mean = scale * math.sqrt(2.0 / math.pi) * math.exp(-0.5 * z * z) + location * (
        1.0 - 2.0 * _norm_cdf(-z)
    )
    variance = location**2 + scale**2 - mean**2
    return DistributionSpec(
        kind="folded_normal",
        params=(("location", float(location)), ("scale", float(scale))),
        mean=mean,
        variance=variance,
    )


def make_uniform_mean(mean: float) -> DistributionSpec:
    """Uniform on [0, 2*mean]; variance mean^2/3."""
    if not mean > 0:
        raise ValidationError(f"uniform mean must be > 0, got {mean}")
    return DistributionSpec(
        kind="uniform",
        params=(("mean", float(mean)),),
        mean=float(mean),
        variance=mean**2 / 3.0,
    )


def make_pareto(shape: float, scale: float) -> DistributionSpec:
    """Pareto on [scale, inf): mean shape*scale/(shape-1), finite iff shape > 1.

    Variance is finite only for shape > 2; below that the spec is flagged
    heavy-tailed and reports its variance as unavailable.
    """
    if not shape > 1:
        raise ValidationError(f"pareto shape must be > 1 for a finite mean, got {shape}")
    if not scale > 0:
        raise ValidationError(f"pareto scale must be > 0, got {scale}")
    mean = shape * scale / (shape - 1.0)
    if shape > 2:
        variance = scale**2 * shape / ((shape - 1.0) ** 2 * (shape - 2.0))
    else:
        variance = None
    return DistributionSpec(
        kind="pareto",
        params=(("shape", float(shape)), ("scale", float(scale))),
        mean=mean,
        variance=variance,
    )


def spec_from_dict(doc: dict) -> DistributionSpec:
    """Build a spec from its config-file form, e.g. {"kind": "exponential", "rate": 1}."""
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValidationError(f"distribution spec must be a dict with a 'kind': {doc!r}")
    kind = doc["kind"]
    args = {k: v for k, v in doc.items() if k != "kind"}
    try:
        if kind == "exponential":
            return make_exponential(**args)
        if kind == "folded_normal":
            return make_folded_normal(**args)
        if kind == "uniform":
            return make_uniform_mean(**args)
        if kind == "pareto":
            return make_pareto(**args)
    except TypeError as exc:
        raise ValidationError(f"bad parameters for {kind!r}: {args}") from exc
    raise ValidationError(f"unknown distribution kind {kind!r}; expected one of {KINDS}")


def moments(spec: DistributionSpec) -> tuple[float, float | None]:
    """(mean, variance) of the spec; variance is None when infinite."""
    return spec.mean, spec.variance


@dataclass(frozen=True)
class SampleStream:
    """A seeded, reproducible draw of positive values from one spec."""

    values: np.ndarray = field(repr=False)
    seed: int
    spec: DistributionSpec

    def __len__(self) -> int:
        return len(self.values)


def sample_stream(spec: DistributionSpec, count: int, seed: int) -> SampleStream:
    """Draw ``count`` i.i.d. values from ``spec``, deterministic in (spec, seed, count)."""
    if count < 1:
        raise ValidationError(f"count must be >= 1, got {count}")
    rng = np.random.Generator(np.random.PCG64(seed))
    # uniforms strictly inside (0, 1) so every transform below stays positive
    u = rng.integers(1, 2**53, size=count).astype(np.float64) / _TWO_53
    p = dict(spec.params)
    if spec.kind == "exponential":
        values = -np.log(u) / p["rate"]
    elif spec.kind == "folded_normal":
        values = np.abs(p["location"] + p["scale"] * ndtri(u))
        # exact zero has measure zero but would break the positivity contract
        values = np.maximum(values, np.finfo(np.float64).tiny)
    elif spec.kind == "uniform":
        values = 2.0 * p["mean"] * u
    elif spec.kind == "pareto":
        values = p["scale"] * u ** (-1.0 / p["shape"])
    else:  # pragma: no cover - specs are only built by the factories above
        raise ValidationError(f"unknown distribution kind {spec.kind!r}")
    return SampleStream(values=values, seed=int(seed), spec=spec)


def _norm_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))
