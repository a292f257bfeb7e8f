"""Distribution specs: analytic moments, sampling contracts, determinism."""

import math

import numpy as np
import pytest

from paoiq.errors import ValidationError
from paoiq.stochastic import (
    make_exponential,
    make_folded_normal,
    make_pareto,
    make_uniform_mean,
    moments,
    sample_stream,
    spec_from_dict,
)

# Monte-Carlo reference moments of |N(0,1)|, 1e7 draws with an independent
# generator (numpy default_rng(2024)); standard errors ~2e-4.
MC_FOLDED01_MEAN = 0.798145
MC_FOLDED01_VAR = 0.363773


def test_exponential_moments():
    assert moments(make_exponential(1.0)) == (1.0, 1.0)
    assert moments(make_exponential(0.5)) == (2.0, 4.0)


def test_exponential_invalid_rate():
    with pytest.raises(ValidationError):
        make_exponential(0.0)
    with pytest.raises(ValidationError):
        make_exponential(-1.0)


def test_folded_normal_standard_moments():
    spec = make_folded_normal(0.0, 1.0)
    assert spec.mean == pytest.approx(math.sqrt(2.0 / math.pi), rel=1e-12)
    assert spec.variance == pytest.approx(1.0 - 2.0 / math.pi, rel=1e-12)
    # cross-check against the frozen Monte-Carlo estimates
    assert spec.mean == pytest.approx(MC_FOLDED01_MEAN, abs=1e-3)
    assert spec.variance == pytest.approx(MC_FOLDED01_VAR, abs=1e-3)


def test_folded_normal_negligible_folding():
    spec = make_folded_normal(10.0, 0.1)
    # folding correction is exp(-5000)-sized here
    assert spec.mean == pytest.approx(10.0, abs=1e-10)
    assert spec.variance == pytest.approx(0.01, abs=1e-10)


def test_folded_normal_invalid_scale():
    with pytest.raises(ValidationError):
        make_folded_normal(1.0, 0.0)


def test_uniform_moments_and_support():
    spec = make_uniform_mean(1.0)
    assert moments(spec) == (1.0, pytest.approx(1.0 / 3.0))
    assert moments(make_uniform_mean(0.5)) == (0.5, pytest.approx(1.0 / 12.0))
    values = sample_stream(make_uniform_mean(1.0), 100_000, 7).values
    assert values.min() >= 0.0 and values.max() <= 2.0


def test_uniform_invalid_mean():
    with pytest.raises(ValidationError):
        make_uniform_mean(-1.0)


def test_pareto_moments():
    spec = make_pareto(3.0, 2.0)
    assert spec.mean == pytest.approx(3.0)
    assert spec.variance == pytest.approx(3.0)
    assert not spec.heavy_tailed


def test_pareto_heavy_tail_flag():
    spec = make_pareto(1.5, 1.0)
    assert spec.mean == pytest.approx(3.0)
    assert spec.variance is None
    assert spec.heavy_tailed
    with pytest.raises(ValidationError):
        spec.std  # noqa: B018 - the property itself raises


def test_pareto_invalid_shape():
    with pytest.raises(ValidationError):
        make_pareto(1.0, 1.0)


def test_sample_stream_rejects_zero_count():
    with pytest.raises(ValidationError):
        sample_stream(make_exponential(1.0), 0, 1)


def test_sample_stream_law_of_large_numbers():
    s = sample_stream(make_exponential(1.0), 1_000_000, 42)
    assert abs(s.values.mean() - 1.0) < 0.005


def test_sample_stream_deterministic():
    a = sample_stream(make_exponential(1.0), 10_000, 42)
    b = sample_stream(make_exponential(1.0), 10_000, 42)
    assert np.array_equal(a.values, b.values)
    c = sample_stream(make_exponential(1.0), 10_000, 43)
    assert not np.array_equal(a.values, c.values)


@pytest.mark.parametrize(
    "spec",
    [
        make_exponential(0.5),
        make_folded_normal(1.0, 0.5),
        make_folded_normal(0.0, 2.0),
        make_uniform_mean(1.0),
        make_pareto(5.0, 1.0),
        make_pareto(1.5, 1.0),
    ],
    ids=lambda s: s.kind,
)
def test_positivity(spec):
    values = sample_stream(spec, 200_000, 99).values
    assert np.all(values > 0.0)


@pytest.mark.parametrize(
    "spec",
    [
        make_exponential(0.5),
        make_folded_normal(1.0, 0.5),
        make_uniform_mean(1.0),
        make_pareto(5.0, 1.0),
    ],
    ids=lambda s: s.kind,
)
def test_moment_consistency(spec):
    # empirical mean within 1% and variance within 3% over 1e6 samples
    values = sample_stream(spec, 1_000_000, 7).values
    assert abs(values.mean() - spec.mean) / spec.mean < 0.01
    assert abs(values.var() - spec.variance) / spec.variance < 0.03


def test_spec_from_dict_round_trip():
    for spec in (
        make_exponential(0.7),
        make_folded_normal(1.0, 0.25),
        make_uniform_mean(2.0),
        make_pareto(2.5, 0.5),
    ):
        again = spec_from_dict(spec.to_dict())
        assert again == spec


def test_spec_from_dict_rejects_garbage():
    with pytest.raises(ValidationError):
        spec_from_dict({"kind": "gaussian", "mean": 1.0})
    with pytest.raises(ValidationError):
        spec_from_dict({"rate": 1.0})
    with pytest.raises(ValidationError):
        spec_from_dict({"kind": "exponential", "rate": 1.0, "extra": 2.0})
