"""Closed-form density moments against quadrature oracles and raw sampling."""

import math

import numpy as np
import pytest
from scipy import integrate

from antmat import (
    InvalidSpecError,
    PairDensity,
    ScalarDensity,
    pair_moments,
    sample_pair,
    scalar_moments,
    stream,
)
from antmat.matgen import _sample_pair_arrays, _sample_scalar_array

ALL_PAIR_KINDS = [
    PairDensity("gaussian-antagonistic"),
    PairDensity("uniform-antagonistic"),
    PairDensity("two-interval", w=0.5),
    PairDensity("decaying-squares", c=50.0, p=8.0),
    PairDensity("gap-uniform", lo=1.5, hi=10.0),
]


def test_gaussian_pair_moments():
    m = pair_moments(PairDensity("gaussian-antagonistic"))
    assert m.mean == 0.0
    assert m.var == 1.0
    assert m.fourth == 3.0
    assert m.theta == 2.0 / math.pi


def test_uniform_pair_moments():
    m = pair_moments(PairDensity("uniform-antagonistic"))
    assert m.var == pytest.approx(1.0 / 3.0, rel=1e-15)
    assert m.fourth == pytest.approx(1.0 / 5.0, rel=1e-15)
    assert m.theta == 0.25


def test_two_interval_moments():
    w = 0.7
    m = pair_moments(PairDensity("two-interval", w=w))
    assert m.var == pytest.approx(1.0 + w * w / 3.0, rel=1e-15)
    assert m.fourth == pytest.approx(1.0 + 2 * w * w + w ** 4 / 5.0, rel=1e-15)
    assert m.theta == 1.0


def test_decaying_squares_moments_depend_on_gap():
    d = PairDensity("decaying-squares", c=50.0, p=8.0)
    near = pair_moments(d, 0, 1)
    far = pair_moments(d, 0, 6)
    assert near.theta > far.theta > 1.0
    # gap 2: delta = 50 / 257; frozen value of (1 + delta/2)^2
    assert pair_moments(d, 3, 5).theta == pytest.approx(1.2040152008357434, rel=1e-15)
    # far pairs approach the exactly antisymmetric unit pair
    assert pair_moments(d, 0, 40).theta == pytest.approx(1.0, abs=1e-10)
    assert pair_moments(d, 0, 40).var == pytest.approx(1.0, abs=1e-10)


def test_gap_uniform_moments():
    lo, hi = 1.5, 10.0
    m = pair_moments(PairDensity("gap-uniform", lo=lo, hi=hi))
    want_var = (hi ** 3 - lo ** 3) / (3.0 * (hi - lo))
    assert m.var == pytest.approx(want_var, rel=1e-15)
    assert m.theta == m.var  # y = -x exactly
    assert m.fourth == pytest.approx((hi ** 5 - lo ** 5) / (5.0 * (hi - lo)), rel=1e-15)


def test_two_interval_moments_match_quadrature():
    w = 0.6
    a, b = 1.0 - w, 1.0 + w
    # magnitude density: |x| ~ uniform(a, b); x^2 and x^4 moments
    var, _ = integrate.quad(lambda u: u * u / (b - a), a, b)
    fourth, _ = integrate.quad(lambda u: u ** 4 / (b - a), a, b)
    m = pair_moments(PairDensity("two-interval", w=w))
    assert m.var == pytest.approx(var, rel=1e-12)
    assert m.fourth == pytest.approx(fourth, rel=1e-12)
    # theta = E[|x|] E[|y|] by independence of the two magnitudes
    mean_mag, _ = integrate.quad(lambda u: u / (b - a), a, b)
    assert m.theta == pytest.approx(mean_mag ** 2, rel=1e-12)


def test_decaying_squares_moments_match_quadrature():
    d = PairDensity("decaying-squares", c=3.0, p=2.0)
    gap = 2
    delta = 3.0 / (1.0 + gap ** 2)
    lo, hi = 1.0, 1.0 + delta
    var, _ = integrate.quad(lambda u: u * u / delta, lo, hi)
    fourth, _ = integrate.quad(lambda u: u ** 4 / delta, lo, hi)
    mean_mag, _ = integrate.quad(lambda u: u / delta, lo, hi)
    m = pair_moments(d, 0, gap)
    assert m.var == pytest.approx(var, rel=1e-12)
    assert m.fourth == pytest.approx(fourth, rel=1e-12)
    assert m.theta == pytest.approx(mean_mag ** 2, rel=1e-12)


def test_gaussian_pair_theta_matches_quadrature():
    # theta = -E[xy] over the opposite-sign quadrants with density exp(-(x^2+y^2)/2)/pi
    val, _ = integrate.dblquad(
        lambda y, x: x * y * math.exp(-(x * x + y * y) / 2.0) / math.pi,
        0.0,
        8.0,
        lambda x: -8.0,
        lambda x: 0.0,
    )
    theta = pair_moments(PairDensity("gaussian-antagonistic")).theta
    assert theta == pytest.approx(-2.0 * val, rel=1e-9)  # two quadrants by symmetry


@pytest.mark.parametrize("density", ALL_PAIR_KINDS, ids=lambda d: d.kind)
def test_sampled_pairs_are_antagonistic_and_match_moments(density):
    rng = stream(123, 9, 0)
    x, y = _sample_pair_arrays(density, np.array([1]), rng, 200000)
    x, y = x.ravel(), y.ravel()
    assert np.all(x * y <= 0.0)
    m = pair_moments(density, 0, 1)
    count = len(x)
    for label, sample, want, second in (
        ("mean x", x, m.mean, m.var),
        ("mean y", y, m.mean, m.var),
        ("var x", x * x, m.var, m.fourth),
        ("fourth x", x ** 4, m.fourth, np.mean(x ** 8)),
        ("-theta", x * y, -m.theta, np.mean((x * y) ** 2)),
    ):
        got = float(np.mean(sample))
        stderr = math.sqrt(max(float(second) - want * want, 1e-30) / count)
        assert abs(got - want) <= 5.0 * stderr, f"{label}: {got} vs {want} (stderr {stderr})"


def test_pair_marginals_are_sign_symmetric():
    rng = stream(5, 9, 1)
    x, y = _sample_pair_arrays(PairDensity("two-interval", w=0.5), np.array([1]), rng, 100000)
    # random orientation makes the upper entry positive half the time
    assert abs(float(np.mean(x > 0)) - 0.5) < 0.01
    assert abs(float(np.mean(y > 0)) - 0.5) < 0.01


def test_sample_pair_scalar_interface():
    rng = stream(1, 9, 2)
    x, y = sample_pair(PairDensity("gaussian-antagonistic"), rng)
    assert isinstance(x, float) and isinstance(y, float)
    assert x * y <= 0.0


def test_decaying_squares_requires_ordered_indices():
    d = PairDensity("decaying-squares", c=1.0, p=1.0)
    with pytest.raises(InvalidSpecError):
        pair_moments(d, 3, 3)
    with pytest.raises(InvalidSpecError):
        sample_pair(d, stream(0, 9, 3), 2, 1)


def test_scalar_moments_closed_forms():
    assert scalar_moments(ScalarDensity("uniform", a=-10.0, b=-2.0)) == (-6.0, 64.0 / 12.0)
    assert scalar_moments(ScalarDensity("gaussian", mean=1.5, variance=4.0)) == (1.5, 4.0)
    assert scalar_moments(ScalarDensity("point", v=3.0)) == (3.0, 0.0)
    w = 0.25
    mean, var = scalar_moments(ScalarDensity("two-interval-uniform", w=w))
    assert mean == 0.0 and var == pytest.approx(1.0 + w * w / 3.0, rel=1e-15)
    lo, hi = 1.5, 10.0
    mean, var = scalar_moments(ScalarDensity("gap-uniform", lo=lo, hi=hi))
    assert mean == 0.0 and var == pytest.approx((hi ** 3 - lo ** 3) / (3 * (hi - lo)), rel=1e-15)


def test_scalar_samples_respect_support():
    rng = stream(77, 9, 4)
    for d in (
        ScalarDensity("uniform", a=-4.0, b=4.0),
        ScalarDensity("two-interval-uniform", w=0.3),
        ScalarDensity("gap-uniform", lo=1.5, hi=10.0),
        ScalarDensity("point", v=-2.5),
    ):
        vals = _sample_scalar_array(d, rng, 5000)
        ok = np.zeros(len(vals), dtype=bool)
        for lo, hi in d.support:
            ok |= (vals >= lo) & (vals <= hi)
        assert np.all(ok), d.kind
    # empirical moments of one signed kind
    d = ScalarDensity("gap-uniform", lo=1.5, hi=10.0)
    vals = _sample_scalar_array(d, rng, 200000)
    mean, var = scalar_moments(d)
    assert abs(float(np.mean(vals)) - mean) < 0.05
    assert abs(float(np.var(vals)) - var) / var < 0.02


@pytest.mark.parametrize(
    "bad",
    [
        lambda: PairDensity("two-interval", w=1.5),
        lambda: PairDensity("two-interval"),
        lambda: PairDensity("decaying-squares", c=-1.0, p=2.0),
        lambda: PairDensity("gap-uniform", lo=2.0, hi=1.0),
        lambda: PairDensity("gaussian-antagonistic", w=0.5),
        lambda: PairDensity("no-such-kind"),
        lambda: ScalarDensity("uniform", a=2.0, b=1.0),
        lambda: ScalarDensity("gaussian", mean=0.0, variance=-1.0),
        lambda: ScalarDensity("uniform", a=1.0, b=2.0, v=0.0),
        lambda: ScalarDensity("point"),
    ],
)
def test_invalid_density_parameters_rejected(bad):
    with pytest.raises(InvalidSpecError):
        bad()
