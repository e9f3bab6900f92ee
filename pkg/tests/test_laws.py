"""Limiting-law checks: elliptic clouds, dilute radius, width trends."""

import math

import numpy as np
import pytest

from antmat import (
    Antagonistic,
    Dilute,
    EllipseModel,
    EnsembleSpec,
    InvalidSpecError,
    PairDensity,
    ScalarDensity,
    SmallSymBigAntisym,
    circular_radius_check,
    decaying_family,
    elliptic_fit,
    ks_threshold,
    normalized_spectrum,
    rho_from_density,
    sym_antisym_family,
    width_trend,
    widths_to_csv,
)
from antmat.laws import INSIDE_THRESHOLD, WIDTH_SLACK


GAUSSIAN = PairDensity("gaussian-antagonistic")


def test_rho_closed_forms():
    assert rho_from_density(GAUSSIAN) == pytest.approx(-2.0 / math.pi, rel=1e-12)
    assert rho_from_density(PairDensity("uniform-antagonistic")) == pytest.approx(-0.75, rel=1e-12)
    # theta = 1, var = 1 + w^2/3: w = 0.5 gives -12/13
    assert rho_from_density(PairDensity("two-interval", w=0.5)) == pytest.approx(-12.0 / 13.0, rel=1e-12)
    # delta = c/(1 + gap^p) = 1 at c = 2, p = 1, gap = 1: -theta/var = -27/28
    assert rho_from_density(PairDensity("decaying-squares", c=2.0, p=1.0)) == pytest.approx(-27.0 / 28.0, rel=1e-12)


def test_rho_gap_uniform_degenerates_to_minus_one():
    # theta equals the variance for exactly antisymmetric pairs
    d = PairDensity("gap-uniform", lo=1.5, hi=10.0)
    assert rho_from_density(d) == pytest.approx(-1.0, rel=1e-12)


def test_ellipse_model_axes_and_validation():
    m = EllipseModel(-0.5)
    assert m.semi_axes == (0.5, 1.5)
    with pytest.raises(InvalidSpecError, match="rho"):
        EllipseModel(1.5)
    with pytest.raises(InvalidSpecError, match="rho"):
        EllipseModel(math.nan)


def test_ks_threshold_value():
    assert ks_threshold(1000) == pytest.approx(2.0 * 1.63 / math.sqrt(1000.0), rel=1e-12)


def test_elliptic_fit_accepts_matching_model_and_rejects_circle():
    n = 1000
    spec = EnsembleSpec(n, Antagonistic(GAUSSIAN), 7)
    s = normalized_spectrum(spec)
    good = elliptic_fit(s, n, EllipseModel(rho_from_density(GAUSSIAN)), seed=7)
    assert good.inside_fraction >= INSIDE_THRESHOLD
    assert good.radial_ks <= ks_threshold(n)
    assert good.to_json() == {
        "inside_fraction": good.inside_fraction,
        "radial_ks": good.radial_ks,
        "n": n,
        "seed": 7,
    }
    # the same cloud against a circle model fails on both statistics
    bad = elliptic_fit(s, n, EllipseModel(0.0), seed=7)
    assert bad.inside_fraction < INSIDE_THRESHOLD
    assert bad.radial_ks > ks_threshold(n)


def test_elliptic_fit_collapsed_axis_projects_onto_imaginary_line():
    # gap-uniform pairs are exactly antisymmetric: rho = -1, semi-axis a = 0
    spec = EnsembleSpec(400, Antagonistic(PairDensity("gap-uniform", lo=1.5, hi=10.0)), 3)
    s = normalized_spectrum(spec)
    assert np.max(np.abs(s.eigenvalues.real)) < 1e-12
    fit = elliptic_fit(s, 400, EllipseModel(-1.0), seed=3)
    assert fit.inside_fraction >= INSIDE_THRESHOLD
    assert math.isfinite(fit.radial_ks)


def test_elliptic_fit_rejects_empty_spectrum():
    spec = EnsembleSpec(8, Antagonistic(GAUSSIAN), 0)
    s = normalized_spectrum(spec)
    empty = type(s)(eigenvalues=np.empty(0, dtype=complex), residual=0.0)
    with pytest.raises(InvalidSpecError, match="nonempty"):
        elliptic_fit(empty, 0, EllipseModel(-0.5))


def test_normalized_spectrum_passes_elliptic_gaussian_through():
    from antmat import EllipticGaussian, eigenvalues, sample_matrix

    spec = EnsembleSpec(300, EllipticGaussian(tau=0.4), 5)
    s = normalized_spectrum(spec, index=2)
    direct = eigenvalues(sample_matrix(spec, 2))
    assert np.array_equal(s.eigenvalues, direct.eigenvalues)
    assert np.max(np.abs(s.eigenvalues)) < 1.6


def test_normalized_spectrum_rejects_unscalable_composition():
    dil = EnsembleSpec(16, Dilute(ScalarDensity("uniform", a=-1.0, b=1.0), q=0.5), 0)
    with pytest.raises(InvalidSpecError, match="normalization"):
        normalized_spectrum(dil)


def test_circular_radius_check_matches_prediction():
    spec = EnsembleSpec(512, Dilute(ScalarDensity("uniform", a=-1.0, b=1.0), q=0.25), 11)
    rc = circular_radius_check(spec)
    # sigma = 1/sqrt(3), so the predicted radius is sqrt(512 * 0.25 / 3)
    assert rc.predicted == pytest.approx(math.sqrt(512.0 * 0.25 / 3.0), rel=1e-12)
    assert rc.ratio == pytest.approx(rc.empirical / rc.predicted, rel=1e-12)
    assert 0.8 < rc.ratio < 1.2
    assert set(rc.to_json()) == {"empirical", "predicted", "ratio"}


def test_circular_radius_check_zero_prediction_gives_nan_ratio():
    spec = EnsembleSpec(32, Dilute(ScalarDensity("point", v=0.0), q=0.5), 0)
    rc = circular_radius_check(spec)
    assert rc.predicted == 0.0
    assert math.isnan(rc.ratio)


def test_circular_radius_check_requires_dilute():
    spec = EnsembleSpec(16, Antagonistic(GAUSSIAN), 0)
    with pytest.raises(InvalidSpecError, match="dilute"):
        circular_radius_check(spec)


def test_width_trend_decaying_family_narrows():
    trend = width_trend(decaying_family(50.0, 8.0), (200, 400, 600), (0, 1, 2))
    assert trend.non_increasing
    assert len(trend.rows) == 9
    assert trend.mean_width(200) > trend.mean_width(600)
    with pytest.raises(KeyError):
        trend.mean_width(300)


def test_width_trend_gaussian_cloud_widens():
    def make(n, seed):
        return EnsembleSpec(n, Antagonistic(GAUSSIAN), seed)

    trend = width_trend(make, (50, 100), (0, 1))
    # raw widths grow like sqrt(n), far beyond the relative slack
    assert not trend.non_increasing
    assert trend.mean_width(100) > trend.mean_width(50) * (1.0 + WIDTH_SLACK)


def test_width_trend_validates_n_list():
    fam = decaying_family(50.0, 8.0)
    with pytest.raises(InvalidSpecError, match="increasing"):
        width_trend(fam, (200, 200), (0,))
    with pytest.raises(InvalidSpecError, match="increasing"):
        width_trend(fam, (400, 200), (0,))


def test_family_builders_produce_expected_compositions():
    shifted = decaying_family(50.0, 8.0, diag=ScalarDensity("uniform", a=-6.0, b=-4.0))
    spec = shifted(100, 9)
    assert spec.composition.kind == "diag-plus-antagonistic"
    assert spec.n == 100 and spec.seed == 9
    mixed = sym_antisym_family(
        ScalarDensity("uniform", a=-10.0, b=-5.0),
        ScalarDensity("uniform", a=-30.0, b=30.0),
        ScalarDensity("uniform", a=-10.0, b=10.0),
    )(200, 3)
    assert isinstance(mixed.composition, SmallSymBigAntisym)


def test_widths_to_csv_round_trip():
    trend = width_trend(decaying_family(50.0, 8.0), (40, 80), (0, 1))
    text = widths_to_csv(trend)
    lines = text.strip().split("\n")
    assert lines[0] == "n,seed,width"
    assert len(lines) == 5
    for line, (n, seed, w) in zip(lines[1:], trend.rows):
        fn, fs, fw = line.split(",")
        assert (int(fn), int(fs), float(fw)) == (n, seed, w)
