"""Perturbative extreme-eigenvalue predictions against full eigensolves."""

import math

import numpy as np
import pytest

from antmat import (
    Antagonistic,
    DegenerateExtremesError,
    EnsembleSpec,
    InvalidSpecError,
    NotDegenerateError,
    PairDensity,
    PerturbationInput,
    eigenvalues,
    predict_degenerate,
    predict_extremes,
    report_to_csv,
    sample_matrix,
    stream,
    verify_prediction,
)

GRID = (10.0 ** -1.0, 10.0 ** -1.5, 10.0 ** -2.0, 10.0 ** -2.5)
# for random instances: small extreme gaps need small eps to sit in the
# asymptotic regime of the eps^2 formulas
GRID_FINE = (10.0 ** -2.0, 10.0 ** -2.5, 10.0 ** -3.0, 10.0 ** -3.5)


def _antagonistic(n, seed, index=0):
    return sample_matrix(EnsembleSpec(n, Antagonistic(PairDensity("gaussian-antagonistic")), seed), index)


def test_2x2_closed_form_shifts():
    # d = (-1, -4), A01 A10 = -6: both extremes shift inward by 2 eps^2
    inp = PerturbationInput(d=[-1.0, -4.0], A=[[0.0, 2.0], [-3.0, 0.0]], eps=1e-2)
    pred = predict_extremes(inp)
    assert pred.lambda_max == pytest.approx(-1.0002, rel=1e-12)
    assert pred.lambda_min == pytest.approx(-3.9998, rel=1e-12)
    assert pred.order == 3

    # exact eigenvalues: (-5 +- sqrt(9 - 24 eps^2)) / 2; residual is (4/3) eps^4 + O(eps^6)
    eps = 1e-2
    exact_max = (-5.0 + math.sqrt(9.0 - 24.0 * eps * eps)) / 2.0
    assert abs(pred.lambda_max - exact_max) == pytest.approx(4.0 / 3.0 * eps ** 4, rel=1e-3)


def test_2x2_machine_level_at_tiny_eps():
    inp = PerturbationInput(d=[-1.0, -4.0], A=[[0.0, 2.0], [-3.0, 0.0]], eps=1e-4)
    pred = predict_extremes(inp)
    lam = np.sort(eigenvalues(np.diag(inp.d) + inp.eps * inp.A).eigenvalues.real)
    assert abs(lam[-1] - pred.lambda_max) < 1e-12
    assert abs(lam[0] - pred.lambda_min) < 1e-12


def test_2x2_residual_slope_is_fourth_order():
    inp = PerturbationInput(d=[-1.0, -4.0], A=[[0.0, 2.0], [-3.0, 0.0]], eps=1.0)
    rep = verify_prediction(inp, GRID)
    assert rep.mode == "nondegenerate"
    assert rep.slope == pytest.approx(4.0, abs=0.1)


def test_predictions_stay_inside_the_diagonal_range():
    rng = stream(31, 4, 0)
    for rep in range(5):
        d = np.sort(rng.uniform(-10.0, -2.0, 10))
        inp = PerturbationInput(d=d, A=_antagonistic(10, 31, rep), eps=0.05)
        pred = predict_extremes(inp)
        assert d[0] < pred.lambda_min < pred.lambda_max < d[-1]
        lo, hi = pred.strip
        assert d[0] < lo and hi < d[-1]
        assert lo <= pred.lambda_min and pred.lambda_max <= hi


def test_nondegenerate_slope_contract():
    rng = stream(32, 4, 0)
    for rep in range(5):
        d = np.sort(rng.uniform(-10.0, -2.0, 8))
        inp = PerturbationInput(d=d, A=_antagonistic(8, 32, rep), eps=1.0)
        out = verify_prediction(inp, GRID_FINE)
        assert out.mode == "nondegenerate"
        assert out.slope >= 2.7 or math.isinf(out.slope)


def test_degenerate_slope_contract():
    rng = stream(36, 4, 0)
    for rep in range(5):
        d = np.sort(rng.uniform(-10.0, -2.0, 8))
        d[:2] = d[0]
        inp = PerturbationInput(d=d, A=_antagonistic(8, 36, rep), eps=1.0)
        out = verify_prediction(inp, GRID_FINE)
        assert out.mode == "degenerate"
        assert out.slope >= 1.7 or math.isinf(out.slope)


def test_degenerate_pair_is_exact_for_h2_cluster():
    # d = (-2, -2): eigenvalues are exactly -2 +- i eps sqrt(ab)
    a, b = 2.0, 3.0
    inp = PerturbationInput(d=[-2.0, -2.0], A=[[0.0, a], [-b, 0.0]], eps=0.01)
    pred = predict_degenerate(inp)
    assert pred.lambda_max == pytest.approx(complex(-2.0, 0.01 * math.sqrt(a * b)), rel=1e-14)
    assert pred.lambda_min == pred.lambda_max.conjugate()
    assert pred.unshifted == 0
    rep = verify_prediction(inp, GRID)
    assert rep.mode == "degenerate"
    assert math.isinf(rep.slope)  # prediction exact: residuals at rounding level


def test_degenerate_three_site_example():
    # cluster {0, 1} with |A01 A10| = 6 gives the pair at +- eps sqrt(6)
    A = np.array([[0.0, 2.0, 1.0], [-3.0, 0.0, -1.0], [-1.0, 1.0, 0.0]])
    eps = 1e-3
    inp = PerturbationInput(d=[-2.0, -2.0, -5.0], A=A, eps=eps)
    pred = predict_degenerate(inp)
    assert pred.lambda_max.imag == pytest.approx(eps * math.sqrt(6.0), rel=1e-12)
    # cross terms: A02 A20 = -1 against d[2], A12 A21 = -1 against d[2]
    want_real = -2.0 + eps * eps / 2.0 * ((-1.0) / 3.0 + (-1.0) / 3.0)
    assert pred.lambda_max.real == pytest.approx(want_real, rel=1e-12)

    out = verify_prediction(inp, GRID)
    assert out.mode == "degenerate"
    assert out.slope >= 1.7


def test_degenerate_cluster_of_three_third_member_tracks_block():
    d = np.array([-4.0, -4.0, -4.0, -1.0])
    A = _antagonistic(4, 33)
    inp = PerturbationInput(d=d, A=A, eps=1e-3)
    pred = predict_degenerate(inp, side="min")
    assert pred.unshifted == 1
    # 3-cycle products give the 3x3 cluster block a nonzero determinant, so
    # its third eigenvalue is a small real number r; the third cluster member
    # drifts by eps * |r| while the pair flies off at eps * sqrt(pair_sum)
    block_eigs = np.linalg.eigvals(A[:3, :3])
    r = float(block_eigs[np.abs(block_eigs.imag) < 1e-12].real[0])
    assert abs(r) > 1e-3

    def closest(eps):
        lam = eigenvalues(np.diag(d) + eps * A).eigenvalues
        cluster = lam[np.abs(lam.real - (-4.0)) < 0.5]
        assert len(cluster) == 3
        return float(np.min(np.abs(cluster - (-4.0))))

    for eps in (1e-3, 1e-4):
        assert abs(closest(eps) - eps * abs(r)) <= 2.0 * eps * eps
    # drift stays far below the pair displacement at the same eps
    assert closest(inp.eps) <= 0.1 * pred.lambda_max.imag
    lam = eigenvalues(np.diag(d) + inp.eps * A).eigenvalues
    cluster = lam[np.abs(lam.real - (-4.0)) < 0.5]
    top = np.max(np.abs(cluster.imag))
    assert top == pytest.approx(pred.lambda_max.imag, rel=0.05)


def test_degenerate_max_side():
    d = np.array([-9.0, -2.0, -2.0])
    A = _antagonistic(3, 34)
    pred = predict_degenerate(PerturbationInput(d=d, A=A, eps=1e-2), side="auto")
    assert pred.lambda_max.real == pytest.approx(-2.0, abs=1e-3)
    assert pred.lambda_max.imag > 0.0


def test_zero_coupling_is_exact():
    d = np.array([-7.0, -5.0, -3.0])
    inp = PerturbationInput(d=d, A=np.zeros((3, 3)), eps=1.0)
    pred = predict_extremes(inp)
    assert (pred.lambda_max, pred.lambda_min) == (-3.0, -7.0)
    assert math.isinf(verify_prediction(inp, GRID).slope)


def test_perturbation_input_validation():
    with pytest.raises(InvalidSpecError):
        PerturbationInput(d=[-1.0, -2.0], A=np.zeros((3, 3)), eps=0.1)
    with pytest.raises(InvalidSpecError):
        PerturbationInput(d=[-1.0, -2.0], A=np.ones((2, 2)), eps=0.1)  # not antagonistic
    with pytest.raises(InvalidSpecError):
        PerturbationInput(d=[-1.0, math.nan], A=np.zeros((2, 2)), eps=0.1)


def test_wrong_regime_errors():
    A = _antagonistic(3, 35)
    with pytest.raises(DegenerateExtremesError):
        predict_extremes(PerturbationInput(d=[-2.0, -2.0, -1.0], A=A, eps=0.1))
    with pytest.raises(NotDegenerateError):
        predict_degenerate(PerturbationInput(d=[-3.0, -2.0, -1.0], A=A, eps=0.1))
    with pytest.raises(InvalidSpecError):
        predict_degenerate(PerturbationInput(d=[-2.0, -2.0, -1.0], A=A, eps=0.1), side="left")


def test_eps_grid_validation():
    inp = PerturbationInput(d=[-1.0, -4.0], A=[[0.0, 2.0], [-3.0, 0.0]], eps=0.1)
    with pytest.raises(InvalidSpecError):
        verify_prediction(inp, [0.1, 0.2])  # not decreasing
    with pytest.raises(InvalidSpecError):
        verify_prediction(inp, [0.1, -0.01])
    with pytest.raises(InvalidSpecError):
        verify_prediction(inp, [])


def test_report_csv_round_trip():
    inp = PerturbationInput(d=[-1.0, -4.0], A=[[0.0, 2.0], [-3.0, 0.0]], eps=1.0)
    rep = verify_prediction(inp, GRID)
    lines = report_to_csv(rep).strip().split("\n")
    assert lines[0] == "eps,residual_max,residual_min,slope"
    assert len(lines) == 1 + len(GRID)
    eps0, rmax0, rmin0, slope0 = lines[1].split(",")
    assert float(eps0) == GRID[0]
    assert float(rmax0) == rep.residual_max[0]
    assert float(slope0) == rep.slope
