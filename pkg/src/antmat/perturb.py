"""Perturbative predictions for the extreme eigenvalues of D + eps * A.

D is real diagonal and A antagonistic.  With nondegenerate extremes the
extremal eigenvalues stay real and move inward by O(eps^2) with error
O(eps^3); a degenerate extreme cluster instead sends a conjugate pair off the
real axis at first order.  The remaining cluster members move at first order
too, but only by the residual real eigenvalues of the cluster coupling block:
exactly zero for a size-2 cluster, and small for larger clusters whenever the
3-cycle products inside the block are weak.  ``verify_prediction`` measures
the pair claims against full eigensolves by fitting the log-log slope of the
residuals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateExtremesError, InvalidSpecError, NotDegenerateError
from .matgen import is_antagonistic
from .spectral import eigenvalues

__all__ = [
    "TIE_TOL_REL",
    "PerturbationInput",
    "PerturbationPrediction",
    "ResidualReport",
    "predict_extremes",
    "predict_degenerate",
    "verify_prediction",
    "report_to_csv",
]

# |d_i - d_j| <= TIE_TOL_REL * (1 + max|d|) groups diagonal values into clusters
TIE_TOL_REL = 1e-9

# a fitted slope is meaningless below this floor; predictions are exact there
EXACT_FLOOR = 1e-12


@dataclass(frozen=True)
class PerturbationInput:
    d: np.ndarray
    A: np.ndarray
    eps: float

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float).reshape(-1)
        A = np.asarray(self.A, dtype=float)
        if A.shape != (len(d), len(d)):
            raise InvalidSpecError(f"A must be {len(d)} x {len(d)}, got {A.shape}")
        if not (np.all(np.isfinite(d)) and math.isfinite(float(self.eps))):
            raise InvalidSpecError("diagonal and eps must be finite")
        if not is_antagonistic(A):
            raise InvalidSpecError("perturbation matrix must be antagonistic")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "A", A)

    def tie_tol(self) -> float:
        return TIE_TOL_REL * (1.0 + float(np.max(np.abs(self.d))))


@dataclass(frozen=True)
class PerturbationPrediction:
    """Predicted extremes; complex conjugate pair in the degenerate case.

    ``order`` is the power of eps at which the prediction error enters:
    3 for nondegenerate extremes, 2 for the degenerate pair.  ``unshifted``
    counts the h - 2 cluster members outside the pair (degenerate case only);
    they move only by the leftover real eigenvalues of the cluster block,
    which vanish for h = 2.
    """

    lambda_max: complex
    lambda_min: complex
    strip: tuple
    order: int
    unshifted: int = 0


def _extreme_clusters(inp: PerturbationInput):
    """Indices tied with the minimum and with the maximum, under the tie tolerance."""
    tol = inp.tie_tol()
    d = inp.d
    lo = np.flatnonzero(d <= np.min(d) + tol)
    hi = np.flatnonzero(d >= np.max(d) - tol)
    return lo, hi


def predict_extremes(inp: PerturbationInput) -> PerturbationPrediction:
    """Second-order inward shift of both extremes (nondegenerate case).

    lambda_max = d_M - eps^2 * sum_j |A_Mj A_jM| / (d_M - d_j) and the mirror
    formula at the minimum; both predictions are real and strictly inside
    (d_m, d_M) whenever the relevant row pairs are not all zero.
    """
    lo, hi = _extreme_clusters(inp)
    if len(lo) > 1 or len(hi) > 1:
        raise DegenerateExtremesError(
            f"extremes are degenerate (min x{len(lo)}, max x{len(hi)}); use predict_degenerate"
        )
    d, A, eps = inp.d, inp.A, inp.eps
    M, m = int(hi[0]), int(lo[0])
    prod = A * A.T  # prod[i, j] = A_ij * A_ji <= 0
    shift_max = sum(abs(prod[M, j]) / (d[M] - d[j]) for j in range(len(d)) if j != M)
    shift_min = sum(abs(prod[m, j]) / (d[j] - d[m]) for j in range(len(d)) if j != m)
    gap = d[M] - d[m]
    if gap > 0.0:
        strip = (
            d[m] + eps * eps * float(np.sum(np.abs(prod[m]))) / gap,
            d[M] - eps * eps * float(np.sum(np.abs(prod[M]))) / gap,
        )
    else:  # n = 1: no strip to speak of
        strip = (d[m], d[M])
    return PerturbationPrediction(
        lambda_max=d[M] - eps * eps * shift_max,
        lambda_min=d[m] + eps * eps * shift_min,
        strip=strip,
        order=3,
    )


def predict_degenerate(inp: PerturbationInput, side: str = "auto") -> PerturbationPrediction:
    """Conjugate-pair prediction for a degenerate extreme cluster.

    The pair sits at ``d_ext +- i |eps|/sqrt(2) * sqrt(sum over the cluster of
    |A_ij A_ji|)`` plus a real O(eps^2) shift from cross terms, which always
    points inward.  The other ``h - 2`` cluster eigenvalues track the leftover
    real eigenvalues of the coupling block at first order: they are pinned for
    h = 2 and drift by eps times a typically small constant for h >= 3, where
    3-cycle products give the block a nonzero determinant.  The pair formula
    is first-order exact for h = 2; for h >= 3 it carries the same small
    block-eigenvalue error, so slope contracts should use size-2 clusters.
    """
    lo, hi = _extreme_clusters(inp)
    if side == "auto":
        side = "min" if len(lo) >= 2 else "max"
    if side not in ("min", "max"):
        raise InvalidSpecError(f"side must be 'min', 'max', or 'auto', got {side!r}")
    sigma = lo if side == "min" else hi
    if len(sigma) < 2:
        raise NotDegenerateError(f"the {side} diagonal value is not degenerate (cluster size {len(sigma)})")
    d, A, eps = inp.d, inp.A, inp.eps
    prod = A * A.T
    in_cluster = np.zeros(len(d), dtype=bool)
    in_cluster[sigma] = True
    d_ext = float(np.mean(d[sigma]))
    # ordered pairs inside the cluster; the 1/sqrt(2) undoes the double count
    pair_sum = float(np.sum(np.abs(prod[np.ix_(sigma, sigma)])))
    imag = abs(eps) / math.sqrt(2.0) * math.sqrt(pair_sum)
    cross = 0.0
    for i in sigma:
        for j in np.flatnonzero(~in_cluster):
            cross += prod[i, j] / (d_ext - d[j])
    real = d_ext + eps * eps / 2.0 * cross
    pair = (complex(real, imag), complex(real, -imag))
    if side == "min":
        strip = (real, float(np.max(d)))
    else:
        strip = (float(np.min(d)), real)
    return PerturbationPrediction(
        lambda_max=pair[0],
        lambda_min=pair[1],
        strip=strip,
        order=2,
        unshifted=len(sigma) - 2,
    )


@dataclass(frozen=True)
class ResidualReport:
    """Prediction-vs-eigensolve residuals over an eps grid, with fitted slope."""

    eps: tuple
    residual_max: tuple
    residual_min: tuple
    slope: float
    mode: str  # "nondegenerate" | "degenerate"


def _nearest(lam, target):
    return lam[int(np.argmin(np.abs(lam - target)))]


def verify_prediction(inp: PerturbationInput, eps_grid) -> ResidualReport:
    """Residuals of the perturbative prediction against full eigensolves.

    In the nondegenerate mode the residuals are distances of the predicted
    extremes to the nearest true eigenvalue (contract: slope >= 2.7); in the
    degenerate mode they are imaginary-part errors of the conjugate pair
    (contract: slope >= 1.7).  A grid where every residual is at rounding
    level reports ``slope = inf`` (the prediction is exact there).
    """
    eps_grid = [float(e) for e in eps_grid]
    if not eps_grid or any(e <= 0.0 for e in eps_grid):
        raise InvalidSpecError("eps grid must be positive")
    if any(a <= b for a, b in zip(eps_grid, eps_grid[1:])):
        raise InvalidSpecError("eps grid must be strictly decreasing")
    lo, hi = _extreme_clusters(inp)
    degenerate = len(lo) >= 2 or len(hi) >= 2
    r_max, r_min = [], []
    for eps in eps_grid:
        case = replace(inp, eps=eps)
        lam = eigenvalues(np.diag(inp.d) + eps * inp.A).eigenvalues
        if degenerate:
            pred = predict_degenerate(case)
            r_max.append(abs(_nearest(lam, pred.lambda_max).imag - pred.lambda_max.imag))
            r_min.append(abs(_nearest(lam, pred.lambda_min).imag - pred.lambda_min.imag))
        else:
            pred = predict_extremes(case)
            r_max.append(abs(_nearest(lam, pred.lambda_max) - pred.lambda_max))
            r_min.append(abs(_nearest(lam, pred.lambda_min) - pred.lambda_min))
    worst = np.maximum(r_max, r_min)
    if np.max(worst) < EXACT_FLOOR:
        slope = math.inf
    else:
        slope = float(np.polyfit(np.log(eps_grid), np.log(np.maximum(worst, 1e-300)), 1)[0])
    return ResidualReport(
        eps=tuple(eps_grid),
        residual_max=tuple(float(r) for r in r_max),
        residual_min=tuple(float(r) for r in r_min),
        slope=slope,
        mode="degenerate" if degenerate else "nondegenerate",
    )


def report_to_csv(r: ResidualReport) -> str:
    """CSV with columns eps,residual_max,residual_min,slope (slope repeated per row)."""
    lines = ["eps,residual_max,residual_min,slope"]
    for e, rmx, rmn in zip(r.eps, r.residual_max, r.residual_min):
        lines.append(f"{e!r},{rmx!r},{rmn!r},{r.slope!r}")
    return "\n".join(lines) + "\n"
