"""Empirical law checks: elliptic eigenvalue clouds, dilute circular-law radius,
and strip/box width trends across matrix sizes.

The asymptotic statements are checked at desk scale: a cloud of n normalized
eigenvalues is compared against the limiting uniform-on-ellipse law through an
inside-fraction with a small inflation margin and a radial goodness-of-fit
statistic (uniform on the ellipse implies radius^2 uniform on [0, 1] after the
affine map to the unit disk).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpecError, ZeroVarianceError
from .matgen import (
    Antagonistic,
    DiagPlusAntagonistic,
    Dilute,
    EnsembleSpec,
    PairDensity,
    SmallSymBigAntisym,
    pair_moments,
    sample_matrix,
    scalar_moments,
)
from .spectral import Spectrum, eigenvalues

__all__ = [
    "EllipseModel",
    "FitReport",
    "RadiusCheck",
    "WidthTrend",
    "rho_from_density",
    "elliptic_fit",
    "normalized_spectrum",
    "ks_threshold",
    "circular_radius_check",
    "width_trend",
    "decaying_family",
    "sym_antisym_family",
    "widths_to_csv",
]

DEFAULT_ETA = 0.05        # ellipse inflation absorbing finite-n edge fluctuation
INSIDE_THRESHOLD = 0.97
KS_COEFF = 1.63           # asymptotic 1% one-sample level
KS_SLACK = 2.0
WIDTH_SLACK = 0.02        # allowed relative growth when asserting non-increase
RADIUS_QUANTILE = 0.99    # outlier-robust empirical radius


@dataclass(frozen=True)
class EllipseModel:
    """Limiting ellipse with semi-axes (1 + rho, 1 - rho) in normalized units."""

    rho: float

    def __post_init__(self):
        if not abs(self.rho) <= 1.0:
            raise InvalidSpecError(f"ellipse model needs |rho| <= 1, got {self.rho}")

    @property
    def semi_axes(self) -> tuple:
        return (1.0 + self.rho, 1.0 - self.rho)


@dataclass(frozen=True)
class FitReport:
    inside_fraction: float
    radial_ks: float
    n: int
    seed: int | None = None

    def to_json(self) -> dict:
        return {
            "inside_fraction": self.inside_fraction,
            "radial_ks": self.radial_ks,
            "n": self.n,
            "seed": self.seed,
        }


def rho_from_density(d: PairDensity, i: int = 0, k: int = 1) -> float:
    """Pair correlation after unit-variance normalization: E[xy] / E[x^2].

    This is the ellipse parameter of the limiting spectral law for the
    corresponding i.i.d.-pair ensemble; it lies in [-1, 0] for every
    antagonistic pair density.
    """
    m = pair_moments(d, i, k)
    if m.var <= 0.0:
        raise ZeroVarianceError(f"density {d.kind!r} has zero marginal variance")
    return -m.theta / m.var


def ks_threshold(n: int) -> float:
    """Acceptance threshold for the radial statistic at cloud size n."""
    return KS_SLACK * KS_COEFF / math.sqrt(n)


def _ks_uniform(u) -> float:
    # two-sided sup distance between the ECDF of u and the uniform[0,1] CDF
    u = np.sort(np.clip(u, 0.0, 1.0))
    n = len(u)
    grid_hi = np.arange(1, n + 1) / n
    grid_lo = np.arange(0, n) / n
    return float(max(np.max(grid_hi - u), np.max(u - grid_lo)))


def elliptic_fit(s: Spectrum, n: int, model: EllipseModel, eta: float = DEFAULT_ETA,
                 seed: int | None = None) -> FitReport:
    """Compare a normalized eigenvalue cloud against the uniform-ellipse law.

    ``inside_fraction`` uses the ellipse inflated by ``1 + eta``; the radial
    statistic maps points by (x/(1+rho), y/(1-rho)) to the unit disk, where
    uniformity makes radius^2 uniform on [0, 1].  A collapsed axis
    (rho = +-1) degrades gracefully: the cloud is projected onto the
    surviving axis and the radial statistic becomes a 1-D uniformity check.
    """
    lam = np.asarray(s.eigenvalues)
    if len(lam) == 0:
        raise InvalidSpecError("elliptic fit needs a nonempty spectrum")
    a, b = model.semi_axes
    x, y = lam.real, lam.imag
    if a == 0.0 or b == 0.0:
        proj = y / b if a == 0.0 else x / a
        inside = np.mean(np.abs(proj) <= 1.0 + eta)
        ks = _ks_uniform(np.abs(proj))
        return FitReport(float(inside), ks, n, seed)
    t = (x / a) ** 2 + (y / b) ** 2
    inside = np.mean(t <= (1.0 + eta) ** 2)
    return FitReport(float(inside), _ks_uniform(t), n, seed)


def normalized_spectrum(spec: EnsembleSpec, index: int = 0) -> Spectrum:
    """Spectrum of a sampled matrix rescaled to unit entry variance over sqrt(n).

    Antagonistic ensembles are divided by sigma * sqrt(n) (sigma^2 the marginal
    pair variance); the elliptic-gaussian composition is already scaled.
    """
    comp = spec.composition
    M = sample_matrix(spec, index)
    if isinstance(comp, Antagonistic):
        var = pair_moments(comp.pair).var
        if var <= 0.0:
            raise ZeroVarianceError("cannot normalize a zero-variance ensemble")
        M = M / (math.sqrt(var) * math.sqrt(spec.n))
    elif comp.kind == "elliptic-gaussian":
        pass  # entries are N(0, 1/n): nothing to do
    else:
        raise InvalidSpecError(f"no normalization rule for composition {comp.kind!r}")
    return eigenvalues(M)


@dataclass(frozen=True)
class RadiusCheck:
    empirical: float
    predicted: float
    ratio: float

    def to_json(self) -> dict:
        return {"empirical": self.empirical, "predicted": self.predicted, "ratio": self.ratio}


def circular_radius_check(spec: EnsembleSpec) -> RadiusCheck:
    """Empirical 0.99-quantile radius of a dilute draw against sigma*sqrt(n*q)."""
    comp = spec.composition
    if not isinstance(comp, Dilute):
        raise InvalidSpecError("circular radius check is defined for the dilute composition")
    sigma = math.sqrt(scalar_moments(comp.entry)[1])
    predicted = sigma * math.sqrt(spec.n * comp.q)
    lam = eigenvalues(sample_matrix(spec)).eigenvalues
    empirical = float(np.quantile(np.abs(lam), RADIUS_QUANTILE))
    ratio = empirical / predicted if predicted > 0.0 else math.nan
    return RadiusCheck(empirical=empirical, predicted=predicted, ratio=ratio)


@dataclass(frozen=True)
class WidthTrend:
    """Horizontal spectral widths (max Re - min Re) per size and seed."""

    rows: tuple              # of (n, seed, width)
    mean_widths: tuple       # of (n, mean width over seeds)
    non_increasing: bool     # successive means within the relative slack

    def mean_width(self, n: int) -> float:
        for size, w in self.mean_widths:
            if size == n:
                return w
        raise KeyError(n)


def width_trend(make_spec, n_list, seeds) -> WidthTrend:
    """Measure spectral widths over an increasing n-list, averaged over seeds.

    ``make_spec(n, seed)`` builds the ensemble spec for one cell.  The trend
    is declared non-increasing when each successive mean width is at most
    ``1 + WIDTH_SLACK`` times the previous one.
    """
    n_list = list(n_list)
    if any(a >= b for a, b in zip(n_list, n_list[1:])):
        raise InvalidSpecError("n list must be strictly increasing")
    rows = []
    means = []
    for n in n_list:
        ws = []
        for seed in seeds:
            lam = eigenvalues(sample_matrix(make_spec(n, seed))).eigenvalues
            w = float(np.max(lam.real) - np.min(lam.real))
            rows.append((n, seed, w))
            ws.append(w)
        means.append((n, float(np.mean(ws))))
    ok = all(b <= a * (1.0 + WIDTH_SLACK) for (_, a), (_, b) in zip(means, means[1:]))
    return WidthTrend(rows=tuple(rows), mean_widths=tuple(means), non_increasing=ok)


def decaying_family(c: float, p: float, diag=None):
    """Spec family for the distance-decaying antagonistic ensemble, optionally
    shifted by a random diagonal."""
    pair = PairDensity("decaying-squares", c=c, p=p)

    def make(n, seed):
        comp = Antagonistic(pair) if diag is None else DiagPlusAntagonistic(diag, pair)
        return EnsembleSpec(n=n, composition=comp, seed=seed)

    return make


def sym_antisym_family(diag, sym, antisym):
    """Spec family for diag + sym/sqrt(n) + antisym compositions."""

    def make(n, seed):
        return EnsembleSpec(n=n, composition=SmallSymBigAntisym(diag, sym, antisym), seed=seed)

    return make


def widths_to_csv(t: WidthTrend) -> str:
    """CSV with columns n,seed,width."""
    lines = ["n,seed,width"]
    for n, seed, w in t.rows:
        lines.append(f"{n},{seed},{w!r}")
    return "\n".join(lines) + "\n"
