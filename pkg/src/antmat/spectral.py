"""Eigenvalues of real nonsymmetric matrices, containment boxes, stability reports.

The dense nonsymmetric eigensolve is delegated to LAPACK (balance, Hessenberg
reduction, implicitly shifted QR); this module wraps it behind a deterministic
ordering and consistency checks so downstream code can treat it as exact up to
a stated residual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptySpectrumError, NumericalError

__all__ = [
    "Spectrum",
    "BendixsonBox",
    "StabilityReport",
    "Histogram",
    "eigenvalues",
    "bendixson_box",
    "stability_report",
    "esd_histogram",
    "spectrum_to_csv",
    "histogram_to_csv",
]

# Trace-vs-eigenvalue-sum agreement demanded of every solve, relative to 1+||M||_F.
CONSISTENCY_TOL = 1e-8


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue multiset, sorted lexicographically by (Re, Im).

    ``residual`` is the normalized trace-consistency error
    ``|sum(eigenvalues) - trace| / (1 + ||M||_F)``, a cheap backward-error
    proxy that is checked against ``CONSISTENCY_TOL`` at construction time.
    """

    eigenvalues: np.ndarray
    residual: float

    @property
    def n(self) -> int:
        return len(self.eigenvalues)


def _lexsort(lam):
    return lam[np.lexsort((lam.imag, lam.real))]


def eigenvalues(M) -> Spectrum:
    """Compute the spectrum of a real square matrix with deterministic ordering."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NumericalError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NumericalError("matrix has non-finite entries")
    try:
        lam = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed to converge: {exc}") from exc
    lam = _lexsort(lam)
    scale = 1.0 + float(np.linalg.norm(M))
    residual = abs(complex(np.sum(lam)) - complex(np.trace(M))) / scale
    if residual > CONSISTENCY_TOL:
        raise NumericalError(
            f"eigenvalue sum disagrees with trace: residual {residual:.3e} > {CONSISTENCY_TOL:.0e}"
        )
    lam.setflags(write=False)
    return Spectrum(eigenvalues=lam, residual=residual)


@dataclass(frozen=True)
class BendixsonBox:
    """Rectangle containing the spectrum: real range of the symmetric part,
    imaginary range of the antisymmetric part (exactly symmetric about 0)."""

    re_lo: float
    re_hi: float
    im_lo: float
    im_hi: float

    def contains(self, lam, tol: float = 0.0) -> bool:
        lam = np.asarray(lam)
        return bool(
            np.all(lam.real >= self.re_lo - tol)
            and np.all(lam.real <= self.re_hi + tol)
            and np.all(lam.imag >= self.im_lo - tol)
            and np.all(lam.imag <= self.im_hi + tol)
        )


def bendixson_box(M) -> BendixsonBox:
    """Containment rectangle from symmetric-part and antisymmetric-part extremes.

    Both halves use the symmetric (Hermitian) eigensolver path: the symmetric
    part directly, the antisymmetric part K as the Hermitian matrix iK whose
    spectrum is the imaginary range.  ``im_lo = -im_hi`` exactly.
    """
    M = np.asarray(M, dtype=float)
    sym = (M + M.T) / 2.0
    skew = (M - M.T) / 2.0
    ws = np.linalg.eigvalsh(sym)
    wk = np.linalg.eigvalsh(1j * skew)
    im_hi = float(np.max(np.abs(wk))) if len(wk) else 0.0
    return BendixsonBox(re_lo=float(ws[0]), re_hi=float(ws[-1]), im_lo=-im_hi, im_hi=im_hi)


@dataclass(frozen=True)
class StabilityReport:
    spectral_abscissa: float
    stable: bool
    fraction_stable: float
    extreme_real: tuple

    def to_json(self) -> dict:
        return {
            "spectral_abscissa": self.spectral_abscissa,
            "stable": self.stable,
            "fraction_stable": self.fraction_stable,
            "extreme_real": list(self.extreme_real),
        }


def stability_report(s: Spectrum) -> StabilityReport:
    """Linear-stability summary: abscissa, stability flag, stable fraction, real range."""
    lam = np.asarray(s.eigenvalues)
    if len(lam) == 0:
        raise EmptySpectrumError("stability report needs at least one eigenvalue")
    re = lam.real
    abscissa = float(np.max(re))
    return StabilityReport(
        spectral_abscissa=abscissa,
        stable=bool(abscissa < 0.0),
        fraction_stable=float(np.mean(re < 0.0)),
        extreme_real=(float(np.min(re)), abscissa),
    )


@dataclass(frozen=True)
class Histogram:
    """2-D eigenvalue counts over the spectrum's bounding box."""

    re_centers: np.ndarray
    im_centers: np.ndarray
    counts: np.ndarray  # shape (re_bins, im_bins), sums to n


def esd_histogram(s: Spectrum, re_bins: int, im_bins: int) -> Histogram:
    """Bin the spectrum on a re_bins x im_bins grid covering its bounding box."""
    if re_bins < 1 or im_bins < 1:
        raise EmptySpectrumError(f"bin counts must be >= 1, got {re_bins} x {im_bins}")
    lam = np.asarray(s.eigenvalues)
    if len(lam) == 0:
        raise EmptySpectrumError("histogram needs at least one eigenvalue")
    x, y = lam.real, lam.imag

    def _range(v):
        lo, hi = float(np.min(v)), float(np.max(v))
        if lo == hi:  # degenerate box: pad so the single column has width
            lo, hi = lo - 0.5, hi + 0.5
        return lo, hi

    (xlo, xhi), (ylo, yhi) = _range(x), _range(y)
    counts, xe, ye = np.histogram2d(x, y, bins=[re_bins, im_bins], range=[[xlo, xhi], [ylo, yhi]])
    return Histogram(
        re_centers=(xe[:-1] + xe[1:]) / 2.0,
        im_centers=(ye[:-1] + ye[1:]) / 2.0,
        counts=counts.astype(int),
    )


def spectrum_to_csv(s: Spectrum) -> str:
    """CSV with columns index,re,im; floats use repr for byte-stable round-trips."""
    lines = ["index,re,im"]
    for i, z in enumerate(s.eigenvalues):
        lines.append(f"{i},{float(z.real)!r},{float(z.imag)!r}")
    return "\n".join(lines) + "\n"


def histogram_to_csv(h: Histogram) -> str:
    """CSV with columns re_center,im_center,count, row-major over the grid."""
    lines = ["re_center,im_center,count"]
    for i, xc in enumerate(h.re_centers):
        for j, yc in enumerate(h.im_centers):
            lines.append(f"{float(xc)!r},{float(yc)!r},{int(h.counts[i, j])}")
    return "\n".join(lines) + "\n"
