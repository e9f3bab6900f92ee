"""Exact combinatorics: Pfaffians, expected determinants, expected characteristic
polynomials of antagonistic ensembles, and Monte Carlo cross-validation.

The central object is the weighted complete graph with edge weights
``theta[i, j] = -E[M[i, j] * M[j, i]] >= 0``.  The expected characteristic
polynomial is the partial-matching generating polynomial of that graph,

    p(z) = z^n + z^(n-2) * sum(theta)
               + z^(n-4) * (sum over pairs of disjoint edges) + ...

and the expected determinant (even n) is its constant term, the
perfect-matching sum.  Two independent code paths compute these sums: a subset
dynamic program over vertex bitmasks (fast, capped at n = 24) and a recursive
enumeration of pairings (oracle, n <= 10).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import DimensionCapError, InvalidSpecError
from .matgen import TAG_MC, Antagonistic, EnsembleSpec, pair_moments, sample_batch, stream

__all__ = [
    "ThetaArray",
    "PolynomialInZ",
    "Estimate",
    "pfaffian",
    "matching_count",
    "expected_char_poly",
    "expected_char_poly_enum",
    "expected_char_poly_perm",
    "expected_det",
    "expected_pf_pft",
    "mc_expect",
    "determinant",
    "polynomial_to_csv",
]

PFAFFIAN_CAP = 14        # (n-1)!! terms; 13!! = 135135
CHAR_POLY_CAP = 24       # 2^n bitmask DP states
ENUM_CAP = 10            # oracle paths
MC_CHUNK = 4096          # trials per derived stream; fixed for determinism

MC_FUNCTIONALS = ("det", "pf-pft", "char-poly-at", "trace-square")


@dataclass(frozen=True)
class ThetaArray:
    """Upper-triangular array of pair weights ``theta[i, j] >= 0`` for i < j."""

    n: int
    values: np.ndarray  # (n, n); only i < j entries are read

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.n, self.n):
            raise InvalidSpecError(f"theta array must have shape ({self.n}, {self.n}), got {v.shape}")
        iu = np.triu_indices(self.n, 1)
        if not np.all(np.isfinite(v[iu])):
            raise InvalidSpecError("theta values must be finite")
        if np.any(v[iu] < 0.0):
            raise InvalidSpecError("theta values must be nonnegative (forced by antagonism)")
        object.__setattr__(self, "values", v)

    def get(self, i: int, j: int) -> float:
        if not 0 <= i < j < self.n:
            raise InvalidSpecError(f"theta is defined for 0 <= i < j < n, got ({i}, {j})")
        return float(self.values[i, j])

    @classmethod
    def constant(cls, n: int, theta: float) -> "ThetaArray":
        v = np.zeros((n, n))
        v[np.triu_indices(n, 1)] = theta
        return cls(n, v)

    @classmethod
    def from_spec(cls, spec: EnsembleSpec) -> "ThetaArray":
        """Pair weights of an antagonistic ensemble from closed-form moments."""
        if not isinstance(spec.composition, Antagonistic):
            raise InvalidSpecError("theta array is defined for the antagonistic composition")
        pair = spec.composition.pair
        v = np.zeros((spec.n, spec.n))
        for i in range(spec.n):
            for j in range(i + 1, spec.n):
                v[i, j] = pair_moments(pair, i, j).theta
        return cls(spec.n, v)


@dataclass(frozen=True)
class PolynomialInZ:
    """Real polynomial, ``coeffs[k]`` multiplying ``z^k``."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=float))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        # Horner in descending powers
        acc = 0.0
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc


@dataclass(frozen=True)
class Estimate:
    """Monte Carlo estimate with provenance; reproducible given (seed, trials)."""

    value: float
    stderr: float
    trials: int
    seed: int

    def to_json(self) -> dict:
        return {"value": self.value, "stderr": self.stderr, "trials": self.trials, "seed": self.seed}


# ---------------------------------------------------------------------------
# Pfaffian


def _pf_expand(M, idx):
    # expansion along the first remaining index; sign alternates per partner
    if not idx:
        return 1.0
    i = idx[0]
    terms = []
    for t in range(1, len(idx)):
        a = M[i][idx[t]]
        if a == 0.0:
            continue
        rest = idx[1:t] + idx[t + 1 :]
        terms.append((-1.0) ** (t - 1) * a * _pf_expand(M, rest))
    return math.fsum(terms)


def pfaffian(M) -> float:
    """Signed ordered-matching sum over the strict upper triangle of ``M``.

    Defined for any square matrix (only entries ``M[i, j]`` with ``i < j`` are
    read).  Odd dimensions give exactly 0.  For real antisymmetric ``A``,
    ``pfaffian(A)**2 == det(A)`` and ``pfaffian(A.T) == (-1)**(n//2) *
    pfaffian(A)``.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidSpecError(f"pfaffian needs a square matrix, got shape {M.shape}")
    n = M.shape[0]
    if n % 2 == 1:
        return 0.0
    if n > PFAFFIAN_CAP:
        raise DimensionCapError(f"pfaffian enumeration capped at n = {PFAFFIAN_CAP}, got {n}")
    return _pf_expand(M.tolist(), tuple(range(n)))


def matching_count(n: int) -> int:
    """Number of perfect matchings of n labeled vertices: (n-1)!!."""
    if n % 2 == 1 or n < 2:
        raise InvalidSpecError(f"matching count is defined for even n >= 2, got {n}")
    return math.prod(range(1, n, 2))


def _matching_table(n):
    """All ordered perfect matchings of 0..n-1 with their permutation signs."""
    out = []

    def rec(idx, acc, sign):
        if not idx:
            out.append((tuple(acc), sign))
            return
        i = idx[0]
        for t in range(1, len(idx)):
            rec(idx[1:t] + idx[t + 1 :], acc + [(i, idx[t])], sign * (-1) ** (t - 1))

    rec(tuple(range(n)), [], 1)
    return out


def _pf_batch(batch, table):
    # vectorized pfaffian over a (b, n, n) stack via a precomputed matching table
    acc = np.zeros(batch.shape[0])
    for pairs, sign in table:
        term = np.full(batch.shape[0], float(sign))
        for i, j in pairs:
            term = term * batch[:, i, j]
        acc += term
    return acc


# ---------------------------------------------------------------------------
# matching generating sums


class _Kahan:
    """Compensated accumulator; many same-sign terms, cheap insurance."""

    __slots__ = ("s", "c")

    def __init__(self):
        self.s = 0.0
        self.c = 0.0

    def add(self, x):
        y = x - self.c
        t = self.s + y
        self.c = (t - self.s) - y
        self.s = t


def expected_char_poly(t: ThetaArray) -> PolynomialInZ:
    """Expected characteristic polynomial as exact matching sums over ``theta``.

    Subset dynamic program: ``pm[mask]`` is the perfect-matching sum of the
    vertex subset ``mask`` (expanding the lowest set vertex), and the
    coefficient of ``z^(n-2k)`` accumulates ``pm`` over all masks of
    population ``2k``.  O(2^n * n) time, one float per mask.
    """
    n = t.n
    if n > CHAR_POLY_CAP:
        raise DimensionCapError(f"matching-sum DP capped at n = {CHAR_POLY_CAP}, got {n}")
    th = t.values
    pm = [0.0] * (1 << n)
    pm[0] = 1.0
    acc = [_Kahan() for _ in range(n // 2 + 1)]
    acc[0].add(1.0)
    for mask in range(1, 1 << n):
        pop = mask.bit_count()
        if pop % 2 == 1:
            continue
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        s = 0.0
        j_bits = rest
        while j_bits:
            j = (j_bits & -j_bits).bit_length() - 1
            j_bits &= j_bits - 1
            w = th[i, j]
            if w != 0.0:
                s += w * pm[rest & ~(1 << j)]
        pm[mask] = s
        acc[pop // 2].add(s)
    coeffs = np.zeros(n + 1)
    for k in range(n // 2 + 1):
        power = n - 2 * k
        coeffs[power] = acc[k].s
    return PolynomialInZ(coeffs)


def expected_char_poly_enum(t: ThetaArray) -> PolynomialInZ:
    """Oracle: direct recursive enumeration of partial matchings (n <= 10)."""
    n = t.n
    if n > ENUM_CAP:
        raise DimensionCapError(f"matching enumeration capped at n = {ENUM_CAP}, got {n}")
    th = t.values
    coeffs = [[] for _ in range(n // 2 + 1)]

    def rec_all(start, used, k, prod):
        # each partial matching counted once: scan vertices in order, the
        # current lowest unused vertex is matched to some later one or skipped
        if start == n:
            coeffs[k].append(prod)
            return
        if used[start]:
            rec_all(start + 1, used, k, prod)
            return
        rec_all(start + 1, used, k, prod)  # leave it single
        for j in range(start + 1, n):
            if not used[j]:
                used[j] = True
                rec_all(start + 1, used, k + 1, prod * th[start, j])
                used[j] = False

    rec_all(0, [False] * n, 0, 1.0)
    out = np.zeros(n + 1)
    for k, terms in enumerate(coeffs):
        if terms:
            out[n - 2 * k] = math.fsum(terms)
    return PolynomialInZ(out)


def expected_char_poly_perm(t: ThetaArray) -> PolynomialInZ:
    """Third path (n <= 6): expand E[det(zI - M)] over all n! permutations.

    Independence plus zero means kill every permutation that is not an
    involution; each 2-cycle (i, j) contributes a factor ``-theta[i, j]`` and
    the permutation sign cancels the minus signs, leaving positive matching
    sums.  Exhaustive and expensive by design.
    """
    from itertools import permutations

    n = t.n
    if n > 6:
        raise DimensionCapError(f"permutation expansion capped at n = 6, got {n}")
    th = t.values
    coeffs = [[] for _ in range(n + 1)]
    for sigma in permutations(range(n)):
        if any(sigma[sigma[i]] != i for i in range(n)):
            continue  # a cycle longer than 2 has an unpaired mean-zero factor
        fixed = sum(1 for i in range(n) if sigma[i] == i)
        cycles = [(i, sigma[i]) for i in range(n) if i < sigma[i]]
        sign = (-1.0) ** len(cycles)
        prod = sign  # sgn(sigma) for an involution with this many 2-cycles
        for i, j in cycles:
            prod *= -th[i, j]  # E[(-M_ij)(-M_ji)] = E[M_ij M_ji] = -theta
        coeffs[fixed].append(prod)
    out = np.zeros(n + 1)
    for power, terms in enumerate(coeffs):
        if terms:
            out[power] = math.fsum(terms)
    return PolynomialInZ(out)


def expected_det(t: ThetaArray) -> float:
    """Perfect-matching sum over ``theta`` (0 for odd n); the constant term of
    the expected characteristic polynomial."""
    if t.n % 2 == 1:
        return 0.0
    return float(expected_char_poly(t).coeffs[0])


def expected_pf_pft(t: ThetaArray) -> float:
    """Exact E[pf(A) * pf(A^T)] for an antagonistic ensemble with pair products
    ``theta``.

    Zero-mean independent pairs kill every off-diagonal matching product and
    the permutation signs square away, leaving sum over matchings of
    prod(-theta_ij).  Uses the explicit matching table, independent of the
    subset-DP route behind ``expected_det``.
    """
    if t.n % 2 == 1:
        return 0.0
    if t.n > PFAFFIAN_CAP:
        raise DimensionCapError(
            f"matching enumeration capped at n = {PFAFFIAN_CAP}, got {t.n}")
    terms = []
    for pairs, _sign in _matching_table(t.n):
        prod = 1.0
        for i, j in pairs:
            prod *= -t.get(i, j)
        terms.append(prod)
    return math.fsum(terms)


# ---------------------------------------------------------------------------
# Monte Carlo


def _functional_values(batch, functional, z, pf_table):
    if functional == "det":
        return np.linalg.det(batch)
    if functional == "trace-square":
        return np.einsum("bij,bji->b", batch, batch)
    if functional == "char-poly-at":
        n = batch.shape[1]
        return np.linalg.det(z * np.eye(n)[None, :, :] - batch)
    pf = _pf_batch(batch, pf_table)
    pft = _pf_batch(np.transpose(batch, (0, 2, 1)), pf_table)
    return pf * pft


def mc_expect(spec: EnsembleSpec, functional: str, trials: int, z: float | None = None,
              threads: int = 1) -> Estimate:
    """Monte Carlo mean of a spectral functional over independent ensemble draws.

    Functionals: ``det``, ``pf-pft`` (pfaffian times pfaffian-of-transpose),
    ``char-poly-at`` (det(zI - M), requires ``z``), ``trace-square`` (tr M^2).

    Trials are generated in fixed chunks of ``MC_CHUNK``, one derived stream
    per chunk, so the estimate is byte-identical for a given ``(spec.seed,
    trials)`` and independent of ``threads``.
    """
    if not isinstance(spec.composition, Antagonistic):
        raise InvalidSpecError("mc_expect is defined for antagonistic compositions")
    if functional not in MC_FUNCTIONALS:
        raise InvalidSpecError(f"unknown functional {functional!r}; expected one of {MC_FUNCTIONALS}")
    if trials < 2:
        raise InvalidSpecError(f"need trials >= 2 for a standard error, got {trials}")
    if functional == "char-poly-at":
        if z is None:
            raise InvalidSpecError("functional 'char-poly-at' requires z")
        z = float(z)
    pf_table = None
    if functional == "pf-pft":
        if spec.n > ENUM_CAP:
            raise DimensionCapError(f"pf-pft sampling capped at n = {ENUM_CAP}, got {spec.n}")
        if spec.n % 2 == 0:
            pf_table = _matching_table(spec.n)
        else:
            pf_table = []  # odd n: pfaffian is identically 0, still computable

    chunks = [(idx, min(MC_CHUNK, trials - idx * MC_CHUNK))
              for idx in range((trials + MC_CHUNK - 1) // MC_CHUNK)]

    def run(chunk):
        idx, count = chunk
        rng = stream(spec.seed, TAG_MC, idx)
        batch = sample_batch(spec, rng, count)
        vals = np.asarray(_functional_values(batch, functional, z, pf_table), dtype=float)
        return math.fsum(vals.tolist()), math.fsum((vals * vals).tolist())

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, chunks))  # order follows chunk index
    else:
        parts = [run(c) for c in chunks]
    s1 = math.fsum(p[0] for p in parts)
    s2 = math.fsum(p[1] for p in parts)
    mean = s1 / trials
    var = max(0.0, (s2 - s1 * s1 / trials) / (trials - 1))
    return Estimate(value=mean, stderr=math.sqrt(var / trials), trials=trials, seed=spec.seed)


def determinant(M) -> float:
    """Determinant via LU with partial pivoting (delegated to LAPACK)."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidSpecError(f"determinant needs a square matrix, got shape {M.shape}")
    return float(np.linalg.det(M))


def polynomial_to_csv(p: PolynomialInZ) -> str:
    """CSV with columns power,coefficient in ascending powers."""
    lines = ["power,coefficient"]
    for k, c in enumerate(p.coeffs):
        lines.append(f"{k},{float(c)!r}")
    return "\n".join(lines) + "\n"
