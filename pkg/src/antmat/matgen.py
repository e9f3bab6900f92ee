"""Pair densities, scalar densities, and samplers for every matrix ensemble.

All randomness flows through counter-based Philox streams derived from a master
seed, so sampling is reproducible and order-independent across matrices and
worker threads.  The derivation key is ``(master seed, purpose tag, index)``;
within one matrix the entries are filled in a fixed, documented order, which
makes ``sample_matrix`` a pure function of the spec.

Pair densities describe the joint law of an off-diagonal pair ``(M[i, j],
M[j, i])`` with ``x * y <= 0`` always (antagonism); scalar densities describe
diagonal or single-entry laws.  Both carry closed-form moments used by the
exact-expectation and law-fitting layers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import ClassVar, NamedTuple

import numpy as np

from .errors import InvalidSpecError, SingularDiagonalError

__all__ = [
    "PairDensity",
    "ScalarDensity",
    "PairMoments",
    "EnsembleSpec",
    "Antagonistic",
    "Antisymmetric",
    "DiagPlusAntisym",
    "DiagPlusAntagonistic",
    "EllipticGaussian",
    "Dilute",
    "SmallSymBigAntisym",
    "stream",
    "sample_pair",
    "pair_moments",
    "scalar_moments",
    "sample_matrix",
    "sample_batch",
    "is_antagonistic",
    "closure_transform",
    "haar_orthogonal",
    "spec_to_json",
    "spec_from_json",
]

# Purpose tags for stream derivation.  Frozen: changing them changes every
# sampled matrix for a given seed.
TAG_MATRIX = 0
TAG_MC = 1
TAG_HAAR = 2


def stream(seed, *key):
    """Derive an independent Philox generator from ``seed`` and an integer key path.

    Streams with distinct key paths are statistically independent, so callers
    may consume them concurrently in any order without affecting results.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


# ---------------------------------------------------------------------------
# densities


class PairMoments(NamedTuple):
    mean: float
    var: float
    fourth: float
    theta: float


_PAIR_PARAMS = {
    "gaussian-antagonistic": (),
    "uniform-antagonistic": (),
    "two-interval": ("w",),
    "decaying-squares": ("c", "p"),
    "gap-uniform": ("lo", "hi"),
}

_SCALAR_PARAMS = {
    "uniform": ("a", "b"),
    "gaussian": ("mean", "variance"),
    "two-interval-uniform": ("w",),
    "point": ("v",),
    "gap-uniform": ("lo", "hi"),
}


def _check_params(obj, table):
    kind = obj.kind
    if kind not in table:
        raise InvalidSpecError(
            f"unknown density kind {kind!r}; expected one of {sorted(table)}"
        )
    wanted = table[kind]
    for f in fields(obj):
        if f.name == "kind":
            continue
        val = getattr(obj, f.name)
        if f.name in wanted:
            if val is None:
                raise InvalidSpecError(f"density {kind!r} requires parameter {f.name!r}")
            if not math.isfinite(float(val)):
                raise InvalidSpecError(f"density {kind!r}: parameter {f.name!r} must be finite")
        elif val is not None:
            raise InvalidSpecError(f"density {kind!r} does not take parameter {f.name!r}")


@dataclass(frozen=True)
class PairDensity:
    """Joint law of one off-diagonal pair, supported on ``{x * y <= 0}``.

    Kinds
    -----
    ``gaussian-antagonistic``
        Density ``(1/pi) exp(-(x^2+y^2)/2)`` restricted to opposite-sign
        quadrants; standard-normal marginals.
    ``uniform-antagonistic``
        Uniform mass 1/2 on ``(0,1) x (-1,0)`` and 1/2 on ``(-1,0) x (0,1)``;
        uniform(-1,1) marginals.
    ``two-interval(w)``
        Magnitudes independent uniform on ``(1-w, 1+w)``, opposite signs,
        random orientation; marginal support on two symmetric intervals.
    ``decaying-squares(c, p)``
        Uniform on ``(1, 1+d) x (-1-d, -1)`` and its mirror, each with mass
        1/2 (normalization ``1/(2 d^2)``), where ``d = c / (1 + gap^p)`` and
        ``gap = k - i`` is the distance of the pair from the diagonal.  Far
        pairs approach exact antisymmetry.
    ``gap-uniform(lo, hi)``
        Exactly antisymmetric pair ``(a, -a)`` with ``|a|`` uniform on
        ``(lo, hi)`` and random sign.
    """

    kind: str
    w: float | None = None
    c: float | None = None
    p: float | None = None
    lo: float | None = None
    hi: float | None = None

    def __post_init__(self):
        _check_params(self, _PAIR_PARAMS)
        if self.kind == "two-interval" and not 0.0 < self.w < 1.0:
            raise InvalidSpecError(f"two-interval: w must be in (0, 1), got {self.w}")
        if self.kind == "decaying-squares" and (self.c <= 0.0 or self.p <= 0.0):
            raise InvalidSpecError(f"decaying-squares: need c > 0 and p > 0, got c={self.c}, p={self.p}")
        if self.kind == "gap-uniform" and not 0.0 < self.lo < self.hi:
            raise InvalidSpecError(f"gap-uniform: need 0 < lo < hi, got lo={self.lo}, hi={self.hi}")


@dataclass(frozen=True)
class ScalarDensity:
    """Law of a single real entry (diagonal, symmetric, or antisymmetric part).

    Kinds: ``uniform(a, b)``, ``gaussian(mean, variance)``,
    ``two-interval-uniform(w)`` (centers +-1, half-width ``w``), ``point(v)``,
    and ``gap-uniform(lo, hi)`` (sign * uniform(lo, hi), so ``|x| >= lo``).
    """

    kind: str
    a: float | None = None
    b: float | None = None
    mean: float | None = None
    variance: float | None = None
    w: float | None = None
    v: float | None = None
    lo: float | None = None
    hi: float | None = None

    def __post_init__(self):
        _check_params(self, _SCALAR_PARAMS)
        if self.kind == "uniform" and not self.a < self.b:
            raise InvalidSpecError(f"uniform: need a < b, got a={self.a}, b={self.b}")
        if self.kind == "gaussian" and self.variance < 0.0:
            raise InvalidSpecError(f"gaussian: variance must be >= 0, got {self.variance}")
        if self.kind == "two-interval-uniform" and not 0.0 < self.w < 1.0:
            raise InvalidSpecError(f"two-interval-uniform: w must be in (0, 1), got {self.w}")
        if self.kind == "gap-uniform" and not 0.0 < self.lo < self.hi:
            raise InvalidSpecError(f"gap-uniform: need 0 < lo < hi, got lo={self.lo}, hi={self.hi}")

    @property
    def support(self):
        """Closed interval(s) containing all samples, as a list of (lo, hi)."""
        if self.kind == "uniform":
            return [(self.a, self.b)]
        if self.kind == "gaussian":
            return [(-math.inf, math.inf)]
        if self.kind == "two-interval-uniform":
            return [(-1.0 - self.w, -1.0 + self.w), (1.0 - self.w, 1.0 + self.w)]
        if self.kind == "point":
            return [(self.v, self.v)]
        return [(-self.hi, -self.lo), (self.lo, self.hi)]


def _delta(d: PairDensity, gap):
    # decaying-squares half-side; gap = k - i >= 1
    return d.c / (1.0 + np.asarray(gap, dtype=float) ** d.p)


def pair_moments(d: PairDensity, i: int = 0, k: int = 1) -> PairMoments:
    """Closed-form marginal moments and ``theta = -E[x y]`` of a pair density.

    ``(i, k)`` matter only for ``decaying-squares``, whose square size depends
    on the distance ``k - i`` from the diagonal.
    """
    if d.kind == "decaying-squares" and not k > i:
        raise InvalidSpecError(f"decaying-squares: need k > i, got i={i}, k={k}")
    if d.kind == "gaussian-antagonistic":
        return PairMoments(0.0, 1.0, 3.0, 2.0 / math.pi)
    if d.kind == "uniform-antagonistic":
        return PairMoments(0.0, 1.0 / 3.0, 1.0 / 5.0, 0.25)
    if d.kind == "two-interval":
        w = d.w
        return PairMoments(0.0, 1.0 + w * w / 3.0, 1.0 + 2.0 * w * w + w ** 4 / 5.0, 1.0)
    if d.kind == "decaying-squares":
        dl = float(_delta(d, k - i))
        var = 1.0 + dl + dl * dl / 3.0          # E[u^2], u ~ U(1, 1+d)
        fourth = ((1.0 + dl) ** 5 - 1.0) / (5.0 * dl)
        theta = (1.0 + dl / 2.0) ** 2           # E[u] E[v] with independent magnitudes
        return PairMoments(0.0, var, fourth, theta)
    lo, hi = d.lo, d.hi                          # gap-uniform: y = -x exactly
    var = (hi ** 3 - lo ** 3) / (3.0 * (hi - lo))
    fourth = (hi ** 5 - lo ** 5) / (5.0 * (hi - lo))
    return PairMoments(0.0, var, fourth, var)


def scalar_moments(d: ScalarDensity):
    """Return ``(mean, var)`` of a scalar density in closed form."""
    if d.kind == "uniform":
        return ((d.a + d.b) / 2.0, (d.b - d.a) ** 2 / 12.0)
    if d.kind == "gaussian":
        return (d.mean, d.variance)
    if d.kind == "two-interval-uniform":
        return (0.0, 1.0 + d.w * d.w / 3.0)
    if d.kind == "point":
        return (d.v, 0.0)
    lo, hi = d.lo, d.hi
    return (0.0, (hi ** 3 - lo ** 3) / (3.0 * (hi - lo)))


def _sample_pair_arrays(d: PairDensity, gaps, rng, count):
    """Vectorized pair draws: returns (x, y) of shape (count, len(gaps)).

    Draw order is fixed: magnitudes u then v (or the single magnitude a for
    gap-uniform), then the orientation signs.  x is the upper-triangle entry.
    """
    m = len(gaps)
    shape = (count, m)
    if d.kind == "gaussian-antagonistic":
        u = np.abs(rng.standard_normal(shape))
        v = np.abs(rng.standard_normal(shape))
    elif d.kind == "uniform-antagonistic":
        u = rng.uniform(0.0, 1.0, shape)
        v = rng.uniform(0.0, 1.0, shape)
    elif d.kind == "two-interval":
        u = rng.uniform(1.0 - d.w, 1.0 + d.w, shape)
        v = rng.uniform(1.0 - d.w, 1.0 + d.w, shape)
    elif d.kind == "decaying-squares":
        hi = 1.0 + np.broadcast_to(_delta(d, gaps), shape)
        u = rng.uniform(1.0, hi)
        v = rng.uniform(1.0, hi)
    else:  # gap-uniform: exactly antisymmetric pair
        u = rng.uniform(d.lo, d.hi, shape)
        v = u
    s = rng.integers(0, 2, shape) * 2 - 1
    return s * u, -s * v


def _sample_scalar_array(d: ScalarDensity, rng, shape):
    """Vectorized scalar draws; the signed kinds draw magnitude then sign."""
    if d.kind == "uniform":
        return rng.uniform(d.a, d.b, shape)
    if d.kind == "gaussian":
        return d.mean + math.sqrt(d.variance) * rng.standard_normal(shape)
    if d.kind == "two-interval-uniform":
        u = rng.uniform(1.0 - d.w, 1.0 + d.w, shape)
        return (rng.integers(0, 2, shape) * 2 - 1) * u
    if d.kind == "point":
        return np.full(shape, float(d.v))
    u = rng.uniform(d.lo, d.hi, shape)
    return (rng.integers(0, 2, shape) * 2 - 1) * u


def sample_pair(d: PairDensity, rng, i: int = 0, k: int = 1):
    """Draw one pair ``(x, y)`` with ``x * y <= 0`` from the given stream."""
    if d.kind == "decaying-squares" and not k > i:
        raise InvalidSpecError(f"decaying-squares: need k > i, got i={i}, k={k}")
    x, y = _sample_pair_arrays(d, np.array([k - i]), rng, 1)
    return float(x[0, 0]), float(y[0, 0])


# ---------------------------------------------------------------------------
# ensemble specs


class Composition:
    """Base for composition rules; subclasses carry the per-rule densities."""

    kind: ClassVar[str]


@dataclass(frozen=True)
class Antagonistic(Composition):
    kind: ClassVar[str] = "antagonistic"
    pair: PairDensity


@dataclass(frozen=True)
class Antisymmetric(Composition):
    kind: ClassVar[str] = "antisymmetric"
    entry: ScalarDensity


@dataclass(frozen=True)
class DiagPlusAntisym(Composition):
    kind: ClassVar[str] = "diag-plus-antisym"
    diag: ScalarDensity
    antisym: ScalarDensity
    g: float = 1.0

    def __post_init__(self):
        if not math.isfinite(float(self.g)):
            raise InvalidSpecError(f"diag-plus-antisym: coupling g must be finite, got {self.g}")


@dataclass(frozen=True)
class DiagPlusAntagonistic(Composition):
    kind: ClassVar[str] = "diag-plus-antagonistic"
    diag: ScalarDensity
    pair: PairDensity


@dataclass(frozen=True)
class EllipticGaussian(Composition):
    kind: ClassVar[str] = "elliptic-gaussian"
    tau: float

    def __post_init__(self):
        if not abs(self.tau) <= 1.0:
            raise InvalidSpecError(f"elliptic-gaussian: need |tau| <= 1, got {self.tau}")


@dataclass(frozen=True)
class Dilute(Composition):
    kind: ClassVar[str] = "dilute"
    entry: ScalarDensity
    q: float

    def __post_init__(self):
        if not 0.0 <= self.q <= 1.0:
            raise InvalidSpecError(f"dilute: keep-probability q must be in [0, 1], got {self.q}")


@dataclass(frozen=True)
class SmallSymBigAntisym(Composition):
    kind: ClassVar[str] = "small-sym-big-antisym"
    diag: ScalarDensity
    sym: ScalarDensity
    antisym: ScalarDensity


_COMPOSITIONS = {
    c.kind: c
    for c in (
        Antagonistic,
        Antisymmetric,
        DiagPlusAntisym,
        DiagPlusAntagonistic,
        EllipticGaussian,
        Dilute,
        SmallSymBigAntisym,
    )
}


@dataclass(frozen=True)
class EnsembleSpec:
    """Full recipe for one random-matrix ensemble: dimension, composition, seed.

    Two calls of :func:`sample_matrix` with identical specs produce
    bit-identical matrices.
    """

    n: int
    composition: Composition
    seed: int = 0

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 1):
            raise InvalidSpecError(f"n must be an integer >= 1, got {self.n!r}")
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2 ** 64):
            raise InvalidSpecError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if not isinstance(self.composition, Composition):
            raise InvalidSpecError(f"composition must be a Composition, got {type(self.composition).__name__}")


def _triu(n):
    return np.triu_indices(n, 1)


def sample_batch(spec: EnsembleSpec, rng, count: int) -> np.ndarray:
    """Assemble ``count`` matrices of the ensemble from one stream.

    Returns an array of shape ``(count, n, n)``.  The draw order per
    composition is fixed (off-diagonal laws first, then diagonal, then any
    dilution mask), so the result is a pure function of ``(spec, rng state)``.
    """
    n = spec.n
    comp = spec.composition
    iu, ju = _triu(n)
    out = np.zeros((count, n, n))
    if isinstance(comp, (Antagonistic, DiagPlusAntagonistic)):
        x, y = _sample_pair_arrays(comp.pair, ju - iu, rng, count)
        out[:, iu, ju] = x
        out[:, ju, iu] = y
        if isinstance(comp, DiagPlusAntagonistic):
            d = _sample_scalar_array(comp.diag, rng, (count, n))
            out[:, np.arange(n), np.arange(n)] = d
    elif isinstance(comp, Antisymmetric):
        e = _sample_scalar_array(comp.entry, rng, (count, len(iu)))
        out[:, iu, ju] = e
        out[:, ju, iu] = -e
    elif isinstance(comp, DiagPlusAntisym):
        e = _sample_scalar_array(comp.antisym, rng, (count, len(iu)))
        out[:, iu, ju] = comp.g * e
        out[:, ju, iu] = -comp.g * e
        d = _sample_scalar_array(comp.diag, rng, (count, n))
        out[:, np.arange(n), np.arange(n)] = d
    elif isinstance(comp, EllipticGaussian):
        tau = comp.tau
        s = math.sqrt((1.0 + tau) / (2.0 * n)) * rng.standard_normal((count, len(iu)))
        a = math.sqrt((1.0 - tau) / (2.0 * n)) * rng.standard_normal((count, len(iu)))
        out[:, iu, ju] = s + a
        out[:, ju, iu] = s - a
        d = math.sqrt((1.0 + tau) / n) * rng.standard_normal((count, n))
        out[:, np.arange(n), np.arange(n)] = d
    elif isinstance(comp, Dilute):
        out = _sample_scalar_array(comp.entry, rng, (count, n, n))
        keep = rng.random((count, n, n)) < comp.q
        out = out * keep
    elif isinstance(comp, SmallSymBigAntisym):
        s = _sample_scalar_array(comp.sym, rng, (count, len(iu)))
        a = _sample_scalar_array(comp.antisym, rng, (count, len(iu)))
        rt = math.sqrt(n)
        out[:, iu, ju] = s / rt + a
        out[:, ju, iu] = s / rt - a
        d = _sample_scalar_array(comp.diag, rng, (count, n))
        out[:, np.arange(n), np.arange(n)] = d
    else:  # pragma: no cover - sealed by EnsembleSpec validation
        raise InvalidSpecError(f"unknown composition {comp!r}")
    return out


def sample_matrix(spec: EnsembleSpec, index: int = 0) -> np.ndarray:
    """Sample the ``index``-th matrix of the ensemble.

    Matrices with distinct indices come from independent substreams, so a
    family ``index = 0, 1, ...`` can be generated in any order, concurrently,
    with identical results.
    """
    rng = stream(spec.seed, TAG_MATRIX, index)
    return sample_batch(spec, rng, 1)[0]


# ---------------------------------------------------------------------------
# structure checks and transforms


def is_antagonistic(M) -> bool:
    """True iff the diagonal is zero and each pair has opposite signs or is (0, 0)."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidSpecError(f"expected a square matrix, got shape {M.shape}")
    if np.any(np.diagonal(M) != 0.0):
        return False
    iu = _triu(M.shape[0])
    x = M[iu]
    y = M.T[iu]
    return bool(np.all((x * y < 0.0) | ((x == 0.0) & (y == 0.0))))


def closure_transform(M, kind: str, operand=None) -> np.ndarray:
    """Apply an antagonism-preserving transform: negate, transpose, diag-conjugate, permute.

    ``diag-conjugate`` takes a vector of nonzero diagonal entries and returns
    ``D M D^-1``; ``permute`` takes an index permutation ``perm`` and returns
    ``P^T M P`` (row/col ``i`` of the result is row/col ``perm[i]`` of ``M``),
    which preserves the eigenvalue multiset.
    """
    M = np.asarray(M, dtype=float)
    if not is_antagonistic(M):
        raise InvalidSpecError("closure transforms are defined on antagonistic matrices only")
    if kind == "negate":
        return -M
    if kind == "transpose":
        return M.T.copy()
    if kind == "diag-conjugate":
        d = np.asarray(operand, dtype=float).reshape(-1)
        if d.shape[0] != M.shape[0]:
            raise InvalidSpecError(f"diag-conjugate: need {M.shape[0]} diagonal entries, got {d.shape[0]}")
        if np.any(d == 0.0):
            raise SingularDiagonalError("diag-conjugate: diagonal must be invertible (no zero entries)")
        return M * d[:, None] / d[None, :]
    if kind == "permute":
        perm = np.asarray(operand, dtype=int).reshape(-1)
        if sorted(perm.tolist()) != list(range(M.shape[0])):
            raise InvalidSpecError("permute: operand must be a permutation of 0..n-1")
        return M[np.ix_(perm, perm)]
    raise InvalidSpecError(f"unknown transform {kind!r}")


def haar_orthogonal(n: int, rng) -> np.ndarray:
    """Draw an orthogonal matrix from the Haar measure on O(n).

    QR of a Gaussian matrix, with the R-diagonal signs absorbed into Q so the
    factorization is unique and the distribution exactly Haar.
    """
    if n < 1:
        raise InvalidSpecError(f"haar_orthogonal: need n >= 1, got {n}")
    z = rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * np.sign(np.diagonal(r))


# ---------------------------------------------------------------------------
# JSON round-trip.  Unknown fields are rejected everywhere, with the offending
# key named in the error.


def _density_to_json(d):
    table = _PAIR_PARAMS if isinstance(d, PairDensity) else _SCALAR_PARAMS
    out = {"kind": d.kind}
    for name in table[d.kind]:
        out[name] = float(getattr(d, name))
    return out


def _density_from_json(obj, cls, where):
    table = _PAIR_PARAMS if cls is PairDensity else _SCALAR_PARAMS
    if not isinstance(obj, dict):
        raise InvalidSpecError(f"{where}: expected an object, got {type(obj).__name__}")
    kind = obj.get("kind")
    if kind not in table:
        raise InvalidSpecError(f"{where}.kind: expected one of {sorted(table)}, got {kind!r}")
    extra = set(obj) - {"kind"} - set(table[kind])
    if extra:
        raise InvalidSpecError(f"{where}: unknown field {sorted(extra)[0]!r} for kind {kind!r}")
    params = {}
    for name in table[kind]:
        if name not in obj:
            raise InvalidSpecError(f"{where}: kind {kind!r} requires field {name!r}")
        params[name] = float(obj[name])
    return cls(kind, **params)


# (json field name, attribute, pair|scalar|float) per composition kind
_COMP_FIELDS = {
    "antagonistic": (("pair", "pair", "pair"),),
    "antisymmetric": (("entry", "entry", "scalar"),),
    "diag-plus-antisym": (("diag", "diag", "scalar"), ("antisym", "antisym", "scalar"), ("g", "g", "float")),
    "diag-plus-antagonistic": (("diag", "diag", "scalar"), ("pair", "pair", "pair")),
    "elliptic-gaussian": (("tau", "tau", "float"),),
    "dilute": (("entry", "entry", "scalar"), ("q", "q", "float")),
    "small-sym-big-antisym": (("diag", "diag", "scalar"), ("sym", "sym", "scalar"), ("antisym", "antisym", "scalar")),
}


def spec_to_json(spec: EnsembleSpec) -> dict:
    """Serialize an ensemble spec to a plain JSON-compatible dict."""
    comp = spec.composition
    cobj = {"kind": comp.kind}
    for name, attr, typ in _COMP_FIELDS[comp.kind]:
        val = getattr(comp, attr)
        cobj[name] = float(val) if typ == "float" else _density_to_json(val)
    return {"n": spec.n, "seed": spec.seed, "composition": cobj}


def spec_from_json(obj) -> EnsembleSpec:
    """Parse an ensemble spec from a dict (or JSON string); unknown fields are errors."""
    if isinstance(obj, (str, bytes)):
        import json

        obj = json.loads(obj)
    if not isinstance(obj, dict):
        raise InvalidSpecError(f"spec: expected an object, got {type(obj).__name__}")
    extra = set(obj) - {"n", "seed", "composition"}
    if extra:
        raise InvalidSpecError(f"spec: unknown field {sorted(extra)[0]!r}")
    if "n" not in obj or "composition" not in obj:
        raise InvalidSpecError("spec: fields 'n' and 'composition' are required")
    cobj = obj["composition"]
    if not isinstance(cobj, dict):
        raise InvalidSpecError("spec.composition: expected an object")
    kind = cobj.get("kind")
    if kind not in _COMP_FIELDS:
        raise InvalidSpecError(f"spec.composition.kind: expected one of {sorted(_COMP_FIELDS)}, got {kind!r}")
    spec_fields = _COMP_FIELDS[kind]
    allowed = {name for name, _, _ in spec_fields}
    extra = set(cobj) - {"kind"} - allowed
    if extra:
        raise InvalidSpecError(f"spec.composition: unknown field {sorted(extra)[0]!r} for kind {kind!r}")
    kwargs = {}
    for name, attr, typ in spec_fields:
        if name not in cobj:
            if kind == "diag-plus-antisym" and name == "g":
                continue  # optional coupling, defaults to 1
            raise InvalidSpecError(f"spec.composition: kind {kind!r} requires field {name!r}")
        val = cobj[name]
        if typ == "float":
            kwargs[attr] = float(val)
        elif typ == "pair":
            kwargs[attr] = _density_from_json(val, PairDensity, f"spec.composition.{name}")
        else:
            kwargs[attr] = _density_from_json(val, ScalarDensity, f"spec.composition.{name}")
    comp = _COMPOSITIONS[kind](**kwargs)
    n = obj["n"]
    if not isinstance(n, int):
        raise InvalidSpecError(f"spec.n: expected an integer, got {n!r}")
    seed = obj.get("seed", 0)
    if not isinstance(seed, int):
        raise InvalidSpecError(f"spec.seed: expected an integer, got {seed!r}")
    return EnsembleSpec(n=n, composition=comp, seed=seed)
