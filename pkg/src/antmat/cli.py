"""Command-line experiment runner.

Subcommands: ``figure`` (preset eigenvalue clouds with stability sidecars),
``sample`` (one matrix), ``spectrum`` (eigenvalues or a 2-D histogram),
``expect`` (Monte Carlo vs exact expectation with a z-score gate),
``perturb`` (prediction residuals over an eps grid), ``lawfit`` (elliptic /
circular / width checks), and ``verify`` (named invariant suites).

All outputs are deterministic functions of (command, config, seed): floats are
serialized with ``repr``, JSON keys are sorted, and parallel work is merged in
index order.  Exit codes: 0 pass, 1 check-failed, 2 usage, 3 numerical.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import AntmatError, DimensionCapError, NumericalError
from .errors import InvalidSpecError
from .exact import (
    CHAR_POLY_CAP,
    MC_FUNCTIONALS,
    PFAFFIAN_CAP,
    ThetaArray,
    expected_char_poly,
    expected_det,
    expected_pf_pft,
    mc_expect,
)
from .laws import (
    DEFAULT_ETA,
    INSIDE_THRESHOLD,
    EllipseModel,
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
from .matgen import (
    Antagonistic,
    DiagPlusAntagonistic,
    DiagPlusAntisym,
    Dilute,
    EnsembleSpec,
    PairDensity,
    ScalarDensity,
    SmallSymBigAntisym,
    sample_matrix,
    spec_from_json,
    spec_to_json,
)
from .perturb import PerturbationInput, report_to_csv, verify_prediction
from .spectral import (
    esd_histogram,
    eigenvalues,
    histogram_to_csv,
    spectrum_to_csv,
    stability_report,
)
from .verify import DEG_SLOPE, EPS_GRID, NONDEG_SLOPE, SUITE_NAMES, run_suite

__all__ = ["main"]

Z_GATE = 4.0
DILUTE_BAND = (0.85, 1.15)


# ---------------------------------------------------------------------------
# plumbing


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _load_config(args) -> dict:
    if not args.config:
        return {}
    with open(args.config) as fh:
        return json.load(fh)


def _seed(args) -> int:
    return 0 if args.seed is None else args.seed


def _require_spec(cfg: dict, args) -> EnsembleSpec:
    if "spec" not in cfg:
        raise InvalidSpecError("config must contain a 'spec' object")
    spec = spec_from_json(cfg["spec"])
    if args.seed is not None:  # flag overrides the config file
        spec = EnsembleSpec(n=spec.n, composition=spec.composition, seed=args.seed)
    return spec


def _ordered_map(fn, items, threads: int):
    """Map preserving item order; thread count never changes the result."""
    if threads <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# figure presets


def _figure_panels(fig_id: str, seed: int):
    diag = ScalarDensity("uniform", a=-10.0, b=-2.0)
    anti = ScalarDensity("uniform", a=-4.0, b=4.0)
    decay = PairDensity("decaying-squares", c=50.0, p=8.0)
    if fig_id == "fig1":
        return [
            (f"g={g}", EnsembleSpec(500, DiagPlusAntisym(diag, anti, g=g), seed))
            for g in (0.01, 0.08, 0.5)
        ]
    if fig_id == "fig2":
        return [
            (f"n={n}", EnsembleSpec(n, DiagPlusAntisym(diag, anti, g=1.0), seed))
            for n in (250, 500, 750)
        ]
    if fig_id == "fig3":
        return [(f"n={n}", EnsembleSpec(n, Antagonistic(decay), seed)) for n in (400, 600, 800)]
    if fig_id == "fig4":
        shifted = ScalarDensity("uniform", a=-6.0, b=-4.0)
        return [
            (f"n={n}", EnsembleSpec(n, DiagPlusAntagonistic(shifted, decay), seed))
            for n in (400, 600, 800)
        ]
    comp = SmallSymBigAntisym(
        ScalarDensity("uniform", a=-10.0, b=-5.0),
        ScalarDensity("uniform", a=-30.0, b=30.0),
        ScalarDensity("uniform", a=-10.0, b=10.0),
    )
    return [("n=800", EnsembleSpec(800, comp, seed))]


def cmd_figure(args) -> int:
    cfg = _load_config(args)
    # precedence: --seed flag, then config file, then the preset default 0
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    panels = _figure_panels(args.id, seed)

    def work(item):
        index, (label, spec) = item
        M = sample_matrix(spec, index=index)
        return index, label, spec, eigenvalues(M)

    results = _ordered_map(work, list(enumerate(panels)), args.threads)
    lines = ["re,im,label"]
    sidecar = {"figure": args.id, "seed": seed, "panels": []}
    for index, label, spec, s in results:
        for lam in s.eigenvalues:
            lines.append(f"{float(lam.real)!r},{float(lam.imag)!r},{label}")
        sidecar["panels"].append(
            {
                "label": label,
                "index": index,
                "spec": spec_to_json(spec),
                "stability": stability_report(s).to_json(),
            }
        )
    out = args.out or f"{args.id}.csv"
    _emit("\n".join(lines) + "\n", out)
    report_path = os.path.splitext(out)[0] + ".report.json"
    _emit(_json_text(sidecar), report_path)
    return 0


# ---------------------------------------------------------------------------
# sample / spectrum


def cmd_sample(args) -> int:
    spec = _require_spec(_load_config(args), args)
    M = sample_matrix(spec)
    if args.format == "json":
        body = {"spec": spec_to_json(spec), "matrix": [[float(v) for v in row] for row in M]}
        _emit(_json_text(body), args.out)
    else:
        rows = [",".join(repr(float(v)) for v in row) for row in M]
        _emit("\n".join(rows) + "\n", args.out)
    return 0


def _parse_bins(text: str):
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise InvalidSpecError(f"--bins expects RExIM (e.g. 40x30), got {text!r}")
    try:
        re_bins, im_bins = int(parts[0]), int(parts[1])
    except ValueError:
        raise InvalidSpecError(f"--bins expects two integers, got {text!r}") from None
    return re_bins, im_bins


def cmd_spectrum(args) -> int:
    spec = _require_spec(_load_config(args), args)
    s = eigenvalues(sample_matrix(spec))
    if args.bins:
        h = esd_histogram(s, *_parse_bins(args.bins))
        if args.format == "json":
            body = {
                "re_centers": [float(v) for v in h.re_centers],
                "im_centers": [float(v) for v in h.im_centers],
                "counts": [[int(c) for c in row] for row in h.counts],
            }
            _emit(_json_text(body), args.out)
        else:
            _emit(histogram_to_csv(h), args.out)
        return 0
    if args.format == "json":
        body = {
            "eigenvalues": [[float(z.real), float(z.imag)] for z in s.eigenvalues],
            "residual": s.residual,
        }
        _emit(_json_text(body), args.out)
    else:
        _emit(spectrum_to_csv(s), args.out)
    return 0


# ---------------------------------------------------------------------------
# expect


def _exact_expectation(spec: EnsembleSpec, functional: str, z: float | None):
    """Closed-form value when one exists for this spec, else None."""
    if not isinstance(spec.composition, Antagonistic):
        return None
    if functional in ("det", "char-poly-at") and spec.n > CHAR_POLY_CAP:
        return None
    if functional == "pf-pft" and (spec.n % 2 == 1 or spec.n > PFAFFIAN_CAP):
        return 0.0 if spec.n % 2 == 1 else None
    t = ThetaArray.from_spec(spec)
    if functional == "det":
        return expected_det(t)
    if functional == "char-poly-at":
        return float(expected_char_poly(t)(z))
    if functional == "pf-pft":
        return expected_pf_pft(t)
    iu = np.triu_indices(spec.n, 1)
    return -2.0 * float(np.sum(t.values[iu]))  # E[tr M^2] for zero-diagonal pairs


def cmd_expect(args) -> int:
    spec = _require_spec(_load_config(args), args)
    if args.functional == "char-poly-at" and args.z is None:
        raise InvalidSpecError("functional 'char-poly-at' requires --z")
    est = mc_expect(spec, args.functional, args.trials, z=args.z, threads=args.threads)
    exact = _exact_expectation(spec, args.functional, args.z)
    z_score = None
    if exact is not None:
        if est.stderr > 0.0:
            z_score = (est.value - exact) / est.stderr
        else:
            z_score = 0.0 if est.value == exact else math.inf
    body = {
        "functional": args.functional,
        "z": args.z,
        "spec": spec_to_json(spec),
        "mc": est.to_json(),
        "exact": exact,
        "z_score": z_score,
        "passed": z_score is None or abs(z_score) <= Z_GATE,
    }
    _emit(_json_text(body), args.out)
    return 0 if body["passed"] else 1


# ---------------------------------------------------------------------------
# perturb


def cmd_perturb(args) -> int:
    cfg = _load_config(args)
    if cfg:
        if "d" not in cfg or "eps_grid" not in cfg:
            raise InvalidSpecError("perturb config needs 'd' and 'eps_grid'")
        d = np.asarray(cfg["d"], dtype=float)
        if "a" in cfg:
            A = np.asarray(cfg["a"], dtype=float)
        elif "a_spec" in cfg:
            a_spec = spec_from_json(cfg["a_spec"])
            if a_spec.n != len(d):
                raise InvalidSpecError(f"a_spec dimension {a_spec.n} does not match len(d) = {len(d)}")
            A = sample_matrix(a_spec)
        else:
            raise InvalidSpecError("perturb config needs 'a' (matrix) or 'a_spec' (ensemble)")
        grid = [float(e) for e in cfg["eps_grid"]]
    else:
        # demo: the 2 x 2 closed-form case
        d = np.array([-1.0, -4.0])
        A = np.array([[0.0, 2.0], [-3.0, 0.0]])
        grid = list(EPS_GRID)
    report = verify_prediction(PerturbationInput(d=d, A=A, eps=grid[0]), grid)
    _emit(report_to_csv(report), args.out)
    contract = DEG_SLOPE if report.mode == "degenerate" else NONDEG_SLOPE
    return 0 if report.slope >= contract else 1


# ---------------------------------------------------------------------------
# lawfit


def _density_from_cfg(obj, cls, fallback):
    if obj is None:
        return fallback
    from .matgen import _density_from_json

    return _density_from_json(obj, cls, "config")


def _lawfit_elliptic(cfg: dict, args) -> int:
    if "spec" in cfg:
        spec = _require_spec(cfg, args)
    else:
        spec = EnsembleSpec(1000, Antagonistic(PairDensity("gaussian-antagonistic")), _seed(args))
    comp = spec.composition
    if "rho" in cfg:
        rho = float(cfg["rho"])
    elif isinstance(comp, Antagonistic):
        rho = rho_from_density(comp.pair)
    elif comp.kind == "elliptic-gaussian":
        rho = comp.tau
    else:
        raise InvalidSpecError(f"no default ellipse parameter for composition {comp.kind!r}")
    eta = float(cfg.get("eta", DEFAULT_ETA))
    fit = elliptic_fit(normalized_spectrum(spec), spec.n, EllipseModel(rho), eta=eta, seed=spec.seed)
    passed = fit.inside_fraction >= INSIDE_THRESHOLD and fit.radial_ks <= ks_threshold(spec.n)
    body = {
        "law": "elliptic",
        "model": {"rho": rho, "semi_axes": list(EllipseModel(rho).semi_axes)},
        "eta": eta,
        "fit": fit.to_json(),
        "thresholds": {"inside_fraction": INSIDE_THRESHOLD, "radial_ks": ks_threshold(spec.n)},
        "passed": passed,
    }
    _emit(_json_text(body), args.out)
    return 0 if passed else 1


def _lawfit_circular(cfg: dict, args) -> int:
    if "spec" in cfg:
        spec = _require_spec(cfg, args)
    else:
        spec = EnsembleSpec(
            1024, Dilute(ScalarDensity("uniform", a=-1.0, b=1.0), q=1.0 / 32.0), _seed(args)
        )
    rc = circular_radius_check(spec)
    passed = DILUTE_BAND[0] <= rc.ratio <= DILUTE_BAND[1]
    body = {
        "law": "circular",
        "spec": spec_to_json(spec),
        "check": rc.to_json(),
        "band": list(DILUTE_BAND),
        "passed": passed,
    }
    _emit(_json_text(body), args.out)
    return 0 if passed else 1


def _lawfit_width(cfg: dict, args) -> int:
    family = cfg.get("family", "decaying")
    n_list = [int(n) for n in cfg.get("n_list", (400, 600, 800))]
    seeds = cfg.get("seeds", 5)
    if isinstance(seeds, int):
        seeds = list(range(_seed(args), _seed(args) + seeds))
    else:
        seeds = [int(s) for s in seeds]
    if family == "decaying":
        make = decaying_family(float(cfg.get("c", 50.0)), float(cfg.get("p", 8.0)))
    elif family == "decaying-shifted":
        diag = _density_from_cfg(cfg.get("diag"), ScalarDensity, ScalarDensity("uniform", a=-6.0, b=-4.0))
        make = decaying_family(float(cfg.get("c", 50.0)), float(cfg.get("p", 8.0)), diag=diag)
    elif family == "sym-antisym":
        make = sym_antisym_family(
            _density_from_cfg(cfg.get("diag"), ScalarDensity, ScalarDensity("point", v=0.0)),
            _density_from_cfg(cfg.get("sym"), ScalarDensity, ScalarDensity("uniform", a=-30.0, b=30.0)),
            _density_from_cfg(cfg.get("antisym"), ScalarDensity, ScalarDensity("uniform", a=-10.0, b=10.0)),
        )
    else:
        raise InvalidSpecError(
            f"unknown width family {family!r}; expected decaying, decaying-shifted, or sym-antisym"
        )
    trend = width_trend(make, n_list, seeds)
    if args.format == "json":
        body = {
            "law": "width",
            "family": family,
            "rows": [[n, s, w] for n, s, w in trend.rows],
            "mean_widths": [[n, w] for n, w in trend.mean_widths],
            "non_increasing": trend.non_increasing,
        }
        _emit(_json_text(body), args.out)
    else:
        _emit(widths_to_csv(trend), args.out)
    return 0 if trend.non_increasing else 1


def cmd_lawfit(args) -> int:
    cfg = _load_config(args)
    if args.law == "elliptic":
        return _lawfit_elliptic(cfg, args)
    if args.law == "circular":
        return _lawfit_circular(cfg, args)
    return _lawfit_width(cfg, args)


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    verdict = run_suite(args.suite, seed=_seed(args))
    _emit(_json_text(verdict), args.out)
    return 0 if verdict["passed"] else 1


# ---------------------------------------------------------------------------
# parser


def _add_common(sp, *, trials=False, fmt=False, bins=False):
    sp.add_argument("--seed", type=int, default=None,
                    help="master seed (unsigned 64-bit; overrides config, defaults to 0)")
    sp.add_argument("--out", default=None, help="output path (default: stdout)")
    sp.add_argument("--config", default=None, help="JSON config file")
    sp.add_argument("--threads", type=int, default=1, help="worker threads (never changes results)")
    if trials:
        sp.add_argument("--trials", type=int, default=100000, help="Monte Carlo trials")
    if fmt:
        sp.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
    if bins:
        sp.add_argument("--bins", default=None, help="histogram bins as RExIM (e.g. 40x30)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="antmat",
        description="Spectra, exact expectations, and law checks for antagonistic random matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("figure", help="reproduce a preset eigenvalue-cloud figure")
    p.add_argument("id", choices=("fig1", "fig2", "fig3", "fig4", "fig5"))
    _add_common(p)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("sample", help="sample one matrix from an ensemble spec")
    _add_common(p, fmt=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("spectrum", help="eigenvalues (or 2-D histogram) of one sampled matrix")
    _add_common(p, fmt=True, bins=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("expect", help="Monte Carlo expectation vs exact value with z-score gate")
    p.add_argument("--functional", choices=MC_FUNCTIONALS, required=True)
    p.add_argument("--z", type=float, default=None, help="evaluation point for char-poly-at")
    _add_common(p, trials=True)
    p.set_defaults(func=cmd_expect)

    p = sub.add_parser("perturb", help="perturbative prediction residuals over an eps grid")
    _add_common(p)
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("lawfit", help="elliptic / circular / width law checks")
    p.add_argument("--law", choices=("elliptic", "circular", "width"), required=True)
    _add_common(p, fmt=True)
    p.set_defaults(func=cmd_lawfit)

    p = sub.add_parser("verify", help="run a named invariant suite")
    p.add_argument("suite", choices=SUITE_NAMES)
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except NumericalError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 3
    except DimensionCapError as e:
        print(f"error: {e} (use the Monte Carlo route or a smaller n)", file=sys.stderr)
        return 2
    except AntmatError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
