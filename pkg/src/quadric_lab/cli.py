"""Command-line front end: ``verify``, ``spectrum`` and ``report-all``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .checks import (
    DEFAULT_NS,
    DEFAULT_RS,
    DEFAULT_TOL,
    ODE_RADII,
    RICCI_ALPHAS,
    CheckRecord,
    P_checks,
    geometry_checks,
    model_checks,
    ode_checks,
    scalar_spread_check,
    structure_checks,
    summarize,
)
from .contact import ricci_report
from .hypersurfaces import HypersurfaceModel, ModelKind, build_M, build_P

MODEL_CHOICES = ("tube", "minimal", "equidistant", "horocyclic", "P")
THREADS_ENV = "QUADRIC_LAB_THREADS"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    ns: list[int]
    models: list[str]
    radii: list[float]
    alpha: float | None = None
    tol: float = DEFAULT_TOL
    seed: int = 0
    fmt: str = "json"
    command: str = "verify"

    def validate(self):
        if any(n < 3 for n in self.ns):
            raise UsageError("n must be >= 3")
        if any(not np.isfinite(r) or r <= 0 for r in self.radii):
            raise UsageError("radii must be positive")
        if not (self.tol > 0):
            raise UsageError("tol must be positive")


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    return max(1, min(4, os.cpu_count() or 1))


def _hopf_models(kind: str, radii: list[float], alpha: float | None) -> list[HypersurfaceModel]:
    if alpha is not None:
        return [HypersurfaceModel.from_alpha(alpha, kind)]
    if kind in ("tube", "equidistant"):
        return [HypersurfaceModel(kind, r) for r in radii]
    return [HypersurfaceModel(kind)]


def _jobs(config: RunConfig, full: bool):
    """Yield zero-argument callables, each returning a list of records."""
    for n in config.ns:
        yield lambda n=n: structure_checks(n, config.seed, config.tol)
        yield lambda n=n: geometry_checks(n, config.seed, config.tol)
        for kind in config.models:
            if kind == "P":
                yield lambda n=n: P_checks(n, config.tol)
                continue
            for model in _hopf_models(kind, config.radii, config.alpha):
                yield lambda n=n, m=model: model_checks(n, m, config.tol)
            if kind in ("tube", "equidistant") and config.alpha is None:
                yield lambda n=n, k=kind: ode_checks(n, ModelKind(k), ODE_RADII, max(config.tol, 1e-6))
        if full:
            for a in RICCI_ALPHAS:
                m = HypersurfaceModel.from_alpha(a)
                if m.kind in (ModelKind.MINIMAL, ModelKind.HOROCYCLIC):
                    continue  # already in the model list
                yield lambda n=n, m=m: model_checks(n, m, config.tol)


def run_checks(config: RunConfig, full: bool = False) -> list[CheckRecord]:
    jobs = list(_jobs(config, full))
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        parts = list(pool.map(lambda job: job(), jobs))
    records = [r for part in parts for r in part]
    for n in config.ns:
        scalars = {r.model: r.computed for r in records
                   if r.n == n and r.name == "scalar_curvature"}
        if len(scalars) > 1:
            records.append(scalar_spread_check(n, scalars, config.tol))
    return sorted(records, key=CheckRecord.sort_key)


def build_report(config: RunConfig, records: list[CheckRecord]) -> dict:
    return {
        "meta": {
            "tool": "quadric-lab",
            "version": __version__,
            "command": config.command,
            "n": list(config.ns),
            "models": list(config.models),
            "radii": list(config.radii),
            "alpha": config.alpha,
            "tol": config.tol,
            "seed": config.seed,
            "note": "multiplicities follow the body theorems: 1, 2, n-2, n-2 (sum 2n-1); "
                    "the summary statement listing 1, 2, n-1, n-1 does not add up to 2n-1",
        },
        "checks": [r.to_dict() for r in records],
        "summary": summarize(records),
    }


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False) + "\n"


def render_markdown(report: dict) -> str:
    meta = report["meta"]
    out = [f"# quadric-lab {meta['command']} report", ""]
    out.append(f"n = {meta['n']}, models = {meta['models']}, tol = {meta['tol']:g}, seed = {meta['seed']}")
    out.append("")
    s = report["summary"]
    out.append(f"**{s['passed']} / {s['total']} checks passed**")
    out.append("")
    out.append("| anchor | check | n | model | residual | tol | pass |")
    out.append("|---|---|---|---|---|---|---|")
    for r in report["checks"]:
        res = r["residual"]
        res = f"{res:.3e}" if isinstance(res, float) else str(res)
        out.append(f"| {r['anchor']} | {r['name']} | {r['n']} | {r['model']} | {res} | "
                   f"{r['tol']:g} | {'PASS' if r['pass'] else 'FAIL'} |")
    return "\n".join(out) + "\n"


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------


def _snap(x: float, eps: float = 1e-12) -> float:
    """Display helper: round-off sized values print as 0."""
    return 0.0 if abs(x) < eps else float(x)


def _eigenspace_label(basis: np.ndarray, blocks: dict) -> str:
    weight = {name: float(np.linalg.norm(basis[lo:hi])) for name, (lo, hi) in blocks.items()}
    names = [k for k, w in weight.items() if w > 1e-6]
    return "+".join(names)


def spectrum_table(n: int, model_name: str, model: HypersurfaceModel | None) -> dict:
    if model_name == "P":
        frame, rep = build_P(n)
        rows = [{"eigenvalue": _snap(c.value), "multiplicity": c.multiplicity,
                 "eigenspace": _eigenspace_label(c.basis, frame.blocks)} for c in rep.spectrum.clusters]
        return {"model": "P", "n": n, "alpha": None, "principal_curvatures": rows}
    frame, rep = build_M(n, model)
    rows = [{"eigenvalue": _snap(c.value), "multiplicity": c.multiplicity,
             "eigenspace": _eigenspace_label(c.basis, frame.blocks)} for c in rep.spectrum.clusters]
    rr = ricci_report(frame, rep.matrix, rep.alpha)
    return {
        "model": model.label,
        "n": n,
        "alpha": rep.alpha,
        "principal_curvatures": rows,
        "ricci": [{"eigenvalue": _snap(c.value), "multiplicity": c.multiplicity} for c in rr.spectrum.clusters],
        "scalar_curvature": float(rr.scalar),
        "pseudo_einstein": rr.pseudo_einstein,
    }


def render_spectrum_markdown(tab: dict) -> str:
    out = [f"# {tab['model']}, n = {tab['n']}", ""]
    if tab["alpha"] is not None:
        out += [f"Hopf curvature alpha = {tab['alpha']:.12g}", ""]
    out += ["| eigenvalue | multiplicity | eigenspace |", "|---|---|---|"]
    out += [f"| {r['eigenvalue']:.12g} | {r['multiplicity']} | {r['eigenspace']} |"
            for r in tab["principal_curvatures"]]
    if "ricci" in tab:
        out += ["", "| Ricci eigenvalue | multiplicity |", "|---|---|"]
        out += [f"| {r['eigenvalue']:.12g} | {r['multiplicity']} |" for r in tab["ricci"]]
        out += ["", f"scalar curvature = {tab['scalar_curvature']:.12g}",
                f"pseudo-Einstein: {'yes' if tab['pseudo_einstein'] else 'no'}"]
    return "\n".join(out) + "\n"


def sweep_csv(n: int, kind: str, radii: list[float]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "alpha", "principal_curvatures", "ricci_eigenvalues", "scalar_curvature"])
    for r in radii:
        tab = spectrum_table(n, kind, HypersurfaceModel(kind, r))
        pcs = ";".join(f"{x['eigenvalue']!r}x{x['multiplicity']}" for x in tab["principal_curvatures"])
        ric = ";".join(f"{x['eigenvalue']!r}x{x['multiplicity']}" for x in tab["ricci"])
        w.writerow([repr(r), repr(tab["alpha"]), pcs, ric, repr(tab["scalar_curvature"])])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not np.isfinite(v) or v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _nonneg_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not np.isfinite(v) or v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return v


def _dimension(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 3:
        raise argparse.ArgumentTypeError(f"n must be >= 3, got {v}")
    return v


def _common(p: argparse.ArgumentParser, multi_n: bool):
    if multi_n:
        p.add_argument("--n", type=_dimension, nargs="+", default=list(DEFAULT_NS),
                       help="dimensions to cover (default: 3 4 5 6)")
    else:
        p.add_argument("--n", type=_dimension, required=True, help="dimension parameter, at least 3")
    p.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL, help="base tolerance")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p.add_argument("--format", choices=("json", "markdown"), default="json", dest="fmt")
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")


def _model_args(p: argparse.ArgumentParser, required: bool):
    p.add_argument("--model", choices=MODEL_CHOICES, required=required)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--r", type=_positive_float, help="radius (tube, equidistant)")
    g.add_argument("--alpha", type=_nonneg_float,
                   help="Hopf curvature; converted to a radius by the model's formula")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadric-lab",
        description="Verify the geometry of complex hyperbolic quadrics and their homogeneous "
                    "Hopf hypersurfaces at machine precision.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run all checks for one n and the requested models")
    _common(v, multi_n=False)
    _model_args(v, required=False)

    s = sub.add_parser("spectrum", help="principal curvatures, Ricci eigenvalues, scalar curvature")
    _common(s, multi_n=False)
    _model_args(s, required=True)
    s.add_argument("--r-grid", type=_positive_float, nargs="+", metavar="R",
                   help="emit a CSV sweep over these radii (tube, equidistant)")

    a = sub.add_parser("report-all", help="full claims matrix over the default grid")
    _common(a, multi_n=True)
    a.add_argument("--r", type=_positive_float, nargs="+", default=list(DEFAULT_RS),
                   help="radii for tube and equidistant models (default: 0.25 0.5 1 2)")
    return parser


def _resolve_model(kind: str | None, r: float | None, alpha: float | None) -> tuple[list[str], list[float]]:
    """Return (model names, radii) for verify/spectrum, raising UsageError on
    inconsistent flags."""
    if kind is None:
        if alpha is not None:
            kind = HypersurfaceModel.from_alpha(alpha).kind.value
        elif r is not None:
            raise UsageError("--r needs --model tube or --model equidistant")
        else:
            return list(MODEL_CHOICES), list(DEFAULT_RS)
    if kind == "P" and (r is not None or alpha is not None):
        raise UsageError("P takes neither --r nor --alpha")
    if kind in ("minimal", "horocyclic") and r is not None:
        raise UsageError(f"{kind} takes no radius")
    if alpha is not None:
        try:
            HypersurfaceModel.from_alpha(alpha, kind)
        except ValueError as exc:
            raise UsageError(str(exc))
    radii = [r] if r is not None else list(DEFAULT_RS)
    return [kind], radii


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "report-all":
            config = RunConfig(args.n, list(MODEL_CHOICES), args.r, None, args.tol, args.seed,
                               args.fmt, "report-all")
            config.validate()
            records = run_checks(config, full=True)
        elif args.command == "verify":
            models, radii = _resolve_model(args.model, args.r, args.alpha)
            config = RunConfig([args.n], models, radii, args.alpha, args.tol, args.seed,
                               args.fmt, "verify")
            config.validate()
            records = run_checks(config)
        else:
            return _spectrum_command(args)
    except UsageError as exc:
        parser.error(str(exc))
    report = build_report(config, records)
    text = render_json(report) if config.fmt == "json" else render_markdown(report)
    _emit(text, args.out)
    return 0 if report["summary"]["failed"] == 0 else 1


def _spectrum_command(args) -> int:
    kind = args.model
    if args.r_grid:
        if kind not in ("tube", "equidistant"):
            raise UsageError("--r-grid applies to tube and equidistant models")
        _emit(sweep_csv(args.n, kind, args.r_grid), args.out)
        return 0
    _resolve_model(kind, args.r, args.alpha)
    model = None
    if kind != "P":
        if args.alpha is not None:
            model = HypersurfaceModel.from_alpha(args.alpha, kind)
        elif kind in ("tube", "equidistant"):
            if args.r is None:
                raise UsageError(f"{kind} needs --r or --alpha")
            model = HypersurfaceModel(kind, args.r)
        else:
            model = HypersurfaceModel(kind)
    tab = spectrum_table(args.n, kind, model)
    text = json.dumps(tab, indent=2) + "\n" if args.fmt == "json" else render_spectrum_markdown(tab)
    _emit(text, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
