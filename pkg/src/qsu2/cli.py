"""Command-line frontend: every module as a subcommand with CSV/JSON output.

Exit codes: 0 success, 2 argument error, 3 verification failure,
4 numerical failure (NaN/overflow).  Each run writes a JSON manifest
recording the resolved parameters and output digests; re-running from the
manifest reproduces byte-identical files.  A config file of key=value
lines supplies defaults; explicit flags override it.  The default output
directory comes from --outdir or the QSU2_OUTDIR environment variable.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .classify import classify, thresholds
from .geometry import level_section, spectral_flow, topology_transition
from .hopf import (
    GenDeformation,
    build_gen_rep,
    casimir_gen,
    hopf_axiom_report,
    spectrum_2jz,
    unitarity_window,
    detect_accumulation,
)
from .operators import UnitarityError, build_rep, verify_algebra
from .qnumbers import Deformation, SingularDeformation
from .schrodinger import build_potential, eigensolve, realization
from .serialize import complex_pairs, write_csv, write_json, write_manifest

EXIT_OK = 0
EXIT_ARGS = 2
EXIT_VERIFY = 3
EXIT_NUMERIC = 4

ASSERTED_RESIDUAL_TOL = 1e-10


class VerificationFailure(Exception):
    pass


def _parse_grid(spec: str):
    """start:stop:step grid specification."""
    try:
        start, stop, step = (float(tok) for tok in spec.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid spec {spec!r}: {exc}") from None
    if step <= 0 or stop <= start:
        raise argparse.ArgumentTypeError(f"bad grid spec {spec!r}: need stop > start, step > 0")
    count = int(math.floor((stop - start) / step + 0.5)) + 1
    return start, step, count


def _parse_basis(spec: str):
    """m0:count basis specification (unit spacing)."""
    try:
        m0, count = spec.split(":")
        return float(m0), int(count)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad basis spec {spec!r}: {exc}") from None


def _deformation(s: float) -> Deformation:
    try:
        return Deformation(s)
    except SingularDeformation as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _coerce(value: str):
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            pass
    if value.lower() in ("true", "false"):
        return value.lower() == "true"
    return value


def _config_defaults(path):
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        out[key.strip().replace("-", "_")] = _coerce(value.strip())
    return out


def _extract_config(argv):
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def build_parser(defaults: dict | None = None) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--outdir", default=None, help="output directory (default: $QSU2_OUTDIR or .)"
    )
    common.add_argument("--config", default=None, help="key=value file with flag defaults")

    ap = argparse.ArgumentParser(prog="qsu2", description=__doc__, parents=[common])
    ap.add_argument("--version", action="version", version=f"qsu2 {__version__}")
    subparsers = ap.add_subparsers(dest="command", required=True)
    built = []

    class _Sub:
        # subparsers parse into a fresh namespace, so config defaults must
        # be installed on every subparser, not just the root
        def add_parser(self, name, **kw):
            p = subparsers.add_parser(name, **kw)
            built.append(p)
            return p

    sub = _Sub()

    p = sub.add_parser(
        "classify", parents=[common], help="representation classes for s and a c value or range"
    )
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--c-range", default=None, help="start:stop:step sweep of c")

    p = sub.add_parser("rep", parents=[common], help="matrix representation on an explicit basis")
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--basis", default=None, help="m0:count, unit spacing")
    p.add_argument("--verify", action="store_true", help="exit 3 if asserted residuals exceed tolerance")

    p = sub.add_parser("potential", parents=[common], help="potential V(r; m, s) as CSV")
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--m", type=float, default=None)
    p.add_argument("--f1-branch", default=None, choices=["tan", "tanh", "constant", "linear"])
    p.add_argument("--f2-branch", default=None, choices=["sech", "exponential", "cosine", "constant"])
    p.add_argument("--F", type=float, default=1.0, help="integration constant of the f2 branch")
    p.add_argument("--d1", type=float, default=0.0)
    p.add_argument("--d2", type=float, default=0.0)
    p.add_argument("--grid", type=_parse_grid, default=(-6.0, 1e-3, 12001), help="start:stop:step")
    p.add_argument("--kappa-mode", default="exact", choices=["exact", "unit", "parity"])
    p.add_argument("--f1-derivative-form", default="first", choices=["first", "second"])
    p.add_argument("--transform", default="eliminate", choices=["eliminate", "literal"])

    p = sub.add_parser("spectrum", parents=[common], help="eigenvalues of a potential")
    p.add_argument("--potential-csv", default=None, help="r,V,mask table from the potential command")
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--m", type=float, default=None)
    p.add_argument("--f1-branch", default=None)
    p.add_argument("--f2-branch", default=None)
    p.add_argument("--F", type=float, default=1.0)
    p.add_argument("--d1", type=float, default=0.0)
    p.add_argument("--d2", type=float, default=0.0)
    p.add_argument("--grid", type=_parse_grid, default=(-6.0, 1e-3, 12001))
    p.add_argument("--kappa-mode", default="exact", choices=["exact", "unit", "parity"])
    p.add_argument("--f1-derivative-form", default="first", choices=["first", "second"])
    p.add_argument("--transform", default="eliminate", choices=["eliminate", "literal"])
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--cell", default="largest", help='"largest", "all", or a cell index')
    p.add_argument("--with-vectors", action="store_true")

    p = sub.add_parser("flow", parents=[common], help="spectral flow [2m](s) long-format CSV")
    p.add_argument("--m-max", type=float, default=4.5)
    p.add_argument("--s-grid", type=_parse_grid, default=(0.05, (math.pi - 0.1) / 499, 500))

    p = sub.add_parser("surface", parents=[common], help="constant-Casimir section or topology transition")
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--s", type=float, default=None, help="section at this s")
    p.add_argument("--jz-grid", type=_parse_grid, default=(-12.0, 0.01, 2401))
    p.add_argument("--transition", action="store_true", help="scan s for the transition instead")
    p.add_argument("--s-grid", type=_parse_grid, default=(0.05, (math.pi - 0.1) / 2999, 3000))

    p = sub.add_parser("hopf", parents=[common], help="generalized-deformation window, spectrum, and axiom report")
    p.add_argument("--alpha", type=float, default=-1.0)
    p.add_argument("--profile", default="constant", choices=["constant", "sech", "geometric", "tabulated"])
    p.add_argument("--b0", type=float, default=1.0)
    p.add_argument("--f0", type=float, default=4.0)
    p.add_argument("--f-lo", type=float, default=None)
    p.add_argument("--f-hi", type=float, default=None)
    p.add_argument("--c", type=float, default=2.0)
    p.add_argument("--dim", type=int, default=9)
    p.add_argument("--m-range", type=_parse_grid, default=(-20.0, 1.0, 41))
    p.add_argument("--what", default="all", choices=["all", "window", "spectrum", "axioms"])

    p = sub.add_parser("rerun", parents=[common], help="re-run a previous invocation from its manifest")
    p.add_argument("manifest")

    if defaults:
        # after all arguments exist, so the defaults land on the actions
        for parser in built:
            parser.set_defaults(**defaults)
    return ap


# ----------------------------------------------------------------------


def _cmd_classify(args, outdir: Path):
    if args.s is None:
        raise argparse.ArgumentTypeError("classify needs --s")
    d = _deformation(args.s)
    th = thresholds(d)
    if args.c is None and args.c_range is None:
        raise argparse.ArgumentTypeError("classify needs --c or --c-range")
    if args.c_range is not None:
        start, step, count = _parse_grid(args.c_range) if isinstance(args.c_range, str) else args.c_range
        cs = [start + step * i for i in range(count)]
    else:
        cs = [args.c]
    rows = []
    for c in cs:
        for desc in classify(d, c):
            rows.append(
                (
                    desc.rep_class.value,
                    c,
                    d.s,
                    desc.N if desc.N is not None else "",
                    desc.k,
                    desc.m_list[0] if desc.m_list else "",
                    desc.m_list[-1] if desc.m_list else "",
                    desc.m_rule,
                )
            )
    out = write_csv(
        outdir / "classify.csv",
        ["class", "c", "s", "N", "k", "m_first", "m_last", "m_rule"],
        rows,
    )
    params = {
        "s": args.s,
        "c": args.c,
        "c_range": list(args.c_range) if isinstance(args.c_range, tuple) else args.c_range,
        "thresholds": {"c0": th.c0, "c1": th.c1, "c2": th.c2},
    }
    return params, [out]


def _cmd_rep(args, outdir: Path):
    if args.s is None or args.c is None or args.basis is None:
        raise argparse.ArgumentTypeError("rep needs --s, --c, and --basis")
    d = _deformation(args.s)
    m0, count = _parse_basis(args.basis) if isinstance(args.basis, str) else args.basis
    try:
        triple = build_rep(d, args.c, [m0 + i for i in range(count)])
    except UnitarityError as exc:
        raise VerificationFailure(str(exc)) from None
    report = verify_algebra(triple, d, args.c)
    payload = {
        "s": args.s,
        "c": args.c,
        "basis": list(triple[0].basis),
        "matrices": {
            "Jz": complex_pairs(triple[0].entries),
            "Jplus": complex_pairs(triple[1].entries),
            "Jminus": complex_pairs(triple[2].entries),
        },
        "report": {k: getattr(report, k) for k in report.__dataclass_fields__},
    }
    out = write_json(outdir / "rep.json", payload)
    if args.verify:
        asserted = (
            report.res_jz_jpm,
            report.res_jp_jm,
            report.res_casimir,
            report.casimir_forms_dev,
            report.hermiticity,
            report.maekawa_shift_dev,
        )
        if any(v > ASSERTED_RESIDUAL_TOL for v in asserted):
            raise VerificationFailure(f"algebra residuals exceed {ASSERTED_RESIDUAL_TOL}: {asserted}")
    return {"s": args.s, "c": args.c, "basis": args.basis, "verify": args.verify}, [out]


def _potential_from_args(args):
    if args.s is None or args.m is None:
        raise argparse.ArgumentTypeError("needs --s and --m (or a potential CSV)")
    d = _deformation(args.s)
    fns = realization(
        d,
        args.m,
        f1_branch=args.f1_branch,
        f2_branch=args.f2_branch,
        F=args.F,
        d1=getattr(args, "d1", 0.0),
        d2=getattr(args, "d2", 0.0),
    )
    grid = _parse_grid(args.grid) if isinstance(args.grid, str) else args.grid
    prof = build_potential(
        d,
        args.m,
        fns,
        grid=grid,
        kappa_mode=args.kappa_mode,
        f1_derivative_form=getattr(args, "f1_derivative_form", "first"),
        transform=getattr(args, "transform", "eliminate"),
    )
    return d, fns, prof


def _cli_potential_params(args, prof):
    grid = prof.params["grid"]
    return {
        "s": args.s,
        "m": args.m,
        "f1_branch": prof.params["f1_branch"],
        "f2_branch": prof.params["f2_branch"],
        "F": args.F,
        "d1": getattr(args, "d1", 0.0),
        "d2": getattr(args, "d2", 0.0),
        "grid": list(grid),
        "kappa_mode": args.kappa_mode,
        "f1_derivative_form": getattr(args, "f1_derivative_form", "first"),
        "transform": getattr(args, "transform", "eliminate"),
    }


def _cmd_potential(args, outdir: Path):
    _, _, prof = _potential_from_args(args)
    rows = zip(prof.r, prof.values, prof.pole_mask)
    out = write_csv(outdir / "potential.csv", ["r", "V", "mask"], rows)
    return _cli_potential_params(args, prof), [out]


def _load_potential_csv(path):
    from .schrodinger import PotentialProfile

    rows = Path(path).read_text(encoding="utf-8").splitlines()[1:]
    r, v, mask = [], [], []
    for row in rows:
        a, b, c = row.split(",")
        r.append(float(a))
        v.append(float(b) if b != "nan" else math.nan)
        mask.append(c == "1")
    r = np.asarray(r)
    step = (r[-1] - r[0]) / (len(r) - 1)
    return PotentialProfile(
        start=float(r[0]),
        step=float(step),
        count=len(r),
        values=np.asarray(v),
        pole_mask=np.asarray(mask, dtype=bool),
        params={"source": str(path)},
        casimir_offset=0.0,
        terms={},
    )


def _cmd_spectrum(args, outdir: Path):
    if args.potential_csv is not None:
        prof = _load_potential_csv(args.potential_csv)
    else:
        if args.s is None or args.m is None:
            raise argparse.ArgumentTypeError("spectrum needs --potential-csv or --s and --m")
        _, _, prof = _potential_from_args(args)
    if not np.all(np.isfinite(prof.values[~prof.pole_mask])):
        raise FloatingPointError("potential contains non-finite unmasked samples")
    if args.cell == "all":
        from .schrodinger import _cells

        cells = list(range(len(_cells(prof.pole_mask))))
    elif args.cell == "largest":
        cells = ["largest"]
    else:
        cells = [int(args.cell)]
    rows = []
    vec_files = []
    for cell in cells:
        res = eigensolve(prof, args.n, cell)
        for k, val in enumerate(res.eigenvalues):
            rows.append((cell, k, val))
        if args.with_vectors:
            vec_rows = [
                tuple(col)
                for col in zip(res.r, *(res.eigenvectors[:, k] for k in range(len(res.eigenvalues))))
            ]
            vec_files.append(
                write_csv(
                    outdir / f"spectrum_vectors_{cell}.csv",
                    ["r"] + [f"psi_{k}" for k in range(len(res.eigenvalues))],
                    vec_rows,
                )
            )
    out = write_csv(outdir / "spectrum.csv", ["cell", "k", "eigenvalue"], rows)
    if args.potential_csv is not None:
        params = {"potential_csv": str(args.potential_csv)}
    else:
        params = _cli_potential_params(args, prof)
    params.update({"n": args.n, "cell": str(args.cell), "with_vectors": bool(args.with_vectors)})
    return params, [out] + vec_files


def _cmd_flow(args, outdir: Path):
    grid = _parse_grid(args.s_grid) if isinstance(args.s_grid, str) else args.s_grid
    start, step, count = grid
    s = start + step * np.arange(count)
    table = spectral_flow(args.m_max, s)
    rows = []
    for i, m in enumerate(table.m_values):
        for j, sv in enumerate(table.s_grid):
            rows.append((sv, m, table.values[i, j]))
    out = write_csv(outdir / "flow.csv", ["s", "m", "value"], rows)
    out2 = write_json(
        outdir / "flow_crossings.json",
        [{"s": c[0], "m_low": c[1], "m_high": c[2]} for c in table.crossings],
    )
    return {"m_max": args.m_max, "s_grid": list(grid)}, [out, out2]


def _cmd_surface(args, outdir: Path):
    if args.c is None:
        raise argparse.ArgumentTypeError("surface needs --c")
    if args.transition:
        grid = _parse_grid(args.s_grid) if isinstance(args.s_grid, str) else args.s_grid
        start, step, count = grid
        s = start + step * np.arange(count)
        s_star = topology_transition(args.c, s)
        out = write_json(
            outdir / "surface_transition.json",
            {"c": args.c, "s_star": s_star, "s_grid": list(grid)},
        )
        return {"c": args.c, "transition": True, "s_grid": list(grid)}, [out]
    if args.s is None:
        raise argparse.ArgumentTypeError("surface needs --s (or --transition)")
    d = _deformation(args.s)
    grid = _parse_grid(args.jz_grid) if isinstance(args.jz_grid, str) else args.jz_grid
    start, step, count = grid
    jz = start + step * np.arange(count)
    sec = level_section(d, args.c, jz)
    rows = [
        (z, x if not mask else "nan", -x if not mask else "nan", mask)
        for z, x, mask in zip(sec.jz, np.nan_to_num(sec.jx), sec.mask)
    ]
    out = write_csv(outdir / "surface.csv", ["Jz", "Jx_plus", "Jx_minus", "mask"], rows)
    return {
        "c": args.c,
        "s": args.s,
        "jz_grid": list(grid),
        "connectivity": sec.connectivity,
        "components": sec.components,
    }, [out]


def _cmd_hopf(args, outdir: Path):
    params = {
        "alpha": args.alpha,
        "profile": args.profile,
        "c": args.c,
        "dim": args.dim,
        "what": args.what,
    }
    profile_params = {}
    if args.profile == "constant":
        profile_params["b0"] = args.b0
        params["b0"] = args.b0
    elif args.profile == "geometric":
        profile_params["f0"] = args.f0
        params["f0"] = args.f0
    elif args.profile == "sech":
        gd0 = GenDeformation(alpha=args.alpha, profile="constant")
        win0 = unitarity_window(args.c, gd0)
        width = win0.f_max - win0.f_min
        f_lo = args.f_lo if args.f_lo is not None else max(1.02, win0.f_min + 0.05 * width)
        f_hi = args.f_hi if args.f_hi is not None else max(win0.f_max - 0.05 * width, f_lo + 0.1)
        profile_params.update({"f_lo": f_lo, "f_hi": f_hi})
        params.update({"f_lo": f_lo, "f_hi": f_hi})
    gd = GenDeformation(alpha=args.alpha, profile=args.profile, profile_params=profile_params)
    outputs = []

    if args.what in ("all", "window"):
        win = unitarity_window(args.c, gd)
        outputs.append(
            write_json(
                outdir / "hopf_window.json",
                {k: getattr(win, k) for k in win.__dataclass_fields__} | {"q1": gd.q1, "c": args.c},
            )
        )
    if args.what in ("all", "spectrum"):
        start, step, count = (
            _parse_grid(args.m_range) if isinstance(args.m_range, str) else args.m_range
        )
        ms = start + step * np.arange(count)
        spec = spectrum_2jz(gd, ms)
        outputs.append(write_csv(outdir / "hopf_spectrum.csv", ["m", "value"], zip(ms, spec)))
        outputs.append(
            write_json(outdir / "hopf_accumulation.json", detect_accumulation(ms, spec))
        )
    if args.what in ("all", "axioms"):
        rep = build_gen_rep(gd, args.dim, args.c)
        report = hopf_axiom_report(gd, rep)
        cas = casimir_gen(gd, rep)
        diag = np.real(np.diag(cas))
        inner = diag[2:-2]
        payload = {k: getattr(report, k) for k in report.__dataclass_fields__}
        payload["casimir_diag_drift"] = float(inner.max() - inner.min()) if inner.size else 0.0
        payload["q1"] = gd.q1
        outputs.append(write_json(outdir / "hopf_axioms.json", payload))
        if report.coassoc_jp > ASSERTED_RESIDUAL_TOL or report.counit_jp > ASSERTED_RESIDUAL_TOL:
            raise VerificationFailure("coassociativity/counit residual exceeded tolerance")
    return params, outputs


DISPATCH = {
    "classify": _cmd_classify,
    "rep": _cmd_rep,
    "potential": _cmd_potential,
    "spectrum": _cmd_spectrum,
    "flow": _cmd_flow,
    "surface": _cmd_surface,
    "hopf": _cmd_hopf,
}


def _rerun(manifest_path: str, outdir_flag):
    manifest = json.loads(Path(manifest_path).read_text(encoding="utf-8"))
    sub = manifest["subcommand"]
    params = manifest["params"]
    argv = [sub]
    skip = {"thresholds", "connectivity", "components", "constants", "kappa", "regime"}
    for key, value in params.items():
        if value is None or key in skip:
            continue
        flag = "--" + key.replace("_", "-")
        if isinstance(value, bool):
            if value:
                argv.append(flag)
        elif isinstance(value, (list, tuple)) and len(value) == 3:
            start, step, count = value
            argv.append(f"{flag}={start}:{start + step * (count - 1)}:{step}")
        else:
            # single-token form so values with a leading dash parse
            argv.append(f"{flag}={value}")
    if outdir_flag:
        argv.append(f"--outdir={outdir_flag}")
    return main(argv)


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    # config supplies parse-time defaults; explicit flags override them
    cfg_path = _extract_config(argv)
    ap = build_parser(_config_defaults(cfg_path) if cfg_path else None)
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0

    outdir = Path(args.outdir or os.environ.get("QSU2_OUTDIR", "."))
    outdir.mkdir(parents=True, exist_ok=True)

    if args.command == "rerun":
        return _rerun(args.manifest, args.outdir)

    try:
        params, outputs = DISPATCH[args.command](args, outdir)
    except argparse.ArgumentTypeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except (SingularDeformation, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (FloatingPointError, OverflowError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    write_manifest(outdir, args.command, params, outputs, __version__)
    for path in outputs:
        print(f"wrote {path}")
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
