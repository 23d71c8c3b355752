"""Command-line front end: ``rigidity <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 input error, 3 numerical failure.
Failures print a single line ``rigidity: error[<kind>]: <reason>`` to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .abgroup import ExtensionBoundError
from .classify import ClassificationError, ClassificationQuery, classify, classify_model
from .config import ConfigError, load_config
from .exactseq import DataFileError, ExactSequenceError, GroupDataFile, Hint, InconsistencyError, derive_query
from .invariants import (GapClosureError, LoopSpec, ResolutionError, _parse_angle, cycle_windings,
                         det_winding, trim_signs)
from .linearize import linearize_channel_major, linearize_collinear
from .model import BUILTIN_MODELS, ModelError, load_builtin, load_model
from .polynomial import RigidityPolynomial
from .spectral import RankDeficientError, flatten, gap_map, maxwell_index, singular_spectrum, zero_locus
from .symmetry import (EquivarianceSpec, SymmetryClass, anisotropic_rotation_specs, detect_class,
                       verify_equivariance)

FMT = "{:.12e}"


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class NumericalError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _f(x: float) -> str:
    return FMT.format(float(x))


def _c(z: complex) -> str:
    z = complex(z)
    return f"{_f(z.real)}{'+' if z.imag >= 0 or np.isnan(z.imag) else '-'}{FMT.format(abs(z.imag))}j"


def _parse_k(text: str, dim: int | None = None) -> np.ndarray:
    try:
        k = np.array([_parse_angle(v) for v in text.replace(" ", "").split(",") if v], dtype=float)
    except ValueError:
        raise InputError(f"cannot parse momentum {text!r}") from None
    if dim is not None and len(k) != dim:
        raise InputError(f"momentum {text!r} has {len(k)} components, expected {dim}")
    return k


# -- input resolution ------------------------------------------------------


def _add_source(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--coeffs", help="coefficient JSON file")
    g.add_argument("--model", help="model JSON file")
    g.add_argument("--builtin", choices=BUILTIN_MODELS, help="built-in model")
    p.add_argument("--layout", choices=("channel-major", "interleaved"), default="channel-major",
                   help="row/column layout for models (default channel-major)")


def _load_model_arg(args):
    if getattr(args, "builtin", None):
        return load_builtin(args.builtin)
    try:
        return load_model(args.model)
    except OSError as exc:
        raise InputError(f"cannot read model {args.model}: {exc.strerror}") from None


def _load_poly(args) -> tuple[RigidityPolynomial, str]:
    if args.coeffs:
        try:
            text = Path(args.coeffs).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read coefficients {args.coeffs}: {exc.strerror}") from None
        try:
            return RigidityPolynomial.from_json(text), Path(args.coeffs).name
        except json.JSONDecodeError as exc:
            raise InputError(f"{args.coeffs}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{args.coeffs}: bad coefficient file: {exc}") from None
    model = _load_model_arg(args)
    lin = linearize_channel_major if args.layout == "channel-major" else linearize_collinear
    return lin(model), model.name


# -- output ----------------------------------------------------------------


def _emit(args, text: str, obj=None):
    if args.json and obj is not None:
        text = json.dumps(obj, indent=2)
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        if not args.quiet:
            print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)


def _matrix_text(a: np.ndarray) -> str:
    return "\n".join("  ".join(_c(z) for z in row) for row in a)


def _matrix_obj(a: np.ndarray) -> dict:
    return {"re": [[float(v) for v in row] for row in a.real],
            "im": [[float(v) for v in row] for row in a.imag]}


# -- subcommands -----------------------------------------------------------


def cmd_build(args, cfg):
    model = _load_model_arg(args)
    r = linearize_channel_major(model) if args.layout == "channel-major" else linearize_collinear(model)
    _emit(args, r.to_json())


def cmd_eval(args, cfg):
    r, _ = _load_poly(args)
    k = _parse_k(args.k, r.dim)
    a = r.evaluate(k, strict=True)
    head = "# r(k) at k = (" + ", ".join(_f(v) for v in k) + ") radians"
    _emit(args, head + "\n" + _matrix_text(a), {"k": k.tolist(), "matrix": _matrix_obj(a)})


def cmd_class(args, cfg):
    r, name = _load_poly(args)
    rep = detect_class(r, args.tol or cfg.symmetry_tol)
    nu = maxwell_index(r, tol=cfg.tol)
    res = ", ".join(f"{k}={_f(v)}" for k, v in rep.residuals.items())
    text = f"{rep.symclass.label}\nnu={nu} (N={r.cols}, M={r.rows})\nresiduals: {res}"
    _emit(args, text, {"source": name, "class": rep.symclass.label, "nu": nu,
                       "residuals": rep.residuals})


def _load_spec(args, r) -> tuple[EquivarianceSpec, str]:
    spec = args.spec
    if spec.startswith("rotation:"):
        key = spec.split(":", 1)[1]
        specs = anisotropic_rotation_specs()
        if key not in specs:
            raise InputError(f"unknown rotation variant {key!r}; choose from {', '.join(specs)}")
        if (r.rows, r.cols) != (12, 4):
            raise InputError("rotation variants act on the 12x4 channel-major anisotropic matrix")
        return specs[key], spec
    if spec.lower() in ("bdi", "cii", "aiii/bdi", "aiii/cii"):
        try:
            return EquivarianceSpec.standard(SymmetryClass.parse(spec), r.rows, r.cols), spec
        except ValueError as exc:
            raise InputError(str(exc)) from None
    try:
        obj = json.loads(Path(spec).read_text(encoding="utf-8"))
        return EquivarianceSpec.from_json_obj(obj), Path(spec).name
    except OSError as exc:
        raise InputError(f"cannot read spec {spec}: {exc.strerror}") from None
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise InputError(f"bad equivariance spec {spec}: {exc}") from None


def _verify_all_rotations(args, r):
    if (r.rows, r.cols) != (12, 4):
        raise InputError("rotation variants act on the 12x4 channel-major anisotropic matrix")
    lines, obj = [], []
    for key, spec in anisotropic_rotation_specs().items():
        res = verify_equivariance(r, spec, grid=args.grid or 32, tol=args.tol or 1e-12)
        lines.append(f"{'PASS' if res.passed else 'FAIL'} spec=rotation:{key} max_residual={_f(res.max_residual)}")
        obj.append({"spec": f"rotation:{key}", "passed": res.passed, "max_residual": res.max_residual})
    holding = [o["spec"] for o in obj if o["passed"]]
    lines.append("holds: " + (", ".join(holding) if holding else "none"))
    _emit(args, "\n".join(lines), {"variants": obj, "holds": holding})
    if not holding:
        raise NumericalError("no rotation variant holds")


def cmd_verify(args, cfg):
    r, _ = _load_poly(args)
    if args.spec == "rotation":
        return _verify_all_rotations(args, r)
    spec, label = _load_spec(args, r)
    try:
        res = verify_equivariance(r, spec, grid=args.grid or cfg.verify_grid, tol=args.tol or 1e-12)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    text = (f"{'PASS' if res.passed else 'FAIL'} spec={label} max_residual={_f(res.max_residual)} "
            f"worst_k=({', '.join(_f(v) for v in res.worst_k)})")
    _emit(args, text, {"spec": label, "passed": res.passed, "max_residual": res.max_residual,
                       "worst_k": list(res.worst_k)})
    if not res.passed:
        raise NumericalError(f"equivariance violated: residual {res.max_residual:.3e}")


def _gnuplot_script(csv_name: str, d: int, n_sig: int) -> str:
    lines = ["# gnuplot script generated by rigidity gapmap; momenta in radians",
             "set datafile separator ','",
             f"set key autotitle columnhead"]
    if d == 1:
        lines += ["set xlabel 'k1 (rad)'", "set ylabel 'singular value'",
                  "plot " + ", ".join(f"'{csv_name}' using 1:{2 + i} with lines" for i in range(n_sig))]
    elif d == 2:
        lines += ["set xlabel 'k1 (rad)'", "set ylabel 'k2 (rad)'", "set view map", "set pm3d",
                  f"splot '{csv_name}' using 1:2:{2 + n_sig} with pm3d title 'sigma_min'"]
    else:
        lines += [f"# d={d}: plot the slice k3 = const, e.g.",
                  f"splot '{csv_name}' using 1:2:($3==0 ? ${d + n_sig} : 1/0) with points title 'sigma_min'"]
    return "\n".join(lines) + "\n"


def cmd_gapmap(args, cfg):
    r, _ = _load_poly(args)
    grid = args.grid or cfg.grid_for(r.dim)
    gm = gap_map(r, grid, args.tol or cfg.tol)
    obj = {"grid": grid, "header": gm.header(), "min_sigma": float(gm.min_sigma.min()),
           "max_rank": gm.max_rank}
    if args.json:
        obj["rows"] = [[*map(float, k), *map(float, s), int(rk)] for k, s, rk in zip(gm.ks, gm.sigmas, gm.ranks)]
    _emit(args, gm.to_csv(), obj)
    if args.out and not args.json:
        gp = Path(args.out).with_suffix(".gp")
        gp.write_text(_gnuplot_script(Path(args.out).name, r.dim, gm.sigmas.shape[1]), encoding="utf-8")
        if not args.quiet:
            print(f"wrote {gp}")


def cmd_zeros(args, cfg):
    r, _ = _load_poly(args)
    grid = args.grid or cfg.grid_for(r.dim)
    pts = zero_locus(r, grid, args.tol or cfg.tol)
    lines = ["# rank-deficient grid momenta in radians", ",".join(f"k{i + 1}" for i in range(r.dim))]
    lines += [",".join(_f(v) for v in p) for p in pts]
    _emit(args, "\n".join(lines), {"grid": grid, "count": len(pts), "points": pts.tolist()})
    if not args.quiet and not args.out and not args.json:
        print(f"# {len(pts)} points")


def cmd_flatten(args, cfg):
    r, _ = _load_poly(args)
    k = _parse_k(args.k, r.dim)
    fr = flatten(r.evaluate(k), args.tol or cfg.tol)
    q = fr.as_matrix()
    head = (f"# flattened r(k) at k = ({', '.join(_f(v) for v in k)}) radians; "
            f"frame in V_{fr.Q.shape[1]}(C^{fr.Q.shape[0]}); defect {_f(fr.orthonormality_defect())}")
    _emit(args, head + "\n" + _matrix_text(q),
          {"k": k.tolist(), "frame": _matrix_obj(fr.Q), "adjoint": fr.adjoint,
           "defect": fr.orthonormality_defect()})


def _basepoint(args, dim):
    return _parse_k(args.basepoint, dim) if args.basepoint else np.zeros(dim)


def cmd_invariant(args, cfg):
    r, _ = _load_poly(args)
    res = args.resolution or cfg.loop_resolution
    out, obj = [], {}
    if args.trims:
        signs = trim_signs(r, cfg.tol)
        for t, s in signs.items():
            out.append(f"trim ({', '.join(_f(v) for v in t)}) sign {s:+d}")
        obj["trim_signs"] = [{"trim": list(t), "sign": s} for t, s in signs.items()]
    if args.loop:
        try:
            loop = LoopSpec.parse(args.loop, r.dim, res)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        w = det_winding(r, loop, cfg.tol)
        out.append(f"winding {w} along {args.loop}")
        obj["winding"] = w
    elif not args.trims:
        ws = cycle_windings(r, res, _basepoint(args, r.dim), cfg.tol)
        out.append("cycle windings " + " ".join(str(w) for w in ws))
        obj["cycle_windings"] = list(ws)
    _emit(args, "\n".join(out), obj)


def cmd_classify(args, cfg):
    try:
        q = ClassificationQuery(SymmetryClass.parse(args.symclass), args.nu, args.d, args.m)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    v = classify(q)
    text = str(v) if args.quiet else f"{v}\nrule: {v.rule}\nnote: {v.note}"
    _emit(args, text, {"class": q.symclass.label, "abs_nu": q.abs_nu, "d": q.d, "m": q.m,
                       "verdict": str(v), "kind": v.kind, "rule": v.rule, "note": v.note})


def cmd_derive(args, cfg):
    data = GroupDataFile.builtin()
    if args.data:
        data = data.merged(GroupDataFile.load(args.data))
    hints = [Hint.parse(h, args.hint_provenance) for h in args.hint or []]
    dv = derive_query(args.query, data, hints)
    res = dv.result
    obj = {"query": str(dv.query), "rewritten": str(dv.rewritten), "slot": dv.slot,
           "status": res.status, "candidates": [str(g) for g in res.candidates],
           "trace": [str(e) for e in dv.report.trace]}
    text = "\n".join(dv.trace_lines()) if not args.quiet else str(res)
    _emit(args, text, obj)


def build_report(r: RigidityPolynomial, name: str, cfg) -> tuple[str, dict]:
    lines = [f"model: {name}", f"shape: M={r.rows} rows, N={r.cols} columns, d={r.dim}, "
             f"{len(r.coeffs)} coefficient offsets"]
    mc = classify_model(r, cfg.symmetry_tol)
    grid = cfg.grid_for(r.dim)
    gm = gap_map(r, grid, cfg.tol)
    zl = gm.ks[gm.ranks < gm.max_rank]
    lines.append(f"whole matrix: {mc.whole.summary()}; signed nu={mc.whole.nu}")
    lines.append(f"  rule: {mc.whole.verdict.rule if mc.whole.verdict else '-'}; "
                 f"note: {mc.whole.verdict.note if mc.whole.verdict else mc.whole.error}")
    lines.append(f"independent blocks: {len(mc.blocks)}")
    blocks_obj = []
    for i, b in enumerate(mc.blocks):
        lines.append(f"  block {i}: rows {b.rows} cols {b.cols}: {b.summary()}; signed nu={b.nu}")
        if b.verdict:
            lines.append(f"    rule: {b.verdict.rule}; note: {b.verdict.note}")
        blocks_obj.append(_block_obj(b))
    if mc.isolated_rows or mc.isolated_cols:
        lines.append(f"  isolated rows {mc.isolated_rows} cols {mc.isolated_cols}")
    lines.append(f"gap map: {grid} points per axis (momenta in radians), min sigma_min "
                 f"{_f(gm.min_sigma.min())}, max rank {gm.max_rank}, {len(zl)} rank-deficient points")
    sample = [[float(v) for v in p] for p in zl[:5]]
    for p in sample:
        lines.append("  zero-locus sample (" + ", ".join(_f(v) for v in p) + ")")
    inv = {}
    if r.rows == r.cols:
        try:
            ws = cycle_windings(r, cfg.loop_resolution, None, cfg.tol)
            inv["cycle_windings"] = list(ws)
            lines.append("diagnostics: det windings along axis cycles " + " ".join(map(str, ws)))
        except (GapClosureError, ResolutionError) as exc:
            inv["cycle_windings"] = str(exc)
            lines.append(f"diagnostics: det windings unavailable ({exc})")
    else:
        inv["cycle_windings"] = "not square"
        lines.append("diagnostics: det windings need a square matrix")
    lines.append("note: windings are diagnostics, not complete invariants of the equivariant classes")
    obj = {"model": name, "rows": r.rows, "cols": r.cols, "dim": r.dim,
           "whole": _block_obj(mc.whole), "blocks": blocks_obj,
           "gap": {"grid": grid, "min_sigma": float(gm.min_sigma.min()), "max_rank": gm.max_rank,
                   "zero_points": int(len(zl)), "zero_sample": sample},
           "diagnostics": inv}
    return "\n".join(lines), obj


def _block_obj(b) -> dict:
    return {"rows": b.rows, "cols": b.cols, "class": b.symclass.label, "nu": b.nu, "abs_nu": b.abs_nu,
            "d": b.d, "m": b.m, "verdict": str(b.verdict) if b.verdict else None,
            "rule": b.verdict.rule if b.verdict else None,
            "note": b.verdict.note if b.verdict else b.error}


def cmd_report(args, cfg):
    r, name = _load_poly(args)
    text, obj = build_report(r, name, cfg)
    _emit(args, text, obj)


def cmd_selftest(args, cfg):
    from .acceptance import format_results, run_all
    results = run_all()
    _emit(args, format_results(results),
          {"criteria": [{"number": c.number, "title": c.title, "passed": c.passed, "detail": c.detail}
                        for c in results]})
    failed = [c.number for c in results if not c.passed]
    if failed:
        raise NumericalError(f"acceptance criteria failed: {', '.join(map(str, failed))}")


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write output to this file")
    common.add_argument("--config", help="JSON config overriding the defaults")
    common.add_argument("--quiet", action="store_true", help="minimal output")
    common.add_argument("--json", action="store_true", help="machine-readable JSON output")

    p = _Parser(prog="rigidity", description="Rigidity matrices of frustrated spin models: "
                "spectra, symmetry classes, invariants and homotopy classification.")
    p.add_argument("--version", action="version", version=f"rigidity {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    s = sub.add_parser("build", parents=[common], help="linearize a model into a coefficient file")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--model")
    g.add_argument("--builtin", choices=BUILTIN_MODELS)
    s.add_argument("--layout", choices=("channel-major", "interleaved"), default="channel-major")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("eval", parents=[common], help="evaluate r(k)")
    _add_source(s)
    s.add_argument("--k", required=True, help='momentum, e.g. "0.5,1.0" or "pi,pi/2"')
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("class", parents=[common], help="detect the symmetry class")
    _add_source(s)
    s.add_argument("--tol", type=float)
    s.set_defaults(func=cmd_class)

    s = sub.add_parser("verify", parents=[common], help="check an equivariance condition on a grid")
    _add_source(s)
    s.add_argument("--spec", required=True,
                   help="JSON file with U_M/U_N, a class name (BDI, CII), rotation:<A+B|B+A|A+A|B+B>, "
                   "or rotation (all variants)")
    s.add_argument("--grid", type=int)
    s.add_argument("--tol", type=float)
    s.set_defaults(func=cmd_verify)

    for name, fn, helptext in (("gapmap", cmd_gapmap, "singular values on a grid (CSV)"),
                               ("zeros", cmd_zeros, "rank-deficient grid points")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        _add_source(s)
        s.add_argument("--grid", type=int)
        s.add_argument("--tol", type=float)
        s.set_defaults(func=fn)

    s = sub.add_parser("flatten", parents=[common], help="polar factor of r(k)")
    _add_source(s)
    s.add_argument("--k", required=True)
    s.add_argument("--tol", type=float)
    s.set_defaults(func=cmd_flatten)

    s = sub.add_parser("invariant", parents=[common], help="determinant windings and TRIM signs")
    _add_source(s)
    s.add_argument("--loop", help='"axis=0;fixed=pi" or "points=0,0|3.14,0|6.28,0"')
    s.add_argument("--resolution", type=int)
    s.add_argument("--basepoint", help="base point of the axis cycles (default 0)")
    s.add_argument("--trims", action="store_true", help="signs at TRIMs (1x1 AIII/BDI only)")
    s.set_defaults(func=cmd_invariant)

    s = sub.add_parser("classify", parents=[common], help="look up a classification cell")
    s.add_argument("--class", dest="symclass", required=True, help="AIII, AIII/BDI or AIII/CII")
    s.add_argument("--nu", type=int, required=True, help="|nu|")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--m", type=int, required=True, help="max(M, N)")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("derive", parents=[common], help="exact-sequence derivation of a query")
    s.add_argument("--query", required=True, help='e.g. "pi0 (Omega^1 V_1(C^1))^Z2 [BDI]"')
    s.add_argument("--data", help="extra group data JSON (takes precedence over built-in data)")
    s.add_argument("--hint", action="append", help='e.g. "pair@level0=Z" (repeatable)')
    s.add_argument("--hint-provenance", default="user")
    s.set_defaults(func=cmd_derive)

    s = sub.add_parser("report", parents=[common], help="full pipeline report")
    _add_source(s)
    s.set_defaults(func=cmd_report)

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance criteria")
    s.set_defaults(func=cmd_selftest)
    return p


def _one_line(msg) -> str:
    return " ".join(str(msg).split())


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args.config)
        args.func(args, cfg)
        return 0
    except UsageError as exc:
        print(f"rigidity: error[usage]: {_one_line(exc)}", file=sys.stderr)
        return 1
    except (InputError, ModelError, ConfigError, ClassificationError, DataFileError,
            KeyError, FileNotFoundError) as exc:
        print(f"rigidity: error[input]: {_one_line(exc.args[0] if isinstance(exc, KeyError) else exc)}",
              file=sys.stderr)
        return 2
    except (NumericalError, GapClosureError, ResolutionError, RankDeficientError, InconsistencyError,
            ExtensionBoundError) as exc:
        print(f"rigidity: error[numerical]: {_one_line(exc)}", file=sys.stderr)
        return 3
    except (ExactSequenceError, ValueError) as exc:
        print(f"rigidity: error[input]: {_one_line(exc)}", file=sys.stderr)
        return 2


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
