"""Command-line front end.

Exit codes: 0 success, 1 usage error (bad flags, unwritable path, depth
limit), 2 numeric or consistency failure (including a failing report).
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import curve, energy, export, laplacian, measure, spectral
from .errors import ArrowheadError, DepthLimitError, UsageError

TEST_FUNCTIONS = {
    "quadratic": lambda s: s * (1 - s),
    "sine": lambda s: np.sin(np.pi * s),
    "linear": lambda s: s,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _floats(text: str, n: int | None = None):
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if n is not None and len(vals) != n:
        raise argparse.ArgumentTypeError(f"expected {n} values, got {len(vals)}")
    return vals


def _boundary(text):
    return _floats(text, 4)


def _weights(text):
    return _floats(text, 3)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="arrowhead", description="Arrowhead curve graphs, energies and Dirichlet spectra.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def out_opt(sp):
        sp.add_argument("--out", help="output file (default: standard output)")

    sp = sub.add_parser("build", help="vertex chain as CSV")
    sp.add_argument("--level", type=int, required=True)
    out_opt(sp)

    sp = sub.add_parser("render", help="SVG drawing of the chain")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--overlay", choices=("none", "eigenfunction", "harmonic"), default="none")
    sp.add_argument("--mode", type=int, default=0, help="eigenfunction index in the sorted spectrum")
    sp.add_argument("--boundary", type=_boundary, default=[1.0, 0.0, 0.0, 0.0], help="V1 values a,b,c,d")

    sp = sub.add_parser("energy", help="energies of harmonic extensions")
    sp.add_argument("--boundary", type=_boundary, default=[0.0, 1 / 3, 2 / 3, 1.0])
    sp.add_argument("--levels", type=int, default=6, help="last level")
    sp.add_argument("--scheme", choices=energy.KINDS + ("all",), default="all")
    out_opt(sp)

    sp = sub.add_parser("harmonic", help="harmonic extension of V1 data")
    sp.add_argument("--boundary", type=_boundary, required=True)
    sp.add_argument("--level", type=int, required=True)
    out_opt(sp)

    sp = sub.add_parser("laplacian", help="pointwise Laplacian estimator f_m")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--function", choices=sorted(TEST_FUNCTIONS), default="sine")
    sp.add_argument("--scheme", choices=energy.KINDS, default="renormalized")
    sp.add_argument("--weights", type=_weights, default=None)
    sp.add_argument("--shared-rule", choices=measure.SHARED_RULES, default="halved")
    out_opt(sp)

    sp = sub.add_parser("spectrum", help="Dirichlet spectrum of -Delta_m")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--method", choices=("numeric", "exact"), default="numeric")
    sp.add_argument("--boundary", choices=spectral.BOUNDARIES, default="V1")
    out_opt(sp)

    sp = sub.add_parser("decimate", help="spectral decimation maps")
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--up", type=float, help="parent eigenvalue in [0, 4]")
    grp.add_argument("--down", type=float, help="child eigenvalue")
    out_opt(sp)

    sp = sub.add_parser("counting", help="eigenvalue counting function and Weyl fit")
    sp.add_argument("--m-max", type=int, default=7)
    sp.add_argument("--m-min", type=int, default=4)
    sp.add_argument("--scaling", choices=spectral.SCALINGS, default="geometric")
    out_opt(sp)

    sp = sub.add_parser("report", help="full reproduction report")
    sp.add_argument("--depth", type=int, default=5)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    out_opt(sp)
    return p


def _check_writable(path):
    if path is None:
        return
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory) or not os.access(directory, os.W_OK):
        raise UsageError(f"cannot write to {path!r}")


def _emit(text: str, path, stdout) -> None:
    if path is None:
        stdout.write(text)
    else:
        export.write_atomic(path, text)


def _cmd_build(args, stdout, stderr):
    _emit(export.vertices_csv(curve.build_level(args.level)), args.out, stdout)


def _cmd_render(args, stdout, stderr):
    level = curve.build_level(args.level)
    overlay = None
    if args.overlay == "eigenfunction":
        vals, vecs = spectral.dirichlet_eigenpairs(args.level)
        if not 0 <= args.mode < len(vals):
            raise UsageError(f"--mode must be in 0..{len(vals) - 1}")
        overlay = vecs[:, args.mode]
    elif args.overlay == "harmonic":
        overlay = energy.harmonic_extension(args.boundary, args.level)
    export.render_svg(level, args.out, overlay)


def _cmd_energy(args, stdout, stderr):
    kinds = energy.KINDS if args.scheme == "all" else (args.scheme,)
    rows = []
    for kind in kinds:
        rows.extend(energy.normalized_energy_sequence(args.boundary, args.levels, kind).rows())
    _emit(export.csv_text(("level", "scheme", "energy", "ratio"), rows), args.out, stdout)


def _cmd_harmonic(args, stdout, stderr):
    u = energy.harmonic_extension(args.boundary, args.level)
    s = curve.build_level(args.level).arc_coordinates
    rows = ((i + 1, s[i], u[i]) for i in range(u.size))
    _emit(export.csv_text(("chain_index", "arc_coordinate", "value"), rows), args.out, stdout)


def _cmd_laplacian(args, stdout, stderr):
    weights = args.weights if args.weights is not None else (1 / 3, 1 / 3, 1 / 3)
    model = measure.MeasureModel(tuple(weights), args.shared_rule)
    u = laplacian.sample(TEST_FUNCTIONS[args.function], args.level)
    f = laplacian.pointwise_laplacian(args.level, u, args.scheme, model)
    s = curve.build_level(args.level).arc_coordinates
    rows = ((i, s[i - 1], v) for i, v in zip(f.chain_indices, f.values))
    _emit(export.csv_text(("chain_index", "arc_coordinate", "f_m"), rows), args.out, stdout)


def _cmd_spectrum(args, stdout, stderr):
    curve.check_depth(args.level)
    if args.method == "numeric":
        spec = spectral.dirichlet_spectrum_numeric(args.level, args.boundary)
    else:
        spec = spectral.dirichlet_spectrum_exact(args.level, args.boundary)
    rows = [(args.level, k, v, mult) for k, (v, mult) in enumerate(spec.grouped(), start=1)]
    _emit(export.csv_text(("level", "k", "eigenvalue", "multiplicity"), rows), args.out, stdout)


def _cmd_decimate(args, stdout, stderr):
    if args.up is not None:
        br = spectral.decimate_up(args.up)
        rows = [(br.parent, n, c) for n, c in enumerate(br.children)]
    else:
        parent = spectral.decimate_down(args.down)
        rows = [(parent, None, args.down)]
        if 0 <= parent <= 4:
            kids = spectral.decimate_up(parent).children
            rows = [(parent, int(np.argmin([abs(k - args.down) for k in kids])), args.down)]
    if args.out is None:
        # 12 significant digits for reading; files keep full precision
        text = "parent,branch,child\n" + "".join(
            f"{p:.12g},{'' if n is None else n},{c:.12g}\n" for p, n, c in rows
        )
        stdout.write(text)
    else:
        export.write_atomic(args.out, export.csv_text(("parent", "branch", "child"), rows))


def _cmd_counting(args, stdout, stderr):
    series = spectral.counting_function(args.m_max, args.scaling, m_min=args.m_min)
    rows = [(x, n, args.scaling) for x, n in series.samples]
    _emit(export.csv_text(("x", "N", "scaling"), rows), args.out, stdout)
    try:
        fit = spectral.weyl_fit(series)
    except ArrowheadError:
        return
    ref = fit.reference
    stderr.write(
        f"alpha fit ({args.scaling}, levels {fit.levels[0]}..{fit.levels[-1]}): {fit.alpha:.6f}; "
        f"identity ln3/ln(5/3) = {ref['identity_geometric']:.6f}, arclength 0.5, "
        f"gasket ln3/ln5 = {ref['gasket']:.6f}, printed formula = {ref['printed_formula']:.6f}\n"
    )


def _cmd_report(args, stdout, stderr):
    from .report import export_report

    if args.depth < 4:
        raise UsageError("--depth must be at least 4")
    rep = export_report(args.depth)
    text = rep.to_json() if args.format == "json" else rep.to_text()
    _emit(text, args.out, stdout)
    return 0 if rep.ok else 2


COMMANDS = {
    "build": _cmd_build, "render": _cmd_render, "energy": _cmd_energy, "harmonic": _cmd_harmonic,
    "laplacian": _cmd_laplacian, "spectrum": _cmd_spectrum, "decimate": _cmd_decimate,
    "counting": _cmd_counting, "report": _cmd_report,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        _check_writable(getattr(args, "out", None))
        for name in ("level", "levels", "m_max", "depth"):
            value = getattr(args, name, None)
            if value is not None:
                curve.check_depth(value)
        return COMMANDS[args.command](args, stdout, stderr) or 0
    except (UsageError, DepthLimitError) as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    except ArrowheadError as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
