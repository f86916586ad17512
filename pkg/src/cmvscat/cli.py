"""Command-line front end.

Five commands over the library pipeline: inverse, direct, roundtrip,
spectrum, check. The CLI parses inputs, wires configuration and writes
reports; every number it emits comes from a library call.

Exit codes: 0 success, 2 input problem, 3 numerical failure.
"""

import argparse
import sys

import numpy as np

from . import cmv, fileio, scattering, spectral
from .circle import CircleGrid, szego_check
from .config import RunConfig
from .errors import INPUT_ERRORS, NUMERICAL_ERRORS, InputError
from .families import from_string
from .verblunsky import convergence_report, inverse_scattering
from .checks import run_full_suite

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3


def _add_common(p):
    p.add_argument("--config", help="JSON file with RunConfig overrides")
    p.add_argument("--grid", type=int, help="grid size M (power of two)")
    p.add_argument("--levels", type=int,
                   help="level half-window J (spectrum: the level n)")
    p.add_argument("--window", type=int, help="basis half-window W")
    p.add_argument("--depth", type=int, help="wandering-vector depth")
    p.add_argument("--out", help="output path ('-' for stdout)")
    p.add_argument("--format", dest="fmt", choices=("json", "csv"))


def _config_from(args):
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    over = {}
    if getattr(args, "grid", None):
        over["grid_size"] = args.grid
    if getattr(args, "levels", None):
        over["levels"] = args.levels
    if getattr(args, "window", None):
        over["cmv_window"] = args.window
    if getattr(args, "depth", None):
        over["depth"] = args.depth
    if getattr(args, "out", None):
        over["out"] = args.out
    if getattr(args, "fmt", None):
        over["fmt"] = args.fmt
    return cfg.replace(**over)


def _load_input(args, cfg):
    if getattr(args, "input", None):
        return fileio.load_scattering(args.input, cfg.grid_size)
    if getattr(args, "family", None):
        return from_string(args.family, CircleGrid(cfg.grid_size))
    raise InputError("provide --input FILE or --family SPEC")


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        fileio.write_text(path, text)


def _require_szego(R, cfg):
    rep = szego_check(R)
    if not rep.passes:
        raise InputError(
            f"Szego condition fails: sup |R| = {rep.sup_modulus:.6g}, "
            f"log-integral = {rep.log_integral:.6g}"
        )
    if rep.margin < cfg.margin_min:
        raise InputError(
            f"contractivity margin {rep.margin:.3e} below margin_min "
            f"{cfg.margin_min:.1e}"
        )


def cmd_inverse(args):
    cfg = _config_from(args)
    R = _load_input(args, cfg)
    _require_szego(R, cfg)
    seq = inverse_scattering(R, cfg.levels, cfg)
    _emit(fileio.save_alphas(seq), cfg.out)
    report = {"convergence": convergence_report(seq),
              "diagnostics": seq.diagnostics}
    if args.report:
        _emit(fileio.save_report(report), args.report)
    print(
        f"inverse: {len(seq.alphas)} coefficients over [{seq.lo}, {seq.hi}], "
        f"max |alpha| = {np.max(np.abs(seq.alphas)):.6g}",
        file=sys.stderr,
    )
    return EXIT_OK


def _parse_zgrid(args, cfg):
    if args.z:
        return np.array([complex(part) for part in args.z.split(";") if part])
    if args.ring_radius is None and args.ring_count is None:
        return None  # boundary reconstruction on the full grid
    radius = args.ring_radius if args.ring_radius is not None else 0.9
    count = args.ring_count if args.ring_count is not None else cfg.grid_size
    theta = 2.0 * np.pi * np.arange(count) / count
    return radius * np.exp(1j * theta)


def cmd_direct(args):
    cfg = _config_from(args)
    seq = fileio.load_alphas(args.alphas)
    zgrid = _parse_zgrid(args, cfg)
    if zgrid is None:
        grid = CircleGrid(cfg.grid_size)
        values = scattering.boundary_reconstruction(
            seq, grid, cfg.cmv_window, cfg.depth
        )
        zs = grid.nodes
    else:
        values = scattering.direct_scattering(
            seq, zgrid, cfg.cmv_window, cfg.depth, cfg.boundary
        )
        zs = zgrid
    _emit(fileio.save_reconstruction(zs, values, cfg.fmt), cfg.out)
    print(f"direct: evaluated {len(zs)} points, sup |R| = "
          f"{np.max(np.abs(values)):.6g}", file=sys.stderr)
    return EXIT_OK


def cmd_roundtrip(args):
    cfg = _config_from(args)
    R = _load_input(args, cfg)
    _require_szego(R, cfg)
    rep = scattering.roundtrip(R, cfg, ladder=args.ladder)
    _emit(fileio.save_report(rep), cfg.out)
    print(f"roundtrip: sup error = {rep['sup_error']:.3e}, "
          f"l2 error = {rep['l2_error']:.3e}", file=sys.stderr)
    return EXIT_OK


def cmd_spectrum(args):
    # --levels names the density level here (it may be negative), so it
    # must not flow into the RunConfig level window
    n = args.levels if args.levels is not None else 0
    args.levels = None
    cfg = _config_from(args)
    R = _load_input(args, cfg)
    _require_szego(R, cfg)
    dens = spectral.spectral_density(R, n, cfg)
    _emit(fileio.save_density_csv(dens), cfg.out)
    rep = spectral.moment_check(dens, R, n, kmax=4, cfg=cfg)
    rep["log_det"] = spectral.log_det_diagnostic(dens)
    if args.report:
        _emit(fileio.save_report(rep), args.report)
    print(f"spectrum: level {n}, moment deviation = {rep['max_abs_dev']:.3e}",
          file=sys.stderr)
    return EXIT_OK


def cmd_check(args):
    cfg = _config_from(args)
    R = _load_input(args, cfg)
    results = run_full_suite(R, cfg, heavy=not args.light)
    report = {
        "all_passed": all(r.passed for r in results),
        "checks": [r.as_dict() for r in results],
    }
    _emit(fileio.save_report(report), cfg.out)
    for r in results:
        mark = "pass" if r.passed else "FAIL"
        print(f"[{mark}] {r.name}: {r.value:.3e} (bound {r.bound:.3e})",
              file=sys.stderr)
    return EXIT_OK if report["all_passed"] else EXIT_NUMERICAL


def cmd_dump_matrix(args):
    cfg = _config_from(args)
    seq = fileio.load_alphas(args.alphas)
    U = cmv.build_cmv(seq, cfg.cmv_window, cfg.boundary)
    _emit(fileio.save_matrix_csv(cmv.dump_entries(U)), cfg.out)
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(
        prog="cmvscat",
        description="Scattering transforms for banded unitary (CMV) operators",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inverse", help="scattering function -> coefficients")
    p.add_argument("--input", help="scattering function file (JSON or CSV)")
    p.add_argument("--family", help="built-in input family spec")
    p.add_argument("--report", help="write a diagnostics report here")
    _add_common(p)
    p.set_defaults(func=cmd_inverse)

    p = sub.add_parser("direct", help="coefficients -> scattering function")
    p.add_argument("--alphas", required=True, help="coefficient file (JSON)")
    p.add_argument("--z", help="explicit points, e.g. '0.5;0.2+0.1j'")
    p.add_argument("--ring-radius", type=float, help="evaluation ring radius")
    p.add_argument("--ring-count", type=int, help="points on the ring")
    _add_common(p)
    p.set_defaults(func=cmd_direct)

    p = sub.add_parser("roundtrip", help="inverse then direct, with error report")
    p.add_argument("--input", help="scattering function file")
    p.add_argument("--family", help="built-in input family spec")
    p.add_argument("--ladder", type=int, default=1,
                   help="parameter doublings to report (default 1)")
    _add_common(p)
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("spectrum", help="spectral density at a level")
    p.add_argument("--input", help="scattering function file")
    p.add_argument("--family", help="built-in input family spec")
    p.add_argument("--report", help="write the moments report here")
    _add_common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("check", help="full invariant suite and oracle comparison")
    p.add_argument("--input", help="scattering function file")
    p.add_argument("--family", help="built-in input family spec")
    p.add_argument("--light", action="store_true",
                   help="skip the roundtrip and oracle comparisons")
    _add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("dump-matrix", help="CSV triplets of the banded operator")
    p.add_argument("--alphas", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_dump_matrix)

    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NUMERICAL_ERRORS as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
