"""Command-line front end (``arraydir``).

Exit status: 0 success, 2 bad input, 3 math-domain error, 4 convergence
failure, 5 safety cap reached.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

import numpy as np

from . import __version__
from .baselines import GEOMETRIES, dmin_sweep, planar_baseline, uca_steered, ula_steered
from .directivity import OMNI, directivity_analytic, directivity_quadrature
from .errors import (
    DegenerateDirection,
    NoLocalMinimum,
    NonPositiveDenominator,
    QuadratureNotConverged,
)
from .ga import DEFAULT_SEED, GaConfig, ga_marginal, ga_optimize, ga_stall
from .geometry import ArrayLayout, DirectionSpec, convex_hull_area, in_plane_coordinates, rotation_matrix
from .objective import objective_G
from .oupa import SevConfig, oupa, quasi_square_factors
from .specfile import SpecError, dump_spec, load_spec, parse_angle, wave_number_from_frequency

EXIT_OK, EXIT_INPUT, EXIT_MATH, EXIT_CONVERGENCE, EXIT_CAP = 0, 2, 3, 4, 5
DEFAULT_ANGLE = "45deg"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _angle(text):
    try:
        return parse_angle(text)
    except SpecError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_range(text):
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LOW:HIGH, got {text!r}") from None
    return range(lo, hi + 1)


def _direction_args(p, with_angles=True):
    if with_angles:
        p.add_argument("--theta0", type=_angle, default=_angle(DEFAULT_ANGLE),
                       help="elevation of the desired direction (radians, or e.g. 45deg)")
        p.add_argument("--phi0", type=_angle, default=_angle(DEFAULT_ANGLE), help="azimuth of the desired direction")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--k", type=float, default=None, help="wave number in 1/m (default 1)")
    g.add_argument("--freq", type=float, default=None, help="carrier frequency in Hz")


def _output_args(p, default="json"):
    p.add_argument("--format", choices=("json", "table", "csv"), default=default)
    p.add_argument("--out", default=None, help="write the main output to this path")


def _wave_number(args) -> float:
    if args.freq is not None:
        return wave_number_from_frequency(args.freq)
    return 1.0 if args.k is None else args.k


def _direction(args) -> DirectionSpec:
    return DirectionSpec(args.theta0, args.phi0, _wave_number(args))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="arraydir", description="Antenna array directivity and element placement")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="directivity of an array described in a JSON file")
    p.add_argument("spec", help="array description file")
    p.add_argument("--theta0", type=_angle, default=None)
    p.add_argument("--phi0", type=_angle, default=None)
    _output_args(p)

    p = sub.add_parser("oupa", help="optimal uniform planar array")
    _direction_args(p)
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--n2", type=int, required=True)
    p.add_argument("--c-step", type=float, default=1e-3, help="line-search step in meters")
    p.add_argument("--verify", action="store_true", help="also integrate numerically")
    p.add_argument("--export", default=None, help="write the resulting array description here")
    _output_args(p)

    p = sub.add_parser("ga", help="genetic placement search")
    _direction_args(p)
    p.add_argument("--variant", choices=("base", "marginal", "stall"), default="base")
    p.add_argument("--n", type=int, required=True, help="number of elements")
    p.add_argument("--n1", type=int, default=None, help="grid rows for the seeding grid")
    p.add_argument("--n2", type=int, default=None, help="grid columns for the seeding grid")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--cf", type=float, default=None, help="crossover fraction")
    p.add_argument("--mr", type=float, default=None, help="mutation rate")
    p.add_argument("--max-generations", type=int, default=None)
    p.add_argument("--c-step", type=float, default=1e-3)
    _output_args(p)

    p = sub.add_parser("baseline", help="reference geometry")
    _direction_args(p)
    p.add_argument("--geometry", choices=GEOMETRIES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d-min", type=float, default=None,
                   help="element spacing; ula/uca default to half a wavelength, upa/uhpa to the sweep optimum")
    p.add_argument("--axis", choices=("x", "y", "z"), default="x", help="ULA axis")
    _output_args(p)

    p = sub.add_parser("sweep-dmin", help="directivity against spacing")
    _direction_args(p)
    p.add_argument("--geometry", choices=("upa", "uca", "uhpa"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--start", type=float, default=0.005)
    p.add_argument("--stop", type=float, default=15.0)
    p.add_argument("--step", type=float, default=0.005)
    _output_args(p, default="csv")

    p = sub.add_parser("pareto", help="grid configurations: directivity against area")
    _direction_args(p)
    p.add_argument("--n1-range", type=_int_range, required=True, help="LOW:HIGH inclusive")
    p.add_argument("--n2-range", type=_int_range, required=True, help="LOW:HIGH inclusive")
    p.add_argument("--only-n", type=int, nargs="*", default=None, help="keep only these element counts")
    p.add_argument("--c-step", type=float, default=1e-3)
    _output_args(p, default="csv")
    return parser


# -- commands ----------------------------------------------------------------

def _record(command, inputs, outputs, seed=None):
    return {"command": command, "inputs": inputs, "outputs": outputs, "seed": seed, "version": __version__}


def _direction_echo(d: DirectionSpec):
    return {"theta0": d.theta0, "phi0": d.phi0, "k": d.k}


def cmd_eval(args):
    spec = load_spec(args.spec)
    if args.theta0 is not None:
        direction = DirectionSpec(args.theta0, args.phi0 if args.phi0 is not None else 0.0, spec.k)
    elif spec.direction is not None:
        direction = spec.direction
        if args.phi0 is not None:
            direction = DirectionSpec(direction.theta0, args.phi0, spec.k)
    else:
        raise SpecError("direction: not in the file and --theta0 not given")
    ana = directivity_analytic(spec.layout, spec.pattern, direction)
    quad = directivity_quadrature(spec.layout, spec.pattern, direction)
    pos = spec.layout.positions
    area = convex_hull_area(in_plane_coordinates(pos, direction)) if spec.layout.n >= 3 else 0.0
    outputs = {
        "directivity_dbi": ana.dbi,
        "directivity_linear": ana.linear,
        "quadrature_dbi": quad.dbi,
        "relative_difference": abs(ana.linear - quad.linear) / quad.linear,
        "f1": ana.f1,
        "f2": ana.f2,
        "area": area,
    }
    inputs = {"spec": args.spec, "n": spec.layout.n, "pattern": [spec.pattern.u, spec.pattern.v],
              **_direction_echo(direction)}
    return _record("eval", inputs, outputs), EXIT_OK


def cmd_oupa(args):
    direction = _direction(args)
    start = time.perf_counter()
    res = oupa(direction, args.n1, args.n2, SevConfig(c=args.c_step), verify=args.verify)
    outputs = {
        "d_min_star": res.d_min_star,
        "directivity_dbi": res.directivity.dbi,
        "directivity_linear": res.directivity.linear,
        "area": res.area,
        "g": res.g_at_optimum,
        "wall_time": time.perf_counter() - start,
    }
    if res.quadrature is not None:
        outputs["quadrature_dbi"] = res.quadrature.dbi
    if args.export:
        dump_spec(args.export, res.layout, OMNI, direction.k, direction)
        outputs["exported"] = args.export
    inputs = {**_direction_echo(direction), "n1": args.n1, "n2": args.n2, "c_step": args.c_step,
              "verify": args.verify}
    return _record("oupa", inputs, outputs), EXIT_OK


def cmd_ga(args):
    direction = _direction(args)
    overrides = {}
    if args.cf is not None:
        overrides["crossover_fraction"] = args.cf
    if args.mr is not None:
        overrides["mutation_rate"] = args.mr
    if args.max_generations is not None:
        overrides["max_generations"] = args.max_generations
    grid = None
    if args.variant == "base":
        cfg = GaConfig.base(args.n, direction.k, seed=args.seed, **overrides)
        report = ga_optimize((direction, args.n), cfg)
    else:
        if args.n1 is not None and args.n2 is not None:
            n1, n2 = args.n1, args.n2
        else:
            n1, n2 = quasi_square_factors(args.n)
        if n1 * n2 != args.n:
            raise SpecError(f"--n1 x --n2 = {n1 * n2} does not equal --n {args.n}")
        grid = oupa(direction, n1, n2, SevConfig(c=args.c_step))
        cfg = GaConfig.seeded(args.variant, grid, seed=args.seed, **overrides)
        run = ga_marginal if args.variant == "marginal" else ga_stall
        report = run(grid, cfg)
    sol = report.best_solution
    obj = objective_G(sol)
    outputs = {
        "directivity_dbi": report.best_directivity_dbi,
        "g": report.best_g,
        "gap": obj.gap,
        "bound": obj.bound,
        "generations": report.generations_run,
        "stop_reason": report.stop_reason,
        "wall_time": report.wall_time,
        "xs": sol.xs.tolist(),
        "ys": sol.ys.tolist(),
        "history_g": [h[0] for h in report.history],
    }
    if grid is not None:
        outputs["oupa_dbi"] = grid.directivity.dbi
    inputs = {**_direction_echo(direction), "variant": cfg.variant, "n": args.n,
              "crossover_fraction": cfg.crossover_fraction, "mutation_rate": cfg.mutation_rate,
              "mutation": cfg.mutation, "population_size": cfg.population_size,
              "max_generations": cfg.max_generations, "bounds": list(map(float, cfg.bounds))}
    code = EXIT_CAP if report.safety_cap_reached else EXIT_OK
    return _record("ga", inputs, outputs, seed=args.seed), code


def cmd_baseline(args):
    direction = _direction(args)
    g = args.geometry
    if g in ("ula", "uca"):
        d = args.d_min if args.d_min is not None else 0.5 * direction.wavelength
        arr = ula_steered(args.n, d, direction, axis=args.axis) if g == "ula" else uca_steered(args.n, direction, d)
        layout = arr.layout
    else:
        if args.d_min is None:
            d = dmin_sweep(g, args.n, direction).best_d_min
        else:
            d = args.d_min
        layout = ArrayLayout(planar_baseline(g, args.n, d).positions @ rotation_matrix(direction))
    rep = directivity_analytic(layout, OMNI, direction)
    outputs = {"directivity_dbi": rep.dbi, "directivity_linear": rep.linear, "d_min": d}
    inputs = {**_direction_echo(direction), "geometry": g, "n": args.n,
              "axis": args.axis if g == "ula" else None}
    return _record("baseline", inputs, outputs), EXIT_OK


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def cmd_sweep(args):
    direction = _direction(args)
    res = dmin_sweep(args.geometry, args.n, direction, (args.start, args.stop), args.step)
    rows = list(zip(res.d_min, res.directivity_dbi, res.area))
    outputs = {"best_d_min": res.best_d_min, "best_dbi": res.best_dbi, "points": len(rows)}
    inputs = {**_direction_echo(direction), "geometry": args.geometry, "n": args.n,
              "start": args.start, "stop": args.stop, "step": args.step}
    return _record("sweep-dmin", inputs, outputs), EXIT_OK, ("d_min", "directivity_dbi", "area"), rows


def cmd_pareto(args):
    direction = _direction(args)
    only = set(args.only_n) if args.only_n else None
    shapes = sorted(((a * b, a, b) for a in args.n1_range for b in args.n2_range
                     if a >= 1 and b >= 1 and (only is None or a * b in only)))
    rows = []
    for n, a, b in shapes:
        res = oupa(direction, a, b, SevConfig(c=args.c_step))
        rows.append((n, a, b, res.d_min_star, res.directivity.dbi, res.area))
    inputs = {**_direction_echo(direction), "n1_range": [args.n1_range.start, args.n1_range.stop - 1],
              "n2_range": [args.n2_range.start, args.n2_range.stop - 1], "only_n": args.only_n,
              "c_step": args.c_step}
    header = ("N", "n1", "n2", "d_min_star", "directivity_dbi", "area")
    return _record("pareto", inputs, {"rows": len(rows)}), EXIT_OK, header, rows


# -- output ------------------------------------------------------------------

def _table(record) -> str:
    items = [("command", record["command"])]
    items += [(f"in.{k}", v) for k, v in record["inputs"].items()]
    items += [(k, v) for k, v in record["outputs"].items() if not isinstance(v, list)]
    width = max(len(k) for k, _ in items)
    lines = []
    for k, v in items:
        if isinstance(v, float):
            v = f"{v:.6g}" if abs(v) < 1e6 else f"{v:.6e}"
        lines.append(f"{k.ljust(width)}  {v}")
    return "\n".join(lines) + "\n"


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


_COMMANDS = {
    "eval": cmd_eval,
    "oupa": cmd_oupa,
    "ga": cmd_ga,
    "baseline": cmd_baseline,
    "sweep-dmin": cmd_sweep,
    "pareto": cmd_pareto,
}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = _COMMANDS[args.command](args)
    except (SpecError, ValueError) as exc:
        if isinstance(exc, DegenerateDirection):
            print(f"math-domain error: {exc}", file=sys.stderr)
            return EXIT_MATH
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NonPositiveDenominator, ArithmeticError) as exc:
        print(f"math-domain error: {exc}", file=sys.stderr)
        return EXIT_MATH
    except (QuadratureNotConverged, NoLocalMinimum) as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE

    record, code = result[0], result[1]
    if len(result) == 4:
        header, rows = result[2], result[3]
        if args.format == "csv":
            _emit(_csv_text(header, rows), args.out)
            return code
        record["outputs"]["rows_data"] = [[float(v) for v in r] for r in rows]
    if args.format == "table":
        _emit(_table(record), args.out)
    elif args.format == "csv":
        outs = {k: v for k, v in record["outputs"].items() if not isinstance(v, list)}
        _emit(_csv_text(tuple(outs), [tuple(outs.values())]), args.out)
    else:
        _emit(json.dumps(record, indent=2, sort_keys=False) + "\n", args.out)
    if code == EXIT_CAP:
        print("safety cap reached before the reference was outperformed", file=sys.stderr)
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
