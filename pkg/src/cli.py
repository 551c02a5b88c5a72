"""
fractal-quadrature command line

Subcommands print machine-readable output (CSV or key,value lines) to
standard output unless an output path is given.

Exit codes: 0 success, 2 configuration error, 3 numeric precondition
violation, 4 I/O error.
"""

import argparse
import csv
import logging
import sys
from typing import List, Optional

import numpy as np

from .core.convergence_studies import STUDY_CATALOGUE, catalogue_config, run_convergence
from .core.geometry import separation_params
from .core.ifs import h_for_level, solve_dimension
from .core.kernel_helmholtz import HelmholtzKernel, integrate_helmholtz_singular
from .core.kernel_phi_t import integrate_phi_t_at_fixed_point, integrate_phi_t_double
from .core.partition import barycentre, partition_level, partition_lh, rule_from_partition
from .core.presets import preset, preset_names, preset_table
from .core.quadrature import (
    DOUBLE_INTEGRANDS, SINGLE_INTEGRANDS, integrate_double, integrate_single, smooth_integrand
)
from .utils.config_loader import ConfigLoader
from .utils.config_models import EmitFormat, KernelType
from .utils.errors import (
    ConfigError, IntegrandEvaluationError, NumericPreconditionError, ReportIOError
)
from .utils.report_io import emit

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def _write_rows(rows: List[List]) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerows(rows)


def _fmt(value: float) -> str:
    return "%.17g" % value


def _attractor(args):
    return preset(args.preset, args.rho)


def _h(args, attractor) -> float:
    if args.h is not None:
        return args.h
    if args.level is not None:
        return h_for_level(attractor, args.level)
    raise ConfigError("one of --h or --level is required")


def cmd_dimension(args) -> int:
    if args.ratios:
        d = solve_dimension(args.ratios)
    else:
        d = _attractor(args).dim
    print(_fmt(d))
    return EXIT_OK


def cmd_barycentre(args) -> int:
    x = barycentre(_attractor(args))
    _write_rows([[_fmt(v) for v in x]])
    return EXIT_OK


def cmd_partition(args) -> int:
    attractor = _attractor(args)
    if args.level is not None and args.h is None:
        partition = partition_level(attractor, args.level)
    else:
        partition = partition_lh(attractor, _h(args, attractor))
    if not args.nodes:
        print(partition.N)
        return EXIT_OK
    rule = rule_from_partition(partition)
    n = attractor.ambient_dim
    rows = [["index"] + [f"x{i + 1}" for i in range(n)] + ["weight"]]
    for index, node, weight in zip(partition.indices, rule.nodes, rule.weights):
        rows.append([".".join(map(str, index))] + [_fmt(v) for v in node] + [_fmt(weight)])
    _write_rows(rows)
    return EXIT_OK


def cmd_separation(args) -> int:
    attractor = _attractor(args)
    report = separation_params(attractor, _h(args, attractor))
    rows = [["key", "value"]]
    for key, value in report.to_dict().items():
        if isinstance(value, list):
            rows.extend([f"{key}_{m}", _fmt(v)] for m, v in enumerate(value, start=1))
        else:
            rows.append([key, value if isinstance(value, (bool, int)) else _fmt(value)])
    _write_rows(rows)
    return EXIT_OK


def cmd_integrate(args) -> int:
    attractor = _attractor(args)
    h = _h(args, attractor)
    kernel = KernelType(args.kernel)
    if kernel is KernelType.PHI_T:
        value = complex(integrate_phi_t_double(attractor, args.t, h, strict=args.strict,
                                               workers=args.workers))
    elif kernel is KernelType.PHI_T_FIXED_POINT:
        value = complex(integrate_phi_t_at_fixed_point(attractor, args.t, args.m, h, strict=args.strict))
    elif kernel is KernelType.HELMHOLTZ:
        helmholtz = HelmholtzKernel(args.k, attractor.ambient_dim, args.c_osc)
        value = integrate_helmholtz_singular(attractor, helmholtz, h, strict=args.strict,
                                             workers=args.workers)
    elif kernel is KernelType.SMOOTH:
        if args.function not in SINGLE_INTEGRANDS:
            raise ConfigError(f"--function must be one of {SINGLE_INTEGRANDS}")
        value = integrate_single(attractor, smooth_integrand(args.function, attractor, args.c), h)
    else:
        if args.function not in DOUBLE_INTEGRANDS:
            raise ConfigError(f"--function must be one of {DOUBLE_INTEGRANDS}")
        value = integrate_double(attractor, attractor, smooth_integrand(args.function, attractor, args.c),
                                 h, workers=args.workers)
    _write_rows([["h", "N", "value_re", "value_im"],
                 [_fmt(h), partition_lh(attractor, h).N, _fmt(value.real), _fmt(value.imag)]])
    return EXIT_OK


def cmd_convergence(args) -> int:
    if (args.config is None) == (args.study is None):
        raise ConfigError("give exactly one of --config and --study")
    if args.reset_db and not args.db:
        raise ConfigError("--reset-db needs --db")
    if args.study is not None:
        config = catalogue_config(args.study, full_scale=args.full_scale)
    else:
        config = ConfigLoader.from_yaml(args.config)
    if args.workers is not None:
        config.workers = args.workers
    if args.emit is not None:
        config.emit_format = EmitFormat(args.emit)
    if args.output is not None:
        config.output_path = args.output

    report = run_convergence(config)
    emit(report, config.emit_format, config.output_path)

    if args.db:
        from .database import close_db, init_db, reset_database, save_report, session_scope

        engine = init_db(args.db)
        try:
            if args.reset_db:
                reset_database(engine)
            with session_scope() as session:
                run = save_report(session, report)
                logger.info("stored study run %d in %s", run.id, args.db)
        finally:
            close_db()
    return EXIT_OK


def cmd_presets(args) -> int:
    if args.studies:
        rows = [["name", "description"]]
        rows.extend([name, STUDY_CATALOGUE[name]["description"]] for name in sorted(STUDY_CATALOGUE))
        _write_rows(rows)
        return EXIT_OK
    preset_table().to_csv(sys.stdout, index=False, float_format="%.17g", lineterminator="\n")
    return EXIT_OK


def _add_attractor_args(parser: argparse.ArgumentParser, with_h: bool = True) -> None:
    parser.add_argument("--preset", choices=preset_names(), default="cantor", help="attractor preset or alias")
    parser.add_argument("--rho", type=float, default=None, help="preset parameter ρ")
    if with_h:
        parser.add_argument("--h", type=float, default=None, help="partition parameter h")
        parser.add_argument("--level", type=int, default=None, help="level ℓ (h = diam·ρ_max^ℓ)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fractal-quadrature",
        description="Barycentre quadrature on IFS attractors",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="logging level")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dimension", help="Hausdorff dimension of a preset or of ratios")
    _add_attractor_args(p, with_h=False)
    p.add_argument("--ratios", type=float, nargs="+", default=None, help="contraction ratios")
    p.set_defaults(func=cmd_dimension)

    p = sub.add_parser("barycentre", help="barycentre of the normalized measure")
    _add_attractor_args(p, with_h=False)
    p.set_defaults(func=cmd_barycentre)

    p = sub.add_parser("partition", help="|L_h| or the full node list")
    _add_attractor_args(p)
    p.add_argument("--nodes", action="store_true", help="print index, node and weight per leaf")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("separation", help="separation parameters at h")
    _add_attractor_args(p)
    p.set_defaults(func=cmd_separation)

    p = sub.add_parser("integrate", help="one quadrature value")
    _add_attractor_args(p)
    p.add_argument("--kernel", choices=[k.value for k in KernelType], default=KernelType.PHI_T.value)
    p.add_argument("--t", type=float, default=0.0, help="Φ_t exponent")
    p.add_argument("--m", type=int, default=1, help="fixed point number")
    p.add_argument("--k", type=float, default=5.0, help="wavenumber")
    p.add_argument("--c-osc", dest="c_osc", type=float, default=2 * np.pi, help="oscillation threshold")
    p.add_argument("--function", default="cos", help="smooth integrand name")
    p.add_argument("--c", type=float, default=1.0, help="smooth integrand parameter")
    p.add_argument("--strict", action="store_true", help="fail on separation warnings")
    p.add_argument("--workers", type=int, default=None, help="worker threads")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("convergence", help="run a convergence study")
    p.add_argument("--config", default=None, help="YAML experiment file")
    p.add_argument("--study", default=None, choices=sorted(STUDY_CATALOGUE), help="catalogue study")
    p.add_argument("--paper-scale", "--full-scale", dest="full_scale", action="store_true",
                   help="full-resolution study and reference levels")
    p.add_argument("--db", default=None, help="SQLAlchemy URL of a results store")
    p.add_argument("--reset-db", dest="reset_db", action="store_true",
                   help="drop all stored study runs before saving this one")
    p.add_argument("--workers", type=int, default=None, help="worker threads")
    p.add_argument("--emit", choices=[f.value for f in EmitFormat], default=None, help="output format")
    p.add_argument("--output", default=None, help="output file (default stdout)")
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("presets", help="list presets or catalogue studies")
    p.add_argument("--studies", action="store_true", help="list the study catalogue instead")
    p.set_defaults(func=cmd_presets)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT, force=True)

    try:
        return args.func(args)
    except ConfigError as exc:
        logger.error("%s", exc)
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericPreconditionError, IntegrandEvaluationError) as exc:
        logger.error("%s", exc)
        print(f"numeric precondition violated: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ReportIOError, OSError) as exc:
        logger.error("%s", exc)
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
