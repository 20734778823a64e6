"""Command-line surface: one subcommand per analysis.

Reports go to stdout in text or json, logs to stderr. Exit codes: 0 on
success, 1 when a checked property fails, 2 on invalid input.
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass
import logging
from pathlib import Path
import sys
from typing import Any, Callable, Optional, Sequence

import colorlog
import voluptuous as vol
import yaml

from . import __version__
from .const import DEFAULT_GAP_TOL, DEFAULT_TOL, EXIT_INPUT_ERROR, EXIT_OK, EXIT_VIOLATION
from .exceptions import InputError, ParseError, SmoothnessException
from .formats import (
    FORMATS,
    attainment_report,
    error_payload,
    operator_to_payload,
    parse_operator,
    parse_point,
    parse_space,
    render,
    render_matrix,
    render_scalar,
    render_vector,
    smoothness_report,
    space_report,
)
from .hilbert import (
    bj_orthogonal_hilbert,
    hilbert_smoothness,
    sampled_rank_oracle,
    top_singular_subspace,
)
from .operators import (
    adjoint,
    bj_orthogonal,
    classify_linf3_case,
    norm_attainment_ext,
    operator_norm,
    operator_smoothness,
)
from .oracle import extreme_contraction_smoothness, extreme_contraction_witness, hilbert_bj_oracle
from .spaces import EuclideanSpace, PolyhedralSpace, dual_space, is_extreme_point, is_linf, point_smoothness, support_face
from .verification import THEOREM_IDS, verification_report, verify_theorem
from .worked_example import audit_report, audit_worked_example

_LOGGER = logging.getLogger(__name__)

COMMANDS_PATH = Path(__file__).parent / "commands.yaml"
DEFAULT_SEEDS = 100
LOG_LEVELS = ("debug", "info", "warning", "error", "critical")
LOG_FORMAT = "%(log_color)s%(levelname)-8s%(reset)s %(name)s: %(message)s"

FIELD_TYPES = {"seeds": int, "seed": int}

COMMANDS_SCHEMA = vol.Schema(
    {
        str: {
            vol.Required("name"): str,
            vol.Required("description"): str,
            vol.Optional("fields", default={}): {
                str: {
                    vol.Required("name"): str,
                    vol.Required("description"): str,
                    vol.Optional("required", default=False): bool,
                }
            },
        }
    }
)

CONFIG_SCHEMA = vol.Schema(
    {
        vol.Optional("logger", default={}): {
            vol.Optional("default", default="warning"): vol.All(str, vol.Lower, vol.In(LOG_LEVELS)),
            vol.Optional("logs", default={}): {str: vol.All(str, vol.Lower, vol.In(LOG_LEVELS))},
        },
        vol.Optional("defaults", default={}): {
            vol.Optional("tol"): vol.All(vol.Coerce(float), vol.Range(min=0)),
            vol.Optional("gap_tol"): vol.All(vol.Coerce(float), vol.Range(min=0)),
            vol.Optional("seed"): int,
            vol.Optional("seeds"): vol.All(int, vol.Range(min=1)),
            vol.Optional("format"): vol.In(FORMATS),
        },
    }
)


@dataclass
class Context:
    """Resolved options of one invocation."""

    args: argparse.Namespace
    tol: float
    gap_tol: float
    seed: Optional[int]
    seeds: int


def _load_yaml(path: Path) -> Any:
    try:
        with open(path, encoding="utf-8") as handle:
            return yaml.safe_load(handle) or {}
    except OSError as err:
        raise ParseError(f"Cannot read {path}: {err.strerror}") from err
    except yaml.YAMLError as err:
        line = err.problem_mark.line + 1 if getattr(err, "problem_mark", None) else None
        raise ParseError(f"{path}: invalid YAML", line=line) from err


def load_commands(path: Path = COMMANDS_PATH) -> dict:
    return COMMANDS_SCHEMA(_load_yaml(path))


def load_config(path: Optional[str]) -> dict:
    """Validated configuration; an empty one when no file is given."""
    if path is None:
        return CONFIG_SCHEMA({})
    try:
        return CONFIG_SCHEMA(_load_yaml(Path(path)))
    except vol.Invalid as err:
        raise ParseError(f"Invalid configuration: {err.msg}", field=".".join(str(p) for p in err.path)) from err


def setup_logging(default: str = "warning", logs: Optional[dict] = None) -> None:
    handler = colorlog.StreamHandler(sys.stderr)
    handler.setFormatter(colorlog.ColoredFormatter(LOG_FORMAT))
    root = logging.getLogger(__package__)
    root.handlers = [handler]
    root.setLevel(default.upper())
    for name, level in (logs or {}).items():
        logging.getLogger(name).setLevel(level.upper())


def build_parser(commands: dict) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, help=f"attainment and unit-norm tolerance (default {DEFAULT_TOL})")
    common.add_argument("--gap-tol", type=float, help=f"singular value clustering (default {DEFAULT_GAP_TOL})")
    common.add_argument("--format", choices=FORMATS, help="report format (default text)")
    common.add_argument("--config", help="YAML configuration file")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug")

    parser = argparse.ArgumentParser(
        prog="multismooth",
        description="Order of smoothness of vectors and operators between finite-dimensional spaces.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="command", required=True)
    for verb, command in commands.items():
        sub = subparsers.add_parser(
            verb, parents=[common], help=command["name"], description=command["description"]
        )
        for field_name, field in command["fields"].items():
            sub.add_argument(
                f"--{field_name}",
                dest=field_name,
                type=FIELD_TYPES.get(field_name, str),
                required=field["required"],
                help=field["description"],
                choices=THEOREM_IDS if field_name == "theorem" else None,
            )
    return parser


def _outcome(ok: bool) -> int:
    return EXIT_OK if ok else EXIT_VIOLATION


# Handlers return the report payload and the exit code


def _space_validate(ctx: Context):
    return space_report(parse_space(ctx.args.space)), EXIT_OK


def _space_dual(ctx: Context):
    return space_report(dual_space(parse_space(ctx.args.space))), EXIT_OK


def _point_smoothness(ctx: Context):
    space = parse_space(ctx.args.space)
    point = parse_point(ctx.args.point)
    face = support_face(space, point, ctx.tol)
    payload = {
        "point": render_vector(point),
        "order": point_smoothness(space, point, ctx.tol),
        "functionals": render_matrix(face.functionals),
        "extreme": is_extreme_point(space, point, ctx.tol),
    }
    return payload, EXIT_OK


def _op_norm(ctx: Context):
    operator = parse_operator(ctx.args.op)
    return {"norm": render_scalar(operator_norm(operator)), "mode": operator.mode.value}, EXIT_OK


def _op_mt(ctx: Context):
    return attainment_report(norm_attainment_ext(parse_operator(ctx.args.op), ctx.tol)), EXIT_OK


def _op_smoothness(ctx: Context):
    report = operator_smoothness(parse_operator(ctx.args.op), ctx.tol)
    return smoothness_report(report), _outcome(report.consistent is not False)


def _op_classify(ctx: Context):
    report = classify_linf3_case(parse_operator(ctx.args.op), ctx.tol)
    return smoothness_report(report), _outcome(report.consistent)


def _op_bj(ctx: Context):
    operator, other = parse_operator(ctx.args.op), parse_operator(ctx.args.other)
    if isinstance(operator.domain, EuclideanSpace) and isinstance(operator.codomain, EuclideanSpace):
        verdict = bj_orthogonal_hilbert(operator, other, ctx.gap_tol, ctx.tol)
        method = "numerical range on H0"
    else:
        verdict = bj_orthogonal(operator, other)
        method = "slopes of active pieces"
    return {"orthogonal": verdict, "method": method}, EXIT_OK


def _smoothness_order(operator) -> int:
    if isinstance(operator.domain, EuclideanSpace):
        return hilbert_smoothness(operator)
    return operator_smoothness(operator).order


def _op_adjoint(ctx: Context):
    operator = parse_operator(ctx.args.op)
    dual = adjoint(operator)
    order, dual_order = _smoothness_order(operator), _smoothness_order(dual)
    payload = {"adjoint": operator_to_payload(dual), "order": order, "adjoint_order": dual_order}
    return payload, _outcome(order == dual_order)


def _op_extreme(ctx: Context):
    operator = parse_operator(ctx.args.op)
    witness = extreme_contraction_witness(operator)
    payload = {"extreme": witness is None, "witness": render_matrix(witness) if witness else None}
    codomain = operator.codomain
    if is_linf(operator.domain, 3) and isinstance(codomain, PolyhedralSpace) and codomain.dim == 2:
        payload["criterion"] = extreme_contraction_smoothness(operator)
        return payload, _outcome(payload["criterion"] == payload["extreme"])
    return payload, EXIT_OK


def _hilbert_smoothness(ctx: Context):
    operator = parse_operator(ctx.args.op)
    structure = top_singular_subspace(operator, ctx.gap_tol)
    order = hilbert_smoothness(operator, ctx.gap_tol)
    sampled = sampled_rank_oracle(operator, ctx.gap_tol, seed=ctx.seed or 0)
    payload = {
        "order": order,
        "multiplicity": structure.multiplicity,
        "field": operator.domain.field.value,
        "sigma_max": structure.sigma_max,
        "gap": structure.gap,
        "sampled_rank": sampled,
    }
    return payload, _outcome(order == sampled)


def _hilbert_bj(ctx: Context):
    operator, other = parse_operator(ctx.args.op), parse_operator(ctx.args.other)
    verdict = bj_orthogonal_hilbert(operator, other, ctx.gap_tol, ctx.tol)
    oracle = hilbert_bj_oracle(operator, other)
    return {"orthogonal": verdict, "oracle": oracle}, _outcome(verdict == oracle)


def _verify(ctx: Context):
    seed0 = ctx.seed if ctx.seed is not None else 1
    report = verify_theorem(ctx.args.theorem, ctx.seeds, seed0)
    return verification_report(report), _outcome(report.ok)


def _audit_example(ctx: Context):
    audit = audit_worked_example()
    return audit_report(audit), _outcome(audit.passed)


HANDLERS: dict[str, Callable[[Context], tuple[dict, int]]] = {
    "space-validate": _space_validate,
    "space-dual": _space_dual,
    "point-smoothness": _point_smoothness,
    "op-norm": _op_norm,
    "op-mt": _op_mt,
    "op-smoothness": _op_smoothness,
    "op-classify": _op_classify,
    "op-bj": _op_bj,
    "op-adjoint": _op_adjoint,
    "op-extreme": _op_extreme,
    "hilbert-smoothness": _hilbert_smoothness,
    "hilbert-bj": _hilbert_bj,
    "verify": _verify,
    "audit-example": _audit_example,
}


def _first(*values):
    return next((v for v in values if v is not None), None)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser(load_commands()).parse_args(argv)
    output_format = args.format or "text"
    try:
        config = load_config(args.config)
    except InputError as err:
        setup_logging()
        _LOGGER.error(err.message)
        print(render(error_payload(err), output_format))
        return EXIT_INPUT_ERROR

    logger_config, defaults = config["logger"], config["defaults"]
    level = logger_config["default"]
    if args.verbose:
        level = "debug" if args.verbose > 1 else "info"
    setup_logging(level, logger_config["logs"])
    output_format = args.format or defaults.get("format", "text")
    ctx = Context(
        args=args,
        tol=_first(args.tol, defaults.get("tol"), DEFAULT_TOL),
        gap_tol=_first(args.gap_tol, defaults.get("gap_tol"), DEFAULT_GAP_TOL),
        seed=_first(getattr(args, "seed", None), defaults.get("seed")),
        seeds=_first(getattr(args, "seeds", None), defaults.get("seeds"), DEFAULT_SEEDS),
    )

    try:
        payload, code = HANDLERS[args.command](ctx)
    except InputError as err:
        _LOGGER.error("%s: %s", type(err).__name__, err.message)
        print(render(error_payload(err), output_format))
        return EXIT_INPUT_ERROR
    except SmoothnessException as err:
        _LOGGER.error("%s: %s", type(err).__name__, err.message)
        print(render(error_payload(err), output_format))
        return EXIT_VIOLATION
    print(render(payload, output_format))
    return code
