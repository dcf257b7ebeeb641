"""Command-line interface: ``knotrep COMMAND [options]``.

Every command produces a JSON report (schema ``knotrep.report/1``) with
sorted keys; ``--format text`` renders the same structure as indented lines.
Exit status: 0 success, 1 error or failed check, 2 hypothesis failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .alexander import alexander_polynomial, check_hypotheses
from .cohomology import cochain_dims, reducible_metabelian, verify_ladder, verify_main_theorem
from .errors import KnotrepError
from .knots import (TABLE_ENV, KnotInput, default_table_path, load_table, parse_knot_input, simplify_presentation,
                    wirtinger_presentation)
from .lambdas import lambda_description, parse_complex, parse_lambda, resolve_lambda
from .reps import (burde_derham, module_action, normalized_cocycle, parse_module, symmetric_power)
from .scalars import DEFAULT_PRECISION, ExactBackend, NumericBackend, field_from_minimal_polynomial
from .scalars.poly import parse_polynomial

SCHEMA = "knotrep.report/1"
EXIT_OK, EXIT_ERROR, EXIT_HYPOTHESIS = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    knot: str | None = None
    braid: str | None = None
    pd: str | None = None
    presentation: str | None = None
    lam: str | None = None
    n: int | None = None
    module: str | None = None
    cocycle: str = "auto"
    backend: str = "exact"
    precision: int = DEFAULT_PRECISION
    tol: float = 1e-10
    max_iter: int = 50
    t: float | None = None
    order: int = 1
    simplify: bool = False
    format: str = "json"
    out: str | None = None
    table: str | None = None
    jobs: int = 1
    timings: bool = False
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.backend not in ("exact", "numeric"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.precision < 64:
            raise ValueError("precision must be at least 64 bits")
        if self.format not in ("json", "text"):
            raise ValueError(f"unknown format {self.format!r}")
        sources = [x for x in (self.knot, self.braid, self.pd, self.presentation) if x is not None]
        if self.command in ("alex", "rep", "cohomology", "verify", "deform") and len(sources) != 1:
            raise ValueError("give exactly one of --knot, --braid, --pd, --presentation")
        if self.command in ("rep", "verify", "deform") and self.lam is None:
            raise ValueError("--lambda is required")
        if self.command in ("verify", "deform") and self.n is None:
            raise ValueError("--n is required")
        if self.n is not None and self.n < 1:
            raise ValueError("--n must be positive")
        if self.command == "cohomology" and self.module is None:
            raise ValueError("--module is required")
        if self.command == "deform" and self.t is None:
            raise ValueError("--t is required")


# -- helpers ---------------------------------------------------------------------
def _presentation(cfg: RunConfig):
    table = load_table(cfg.table) if cfg.knot is not None else None
    if cfg.knot is not None:
        inp = parse_knot_input(cfg.knot, "name", table)
        source = {"knot": cfg.knot}
    elif cfg.braid is not None:
        inp = parse_knot_input(cfg.braid, "braid")
        source = {"braid": list(inp.braid)}
    elif cfg.pd is not None:
        inp = parse_knot_input(cfg.pd, "pd")
        source = {"pd": [list(x) for x in inp.pd]}
    else:
        inp = parse_knot_input(cfg.presentation, "presentation")
        source = {"presentation": cfg.presentation}
    p = wirtinger_presentation(inp, simplify=cfg.simplify)
    source["generators"] = p.num_generators
    source["relators"] = p.relator_strings()
    return p, source


def _backend_info(be) -> dict:
    info = {"name": be.name}
    if be.name == "numeric":
        info["precision"] = be.precision
        info["rank_eps_bits"] = be.precision // 2
    field_spec = getattr(be, "field", None)
    if field_spec is not None and field_spec.degree >= 1:
        info["field_modulus"] = field_spec.modulus_polynomial().to_string("x")
    return info


def _matrix_strings(m: np.ndarray, be) -> list[list[str]]:
    return [[be.format(x) for x in row] for row in m]


def _resolve(cfg: RunConfig, p, backend: str | None = None):
    delta = alexander_polynomial(p)
    be, lam = resolve_lambda(parse_lambda(cfg.lam), delta, backend or cfg.backend, cfg.precision)
    return delta, be, lam


def _parse_values(text: str, be, lam) -> list:
    out = []
    for item in text.split(","):
        item = item.strip()
        try:
            out.append(parse_polynomial(item, "lam").evaluate(lam))
        except KnotrepError:
            if be.name != "numeric":
                raise
            out.append(be.scalar(parse_complex(item)))
    return out


# -- commands --------------------------------------------------------------------
def cmd_alex(cfg: RunConfig) -> tuple[dict, int]:
    p, source = _presentation(cfg)
    delta = alexander_polynomial(p)
    return {
        "input": source,
        "alexander_polynomial": delta.to_string(),
        "coefficients": [str(c) for c in delta.coeffs],
        "lowest_exponent": delta.low,
        "value_at_1": str(delta(1)),
        "value_at_minus_1": str(delta(-1)),
    }, EXIT_OK


def cmd_rep(cfg: RunConfig) -> tuple[dict, int]:
    p, source = _presentation(cfg)
    _, be, lam = _resolve(cfg, p)
    if cfg.cocycle == "auto":
        z = normalized_cocycle(p, lam * lam, be).scalar_values()
    else:
        z = _parse_values(cfg.cocycle, be, lam)
    rho = burde_derham(p, lam, z, be)
    n = cfg.n or 2
    rep = rho if n == 2 else symmetric_power(rho, n)
    return {
        "input": source,
        "lambda": lambda_description(be, lam),
        "backend": _backend_info(be),
        "n": n,
        "cocycle": [be.format(x) for x in z],
        "abelian": bool(rho.abelian),
        "images": {p.generators[i]: _matrix_strings(m, be) for i, m in enumerate(rep.images)},
        "relators_certified": True,
    }, EXIT_OK


def _alpha(text: str, p, cfg: RunConfig):
    """Backend and alpha for a C:alpha module."""
    if text.strip().startswith("root("):
        spec = parse_lambda(text)
        fld, _ = field_from_minimal_polynomial(spec.poly, spec.hint)
        be = ExactBackend(fld) if cfg.backend == "exact" else NumericBackend(cfg.precision, field=fld)
        return be, be.lam
    if "lam" in text:
        _, be, lam = _resolve(cfg, p)
        return be, parse_polynomial(text, "lam").evaluate(lam)
    try:
        val = parse_polynomial(text, "x")
        if val.span() <= 0 and val.low == 0:
            be = ExactBackend() if cfg.backend == "exact" else NumericBackend(cfg.precision)
            return be, be.scalar(val.coeffs[0] if val.coeffs else 0)
    except KnotrepError:
        pass
    if cfg.backend == "exact":
        raise ValueError("exact backend needs a rational or root(...) alpha")
    be = NumericBackend(cfg.precision)
    return be, be.scalar(parse_complex(text))


def cmd_cohomology(cfg: RunConfig) -> tuple[dict, int]:
    p, source = _presentation(cfg)
    kind, param = parse_module(cfg.module)
    out = {"input": source, "module": cfg.module}
    if kind == "C":
        be, alpha = _alpha(param, p, cfg)
        act = module_action(None, "C", alpha, presentation=p, backend=be)
    else:
        if cfg.lam is None:
            raise ValueError("--lambda is required for sl:N and R:M modules")
        _, be, lam = _resolve(cfg, p)
        out["lambda"] = lambda_description(be, lam)
        rho = reducible_metabelian(p, lam, be)
        act = module_action(rho, kind, int(param))
    out["backend"] = _backend_info(be)
    out["dimensions"] = cochain_dims(p, act).to_dict()
    return out, EXIT_OK


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    p, source = _presentation(cfg)
    delta, be, lam = _resolve(cfg, p)
    rho = reducible_metabelian(p, lam, be)
    main = verify_main_theorem(p, lam, cfg.n, be, delta, rho)
    out = {"input": source, "lambda": lambda_description(be, lam), "backend": _backend_info(be), "n": cfg.n,
           "main_theorem": main.to_dict()}
    statuses = [main.status]
    if cfg.n >= 3:
        ladder = verify_ladder(p, lam, cfg.n, be, delta, rho)
        out["ladder"] = ladder.to_dict()
        statuses.append(ladder.status)
    out["status"] = "hypothesis_failure" if "hypothesis_failure" in statuses else (
        "pass" if all(s == "pass" for s in statuses) else "fail")
    code = {"pass": EXIT_OK, "fail": EXIT_ERROR, "hypothesis_failure": EXIT_HYPOTHESIS}[out["status"]]
    if code == EXIT_HYPOTHESIS:
        out["error"] = {"code": "HYPOTHESIS_FAILURE", "failing_k": main.hypotheses.failing_k,
                        "message": f"Delta(lambda^2k) = 0 for k = {main.hypotheses.failing_k}"}
    return out, code


def cmd_deform(cfg: RunConfig) -> tuple[dict, int]:
    from .deform import default_direction, newton_deform

    p, source = _presentation(cfg)
    _, be, lam = _resolve(cfg, p, backend="numeric")
    base = reducible_metabelian(p, lam, be)
    rho = base if cfg.n == 2 else symmetric_power(base, cfg.n)
    u1 = default_direction(p, rho)
    res = newton_deform(p, rho, u1, cfg.t, tol=cfg.tol, max_iter=cfg.max_iter, order=cfg.order)
    out = {"input": source, "lambda": lambda_description(be, lam), "backend": _backend_info(be), "n": cfg.n,
           "order": cfg.order, "direction": "sum of complement basis vectors"}
    out.update(res.to_dict())
    out["images"] = {p.generators[i]: m for i, m in enumerate(out["images"])}
    return out, EXIT_OK


def cmd_table(cfg: RunConfig) -> tuple[dict, int]:
    path = cfg.table or str(default_table_path())
    table = load_table(path)
    entries = []
    for name, e in sorted(table.items()):
        delta = alexander_polynomial(wirtinger_presentation(KnotInput("name", braid=e.braid, name=name)))
        entries.append({"name": name, "braid": list(e.braid), "pd": [list(x) for x in e.pd], "comment": e.comment,
                        "alexander_polynomial": delta.to_string()})
    return {"table": path, "entries": entries}, EXIT_OK


def cmd_paper_suite(cfg: RunConfig) -> tuple[dict, int]:
    from .suite import paper_suite

    out = paper_suite(cfg.backend, cfg.precision, cfg.table, cfg.jobs)
    out["backend"] = {"name": cfg.backend, **({"precision": cfg.precision} if cfg.backend == "numeric" else {})}
    return out, EXIT_OK if out["all_passed"] else EXIT_ERROR


COMMANDS = {
    "alex": cmd_alex,
    "rep": cmd_rep,
    "cohomology": cmd_cohomology,
    "verify": cmd_verify,
    "deform": cmd_deform,
    "table": cmd_table,
    "paper-suite": cmd_paper_suite,
}


def run(cfg: RunConfig) -> tuple[dict, int]:
    """Execute a command and wrap its result in a versioned report."""
    start = time.perf_counter()
    report = {"schema": SCHEMA, "version": __version__, "command": cfg.command,
              "config": {k: v for k, v in asdict(cfg).items()
                         if v is not None and k not in ("extra", "out", "timings", "format")}}
    try:
        cfg.validate()
        results, code = COMMANDS[cfg.command](cfg)
        report["results"] = results
    except KnotrepError as exc:
        report["error"] = {"code": exc.code, "message": str(exc)}
        if getattr(exc, "failing_k", None):
            report["error"]["failing_k"] = list(exc.failing_k)
        code = EXIT_HYPOTHESIS if exc.code == "HYPOTHESIS_FAILURE" else EXIT_ERROR
    except (ValueError, ZeroDivisionError) as exc:
        report["error"] = {"code": "INVALID_ARGUMENT", "message": str(exc)}
        code = EXIT_ERROR
    report["exit_code"] = code
    if cfg.timings:
        report["timings"] = {"total_seconds": round(time.perf_counter() - start, 3)}
    return report, code


# -- rendering -------------------------------------------------------------------
def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"


def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1).rstrip("\n"))
            else:
                lines.append(f"{pad}{k}: {_scalar_text(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1).rstrip("\n"))
            else:
                lines.append(f"{pad}- {_scalar_text(v)}")
    else:
        lines.append(f"{pad}{_scalar_text(obj)}")
    return "\n".join(lines) + "\n"


def _flat(v) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _flat(x)) for x in v)
    return False


def _scalar_text(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar_text(x) for x in v) + "]"
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, dict):
        return "{}"
    return str(v)


# -- argument parsing ----------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("common options")
    g.add_argument("--format", choices=("json", "text"), default="json", help="output format (default: json)")
    g.add_argument("--out", metavar="PATH", help="write the report to PATH (default: stdout)")
    g.add_argument("--table", metavar="PATH",
                   help=f"knot table JSON (default: ${TABLE_ENV} or the bundled table)")
    g.add_argument("--backend", choices=("exact", "numeric"), default="exact",
                   help="scalar backend (default: exact)")
    g.add_argument("--precision", type=int, default=DEFAULT_PRECISION, metavar="BITS",
                   help=f"numeric working precision in bits (default: {DEFAULT_PRECISION})")
    g.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes for paper-suite (default: 1)")
    g.add_argument("--timings", action="store_true", help="include wall-clock timings in the report (default: off)")

    knot = argparse.ArgumentParser(add_help=False)
    k = knot.add_argument_group("knot selection (exactly one)")
    k.add_argument("--knot", metavar="NAME", help="name from the knot table, e.g. 4_1 (no default)")
    k.add_argument("--braid", metavar="WORD", help="braid word, e.g. 's1 s2^-1 s1 s2^-1' or '1 -2 1 -2' (no default)")
    k.add_argument("--pd", metavar="CODE", help="PD code, e.g. 'X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]' (no default)")
    k.add_argument("--presentation", metavar="TEXT", help="explicit presentation, e.g. '<S,T | S T S = T S T>' (no default)")
    k.add_argument("--simplify", action="store_true", help="apply Tietze simplification (default: off)")

    lam = argparse.ArgumentParser(add_help=False)
    lam.add_argument("--lambda", dest="lam", metavar="EXPR",
                     help="lambda as root(POLY_IN_x, HINT) or a decimal a+bi (no default)")

    parser = argparse.ArgumentParser(prog="knotrep", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"knotrep {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("alex", parents=[common, knot], help="Alexander polynomial")
    p = sub.add_parser("rep", parents=[common, knot, lam], help="reducible metabelian representation")
    p.add_argument("--n", type=int, default=2, help="dimension of the symmetric power (default: 2)")
    p.add_argument("--cocycle", default="auto",
                   help="'auto' (normalized generator of H^1) or comma-separated values (default: auto)")
    p = sub.add_parser("cohomology", parents=[common, knot, lam], help="twisted cohomology dimensions")
    p.add_argument("--module", required=True, help="sl:N, R:M or C:ALPHA (no default)")
    p = sub.add_parser("verify", parents=[common, knot, lam], help="check the dimension predictions at n")
    p.add_argument("--n", type=int, required=True, help="dimension n (no default)")
    p = sub.add_parser("deform", parents=[common, knot, lam], help="Newton deformation (numeric backend)")
    p.add_argument("--n", type=int, required=True, help="dimension n (no default)")
    p.add_argument("--t", type=float, required=True, help="step size in (0, 0.1] (no default)")
    p.add_argument("--order", type=int, default=1, help="order of the starting series (default: 1)")
    p.add_argument("--tol", type=float, default=1e-10, help="relator residual tolerance (default: 1e-10)")
    p.add_argument("--max-iter", type=int, default=50, help="Newton iteration cap (default: 50)")
    sub.add_parser("paper-suite", parents=[common], help="replay the reference numbers")
    sub.add_parser("table", parents=[common], help="list the knot table")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    keys = {f for f in RunConfig.__dataclass_fields__}
    values = {k: v for k, v in vars(args).items() if k in keys and v is not None}
    return RunConfig(**values)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = config_from_args(args)
    report, code = run(cfg)
    text = render_json(report) if cfg.format == "json" else render_text(report)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
