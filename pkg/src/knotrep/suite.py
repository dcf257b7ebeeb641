"""Regression table of the reference numbers, runnable in a worker pool."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .alexander import alexander_polynomial, check_hypotheses
from .cohomology import cochain_dims, reducible_metabelian
from .errors import KnotrepError
from .knots import TABLE_ENV, load_table, parse_knot_input, trefoil_two_generator, wirtinger_presentation
from .lambdas import parse_lambda, resolve_lambda
from .reps import module_action

TREFOIL_LAMBDA = "root(x^4-x^2+1, 0.866+0.5i)"
FIGURE_EIGHT_LAMBDA = "root(x^2-x-1, 1.618)"


@dataclass
class SuiteConfig:
    backend: str = "exact"
    precision: int = 256
    table: str | None = None


@dataclass
class CheckResult:
    name: str
    passed: bool
    expected: object = None
    actual: object = None
    error: dict | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "expected": self.expected, "actual": self.actual}
        if self.error:
            out["error"] = self.error
        if self.details:
            out["details"] = self.details
        return out


def _presentation(name: str, cfg: SuiteConfig):
    table = load_table(cfg.table)
    return wirtinger_presentation(parse_knot_input(name, "name", table))


def _setup(name: str, lam_text: str, cfg: SuiteConfig):
    p = _presentation(name, cfg)
    delta = alexander_polynomial(p)
    be, lam = resolve_lambda(parse_lambda(lam_text), delta, cfg.backend, cfg.precision)
    return p, delta, be, lam


def _alexander(name: str, expected: str):
    def check(cfg: SuiteConfig) -> CheckResult:
        actual = alexander_polynomial(_presentation(name, cfg)).to_string()
        return CheckResult(f"alexander:{name}", actual == expected, expected, actual)
    return check


def _trefoil_sl6(cfg: SuiteConfig) -> CheckResult:
    p, _, be, lam = _setup("3_1", TREFOIL_LAMBDA, cfg)
    s = cochain_dims(p, module_action(reducible_metabelian(p, lam, be), "sl", 6))
    expected = {"z1": 42, "h1": 7, "h0": 0, "exceeds_n2+n-2": True}
    actual = {"z1": s.z1, "h1": s.h1, "h0": s.h0, "exceeds_n2+n-2": s.z1 > 6 * 6 + 6 - 2}
    return CheckResult("trefoil:sl_6", expected == actual, expected, actual)


def _trefoil_r(cfg: SuiteConfig) -> CheckResult:
    p, _, be, lam = _setup("3_1", TREFOIL_LAMBDA, cfg)
    rho = reducible_metabelian(p, lam, be)
    expected = {"R_4": 1, "R_6": 1, "R_8": 1, "R_10": 3}
    actual = {f"R_{m}": cochain_dims(p, module_action(rho, "R", m)).h1 for m in (4, 6, 8, 10)}
    return CheckResult("trefoil:R_2k", expected == actual, expected, actual)


def _figure_eight(n: int):
    def check(cfg: SuiteConfig) -> CheckResult:
        p, _, be, lam = _setup("4_1", FIGURE_EIGHT_LAMBDA, cfg)
        s = cochain_dims(p, module_action(reducible_metabelian(p, lam, be), "sl", n))
        expected = {"h0": 0, "h1": n - 1, "z1": n * n + n - 2}
        actual = {"h0": s.h0, "h1": s.h1, "z1": s.z1}
        return CheckResult(f"figure_eight:sl_{n}", expected == actual, expected, actual)
    return check


def _hyp_trefoil(cfg: SuiteConfig) -> CheckResult:
    _, delta, be, lam = _setup("3_1", TREFOIL_LAMBDA, cfg)
    expected = {str(n): {"verdict": n < 6, "failing_k": [] if n < 6 else [5]} for n in range(2, 7)}
    actual = {}
    for n in range(2, 7):
        r = check_hypotheses(delta, lam, n, be)
        actual[str(n)] = {"verdict": r.verdict, "failing_k": r.failing_k}
    return CheckResult("hypotheses:3_1", expected == actual, expected, actual)


def _hyp_figure_eight(cfg: SuiteConfig) -> CheckResult:
    _, delta, be, lam = _setup("4_1", FIGURE_EIGHT_LAMBDA, cfg)
    actual = {str(n): check_hypotheses(delta, lam, n, be).verdict for n in range(2, 13)}
    expected = {str(n): True for n in range(2, 13)}
    return CheckResult("hypotheses:4_1", expected == actual, expected, actual)


def _presentation_independence(cfg: SuiteConfig) -> CheckResult:
    _, _, be, lam = _setup("3_1", TREFOIL_LAMBDA, cfg)
    dims = {}
    for label, p in (("wirtinger", _presentation("3_1", cfg)), ("two_generator", trefoil_two_generator())):
        rho = reducible_metabelian(p, lam, be)
        dims[label] = {
            "R:10": list(cochain_dims(p, module_action(rho, "R", 10)).dims()),
            "sl:4": list(cochain_dims(p, module_action(rho, "sl", 4)).dims()),
        }
    return CheckResult("trefoil:presentation_independence", dims["wirtinger"] == dims["two_generator"],
                       dims["two_generator"], dims["wirtinger"])


CHECKS = {
    "alexander:3_1": _alexander("3_1", "t^2 - t + 1"),
    "alexander:4_1": _alexander("4_1", "t^2 - 3*t + 1"),
    "alexander:0_1": _alexander("0_1", "1"),
    "trefoil:sl_6": _trefoil_sl6,
    "trefoil:R_2k": _trefoil_r,
    **{f"figure_eight:sl_{n}": _figure_eight(n) for n in range(2, 7)},
    "hypotheses:3_1": _hyp_trefoil,
    "hypotheses:4_1": _hyp_figure_eight,
    "trefoil:presentation_independence": _presentation_independence,
}


def run_check(name: str, cfg: SuiteConfig) -> CheckResult:
    try:
        return CHECKS[name](cfg)
    except KnotrepError as exc:
        return CheckResult(name, False, error={"code": exc.code, "message": str(exc)})
    except (ValueError, ArithmeticError) as exc:
        return CheckResult(name, False, error={"code": "INTERNAL", "message": str(exc)})


def _worker(args) -> dict:
    name, cfg = args
    return run_check(name, cfg).to_dict()


def paper_suite(backend: str = "exact", precision: int = 256, table: str | None = None, jobs: int = 1,
                only: list[str] | None = None) -> dict:
    """Run the regression checks; ``jobs > 1`` fans them out to worker processes."""
    cfg = SuiteConfig(backend, precision, table if table is not None else os.environ.get(TABLE_ENV))
    names = [n for n in CHECKS if only is None or n in only]
    if jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_worker, [(n, cfg) for n in names]))
    else:
        results = [_worker((n, cfg)) for n in names]
    failed = [r["name"] for r in results if not r["passed"]]
    return {"checks": results, "total": len(results), "failed": failed, "all_passed": not failed}
