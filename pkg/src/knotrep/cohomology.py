"""Twisted cochain complexes of deficiency-one presentations and the dimension checks
built on them."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .alexander import HypothesisReport, alexander_polynomial, check_hypotheses
from .knots import KnotPresentation, Word
from .reps import ModuleAction, Representation, burde_derham, module_action, normalized_cocycle


@dataclass(frozen=True)
class CohomologySummary:
    h0: int
    z1: int
    b1: int
    h1: int
    h2: int
    module: str
    dim: int
    backend: str

    def __post_init__(self):
        if min(self.h0, self.z1, self.b1, self.h1, self.h2) < 0:
            raise ArithmeticError(f"negative cohomology dimension in {self}")
        if self.z1 != self.b1 + self.h1 or self.b1 != self.dim - self.h0:
            raise ArithmeticError(f"inconsistent dimensions in {self}")

    def dims(self) -> tuple[int, int, int, int, int]:
        return self.h0, self.z1, self.b1, self.h1, self.h2

    def to_dict(self) -> dict:
        return {"h0": self.h0, "z1": self.z1, "b1": self.b1, "h1": self.h1, "h2": self.h2,
                "module": self.module, "dim": self.dim, "backend": self.backend}


def fox_blocks(p: KnotPresentation, act: ModuleAction) -> list[list[np.ndarray]]:
    """blocks[j][i] = evaluation of d r_j / d g_i under the action.

    Evaluates the unreduced Fox sum term by term, which equals the evaluation
    of the reduced group-ring element because evaluation is a ring map.
    """
    be = act.backend
    d = act.dim
    blocks = []
    for r in p.relators:
        row = [be.zeros(d, d) for _ in range(p.num_generators)]
        for t, (g, e) in enumerate(r.letters):
            if e > 0:
                row[g] = row[g] + act.word_matrix(r[:t])
            else:
                row[g] = row[g] - act.word_matrix(r[:t + 1])
        blocks.append(row)
    return blocks


def fox_block_matrix(p: KnotPresentation, act: ModuleAction) -> np.ndarray:
    blocks = fox_blocks(p, act)
    d = act.dim
    be = act.backend
    if not blocks:
        return be.zeros(0, p.num_generators * d)
    return np.block(blocks) if d else be.zeros(len(blocks) * d, 0)


def invariants_matrix(p: KnotPresentation, act: ModuleAction) -> np.ndarray:
    be = act.backend
    eye = be.eye(act.dim)
    return np.concatenate([act.generator_matrix(i) - eye for i in range(p.num_generators)], axis=0)


def coboundary_vectors(p: KnotPresentation, act: ModuleAction) -> list[np.ndarray]:
    """delta(x) for each basis vector x of the module, as stacked cochain vectors."""
    be = act.backend
    d = act.dim
    mats = invariants_matrix(p, act)
    return [np.array(mats[:, k], dtype=object) for k in range(d)]


def cochain_dims(p: KnotPresentation, act: ModuleAction) -> CohomologySummary:
    """Dimensions of H^0, Z^1, B^1, H^1, H^2 for a deficiency-one presentation."""
    if p.deficiency != 1:
        raise ValueError("cochain_dims expects a deficiency-one presentation")
    be = act.backend
    d = act.dim
    h0 = be.nullity(invariants_matrix(p, act))
    fm = fox_block_matrix(p, act)
    z1 = p.num_generators * d - (be.rank(fm) if fm.shape[0] else 0)
    b1 = d - h0
    return CohomologySummary(h0, z1, b1, z1 - b1, z1 - d, act.descriptor, d, be.name)


def cocycle_space(p: KnotPresentation, act: ModuleAction) -> list[np.ndarray]:
    """Basis of Z^1 as stacked cochain vectors (generator-major)."""
    be = act.backend
    fm = fox_block_matrix(p, act)
    if fm.shape[0] == 0:
        return be.nullspace(be.zeros(0, p.num_generators * act.dim))
    return be.nullspace(fm)


def is_cocycle(p: KnotPresentation, act: ModuleAction, vec: np.ndarray) -> bool:
    fm = fox_block_matrix(p, act)
    be = act.backend
    if fm.shape[0] == 0:
        return True
    res = fm @ np.array(vec, dtype=object)
    scale = None
    if be.name == "numeric":
        scale = max(1, max((abs(x) for x in vec), default=1))
    return all(be.is_zero(x, scale) for x in res)


# -- reducible metabelian representations --------------------------------------------
def reducible_metabelian(p: KnotPresentation, lam, backend) -> Representation:
    """rho_lambda^z with the normalized cocycle z for alpha = lambda^2."""
    lam = backend.scalar(lam)
    z = normalized_cocycle(p, lam * lam, backend)
    return burde_derham(p, lam, z, backend)


# -- verifiers -------------------------------------------------------------------
@dataclass
class Assertion:
    name: str
    expected: object
    actual: object

    @property
    def passed(self) -> bool:
        return self.expected == self.actual

    def to_dict(self) -> dict:
        return {"name": self.name, "expected": self.expected, "actual": self.actual, "passed": self.passed}


@dataclass
class VerificationReport:
    kind: str
    n: int
    hypotheses: HypothesisReport
    dimensions: dict = field(default_factory=dict)
    assertions: list = field(default_factory=list)
    advisory: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        if not self.hypotheses.verdict:
            return "hypothesis_failure"
        return "pass" if all(a.passed for a in self.assertions) else "fail"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "status": self.status,
            "hypotheses": self.hypotheses.to_dict(),
            "dimensions": {k: v.to_dict() for k, v in self.dimensions.items()},
            "assertions": [a.to_dict() for a in self.assertions],
            "advisory": dict(self.advisory),
        }


def verify_ladder(p: KnotPresentation, lam, n: int, backend, delta=None,
                  rho: Representation | None = None) -> VerificationReport:
    """Compare h1(R_2k) with h1(R_2) for 2 <= k <= n-1, and h1(sl_n) with (n-1) h1(R_2).

    Dimensions are computed even when the hypotheses fail; the assertions
    are then advisory and the report status says so.
    """
    delta = alexander_polynomial(p) if delta is None else delta
    hyp = check_hypotheses(delta, lam, n, backend)
    rho = reducible_metabelian(p, lam, backend) if rho is None else rho
    report = VerificationReport("ladder", n, hyp)
    base = cochain_dims(p, module_action(rho, "R", 2))
    report.dimensions["R:2"] = base
    for k in range(2, n):
        s = cochain_dims(p, module_action(rho, "R", 2 * k))
        report.dimensions[f"R:{2 * k}"] = s
        report.assertions.append(Assertion(f"h1(R_{2 * k}) = h1(R_2)", base.h1, s.h1))
    sl = cochain_dims(p, module_action(rho, "sl", n))
    report.dimensions[f"sl:{n}"] = sl
    report.assertions.append(Assertion(f"h1(sl_{n}) = (n-1) h1(R_2)", (n - 1) * base.h1, sl.h1))
    if not hyp.verdict:
        report.advisory["failing_k"] = hyp.failing_k
    return report


def verify_main_theorem(p: KnotPresentation, lam, n: int, backend, delta=None,
                        rho: Representation | None = None) -> VerificationReport:
    """h0(sl_n) = 0, h1(sl_n) = n-1 and z1 = n^2+n-2 at rho_(lambda,n)^z."""
    delta = alexander_polynomial(p) if delta is None else delta
    hyp = check_hypotheses(delta, lam, n, backend)
    rho = reducible_metabelian(p, lam, backend) if rho is None else rho
    report = VerificationReport("main_theorem", n, hyp)
    s = cochain_dims(p, module_action(rho, "sl", n))
    report.dimensions[f"sl:{n}"] = s
    predicted = (n + 2) * (n - 1)
    report.assertions += [
        Assertion("h0(sl_n) = 0", 0, s.h0),
        Assertion("h1(sl_n) = n-1", n - 1, s.h1),
        Assertion("z1(sl_n) = n^2+n-2", predicted, s.z1),
    ]
    report.advisory["predicted_component_dimension"] = predicted
    report.advisory["regular"] = s.z1 == predicted
    if not hyp.verdict:
        report.advisory["failing_k"] = hyp.failing_k
    return report


def word_from_text(text: str, p: KnotPresentation) -> Word:
    from .knots import _parse_word

    names = list(p.generators)
    return _parse_word(text, names, sorted(names, key=len, reverse=True), 0)
