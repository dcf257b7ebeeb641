"""Alexander matrix and polynomial, and the root conditions on lambda."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .errors import FieldError, HypothesisFailure, NotAKnotError
from .foxcalc import GroupRingElement, fox_derivative
from .knots import KnotPresentation, exponent_sum
from .scalars.field import squarefree_and_simple_roots
from .scalars.poly import LaurentPolynomial


def abelianize(e: GroupRingElement, p: KnotPresentation) -> LaurentPolynomial:
    """Image of a group-ring element under g -> t^phi(g)."""
    terms: dict[int, int] = {}
    for w, c in e.terms.items():
        k = exponent_sum(w, p)
        terms[k] = terms.get(k, 0) + c
    return LaurentPolynomial.from_dict(terms)


def alexander_matrix(p: KnotPresentation) -> list[list[LaurentPolynomial]]:
    """Rows = relators, columns = generators; entry = abelianized Fox derivative."""
    return [[abelianize(fox_derivative(r, i), p) for i in range(p.num_generators)] for r in p.relators]


def determinant(m: list[list[LaurentPolynomial]]) -> LaurentPolynomial:
    """Bareiss fraction-free determinant over Q[t, t^-1]."""
    n = len(m)
    if n == 0:
        return LaurentPolynomial.const(1)
    a = [list(row) for row in m]
    sign = 1
    prev = LaurentPolynomial.const(1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return LaurentPolynomial()
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    return a[n - 1][n - 1] if sign > 0 else -a[n - 1][n - 1]


def normalize(delta: LaurentPolynomial) -> LaurentPolynomial:
    """Canonical associate: lowest exponent 0 and positive leading coefficient."""
    if delta.is_zero():
        return delta
    d = delta.as_polynomial()
    return -d if d.leading() < 0 else d


def primitive(p: LaurentPolynomial) -> LaurentPolynomial:
    """Integer associate with coprime coefficients."""
    den = 1
    for c in p.coeffs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    content = 0
    for c in ints:
        content = gcd(content, c)
    return LaurentPolynomial([Fraction(c, content) for c in ints], p.low)


def alexander_polynomial(p: KnotPresentation) -> LaurentPolynomial:
    """Generator of the first elementary ideal, cut down by the column weights.

    Deleting column i of a deficiency-one presentation matrix gives a minor
    equal to Delta * (t^phi_i - 1)/(t - 1) up to units; dividing out that
    factor and taking the gcd over all columns yields Delta.
    """
    m = alexander_matrix(p)
    g = p.num_generators
    if len(m) != g - 1:
        raise NotAKnotError(f"expected a deficiency-one presentation, got {g} generators and {len(m)} relators")
    result = None
    for i in range(g):
        w = p.phi[i]
        if w == 0:
            continue
        minor = determinant([[row[j] for j in range(g) if j != i] for row in m])
        cyclo = (LaurentPolynomial.monomial(abs(w)) - 1).exact_div(LaurentPolynomial([-1, 1]))
        try:
            part = minor.exact_div(cyclo)
        except ArithmeticError:
            raise NotAKnotError("presentation matrix is inconsistent with its abelianization") from None
        result = part if result is None else result.gcd(part)
    if result is None or result.is_zero():
        raise NotAKnotError("Alexander polynomial vanishes: not a knot group")
    delta = normalize(primitive(result))
    if abs(delta(1)) != 1:
        raise NotAKnotError(f"|Delta(1)| = {abs(delta(1))} != 1: not a knot group")
    return delta


def reduced_alexander_entry(p: KnotPresentation, relator: int = 0, generator: int = 0) -> LaurentPolynomial:
    return abelianize(fox_derivative(p.relators[relator], generator), p)


# -- hypotheses ----------------------------------------------------------------
@dataclass
class HypothesisReport:
    """Root conditions on lambda for a given n.

    ``power_conditions[k]`` records Delta(lambda^(2k)) != 0 and
    ``unit_conditions[k]`` records lambda^(2k) != 1, for 2 <= k <= n-1.
    """

    lam: object
    n: int
    simple_root: bool
    power_conditions: dict[int, bool] = field(default_factory=dict)
    unit_conditions: dict[int, bool] = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return self.simple_root and all(self.power_conditions.values())

    @property
    def failing_k(self) -> list[int]:
        return sorted(k for k, ok in self.power_conditions.items() if not ok)

    def raise_if_failed(self) -> None:
        if not self.verdict:
            what = "lambda^2 is not a simple root" if not self.simple_root else f"Delta(lambda^2k) = 0 for k = {self.failing_k}"
            raise HypothesisFailure(f"hypotheses fail for n = {self.n}: {what}", self.failing_k)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "simple_root": self.simple_root,
            "power_conditions": {str(k): v for k, v in sorted(self.power_conditions.items())},
            "unit_conditions": {str(k): v for k, v in sorted(self.unit_conditions.items())},
            "failing_k": self.failing_k,
            "verdict": self.verdict,
        }


def check_hypotheses(delta: LaurentPolynomial, lam, n: int, backend) -> HypothesisReport:
    """Check that lambda^2 is a simple root of Delta and Delta(lambda^2k) != 0 for 2 <= k <= n-1."""
    if n < 2:
        raise ValueError("n must be at least 2")
    lam = backend.scalar(lam)
    if backend.is_zero(lam):
        raise ValueError("lambda must be nonzero")
    mu = lam * lam
    scale = _eval_scale(delta, mu, backend)
    if not backend.is_zero(delta(mu), scale):
        raise FieldError("lambda^2 is not a root of the Alexander polynomial")
    split = squarefree_and_simple_roots(delta)
    simple = not backend.is_zero(split.multiple_part(mu), _eval_scale(split.multiple_part, mu, backend))
    power, unit = {}, {}
    for k in range(2, n):
        x = mu ** k
        power[k] = not backend.is_zero(delta(x), _eval_scale(delta, x, backend))
        unit[k] = not backend.is_zero(x - 1)
    report = HypothesisReport(lam, n, simple, power, unit)
    if report.verdict and not all(unit.values()):
        # Delta(1) = ±1, so lambda^2k = 1 would already violate a power condition
        raise AssertionError("unit conditions violated although the hypotheses hold")
    return report


def _eval_scale(p: LaurentPolynomial, x, backend):
    """Magnitude reference for zero tests of p(x) in the numeric backend."""
    if backend.name != "numeric":
        return None
    r = abs(x)
    return max(1, sum(abs(float(c)) * float(r) ** (p.low + i) for i, c in enumerate(p.coeffs)))
