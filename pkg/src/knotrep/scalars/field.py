"""Exact arithmetic in number fields Q[x]/(m(x)) and the construction of Q(lambda)."""

from __future__ import annotations

import cmath
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import gmpy2
from gmpy2 import mpq

from ..errors import FieldError
from .poly import LaurentPolynomial, polynomial_from_sympy, to_sympy

_ZERO = mpq(0)
_ONE = mpq(1)

# Largest degree of q(x) = p(x^2) we are willing to factor.
MAX_FACTOR_DEGREE = 24


_MPQ = type(_ZERO)
_MPZ = type(gmpy2.mpz(0))


def _q(c) -> mpq:
    if isinstance(c, _MPQ):
        return c
    if isinstance(c, Fraction):
        return mpq(c.numerator, c.denominator)
    if isinstance(c, numbers.Integral):
        return mpq(int(c))
    return mpq(c)


# -- dense polynomial helpers on lists of mpq (index = exponent) -------------
def _strip(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _pdivmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    if len(a) < len(b):
        return [], _strip(a)
    q = [_ZERO] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, d in enumerate(b):
                a[i + j] -= c * d
    return _strip(q), _strip(a[: len(b) - 1])


def _pmul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _strip(out)


def _psub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return _strip([(a[i] if i < len(a) else _ZERO) - (b[i] if i < len(b) else _ZERO) for i in range(n)])


class FieldSpec:
    """The number field Q[x]/(m(x)) together with a complex embedding of x.

    ``modulus`` lists the coefficients of the monic irreducible m(x) from the
    constant term upwards. ``hint`` is an approximate complex root of m(x)
    selecting the embedding; :meth:`root_value` polishes it to any precision.
    """

    def __init__(self, modulus: Sequence, hint: complex = 0j, check: bool = True):
        coeffs = [Fraction(c) for c in modulus]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) < 2:
            raise FieldError("modulus must have degree >= 1")
        lead = coeffs[-1]
        self.modulus: tuple[Fraction, ...] = tuple(c / lead for c in coeffs)
        self.degree = len(self.modulus) - 1
        self.hint = complex(hint)
        if check and self.degree > 1:
            import sympy

            if not sympy.Poly(to_sympy(self.modulus_polynomial()), sympy.Symbol("x")).is_irreducible:
                raise FieldError(f"modulus {self.modulus_polynomial().to_string('x')} is reducible")
        d = self.degree
        m = [_q(c) for c in self.modulus]
        # reduction table: x^e mod m for d <= e <= 2d-2
        self._red: list[list[mpq]] = []
        cur = [-c for c in m[:d]]  # x^d
        for _ in range(max(d - 1, 0)):
            self._red.append(cur)
            top = cur[-1]
            nxt = [_ZERO] + cur[:-1]
            if top:
                nxt = [nxt[i] - top * m[i] for i in range(d)]
            cur = nxt
        self._roots: dict[int, object] = {}

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls([0, 1], 0j, check=False)

    # -- identity -------------------------------------------------------------
    def _key(self):
        return self.modulus, round(self.hint.real, 6), round(self.hint.imag, 6)

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldSpec) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"FieldSpec({self.modulus_polynomial().to_string('x')}, hint={self.hint:.6g})"

    def modulus_polynomial(self) -> LaurentPolynomial:
        return LaurentPolynomial(self.modulus)

    # -- elements -------------------------------------------------------------
    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldError("element belongs to a different field")
            return value
        c = [_ZERO] * self.degree
        c[0] = _q(value)
        return FieldElement(self, tuple(c))

    def element(self, coeffs: Sequence) -> "FieldElement":
        """Residue class of sum coeffs[i] x^i (any length; reduced mod m)."""
        coeffs = [_q(c) for c in coeffs]
        d = self.degree
        if len(coeffs) <= d:
            return FieldElement(self, tuple(coeffs + [_ZERO] * (d - len(coeffs))))
        _, r = _pdivmod(coeffs, [_q(c) for c in self.modulus])
        return FieldElement(self, tuple(r + [_ZERO] * (d - len(r))))

    @property
    def zero(self) -> "FieldElement":
        return self(0)

    @property
    def one(self) -> "FieldElement":
        return self(1)

    @property
    def gen(self) -> "FieldElement":
        """The residue class of x, i.e. lambda."""
        if self.degree == 1:
            return self(-self.modulus[0])
        return self.element([0, 1])

    # -- embedding ------------------------------------------------------------
    def root_value(self, ctx):
        """The root of m(x) closest to the hint, at the precision of mpmath context ``ctx``."""
        prec = ctx.prec
        if prec not in self._roots:
            if self.degree == 1:
                root = ctx.mpc(-ctx.mpf(self.modulus[0].numerator) / self.modulus[0].denominator)
            else:
                coeffs = [ctx.mpf(c.numerator) / c.denominator for c in reversed(self.modulus)]
                roots = ctx.polyroots(coeffs, maxsteps=200, extraprec=2 * prec)
                root = min(roots, key=lambda r: abs(complex(r) - self.hint))
            self._roots[prec] = ctx.mpc(root)
        return self._roots[prec]

    def embed(self, a: "FieldElement", ctx):
        x = self.root_value(ctx)
        acc = ctx.mpc(0)
        for c in reversed(a.c):
            acc = acc * x + ctx.mpf(int(c.numerator)) / int(c.denominator)
        return acc


class FieldElement:
    """Element of Q[x]/(m(x)) in canonical reduced form (degree < deg m)."""

    __slots__ = ("field", "c")

    def __init__(self, field: FieldSpec, c: tuple):
        self.field = field
        self.c = c

    def _coerce(self, other) -> "FieldElement | None":
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldError("mixed number fields")
            return other
        if isinstance(other, (int, Fraction, _MPQ, _MPZ, numbers.Rational)):
            return self.field(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.c, o.c)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.c))

    def __mul__(self, other):
        if isinstance(other, int):
            return FieldElement(self.field, tuple(a * other for a in self.c))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self.field.degree
        if d == 1:
            return FieldElement(self.field, (self.c[0] * o.c[0],))
        prod = [_ZERO] * (2 * d - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    if b:
                        prod[i + j] += a * b
        low = prod[:d]
        for e, row in enumerate(self.field._red):
            top = prod[d + e]
            if top:
                for i in range(d):
                    low[i] += top * row[i]
        return FieldElement(self.field, tuple(low))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not self:
            raise ZeroDivisionError("inverse of zero in number field")
        m = [_q(c) for c in self.field.modulus]
        a = _strip(list(self.c))
        # extended Euclid: track s with s*a = r (mod m)
        r0, r1 = m, a
        s0, s1 = [], [_ONE]
        while r1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        if len(r0) != 1:
            raise FieldError("modulus is not irreducible: zero divisor found")
        inv = [c / r0[0] for c in s0]
        return self.field.element(inv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self) -> bool:
        return any(self.c)

    def __eq__(self, other) -> bool:
        o = self._coerce(other) if not isinstance(other, FieldElement) else other
        if o is None:
            return NotImplemented
        return self.c == o.c

    def __hash__(self) -> int:
        return hash(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(int(self.c[0].numerator), int(self.c[0].denominator))

    def coefficients(self) -> list[Fraction]:
        return [Fraction(int(a.numerator), int(a.denominator)) for a in self.c]

    def to_string(self, var: str = "x") -> str:
        p = LaurentPolynomial(self.coefficients())
        return p.to_string(var)

    def __repr__(self) -> str:
        return self.to_string("lam")

    __str__ = __repr__

    def __complex__(self) -> complex:
        x = self.field.hint
        acc = 0j
        for c in reversed(self.c):
            acc = acc * x + float(c)
        return acc


# -- root structure of polynomials --------------------------------------------
@dataclass(frozen=True)
class SquarefreeSplit:
    """``simple_part`` = p / gcd(p, p'), ``multiple_part`` = gcd(p, p') (both monic)."""

    simple_part: LaurentPolynomial
    multiple_part: LaurentPolynomial

    def is_simple_root(self, x, is_zero) -> bool:
        return is_zero(self.simple_part.evaluate(x)) and not is_zero(self.multiple_part.evaluate(x))

    def has_roots(self) -> bool:
        return self.simple_part.span() > 0


def squarefree_and_simple_roots(p: LaurentPolynomial) -> SquarefreeSplit:
    if p.is_zero():
        raise ValueError("zero polynomial")
    poly = p.as_polynomial()
    g = poly.gcd(poly.derivative())
    simple = poly.exact_div(g).monic()
    return SquarefreeSplit(simple.as_polynomial(), g)


def _numeric_roots(p: LaurentPolynomial) -> list[complex]:
    import mpmath

    poly = p.as_polynomial()
    if poly.span() < 1:
        return []
    coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(poly.coeffs)]
    with mpmath.workdps(50):
        return [complex(r) for r in mpmath.polyroots(coeffs, maxsteps=200, extraprec=200)]


def _rational_factors(p: LaurentPolynomial) -> list[LaurentPolynomial]:
    import sympy

    x = sympy.Symbol("x")
    _, factors = sympy.factor_list(to_sympy(p.as_polynomial()), x)
    return [polynomial_from_sympy(f, "x").monic() for f, _ in factors if sympy.degree(f, x) > 0]


def _select_root(candidates: list[complex], target: complex, what: str) -> complex:
    if not candidates:
        raise FieldError(f"{what}: polynomial has no roots")
    ranked = sorted(candidates, key=lambda r: abs(r - target))
    best = ranked[0]
    dist = abs(best - target)
    if dist > 1e-2 * max(1.0, abs(best)):
        raise FieldError(f"{what}: selector {target} is not near any root (closest {best})")
    if len(ranked) > 1 and abs(ranked[1] - best) > 1e-9 and abs(ranked[1] - target) < 2 * dist:
        raise FieldError(f"{what}: selector {target} does not single out a root")
    return best


def field_from_minimal_polynomial(m: LaurentPolynomial, hint: complex) -> tuple[FieldSpec, FieldElement]:
    """Q(lambda) for the root of ``m`` nearest ``hint``; reducible ``m`` is cut down to
    the irreducible factor carrying that root."""
    m = m.as_polynomial()
    if m.span() < 1:
        raise FieldError("minimal polynomial must have positive degree")
    if m.span() > MAX_FACTOR_DEGREE:
        raise FieldError(f"degree {m.span()} exceeds factorization cap {MAX_FACTOR_DEGREE}")
    root = _select_root(_numeric_roots(m), complex(hint), "lambda")
    for f in _rational_factors(m):
        if any(abs(r - root) < 1e-8 * max(1.0, abs(root)) for r in _numeric_roots(f)):
            spec = FieldSpec(f.coeffs if f.low == 0 else f.as_polynomial().coeffs, root)
            return spec, spec.gen
    raise FieldError("factorization failed to locate the selected root")


def make_lambda_field(delta: LaurentPolynomial, root_selector: complex,
                      lambda_hint: complex | None = None) -> tuple[FieldSpec, FieldElement]:
    """Build Q(lambda) where lambda^2 is the root of ``delta`` nearest ``root_selector``.

    Among the two square roots, lambda is the one nearest ``lambda_hint`` when
    given, otherwise the principal square root.
    """
    if delta.is_zero():
        raise FieldError("zero polynomial has no distinguished root")
    mu = _select_root(_numeric_roots(delta), complex(root_selector), "lambda^2")
    if abs(mu - 1) < 1e-9:
        raise FieldError("lambda^2 = 1 is never a usable root (Delta_K(1) = ±1)")
    for p in _rational_factors(delta):
        if any(abs(r - mu) < 1e-8 * max(1.0, abs(mu)) for r in _numeric_roots(p)):
            break
    else:  # pragma: no cover - numeric roots and factors always agree
        raise FieldError("factorization failed to locate lambda^2")
    q = p.substitute_power(2)
    if q.span() > MAX_FACTOR_DEGREE:
        raise FieldError(f"degree {q.span()} exceeds factorization cap {MAX_FACTOR_DEGREE}")
    lam = cmath.sqrt(mu) if lambda_hint is None else complex(lambda_hint)
    if lambda_hint is not None and abs(lam * lam - mu) > 1e-2 * max(1.0, abs(mu)):
        raise FieldError(f"lambda hint {lambda_hint} does not square to the selected root {mu}")
    return field_from_minimal_polynomial(q, lam)
