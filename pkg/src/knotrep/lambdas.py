"""The lambda input grammar: ``root(POLY_IN_x, HINT)`` or a complex decimal ``a+bi``."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import FieldError, ParseError
from .scalars import ExactBackend, NumericBackend, field_from_minimal_polynomial, make_lambda_field
from .scalars.poly import LaurentPolynomial, parse_polynomial

_ROOT = re.compile(r"^\s*root\s*\((.*),([^,]*)\)\s*$", re.S)


def parse_complex(text: str) -> complex:
    """``1.618``, ``0.866+0.5i``, ``-2j``, ``i`` ..."""
    s = text.strip().replace(" ", "").replace("I", "i").replace("i", "j")
    if s in ("j", "+j"):
        return 1j
    if s == "-j":
        return -1j
    s = re.sub(r"(?<![0-9.])j", "1j", s)
    try:
        return complex(s)
    except ValueError:
        raise ParseError(f"cannot parse complex number {text!r}") from None


@dataclass(frozen=True)
class LambdaSpec:
    kind: str  # "root" or "numeric"
    text: str
    poly: LaurentPolynomial | None = None
    hint: complex = 0j

    @property
    def symbolic(self) -> bool:
        return self.kind == "root"


def parse_lambda(text: str) -> LambdaSpec:
    m = _ROOT.match(text)
    if m:
        poly = parse_polynomial(m.group(1), "x")
        if poly.low < 0 or poly.span() < 1:
            raise ParseError(f"root() needs a polynomial of positive degree, got {m.group(1)!r}")
        return LambdaSpec("root", text.strip(), poly, parse_complex(m.group(2)))
    if "(" in text:
        raise ParseError(f"lambda must be root(POLY, HINT) or a complex decimal, got {text!r}")
    return LambdaSpec("numeric", text.strip(), None, parse_complex(text))


def resolve_lambda(spec: LambdaSpec, delta: LaurentPolynomial, backend: str = "exact",
                   precision: int = 256):
    """Backend and lambda for a knot with Alexander polynomial ``delta``.

    A symbolic lambda defines its own field; a decimal lambda is moved to the
    nearest lambda with Delta(lambda^2) = 0 and Q(lambda) is built from Delta.
    When that field is beyond the factorization cap only the numeric backend
    can be used.
    """
    if backend not in ("exact", "numeric"):
        raise ValueError(f"unknown backend {backend!r}")
    if spec.kind == "root":
        field, lam = field_from_minimal_polynomial(spec.poly, spec.hint)
    else:
        if spec.hint == 0:
            raise FieldError("lambda must be nonzero")
        try:
            field, lam = make_lambda_field(delta, spec.hint ** 2, lambda_hint=spec.hint)
        except FieldError as exc:
            if backend == "exact" or "exceeds factorization cap" not in str(exc):
                raise
            return _numeric_without_field(delta, spec.hint, precision)
    if backend == "exact":
        be = ExactBackend(field)
        lam = be.lam
        if delta(lam * lam):
            raise FieldError(f"lambda^2 is not a root of Delta = {delta.to_string()}")
        return be, lam
    be = NumericBackend(precision, field=field)
    lam = be.lam
    if not be.is_zero(delta(lam * lam), max(1, abs(complex(lam)) ** (2 * delta.span()))):
        raise FieldError(f"lambda^2 is not a root of Delta = {delta.to_string()}")
    return be, lam


def _numeric_without_field(delta: LaurentPolynomial, hint: complex, precision: int):
    be = NumericBackend(precision)
    ctx = be.ctx
    poly = delta.as_polynomial()
    coeffs = [ctx.mpf(c.numerator) / c.denominator for c in reversed(poly.coeffs)]
    roots = ctx.polyroots(coeffs, maxsteps=400, extraprec=2 * precision)
    mu = min(roots, key=lambda r: abs(complex(r) - hint ** 2))
    lam = ctx.sqrt(mu)
    if abs(complex(-lam) - hint) < abs(complex(lam) - hint):
        lam = -lam
    be = NumericBackend(precision, lam=lam)
    return be, be.lam


def lambda_description(be, lam) -> dict:
    out = {"backend": be.name, "value": complex_string(complex(lam))}
    field = getattr(be, "field", None)
    if field is not None:
        out["field_modulus"] = field.modulus_polynomial().to_string("x")
    else:
        out["capability"] = "no number field for lambda; numeric backend only"
    return out


def complex_string(z: complex, digits: int = 12) -> str:
    re_, im = round(z.real, digits), round(z.imag, digits)
    re_ = 0.0 if re_ == 0 else re_
    im = 0.0 if im == 0 else im
    if im == 0:
        return f"{re_:.{digits}g}"
    return f"{re_:.{digits}g}{'+' if im > 0 else '-'}{abs(im):.{digits}g}i"
