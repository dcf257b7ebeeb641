"""Laurent polynomials in one variable with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping


def _trim(low: int, coeffs: list[Fraction]) -> tuple[int, tuple[Fraction, ...]]:
    start = 0
    while start < len(coeffs) and coeffs[start] == 0:
        start += 1
    end = len(coeffs)
    while end > start and coeffs[end - 1] == 0:
        end -= 1
    if start == end:
        return 0, ()
    return low + start, tuple(coeffs[start:end])


class LaurentPolynomial:
    """Element of Q[t, t^-1], stored as (lowest exponent, dense coefficients).

    The coefficient tuple never has zero leading or trailing entries; the zero
    polynomial is ``(0, ())``.
    """

    __slots__ = ("low", "coeffs")

    def __init__(self, coeffs: Iterable = (), low: int = 0):
        self.low, self.coeffs = _trim(int(low), [Fraction(c) for c in coeffs])

    @classmethod
    def from_dict(cls, terms: Mapping[int, object]) -> "LaurentPolynomial":
        terms = {e: Fraction(c) for e, c in terms.items() if c != 0}
        if not terms:
            return cls()
        low, high = min(terms), max(terms)
        return cls([terms.get(e, 0) for e in range(low, high + 1)], low)

    @classmethod
    def monomial(cls, exponent: int, coeff=1) -> "LaurentPolynomial":
        return cls([coeff], exponent)

    @classmethod
    def const(cls, c) -> "LaurentPolynomial":
        return cls([c], 0)

    # -- structure ------------------------------------------------------------
    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def span(self) -> int:
        """Difference between highest and lowest exponent (-1 for zero)."""
        return len(self.coeffs) - 1

    def terms(self) -> dict[int, Fraction]:
        return {self.low + i: c for i, c in enumerate(self.coeffs) if c != 0}

    def leading(self) -> Fraction:
        return self.coeffs[-1]

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPolynomial):
            if isinstance(other, (int, Fraction)):
                other = LaurentPolynomial.const(other)
            else:
                return NotImplemented
        return self.low == other.low and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.low, self.coeffs))

    # -- arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> "LaurentPolynomial":
        if isinstance(other, LaurentPolynomial):
            return other
        return LaurentPolynomial.const(other)

    def __add__(self, other) -> "LaurentPolynomial":
        other = self._coerce(other)
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        low = min(self.low, other.low)
        high = max(self.high, other.high)
        out = [Fraction(0)] * (high - low + 1)
        for i, c in enumerate(self.coeffs):
            out[self.low - low + i] += c
        for i, c in enumerate(other.coeffs):
            out[other.low - low + i] += c
        return LaurentPolynomial(out, low)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial([-c for c in self.coeffs], self.low)

    def __sub__(self, other) -> "LaurentPolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentPolynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LaurentPolynomial":
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return LaurentPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return LaurentPolynomial(out, self.low + other.low)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPolynomial":
        if k < 0:
            if len(self.coeffs) != 1:
                raise ValueError("only monomials have Laurent inverses")
            return LaurentPolynomial([1 / self.coeffs[0] ** -k], self.low * k)
        result = LaurentPolynomial.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> "LaurentPolynomial":
        """Multiply by t^k."""
        return LaurentPolynomial(self.coeffs, self.low + k)

    def scale(self, c) -> "LaurentPolynomial":
        c = Fraction(c)
        return LaurentPolynomial([c * a for a in self.coeffs], self.low)

    def derivative(self) -> "LaurentPolynomial":
        return LaurentPolynomial.from_dict({e - 1: e * c for e, c in self.terms().items()})

    def substitute_power(self, k: int) -> "LaurentPolynomial":
        """Return p(t^k)."""
        if k == 0:
            return LaurentPolynomial.const(sum(self.coeffs, Fraction(0)))
        return LaurentPolynomial.from_dict({e * k: c for e, c in self.terms().items()})

    def evaluate(self, x):
        """Evaluate at ``x`` using only ring operations (plus one inverse if low < 0)."""
        if not self.coeffs:
            return 0 * x
        acc = None
        for c in reversed(self.coeffs):
            acc = _scal(c, x) if acc is None else acc * x + _scal(c, x)
        if self.low > 0:
            acc = acc * x ** self.low
        elif self.low < 0:
            acc = acc * (x ** -1) ** (-self.low)
        return acc

    __call__ = evaluate

    # -- Euclidean structure (as polynomials after clearing t-powers) ----------
    def as_polynomial(self) -> "LaurentPolynomial":
        """The associate with lowest exponent 0."""
        return self.shift(-self.low) if self.coeffs else self

    def divmod(self, other: "LaurentPolynomial") -> tuple["LaurentPolynomial", "LaurentPolynomial"]:
        """Polynomial division of ordinary polynomials (both must have low >= 0)."""
        if not other.coeffs:
            raise ZeroDivisionError("division by zero polynomial")
        if self.low < 0 or other.low < 0:
            raise ValueError("divmod requires ordinary polynomials")
        num = [Fraction(0)] * self.low + list(self.coeffs)
        den = [Fraction(0)] * other.low + list(other.coeffs)
        if len(num) < len(den):
            return LaurentPolynomial(), self
        q = [Fraction(0)] * (len(num) - len(den) + 1)
        lead = den[-1]
        for i in range(len(q) - 1, -1, -1):
            c = num[i + len(den) - 1] / lead
            q[i] = c
            if c:
                for j, d in enumerate(den):
                    num[i + j] -= c * d
        return LaurentPolynomial(q), LaurentPolynomial(num[: len(den) - 1])

    def exact_div(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        """Quotient in Q[t, t^-1]; raises if ``other`` does not divide ``self``."""
        if not self.coeffs:
            return LaurentPolynomial()
        a, b = self.as_polynomial(), other.as_polynomial()
        q, r = a.divmod(b)
        if r:
            raise ArithmeticError("inexact Laurent division")
        return q.shift(self.low - other.low)

    def monic(self) -> "LaurentPolynomial":
        if not self.coeffs:
            return self
        return self.scale(1 / self.coeffs[-1])

    def gcd(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        """Monic gcd with lowest exponent 0 (units of Q[t^±1] are ignored)."""
        a, b = self.as_polynomial(), other.as_polynomial()
        while b:
            a, b = b, a.divmod(b)[1].as_polynomial()
        return a.monic()

    # -- normal forms ---------------------------------------------------------
    def is_palindromic(self) -> bool:
        return self.coeffs == self.coeffs[::-1]

    def symmetric(self) -> "LaurentPolynomial":
        """Associate centered so that p(t) = p(1/t) when the coefficients are palindromic."""
        if self.span() % 2:
            raise ValueError("odd span cannot be centered")
        return LaurentPolynomial(self.coeffs, -self.span() // 2)

    def is_associate(self, other: "LaurentPolynomial") -> bool:
        """Equality up to units ±t^k."""
        if len(self.coeffs) != len(other.coeffs):
            return False
        return self.coeffs == other.coeffs or self.coeffs == tuple(-c for c in other.coeffs)

    # -- display --------------------------------------------------------------
    def to_string(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e in range(self.high, self.low - 1, -1):
            c = self.coeffs[e - self.low]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                mono = var if e == 1 else f"{var}^{e}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self.to_string()})"

    __str__ = to_string


def _scal(c: Fraction, x):
    """Embed a rational constant into the scalar type of ``x``."""
    if c.denominator == 1:
        return x * 0 + int(c.numerator)
    return (x * 0 + int(c.numerator)) / int(c.denominator)


def polynomial_from_sympy(expr, var: str = "x") -> LaurentPolynomial:
    import sympy

    poly = sympy.Poly(expr, sympy.Symbol(var))
    terms = {int(m[0]): Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1]))
             for m, c in zip(poly.monoms(), poly.coeffs())}
    return LaurentPolynomial.from_dict(terms)


def to_sympy(p: LaurentPolynomial, var: str = "x"):
    import sympy

    x = sympy.Symbol(var)
    return sum(sympy.Rational(c.numerator, c.denominator) * x ** e for e, c in p.terms().items())


def parse_polynomial(text: str, var: str = "x") -> LaurentPolynomial:
    """Parse a Laurent polynomial such as ``x^4-x^2+1`` or ``t - 1 + t^-1``."""
    import sympy

    from ..errors import ParseError

    cleaned = text.replace("^", "**")
    x = sympy.Symbol(var)
    try:
        expr = sympy.sympify(cleaned, locals={var: x})
        num, den = sympy.fraction(sympy.together(sympy.expand(expr)))
        den = sympy.Poly(den, x)
        if len(den.terms()) != 1:
            raise ParseError(f"{text!r} is not a Laurent polynomial in {var}")
        (shift,), c = den.terms()[0]
        return polynomial_from_sympy(sympy.expand(num / c), var).shift(-int(shift))
    except (sympy.SympifyError, sympy.PolynomialError, TypeError, SyntaxError) as exc:
        raise ParseError(f"cannot parse polynomial {text!r}: {exc}") from None
