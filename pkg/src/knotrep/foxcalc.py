"""Fox free differential calculus in the integral group ring of a free group."""

from __future__ import annotations

from typing import Callable, Iterable, Mapping

from .knots import Word


class GroupRingElement:
    """Finite Z-linear combination of freely reduced words."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, int] | Iterable[tuple[Word, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Word, int] = {}
        for w, c in items:
            if c:
                acc[w] = acc.get(w, 0) + int(c)
        self.terms = {w: c for w, c in acc.items() if c}

    @classmethod
    def of(cls, w: Word, c: int = 1) -> "GroupRingElement":
        return cls({w: c})

    @classmethod
    def one(cls) -> "GroupRingElement":
        return cls({Word(): 1})

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        return GroupRingElement(list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def __mul__(self, other) -> "GroupRingElement":
        if isinstance(other, int):
            return GroupRingElement({w: c * other for w, c in self.terms.items()})
        if isinstance(other, Word):
            other = GroupRingElement.of(other)
        return GroupRingElement((a * b, c * d) for a, c in self.terms.items() for b, d in other.terms.items())

    def __rmul__(self, other) -> "GroupRingElement":
        if isinstance(other, int):
            return self * other
        if isinstance(other, Word):
            return GroupRingElement.of(other) * self
        return NotImplemented

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupRingElement) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def augmentation(self) -> int:
        return sum(self.terms.values())

    def evaluate(self, image: Callable[[Word], object], zero=0):
        """Extend ``image`` (a map on words) linearly."""
        acc = zero
        for w, c in self.terms.items():
            acc = acc + image(w) * c
        return acc

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*[{w.to_string()}]" for w, c in sorted(self.terms.items()))


def fox_derivative(w: Word, g: int) -> GroupRingElement:
    """dw/dx_g via d(uv) = du + u dv and d(x^-1)/dx = -x^-1."""
    out: list[tuple[Word, int]] = []
    prefix = Word()
    for h, e in w:
        if h == g:
            if e > 0:
                out.append((prefix, 1))
            else:
                out.append((prefix * Word.gen(h, -1), -1))
        prefix = prefix * Word.gen(h, e)
    return GroupRingElement(out)


def fox_prefix_terms(w: Word, g: int) -> list[tuple[int, int]]:
    """Positions and signs of the terms of dw/dx_g before free reduction.

    Returns ``(t, s)`` pairs: the term is ``s * (prefix of length t)`` where the
    prefix for an inverse letter includes that letter.
    """
    out = []
    for t, (h, e) in enumerate(w.letters):
        if h == g:
            out.append((t, 1) if e > 0 else (t + 1, -1))
    return out


def fundamental_identity_holds(w: Word, num_generators: int) -> bool:
    """Check sum_i (dw/dx_i)(x_i - 1) = w - 1."""
    lhs = GroupRingElement()
    for i in range(num_generators):
        lhs = lhs + fox_derivative(w, i) * (GroupRingElement.of(Word.gen(i)) - GroupRingElement.one())
    return lhs == GroupRingElement.of(w) - GroupRingElement.one()


def fox_jacobian(relators: Iterable[Word], num_generators: int) -> list[list[GroupRingElement]]:
    return [[fox_derivative(r, g) for g in range(num_generators)] for r in relators]


def evaluate(e: GroupRingElement, act):
    """Image of ``e`` under a module action (anything with ``dim``, ``backend`` and ``word_matrix``)."""
    be = act.backend
    out = be.zeros(act.dim, act.dim)
    for w, c in e.terms.items():
        out = out + act.word_matrix(w) * be.scalar(c)
    return out
