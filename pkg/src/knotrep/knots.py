"""Knot descriptions and group presentations.

Knots come in as braid words, PD codes, names from the bundled table, or
explicit presentations such as ``<S,T | S T S T^-1 S^-1 T^-1>``; everything
is turned into a :class:`KnotPresentation` carrying the abelianization
``phi`` (generator -> exponent weight).
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from math import gcd
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InconsistentPDError, NotAKnotError, ParseError, UnknownKnotError

TABLE_ENV = "KNOTREP_TABLE"


class Word:
    """Freely reduced word in a free group: a tuple of ``(generator, ±1)`` letters."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable = ()):
        out: list[tuple[int, int]] = []
        for g, e in letters:
            g, e = int(g), int(e)
            if g < 0:
                raise ValueError(f"negative generator index {g}")
            if e == 0:
                continue
            step = 1 if e > 0 else -1
            for _ in range(abs(e)):
                if out and out[-1] == (g, -step):
                    out.pop()
                else:
                    out.append((g, step))
        self.letters: tuple[tuple[int, int], ...] = tuple(out)

    @classmethod
    def gen(cls, g: int, e: int = 1) -> "Word":
        return cls([(g, e)])

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word((g, -e) for g, e in reversed(self.letters))

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.letters[i])
        return self.letters[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __lt__(self, other: "Word") -> bool:
        return (len(self), self.letters) < (len(other), other.letters)

    def generators(self) -> set[int]:
        return {g for g, _ in self.letters}

    def substitute(self, images: Sequence["Word"]) -> "Word":
        """Image under the endomorphism of the free group sending generator i to ``images[i]``."""
        out: list[tuple[int, int]] = []
        for g, e in self.letters:
            out.extend((images[g] if e > 0 else images[g].inverse()).letters)
        return Word(out)

    def cyclically_reduced(self) -> "Word":
        letters = list(self.letters)
        while len(letters) > 1 and letters[0] == (letters[-1][0], -letters[-1][1]):
            letters = letters[1:-1]
        return Word(letters)

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if not self.letters:
            return "1"
        parts = []
        for g, e in self.letters:
            name = names[g] if names else f"x{g}"
            parts.append(name if e > 0 else f"{name}^-1")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Word({self.to_string()})"


@dataclass(frozen=True)
class KnotPresentation:
    """Deficiency-one presentation of a knot group with its abelianization.

    ``phi[i]`` is the image of generator ``i`` in Z; ``meridian`` indexes a
    generator with ``phi == 1``.
    """

    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    phi: tuple[int, ...]
    meridian: int = 0
    source: str = "presentation"

    def __post_init__(self):
        g = len(self.generators)
        if len(self.phi) != g:
            raise ValueError("phi must assign a weight to every generator")
        if not 0 <= self.meridian < g:
            raise ValueError("meridian index out of range")
        if self.phi[self.meridian] != 1:
            raise NotAKnotError("the meridian generator must have weight 1 under phi")
        for j, r in enumerate(self.relators):
            for gi, _ in r:
                if gi >= g:
                    raise ValueError(f"relator {j} references generator {gi} out of range")
            if exponent_sum(r, self) != 0:
                raise NotAKnotError(f"relator {j} has nonzero phi-weight")

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    @property
    def deficiency(self) -> int:
        return len(self.generators) - len(self.relators)

    def relator_strings(self) -> list[str]:
        return [r.to_string(self.generators) for r in self.relators]

    def to_text(self) -> str:
        rels = ", ".join(self.relator_strings())
        return f"<{','.join(self.generators)} | {rels}>"

    def abelianized_relator_matrix(self) -> list[list[int]]:
        """Exponent sums of each generator in each relator (relators x generators)."""
        rows = []
        for r in self.relators:
            row = [0] * self.num_generators
            for g, e in r:
                row[g] += e
            rows.append(row)
        return rows


def exponent_sum(w: Word, p: KnotPresentation) -> int:
    """phi(w): exponent sum of ``w`` weighted by the abelianization of ``p``."""
    total = 0
    for g, e in w:
        if not 0 <= g < len(p.phi):
            raise IndexError(f"generator {g} out of range")
        total += e * p.phi[g]
    return total


# -- knot inputs -----------------------------------------------------------------
@dataclass(frozen=True)
class KnotInput:
    """A structurally validated knot description (exactly one payload is set)."""

    kind: str
    braid: tuple[int, ...] | None = None
    pd: tuple[tuple[int, int, int, int], ...] | None = None
    name: str | None = None
    presentation: KnotPresentation | None = None
    strands: int | None = None
    comment: str = ""


@dataclass(frozen=True)
class TableEntry:
    name: str
    braid: tuple[int, ...]
    pd: tuple[tuple[int, int, int, int], ...] = ()
    comment: str = ""


def default_table_path() -> Path:
    env = os.environ.get(TABLE_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("knotrep") / "data" / "knots.json"))


def load_table(path: str | os.PathLike | None = None) -> dict[str, TableEntry]:
    """Read the knot table (a JSON array of ``{name, braid, pd, comment}``)."""
    path = default_table_path() if path is None else Path(path)
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise UnknownKnotError(f"knot table {path} not found") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"knot table {path} is not valid JSON: {exc.msg}", exc.pos) from None
    table = {}
    for item in raw:
        try:
            entry = TableEntry(
                name=str(item["name"]),
                braid=tuple(int(x) for x in item["braid"]),
                pd=tuple(tuple(int(a) for a in x) for x in item.get("pd", [])),
                comment=item.get("comment", ""),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed table entry {item!r}: {exc}") from None
        table[entry.name] = entry
    return table


_BRAID_TOKEN = re.compile(r"\s*(?:([sS])(\d+)(\^\(?(-?1)\)?)?|(-?\d+))\s*,?")


def parse_braid(text: str) -> tuple[int, ...]:
    """Parse ``s1 s2^-1 s1`` / ``S2`` (inverse) / ``1 -2 1`` / ``[1,-2,1]`` into signed indices."""
    body = text.strip()
    offset = 0
    if body.startswith("[") and body.endswith("]"):
        body, offset = body[1:-1], 1
    pos, out = 0, []
    while pos < len(body):
        if body[pos:].strip() == "":
            break
        m = _BRAID_TOKEN.match(body, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected braid token {body[pos:pos + 5]!r}", pos + offset)
        if m.group(5) is not None:
            idx = int(m.group(5))
        else:
            idx = int(m.group(2))
            if m.group(1) == "S":
                idx = -idx
            if m.group(4) is not None:
                idx *= int(m.group(4))
        if idx == 0:
            raise ParseError("braid generator indices must be nonzero", m.start() + offset)
        out.append(idx)
        pos = m.end()
    return tuple(out)


def parse_pd(text: str) -> tuple[tuple[int, int, int, int], ...]:
    """Parse ``X[1,4,2,5] X[3,6,4,1] ...`` or a JSON list of 4-tuples."""
    groups = re.findall(r"[\[\(]\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*[\]\)]", text)
    if not groups:
        raise ParseError("no PD crossings found", 0)
    pd = tuple(tuple(int(x) for x in g) for g in groups)
    validate_pd(pd)
    return pd


def validate_pd(pd: Sequence[Sequence[int]]) -> None:
    counts: dict[int, int] = {}
    for x in pd:
        if len(x) != 4:
            raise InconsistentPDError(f"PD crossing {tuple(x)} does not have 4 entries")
        for a in x:
            counts[a] = counts.get(a, 0) + 1
    bad = sorted(a for a, c in counts.items() if c != 2)
    if bad:
        raise InconsistentPDError(f"arc labels {bad} do not appear exactly twice")


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def parse_presentation(text: str) -> KnotPresentation:
    """Parse ``<a,b | r1, r2>``; relators may be words or equations ``u = v``."""
    s = text.strip()
    if not (s.startswith("<") and s.endswith(">")):
        raise ParseError("presentation must be enclosed in < >", 0)
    if "|" not in s:
        raise ParseError("presentation must separate generators and relators with |", 0)
    bar = s.index("|")
    gens_text = s[1:bar]
    names = [g.strip() for g in gens_text.split(",") if g.strip()]
    if not names:
        raise ParseError("presentation has no generators", 1)
    for name in names:
        if not _IDENT.fullmatch(name):
            raise ParseError(f"invalid generator name {name!r}", 1 + gens_text.find(name))
    if len(set(names)) != len(names):
        raise ParseError("duplicate generator names", 1)
    ordered = sorted(names, key=len, reverse=True)
    rel_text = s[bar + 1:-1]
    relators = []
    base = bar + 1
    for chunk in _split_top(rel_text):
        start = base + rel_text.find(chunk)
        sides = chunk.split("=")
        if len(sides) > 2:
            raise ParseError("relation has more than one '='", start)
        words = [_parse_word(side, names, ordered, start + (0 if i == 0 else len(sides[0]) + 1))
                 for i, side in enumerate(sides)]
        rel = words[0] if len(words) == 1 else words[0] * words[1].inverse()
        relators.append(rel)
    phi = _abelianization(len(names), relators)
    meridian = next((i for i, w in enumerate(phi) if w == 1), None)
    if meridian is None:
        raise NotAKnotError("no generator maps to ±1 under the abelianization")
    return KnotPresentation(tuple(names), tuple(relators), tuple(phi), meridian, source="presentation")


def _split_top(text: str) -> list[str]:
    return [c.strip() for c in text.split(",") if c.strip()]


def _parse_word(text: str, names: list[str], ordered: list[str], offset: int) -> Word:
    letters = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace() or ch in "*.":
            pos += 1
            continue
        if text[pos] == "1" and (pos + 1 == len(text) or not text[pos + 1].isdigit()) and not letters:
            pos += 1
            continue
        for name in ordered:
            if text.startswith(name, pos):
                break
        else:
            raise ParseError(f"unknown generator at {text[pos:pos + 6]!r}", offset + pos)
        pos += len(name)
        exp = 1
        m = re.match(r"\s*\^\s*\(?\s*(-?\d+)\s*\)?", text[pos:])
        if m:
            exp = int(m.group(1))
            pos += m.end()
        letters.append((names.index(name), exp))
    return Word(letters)


def _abelianization(g: int, relators: Sequence[Word]) -> list[int]:
    """Primitive integer generator of the kernel of the exponent-sum matrix."""
    from .scalars import ExactBackend

    rows = []
    for r in relators:
        row = [0] * g
        for gi, e in r:
            row[gi] += e
        rows.append(row)
    be = ExactBackend()
    if not rows:
        if g != 1:
            raise NotAKnotError("abelianization is not Z")
        return [1]
    import numpy as np

    kernel = be.nullspace(np.array(rows, dtype=object))
    if len(kernel) != 1:
        raise NotAKnotError(f"abelianization has free rank {len(kernel)}, expected 1")
    vec = [x.to_fraction() for x in kernel[0]]
    den = 1
    for v in vec:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in vec]
    common = 0
    for v in ints:
        common = gcd(common, abs(v))
    ints = [v // common for v in ints]
    if not any(abs(v) == 1 for v in ints):
        raise NotAKnotError("no generator maps to ±1 under the abelianization")
    first = next(v for v in ints if abs(v) == 1)
    return [v * first for v in ints]


def parse_knot_input(text: str, format: str, table: dict[str, TableEntry] | None = None) -> KnotInput:
    """Tokenize and validate a knot description of the given ``format``."""
    if not text or not text.strip():
        raise ParseError("empty knot description", 0)
    if format == "braid":
        word = parse_braid(text)
        return KnotInput("braid", braid=word)
    if format == "pd":
        return KnotInput("pd", pd=parse_pd(text))
    if format == "name":
        table = load_table() if table is None else table
        name = text.strip()
        if name not in table:
            raise UnknownKnotError(f"unknown knot {name!r}; table has {sorted(table)}")
        entry = table[name]
        return KnotInput("name", braid=entry.braid, pd=entry.pd or None, name=name, comment=entry.comment)
    if format == "presentation":
        return KnotInput("presentation", presentation=parse_presentation(text))
    raise ValueError(f"unknown knot input format {format!r}")


# -- Wirtinger presentations ------------------------------------------------------
class _UnionFind:
    def __init__(self):
        self.parent: dict[int, int] = {}

    def find(self, a: int) -> int:
        self.parent.setdefault(a, a)
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _braid_permutation_cycles(word: Sequence[int], strands: int) -> int:
    perm = list(range(strands))
    for s in word:
        i = abs(s) - 1
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    seen, cycles = set(), 0
    for start in range(strands):
        if start in seen:
            continue
        cycles += 1
        k = start
        while k not in seen:
            seen.add(k)
            k = perm[k]
    return cycles


def _assemble(crossings: list[tuple[int, int, int, int]], uf: _UnionFind, labels: Iterable[int],
              source: str) -> KnotPresentation:
    """Build the presentation from crossings ``(over, under_in, under_out, eps)``
    meaning under_out = over^-eps * under_in * over^eps."""
    classes = sorted({uf.find(a) for a in labels})
    index = {c: i for i, c in enumerate(classes)}
    g = len(classes)
    relators = []
    for over, inc, out, eps in crossings:
        a, b, c = index[uf.find(over)], index[uf.find(inc)], index[uf.find(out)]
        # c = a^-eps b a^eps  <=>  a^-eps b a^eps c^-1 = 1
        relators.append(Word([(a, -eps), (b, 1), (a, eps), (c, -1)]))
    if len(relators) == g and relators:
        relators.pop()
    if len(relators) != g - 1:
        raise NotAKnotError(f"diagram yields {g} arcs but {len(relators)} relators")
    names = tuple(f"x{i}" for i in range(g))
    return KnotPresentation(names, tuple(relators), (1,) * g, 0, source=source)


def _wirtinger_from_braid(word: Sequence[int], strands: int | None = None) -> KnotPresentation:
    s = max([abs(x) for x in word], default=0) + 1
    strands = max(s, strands or 1)
    if _braid_permutation_cycles(word, strands) != 1:
        raise NotAKnotError("braid closure has more than one component")
    arc = list(range(strands))
    next_label = strands
    uf = _UnionFind()
    crossings = []
    for x in word:
        i = abs(x) - 1
        if x > 0:
            over, under = arc[i], arc[i + 1]
            arc[i + 1], arc[i] = over, next_label
            crossings.append((over, under, next_label, 1))
        else:
            over, under = arc[i + 1], arc[i]
            arc[i], arc[i + 1] = over, next_label
            crossings.append((over, under, next_label, -1))
        next_label += 1
    for pos in range(strands):
        uf.union(arc[pos], pos)
    return _assemble(crossings, uf, range(next_label), "wirtinger")


def _wirtinger_from_pd(pd: Sequence[Sequence[int]]) -> KnotPresentation:
    validate_pd(pd)
    if not pd:
        raise NotAKnotError("empty diagram")
    strands = _UnionFind()
    for i, j, k, l in pd:
        strands.union(i, k)
        strands.union(j, l)
    labels = sorted({a for x in pd for a in x})
    if len({strands.find(a) for a in labels}) != 1:
        raise NotAKnotError("PD code describes a link with more than one component")
    n = len(labels)
    pos = {a: t for t, a in enumerate(labels)}
    uf = _UnionFind()
    for _, j, _, l in pd:
        uf.union(j, l)
    crossings = []
    for i, j, k, l in pd:
        if (pos[l] - pos[j]) % n == 1:
            eps = 1  # over strand runs j -> l
        elif (pos[j] - pos[l]) % n == 1:
            eps = -1
        else:
            raise InconsistentPDError(f"over-strand labels {j}, {l} are not consecutive")
        crossings.append((j, i, k, eps))
    return _assemble(crossings, uf, labels, "wirtinger")


def wirtinger_presentation(knot: KnotInput | str, table: dict[str, TableEntry] | None = None,
                           simplify: bool = False) -> KnotPresentation:
    """Wirtinger presentation with one redundant relator dropped.

    Explicit presentations are passed through unchanged. ``simplify`` applies
    Tietze eliminations (see :func:`simplify_presentation`).
    """
    if isinstance(knot, str):
        knot = parse_knot_input(knot, "name", table)
    if knot.kind == "presentation":
        pres = knot.presentation
    elif knot.braid is not None:
        pres = _wirtinger_from_braid(knot.braid, knot.strands)
    elif knot.pd is not None:
        pres = _wirtinger_from_pd(knot.pd)
    else:
        raise NotAKnotError("empty diagram")
    return simplify_presentation(pres) if simplify else pres


def simplify_presentation(p: KnotPresentation) -> KnotPresentation:
    """Eliminate generators that occur exactly once in some relator (never the meridian).

    Each step is a Tietze move that collapses the presentation 2-complex, so
    group cohomology is unchanged and the deficiency stays one.
    """
    gens = list(range(p.num_generators))
    rels = [r.cyclically_reduced() for r in p.relators]
    while True:
        best = None
        for ri, r in enumerate(rels):
            for g in r.generators():
                if g == p.meridian:
                    continue
                hits = [t for t, (h, _) in enumerate(r.letters) if h == g]
                if len(hits) == 1:
                    cand = (len(r), ri, g, hits[0])
                    if best is None or cand < best:
                        best = cand
        if best is None:
            break
        _, ri, g, t = best
        r = rels[ri]
        u, (_, e), v = r[:t], r.letters[t], r[t + 1:]
        # u x^e v = 1  =>  x^e = u^-1 v^-1
        image = u.inverse() * v.inverse()
        if e < 0:
            image = image.inverse()
        images = [Word.gen(h) for h in range(p.num_generators)]
        images[g] = image
        rels = [w.substitute(images).cyclically_reduced() for k, w in enumerate(rels) if k != ri]
        gens.remove(g)
    index = {g: i for i, g in enumerate(gens)}
    relabel = [Word.gen(index[h]) if h in index else Word() for h in range(p.num_generators)]
    new_rels = tuple(w.substitute(relabel) for w in rels)
    return KnotPresentation(tuple(p.generators[g] for g in gens), new_rels, tuple(p.phi[g] for g in gens),
                            index[p.meridian], source=p.source + "+tietze")


def trefoil_two_generator() -> KnotPresentation:
    """<S,T | STS = TST>, meridian S."""
    return parse_presentation("<S,T | S T S T^-1 S^-1 T^-1>")
