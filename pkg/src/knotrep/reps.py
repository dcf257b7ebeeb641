"""Representations of knot groups and the modules they induce.

Matrices are numpy object arrays over a scalar backend. A
:class:`Representation` assigns a matrix to each generator; a
:class:`ModuleAction` turns it into an action on C_alpha, R_m or sl_n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import CocycleError, RelatorError
from .knots import KnotPresentation, Word

PROVENANCES = ("diagonal", "burde_derham", "symmetric_power", "deformed", "user", "scalar")


def _frobenius(backend, m: np.ndarray):
    ctx = getattr(backend, "ctx", None)
    if ctx is None:
        return None
    return ctx.sqrt(sum((abs(x) ** 2 for x in m.reshape(-1)), ctx.mpf(0)))


class Representation:
    """Generator images (and their inverses) over a scalar backend."""

    def __init__(self, presentation: KnotPresentation, images, backend, provenance: str = "user",
                 inverses=None, certify: bool = True, tol: float = 1e-10):
        if provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {provenance!r}")
        self.presentation = presentation
        self.backend = backend
        self.provenance = provenance
        self.images = tuple(backend.asarray(m) for m in images)
        if len(self.images) != presentation.num_generators:
            raise ValueError("one image per generator is required")
        self.n = self.images[0].shape[0] if self.images else 0
        if inverses is None:
            inverses = [backend.inv(m) for m in self.images]
        self.inverses = tuple(backend.asarray(m) for m in inverses)
        self.tol = tol
        self._cache: dict[Word, tuple[np.ndarray, np.ndarray]] = {}
        if certify:
            self.certify()

    def __repr__(self) -> str:
        return f"Representation(n={self.n}, provenance={self.provenance!r}, backend={self.backend.name})"

    # -- evaluation ------------------------------------------------------------
    def letter(self, g: int, e: int) -> np.ndarray:
        return self.images[g] if e > 0 else self.inverses[g]

    def word_pair(self, w: Word) -> tuple[np.ndarray, np.ndarray]:
        """(rho(w), rho(w)^-1), cached on prefixes."""
        if not w.letters:
            eye = self.backend.eye(self.n)
            return eye, eye
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        head, (g, e) = w[:-1], w.letters[-1]
        m, mi = self.word_pair(head)
        pair = (m @ self.letter(g, e), self.letter(g, -e) @ mi)
        if len(self._cache) < 4096:
            self._cache[w] = pair
        return pair

    def word_matrix(self, w: Word) -> np.ndarray:
        return self.word_pair(w)[0]

    # -- certification ---------------------------------------------------------
    def relator_residuals(self) -> list:
        be = self.backend
        out = []
        for r in self.presentation.relators:
            diff = self.word_matrix(r) - be.eye(self.n)
            if be.name == "exact":
                out.append(0 if all(not x for x in diff.reshape(-1)) else 1)
            else:
                out.append(_frobenius(be, diff))
        return out

    def residual(self):
        res = self.relator_residuals()
        return max(res) if res else 0

    def determinants(self) -> list:
        return [self.backend.det(m) for m in self.images]

    def certify(self) -> None:
        be = self.backend
        # characters of the abelianization are GL(1)-valued
        dets = [] if self.provenance == "scalar" else self.determinants()
        for i, d in enumerate(dets):
            if not be.is_zero(d - 1, None if be.name == "exact" else max(1, self.tol / be.eps)):
                raise RelatorError(f"generator {i} image has determinant {be.format(d)} != 1")
        for j, res in enumerate(self.relator_residuals()):
            if (be.name == "exact" and res) or (be.name != "exact" and res > self.tol):
                raise RelatorError(f"relator {j} is not sent to the identity (residual {res})")

    def trace(self, w: Word):
        m = self.word_matrix(w)
        return sum((m[i, i] for i in range(self.n)), self.backend.zero)

    def conjugate(self, c: np.ndarray) -> "Representation":
        """The representation g -> c rho(g) c^-1."""
        ci = self.backend.inv(c)
        return Representation(self.presentation, [c @ m @ ci for m in self.images], self.backend,
                              self.provenance, [c @ m @ ci for m in self.inverses])


# -- scalar cocycles and the Burde-de Rham representation ----------------------------
@dataclass
class CocycleVector:
    """Values z(g_i) of a 1-cochain, one backend vector per generator."""

    values: tuple
    module: str = "C"

    def scalar_values(self) -> list:
        return [v[0] for v in self.values]

    @classmethod
    def from_scalars(cls, values, module: str = "C") -> "CocycleVector":
        return cls(tuple(np.array([v], dtype=object) for v in values), module)


@dataclass
class ScalarCocycles:
    """Z^1 and B^1 of a presentation with coefficients in C_alpha."""

    alpha: object
    basis: list
    coboundary: list
    b1: int
    backend: object = field(repr=False, default=None)

    @property
    def z1(self) -> int:
        return len(self.basis)

    @property
    def h1(self) -> int:
        return self.z1 - self.b1


def scalar_fox_matrix(p: KnotPresentation, alpha, backend) -> np.ndarray:
    """Fox Jacobian evaluated under g -> alpha^phi(g)."""
    from .alexander import abelianize
    from .foxcalc import fox_derivative

    alpha = backend.scalar(alpha)
    m = backend.zeros(len(p.relators), p.num_generators)
    for j, r in enumerate(p.relators):
        for i in range(p.num_generators):
            m[j, i] = abelianize(fox_derivative(r, i), p)(alpha)
    return m


def solve_scalar_cocycles(p: KnotPresentation, alpha, backend) -> ScalarCocycles:
    alpha = backend.scalar(alpha)
    if backend.is_zero(alpha):
        raise ValueError("alpha must be nonzero")
    m = scalar_fox_matrix(p, alpha, backend)
    basis = backend.nullspace(m) if m.shape[0] else backend.nullspace(backend.zeros(0, p.num_generators))
    cob = [alpha ** w - 1 for w in p.phi]
    b1 = 0 if backend.is_zero(alpha - 1) else 1
    return ScalarCocycles(alpha, basis, cob, b1, backend)


def is_scalar_cocycle(p: KnotPresentation, alpha, values, backend) -> bool:
    m = scalar_fox_matrix(p, alpha, backend)
    v = np.array([backend.scalar(x) for x in values], dtype=object)
    res = m @ v if m.shape[0] else []
    return all(backend.is_zero(x) for x in res)


def normalized_cocycle(p: KnotPresentation, alpha, backend) -> CocycleVector:
    """A cocycle with nonzero class in H^1(C_alpha), normalized by z(meridian) = 0
    and first nonzero value 1."""
    sc = solve_scalar_cocycles(p, alpha, backend)
    if sc.h1 == 0:
        raise CocycleError("H^1 with these coefficients vanishes: alpha is not a root of Delta")
    mu = p.meridian
    b = sc.coboundary
    for z in sc.basis:
        z = list(z)
        if not backend.is_zero(b[mu]):
            c = z[mu] / b[mu]
            z = [zi - c * bi for zi, bi in zip(z, b)]
        if all(backend.is_zero(x) for x in z):
            continue
        if backend.name == "numeric":
            lead = max(z, key=abs)
            first = next(x for x in z if abs(x) > abs(lead) * backend.eps ** 0.5)
        else:
            first = next(x for x in z if not backend.is_zero(x))
        z = [x / first for x in z]
        if backend.name == "numeric":
            z = [backend.zero if backend.is_zero(x) else x for x in z]
        return CocycleVector.from_scalars(z, "C")
    raise CocycleError("no cocycle outside the coboundaries")  # pragma: no cover


def is_coboundary_scalar(p: KnotPresentation, alpha, values, backend) -> bool:
    """Whether z lies in the span of g -> alpha^phi(g) - 1."""
    alpha = backend.scalar(alpha)
    b = [alpha ** w - 1 for w in p.phi]
    if all(backend.is_zero(x) for x in b):
        return all(backend.is_zero(x) for x in values)
    k = next(i for i, x in enumerate(b) if not backend.is_zero(x))
    c = values[k] / b[k]
    return all(backend.is_zero(v - c * bi) for v, bi in zip(values, b))


def diagonal_rep(p: KnotPresentation, lam, backend) -> Representation:
    lam = backend.scalar(lam)
    images, inverses = [], []
    for w in p.phi:
        a = lam ** w
        images.append([[a, 0], [0, 1 / a]])
        inverses.append([[1 / a, 0], [0, a]])
    return Representation(p, images, backend, "diagonal", inverses)


def burde_derham(p: KnotPresentation, lam, z: CocycleVector | list, backend) -> Representation:
    """rho(g) = [[lam^phi, z lam^-phi], [0, lam^-phi]] on generators."""
    lam = backend.scalar(lam)
    values = z.scalar_values() if isinstance(z, CocycleVector) else [backend.scalar(x) for x in z]
    values = [backend.scalar(x) for x in values]
    if len(values) != p.num_generators:
        raise CocycleError("cocycle must have one value per generator")
    if not is_scalar_cocycle(p, lam * lam, values, backend):
        raise CocycleError("values do not satisfy the cocycle condition for C_{lambda^2}")
    images, inverses = [], []
    for w, zi in zip(p.phi, values):
        a = lam ** w
        ai = 1 / a
        images.append([[a, zi * ai], [backend.zero, ai]])
        inverses.append([[ai, -zi * ai], [backend.zero, a]])
    rep = Representation(p, images, backend, "burde_derham", inverses)
    rep.abelian = is_coboundary_scalar(p, lam * lam, values, backend)
    rep.lam = lam
    return rep


# -- symmetric powers ----------------------------------------------------------
def _polymul(a: list, b: list, zero) -> list:
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def sym_matrix(A: np.ndarray, n: int, backend) -> np.ndarray:
    """r_n(A) on the basis e_l = X^(l-1) Y^(n-l), l = 1..n.

    A acts by X -> dX - bY, Y -> -cX + aY; column l holds the X-power
    coefficients of (dX - bY)^(l-1) (-cX + aY)^(n-l).
    """
    a, b, c, d = A[0, 0], A[0, 1], A[1, 0], A[1, 1]
    zero, one = backend.zero, backend.one
    fx = [-b, d]   # dX - bY, indexed by X-power
    fy = [a, -c]   # -cX + aY
    px = [[one]]
    for _ in range(n - 1):
        px.append(_polymul(px[-1], fx, zero))
    py = [[one]]
    for _ in range(n - 1):
        py.append(_polymul(py[-1], fy, zero))
    out = backend.zeros(n, n)
    for l in range(1, n + 1):
        col = _polymul(px[l - 1], py[n - l], zero)
        for k in range(n):
            out[k, l - 1] = col[k]
    return out


def symmetric_power(rho: Representation, n: int) -> Representation:
    if rho.n != 2:
        raise ValueError("symmetric powers are taken of 2-dimensional representations")
    if n < 1:
        raise ValueError("n must be positive")
    be = rho.backend
    images = [sym_matrix(m, n, be) for m in rho.images]
    inverses = [sym_matrix(m, n, be) for m in rho.inverses]
    rep = Representation(rho.presentation, images, be, "symmetric_power", inverses)
    rep.base = rho
    rep.lam = getattr(rho, "lam", None)
    return rep


# -- sl_n adjoint action -------------------------------------------------------
def sl_basis_index(n: int) -> list[tuple[int, int]]:
    """Basis labels: (i, j) with i != j for E_ij, then (i, i) for H_i = E_ii - E_(i+1)(i+1)."""
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    return off + [(i, i) for i in range(n - 1)]


def sl_coordinates(m: np.ndarray, backend) -> np.ndarray:
    n = m.shape[0]
    out = backend.vector(n * n - 1)
    k = 0
    for i in range(n):
        for j in range(n):
            if i != j:
                out[k] = m[i, j]
                k += 1
    acc = backend.zero
    for i in range(n - 1):
        acc = acc + m[i, i]
        out[k + i] = acc
    return out


def sl_matrix(v, n: int, backend) -> np.ndarray:
    """Inverse of :func:`sl_coordinates`."""
    m = backend.zeros(n, n)
    for k, (i, j) in enumerate(sl_basis_index(n)):
        if i != j:
            m[i, j] = m[i, j] + v[k]
        else:
            m[i, i] = m[i, i] + v[k]
            m[i + 1, i + 1] = m[i + 1, i + 1] - v[k]
    return m


def adjoint_matrix(g: np.ndarray, ginv: np.ndarray, backend) -> np.ndarray:
    """Matrix of x -> g x g^-1 on sl_n in the basis of :func:`sl_basis_index`."""
    n = g.shape[0]
    dim = n * n - 1
    out = backend.zeros(dim, dim)
    outer = {}

    def rank_one(i, j):
        if (i, j) not in outer:
            outer[(i, j)] = np.multiply.outer(g[:, i], ginv[j, :])
        return outer[(i, j)]

    for k, (i, j) in enumerate(sl_basis_index(n)):
        img = rank_one(i, j) if i != j else rank_one(i, i) - rank_one(i + 1, i + 1)
        out[:, k] = sl_coordinates(img, backend)
    return out


# -- module actions ------------------------------------------------------------
class ModuleAction:
    """Action of the knot group on C_alpha, R_m or sl_n through a base representation.

    ``word_matrix`` multiplies small base matrices with prefix caching and only
    then applies the module transform.
    """

    def __init__(self, base: Representation, kind: str, param, transform: str):
        self.base = base
        self.kind = kind
        self.param = param
        self.transform = transform
        self.backend = base.backend
        self.presentation = base.presentation
        if transform == "id":
            self.dim = base.n
        elif transform == "sym":
            self.dim = int(param) + 1
        elif transform == "ad":
            self.dim = base.n * base.n - 1
        else:
            raise ValueError(f"unknown transform {transform!r}")
        self._cache: dict[Word, np.ndarray] = {}

    @property
    def descriptor(self) -> str:
        if self.kind == "C":
            return f"C:{self.backend.format(self.param)}"
        return f"{self.kind}:{self.param}"

    def __repr__(self) -> str:
        return f"ModuleAction({self.descriptor}, dim={self.dim})"

    def apply(self, g: np.ndarray, ginv: np.ndarray) -> np.ndarray:
        if self.transform == "id":
            return g
        if self.transform == "sym":
            return sym_matrix(g, self.dim, self.backend)
        return adjoint_matrix(g, ginv, self.backend)

    def word_matrix(self, w: Word) -> np.ndarray:
        hit = self._cache.get(w)
        if hit is None:
            g, gi = self.base.word_pair(w)
            hit = self.apply(g, gi)
            if len(self._cache) < 4096:
                self._cache[w] = hit
        return hit

    def generator_matrix(self, i: int, inverse: bool = False) -> np.ndarray:
        return self.word_matrix(Word.gen(i, -1 if inverse else 1))


def scalar_rep(p: KnotPresentation, alpha, backend) -> Representation:
    alpha = backend.scalar(alpha)
    images = [[[alpha ** w]] for w in p.phi]
    inverses = [[[alpha ** (-w)]] for w in p.phi]
    return Representation(p, images, backend, "scalar", inverses)


def module_action(rho: Representation | None, kind: str, param, presentation: KnotPresentation | None = None,
                  backend=None) -> ModuleAction:
    """``kind`` is ``"C"`` (param alpha), ``"R"`` (param m >= 0) or ``"sl"`` (param n).

    For ``sl`` a 2-dimensional ``rho`` is first pushed through r_n; a
    representation that is already n-dimensional is used as is.
    """
    if kind == "C":
        p = presentation if presentation is not None else rho.presentation
        be = backend if backend is not None else rho.backend
        alpha = be.scalar(param)
        if be.is_zero(alpha):
            raise ValueError("alpha must be nonzero")
        return ModuleAction(scalar_rep(p, alpha, be), "C", alpha, "id")
    if kind == "R":
        m = int(param)
        if m < 0 or m != param:
            raise ValueError("R_m needs an integer m >= 0")
        if rho.n != 2:
            raise ValueError("R_m is defined through a 2-dimensional representation")
        return ModuleAction(rho, "R", m, "sym")
    if kind == "sl":
        n = int(param)
        if n < 2 or n != param:
            raise ValueError("sl_n needs an integer n >= 2")
        if rho.n == n and rho.provenance != "burde_derham" and rho.provenance != "diagonal":
            base = rho
        elif rho.n == 2:
            base = symmetric_power(rho, n)
        else:
            raise ValueError(f"cannot build sl_{n} from a {rho.n}-dimensional representation")
        return ModuleAction(base, "sl", n, "ad")
    raise ValueError(f"unknown module kind {kind!r}")


def adjoint_action(rho: Representation) -> ModuleAction:
    """sl_n action through an n-dimensional representation used as is."""
    return ModuleAction(rho, "sl", rho.n, "ad")


def parse_module(text: str) -> tuple[str, str]:
    """``sl:N``, ``R:M`` or ``C:ALPHA`` -> (kind, raw parameter)."""
    if ":" not in text:
        raise ValueError(f"module must look like sl:N, R:M or C:alpha, got {text!r}")
    kind, param = text.split(":", 1)
    kind = {"sl": "sl", "SL": "sl", "R": "R", "r": "R", "C": "C", "c": "C"}.get(kind.strip())
    if kind is None:
        raise ValueError(f"unknown module kind in {text!r}")
    return kind, param.strip()


# -- irreducibility --------------------------------------------------------------
@dataclass
class IrreducibilityResult:
    irreducible: bool
    span_dimension: int
    witness: list | None = None

    def to_dict(self, backend=None) -> dict:
        out = {"irreducible": self.irreducible, "span_dimension": self.span_dimension}
        if self.witness is not None and backend is not None:
            out["witness"] = [[backend.format(x) for x in v] for v in self.witness]
        return out


class _SpanTracker:
    """Incrementally maintained span of vectors, exact or numeric."""

    def __init__(self, backend, dim: int):
        self.be = backend
        self.dim = dim
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []

    def add(self, v: np.ndarray) -> bool:
        be = self.be
        w = np.array(v, dtype=object)
        if be.name == "exact":
            for r, p in zip(self.rows, self.pivots):
                if w[p]:
                    w = w - r * w[p]
            nz = next((k for k, x in enumerate(w) if x), None)
            if nz is None:
                return False
            self.rows.append(w * (1 / w[nz]))
            self.pivots.append(nz)
            return True
        ctx = be.ctx
        norm = ctx.sqrt(sum(abs(x) ** 2 for x in w))
        if norm == 0:
            return False
        for _ in range(2):
            for q in self.rows:
                coef = sum((ctx.conj(qi) * wi for qi, wi in zip(q, w)), ctx.mpc(0))
                w = w - q * coef
        rn = ctx.sqrt(sum(abs(x) ** 2 for x in w))
        thr = norm * be.eps
        if rn > thr * be.band:
            self.rows.append(w / rn)
            return True
        if rn >= thr / be.band:
            from .errors import IndeterminateRankError

            raise IndeterminateRankError("span dimension is numerically indeterminate")
        return False


def algebra_span(rho: Representation, max_length: int | None = None) -> list[np.ndarray]:
    """Basis (as n x n matrices) of the span of words of length <= max_length.

    Each round either enlarges the span or closes it, so the default cap of
    n^2 rounds always reaches the full generated algebra.
    """
    n = rho.n
    be = rho.backend
    cap = n * n if max_length is None else max_length
    tracker = _SpanTracker(be, n * n)
    basis = [be.eye(n)]
    tracker.add(basis[0].reshape(-1))
    frontier = list(basis)
    gens = list(rho.images) + list(rho.inverses)
    for _ in range(cap):
        new = []
        for m in frontier:
            for g in gens:
                prod = m @ g
                if tracker.add(prod.reshape(-1)):
                    new.append(prod)
                    if len(tracker.rows) == n * n:
                        return basis + new
        basis.extend(new)
        frontier = new
        if not new:
            break
    return basis


def irreducibility_test(rho: Representation, max_length: int | None = None) -> IrreducibilityResult:
    """Burnside criterion: irreducible iff the words span all n x n matrices."""
    n = rho.n
    basis = algebra_span(rho, max_length)
    dim = len(basis)
    if dim == n * n:
        return IrreducibilityResult(True, dim)
    return IrreducibilityResult(False, dim, invariant_subspace(rho, basis))


def _orbit_span(basis: list[np.ndarray], v: np.ndarray, be) -> list[np.ndarray]:
    tracker = _SpanTracker(be, len(v))
    out = []
    for a in basis:
        w = a @ v
        if tracker.add(w):
            out.append(w)
    return out


def invariant_subspace(rho: Representation, basis: list[np.ndarray]) -> list | None:
    """A proper invariant subspace A v, trying standard basis vectors first and then
    eigenvectors of a random algebra element."""
    n = rho.n
    be = rho.backend
    for j in range(n):
        v = be.vector(n)
        v[j] = be.one
        orbit = _orbit_span(basis, v, be)
        if len(orbit) < n:
            return orbit
    if be.name != "numeric":
        return None
    import random

    ctx = be.ctx
    rng = random.Random(0)
    x = sum((a * be.scalar(rng.uniform(-1, 1)) for a in basis), be.zeros(n, n))
    _, vecs = ctx.eig(ctx.matrix(x.tolist()))
    for k in range(n):
        v = np.array([vecs[i, k] for i in range(n)], dtype=object)
        orbit = _orbit_span(basis, v, be)
        if len(orbit) < n:
            return orbit
    return None


# -- identities ----------------------------------------------------------------
def _trace(m: np.ndarray, zero):
    return sum((m[i, i] for i in range(m.shape[0])), zero)


def clebsch_gordan_check(A: np.ndarray, n: int, backend) -> bool:
    """trace Ad(r_n(A)) against sum_{i=1}^{n-1} trace r_(2i+1)(A)."""
    A = backend.asarray(A)
    if not backend.is_zero(backend.det(A) - 1):
        raise ValueError("A must be unimodular")
    Ai = backend.asarray([[A[1, 1], -A[0, 1]], [-A[1, 0], A[0, 0]]])
    g, gi = sym_matrix(A, n, backend), sym_matrix(Ai, n, backend)
    lhs = _trace(g, backend.zero) * _trace(gi, backend.zero) - 1
    direct = _trace(adjoint_matrix(g, gi, backend), backend.zero)
    rhs = sum((_trace(sym_matrix(A, 2 * i + 1, backend), backend.zero) for i in range(1, n)), backend.zero)
    scale = None if backend.name == "exact" else max(1, max(abs(x) for x in A.reshape(-1))) ** (2 * n)
    return backend.is_zero(lhs - rhs, scale) and backend.is_zero(direct - lhs, scale)


def ladder_map(n: int, backend) -> np.ndarray:
    """phi_(n-3): R_(n-3) -> R_(n-1)/<e_1>, e_l -> (1/l) e_(l+1), as an (n-1) x (n-2) matrix."""
    out = backend.zeros(n - 1, n - 2)
    for l in range(1, n - 1):
        out[l - 1, l - 1] = backend.one / l
    return out


def ladder_intertwines(A: np.ndarray, n: int, backend) -> bool:
    """Check r_n(A) phi = phi r_(n-2)(A) on the quotient by <e_1> for upper-triangular A."""
    if n < 3:
        raise ValueError("the ladder map needs n >= 3")
    A = backend.asarray(A)
    if not backend.is_zero(A[1, 0]):
        raise ValueError("A must be upper triangular")
    big = sym_matrix(A, n, backend)
    if any(not backend.is_zero(big[k, 0]) for k in range(1, n)):
        return False
    quotient = big[1:, 1:]
    small = sym_matrix(A, n - 2, backend)
    phi = ladder_map(n, backend)
    diff = quotient @ phi - phi @ small
    return all(backend.is_zero(x) for x in diff.reshape(-1))


def binomial_action_entry(lam, b, n: int, l: int, k: int, backend):
    """Closed form for entry (k, l) of r_n([[lam, b/lam], [0, 1/lam]]):
    lam^(n-2l+1) (-b)^j C(l-1, j) with j = l - k."""
    j = l - k
    if j < 0 or j > l - 1:
        return backend.zero
    return lam ** (n - 2 * l + 1) * (-b) ** j * comb(l - 1, j)
