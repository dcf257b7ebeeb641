"""Deformations of a representation along a cocycle direction.

Deformations are written on the left: rho_t(g) = exp(U_t(g)) rho(g) with
U_t = sum_i t^i u_i, so that a first-order deformation is a cocycle for
z(ab) = z(a) + Ad_rho(a) z(b).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .cohomology import coboundary_vectors, cocycle_space, fox_block_matrix, is_cocycle
from .errors import CocycleError, ConvergenceError
from .knots import KnotPresentation, Word
from .reps import (IrreducibilityResult, Representation, adjoint_action, irreducibility_test, sl_coordinates,
                   sl_matrix)
from .scalars.backends import NumericBackend

# -- truncated matrix power series ---------------------------------------------------
# A series is a list [c_0, ..., c_K] of n x n matrices (coefficients of t^0..t^K).


def series_mul(a: list, b: list, order: int, backend) -> list:
    n = a[0].shape[0]
    out = [backend.zeros(n, n) for _ in range(order + 1)]
    for i, x in enumerate(a[:order + 1]):
        if _is_zero_matrix(x, backend):
            continue
        for j, y in enumerate(b[:order + 1 - i]):
            out[i + j] = out[i + j] + x @ y
    return out


def _is_zero_matrix(m: np.ndarray, backend) -> bool:
    if backend.name == "exact":
        return not any(bool(x) for x in m.reshape(-1))
    return all(x == 0 for x in m.reshape(-1))


def series_exp(u: list, order: int, backend) -> list:
    """exp of a series with zero constant term."""
    n = u[0].shape[0]
    eye = backend.eye(n)
    out = [eye] + [backend.zeros(n, n) for _ in range(order)]
    power = [eye] + [backend.zeros(n, n) for _ in range(order)]
    for m in range(1, order + 1):
        power = series_mul(power, u, order, backend)
        inv = backend.one / factorial(m)
        out = [o + p * inv for o, p in zip(out, power)]
    return out


def series_log(s: list, order: int, backend) -> list:
    """log of a series with constant term I."""
    n = s[0].shape[0]
    x = [backend.zeros(n, n)] + list(s[1:order + 1])
    x += [backend.zeros(n, n)] * (order + 1 - len(x))
    out = [backend.zeros(n, n) for _ in range(order + 1)]
    power = [backend.eye(n)] + [backend.zeros(n, n) for _ in range(order)]
    for m in range(1, order + 1):
        power = series_mul(power, x, order, backend)
        coef = backend.one * (1 if m % 2 else -1) / m
        out = [o + p * coef for o, p in zip(out, power)]
    return out


def constant_series(m: np.ndarray, order: int, backend) -> list:
    n = m.shape[0]
    return [m] + [backend.zeros(n, n) for _ in range(order)]


# -- cochains --------------------------------------------------------------------
def cochain_to_matrices(vec, n: int, num_generators: int, backend) -> list[np.ndarray]:
    d = n * n - 1
    return [sl_matrix(vec[i * d:(i + 1) * d], n, backend) for i in range(num_generators)]


def matrices_to_cochain(mats: list[np.ndarray], backend) -> np.ndarray:
    return np.concatenate([sl_coordinates(m, backend) for m in mats])


@dataclass
class TangentData:
    z1: list
    b1: list
    complement: list
    dim_z1: int
    dim_b1: int

    @property
    def dim_complement(self) -> int:
        return len(self.complement)


def tangent_cocycles(p: KnotPresentation, rho: Representation) -> TangentData:
    """Bases of Z^1 and B^1 for sl_n twisted by Ad rho, plus a complement of B^1.

    The complement is picked by column pivoting on [B^1 | Z^1]: Z^1 basis
    vectors not in the span of B^1 and earlier choices are kept in order.
    """
    act = adjoint_action(rho)
    be = rho.backend
    z1 = cocycle_space(p, act)
    cob = coboundary_vectors(p, act)
    if cob:
        mat = np.stack(cob, axis=1)
        keep = be.independent_columns(mat)
        b1 = [cob[k] for k in keep]
    else:
        b1 = []
    if z1:
        cols = np.stack(b1 + z1, axis=1)
        piv = be.independent_columns(cols)
        comp = [z1[k - len(b1)] for k in piv if k >= len(b1)]
    else:
        comp = []
    return TangentData(z1, b1, comp, len(z1), len(b1))


def is_coboundary(p: KnotPresentation, rho: Representation, vec) -> np.ndarray | None:
    """x with u = delta(x) (u(g) = Ad_rho(g) x - x), or None."""
    act = adjoint_action(rho)
    be = rho.backend
    cob = coboundary_vectors(p, act)
    mat = np.stack(cob, axis=1)
    return be.solve(mat, np.array(vec, dtype=object))


# -- formal integration -------------------------------------------------------------
def _word_series(w: Word, gen_series: list, inv_series: list, order: int, backend, n: int) -> list:
    acc = constant_series(backend.eye(n), order, backend)
    for g, e in w.letters:
        acc = series_mul(acc, gen_series[g] if e > 0 else inv_series[g], order, backend)
    return acc


def image_series(rho: Representation, cochains: list[list[np.ndarray]], order: int) -> tuple[list, list]:
    """Series of exp(U(g)) rho(g) and of its inverse rho(g)^-1 exp(-U(g)) per generator."""
    be = rho.backend
    n = rho.n
    gens, invs = [], []
    for i in range(rho.presentation.num_generators):
        u = [be.zeros(n, n)] + [c[i] for c in cochains[:order]]
        u += [be.zeros(n, n)] * (order + 1 - len(u))
        e = series_exp(u, order, be)
        ei = series_exp([-x for x in u], order, be)
        gens.append(series_mul(e, constant_series(rho.images[i], order, be), order, be))
        invs.append(series_mul(constant_series(rho.inverses[i], order, be), ei, order, be))
    return gens, invs


def obstruction(p: KnotPresentation, rho: Representation, cochains: list[list[np.ndarray]],
                order: int) -> list[np.ndarray]:
    """t^order coefficient of rho_(order-1)(r) for each relator r (traceless when the
    lower orders vanish)."""
    be = rho.backend
    gens, invs = image_series(rho, cochains, order)
    return [_word_series(r, gens, invs, order, be, rho.n)[order] for r in p.relators]


def relator_defects(p: KnotPresentation, rho: Representation, cochains, order: int) -> list[list[np.ndarray]]:
    """All coefficients 1..order of rho_j(r) - I per relator."""
    be = rho.backend
    gens, invs = image_series(rho, cochains, order)
    return [_word_series(r, gens, invs, order, be, rho.n)[1:] for r in p.relators]


@dataclass
class DeformationSeries:
    base: Representation
    cochains: list
    order: int
    residuals: list = field(default_factory=list)
    method: str = "fox"

    def evaluate(self, t, backend: NumericBackend | None = None) -> list[np.ndarray]:
        """Generator images exp(sum t^i u_i) rho at a numeric t (exact data is embedded)."""
        nb = backend if backend is not None else _numeric_for(self.base)
        ctx = nb.ctx
        t = nb.scalar(t)
        out = []
        for i in range(self.base.presentation.num_generators):
            n = self.base.n
            u = ctx.matrix(n, n)
            for k, c in enumerate(self.cochains[:self.order], start=1):
                u += ctx.matrix(_embed(c[i], nb).tolist()) * t ** k
            img = ctx.expm(u) * ctx.matrix(_embed(self.base.images[i], nb).tolist())
            out.append(_from_mp(img))
        return out

    def relator_residual(self, t, backend: NumericBackend | None = None):
        nb = backend if backend is not None else _numeric_for(self.base)
        images = self.evaluate(t, nb)
        return _max_relator_residual(self.base.presentation, images, nb)


@dataclass
class FirstObstruction:
    """The linear system for u_order is inconsistent: a nonvanishing obstruction."""

    order: int
    zeta: list
    series: DeformationSeries

    @property
    def obstructed(self) -> bool:
        return True


def formal_integrate(p: KnotPresentation, rho: Representation, u1, order: int,
                     method: str = "auto") -> DeformationSeries | FirstObstruction:
    """Extend u1 to u_1..u_order with every relator trivial mod t^(order+1).

    ``method`` ``"fox"`` solves the Fox system order by order; ``"conjugation"``
    (chosen by ``"auto"`` when u1 is a coboundary) uses the closed form
    U(g) = log(exp(-t x) exp(t Ad_rho(g) x)).
    """
    be = rho.backend
    n = rho.n
    g = p.num_generators
    act = adjoint_action(rho)
    vec = np.array(u1, dtype=object)
    if not is_cocycle(p, act, vec):
        raise CocycleError("u1 is not a cocycle")
    if order < 1:
        raise ValueError("order must be at least 1")
    x = None
    if method in ("auto", "conjugation"):
        x = is_coboundary(p, rho, vec)
        if x is None and method == "conjugation":
            raise CocycleError("u1 is not a coboundary")
    if x is not None and method != "fox":
        return _conjugation_series(p, rho, x, order)
    cochains = [cochain_to_matrices(vec, n, g, be)]
    fm = fox_block_matrix(p, act)
    series = DeformationSeries(rho, cochains, 1, [0], "fox")
    for j in range(1, order):
        zeta = obstruction(p, rho, cochains, j + 1)
        rhs = np.concatenate([-sl_coordinates(z, be) for z in zeta]) if zeta else np.empty(0, dtype=object)
        sol = be.solve(fm, rhs) if fm.shape[0] else be.vector(g * (n * n - 1))
        if sol is None:
            return FirstObstruction(j + 1, zeta, series)
        cochains.append(cochain_to_matrices(sol, n, g, be))
        series = DeformationSeries(rho, cochains, j + 1, series.residuals + [_defect_size(zeta, be)], "fox")
    return series


def _conjugation_series(p: KnotPresentation, rho: Representation, xvec, order: int) -> DeformationSeries:
    be = rho.backend
    n = rho.n
    x = sl_matrix(xvec, n, be)
    cochains = [[None] * p.num_generators for _ in range(order)]
    neg = series_exp([be.zeros(n, n), -x] + [be.zeros(n, n)] * (order - 1), order, be)
    for i in range(p.num_generators):
        adx = rho.images[i] @ x @ rho.inverses[i]
        pos = series_exp([be.zeros(n, n), adx] + [be.zeros(n, n)] * (order - 1), order, be)
        log = series_log(series_mul(neg, pos, order, be), order, be)
        for k in range(order):
            cochains[k][i] = log[k + 1]
    return DeformationSeries(rho, cochains, order, [0] * order, "conjugation")


def _defect_size(zeta: list, backend):
    if backend.name == "exact":
        return 0 if all(_is_zero_matrix(z, backend) for z in zeta) else 1
    return max((_frob(z) for z in zeta), default=0)


def pullback(p: KnotPresentation, rho: Representation, cochains: list, substitution: list[Word],
             order: int) -> tuple[Representation, list]:
    """Precompose a truncated deformation with the endomorphism g_i -> substitution[i].

    Returns the pulled-back base representation and cochains u'_1..u'_order with
    exp(U'(g)) rho'(g) = rho_j(substitution(g)) mod t^(order+1).
    """
    be = rho.backend
    n = rho.n
    gens, invs = image_series(rho, cochains, order)
    images, inverses, series = [], [], []
    for w in substitution:
        s = _word_series(w, gens, invs, order, be, n)
        m, mi = rho.word_pair(w)
        images.append(m)
        inverses.append(mi)
        series.append(series_mul(s, constant_series(mi, order, be), order, be))
    rho2 = Representation(p, images, be, rho.provenance, inverses)
    logs = [series_log(s, order, be) for s in series]
    new = [[logs[i][k + 1] for i in range(len(substitution))] for k in range(order)]
    return rho2, new


# -- numeric helpers -------------------------------------------------------------
def _numeric_for(rho: Representation) -> NumericBackend:
    if rho.backend.name == "numeric":
        return rho.backend
    field_spec = getattr(rho.backend, "field", None)
    return NumericBackend(field=field_spec)


def _embed(m: np.ndarray, nb: NumericBackend) -> np.ndarray:
    out = np.empty(m.shape, dtype=object)
    flat_in, flat_out = m.reshape(-1), out.reshape(-1)
    for k, x in enumerate(flat_in):
        flat_out[k] = nb.scalar(x)
    return out


def _from_mp(m) -> np.ndarray:
    out = np.empty((m.rows, m.cols), dtype=object)
    for i in range(m.rows):
        for j in range(m.cols):
            out[i, j] = m[i, j]
    return out


def _frob(m: np.ndarray):
    total = 0
    for x in m.reshape(-1):
        total = total + abs(x) ** 2
    return total ** 0.5 if isinstance(total, (int, float)) else type(total)(total) ** 0.5


def _max_relator_residual(p: KnotPresentation, images: list[np.ndarray], nb: NumericBackend):
    ctx = nb.ctx
    inverses = [_from_mp(ctx.inverse(ctx.matrix(m.tolist()))) for m in images]
    worst = ctx.mpf(0)
    n = images[0].shape[0] if images else 0
    for r in p.relators:
        acc = nb.eye(n)
        for g, e in r.letters:
            acc = acc @ (images[g] if e > 0 else inverses[g])
        res = ctx.sqrt(sum((abs(x) ** 2 for x in (acc - nb.eye(n)).reshape(-1)), ctx.mpf(0)))
        worst = max(worst, res)
    return worst


# -- Newton continuation -------------------------------------------------------------
@dataclass
class DeformedRep:
    rep: Representation
    t: float
    residual: object
    irreducibility: IrreducibilityResult
    history: list
    trace_data: dict
    retries: int = 0

    @property
    def irreducible(self) -> bool:
        return self.irreducibility.irreducible

    def to_dict(self) -> dict:
        be = self.rep.backend
        return {
            "t": self.t,
            "residual": float(self.residual),
            "irreducible": self.irreducible,
            "span_dimension": self.irreducibility.span_dimension,
            "iterations": len(self.history) - 1,
            "residual_history": [float(h) for h in self.history],
            "retries": self.retries,
            "images": [[[be.format(x, 20) for x in row] for row in m] for m in self.rep.images],
            "trace_data": {k: [be.format(a, 15), be.format(b, 15)] for k, (a, b) in sorted(self.trace_data.items())},
        }


def trace_words(p: KnotPresentation) -> dict[str, Word]:
    """Generators, meridian squared, and products of pairs of generators."""
    g = p.num_generators
    words = {}
    for i in range(g):
        words[p.generators[i]] = Word.gen(i)
    mu = p.meridian
    words[f"{p.generators[mu]}^2"] = Word.gen(mu, 2)
    for i in range(g):
        for j in range(i + 1, g):
            words[f"{p.generators[i]} {p.generators[j]}"] = Word([(i, 1), (j, 1)])
            words[f"{p.generators[i]} {p.generators[j]}^-1"] = Word([(i, 1), (j, -1)])
    return words


def default_direction(p: KnotPresentation, rho: Representation) -> np.ndarray:
    """Sum of the complement basis vectors from :func:`tangent_cocycles`."""
    tc = tangent_cocycles(p, rho)
    if not tc.complement:
        raise CocycleError("Z^1 = B^1: no deformation direction outside the conjugation orbit")
    return sum(tc.complement[1:], tc.complement[0])


def newton_deform(p: KnotPresentation, rho: Representation, u1, t, tol: float = 1e-10, max_iter: int = 50,
                  t_max: float = 0.1, order: int = 1, max_retries: int = 4) -> DeformedRep:
    """Deform rho along the cocycle u1 to a nearby point of the representation variety.

    Starts from exp(sum_{i<=order} t^i u_i(g)) rho(g), with u_2.. from
    :func:`formal_integrate`, and runs Gauss-Newton on the relator map with
    minimum-norm steps orthogonal to B^1 of the current point and to u1.
    """
    if rho.backend.name != "numeric":
        raise ValueError("newton_deform runs on the numeric backend")
    t = float(t)
    if t < 0 or t > t_max:
        raise ValueError(f"t must lie in [0, {t_max}]")
    be = rho.backend
    words = trace_words(p)
    base_traces = {k: rho.trace(w) for k, w in words.items()}
    if t == 0:
        rep = Representation(p, rho.images, be, "deformed", rho.inverses)
        irr = irreducibility_test(rep)
        return DeformedRep(rep, 0.0, rho.residual(), irr, [rho.residual()],
                           {k: (v, v) for k, v in base_traces.items()})
    vec = np.array([be.scalar(x) for x in u1], dtype=object)
    series = formal_integrate(p, rho, vec, order) if order > 1 else None
    if isinstance(series, FirstObstruction):
        raise CocycleError(f"u1 is obstructed at order {series.order}")
    if series is None:
        series = DeformationSeries(rho, [cochain_to_matrices(vec, rho.n, p.num_generators, be)], 1, [0])
    retries = 0
    while True:
        try:
            images, history = _newton(p, series.evaluate(t, be), series.cochains[0], be, tol, max_iter)
            break
        except _Diverging as exc:
            retries += 1
            if retries > max_retries:
                raise ConvergenceError(f"residual keeps increasing after {retries} step halvings", exc.history)
            t /= 2
    rep = Representation(p, images, be, "deformed", tol=max(tol, 1e-10) * 10)
    irr = irreducibility_test(rep)
    traces = {k: (base_traces[k], rep.trace(w)) for k, w in words.items()}
    return DeformedRep(rep, t, history[-1], irr, history, traces, retries)


class _Diverging(Exception):
    def __init__(self, history):
        super().__init__("diverging")
        self.history = history


def _newton(p: KnotPresentation, images: list, u1_mats: list, be: NumericBackend, tol: float, max_iter: int):
    ctx = be.ctx
    n = images[0].shape[0]
    g = p.num_generators
    nn = n * n
    u1_flat = [ctx.conj(be.scalar(x)) for m in u1_mats for x in m.reshape(-1)]
    history = [_max_relator_residual(p, images, be)]
    increases = 0
    for _ in range(max_iter):
        if history[-1] < tol:
            return images, history
        inverses = [_from_mp(ctx.inverse(ctx.matrix(m.tolist()))) for m in images]
        # constraints: traces, orthogonality to B^1 at the current point, orthogonality to u1
        rows = []
        for i in range(g):
            row = [ctx.mpc(0)] * (g * nn)
            for k in range(n):
                row[i * nn + k * n + k] = ctx.mpc(1)
            rows.append(row)
        for a in range(n):
            for b in range(n):
                if a == b and a == n - 1:
                    continue
                y = be.zeros(n, n)
                if a != b:
                    y[a, b] = be.one
                else:
                    y[a, a], y[a + 1, a + 1] = be.one, -be.one
                row = []
                for i in range(g):
                    cob = images[i] @ y @ inverses[i] - y
                    row.extend(ctx.conj(x) for x in cob.reshape(-1))
                rows.append(row)
        rows.append(u1_flat)
        null = _null_basis(ctx.matrix(rows), be)
        # linearized relator map: D(r) = sum_terms ± Ad(P_w) delta_i = rho(r)^-1 - I
        jac_rows, target = [], []
        for r in p.relators:
            blocks = [ctx.matrix(nn, nn) for _ in range(g)]
            acc, acci = be.eye(n), be.eye(n)
            for gi, e in r.letters:
                if e > 0:
                    blocks[gi] += _kron_ad(acc, acci, ctx)
                    acc, acci = acc @ images[gi], inverses[gi] @ acci
                else:
                    acc, acci = acc @ inverses[gi], images[gi] @ acci
                    blocks[gi] -= _kron_ad(acc, acci, ctx)
            full = ctx.matrix(nn, g * nn)
            for i in range(g):
                for a in range(nn):
                    for b in range(nn):
                        full[a, i * nn + b] = blocks[i][a, b]
            jac_rows.append(full)
            diff = acci - be.eye(n)
            target.extend(diff.reshape(-1))
        jac = ctx.matrix(len(p.relators) * nn, g * nn)
        for k, blk in enumerate(jac_rows):
            for a in range(nn):
                for b in range(g * nn):
                    jac[k * nn + a, b] = blk[a, b]
        reduced = jac * null
        y = _lstsq(reduced, ctx.matrix(target), be)
        step = null * y
        new_images = []
        for i in range(g):
            delta = be.zeros(n, n)
            for a in range(n):
                for b in range(n):
                    delta[a, b] = step[i * nn + a * n + b]
            m = (be.eye(n) + delta) @ images[i]
            det = be.det(m)
            new_images.append(m * (det ** (-ctx.mpf(1) / n)))
        images = new_images
        history.append(_max_relator_residual(p, images, be))
        increases = increases + 1 if history[-1] > history[-2] else 0
        if increases >= 2:
            raise _Diverging(history)
    if history[-1] < tol:
        return images, history
    raise ConvergenceError(f"no convergence in {max_iter} iterations (residual {ctx.nstr(history[-1], 5)})",
                           [float(h) for h in history])


def _kron_ad(m: np.ndarray, mi: np.ndarray, ctx):
    """Matrix of x -> m x mi on row-major vec(x): kron(m, mi^T)."""
    n = m.shape[0]
    out = ctx.matrix(n * n, n * n)
    for a in range(n):
        for b in range(n):
            mab = m[a, b]
            if mab == 0:
                continue
            for c in range(n):
                for d in range(n):
                    out[a * n + c, b * n + d] = mab * mi[d, c]
    return out


def _null_basis(c, be: NumericBackend):
    """Orthonormal basis (as columns) of the kernel of c."""
    ctx = be.ctx
    _, s, v = ctx.svd_c(c, full_matrices=True)
    sv = [s[i] for i in range(s.rows)]
    top = max(sv) if sv else ctx.mpf(1)
    thr = max(top, 1) * be.eps
    keep = {k for k in range(len(sv)) if sv[k] > thr}
    cols = [k for k in range(v.rows) if k not in keep]
    out = ctx.matrix(v.cols, len(cols))
    for jj, k in enumerate(cols):
        for i in range(v.cols):
            out[i, jj] = ctx.conj(v[k, i])
    return out


def _lstsq(a, b, be: NumericBackend):
    """Minimum-norm least-squares solution through the SVD pseudo-inverse."""
    ctx = be.ctx
    u, s, v = ctx.svd_c(a, full_matrices=False)
    sv = [s[i] for i in range(s.rows)]
    top = max(sv) if sv else ctx.mpf(1)
    thr = max(top, 1) * be.eps
    x = ctx.matrix(a.cols, 1)
    for k, sk in enumerate(sv):
        if sk <= thr:
            continue
        coef = sum((ctx.conj(u[i, k]) * b[i] for i in range(a.rows)), ctx.mpc(0)) / sk
        for j in range(a.cols):
            x[j] += ctx.conj(v[k, j]) * coef
    return x


def random_unimodular(n: int, backend, seed: int = 0, entries: int = 3) -> np.ndarray:
    """Product of random integer elementary matrices (determinant 1)."""
    rng = random.Random(seed)
    m = backend.eye(n)
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2)
        e = backend.eye(n)
        e[i, j] = backend.scalar(rng.randint(-entries, entries))
        m = m @ e
    return m
