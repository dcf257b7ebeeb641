"""Two interchangeable scalar backends with a shared linear-algebra surface.

Matrices are numpy object arrays whose entries are backend scalars:
:class:`~knotrep.scalars.field.FieldElement` for :class:`ExactBackend` and
``mpc`` values of a private mpmath context for :class:`NumericBackend`.
Ordinary ``@``, ``+`` and ``*`` therefore work on both; the backends add rank,
kernels and linear solves.
"""

from __future__ import annotations

import numbers
from fractions import Fraction

import gmpy2
import mpmath
import numpy as np
from gmpy2 import mpq

from ..errors import BackendMismatchError, IndeterminateRankError
from .field import FieldElement, FieldSpec, _q

DEFAULT_PRECISION = 256


def object_array(rows, cols=None) -> np.ndarray:
    """Object array from nested lists (or an empty ``rows x cols`` array)."""
    if cols is not None:
        return np.empty((rows, cols), dtype=object)
    rows = list(rows)
    out = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            out[i, j] = x
    return out


class _Backend:
    name = "abstract"

    def zeros(self, r: int, c: int) -> np.ndarray:
        out = np.empty((r, c), dtype=object)
        out.fill(self.zero)
        return out

    def vector(self, n: int) -> np.ndarray:
        out = np.empty(n, dtype=object)
        out.fill(self.zero)
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = self.one
        return out

    def asarray(self, rows) -> np.ndarray:
        m = np.array(rows, dtype=object)
        flat = m.reshape(-1)
        for i, x in enumerate(flat):
            flat[i] = self.scalar(x)
        return flat.reshape(m.shape)

    def nullity(self, m: np.ndarray, **kw) -> int:
        return m.shape[1] - self.rank(m, **kw)

    def _pivot(self, column) -> int | None:
        for i, x in enumerate(column):
            if not self.is_zero(x):
                return i
        return None

    def det(self, m: np.ndarray):
        """Determinant by Gaussian elimination (small square matrices)."""
        a = np.array(m, dtype=object)
        n = a.shape[0]
        d = self.one
        for k in range(n):
            p = self._pivot(a[k:, k])
            if p is None:
                return self.zero
            if p:
                a[[k, k + p]] = a[[k + p, k]]
                d = -d
            d = d * a[k, k]
            piv = a[k, k]
            for i in range(k + 1, n):
                if not self.is_zero(a[i, k]):
                    f = a[i, k] / piv
                    a[i, k:] = a[i, k:] - a[k, k:] * f
        return d

    def inv(self, m: np.ndarray) -> np.ndarray:
        """Inverse by Gauss-Jordan elimination (small square matrices)."""
        n = m.shape[0]
        a = np.concatenate([np.array(m, dtype=object), self.eye(n)], axis=1)
        for k in range(n):
            p = self._pivot(a[k:, k])
            if p is None:
                raise ZeroDivisionError("singular matrix")
            if p:
                a[[k, k + p]] = a[[k + p, k]]
            a[k] = a[k] * (self.one / a[k, k])
            for i in range(n):
                if i != k and not self.is_zero(a[i, k]):
                    a[i] = a[i] - a[k] * a[i, k]
        return a[:, n:].copy()


# -- exact backend -------------------------------------------------------------
class ExactBackend(_Backend):
    """Exact arithmetic in a number field K = Q[x]/(m(x)).

    Rank and kernels use Gauss-Jordan elimination over K with exact zero tests.
    The matrix is split into ``deg m`` rational coefficient layers so that each
    row operation is a handful of vectorized rational updates.
    """

    name = "exact"

    def __init__(self, field: FieldSpec | None = None):
        self.field = field if field is not None else FieldSpec.rationals()
        self.zero = self.field.zero
        self.one = self.field.one

    def __repr__(self) -> str:
        return f"ExactBackend({self.field!r})"

    @property
    def lam(self) -> FieldElement:
        return self.field.gen

    def scalar(self, x) -> FieldElement:
        if isinstance(x, FieldElement):
            if x.field is not self.field and x.field != self.field:
                raise BackendMismatchError("element from a different number field")
            return x
        if isinstance(x, (numbers.Rational, type(mpq(0)))):
            return self.field(x)
        raise BackendMismatchError(f"cannot use {type(x).__name__} in the exact backend")

    def is_zero(self, x, scale=None) -> bool:
        return not self.scalar(x)

    def to_complex(self, x) -> complex:
        return complex(self.scalar(x))

    def format(self, x) -> str:
        return self.scalar(x).to_string("lam")

    # -- elimination ----------------------------------------------------------
    def _stack(self, m: np.ndarray) -> np.ndarray:
        d = self.field.degree
        r, c = m.shape
        s = np.empty((d, r, c), dtype=object)
        zero = mpq(0)
        for i in range(r):
            for j in range(c):
                x = m[i, j]
                if isinstance(x, FieldElement):
                    if x.field is not self.field and x.field != self.field:
                        raise BackendMismatchError("mixed number fields in matrix")
                    s[:, i, j] = x.c
                elif isinstance(x, (numbers.Rational, type(zero))):
                    s[:, i, j] = zero
                    s[0, i, j] = _q(x)
                else:
                    raise BackendMismatchError(f"cannot use {type(x).__name__} in the exact backend")
        return s

    def _reduce(self, prod: list) -> np.ndarray:
        d = self.field.degree
        low = prod[:d]
        for e, row in enumerate(self.field._red):
            top = prod[d + e]
            for i, coeff in enumerate(row):
                if coeff:
                    low[i] = low[i] + coeff * top
        return np.stack(low)

    def _scale_rows(self, a: tuple, v: np.ndarray) -> np.ndarray:
        """Multiply each K-vector of layers ``v`` (d, n) by the scalar with coefficients ``a``."""
        d = self.field.degree
        prod = [None] * (2 * d - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j in range(d):
                term = v[j] * ai
                prod[i + j] = term if prod[i + j] is None else prod[i + j] + term
        zero_row = np.full(v.shape[1:], mpq(0), dtype=object)
        prod = [zero_row if p is None else p for p in prod]
        return self._reduce(prod)

    def _outer(self, f: np.ndarray, p: np.ndarray) -> np.ndarray:
        """K-outer product of layered column ``f`` (d, T) and row ``p`` (d, J)."""
        d = self.field.degree
        prod = [None] * (2 * d - 1)
        for i in range(d):
            fi = f[i][:, None]
            for j in range(d):
                term = fi * p[j][None, :]
                prod[i + j] = term if prod[i + j] is None else prod[i + j] + term
        return self._reduce(prod)

    def _eliminate(self, s: np.ndarray, full: bool, stop_col: int | None = None) -> list[int]:
        """In-place (reduced) row echelon form of the layered matrix; returns pivot columns."""
        d, nrows, ncols = s.shape
        pivots: list[int] = []
        row = 0
        last = ncols if stop_col is None else stop_col
        for col in range(last):
            if row == nrows:
                break
            nz = np.zeros(nrows - row, dtype=bool)
            for k in range(d):
                nz |= s[k, row:, col] != 0
            hits = np.flatnonzero(nz)
            if hits.size == 0:
                continue
            p = row + int(hits[0])
            if p != row:
                s[:, [row, p], :] = s[:, [p, row], :]
            pivot = FieldElement(self.field, tuple(s[:, row, col]))
            prow = self._scale_rows(pivot.inverse().c, s[:, row, col:])
            s[:, row, col:] = prow
            colmask = np.zeros(ncols - col, dtype=bool)
            for k in range(d):
                colmask |= prow[k] != 0
            cols = col + np.flatnonzero(colmask)
            cand = np.arange(0 if full else row + 1, nrows)
            cand = cand[cand != row]
            if cand.size:
                tmask = np.zeros(cand.size, dtype=bool)
                for k in range(d):
                    tmask |= s[k, cand, col] != 0
                targets = cand[tmask]
                if targets.size:
                    f = s[:, targets, col]
                    upd = self._outer(f, s[:, row, cols])
                    block = s[:, targets[:, None], cols[None, :]]
                    s[:, targets[:, None], cols[None, :]] = block - upd
            pivots.append(col)
            row += 1
        return pivots

    def rank(self, m: np.ndarray, **_) -> int:
        if m.size == 0:
            return 0
        return len(self._eliminate(self._stack(m), full=False))

    def rref(self, m: np.ndarray) -> tuple[np.ndarray, list[int]]:
        s = self._stack(m)
        pivots = self._eliminate(s, full=True)
        return self._unstack(s), pivots

    def _unstack(self, s: np.ndarray) -> np.ndarray:
        d, r, c = s.shape
        out = np.empty((r, c), dtype=object)
        for i in range(r):
            for j in range(c):
                out[i, j] = FieldElement(self.field, tuple(s[:, i, j]))
        return out

    def nullspace(self, m: np.ndarray, **_) -> list[np.ndarray]:
        """Basis of the right kernel, one vector per non-pivot column."""
        r, c = m.shape
        if r == 0:
            basis = []
            for j in range(c):
                v = self.vector(c)
                v[j] = self.one
                basis.append(v)
            return basis
        s = self._stack(m)
        pivots = self._eliminate(s, full=True)
        free = [j for j in range(c) if j not in set(pivots)]
        basis = []
        for f in free:
            v = self.vector(c)
            v[f] = self.one
            for i, pc in enumerate(pivots):
                v[pc] = -FieldElement(self.field, tuple(s[:, i, f]))
            basis.append(v)
        return basis

    def solve(self, a: np.ndarray, b: np.ndarray):
        """A solution of ``a x = b`` (free variables set to 0) or ``None`` if inconsistent."""
        r, c = a.shape
        aug = np.empty((r, c + 1), dtype=object)
        aug[:, :c] = a
        aug[:, c] = b
        s = self._stack(aug)
        pivots = self._eliminate(s, full=True)
        if pivots and pivots[-1] == c:
            return None
        x = self.vector(c)
        for i, pc in enumerate(pivots):
            x[pc] = FieldElement(self.field, tuple(s[:, i, c]))
        return x

    def independent_columns(self, m: np.ndarray, **_) -> list[int]:
        if m.size == 0:
            return []
        return self._eliminate(self._stack(m), full=False)


# -- numeric backend -----------------------------------------------------------
def _mpf_to_gmpy(t):
    """mpmath's raw (sign, mantissa, exponent, bitcount) tuple as an exact mpfr."""
    sign, man, exp, _ = t
    if not man:
        return gmpy2.mpfr(0)
    v = gmpy2.mul_2exp(gmpy2.mpfr(man), exp)
    return -v if sign else v


class NumericBackend(_Backend):
    """Arbitrary-precision complex arithmetic (mpmath) with SVD-based rank decisions.

    A singular value counts as zero below ``scale * eps`` and as nonzero above
    it; values within a factor ``2**band_bits`` of the threshold make the
    verdict indeterminate and raise :class:`IndeterminateRankError`.
    ``scale`` defaults to ``max(sigma_max, 1)``.
    """

    name = "numeric"

    def __init__(self, precision: int = DEFAULT_PRECISION, rank_eps=None, band_bits: int | None = None,
                 field: FieldSpec | None = None, lam=None):
        if precision < 64:
            raise ValueError("numeric precision must be at least 64 bits")
        self.ctx = mpmath.MPContext()
        self.ctx.prec = precision
        self.precision = precision
        self.eps = self.ctx.mpf(2) ** (-(precision // 2)) if rank_eps is None else self.ctx.mpf(rank_eps)
        self.band = self.ctx.mpf(2) ** (precision // 8 if band_bits is None else band_bits)
        self.field = field
        self._lam = None if lam is None else self.ctx.mpc(lam)
        self.zero = self.ctx.mpc(0)
        self.one = self.ctx.mpc(1)

    def __repr__(self) -> str:
        return f"NumericBackend(precision={self.precision})"

    @property
    def lam(self):
        if self._lam is not None:
            return self._lam
        if self.field is None:
            raise ValueError("numeric backend has no distinguished lambda")
        return self.field.root_value(self.ctx)

    def scalar(self, x):
        ctx = self.ctx
        if isinstance(x, FieldElement):
            return x.field.embed(x, ctx)
        if hasattr(x, "_mpc_"):
            return ctx.make_mpc(x._mpc_)
        if hasattr(x, "_mpf_"):
            return ctx.make_mpc((x._mpf_, ctx.zero._mpf_))
        if isinstance(x, Fraction):
            return ctx.mpc(ctx.mpf(x.numerator) / x.denominator)
        if isinstance(x, numbers.Integral):
            return ctx.mpc(int(x))
        if isinstance(x, type(mpq(0))):
            return ctx.mpc(ctx.mpf(int(x.numerator)) / int(x.denominator))
        if isinstance(x, (float, complex, numbers.Complex)):
            return ctx.mpc(complex(x))
        return ctx.mpc(x)

    def is_zero(self, x, scale=None) -> bool:
        return abs(x) <= self.eps * (1 if scale is None else scale)

    def _pivot(self, column) -> int | None:
        if len(column) == 0:
            return None
        mags = [abs(x) for x in column]
        best = max(range(len(mags)), key=mags.__getitem__)
        return None if mags[best] == 0 else best

    def to_complex(self, x) -> complex:
        return complex(x)

    def format(self, x, digits: int = 30) -> str:
        """``a``, ``a+bi`` or ``a-bi`` with ``digits`` significant digits per part."""
        z = self.ctx.mpc(x)
        re_, im = self.ctx.nstr(z.real, digits), self.ctx.nstr(abs(z.imag), digits)
        if z.imag == 0:
            return re_
        return f"{re_}{'-' if z.imag < 0 else '+'}{im}i"


    def _matrix(self, m: np.ndarray):
        return self.ctx.matrix([[self.scalar(x) for x in row] for row in m])

    def singular_values(self, m: np.ndarray) -> list:
        if m.size == 0:
            return []
        a = self._matrix(m)
        s = self.ctx.svd_c(a, compute_uv=False)
        return sorted((s[i] for i in range(s.rows)), reverse=True)

    def _classify(self, sv: list, scale=None) -> int:
        if not sv:
            return 0
        ref = max(sv[0], self.ctx.mpf(1)) if scale is None else self.ctx.mpf(scale)
        thr = ref * self.eps
        hi, lo = thr * self.band, thr / self.band
        rank = sum(1 for s in sv if s > hi)
        band = [s for s in sv if lo <= s <= hi]
        if band:
            raise IndeterminateRankError(
                f"{len(band)} singular value(s) within the tolerance band around {self.ctx.nstr(thr, 5)}",
                [complex(s).real for s in sv],
            )
        return rank

    def rank(self, m: np.ndarray, scale=None) -> int:
        if m.size == 0:
            return 0
        fast = self._certified_rank(m, scale)
        return fast if fast is not None else self._classify(self.singular_values(m), scale)

    def _to_gmpy(self, x):
        x = self.scalar(x)
        re_, im = x._mpc_
        return gmpy2.mpc(_mpf_to_gmpy(re_), _mpf_to_gmpy(im))

    def _certified_rank(self, m: np.ndarray, scale=None) -> int | None:
        """Rank from a column-pivoted Householder QR, when the bounds below settle it.

        With M P = Q [[R11, R12], [0, R22]] and R11 of size k, sigma_(k+1) <= |R22|_F
        and sigma_k >= 1 / |R11^-1|_F. If both bounds clear the threshold band for
        every admissible scale the rank is k; otherwise None (use the full SVD).
        """
        rows, ncols = m.shape
        with gmpy2.context(gmpy2.get_context(), precision=self.precision + 16):
            cols = [[self._to_gmpy(m[i, j]) for i in range(rows)] for j in range(ncols)]
            fro = gmpy2.sqrt(sum((gmpy2.norm(x) for c in cols for x in c), gmpy2.mpfr(0)))
            eps = gmpy2.mpfr(_mpf_to_gmpy(self.eps._mpf_))
            band = gmpy2.mpfr(_mpf_to_gmpy(self.band._mpf_))
            order = list(range(ncols))
            k, r11 = 0, None
            steps = min(rows, ncols)
            while True:
                norms = [sum((gmpy2.norm(x) for x in cols[j][k:]), gmpy2.mpfr(0)) for j in range(k, ncols)]
                tail = gmpy2.sqrt(sum(norms, gmpy2.mpfr(0)))
                if scale is not None:
                    ref_lo = ref_hi = gmpy2.mpfr(float(scale))
                else:
                    ref_lo = max(r11 if r11 is not None else gmpy2.sqrt(max(norms, default=gmpy2.mpfr(0))),
                                 gmpy2.mpfr(1))
                    ref_hi = max(fro, gmpy2.mpfr(1))
                if k == steps or tail < ref_lo * eps / band:
                    break
                best = max(range(len(norms)), key=norms.__getitem__) + k
                cols[k], cols[best] = cols[best], cols[k]
                order[k], order[best] = order[best], order[k]
                x = cols[k][k:]
                xnorm = gmpy2.sqrt(sum((gmpy2.norm(v) for v in x), gmpy2.mpfr(0)))
                phase = x[0] / abs(x[0]) if x[0] != 0 else gmpy2.mpc(1)
                alpha = -phase * xnorm
                v = list(x)
                v[0] = v[0] - alpha
                vnorm2 = sum((gmpy2.norm(t) for t in v), gmpy2.mpfr(0))
                if vnorm2 != 0:
                    beta = 2 / vnorm2
                    vc = [t.conjugate() for t in v]
                    for j in range(k + 1, ncols):
                        c = cols[j]
                        s = beta * sum((a * b for a, b in zip(vc, c[k:])), gmpy2.mpc(0))
                        for i, t in enumerate(v):
                            c[k + i] -= s * t
                cols[k] = cols[k][:k] + [alpha] + [gmpy2.mpc(0)] * (rows - k - 1)
                if r11 is None:
                    r11 = abs(alpha)
                k += 1
            if k == 0:
                return 0
            # |R11^-1|_F by back substitution, one column of the inverse at a time
            inv_fro2 = gmpy2.mpfr(0)
            for j in range(k):
                y = [gmpy2.mpc(0)] * k
                y[j] = 1 / cols[j][j]
                for i in range(j - 1, -1, -1):
                    acc = sum((cols[l][i] * y[l] for l in range(i + 1, j + 1)), gmpy2.mpc(0))
                    y[i] = -acc / cols[i][i]
                inv_fro2 += sum((gmpy2.norm(t) for t in y[:j + 1]), gmpy2.mpfr(0))
            sigma_k = 1 / gmpy2.sqrt(inv_fro2)
            if sigma_k > ref_hi * eps * band:
                return k
        return None

    def nullspace(self, m: np.ndarray, scale=None) -> list[np.ndarray]:
        """Orthonormal basis of the right kernel."""
        r, c = m.shape
        if r == 0 or c == 0:
            return [np.array([self.one if i == j else self.zero for i in range(c)], dtype=object)
                    for j in range(c)]
        a = self._matrix(m)
        _, s, v = self.ctx.svd_c(a, full_matrices=True)
        sv = [s[i] for i in range(s.rows)]
        rank = self._classify(sorted(sv, reverse=True), scale)
        keep = sorted(range(len(sv)), key=lambda k: -sv[k])[:rank]
        basis = []
        for k in [k for k in range(c) if k not in keep]:
            basis.append(np.array([self.ctx.conj(v[k, j]) for j in range(c)], dtype=object))
        return basis

    def solve(self, a: np.ndarray, b: np.ndarray, scale=None):
        """Minimum-norm least-squares solution, or ``None`` if the residual is not negligible."""
        r, c = a.shape
        ctx = self.ctx
        if c == 0:
            return np.empty(0, dtype=object) if all(self.is_zero(x) for x in b) else None
        am = self._matrix(a)
        u, s, v = ctx.svd_c(am, full_matrices=False)
        sv = [s[i] for i in range(s.rows)]
        rank = self._classify(sorted(sv, reverse=True), scale)
        keep = sorted(range(len(sv)), key=lambda k: -sv[k])[:rank]
        bm = ctx.matrix([self.scalar(x) for x in b])
        x = ctx.matrix(c, 1)
        for k in keep:
            coef = sum((ctx.conj(u[i, k]) * bm[i] for i in range(r)), ctx.mpc(0)) / s[k]
            for j in range(c):
                x[j] += ctx.conj(v[k, j]) * coef
        res = am * x - bm
        ref = max(ctx.norm(bm), ctx.mpf(1)) if scale is None else ctx.mpf(scale)
        if ctx.norm(res) > ref * self.eps:
            return None
        return np.array([x[j] for j in range(c)], dtype=object)

    def independent_columns(self, m: np.ndarray, scale=None) -> list[int]:
        """Greedy Gram-Schmidt selection of a maximal independent set of columns."""
        ctx = self.ctx
        basis: list[list] = []
        chosen = []
        cols = [[self.scalar(x) for x in m[:, j]] for j in range(m.shape[1])]
        ref = None if scale is None else ctx.mpf(scale)
        for j, col in enumerate(cols):
            norm = ctx.sqrt(sum(abs(x) ** 2 for x in col)) if col else ctx.mpf(0)
            w = list(col)
            for _ in range(2):
                for q in basis:
                    coef = sum((ctx.conj(qi) * wi for qi, wi in zip(q, w)), ctx.mpc(0))
                    w = [wi - coef * qi for wi, qi in zip(w, q)]
            rnorm = ctx.sqrt(sum(abs(x) ** 2 for x in w)) if w else ctx.mpf(0)
            thr = (max(norm, ctx.mpf(1)) if ref is None else ref) * self.eps
            if rnorm > thr * self.band:
                basis.append([x / rnorm for x in w])
                chosen.append(j)
            elif rnorm >= thr / self.band:
                raise IndeterminateRankError(f"column {j} is neither clearly dependent nor independent")
        return chosen


def check_same_backend(*backends) -> None:
    kinds = {type(b) for b in backends}
    if len(kinds) > 1:
        raise BackendMismatchError("operands come from different scalar backends")


def rank(m: np.ndarray, backend) -> int:
    """Rank of ``m`` over the given backend."""
    return backend.rank(m)
