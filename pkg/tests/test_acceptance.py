"""Acceptance criteria 1-8. Each test prints one PASS/FAIL line with its wall time.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
"""

from __future__ import annotations

import contextlib
import inspect
import math
import random
import time

from knotrep.alexander import alexander_polynomial, check_hypotheses
from knotrep.cohomology import cochain_dims
from knotrep.deform import default_direction, formal_integrate, newton_deform, tangent_cocycles
from knotrep.reps import module_action, symmetric_power

from conftest import presentation, setup

TIME_LIMIT = 60.0


@contextlib.contextmanager
def criterion(number: int, title: str, capsys=None):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        if status == "PASS" and elapsed >= TIME_LIMIT:
            status = "FAIL"
            title += " (over time limit)"
        line = f"criterion {number}: {status}  {title}  [{elapsed:.1f} s]"
        with capsys.disabled() if capsys is not None else contextlib.nullcontext():
            print("\n" + line)
    assert elapsed < TIME_LIMIT, f"criterion {number} took {elapsed:.1f} s"


def _dims(name, kind, param, backend="exact"):
    p, _, _, _, rho = setup(name, backend)
    return cochain_dims(p, module_action(rho, kind, param))


# -- the criteria as plain functions (shared with criterion 7) ---------------------------
def trefoil_sl6(backend="exact"):
    s = _dims("3_1", "sl", 6, backend)
    assert (s.z1, s.h1) == (42, 7)
    assert s.z1 != 6 * 6 + 6 - 2 == 40
    return s.dims()


def trefoil_r(backend="exact"):
    out = {}
    for m in (4, 6, 8, 10):
        out[m] = _dims("3_1", "R", m, backend).dims()
    assert out[10][3] == 3
    assert [out[m][3] for m in (4, 6, 8)] == [1, 1, 1]
    return out


def figure_eight_sl(backend="exact"):
    out = {}
    for n in range(2, 7):
        s = _dims("4_1", "sl", n, backend)
        assert (s.h0, s.h1, s.z1) == (0, n - 1, n * n + n - 2), (n, s)
        out[n] = s.dims()
    return out


# -- tests -----------------------------------------------------------------------------
def test_criterion_1_alexander(capsys):
    with criterion(1, "Alexander polynomials of 3_1, 4_1 and the unknot", capsys):
        assert alexander_polynomial(presentation("3_1")).to_string() == "t^2 - t + 1"
        assert alexander_polynomial(presentation("4_1")).to_string() == "t^2 - 3*t + 1"
        assert alexander_polynomial(presentation("0_1")).to_string() == "1"


def test_criterion_2_trefoil_sl6(capsys):
    with criterion(2, "trefoil sl_6: z1 = 42, h1 = 7, 42 != 40", capsys):
        trefoil_sl6()


def test_criterion_3_trefoil_symmetric_powers(capsys):
    with criterion(3, "trefoil: h1(R_10) = 3, h1(R_4) = h1(R_6) = h1(R_8) = 1", capsys):
        trefoil_r()


def test_criterion_4_figure_eight(capsys):
    with criterion(4, "figure-eight sl_n, n = 2..6: h0 = 0, h1 = n-1, z1 = n^2+n-2", capsys):
        figure_eight_sl()


def test_criterion_5_hypotheses(capsys):
    with criterion(5, "hypothesis checker: trefoil n <= 5 pass, n = 6 fails at k = 5; figure-eight n <= 12", capsys):
        _, delta, be, lam, _ = setup("3_1")
        for n in (2, 3, 4, 5):
            assert check_hypotheses(delta, lam, n, be).verdict
        report = check_hypotheses(delta, lam, 6, be)
        assert not report.verdict and list(report.failing_k) == [5]
        _, delta, be, lam, _ = setup("4_1")
        for n in range(2, 13):
            assert check_hypotheses(delta, lam, n, be).verdict, n


def test_criterion_6_property_suite(capsys):
    import test_properties

    with criterion(6, "property suite, 1000+ randomized cases", capsys):
        executed = 0
        for name, fn in inspect.getmembers(test_properties, inspect.isfunction):
            if not name.startswith("test_") or not hasattr(fn, "hypothesis"):
                continue
            inner = fn.hypothesis.inner_test
            calls = []

            def counted(*args, _inner=inner, _calls=calls, **kwargs):
                _calls.append(1)
                return _inner(*args, **kwargs)

            fn.hypothesis.inner_test = counted
            try:
                fn()
            finally:
                fn.hypothesis.inner_test = inner
            executed += len(calls)
        assert executed >= 1000, executed


def test_criterion_7_backend_agreement(capsys):
    with criterion(7, "numeric (256 bit) dimensions equal the exact ones for criteria 2-4", capsys):
        assert trefoil_sl6("numeric") == trefoil_sl6("exact")
        assert trefoil_r("numeric") == trefoil_r("exact")
        assert figure_eight_sl("numeric") == figure_eight_sl("exact")


def _slope(ts, values):
    xs = [math.log10(t) for t in ts]
    ys = [math.log10(float(v)) for v in values]
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)


def test_criterion_8_deformation(capsys):
    with criterion(8, "figure-eight n = 3: Newton to an irreducible rep, series slopes, coboundary traces", capsys):
        # Newton at t = 1e-2
        p, _, nb, _, rho_n = setup("4_1", "numeric")
        r3n = symmetric_power(rho_n, 3)
        res = newton_deform(p, r3n, default_direction(p, r3n), 1e-2)
        assert res.t == 1e-2
        assert res.residual < 1e-10
        assert res.irreducibility.span_dimension == 9 and res.irreducible

        # order-k formal series: relator residual ~ t^(k+1)
        p, _, be, _, rho = setup("4_1")
        r3 = symmetric_power(rho, 3)
        u1 = default_direction(p, r3)
        ts = (1e-1, 1e-2, 1e-3)
        for k in (2, 3):
            series = formal_integrate(p, r3, u1, k)
            slope = _slope(ts, [series.relator_residual(t) for t in ts])
            assert slope >= k + 0.8, (k, slope)

        # coboundary directions only move along the conjugation orbit
        td = tangent_cocycles(p, r3n)
        rng = random.Random(8)
        u = sum((b * nb.scalar(rng.uniform(-1, 1)) for b in td.b1[1:]), td.b1[0] * nb.scalar(rng.uniform(-1, 1)))
        res = newton_deform(p, r3n, u, 1e-2, order=4)
        drift = max(abs(a - b) for a, b in res.trace_data.values())
        assert drift < 1e-8, float(drift)


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            with contextlib.suppress(AssertionError):
                fn(None)
