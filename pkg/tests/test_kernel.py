import math

import numpy as np
import pytest

from cesarolab.cesaro import cesaro_mean, cesaro_weights
from cesarolab.func import DomainError, FunctionHandle, lip_profile, make_named
from cesarolab.kernel import (DiagnosticRow, abs_interval_integrals, diagnostic_rows, extremal_function,
                              extremal_ledger, h_diagnostic, h_sweep, kernel_slice, lemma1_ratio,
                              lemma2_check, sign_change_set, theorem1_terms, u_functional)
from cesarolab.ons import parse_system, system_cosine, system_haar
from cesarolab.quad import integrate, integrate_product

COS, HAAR = system_cosine(), system_haar()
SYSTEMS = ["cosine", "haar", "walsh", "rand:7:32:64", "cr:haar"]


def brute_q(S, n, alpha, x, u):
    w = cesaro_weights(n, alpha).weights
    total = np.zeros_like(u)
    for k in range(1, n + 1):
        total += w[k - 1] * S.element(k).antiderivative(u) * S.element(k)(x)
    return total


@pytest.mark.parametrize("sel", SYSTEMS)
def test_slice_recomputation_and_endpoints(sel, rng):
    S = parse_system(sel)
    for n, alpha, x in ((1, 1.0, 0.3), (9, 0.5, 0.71), (16, 2.0, 0.05)):
        sl = kernel_slice(S, n, alpha, x)
        u = rng.uniform(0, 1, 20)
        assert np.allclose(sl.q_handle(u), brute_q(S, n, alpha, x, u), atol=1e-10, rtol=0)
        assert sl.q_handle(0.0) == 0.0
        assert sl.prefix_at(0.0)[0] == 0.0
        for y in rng.uniform(0, 1, 5):
            assert sl.prefix_at(y)[0] == pytest.approx(integrate(sl.q_handle, 0, y), abs=1e-12)


def test_cosine_slice_examples():
    sl = kernel_slice(COS, 5, 1.0, 0.2)
    assert abs(sl.q_handle(1.0)) <= 1e-15
    one = kernel_slice(COS, 1, 1.0, 0.4)
    u = np.linspace(0, 1, 9)
    g1 = math.sqrt(2) * np.sin(2 * np.pi * u) / (2 * np.pi)
    assert np.allclose(one.q_handle(u), 0.5 * g1 * COS.element(1)(0.4), atol=1e-16)


def test_slice_errors():
    with pytest.raises(DomainError):
        kernel_slice(COS, 3, 1.0, 1.2)
    with pytest.raises(ValueError):
        kernel_slice(COS, 0, 1.0, 0.2)
    with pytest.raises(IndexError):
        kernel_slice(parse_system("rand:7:32:64"), 33, 1.0, 0.2)


def test_h_diagnostic_definition():
    assert h_diagnostic(kernel_slice(COS, 1, 1.0, 0.3)) == 0.0
    sl = kernel_slice(HAAR, 12, 0.5, 0.41)
    ref = sum(abs(integrate(sl.q_handle, 0, i / 12)) for i in range(1, 12)) / 12
    assert h_diagnostic(sl) == pytest.approx(ref, abs=1e-13)
    h, p1 = h_sweep(HAAR, 12, [0.5, 2.0], [0.41, 0.9])
    assert h[0, 0] == pytest.approx(h_diagnostic(sl), abs=1e-15)
    assert h[1, 1] == pytest.approx(h_diagnostic(kernel_slice(HAAR, 12, 2.0, 0.9)), abs=1e-15)
    assert p1[0, 0] == pytest.approx(sl.prefix_at(1.0)[0], abs=1e-15)


def test_lemma1_examples(rng):
    for n in (1, 5, 64):
        assert lemma1_ratio(COS, n, 0.0) == pytest.approx(2 / n, rel=1e-14)
        for x in rng.uniform(0, 1, 10):
            assert lemma1_ratio(COS, n, x) <= 2 / n + 1e-15
    for x in rng.uniform(0, 1, 5):
        assert lemma1_ratio(HAAR, 1, x) == 1.0


def brute_abs_integrals(sl, n):
    out = []
    for i in range(1, n + 1):
        a, b = (i - 1) / n, i / n
        u = np.linspace(a, b, 20001)
        q = np.abs(sl.q_handle(u))
        out.append(np.sum((q[1:] + q[:-1]) / 2) * (b - a) / 20000)
    return np.array(out)


@pytest.mark.parametrize("sel", ["cosine", "haar", "rand:11:32:64"])
def test_abs_interval_integrals_against_dense_trapezoid(sel):
    S = parse_system(sel)
    for n, x in ((1, 0.3), (7, 0.62), (16, 0.13)):
        sl = kernel_slice(S, n, 1.0, x)
        got = abs_interval_integrals(S, sl.coeffs[:, None], n)[:, 0]
        assert np.allclose(got, brute_abs_integrals(sl, n), atol=1e-7, rtol=0)
        assert got.sum() >= abs(sl.prefix_at(1.0)[0]) - 1e-15


def test_lemma2_examples(rng):
    for sel in ("cosine", "haar"):
        S = parse_system(sel)
        for n in (1, 2, 3, 8, 33, 64):
            for x in rng.uniform(0, 1, 20):
                assert lemma2_check(kernel_slice(S, n, 1.0, x)) >= -1e-9
    sl = kernel_slice(HAAR, 1, 1.0, 0.3)  # Q_1(u) = u / 2, bound = |X_1(x)| = 1
    assert lemma2_check(sl) == pytest.approx(1.0 - 0.25, abs=1e-15)


def test_diagnostic_rows_match_single_calls():
    rows = diagnostic_rows(HAAR, [3, 8], [0.5, 2.0], [0.2, 0.7])
    assert [(r.n, r.alpha, r.x) for r in rows] == [(n, a, x) for n in (3, 8) for a in (0.5, 2.0)
                                                   for x in (0.2, 0.7)]
    for r in rows:
        sl = kernel_slice(HAAR, r.n, r.alpha, r.x)
        assert r.h_value == pytest.approx(h_diagnostic(sl), abs=1e-15)
        assert r.lemma2_worst_slack == pytest.approx(lemma2_check(sl), abs=1e-13)
        assert r.lemma1_ratio == pytest.approx(lemma1_ratio(HAAR, r.n, r.x), abs=1e-15)
        assert r.h_value >= 0 and r.lemma1_ratio >= 0
    assert len(DiagnosticRow.FIELDS) == len(rows[0].as_tuple())
    assert math.isnan(diagnostic_rows(HAAR, [3], [1.0], [0.2], lemma2=False)[0].lemma2_worst_slack)


@pytest.mark.parametrize("sel", SYSTEMS)
def test_l2_kernel_bound(sel, rng):
    # Cauchy-Schwarz: int Q^2 <= sum_k w_k^2 phi_k(x)^2 * sum_k int g_k^2 <= ... <= sum_k phi_k(x)^2
    S = parse_system(sel)
    for n in (1, 4, 16, 32):
        for x in rng.uniform(0, 1, 4):
            sl = kernel_slice(S, n, 1.0, x)
            q2 = integrate_product(sl.q_handle, sl.q_handle)
            assert q2 <= math.fsum(sl.phi_x**2) + 1e-12


@pytest.mark.parametrize("sel", SYSTEMS)
def test_exact_relation_for_identity_function(sel, rng):
    # sigma(x, p) = p(1) sigma(x, q) - int_0^1 Q_n, exactly at every finite n
    S = parse_system(sel)
    p, q = make_named("identity"), make_named("one")
    for n in (1, 5, 32):
        for alpha in (0.5, 1.0, 2.0):
            x = float(rng.uniform())
            sl = kernel_slice(S, n, alpha, x)
            lhs = cesaro_mean(p, S, n, alpha, x)
            rhs = cesaro_mean(q, S, n, alpha, x) - sl.prefix_at(1.0)[0]
            assert abs(lhs - rhs) <= 1e-12


def test_extremal_constant_sign_prefix():
    # Haar n = 1: Q_1 = u/2 >= 0, the prefix never changes sign
    sl = kernel_slice(HAAR, 1, 1.0, 0.5)
    r = extremal_function(sl)
    assert r.breakpoints.size == 0 and list(r.slopes) == [1.0]
    u = np.linspace(0, 1, 11)
    assert np.allclose(r.handle(u), u)


def test_extremal_zero_prefix_gives_identity():
    sl = kernel_slice(COS, 4, 1.0, 0.3)
    zero = FunctionHandle(lambda u: np.zeros_like(np.asarray(u, dtype=float)))
    object.__setattr__(sl, "prefix", zero)
    r = extremal_function(sl)
    assert np.allclose(r.handle(np.linspace(0, 1, 5)), np.linspace(0, 1, 5))
    assert sign_change_set(sl, r) == set()


@pytest.mark.parametrize("sel", SYSTEMS)
def test_extremal_structure(sel):
    # includes Walsh n = 32, x = 0.1, whose prefix vanishes identically near 0
    S = parse_system(sel)
    for n in (2, 5, 17, 32):
        for x in (0.1, 0.3, 0.7):
            sl = kernel_slice(S, n, 1.0, x)
            r = extremal_function(sl)
            assert r.handle(0.0) == 0.0
            assert set(np.abs(r.slopes)) == {1.0}
            assert np.all(r.slopes[1:] != r.slopes[:-1])  # every knot is a genuine sign change
            assert lip_profile(r.handle, 16 * n).lip1_norm <= 2 + 1e-9
            # the slope on each segment is the sign of the prefix there
            mids = 0.5 * (r.knots[1:] + r.knots[:-1])
            assert np.array_equal(np.where(sl.prefix_at(mids) >= -r.zero_tol, 1.0, -1.0), r.slopes)
            E = sign_change_set(sl, r)
            grid = np.arange(n + 1) / n
            sign_at = np.where(sl.prefix_at(grid) >= -r.zero_tol, 1.0, -1.0)
            for i in range(1, n):
                if i not in E:
                    step = r.handle(i / n) - r.handle((i + 1) / n)
                    assert step == pytest.approx(-sign_at[i] / n, abs=1e-12)
            e_sum = math.fsum(abs(sl.prefix_at(i / n)[0]) for i in E) / n
            assert e_sum <= math.sqrt(math.fsum(sl.phi_x**2)) / n + 1e-9


def test_sign_change_set_single_crossing():
    # a prefix crossing zero once inside (2/8, 3/8)
    sl = kernel_slice(COS, 8, 1.0, 0.3)
    fake = FunctionHandle(lambda u: np.asarray(u, dtype=float) - 0.3)
    object.__setattr__(sl, "prefix", fake)
    r = extremal_function(sl)
    assert r.breakpoints == pytest.approx([0.3], abs=1e-12)
    assert sign_change_set(sl, r) == {2}
    with pytest.raises(ValueError):
        sign_change_set(kernel_slice(COS, 1, 1.0, 0.3))


def test_u_functional_examples():
    sl = kernel_slice(COS, 9, 1.0, 0.35)
    zero = FunctionHandle(lambda u: np.zeros_like(np.asarray(u, dtype=float)))
    assert u_functional(zero, sl) == 0.0
    assert abs(u_functional(make_named("one"), sl)) <= 1e-10


@pytest.mark.parametrize("sel", SYSTEMS)
def test_u_of_extremal_matches_integration_by_parts(sel):
    # U(r) = r(1) P(1) - int_0^1 r' P = r(1) P(1) - int |P|
    S = parse_system(sel)
    for n in (3, 16, 32):
        sl = kernel_slice(S, n, 1.0, 0.3)
        r = extremal_function(sl)
        absP = FunctionHandle(lambda u: np.abs(sl.prefix.evaluator(u)), tuple(sorted(
            set(sl.prefix.breakpoints) | set(float(b) for b in r.breakpoints))), sl.prefix.max_frequency)
        oracle = r.handle(1.0) * sl.prefix_at(1.0)[0] - integrate(absP)
        assert u_functional(r.handle, sl) == pytest.approx(oracle, abs=1e-11)


def test_extremal_ledger_rows():
    row = extremal_ledger(COS, 1, 1.0, 0.3)
    assert row.h_value == 0.0 and row.e_count == 0
    assert row.u_abs == pytest.approx(abs(u_functional(extremal_function(kernel_slice(COS, 1, 1.0, 0.3)).handle,
                                                         kernel_slice(COS, 1, 1.0, 0.3))))
    row, r = extremal_ledger(HAAR, 16, 1.0, 0.3, with_function=True)
    assert row.c_n == pytest.approx(row.h_value - row.u_abs)
    assert row.lip1_norm <= 2 + 1e-9
    assert row.e_count == len(sign_change_set(kernel_slice(HAAR, 16, 1.0, 0.3), r))


def test_theorem1_terms_sum_to_int_df_q():
    for sel in ("cosine", "haar"):
        S = parse_system(sel)
        for name in ("half_square", "cos4pi_shifted", "poly:1,-2,0.5,3"):
            f = make_named(name)
            sl = kernel_slice(S, 12, 1.0, 0.4)
            i1, i2, i3 = theorem1_terms(f, sl)
            assert i1 + i2 + i3 == pytest.approx(integrate_product(f.derivative, sl.q_handle), abs=1e-12)
    with pytest.raises(ValueError):
        theorem1_terms(FunctionHandle(lambda u: u), kernel_slice(COS, 3, 1.0, 0.1))
