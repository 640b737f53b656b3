import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cesarolab import func
from cesarolab.func import DomainError, FunctionHandle, lip_profile, make_named
from cesarolab.quad import integrate

C = 4.0 * math.pi


def test_eval_examples():
    assert make_named("one")(0.37) == 1.0
    assert make_named("identity")(0.25) == 0.25
    f = make_named("cos4pi_shifted")
    assert f(0.5) == pytest.approx(0.0, abs=1e-15)
    assert f(0.0) == pytest.approx(0.0, abs=1e-14)


def test_eval_shapes():
    f = make_named("identity")
    assert isinstance(f(0.5), float)
    assert f(np.array([[0.1, 0.2]])).shape == (1, 2)


@pytest.mark.parametrize("u", [-0.1, 1.0000001, float("nan"), [0.2, 1.5]])
def test_eval_domain_error(u):
    with pytest.raises(DomainError):
        make_named("one")(u)


def test_handle_immutable_and_validated():
    f = make_named("one")
    with pytest.raises(Exception):
        f.name = "other"
    with pytest.raises(DomainError):
        FunctionHandle(lambda u: u, (0.5, 1.5))
    with pytest.raises(ValueError):
        FunctionHandle(lambda u: u, (0.5, 0.25))
    with pytest.raises(ValueError):
        FunctionHandle(lambda u: u, (), -1.0)


def test_lip_profile_examples():
    p = lip_profile(make_named("identity"), 1000)
    assert (p.sup_norm, p.lip_seminorm, p.lip1_norm) == pytest.approx((1.0, 1.0, 2.0), abs=1e-12)
    q = lip_profile(make_named("one"), 1000)
    assert (q.sup_norm, q.lip_seminorm, q.lip1_norm) == (1.0, 0.0, 1.0)
    d = make_named("cos4pi_shifted").derivative
    assert lip_profile(d, 10000).lip_seminorm == pytest.approx(16 * math.pi**2, rel=0.01)
    with pytest.raises(ValueError):
        lip_profile(d, 1)


def test_lip_profile_sees_breakpoint_values():
    # a jump inside a grid cell: the breakpoint value enters the sup norm
    f = FunctionHandle(lambda u: np.where(u < 0.3001, 0.0, 5.0) * (u < 0.31), (0.3001, 0.31))
    assert lip_profile(f, 4).sup_norm == 5.0


@settings(max_examples=25, deadline=None)
@given(m=st.integers(2, 400), name=st.sampled_from(["cos4pi_shifted", "gamma_compressed", "half_square"]))
def test_lip_profile_monotone(m, name):
    f = make_named(name)
    assert lip_profile(f, 2 * m).lip_seminorm >= lip_profile(f, m).lip_seminorm - 1e-12


def test_make_named_catalog():
    assert make_named("gamma_compressed")(0.75) == 0.0
    assert make_named("gamma_compressed").breakpoints == (0.5,)
    assert make_named("poly:1,2,3")(0.5) == pytest.approx(1 + 1 + 0.75)
    assert make_named("polynomial:0,1")(0.2) == pytest.approx(0.2)
    for bad in ("nope", "poly:", "poly:a,b"):
        with pytest.raises(KeyError):
            make_named(bad)


CATALOG_NAMES = ["one", "identity", "half_square", "cos4pi_shifted",
                 "cos4pi_shifted_antiderivative", "gamma_compressed", "poly:1,-2,0.5,3"]


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_closed_form_antiderivative_matches_quadrature(name, rng):
    f = make_named(name)
    A = f.antiderivative
    assert A is not None
    assert A(0.0) == pytest.approx(0.0, abs=1e-15)
    for a, b in np.sort(rng.uniform(0, 1, (100, 2)), axis=1):
        assert abs(A(b) - A(a) - integrate(f, a, b)) <= 1e-10
    # second primitive too
    A2 = A.antiderivative
    assert A2 is not None
    for a, b in np.sort(rng.uniform(0, 1, (20, 2)), axis=1):
        assert abs(A2(b) - A2(a) - integrate(A, a, b)) <= 1e-10


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_derivative_matches_finite_differences(name, rng):
    f = make_named(name)
    d = f.derivative
    if d is None:
        pytest.skip("no derivative attached")
    h = 1e-6
    for u in rng.uniform(0.01, 0.99, 30):
        if any(abs(u - b) < 2 * h for b in f.breakpoints):
            continue
        fd = (f(u + h) - f(u - h)) / (2 * h)
        assert d(u) == pytest.approx(fd, abs=1e-5 * max(1.0, abs(fd)))


def test_gamma_continuity_at_half():
    g = make_named("gamma_compressed")
    dg = g.derivative
    for u in (0.5 - 1e-6, 0.5, 0.5 + 1e-6):
        assert abs(g(u)) < 1e-9
        assert abs(dg(u)) < 1e-3  # |2 f'(2u)| <= 2 C^2 * 2e-6 near the join
    # chain rule: the derivative of f(2u) is 2 f'(2u)
    f = make_named("cos4pi_shifted")
    assert dg(0.2) == pytest.approx(2 * f.derivative(0.4), rel=1e-12)


def test_gamma_derivative_lipschitz_cap():
    from cesarolab.defaults import GAMMA_DERIV_LIP_CAP
    prof = lip_profile(make_named("gamma_compressed").derivative, 10_000)
    assert prof.lip_seminorm <= GAMMA_DERIV_LIP_CAP
    assert prof.lip_seminorm == pytest.approx(4 * C * C, rel=1e-3)  # sup |4 f''(2u)|


@pytest.mark.parametrize("maker", [func.compress, func.compress_reflect])
def test_two_branch_transforms(maker, rng):
    f = make_named("poly:0.5,-1,2")
    v = maker(f)
    u = rng.uniform(0, 0.5, 10)
    assert np.allclose(v(u), f(2 * u))
    u2 = rng.uniform(0.5, 1, 10)
    right = 0.0 if maker is func.compress else -f(2 * u2 - 1)
    assert np.allclose(v(u2), right)
    for a, b in np.sort(rng.uniform(0, 1, (20, 2)), axis=1):
        assert abs(v.antiderivative(b) - v.antiderivative(a) - integrate(v, a, b)) <= 1e-12
        A = v.antiderivative
        assert abs(A.antiderivative(b) - A.antiderivative(a) - integrate(A, a, b)) <= 1e-12


def test_tabulated_interpolates_and_integrates(rng):
    vals = rng.standard_normal(9)
    t = func.tabulated(vals)
    grid = np.linspace(0, 1, 9)
    assert np.allclose(t(grid), vals)
    assert t.antiderivative(1.0) == pytest.approx(np.trapezoid(vals, grid) if hasattr(np, "trapezoid")
                                                 else np.trapz(vals, grid), abs=1e-14)
    for a, b in np.sort(rng.uniform(0, 1, (20, 2)), axis=1):
        assert abs(t.antiderivative(b) - t.antiderivative(a) - integrate(t, a, b)) <= 1e-13
