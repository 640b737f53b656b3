import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cesarolab.cesaro import cesaro_weights
from cesarolab.func import FunctionHandle, make_named, polynomial
from cesarolab.identities import (MissingDerivativeError, identity_2_8, identity_2_9, identity_2_10,
                                  identity_star)
from cesarolab.kernel import kernel_slice, theorem1_terms
from cesarolab.ons import parse_system

ONE, P = make_named("one"), make_named("identity")
SQ = polynomial([0, 0, 1], name="square")


def test_2_10_hand_values():
    led = identity_2_10(P, ONE, 2)
    assert led.lhs == pytest.approx(0.5, abs=1e-12) and led.rhs == pytest.approx(0.5, abs=1e-12)
    assert led.rhs_terms["term1"] == pytest.approx(-0.25, abs=1e-12)
    assert led.rhs_terms["term2"] == pytest.approx(0.0, abs=1e-12)
    assert led.rhs_terms["term3"] == pytest.approx(0.75, abs=1e-12)
    led = identity_2_10(SQ, ONE, 2)
    assert led.rhs == pytest.approx(1 / 3, abs=1e-12)
    assert led.rhs_terms["term1"] == pytest.approx(-0.25, abs=1e-12)
    assert led.rhs_terms["term3"] == pytest.approx(7 / 12, abs=1e-12)
    led = identity_2_10(P, P, 2)
    assert led.rhs == pytest.approx(1 / 3, abs=1e-12)
    assert led.rhs_terms == pytest.approx({"term1": -1 / 16, "term2": 2 / 96, "term3": 3 / 8}, abs=1e-12)


def test_star_hand_values():
    led = identity_star(P, ONE, 3)
    assert led.rhs_terms == pytest.approx({"term1": -1 / 3, "term2": -1 / 6, "term3": 1.0}, abs=1e-12)
    assert led.rhs == pytest.approx(0.5, abs=1e-12) and led.abs_gap <= 1e-12
    led = identity_star(P, P, 2)
    assert led.rhs_terms == pytest.approx({"term1": -1 / 16, "term2": -1 / 48 - 1 / 12, "term3": 0.5},
                                          abs=1e-12)
    assert led.rhs == pytest.approx(1 / 3, abs=1e-12)
    const = polynomial([2.5])
    led = identity_star(const, make_named("cos4pi_shifted"), 5)
    assert led.rhs_terms["term1"] == 0.0 and abs(led.rhs_terms["term2"]) <= 1e-15
    assert led.abs_gap <= 1e-12


def test_printed_middle_range_leaves_a_gap():
    led = identity_2_10(P, P, 2, as_printed=True)
    assert led.abs_gap == pytest.approx(1 / 96, abs=1e-12)
    led = identity_star(P, P, 2, as_printed=True)
    assert led.abs_gap == pytest.approx(1 / 12, abs=1e-12)  # the missing i = n middle piece
    assert led.parameters["as_printed"] is True


def test_ledger_structure():
    led = identity_2_10(P, P, 4)
    d = led.to_dict()
    assert set(d) == {"name", "parameters", "lhs", "rhs", "rhs_terms", "abs_gap"}
    total = 0.0
    for v in led.rhs_terms.values():
        total += v
    assert led.rhs == total
    assert all(type(v) is float for v in led.rhs_terms.values())
    with pytest.raises(ValueError):
        identity_2_10(P, P, 1)


coef = st.lists(st.floats(-3, 3, allow_nan=False), min_size=1, max_size=7)


@settings(max_examples=60, deadline=None)
@given(coef, coef, st.sampled_from([2, 3, 5, 8, 16, 64]))
def test_fuzz_polynomial_pairs(a, b, n):
    f, g = polynomial(a), polynomial(b)
    assert identity_2_10(f, g, n).abs_gap <= 1e-9
    assert identity_star(f, g, n).abs_gap <= 1e-9


def test_piecewise_inputs():
    g = make_named("gamma_compressed")
    H = parse_system("haar").element(6)
    for n in (2, 3, 7, 16):
        assert identity_2_10(g, H, n).abs_gap <= 1e-12
        assert identity_star(H, g, n).abs_gap <= 1e-12


@pytest.mark.parametrize("sel", ["cosine", "haar", "walsh"])
def test_2_8_and_2_9(sel):
    S = parse_system(sel)
    led = identity_2_8(ONE, S, 7, 1.0, 0.3)
    assert led.lhs == led.rhs_terms["f1_sigma_q"] and led.rhs_terms["minus_int_df_Q"] == 0.0
    for k in (1, 4, 9):
        led = identity_2_9(ONE, S, k)
        assert led.lhs == led.rhs
    for name in ("half_square", "cos4pi_shifted", "gamma_compressed", "poly:1,-2,0.5,3"):
        f = make_named(name)
        assert identity_2_8(f, S, 16, 0.5, 0.77).abs_gap <= 1e-9
        for k in (1, 2, 15, 32):
            assert identity_2_9(f, S, k).abs_gap <= 1e-10


def test_2_8_examples():
    S = parse_system("cosine")
    led = identity_2_8(P, S, 10, 1.0, 0.21)
    assert abs(led.lhs) <= 1e-9 and abs(led.rhs) <= 1e-9
    for k in (1, 5):
        led = identity_2_9(P, S, k)
        assert abs(led.lhs) <= 1e-10 and abs(led.rhs) <= 1e-10
    led = identity_2_8(SQ, parse_system("haar"), 8, 1.0, 0.3)
    assert led.abs_gap <= 1e-9
    for k in range(1, 33):
        assert identity_2_9(SQ, parse_system("haar"), k).abs_gap <= 1e-10


def test_missing_derivative():
    bare = FunctionHandle(lambda u: u, name="bare")
    S = parse_system("cosine")
    with pytest.raises(MissingDerivativeError):
        identity_2_8(bare, S, 3, 1.0, 0.2)
    with pytest.raises(MissingDerivativeError):
        identity_2_9(bare, S, 3)


@pytest.mark.parametrize("sel", ["cosine", "haar", "rand:7:32:64"])
def test_2_9_weighted_sum_reproduces_2_8(sel):
    S = parse_system(sel)
    f = make_named("cos4pi_shifted")
    n, alpha, x = 12, 2.0, 0.37
    w = cesaro_weights(n, alpha).weights
    phi = S.antiderivatives(np.arange(1, n + 1), [x], 0)[:, 0]
    leds = [identity_2_9(f, S, k) for k in range(1, n + 1)]
    target = identity_2_8(f, S, n, alpha, x)
    for key9, key8 in (("f1_Ck_q", "f1_sigma_q"), ("minus_int_df_gk", "minus_int_df_Q")):
        summed = sum(wk * pk * led.rhs_terms[key9] for wk, pk, led in zip(w, phi, leds))
        assert summed == pytest.approx(target.rhs_terms[key8], abs=1e-10)
    assert sum(wk * pk * led.lhs for wk, pk, led in zip(w, phi, leds)) == pytest.approx(target.lhs, abs=1e-10)


@pytest.mark.parametrize("sel", ["cosine", "haar"])
def test_2_10_with_derivative_reproduces_kernel_decomposition(sel):
    S = parse_system(sel)
    for name in ("half_square", "cos4pi_shifted", "poly:1,-2,0.5,3"):
        f = make_named(name)
        for n in (2, 9, 32):
            sl = kernel_slice(S, n, 1.0, 0.43)
            led = identity_2_10(f.derivative, sl.q_handle, n)
            i1, i2, i3 = theorem1_terms(f, sl)
            assert led.rhs_terms["term1"] == pytest.approx(i1, abs=1e-9)
            assert led.rhs_terms["term2"] == pytest.approx(i2, abs=1e-9)
            assert led.rhs_terms["term3"] == pytest.approx(i3, abs=1e-9)
