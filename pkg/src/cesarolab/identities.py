"""Two-sided evaluators for the summation-by-parts identities.

Each evaluator returns an :class:`IdentityLedger` holding both sides, the
individual right-hand terms and the gap.  The middle sums run over
``i = 1..n``; ``as_printed=True`` stops them at ``n - 1`` so the size of that
discrepancy can be measured.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np

from .cesaro import cesaro_mean, fourier_coefficient
from .func import FunctionHandle, make_named
from .kernel import kernel_slice, u_functional
from .ons import OrthonormalSystem
from .quad import (DEFAULT_SPEC, QuadratureSpec, integrate_intervals, integrate_product,
                   prefix_integral, product)

__all__ = [
    "IdentityLedger",
    "MissingDerivativeError",
    "identity_2_10",
    "identity_star",
    "identity_2_8",
    "identity_2_9",
]


class MissingDerivativeError(ValueError):
    pass


@dataclass
class IdentityLedger:
    name: str
    parameters: dict[str, Any]
    lhs: float
    rhs: float
    rhs_terms: dict[str, float]
    abs_gap: float

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def _ledger(name, params, lhs, terms: dict[str, float]) -> IdentityLedger:
    terms = {k: float(v) for k, v in terms.items()}
    lhs = float(lhs)
    rhs = 0.0
    for v in terms.values():
        rhs += v
    return IdentityLedger(name, params, lhs, rhs, terms, abs(lhs - rhs))


def _cuts(n: int) -> np.ndarray:
    if n < 2:
        raise ValueError("n must be >= 2")
    return np.arange(n + 1) / n


def _shift_difference(g: FunctionHandle, h: float) -> FunctionHandle:
    """u -> g(u) - g(u + h) on [0, 1 - h]."""
    bps = {b for b in g.breakpoints if b < 1.0 - h} | {b - h for b in g.breakpoints if b > h}
    return FunctionHandle(lambda u: g.evaluator(u) - g.evaluator(np.minimum(u + h, 1.0)),
                          tuple(sorted(b for b in bps if 0.0 < b < 1.0)), g.max_frequency,
                          name=f"{g.name}(u)-{g.name}(u+{h:g})")


def identity_2_10(g: FunctionHandle, F: FunctionHandle, n: int, as_printed: bool = False,
                  spec: QuadratureSpec = DEFAULT_SPEC) -> IdentityLedger:
    """int g F  =  n sum_{i<n} int_{I_i}(g(u) - g(u+1/n)) du * int_0^{i/n} F
                 + n sum_{i<=n} int_{I_i} [int_{I_i} (g(u) - g(v)) dv] F(u) du
                 + n int_{1-1/n}^1 g * int_0^1 F
    """
    cuts = _cuts(n)
    lhs = integrate_product(g, F, 0.0, 1.0, spec)
    f_int = integrate_intervals(F, cuts, spec)
    f_cum = np.cumsum(f_int)  # int_0^{i/n} F, i = 1..n
    shift = integrate_intervals(_shift_difference(g, 1.0 / n), cuts[:-1], spec)  # i = 1..n-1
    term1 = n * math.fsum(shift * f_cum[:-1])
    # inner integral over v equals g(u)/n - int_{I_i} g
    g_int = integrate_intervals(g, cuts, spec)
    gf_int = integrate_intervals(product(g, F), cuts, spec)
    middle_i = gf_int - n * g_int * f_int
    if as_printed:
        middle_i = middle_i[:-1]
    term2 = math.fsum(middle_i)
    term3 = n * g_int[-1] * math.fsum(f_int)
    params = {"g": g.name, "F": F.name, "n": n, "as_printed": as_printed}
    return _ledger("2.10", params, lhs, {"term1": term1, "term2": term2, "term3": term3})


def identity_star(f: FunctionHandle, G: FunctionHandle, n: int, as_printed: bool = False,
                  spec: QuadratureSpec = DEFAULT_SPEC) -> IdentityLedger:
    """int f G  =  sum_{i<n} (f(i/n) - f((i+1)/n)) int_0^{i/n} G
                  + sum_{i<=n} int_{I_i} (f(u) - f(i/n)) G(u) du
                  + f(1) int_0^1 G
    """
    cuts = _cuts(n)
    lhs = integrate_product(f, G, 0.0, 1.0, spec)
    fv = f.evaluator(cuts)
    g_int = integrate_intervals(G, cuts, spec)
    g_cum = np.cumsum(g_int)
    term1 = math.fsum((fv[1:-1] - fv[2:]) * g_cum[:-1])
    fg_int = integrate_intervals(product(f, G), cuts, spec)
    middle_i = fg_int - fv[1:] * g_int
    if as_printed:
        middle_i = middle_i[:-1]
    term2 = math.fsum(middle_i)
    term3 = fv[-1] * math.fsum(g_int)
    params = {"f": f.name, "G": G.name, "n": n, "as_printed": as_printed}
    return _ledger("star", params, lhs, {"term1": term1, "term2": term2, "term3": term3})


def _need_derivative(f: FunctionHandle) -> FunctionHandle:
    if f.derivative is None:
        raise MissingDerivativeError(f"{f.name or 'function'} carries no derivative")
    return f.derivative


def identity_2_8(f: FunctionHandle, S: OrthonormalSystem, n: int, alpha: float, x: float,
                 spec: QuadratureSpec = DEFAULT_SPEC) -> IdentityLedger:
    """sigma_n^alpha(x, f) = f(1) sigma_n^alpha(x, 1) - int_0^1 f'(u) Q_n(u, x) du."""
    df = _need_derivative(f)
    q = make_named("one")
    lhs = cesaro_mean(f, S, n, alpha, x, spec)
    f1 = float(f.evaluator(np.array([1.0]))[0])
    sl = kernel_slice(S, n, alpha, x)
    terms = {"f1_sigma_q": f1 * cesaro_mean(q, S, n, alpha, x, spec),
             "minus_int_df_Q": -u_functional(df, sl, spec)}
    params = {"f": f.name, "system": S.name, "n": n, "alpha": alpha, "x": x}
    return _ledger("2.8", params, lhs, terms)


def identity_2_9(f: FunctionHandle, S: OrthonormalSystem, k: int,
                 spec: QuadratureSpec = DEFAULT_SPEC) -> IdentityLedger:
    """C_k(f) = f(1) C_k(1) - int_0^1 f'(u) g_k(u) du."""
    df = _need_derivative(f)
    q = make_named("one")
    lhs = fourier_coefficient(f, S, k, spec)
    f1 = float(f.evaluator(np.array([1.0]))[0])
    gk = prefix_integral(S.element(k), spec)
    terms = {"f1_Ck_q": f1 * fourier_coefficient(q, S, k, spec),
             "minus_int_df_gk": -integrate_product(df, gk, 0.0, 1.0, spec)}
    params = {"f": f.name, "system": S.name, "k": k}
    return _ledger("2.9", params, lhs, terms)
