"""Cesaro (C, alpha) numbers, Fourier coefficients, partial sums and means.

Weights are oriented as ``w_{n,k} = A_{n-k}^alpha / A_n^alpha`` for
``k = 1..n``, so every weight lies in (0, 1) and decreases in ``k``.
"""
from __future__ import annotations

import math
import weakref
from dataclasses import dataclass

import numpy as np

from .func import FunctionHandle
from .ons import OrthonormalSystem
from .quad import DEFAULT_SPEC, QuadratureSpec, integrate_product, nodes_weights, panel_edges

__all__ = [
    "CesaroWeights",
    "CoefficientVector",
    "cesaro_a",
    "cesaro_a_table",
    "cesaro_weights",
    "fourier_coefficient",
    "coefficient_vector",
    "partial_sum",
    "cesaro_mean",
    "mean_from_coefficients",
    "mean_curves",
]


def _check_alpha(alpha: float) -> None:
    if not alpha > 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")


def cesaro_a_table(n: int, alpha: float) -> np.ndarray:
    """A_0^alpha .. A_n^alpha by the recurrence A_m = A_{m-1} (m + alpha) / m."""
    _check_alpha(alpha)
    if n < 0:
        raise ValueError("n must be nonnegative")
    table = np.empty(n + 1)
    value = 1.0
    table[0] = value
    for m in range(1, n + 1):
        # multiply before dividing: for integer alpha every step is then exact
        value = value * (m + alpha) / m
        table[m] = value
    if math.isinf(value):
        raise OverflowError(f"A_n^alpha overflows for n={n}, alpha={alpha}")
    return table


def cesaro_a(n: int, alpha: float) -> float:
    """A_n^alpha = (1 + alpha)(2 + alpha)...(n + alpha) / n!."""
    _check_alpha(alpha)
    if n < 0:
        raise ValueError("n must be nonnegative")
    value = 1.0
    for m in range(1, n + 1):
        value = value * (m + alpha) / m
        if math.isinf(value):
            raise OverflowError(f"A_n^alpha overflows for n={n}, alpha={alpha}")
    return value


@dataclass(frozen=True)
class CesaroWeights:
    alpha: float
    n: int
    a_values: np.ndarray  # A_0 .. A_n
    weights: np.ndarray  # w_{n,1} .. w_{n,n}


def cesaro_weights(n: int, alpha: float) -> CesaroWeights:
    if n < 1:
        raise ValueError("n must be >= 1")
    a = cesaro_a_table(n, alpha)
    # w_{n,k} = A_{n-k} / A_n, k = 1..n
    w = a[n - 1::-1] / a[n]
    return CesaroWeights(alpha, n, a, w)


# ---------------------------------------------------------------------------
# coefficients


@dataclass(frozen=True)
class CoefficientVector:
    system: str
    function: str
    values: np.ndarray  # C_1 .. C_N

    def __len__(self):
        return self.values.size


_COEFF_CACHE: "weakref.WeakKeyDictionary[FunctionHandle, dict]" = weakref.WeakKeyDictionary()


def fourier_coefficient(f: FunctionHandle, S: OrthonormalSystem, k: int,
                        spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """C_k(f) = int_0^1 f phi_k."""
    return integrate_product(f, S.element(k), 0.0, 1.0, spec)


def coefficient_vector(f: FunctionHandle, S: OrthonormalSystem, N: int,
                       spec: QuadratureSpec = DEFAULT_SPEC) -> CoefficientVector:
    """C_1(f) .. C_N(f), computed on one shared panel grid and cached per (f, S, spec).

    The grid merges the breakpoints of ``f`` and of ``phi_1..phi_N`` and is
    resolved for the product frequency ``f.max_frequency + max_k freq(phi_k)``.
    """
    if S.max_index is not None and N > S.max_index:
        raise IndexError(f"N={N} exceeds max_index {S.max_index} of {S.name}")
    per_f = _COEFF_CACHE.setdefault(f, {})
    key = (id(S), spec)
    hit = per_f.get(key)
    if hit is not None and hit[0] is S and hit[1].values.size >= N:
        vec = hit[1]
        return CoefficientVector(vec.system, vec.function, vec.values[:N])
    freq = f.max_frequency + S.frequency_upto(N)
    bps = set(f.breakpoints) | set(S.breakpoints_upto(N))
    edges = panel_edges(0.0, 1.0, bps, freq, spec)
    x, w = nodes_weights(edges, spec)
    x, w = x.ravel(), w.ravel()
    fw = f.evaluator(x) * w
    values = np.empty(N)
    block = max(1, 2_000_000 // max(x.size, 1))
    for start in range(0, N, block):
        ks = np.arange(start + 1, min(N, start + block) + 1)
        values[start:start + ks.size] = S.antiderivatives(ks, x, 0) @ fw
    vec = CoefficientVector(S.name, f.name, values)
    per_f[key] = (S, vec)
    return vec


def _phi_at(S: OrthonormalSystem, n: int, x: float) -> np.ndarray:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x={x} outside [0, 1]")
    return S.antiderivatives(np.arange(1, n + 1), [x], 0)[:, 0]


def partial_sum(f: FunctionHandle, S: OrthonormalSystem, n: int, x: float,
                spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """S_n(x, f) = sum_{k <= n} C_k(f) phi_k(x)."""
    c = coefficient_vector(f, S, n, spec).values
    return math.fsum(c * _phi_at(S, n, x))


def mean_from_coefficients(coeffs: np.ndarray, S: OrthonormalSystem, n: int, alpha: float,
                           x: float, support: int | None = None) -> float:
    """sigma_n^alpha(x) from a coefficient array.

    If ``support`` is given the spectrum is declared to vanish beyond it, and
    ``coeffs`` only needs ``support`` entries.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if support is not None:
        coeffs = coeffs[:support]
        m = min(n, coeffs.size)
    else:
        if coeffs.size < n:
            raise ValueError(f"need {n} coefficients, got {coeffs.size}")
        m = n
    w = cesaro_weights(n, alpha).weights[:m]
    return math.fsum(w * coeffs[:m] * _phi_at(S, m, x))


def cesaro_mean(f: FunctionHandle, S: OrthonormalSystem, n: int, alpha: float, x: float,
                spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """sigma_n^alpha(x, f) = sum_{k=1}^n (A_{n-k}/A_n) C_k(f) phi_k(x)."""
    c = coefficient_vector(f, S, n, spec).values
    return mean_from_coefficients(c, S, n, alpha, x)


def mean_curves(coeffs: np.ndarray, S: OrthonormalSystem, ns, alpha: float, xs) -> np.ndarray:
    """sigma_n^alpha(x) for every n in ``ns`` and x in ``xs``; shape (len(ns), len(xs))."""
    ns = [int(n) for n in ns]
    coeffs = np.asarray(coeffs, dtype=float)
    if max(ns) > coeffs.size:
        raise ValueError(f"need {max(ns)} coefficients, got {coeffs.size}")
    phi = S.antiderivatives(np.arange(1, max(ns) + 1), np.asarray(xs, dtype=float), 0)
    terms = coeffs[:max(ns), None] * phi
    out = np.empty((len(ns), phi.shape[1]))
    for r, n in enumerate(ns):
        out[r] = cesaro_weights(n, alpha).weights @ terms[:n]
    return out
