"""Cesaro kernel Q_n(u, x), the H_n diagnostic and the extremal construction.

With ``w_{n,k}`` the Cesaro weights and ``g_k(u) = int_0^u phi_k``::

    Q_n(u, x)  = sum_k w_{n,k} g_k(u) phi_k(x)
    P_n(y, x)  = int_0^y Q_n(u, x) du          (the "prefix")
    H_n(x)     = (1/n) sum_{i=1}^{n-1} |P_n(i/n, x)|

The prefix is evaluated from the systems' exact second primitives, so H_n for
all ``i`` costs one ``n x n`` matrix product.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import func
from .cesaro import cesaro_weights
from .func import FunctionHandle, LipschitzProfile
from .ons import OrthonormalSystem
from .quad import DEFAULT_SPEC, QuadratureSpec, integrate_product, prefix_integral

__all__ = [
    "KernelSlice",
    "DiagnosticRow",
    "ExtremalFunction",
    "kernel_slice",
    "h_diagnostic",
    "lemma1_ratio",
    "lemma2_check",
    "abs_interval_integrals",
    "extremal_function",
    "sign_change_set",
    "u_functional",
    "theorem1_terms",
    "h_sweep",
    "diagnostic_rows",
    "extremal_ledger",
]

_BLOCK = 1 << 22  # max matrix entries per batched evaluation


def _combine(S: OrthonormalSystem, coeffs: np.ndarray, u: np.ndarray, order: int) -> np.ndarray:
    """sum_k coeffs[k-1] * (order-th primitive of phi_k)(u), chunked over u."""
    u = np.asarray(u, dtype=float)
    ks = np.arange(1, coeffs.size + 1)
    out = np.empty(u.size)
    step = max(1, _BLOCK // max(ks.size, 1))
    flat = u.ravel()
    for s in range(0, flat.size, step):
        out[s:s + step] = coeffs @ S.antiderivatives(ks, flat[s:s + step], order)
    return out.reshape(u.shape)


@dataclass(frozen=True, eq=False)
class KernelSlice:
    system: OrthonormalSystem
    n: int
    alpha: float
    x: float
    coeffs: np.ndarray  # w_{n,k} phi_k(x), k = 1..n
    phi_x: np.ndarray  # phi_k(x)
    q_handle: FunctionHandle
    prefix: FunctionHandle

    @property
    def system_name(self) -> str:
        return self.system.name

    def prefix_at(self, y) -> np.ndarray:
        return self.prefix.evaluator(np.atleast_1d(np.asarray(y, dtype=float)))


def kernel_slice(S: OrthonormalSystem, n: int, alpha: float, x: float) -> KernelSlice:
    """Q_n(., x) as a handle in ``u`` with its exact prefix integral attached."""
    if n < 1:
        raise ValueError("n must be >= 1")
    S.check_index(n)
    if not 0.0 <= x <= 1.0:
        raise func.DomainError(f"x={x} outside [0, 1]")
    w = cesaro_weights(n, alpha).weights
    phi_x = S.antiderivatives(np.arange(1, n + 1), [x], 0)[:, 0]
    coeffs = w * phi_x
    bps = S.breakpoints_upto(n)
    freq = S.frequency_upto(n)
    label = f"Q[{S.name},n={n},a={alpha},x={x}]"
    prefix = FunctionHandle(lambda u: _combine(S, coeffs, u, 2), bps, freq, name=f"int({label})")
    q = FunctionHandle(lambda u: _combine(S, coeffs, u, 1), bps, freq, prefix, None, label)
    return KernelSlice(S, n, alpha, float(x), coeffs, phi_x, q, prefix_integral(q))


def h_diagnostic(slice: KernelSlice) -> float:
    """H_n(x) = (1/n) sum_{i<n} |P_n(i/n, x)|; zero for n = 1."""
    n = slice.n
    if n == 1:
        return 0.0
    p = slice.prefix_at(np.arange(1, n) / n)
    return math.fsum(np.abs(p)) / n


def lemma1_ratio(S: OrthonormalSystem, n: int, x: float) -> float:
    """(1/n^2) sum_{k<=n} phi_k(x)^2."""
    phi = S.antiderivatives(np.arange(1, n + 1), [x], 0)[:, 0]
    return math.fsum(phi * phi) / (n * n)


# ---------------------------------------------------------------------------
# integrals of |Q|


def _refine_roots(S: OrthonormalSystem, coeffs: np.ndarray, lo: np.ndarray, hi: np.ndarray,
                  q_lo: np.ndarray, iterations: int = 48, cols: np.ndarray | None = None) -> np.ndarray:
    """Bisect sign changes of Q for many brackets at once.

    ``coeffs`` is (n, X); bracket ``b`` belongs to column ``cols[b]``.
    """
    ks = np.arange(1, coeffs.shape[0] + 1)
    lo, hi = lo.copy(), hi.copy()
    s_lo = np.sign(q_lo)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        a1 = S.antiderivatives(ks, mid, 1)
        qm = np.einsum("kb,kb->b", coeffs[:, cols], a1)
        same = np.sign(qm) == s_lo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
        if np.max(hi - lo, initial=0.0) < 1e-14:
            break
    return 0.5 * (lo + hi)


def abs_interval_integrals(S: OrthonormalSystem, coeffs: np.ndarray, n: int,
                           samples_per_interval: int = 16) -> np.ndarray:
    """int_{(i-1)/n}^{i/n} |Q_n(u, x)| du for i = 1..n and every column of ``coeffs``.

    ``coeffs`` has shape (n, X) (one column per x).  Q is sampled on a grid
    containing the cuts i/n, the system breakpoints and ``samples_per_interval``
    points per cut interval; sign changes between samples are bisected and the
    integral is the sum of |prefix increments| over sign-constant pieces.
    """
    coeffs = np.asarray(coeffs, dtype=float).reshape(n, -1)
    X = coeffs.shape[1]
    ks = np.arange(1, n + 1)
    sub = np.arange(n * samples_per_interval + 1) / (n * samples_per_interval)
    t = np.union1d(sub, np.asarray(S.breakpoints_upto(n), dtype=float))
    a1 = S.antiderivatives(ks, t, 1)
    a2 = S.antiderivatives(ks, t, 2)
    qv = coeffs.T @ a1  # (X, T)
    pv = coeffs.T @ a2
    owner = np.minimum((t[:-1] * n + 1e-9).astype(np.int64), n - 1)  # interval of each sample gap
    out = np.zeros((n, X))
    change = (qv[:, :-1] * qv[:, 1:]) < 0
    cx, cj = np.nonzero(change)
    if cx.size:
        roots = _refine_roots(S, coeffs, t[cj], t[cj + 1], qv[cx, cj], cols=cx)
        p_root = np.einsum("kb,kb->b", coeffs[:, cx], S.antiderivatives(ks, roots, 2))
    for col in range(X):
        seg = np.abs(np.diff(pv[col]))
        mask = cx == col
        if np.any(mask):
            j = cj[mask]
            pr = p_root[mask]
            # replace |P(t_{j+1}) - P(t_j)| by |P(r) - P(t_j)| + |P(t_{j+1}) - P(r)|
            seg[j] = np.abs(pr - pv[col, j]) + np.abs(pv[col, j + 1] - pr)
        out[:, col] = np.bincount(owner, weights=seg, minlength=n)
    return out


def lemma2_check(slice: KernelSlice, samples_per_interval: int = 16) -> float:
    """Worst slack of  int_{I_i} |Q_n| <= ((1/n^2) sum phi_k(x)^2)^{1/2}  over i = 1..n."""
    n = slice.n
    bound = math.sqrt(math.fsum(slice.phi_x**2)) / n
    ints = abs_interval_integrals(slice.system, slice.coeffs[:, None], n, samples_per_interval)[:, 0]
    return float(np.min(bound - ints))


# ---------------------------------------------------------------------------
# extremal construction


@dataclass(frozen=True)
class ExtremalFunction:
    breakpoints: np.ndarray  # interior sign-change abscissae of the prefix
    slopes: np.ndarray  # +-1 on each of the len(breakpoints) + 1 segments
    handle: FunctionHandle
    zero_tol: float = 0.0  # prefix values with |P| <= zero_tol count as 0 (sign +1)

    @property
    def knots(self) -> np.ndarray:
        return np.concatenate([[0.0], self.breakpoints, [1.0]])


def _sign(p: np.ndarray, zero_tol: float = 0.0) -> np.ndarray:
    return np.where(p >= -zero_tol, 1.0, -1.0)


def _piecewise_linear(knots: np.ndarray, slopes: np.ndarray, name: str) -> FunctionHandle:
    values = np.concatenate([[0.0], np.cumsum(slopes * np.diff(knots))])
    interior = tuple(float(b) for b in knots[1:-1])

    def deriv(u, knots=knots, slopes=slopes):
        j = np.clip(np.searchsorted(knots, u, side="right") - 1, 0, slopes.size - 1)
        return slopes[j]

    d = FunctionHandle(deriv, interior, 0.0, name=f"d({name})")
    return FunctionHandle(lambda u: np.interp(u, knots, values), interior, 0.0, None, d, name)


def extremal_function(slice: KernelSlice, grid_factor: int = 8, tol: float = 1e-12,
                      zero_rel: float = 1e-12) -> ExtremalFunction:
    """r_n(u) = int_0^u sign(P_n(y, x)) dy with sign(0) = +1.

    Sign changes of the prefix are bracketed on a uniform grid of
    ``grid_factor * n`` cells merged with the system breakpoints, then
    bisected to ``tol``.  Prefix values within ``zero_rel`` times max |P| on
    the grid are rounding noise around an exact zero and get sign +1.
    """
    m = grid_factor * slice.n
    grid = np.union1d(np.arange(m + 1) / m, slice.system.breakpoints_upto(slice.n))
    pg = slice.prefix_at(grid)
    ztol = zero_rel * float(np.max(np.abs(pg)))
    sg = _sign(pg, ztol)
    sg[0] = sg[1]  # P(0) = 0 carries no sign information
    j = np.nonzero(sg[:-1] != sg[1:])[0]
    lo, hi = grid[j], grid[j + 1]
    s_lo = sg[j]
    while lo.size and np.max(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        same = _sign(slice.prefix_at(mid), ztol) == s_lo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    bps = 0.5 * (lo + hi)
    slopes = np.concatenate([[sg[0]], sg[j + 1]]) if j.size else np.array([sg[0]])
    knots = np.concatenate([[0.0], bps, [1.0]])
    handle = _piecewise_linear(knots, slopes, f"r[{slice.system.name},n={slice.n},x={slice.x}]")
    return ExtremalFunction(bps, slopes, handle, ztol)


def sign_change_set(slice: KernelSlice, r: ExtremalFunction | None = None) -> set[int]:
    """E_n: indices i in 1..n-1 where the prefix sign on [i/n, (i+1)/n) is not constant."""
    n = slice.n
    if n < 2:
        raise ValueError("E_n needs n >= 2")
    r = r or extremal_function(slice)
    knots = r.knots
    i = np.arange(1, n)
    a, b = i / n, (i + 1) / n
    s_at = _sign(slice.prefix_at(a), r.zero_tol)
    j_lo = np.clip(np.searchsorted(knots, a, side="right") - 1, 0, r.slopes.size - 1)
    j_hi = np.clip(np.searchsorted(knots, b, side="left") - 1, 0, r.slopes.size - 1)
    hit = (j_hi > j_lo) | (r.slopes[j_lo] != s_at)
    return {int(v) for v in i[hit]}


def u_functional(f: FunctionHandle, slice: KernelSlice, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """U_n(f) = int_0^1 f(u) Q_n(u, x) du."""
    return integrate_product(f, slice.q_handle, 0.0, 1.0, spec)


def theorem1_terms(f: FunctionHandle, slice: KernelSlice,
                   spec: QuadratureSpec = DEFAULT_SPEC) -> tuple[float, float, float]:
    """The three pieces of int_0^1 f'(u) Q_n(u, x) du after summation by parts.

    Uses values of ``f`` at the grid i/n and the exact prefix of Q_n; only the
    ``int f' Q`` part of the middle term is a quadrature.
    """
    if f.derivative is None:
        raise ValueError(f"{f.name} carries no derivative")
    n = slice.n
    grid = np.arange(n + 1) / n
    fv = f.evaluator(grid)
    df = np.diff(fv)  # f(i/n) - f((i-1)/n), i = 1..n
    p = slice.prefix_at(grid)
    i1 = n * math.fsum((df[:-1] - df[1:]) * p[1:-1])
    whole = integrate_product(f.derivative, slice.q_handle, 0.0, 1.0, spec)
    i2 = whole - n * math.fsum(df * np.diff(p))
    i3 = n * (fv[-1] - fv[-2]) * p[-1]
    return i1, i2, i3


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class DiagnosticRow:
    n: int
    alpha: float
    x: float
    h_value: float
    lemma1_ratio: float
    lemma2_worst_slack: float
    prefix_at_1: float

    FIELDS = ("n", "alpha", "x", "h_value", "lemma1_ratio", "lemma2_worst_slack", "prefix_at_1")

    def as_tuple(self):
        return tuple(getattr(self, k) for k in self.FIELDS)


def h_sweep(S: OrthonormalSystem, n: int, alphas: Sequence[float], xs: Sequence[float]
            ) -> tuple[np.ndarray, np.ndarray]:
    """H_n and P_n(1) for all (alpha, x) pairs; both arrays have shape (len(alphas), len(xs))."""
    ks = np.arange(1, n + 1)
    xs = np.asarray(xs, dtype=float)
    phi = S.antiderivatives(ks, xs, 0)
    y = np.arange(1, n + 1) / n
    g2 = S.antiderivatives(ks, y, 2)  # (n, n); last column is y = 1
    h = np.empty((len(alphas), xs.size))
    p1 = np.empty_like(h)
    for a, alpha in enumerate(alphas):
        c = cesaro_weights(n, alpha).weights[:, None] * phi
        p = g2.T @ c  # (n, X)
        h[a] = np.abs(p[:-1]).sum(axis=0) / n
        p1[a] = p[-1]
    return h, p1


def diagnostic_rows(S: OrthonormalSystem, ns: Iterable[int], alphas: Sequence[float],
                    xs: Sequence[float], lemma2: bool = True,
                    samples_per_interval: int = 16) -> list[DiagnosticRow]:
    """One row per (n, alpha, x) in that order."""
    rows = []
    xs = np.asarray(xs, dtype=float)
    for n in ns:
        h, p1 = h_sweep(S, n, alphas, xs)
        phi = S.antiderivatives(np.arange(1, n + 1), xs, 0)
        sq = np.sum(phi * phi, axis=0)
        ratio = sq / (n * n)
        if lemma2:
            # one pass over the sample grid for every (alpha, x) column
            c = np.hstack([cesaro_weights(n, alpha).weights[:, None] * phi for alpha in alphas])
            ints = abs_interval_integrals(S, c, n, samples_per_interval)
            slack_all = (np.sqrt(sq)[None, :] / n - ints.max(axis=0).reshape(len(alphas), -1))
        else:
            slack_all = np.full((len(alphas), xs.size), np.nan)
        for a, alpha in enumerate(alphas):
            slack = slack_all[a]
            for b, x in enumerate(xs):
                rows.append(DiagnosticRow(int(n), float(alpha), float(x), float(h[a, b]),
                                          float(ratio[b]), float(slack[b]), float(p1[a, b])))
    return rows


@dataclass(frozen=True)
class ExtremalRow:
    n: int
    alpha: float
    x: float
    h_value: float
    u_abs: float
    c_n: float
    lip1_norm: float
    e_count: int
    e_sum: float  # (1/n) sum_{i in E_n} |P(i/n)|
    e_bound: float  # (1/n) (sum phi_k(x)^2)^{1/2}

    FIELDS = ("n", "alpha", "x", "h_value", "u_abs", "c_n", "lip1_norm", "e_count", "e_sum", "e_bound")

    def as_tuple(self):
        return tuple(getattr(self, k) for k in self.FIELDS)


def extremal_ledger(S: OrthonormalSystem, n: int, alpha: float, x: float,
                    lip_grid: int | None = None, with_function: bool = False):
    """H_n(x), |U_n(r_n)|, c_n = H_n - |U_n(r_n)| and ||r_n||_Lip1 for one (n, x).

    Returns an :class:`ExtremalRow`, or ``(row, r_n)`` if ``with_function``.
    """
    sl = kernel_slice(S, n, alpha, x)
    r = extremal_function(sl)
    h = h_diagnostic(sl)
    u = abs(u_functional(r.handle, sl))
    prof: LipschitzProfile = func.lip_profile(r.handle, lip_grid or max(64, 16 * n))
    e_bound = math.sqrt(math.fsum(sl.phi_x**2)) / n
    if n >= 2:
        e = sorted(sign_change_set(sl, r))
        p = sl.prefix_at(np.asarray(e, dtype=float) / n) if e else np.zeros(0)
        e_sum = math.fsum(np.abs(p)) / n
    else:
        e, e_sum = [], 0.0
    row = ExtremalRow(n, alpha, float(x), h, u, h - u, prof.lip1_norm, len(e), e_sum, e_bound)
    return (row, r) if with_function else row
