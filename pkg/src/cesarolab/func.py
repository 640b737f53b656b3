"""Real functions on [0, 1] and Lipschitz-class norms.

A :class:`FunctionHandle` wraps a vectorised evaluator together with the
metadata the quadrature layer needs (breakpoints, oscillation frequency) and
optional exact antiderivative / derivative handles.  Handles are immutable.

Evaluation convention: at a breakpoint the right limit is returned, except at
``u = 1`` where the left limit is used.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import Polynomial

__all__ = [
    "DomainError",
    "FunctionHandle",
    "LipschitzProfile",
    "compress",
    "compress_reflect",
    "eval",
    "lip_profile",
    "make_named",
    "polynomial",
    "tabulated",
    "CATALOG",
]

Evaluator = Callable[[np.ndarray], np.ndarray]


class DomainError(ValueError):
    """Argument outside [0, 1] (or an invalid interval)."""


@dataclass(frozen=True, eq=False)
class FunctionHandle:
    """An evaluable real function on [0, 1].

    ``antiderivative`` (if given) is the handle of ``u -> int_0^u f``; it may
    itself carry an antiderivative, which is how second primitives are made
    available to the kernel code.
    """

    evaluator: Evaluator
    breakpoints: tuple[float, ...] = ()
    max_frequency: float = 0.0
    antiderivative: Optional["FunctionHandle"] = None
    derivative: Optional["FunctionHandle"] = None
    name: str = ""

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        if any(b < 0.0 or b > 1.0 for b in bps):
            raise DomainError(f"breakpoints of {self.name!r} must lie in [0, 1]")
        if any(b1 <= b0 for b0, b1 in zip(bps, bps[1:])):
            raise ValueError(f"breakpoints of {self.name!r} must be strictly increasing")
        if self.max_frequency < 0:
            raise ValueError("max_frequency must be nonnegative")
        object.__setattr__(self, "breakpoints", bps)

    def __call__(self, u):
        return eval(self, u)

    @property
    def antiderivative_evaluator(self) -> Optional[Evaluator]:
        return None if self.antiderivative is None else self.antiderivative.evaluator

    def __repr__(self):
        return f"FunctionHandle({self.name or '<anonymous>'})"


def eval(f: FunctionHandle, u):
    """Evaluate ``f`` at ``u`` (scalar or array) with a domain check."""
    arr = np.asarray(u, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"argument outside [0, 1] for {f.name or 'function'}")
    out = np.asarray(f.evaluator(np.atleast_1d(arr)), dtype=float)
    if arr.ndim == 0:
        return float(out.reshape(-1)[0])
    return out.reshape(arr.shape)


# ---------------------------------------------------------------------------
# Lipschitz profile


@dataclass(frozen=True)
class LipschitzProfile:
    sup_norm: float
    lip_seminorm: float
    lip1_norm: float


def lip_profile(f: FunctionHandle, grid_size: int) -> LipschitzProfile:
    """Grid lower bounds of ``||f||_C`` and the Lipschitz seminorm.

    ``grid_size`` is the number of uniform subintervals, so doubling it refines
    the grid and the seminorm estimate can only grow.  The sup norm also looks
    at the breakpoints (and their left limits); the seminorm uses adjacent
    uniform-grid pairs only.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    grid = np.linspace(0.0, 1.0, grid_size + 1)
    vals = f.evaluator(grid)
    pts = [vals]
    if f.breakpoints:
        bps = np.asarray(f.breakpoints)
        pts.append(f.evaluator(bps))
        left = np.clip(bps - 1e-12, 0.0, 1.0)
        pts.append(f.evaluator(left))
    sup_norm = float(np.max(np.abs(np.concatenate(pts))))
    lip = float(np.max(np.abs(np.diff(vals))) * grid_size)
    return LipschitzProfile(sup_norm, lip, sup_norm + lip)


# ---------------------------------------------------------------------------
# constructors


def polynomial(coeffs: Sequence[float], name: str | None = None) -> FunctionHandle:
    """Polynomial ``sum c_j u**j`` with exact antiderivative and derivative."""
    p = Polynomial(np.asarray(coeffs, dtype=float))
    label = name or "poly:" + ",".join(repr(float(c)) for c in p.coef)
    return _poly_handle(p, label, depth_up=2, depth_down=2)


def _poly_handle(p: Polynomial, label: str, depth_up: int, depth_down: int) -> FunctionHandle:
    anti = None
    if depth_up > 0:
        anti = _poly_handle(p.integ(lbnd=0.0), f"int({label})", depth_up - 1, 0)
    deriv = None
    if depth_down > 0:
        deriv = _poly_handle(p.deriv(), f"d({label})", 0, depth_down - 1)
    return FunctionHandle(lambda u, p=p: p(u), (), 0.0, anti, deriv, label)


def _cos4pi_shifted() -> FunctionHandle:
    c = 4.0 * np.pi
    dd = FunctionHandle(lambda u: c * c * np.cos(c * (u - 0.5)), (), 2.0, name="d2(cos4pi_shifted)")
    d = FunctionHandle(lambda u: c * np.sin(c * (u - 0.5)), (), 2.0, derivative=dd,
                       name="d(cos4pi_shifted)")
    # int_0^u f = u - sin(c (u - 1/2)) / c   (sin(-2 pi) = 0)
    # int_0^u int_0^t f = u^2/2 + (cos(c (u - 1/2)) - 1) / c^2
    # third primitive: u^3/6 + sin(c (u - 1/2)) / c^3 - u / c^2
    anti3 = FunctionHandle(lambda u: u**3 / 6.0 + np.sin(c * (u - 0.5)) / c**3 - u / c**2, (), 2.0,
                           name="int3(cos4pi_shifted)")
    anti2 = FunctionHandle(lambda u: 0.5 * u * u + (np.cos(c * (u - 0.5)) - 1.0) / c**2, (), 2.0,
                           anti3, name="int2(cos4pi_shifted)")
    anti = FunctionHandle(lambda u: u - np.sin(c * (u - 0.5)) / c, (), 2.0, anti2,
                          name="int(cos4pi_shifted)")
    return FunctionHandle(lambda u: 1.0 - np.cos(c * (u - 0.5)), (), 2.0, anti, d,
                          "cos4pi_shifted")


def _cos4pi_shifted_antiderivative() -> FunctionHandle:
    base = _cos4pi_shifted()
    anti = base.antiderivative
    return FunctionHandle(anti.evaluator, (), 2.0, anti.antiderivative, base,
                          "cos4pi_shifted_antiderivative")


def _one() -> FunctionHandle:
    return polynomial([1.0], name="one")


def _identity() -> FunctionHandle:
    return polynomial([0.0, 1.0], name="identity")


def _half_square() -> FunctionHandle:
    return polynomial([0.0, 0.0, 0.5], name="half_square")


def _gamma_compressed() -> FunctionHandle:
    return compress(_cos4pi_shifted(), name="gamma_compressed")


CATALOG: dict[str, Callable[[], FunctionHandle]] = {
    "one": _one,
    "identity": _identity,
    "half_square": _half_square,
    "cos4pi_shifted": _cos4pi_shifted,
    "cos4pi_shifted_antiderivative": _cos4pi_shifted_antiderivative,
    "gamma_compressed": _gamma_compressed,
}


def make_named(name: str) -> FunctionHandle:
    """Build a catalog function.

    Besides the fixed names in :data:`CATALOG`, ``polynomial:c0,c1,...`` and
    its short form ``poly:c0,c1,...`` give ``sum c_j u**j``.
    """
    name = name.strip()
    for prefix in ("polynomial:", "poly:"):
        if name.startswith(prefix):
            body = name[len(prefix):]
            try:
                coeffs = [float(c) for c in body.split(",") if c.strip()]
            except ValueError as exc:
                raise KeyError(f"bad polynomial coefficients in {name!r}") from exc
            if not coeffs:
                raise KeyError(f"empty polynomial {name!r}")
            return polynomial(coeffs, name=name)
    try:
        return CATALOG[name]()
    except KeyError:
        raise KeyError(f"unknown function {name!r}; known: {sorted(CATALOG)} or poly:...") from None


# ---------------------------------------------------------------------------
# two-branch transforms


def _taylor_join(left_vals: list[float], t: np.ndarray) -> np.ndarray:
    """sum_j left_vals[j] * t**j / j!  (left_vals[j] = value of the (m-j)-th primitive at 1/2)."""
    out = np.zeros_like(t)
    fact = 1.0
    for j, v in enumerate(left_vals):
        if j:
            fact *= j
        out = out + v * t**j / fact
    return out


def _two_branch(f: FunctionHandle, right_sign: float, order: int, label: str,
                chain: list[FunctionHandle]) -> FunctionHandle:
    """order-th primitive of u -> f(2u) on [0,1/2), right_sign*f(2u-1) on [1/2,1].

    ``chain[m]`` is the m-th primitive of ``f`` (chain[0] = f).
    """
    scale = 0.5**order
    base = chain[order]
    # (order - j)-th primitive of the transformed function, at 1/2, j = 0..order-1
    join = [0.5 ** (order - j) * float(chain[order - j].evaluator(np.array([1.0]))[0])
            for j in range(order)]

    def ev(u, base=base, scale=scale, join=join):
        u = np.asarray(u, dtype=float)
        left = u < 0.5
        out = np.empty_like(u)
        out[left] = scale * base.evaluator(2.0 * u[left])
        ur = u[~left]
        right = _taylor_join(join, ur - 0.5)
        if right_sign != 0.0:
            right = right + right_sign * scale * base.evaluator(np.clip(2.0 * ur - 1.0, 0.0, 1.0))
        out[~left] = right
        return out

    bps = sorted({0.5 * b for b in f.breakpoints} | {0.5}
                 | ({0.5 + 0.5 * b for b in f.breakpoints} if right_sign != 0.0 else set()))
    bps = [b for b in bps if 0.0 <= b <= 1.0]
    anti = None
    if order + 1 < len(chain):
        anti = _two_branch(f, right_sign, order + 1, label, chain)
    name = label if order == 0 else f"int{order}({label})"
    return FunctionHandle(ev, tuple(bps), 2.0 * f.max_frequency, anti, None, name)


def _primitive_chain(f: FunctionHandle, depth: int = 3) -> list[FunctionHandle]:
    chain = [f]
    while len(chain) <= depth and chain[-1].antiderivative is not None:
        chain.append(chain[-1].antiderivative)
    return chain


def _derivative_two_branch(f: FunctionHandle, right_sign: float, label: str) -> Optional[FunctionHandle]:
    if f.derivative is None:
        return None
    d = f.derivative

    def ev(u, d=d):
        u = np.asarray(u, dtype=float)
        left = u < 0.5
        out = np.zeros_like(u)
        out[left] = 2.0 * d.evaluator(2.0 * u[left])
        if right_sign != 0.0:
            ur = u[~left]
            out[~left] = right_sign * 2.0 * d.evaluator(np.clip(2.0 * ur - 1.0, 0.0, 1.0))
        return out

    bps = {0.5 * b for b in d.breakpoints} | {0.5}
    if right_sign != 0.0:
        bps |= {0.5 + 0.5 * b for b in d.breakpoints}
    return FunctionHandle(ev, tuple(sorted(bps)), 2.0 * d.max_frequency, None,
                          _derivative_two_branch(d, right_sign, f"d({label})"), f"d({label})")


def compress(f: FunctionHandle, name: str | None = None) -> FunctionHandle:
    """v(u) = f(2u) on [0, 1/2), 0 on [1/2, 1]."""
    label = name or f"compress({f.name})"
    h = _two_branch(f, 0.0, 0, label, _primitive_chain(f))
    return FunctionHandle(h.evaluator, h.breakpoints, h.max_frequency, h.antiderivative,
                          _derivative_two_branch(f, 0.0, label), label)


def compress_reflect(f: FunctionHandle, name: str | None = None) -> FunctionHandle:
    """u -> f(2u) on [0, 1/2), -f(2(u - 1/2)) on [1/2, 1]."""
    label = name or f"cr({f.name})"
    h = _two_branch(f, -1.0, 0, label, _primitive_chain(f))
    return FunctionHandle(h.evaluator, h.breakpoints, h.max_frequency, h.antiderivative,
                          _derivative_two_branch(f, -1.0, label), label)


# ---------------------------------------------------------------------------
# tabulated samples


def tabulated(values: Sequence[float], name: str = "tabulated") -> FunctionHandle:
    """Piecewise-linear interpolant of samples on the uniform grid of [0, 1].

    The exact (piecewise-quadratic) antiderivative is attached; second
    primitives fall back to numerical prefix tables.
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size < 2:
        raise ValueError("need at least two samples")
    m = v.size - 1
    grid = np.linspace(0.0, 1.0, m + 1)
    h = 1.0 / m
    cum = np.concatenate([[0.0], np.cumsum(0.5 * h * (v[:-1] + v[1:]))])
    slope = np.diff(v) / h

    def anti_ev(u):
        u = np.asarray(u, dtype=float)
        j = np.clip((u * m).astype(int), 0, m - 1)
        t = u - grid[j]
        return cum[j] + v[j] * t + 0.5 * slope[j] * t * t

    anti = FunctionHandle(anti_ev, tuple(grid[1:-1]), 0.0, name=f"int({name})")
    return FunctionHandle(lambda u: np.interp(u, grid, v), tuple(grid[1:-1]), 0.0, anti,
                          None, name)
