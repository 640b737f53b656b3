"""Composite Gauss-Legendre quadrature on [0, 1].

Panels are split at every breakpoint of the integrand and refined so that
oscillatory integrands get a fixed number of panels per period.  There is no
adaptive refinement: the rule is deterministic given the integrand metadata.
"""
from __future__ import annotations

import math
import threading
import weakref
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .func import DomainError, FunctionHandle

__all__ = [
    "QuadratureSpec",
    "DEFAULT_SPEC",
    "panel_edges",
    "nodes_weights",
    "integrate",
    "integrate_product",
    "integrate_intervals",
    "prefix_integral",
    "product",
]


@dataclass(frozen=True)
class QuadratureSpec:
    panel_rule_order: int = 8
    min_panels: int = 4
    oscillation_panels_per_period: int = 4

    def __post_init__(self):
        if self.panel_rule_order < 2:
            raise ValueError("panel_rule_order must be >= 2")
        if self.min_panels < 1:
            raise ValueError("min_panels must be >= 1")
        if self.oscillation_panels_per_period < 2:
            raise ValueError("oscillation_panels_per_period must be >= 2")


DEFAULT_SPEC = QuadratureSpec()


@lru_cache(maxsize=32)
def _gauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def _check_interval(a: float, b: float) -> None:
    if not (0.0 <= a <= b <= 1.0):
        raise DomainError(f"interval [{a}, {b}] not contained in [0, 1] or reversed")


def panel_edges(a: float, b: float, breakpoints: Iterable[float], max_frequency: float,
                spec: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    """Panel edges for [a, b]: split at breakpoints, then subdivide each piece."""
    _check_interval(a, b)
    if a == b:
        return np.array([a, b])
    bps = np.asarray(sorted(set(float(t) for t in breakpoints)), dtype=float)
    inner = bps[(bps > a) & (bps < b)]
    cuts = np.concatenate([[a], inner, [b]])
    widths = np.diff(cuts)
    counts = np.full(widths.shape, spec.min_panels, dtype=np.int64)
    if max_frequency > 0:
        per_len = spec.oscillation_panels_per_period * max_frequency
        counts = np.maximum(counts, np.ceil(widths * per_len - 1e-9).astype(np.int64))
    pieces = [c0 + (c1 - c0) * np.arange(k) / k for c0, c1, k in zip(cuts[:-1], cuts[1:], counts)]
    return np.concatenate(pieces + [[b]])


def nodes_weights(edges: np.ndarray, spec: QuadratureSpec = DEFAULT_SPEC
                  ) -> tuple[np.ndarray, np.ndarray]:
    """Gauss nodes and weights for consecutive panels, shape (panels, order)."""
    t, w = _gauss(spec.panel_rule_order)
    lo = edges[:-1, None]
    h = np.diff(edges)[:, None]
    return lo + h * t[None, :], h * w[None, :]


def _panel_sums(f: FunctionHandle, edges: np.ndarray, spec: QuadratureSpec) -> np.ndarray:
    x, w = nodes_weights(edges, spec)
    vals = np.asarray(f.evaluator(x.ravel()), dtype=float).reshape(x.shape)
    return np.sum(vals * w, axis=1)


def integrate(f: FunctionHandle, a: float = 0.0, b: float = 1.0,
              spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """int_a^b f(u) du."""
    edges = panel_edges(a, b, f.breakpoints, f.max_frequency, spec)
    if a == b:
        return 0.0
    return math.fsum(_panel_sums(f, edges, spec))


def product(f: FunctionHandle, g: FunctionHandle) -> FunctionHandle:
    """Pointwise product with merged breakpoints and summed frequency."""
    bps = tuple(sorted(set(f.breakpoints) | set(g.breakpoints)))
    return FunctionHandle(lambda u: f.evaluator(u) * g.evaluator(u), bps,
                          f.max_frequency + g.max_frequency, name=f"({f.name})*({g.name})")


def integrate_product(f: FunctionHandle, g: FunctionHandle, a: float = 0.0, b: float = 1.0,
                      spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """int_a^b f g du."""
    return integrate(product(f, g), a, b, spec)


def integrate_intervals(f: FunctionHandle, cuts, spec: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    """Integrals of ``f`` over consecutive intervals [cuts[j], cuts[j+1]].

    The cut points are treated as extra breakpoints, so no panel straddles one.
    """
    cuts = np.asarray(cuts, dtype=float)
    if cuts.ndim != 1 or cuts.size < 2 or np.any(np.diff(cuts) < 0):
        raise DomainError("cuts must be a nondecreasing sequence of at least two points")
    edges = panel_edges(cuts[0], cuts[-1], list(f.breakpoints) + list(cuts), f.max_frequency, spec)
    if cuts[0] == cuts[-1]:
        return np.zeros(cuts.size - 1)
    sums = _panel_sums(f, edges, spec)
    owner = np.searchsorted(cuts, edges[:-1], side="right") - 1
    out = np.zeros(cuts.size - 1)
    for j in np.unique(owner):
        out[j] = math.fsum(sums[owner == j])
    return out


# ---------------------------------------------------------------------------
# prefix integrals

_PREFIX_CACHE: "weakref.WeakKeyDictionary[FunctionHandle, dict]" = weakref.WeakKeyDictionary()
_PREFIX_LOCK = threading.Lock()


def _numeric_prefix(f: FunctionHandle, spec: QuadratureSpec) -> FunctionHandle:
    edges = panel_edges(0.0, 1.0, f.breakpoints, f.max_frequency, spec)
    sums = _panel_sums(f, edges, spec)
    cum = np.concatenate([[0.0], np.cumsum(sums)])
    t, w = _gauss(spec.panel_rule_order)

    def ev(u):
        u = np.asarray(u, dtype=float)
        j = np.clip(np.searchsorted(edges, u, side="right") - 1, 0, edges.size - 2)
        lo = edges[j]
        h = u - lo
        x = lo[:, None] + h[:, None] * t[None, :]
        vals = np.asarray(f.evaluator(x.ravel()), dtype=float).reshape(x.shape)
        return cum[j] + h * (vals @ w)

    return FunctionHandle(ev, f.breakpoints, f.max_frequency, None, f, f"int({f.name})")


def prefix_integral(f: FunctionHandle, spec: QuadratureSpec = DEFAULT_SPEC) -> FunctionHandle:
    """Handle for ``u -> int_0^u f``.

    Uses the exact antiderivative when ``f`` carries one; otherwise a
    cumulative panel table (built once per handle) plus an in-panel Gauss
    correction.
    """
    if f.antiderivative is not None:
        return f.antiderivative
    with _PREFIX_LOCK:
        per_spec = _PREFIX_CACHE.setdefault(f, {})
        cached = per_spec.get(spec)
        if cached is None:
            cached = per_spec[spec] = _numeric_prefix(f, spec)
    return cached
