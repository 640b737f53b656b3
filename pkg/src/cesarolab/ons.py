"""Orthonormal systems on [0, 1].

Every system is indexed from ``k = 1``.  Besides per-element
:class:`~cesarolab.func.FunctionHandle` objects, a system offers the batched
evaluator :meth:`OrthonormalSystem.antiderivatives`, which returns the values
of ``phi_k`` (order 0), ``g_k = int_0^u phi_k`` (order 1) or ``int_0^u g_k``
(order 2) for many indices and points at once.  The kernel sweeps are built on
that batched form.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

from . import func
from .func import FunctionHandle
from .quad import DEFAULT_SPEC, QuadratureSpec, nodes_weights, panel_edges, prefix_integral

__all__ = [
    "DegeneracyError",
    "MomentReport",
    "OrthonormalSystem",
    "CosineSystem",
    "HaarSystem",
    "WalshSystem",
    "StepSystem",
    "CompressReflectSystem",
    "TabulatedSystem",
    "system_cosine",
    "system_haar",
    "system_walsh",
    "compress_reflect",
    "gram_schmidt_random",
    "load_tabulated",
    "validate",
    "prefix_square_sums",
    "parse_system",
]

ORTHONORMAL = "orthonormal"
ZERO_MEAN = "zero_mean"
ZERO_FIRST_MOMENT = "zero_first_moment"


class DegeneracyError(RuntimeError):
    """Random draw numerically dependent on the previous elements."""


class OrthonormalSystem:
    """Indexed family ``k -> phi_k`` with declared structural guarantees.

    ``guarantees`` maps a flag (``orthonormal``, ``zero_mean``,
    ``zero_first_moment``) to the first index from which it holds; e.g. the
    Haar system declares ``zero_mean`` from ``k = 2``.
    """

    name: str = "system"
    max_index: Optional[int] = None

    def __init__(self, name: str, max_index: Optional[int], guarantees: Mapping[str, int]):
        self.name = name
        self.max_index = max_index
        self.guarantees = dict(guarantees)
        self._elements: dict[int, FunctionHandle] = {}

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"

    def check_index(self, k: int) -> None:
        if k < 1 or (self.max_index is not None and k > self.max_index):
            raise IndexError(f"index {k} outside 1..{self.max_index or 'inf'} for {self.name}")

    def element(self, k: int) -> FunctionHandle:
        self.check_index(k)
        h = self._elements.get(k)
        if h is None:
            h = self._elements[k] = self._make_element(k)
        return h

    def _make_element(self, k: int) -> FunctionHandle:
        raise NotImplementedError

    def antiderivatives(self, ks, u, order: int = 0) -> np.ndarray:
        """Matrix ``M[a, b]`` = order-th primitive of ``phi_{ks[a]}`` at ``u[b]``."""
        ks = np.atleast_1d(np.asarray(ks, dtype=np.int64))
        u = np.atleast_1d(np.asarray(u, dtype=float))
        out = np.empty((ks.size, u.size))
        for a, k in enumerate(ks):
            h = self.element(int(k))
            for _ in range(order):
                h = prefix_integral(h)
            out[a] = h.evaluator(u)
        return out

    def breakpoints_upto(self, n: int) -> tuple[float, ...]:
        bps: set[float] = set()
        for k in range(1, n + 1):
            bps.update(self.element(k).breakpoints)
        return tuple(sorted(bps))

    def frequency_upto(self, n: int) -> float:
        return max(self.element(k).max_frequency for k in range(1, n + 1))

    def holds(self, flag: str, k: int) -> bool:
        start = self.guarantees.get(flag)
        return start is not None and k >= start


def _chain(evaluators, bps, freq, name) -> FunctionHandle:
    """Handle whose antiderivative chain is given by ``evaluators[1:]``."""
    h = None
    for order in range(len(evaluators) - 1, -1, -1):
        label = name if order == 0 else f"int{order}({name})"
        h = FunctionHandle(evaluators[order], bps, freq, h, None, label)
    return h


# ---------------------------------------------------------------------------
# cosine


class CosineSystem(OrthonormalSystem):
    def __init__(self):
        super().__init__("cosine", None, {ORTHONORMAL: 1, ZERO_MEAN: 1})

    def antiderivatives(self, ks, u, order=0):
        ks = np.atleast_1d(np.asarray(ks, dtype=float))[:, None]
        u = np.atleast_1d(np.asarray(u, dtype=float))[None, :]
        w = 2.0 * np.pi * ks
        r2 = math.sqrt(2.0)
        if order == 0:
            return r2 * np.cos(w * u)
        if order == 1:
            return r2 * np.sin(w * u) / w
        if order == 2:
            return r2 * (1.0 - np.cos(w * u)) / (w * w)
        return super().antiderivatives(ks.ravel().astype(int), u.ravel(), order)

    def _make_element(self, k):
        evs = [lambda u, k=k, m=m: self.antiderivatives([k], u, m)[0] for m in range(3)]
        return _chain(evs, (), float(k), f"cos[{k}]")

    def breakpoints_upto(self, n):
        return ()

    def frequency_upto(self, n):
        return float(n)


def system_cosine() -> CosineSystem:
    """phi_k(u) = sqrt(2) cos(2 pi k u), k >= 1."""
    return CosineSystem()


# ---------------------------------------------------------------------------
# Haar


def _haar_params(ks: np.ndarray):
    km = np.maximum(ks - 1, 1)
    s = np.floor(np.log2(km)).astype(np.int64)
    # guard float log2 at exact powers of two
    s = np.where((1 << (s + 1)) <= km, s + 1, s)
    s = np.where((1 << s) > km, s - 1, s)
    j = ks - (1 << s)
    h = np.ldexp(1.0, -s)
    a = (j - 1) * h
    c = np.sqrt(np.ldexp(1.0, s))
    return a, h, c


class HaarSystem(OrthonormalSystem):
    def __init__(self):
        super().__init__("haar", None, {ORTHONORMAL: 1, ZERO_MEAN: 2})

    def antiderivatives(self, ks, u, order=0):
        ks = np.atleast_1d(np.asarray(ks, dtype=np.int64))
        u = np.atleast_1d(np.asarray(u, dtype=float))[None, :]
        a, h, c = (v[:, None] for v in _haar_params(ks))
        mid, b = a + 0.5 * h, a + h
        one = (ks == 1)[:, None]
        if order == 0:
            pos = (u >= a) & (u < mid)
            neg = ((u >= mid) & (u < b)) | ((u == 1.0) & (b == 1.0))
            val = c * (pos.astype(float) - neg.astype(float))
            return np.where(one, 1.0, val)
        if order == 1:
            val = c * np.clip(np.minimum(u - a, b - u), 0.0, None)
            return np.where(one, u, val)
        if order == 2:
            top = c * h * h / 4.0
            rise = 0.5 * c * np.clip(u - a, 0.0, 0.5 * h) ** 2
            fall = 0.5 * c * np.clip(b - u, 0.0, 0.5 * h) ** 2
            val = np.where(u <= mid, rise, top - fall)
            return np.where(one, 0.5 * u * u, val)
        return super().antiderivatives(ks, u.ravel(), order)

    def _make_element(self, k):
        evs = [lambda u, k=k, m=m: self.antiderivatives([k], u, m)[0] for m in range(3)]
        if k == 1:
            bps = ()
        else:
            a, h, _ = (float(v[0]) for v in _haar_params(np.array([k])))
            bps = tuple(t for t in (a, a + 0.5 * h, a + h) if 0.0 < t < 1.0)
        return _chain(evs, bps, 0.0, f"haar[{k}]")

    def breakpoints_upto(self, n):
        if n <= 1:
            return ()
        level = int(n - 1).bit_length()  # finest dyadic level touched by X_2..X_n
        m = 1 << level
        return tuple(np.arange(1, m) / m)

    def frequency_upto(self, n):
        return 0.0


def system_haar() -> HaarSystem:
    """L2-normalised dyadic Haar functions; X_1 = 1, X_{2^s+j} has support ((j-1)/2^s, j/2^s)."""
    return HaarSystem()


# ---------------------------------------------------------------------------
# piecewise-constant systems on a dyadic grid


def _step_primitives(values: np.ndarray, u: np.ndarray, order: int) -> np.ndarray:
    """Exact primitives of rows of step functions with ``M`` equal cells."""
    m = values.shape[1]
    u = np.asarray(u, dtype=float)
    c = np.clip((u * m).astype(np.int64), 0, m - 1)
    if order == 0:
        return values[:, c]
    t = u - c / m
    c1 = np.concatenate([np.zeros((values.shape[0], 1)), np.cumsum(values / m, axis=1)], axis=1)
    if order == 1:
        return c1[:, c] + values[:, c] * t
    if order == 2:
        cell2 = c1[:, :-1] / m + values / (2.0 * m * m)
        c2 = np.concatenate([np.zeros((values.shape[0], 1)), np.cumsum(cell2, axis=1)], axis=1)
        return c2[:, c] + c1[:, c] * t + 0.5 * values[:, c] * t * t
    raise ValueError("order must be 0, 1 or 2")


class StepSystem(OrthonormalSystem):
    """Finite system of step functions, row ``k - 1`` of ``values`` is ``phi_k``."""

    def __init__(self, name: str, values: np.ndarray, guarantees: Mapping[str, int]):
        values = np.asarray(values, dtype=float)
        super().__init__(name, values.shape[0], guarantees)
        self.values = values
        self.values.setflags(write=False)
        self.cells = values.shape[1]

    def antiderivatives(self, ks, u, order=0):
        ks = np.atleast_1d(np.asarray(ks, dtype=np.int64))
        for k in np.unique(ks):
            self.check_index(int(k))
        u = np.atleast_1d(np.asarray(u, dtype=float))
        return _step_primitives(self.values[ks - 1], u, order)

    def _make_element(self, k):
        evs = [lambda u, k=k, m=m: self.antiderivatives([k], u, m)[0] for m in range(3)]
        return _chain(evs, self.breakpoints_upto(1), 0.0, f"{self.name}[{k}]")

    def breakpoints_upto(self, n):
        return tuple(np.arange(1, self.cells) / self.cells)

    def frequency_upto(self, n):
        return 0.0


def _bit_reverse(c: np.ndarray, bits: int) -> np.ndarray:
    out = np.zeros_like(c)
    for b in range(bits):
        out |= ((c >> b) & 1) << (bits - 1 - b)
    return out


def _popcount(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    while np.any(x):
        out += x & 1
        x = x >> 1
    return out


class WalshSystem(OrthonormalSystem):
    """Walsh-Paley ordering: w_1 = 1, w_{k+1} = product of Rademacher r_j over the set bits of k."""

    def __init__(self):
        super().__init__("walsh", None, {ORTHONORMAL: 1, ZERO_MEAN: 2})

    @staticmethod
    def _table(ks: np.ndarray) -> np.ndarray:
        bits = max(1, int(ks.max() - 1).bit_length())
        cells = np.arange(1 << bits, dtype=np.int64)
        digits = _bit_reverse(cells, bits)  # bit j of digits = (j+1)-th binary digit of u
        parity = _popcount((ks[:, None] - 1) & digits[None, :]) & 1
        return 1.0 - 2.0 * parity

    def antiderivatives(self, ks, u, order=0):
        ks = np.atleast_1d(np.asarray(ks, dtype=np.int64))
        if np.any(ks < 1):
            raise IndexError("Walsh indices start at 1")
        return _step_primitives(self._table(ks), np.atleast_1d(np.asarray(u, dtype=float)), order)

    def _make_element(self, k):
        evs = [lambda u, k=k, m=m: self.antiderivatives([k], u, m)[0] for m in range(3)]
        return _chain(evs, self.breakpoints_upto(k), 0.0, f"walsh[{k}]")

    def breakpoints_upto(self, n):
        if n <= 1:
            return ()
        m = 1 << int(n - 1).bit_length()
        return tuple(np.arange(1, m) / m)

    def frequency_upto(self, n):
        return 0.0


def system_walsh() -> WalshSystem:
    return WalshSystem()


# ---------------------------------------------------------------------------
# compress-reflect


class CompressReflectSystem(OrthonormalSystem):
    """phi_k(2u) on [0, 1/2), -phi_k(2u - 1) on [1/2, 1].

    The result always has zero mean.  Its first moments equal
    ``-1/4 * int phi_k``, so they vanish exactly when the base has zero mean.
    """

    def __init__(self, base: OrthonormalSystem):
        g: dict[str, int] = {ZERO_MEAN: 1}
        if ORTHONORMAL in base.guarantees:
            g[ORTHONORMAL] = base.guarantees[ORTHONORMAL]
        if ZERO_MEAN in base.guarantees:
            g[ZERO_FIRST_MOMENT] = base.guarantees[ZERO_MEAN]
        super().__init__(f"cr:{base.name}", base.max_index, g)
        self.base = base

    def antiderivatives(self, ks, u, order=0):
        ks = np.atleast_1d(np.asarray(ks, dtype=np.int64))
        u = np.atleast_1d(np.asarray(u, dtype=float))
        left = u < 0.5
        out = np.empty((ks.size, u.size))
        scale = 0.5**order
        out[:, left] = scale * self.base.antiderivatives(ks, 2.0 * u[left], order)
        ur = u[~left]
        right = -scale * self.base.antiderivatives(ks, np.clip(2.0 * ur - 1.0, 0.0, 1.0), order)
        t = ur - 0.5
        fact = 1.0
        for j in range(order):
            if j:
                fact *= j
            lvl = order - j
            at_one = 0.5**lvl * self.base.antiderivatives(ks, [1.0], lvl)[:, 0]
            right = right + at_one[:, None] * (t**j / fact)[None, :]
        out[:, ~left] = right
        return out

    def _make_element(self, k):
        return func.compress_reflect(self.base.element(k), name=f"{self.name}[{k}]")

    def breakpoints_upto(self, n):
        b = self.base.breakpoints_upto(n)
        return tuple(sorted({0.5 * t for t in b} | {0.5} | {0.5 + 0.5 * t for t in b}))

    def frequency_upto(self, n):
        return 2.0 * self.base.frequency_upto(n)


def compress_reflect(base: OrthonormalSystem) -> CompressReflectSystem:
    return CompressReflectSystem(base)


# ---------------------------------------------------------------------------
# random stand-in systems


def gram_schmidt_random(seed: int, count: int, granularity: int, max_redraws: int = 16) -> StepSystem:
    """Orthonormalise ``count`` Gaussian step functions on ``granularity`` dyadic cells."""
    if granularity < 1 or granularity & (granularity - 1):
        raise ValueError("granularity must be a power of two")
    if not 1 <= count <= granularity:
        raise ValueError(f"count must lie in 1..granularity ({granularity}), got {count}")
    rng = np.random.default_rng(seed)
    basis = np.zeros((count, granularity))
    for i in range(count):
        for _ in range(max_redraws):
            v = rng.standard_normal(granularity)
            for _ in range(2):  # re-orthogonalise once for stability
                v -= basis[:i].T @ (basis[:i] @ v / granularity)
            norm = math.sqrt(v @ v / granularity)
            if norm >= 1e-8:
                basis[i] = v / norm
                break
        else:
            raise DegeneracyError(f"draw {i + 1} stayed dependent after {max_redraws} attempts")
    return StepSystem(f"rand:{seed}:{count}:{granularity}", basis, {ORTHONORMAL: 1})


# ---------------------------------------------------------------------------
# tabulated systems


class TabulatedSystem(OrthonormalSystem):
    """Piecewise-linear interpolants of user samples; no guarantees unless declared."""

    def __init__(self, name: str, table: np.ndarray, guarantees: Mapping[str, int] | None = None):
        table = np.asarray(table, dtype=float)
        super().__init__(name, table.shape[0], guarantees or {})
        self.table = table

    def _make_element(self, k):
        return func.tabulated(self.table[k - 1], name=f"{self.name}[{k}]")

    def breakpoints_upto(self, n):
        m = self.table.shape[1] - 1
        return tuple(np.arange(1, m) / m)

    def frequency_upto(self, n):
        return 0.0


def load_tabulated(path: str | Path, name: str | None = None,
                   guarantees: Mapping[str, int] | None = None) -> TabulatedSystem:
    """Read a CSV with columns ``k, u, value`` sampled on a uniform grid of [0, 1]."""
    rows: dict[int, dict[float, float]] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            rows.setdefault(int(rec["k"]), {})[float(rec["u"])] = float(rec["value"])
    if not rows:
        raise ValueError(f"{path}: no rows")
    ks = sorted(rows)
    if ks != list(range(1, len(ks) + 1)):
        raise ValueError(f"{path}: indices must be 1..K without gaps")
    grid = sorted(rows[1])
    m = len(grid) - 1
    if m < 1 or not np.allclose(grid, np.linspace(0.0, 1.0, m + 1), atol=1e-12):
        raise ValueError(f"{path}: samples must lie on a uniform grid covering [0, 1]")
    table = np.empty((len(ks), m + 1))
    for k in ks:
        if sorted(rows[k]) != grid:
            raise ValueError(f"{path}: element {k} uses a different grid")
        table[k - 1] = [rows[k][t] for t in grid]
    return TabulatedSystem(name or f"csv:{Path(path).name}", table, guarantees)


# ---------------------------------------------------------------------------
# validation


@dataclass
class MomentReport:
    system: str
    horizon: int
    tol: float
    rows: list[tuple[int, float, float, float]]  # (k, mean, first moment, inner-product deviation)
    worst_orthonormality_error: float
    worst_mean: float
    worst_first_moment: float
    passed: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.passed.values())


def _gram_nodes(system: OrthonormalSystem, horizon: int, spec: QuadratureSpec):
    freq = 2.0 * system.frequency_upto(horizon)
    edges = panel_edges(0.0, 1.0, system.breakpoints_upto(horizon), freq, spec)
    x, w = nodes_weights(edges, spec)
    return x.ravel(), w.ravel()


def validate(system: OrthonormalSystem, horizon: int, tol: float = 1e-9,
             spec: QuadratureSpec = DEFAULT_SPEC) -> MomentReport:
    """Gram matrix, means and first moments for indices up to ``horizon``."""
    if system.max_index is not None and horizon > system.max_index:
        raise IndexError(f"horizon {horizon} exceeds max_index {system.max_index}")
    x, w = _gram_nodes(system, horizon, spec)
    ks = np.arange(1, horizon + 1)
    phi = system.antiderivatives(ks, x, 0)
    pw = phi * w[None, :]
    gram = pw @ phi.T
    dev = np.abs(gram - np.eye(horizon)).max(axis=1)
    means = pw.sum(axis=1)
    moments = pw @ x
    rows = [(int(k), float(m), float(f), float(d)) for k, m, f, d in zip(ks, means, moments, dev)]
    report = MomentReport(system.name, horizon, tol, rows, float(dev.max()),
                          float(np.abs(means).max()), float(np.abs(moments).max()))
    for flag, start in system.guarantees.items():
        if flag == ORTHONORMAL:
            sub = gram[start - 1:, start - 1:]
            vals = np.abs(sub - np.eye(sub.shape[0]))
        elif flag == ZERO_MEAN:
            vals = np.abs(means[start - 1:])
        else:
            vals = np.abs(moments[start - 1:])
        report.passed[flag] = bool(vals.size == 0 or vals.max() <= tol)
    return report


def prefix_square_sums(system: OrthonormalSystem, n: int, u) -> np.ndarray:
    """sum_{k <= n} g_k(u)^2 (bounded by u via Bessel's inequality)."""
    g = system.antiderivatives(np.arange(1, n + 1), u, 1)
    return np.sum(g * g, axis=0)


# ---------------------------------------------------------------------------
# selector mini-language


def parse_system(selector: str) -> OrthonormalSystem:
    """``cosine | haar | walsh | cr:<selector> | rand:<seed>:<count>:<gran> | csv:<path>``."""
    sel = selector.strip()
    if sel == "cosine":
        return system_cosine()
    if sel == "haar":
        return system_haar()
    if sel == "walsh":
        return system_walsh()
    if sel.startswith("cr:"):
        return compress_reflect(parse_system(sel[3:]))
    if sel.startswith("rand:"):
        parts = sel.split(":")
        if len(parts) != 4:
            raise ValueError(f"bad random selector {selector!r}; expected rand:<seed>:<count>:<gran>")
        seed, count, gran = (int(p) for p in parts[1:])
        return _cached_random(seed, count, gran)
    if sel.startswith("csv:"):
        return load_tabulated(sel[4:])
    raise ValueError(f"unknown system selector {selector!r}")


@lru_cache(maxsize=16)
def _cached_random(seed: int, count: int, gran: int) -> StepSystem:
    return gram_schmidt_random(seed, count, gran)
