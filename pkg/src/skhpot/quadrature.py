"""Numerical integration backends.

Fixed Gauss-Legendre rules, a globally adaptive panel scheme on finite
intervals, semi-infinite integrals with exponential tail truncation, and a
period-limited sine transform for momentum-space work.  Integrands must be
vectorized (ndarray in, ndarray out).  Everything is deterministic: identical
inputs and policy produce bit-identical results.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuadraturePolicy",
    "NonConvergence",
    "gauss_legendre_rule",
    "integrate_finite",
    "integrate_semi_infinite",
    "sine_transform",
]

# values below this are treated as exact zeros, which keeps x*log(x)-type
# integrands free of underflow noise
UNDERFLOW_FLOOR = 1e-300

_MIN_ORDER = 2
_MAX_ORDER = 256


@dataclass(frozen=True)
class QuadraturePolicy:
    """Reproducibility contract for every integral in the package."""

    panel_order: int = 64
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_panels: int = 4096
    tail_cut: float = 1e-16

    def __post_init__(self):
        if self.panel_order < _MIN_ORDER:
            raise ValueError(f"panel_order must be >= {_MIN_ORDER}, got {self.panel_order}")
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0 or self.tail_cut <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.max_panels < 1:
            raise ValueError("max_panels must be >= 1")


DEFAULT_POLICY = QuadraturePolicy()


class NonConvergence(RuntimeError):
    """Raised when the panel budget is exhausted; carries the best estimate."""

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(f"{message} (estimate {estimate:.17g}, error bound {error_bound:.3g})")
        self.estimate = estimate
        self.error_bound = error_bound


_rule_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_legendre_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]; cached per order."""
    if not _MIN_ORDER <= order <= _MAX_ORDER:
        raise ValueError(f"order must lie in [{_MIN_ORDER}, {_MAX_ORDER}], got {order}")
    cached = _rule_cache.get(order)
    if cached is None:
        nodes, weights = np.polynomial.legendre.leggauss(order)
        # symmetrize so nodes come in exact +- pairs
        nodes = 0.5 * (nodes - nodes[::-1])
        weights = 0.5 * (weights + weights[::-1])
        nodes.setflags(write=False)
        weights.setflags(write=False)
        cached = (nodes, weights)
        _rule_cache[order] = cached
    return cached


def _eval_clean(f, x: np.ndarray) -> np.ndarray:
    y = np.asarray(f(x), dtype=float)
    if y.shape != x.shape:
        raise ValueError("integrand must return an array matching its input shape")
    y = np.where(np.abs(y) < UNDERFLOW_FLOOR, 0.0, y)
    return y


def _panel_estimates(f, a: float, mid: float, b: float, nodes, weights):
    """One call evaluating the two half-panels of [a, b]."""
    h1 = 0.5 * (mid - a)
    h2 = 0.5 * (b - mid)
    x = np.concatenate((a + h1 * (nodes + 1.0), mid + h2 * (nodes + 1.0)))
    y = _eval_clean(f, x)
    n = nodes.size
    left = h1 * float(weights @ y[:n])
    right = h2 * float(weights @ y[n:])
    return left, right


def integrate_finite(f, a: float, b: float, policy: QuadraturePolicy = DEFAULT_POLICY) -> float:
    """Globally adaptive Gauss-Legendre integration of f over [a, b].

    Panels are bisected worst-error-first until the summed two-estimate error
    gauge meets max(rel_tol*|I|, abs_tol).  Raises NonConvergence when
    max_panels is exceeded.
    """
    if not a <= b:
        raise ValueError(f"integration bounds out of order: [{a}, {b}]")
    if a == b:
        return 0.0
    nodes, weights = gauss_legendre_rule(policy.panel_order)

    def refine(lo: float, hi: float, coarse: float):
        mid = 0.5 * (lo + hi)
        left, right = _panel_estimates(f, lo, mid, hi, nodes, weights)
        err = abs(left + right - coarse)
        return mid, left, right, err

    h0 = 0.5 * (b - a)
    coarse0 = h0 * float(weights @ _eval_clean(f, a + h0 * (nodes + 1.0)))
    mid, left, right, err = refine(a, b, coarse0)

    # heap entries: (-err, seq, lo, hi, refined_value, left_half, right_half)
    seq = 0
    heap = [(-err, seq, a, b, left + right, left, right)]
    total = left + right
    total_err = err
    n_panels = 2

    while True:
        tol = max(policy.abs_tol, policy.rel_tol * abs(total))
        if total_err <= tol:
            return total
        if n_panels > policy.max_panels:
            raise NonConvergence("panel budget exhausted", total, total_err)
        neg_err, _, lo, hi, value, lhalf, rhalf = heapq.heappop(heap)
        total -= value
        total_err += neg_err  # neg_err = -err of the popped panel
        mid = 0.5 * (lo + hi)
        for (plo, phi, pc) in ((lo, mid, lhalf), (mid, hi, rhalf)):
            m2, l2, r2, e2 = refine(plo, phi, pc)
            seq += 1
            heapq.heappush(heap, (-e2, seq, plo, phi, l2 + r2, l2, r2))
            total += l2 + r2
            total_err += e2
            n_panels += 2


def _tail_radius(f, decay_rate: float, policy: QuadraturePolicy) -> float:
    """Truncation point for an exponentially decaying integrand on [0, inf)."""
    base = 50.0 / decay_rate
    probe = np.geomspace(base * 1e-6, base, 64)
    vals = np.abs(_eval_clean(f, probe))
    peak = float(vals.max())
    if peak == 0.0:
        return base
    r_peak = float(probe[int(vals.argmax())])
    return max(base, r_peak + math.log(1.0 / policy.tail_cut) / decay_rate)


def integrate_semi_infinite(f, decay_rate: float, policy: QuadraturePolicy = DEFAULT_POLICY) -> float:
    """Integral of f over [0, inf) for integrands bounded by K*exp(-decay_rate*r)."""
    if not decay_rate > 0.0:
        raise ValueError(f"decay_rate must be positive, got {decay_rate}")
    return integrate_finite(f, 0.0, _tail_radius(f, decay_rate, policy), policy)


def composite_panels(a: float, b: float, h_max: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of a uniform composite Gauss-Legendre rule on [a, b]."""
    n_panels = max(1, int(math.ceil((b - a) / h_max)))
    nodes, weights = gauss_legendre_rule(order)
    h = (b - a) / n_panels
    starts = a + h * np.arange(n_panels)
    x = (starts[:, None] + 0.5 * h * (nodes + 1.0)[None, :]).ravel()
    w = np.broadcast_to(0.5 * h * weights, (n_panels, order)).ravel()
    return x, w


def sine_transform(u, decay_rate: float, p: float, policy: QuadraturePolicy = DEFAULT_POLICY) -> float:
    """sqrt(2/pi) * int_0^inf u(r) sin(p r) dr.

    Panel width is capped at a quarter period pi/(2p) and at two decay
    lengths of u, so the fixed composite rule resolves both the oscillation
    and the envelope.
    """
    if not p > 0.0:
        raise ValueError(f"p must be positive, got {p}")
    if not decay_rate > 0.0:
        raise ValueError(f"decay_rate must be positive, got {decay_rate}")
    r_max = _tail_radius(u, decay_rate, policy)
    h = min(0.5 * math.pi / p, 2.0 / decay_rate, r_max)
    x, w = composite_panels(0.0, r_max, h, policy.panel_order)
    y = _eval_clean(u, x)
    return math.sqrt(2.0 / math.pi) * float(np.dot(w, y * np.sin(p * x)))
