"""Normalized bound-state wavefunctions and everything derived from them.

A BoundState evaluates the closed-form reduced radial function

    u(r) = N * z^eta * (1-z)^G * P_n^{(2 eta, 2G-1)}(1 - 2z),   z = exp(-alpha r)

with N fixed by numerical normalization (the closed-form constant is kept as
a diagnostic), its analytic derivative, position/momentum densities and the
expectation values feeding the information measures.  Momentum-space work is
restricted to l = 0, where the transform is a sine transform.

States are immutable after construction apart from internal evaluation
caches; sharing one across threads that only read is safe once the momentum
grid has been forced (call momentum_cutoff() first).
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from . import specfun
from .model import (
    NoBoundState,
    PotentialParams,
    QuantumNumbers,
    UnitSystem,
    bound_state_check,
    coefficients,
    energy,
)
from .quadrature import (
    DEFAULT_POLICY,
    QuadraturePolicy,
    composite_panels,
    gauss_legendre_rule,
    integrate_finite,
)

__all__ = [
    "BoundState",
    "UnsupportedL",
    "build_bound_state",
    "u_of_r",
    "u_prime_of_r",
    "density_position",
    "density_reduced",
    "momentum_w",
    "density_momentum",
    "expectation_r_power",
    "expectation_p2",
    "expectation_p2_momentum",
    "expectation_p_neg2",
]

_FOUR_PI = 4.0 * math.pi

# momentum tail is extended until the top octave of |w|^2 holds less than
# this fraction of the total
_TAIL_FRACTION = 1e-10


class UnsupportedL(ValueError):
    """Momentum-space machinery exists for l = 0 only."""


def _log1mz(alpha_r: np.ndarray) -> np.ndarray:
    """log(1 - exp(-alpha r)), stable for tiny alpha r."""
    return np.log(-np.expm1(-alpha_r))


class BoundState:
    """One solved level.  Construct via build_bound_state()."""

    def __init__(self, params: PotentialParams, qn: QuantumNumbers, units: UnitSystem,
                 policy: QuadraturePolicy = DEFAULT_POLICY):
        diag = bound_state_check(params, qn, units)
        if not diag.bound:
            raise NoBoundState(
                f"n={qn.n}, l={qn.l} with {params} is not bound "
                f"(E = {diag.energy:.6g}, eta = {diag.eta:.6g}, G = {diag.bigG:.6g})"
            )
        self.params = params
        self.qn = qn
        self.units = units
        self.policy = policy
        self.energy = diag.energy
        self.eta = diag.eta
        self.bigG = diag.bigG
        self.sigma = diag.sigma
        self.coeffs = coefficients(params, qn, units, diag.energy)
        self.decay_rate = diag.decay_rate

        norm_sq = integrate_finite(
            lambda r: self._u_unnorm(r) ** 2, 0.0, self.r_extent(), policy
        )
        self.norm_numeric = 1.0 / math.sqrt(norm_sq)
        self.norm_closed_form_log = self._closed_form_norm_log()
        self.norm_closed_form = (
            math.exp(self.norm_closed_form_log)
            if self.norm_closed_form_log < 709.0
            else math.inf
        )

        self._mom_top: Optional[float] = None  # momentum cutoff, wavenumber units
        self._mom_grids: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        self._w_cache: dict[float, float] = {}

    # -- position space ------------------------------------------------

    def r_extent(self) -> float:
        """Radius beyond which u^2 is below tail_cut relative to its peak."""
        alpha, eta, G = self.params.alpha, self.eta, self.bigG
        r_peak = math.log1p(G / eta) / alpha  # exact for n = 0, good scale otherwise
        return max(50.0 / self.decay_rate,
                   r_peak + 0.5 * math.log(1.0 / self.policy.tail_cut) / self.decay_rate)

    def _u_unnorm(self, r):
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        r = np.atleast_1d(r)
        out = np.zeros_like(r)
        pos = r > 0.0
        ar = self.params.alpha * r[pos]
        x = -np.expm1(math.log(2.0) - ar)  # 1 - 2 exp(-alpha r), stable near r = 0
        p = specfun.jacobi(self.qn.n, 2.0 * self.eta, 2.0 * self.bigG - 1.0, x)
        out[pos] = np.exp(-self.eta * ar + self.bigG * _log1mz(ar)) * p
        return out[0] if scalar else out

    def u(self, r):
        """Normalized reduced radial wavefunction; u(0) = 0."""
        if np.any(np.asarray(r) < 0.0):
            raise ValueError("u(r) is defined for r >= 0")
        return self.norm_numeric * self._u_unnorm(r)

    def u_prime(self, r):
        """Analytic du/dr for r > 0 (chain rule through z = exp(-alpha r))."""
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0.0):
            raise ValueError("u'(r) is defined for r > 0")
        scalar = r.ndim == 0
        r = np.atleast_1d(r)
        alpha, eta, G = self.params.alpha, self.eta, self.bigG
        a, b = 2.0 * eta, 2.0 * G - 1.0
        ar = alpha * r
        l1m = _log1mz(ar)
        x = -np.expm1(math.log(2.0) - ar)
        p = specfun.jacobi(self.qn.n, a, b, x)
        dp = specfun.jacobi_derivative(self.qn.n, a, b, x)
        term = (
            -eta * np.exp(eta * -ar + G * l1m) * p
            + G * np.exp((eta + 1.0) * -ar + (G - 1.0) * l1m) * p
            + 2.0 * np.exp((eta + 1.0) * -ar + G * l1m) * dp
        )
        out = self.norm_numeric * alpha * term
        return out[0] if scalar else out

    def reduced_density(self, r):
        """u(r)^2, the radial probability density."""
        return self.u(r) ** 2

    def density(self, r):
        """Full 3D probability density u^2/(4 pi r^2) at l = m = 0."""
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0.0):
            raise ValueError("density is defined for r > 0")
        return self.u(r) ** 2 / (_FOUR_PI * r**2)

    def _closed_form_norm_log(self) -> float:
        lg = specfun.ln_gamma
        n, G, eta = self.qn.n, self.bigG, self.eta
        s = (
            math.log(2.0 * self.params.alpha)
            + lg(n + 1.0)
            + lg(1.0 + n + 2.0 * G + 2.0 * eta)
            + lg(1.0 + 2.0 * n + 2.0 * G + 2.0 * eta)
            - (1.0 + 2.0 * G + 2.0 * eta) * math.log(2.0)
            - lg(1.0 + n + 2.0 * eta)
            - lg(1.0 + n + 2.0 * G)
        )
        return 0.5 * s

    # -- expectation values ---------------------------------------------

    def r_moment(self, k: int) -> float:
        """<r^k> for k in {-2, -1, 1, 2}."""
        if k not in (-2, -1, 1, 2):
            raise ValueError(f"supported moments are r^k with k in {{-2,-1,1,2}}, got {k}")
        return integrate_finite(
            lambda r: np.where(r > 0.0, r, 1.0) ** k * self.u(r) ** 2,
            0.0, self.r_extent(), self.policy,
        )

    def p_moment2(self) -> float:
        """<p^2> = hbar^2 int u'(r)^2 dr (position route, l = 0 form)."""
        # Gauss nodes are strictly interior, so u' is never evaluated at r = 0
        val = integrate_finite(
            lambda r: self.u_prime(r) ** 2, 0.0, self.r_extent(), self.policy
        )
        return self.units.hbar**2 * val

    def position_norm_residual(self) -> float:
        """Recomputed int u^2 dr minus one (diagnostic)."""
        return integrate_finite(lambda r: self.u(r) ** 2, 0.0, self.r_extent(), self.policy) - 1.0

    # -- momentum space ---------------------------------------------------

    def _require_l0(self):
        if self.qn.l != 0:
            raise UnsupportedL(
                f"momentum-space quantities are implemented for l = 0 only, got l = {self.qn.l}"
            )

    def _build_grid(self, octave: int) -> tuple[np.ndarray, np.ndarray]:
        """Composite nodes and u-weighted weights for k up to mom_top/2^octave.

        A 64-point Gauss panel integrates several full oscillation periods at
        machine precision, so the batch grids use 4 periods per panel; the
        public sine_transform keeps its stricter quarter-period contract.
        """
        k_top = self._mom_top / 2.0**octave
        h = min(8.0 * math.pi / k_top, 2.0 / self.decay_rate)
        x, w = composite_panels(0.0, self.r_extent(), h, self.policy.panel_order)
        return x, w * self.u(x)

    def _grid_for(self, k: float) -> tuple[np.ndarray, np.ndarray]:
        octave = 0
        if k > 0.0:
            octave = min(24, max(0, int(math.floor(math.log2(self._mom_top / k)))))
        grid = self._mom_grids.get(octave)
        if grid is None:
            grid = self._build_grid(octave)
            self._mom_grids[octave] = grid
        return grid

    def _w_tilde_batch(self, k: np.ndarray) -> np.ndarray:
        """Unitary sine transform of u at wavenumbers k (cached)."""
        out = np.empty_like(k)
        missing: dict[int, list[int]] = {}
        for i, ki in enumerate(k):
            cached = self._w_cache.get(float(ki))
            if cached is not None:
                out[i] = cached
            elif ki == 0.0:
                out[i] = 0.0
            else:
                octave = 0
                if ki > 0.0:
                    octave = min(24, max(0, int(math.floor(math.log2(self._mom_top / ki)))))
                missing.setdefault(octave, []).append(i)
        pref = math.sqrt(2.0 / math.pi)
        for octave, idx in missing.items():
            grid = self._mom_grids.get(octave)
            if grid is None:
                grid = self._build_grid(octave)
                self._mom_grids[octave] = grid
            x, wu = grid
            kk = k[idx]
            # chunk the sin matrix to bound memory
            max_rows = max(1, int(2**24 // max(1, x.size)))
            for s in range(0, kk.size, max_rows):
                block = kk[s:s + max_rows]
                vals = pref * (np.sin(np.outer(block, x)) @ wu)
                for j, v in zip(idx[s:s + max_rows], vals):
                    out[j] = v
                    self._w_cache[float(k[j])] = float(v)
        return out

    def momentum_cutoff(self) -> float:
        """Wavenumber cutoff beyond which the omitted |w|^2 tail is < 1e-10."""
        self._require_l0()
        if self._mom_top is not None:
            return self._mom_top
        k_top = max(16.0 * self.decay_rate, 8.0 * self.params.alpha * self.bigG, 8.0)
        for _ in range(16):
            self._mom_top = k_top
            self._mom_grids.clear()
            self._w_cache.clear()
            # int w~^2 dk = 1 for a normalized state, so an absolute bound on
            # the top-octave mass is an omitted-tail fraction directly
            ks = np.geomspace(0.5 * k_top, k_top, 33)
            w2max = float(np.max(self._w_tilde_batch(ks) ** 2))
            if w2max * 0.5 * k_top <= _TAIL_FRACTION:
                return k_top
            k_top *= 2.0
        raise RuntimeError("momentum tail failed to decay; cutoff search exhausted")

    def w(self, p):
        """Reduced momentum wavefunction w(p) (l = 0).

        Unit-faithful form of the sine transform: w(p) = w~(p/hbar)/sqrt(hbar)
        with w~ the unitary transform of u; for hbar = 1 this is
        sqrt(2/pi) int u(r) sin(p r) dr.
        """
        self._require_l0()
        p = np.asarray(p, dtype=float)
        if np.any(p <= 0.0):
            raise ValueError("w(p) is defined for p > 0")
        self.momentum_cutoff()
        scalar = p.ndim == 0
        k = np.atleast_1d(p) / self.units.hbar
        k_max = float(k.max())
        if k_max > self._mom_top:
            # caller went past the established cutoff; widen so the
            # quarter-period panel rule still holds at the largest k
            self._mom_top = 2.0 ** math.ceil(math.log2(k_max / self._mom_top)) * self._mom_top
            self._mom_grids.clear()
            self._w_cache.clear()
        vals = self._w_tilde_batch(k) / math.sqrt(self.units.hbar)
        return float(vals[0]) if scalar else vals

    def momentum_density(self, p):
        """Full 3D momentum density w^2/(4 pi p^2)."""
        p = np.asarray(p, dtype=float)
        return self.w(p) ** 2 / (_FOUR_PI * p**2)

    def momentum_norm(self) -> float:
        """int_0^inf w(p)^2 dp (should be 1)."""
        k_top = self.momentum_cutoff()
        f = lambda k: self._w_tilde_batch(np.asarray(k, dtype=float)) ** 2
        return integrate_finite(f, 0.0, k_top, self.policy)

    def p_moment2_momentum(self) -> float:
        """<p^2> via the momentum density (cross-check route)."""
        k_top = self.momentum_cutoff()
        f = lambda k: np.asarray(k) ** 2 * self._w_tilde_batch(np.asarray(k, dtype=float)) ** 2
        return self.units.hbar**2 * integrate_finite(f, 0.0, k_top, self.policy)

    def p_moment_neg2(self) -> float:
        """<p^-2> via the momentum density (l = 0 only)."""
        k_top = self.momentum_cutoff()

        def f(k):
            k = np.asarray(k, dtype=float)
            w2 = self._w_tilde_batch(k) ** 2
            return np.where(k > 0.0, w2 / np.where(k > 0.0, k, 1.0) ** 2, 0.0)

        return integrate_finite(f, 0.0, k_top, self.policy) / self.units.hbar**2


def build_bound_state(params: PotentialParams, qn: QuantumNumbers, units: UnitSystem,
                      policy: QuadraturePolicy = DEFAULT_POLICY) -> BoundState:
    """Solve, normalize and wrap one level; raises NoBoundState if unbound."""
    return BoundState(params, qn, units, policy)


# spec-shaped functional aliases

def u_of_r(state: BoundState, r):
    return state.u(r)


def u_prime_of_r(state: BoundState, r):
    return state.u_prime(r)


def density_position(state: BoundState, r):
    return state.density(r)


def density_reduced(state: BoundState, r):
    return state.reduced_density(r)


def momentum_w(state: BoundState, p):
    return state.w(p)


def density_momentum(state: BoundState, p):
    return state.momentum_density(p)


def expectation_r_power(state: BoundState, k: int) -> float:
    return state.r_moment(k)


def expectation_p2(state: BoundState) -> float:
    return state.p_moment2()


def expectation_p2_momentum(state: BoundState) -> float:
    return state.p_moment2_momentum()


def expectation_p_neg2(state: BoundState) -> float:
    return state.p_moment_neg2()
