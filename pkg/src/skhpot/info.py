"""Shannon entropies and Fisher information in position and momentum space.

All measures operate on l = m = 0 bound states.  Entropies default to the
three-dimensional spherically symmetric convention (densities u^2/(4 pi r^2)
and w^2/(4 pi p^2), uncertainty bound 3(1 + ln pi)); the one-dimensional
reduced-density variant is available for diagnosis via dimension=1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .model import NoBoundState, PotentialParams, QuantumNumbers, UnitSystem
from .quadrature import DEFAULT_POLICY, QuadraturePolicy, integrate_finite
from .wavefunction import BoundState, build_bound_state

__all__ = [
    "InfoRecord",
    "NotNormalized",
    "BBM_BOUND_3D",
    "BBM_BOUND_1D",
    "FISHER_PRODUCT_BOUND",
    "shannon_position",
    "shannon_momentum",
    "fisher_position",
    "fisher_momentum",
    "bbm_check",
    "fisher_product_check",
    "info_record",
    "info_sweep",
]

BBM_BOUND_3D = 3.0 * (1.0 + math.log(math.pi))  # 6.43418965754820
BBM_BOUND_1D = 1.0 + math.log(math.pi)
FISHER_PRODUCT_BOUND = 36.0

_BBM_SLACK = 1e-9
_NORM_GUARD = 1e-5  # states further than this from unit norm are rejected
_LOG_FLOOR = 1e-300


class NotNormalized(ValueError):
    """Information measures require unit-normalized densities."""


@dataclass(frozen=True)
class InfoRecord:
    """One row of an information-measure sweep (NaNs when unbound)."""

    alpha: float
    n: int
    S_r: float
    S_p: float
    S_t: float
    I_r: float
    I_p: float
    product: float
    bbm_ok: bool
    fisher_ok: bool
    bound: bool = True


def _entropy_integral(density_of, weight_of, lo: float, hi: float,
                      policy: QuadraturePolicy, floor: float) -> float:
    """-int weight * ln(density) with 0 ln 0 -> 0."""

    def integrand(x):
        w = weight_of(x)
        d = density_of(x)
        out = np.zeros_like(w)
        ok = (w > floor) & (d > floor)
        out[ok] = w[ok] * np.log(d[ok])
        return out

    return -integrate_finite(integrand, lo, hi, policy)


def _require_s_state(state: BoundState):
    if state.qn.l != 0 or state.qn.m != 0:
        raise ValueError(f"information measures are defined here for l = m = 0, got {state.qn}")


def shannon_position(state: BoundState, dimension: int = 3,
                     policy: QuadraturePolicy | None = None, floor: float = _LOG_FLOOR) -> float:
    """Position-space Shannon entropy in nats.

    dimension=3: -int u^2 ln(u^2/(4 pi r^2)) dr; dimension=1 uses the reduced
    density u^2 itself.
    """
    _require_s_state(state)
    policy = policy or state.policy
    if dimension == 3:
        dens = lambda r: state.u(r) ** 2 / (4.0 * math.pi * np.asarray(r) ** 2)
    elif dimension == 1:
        dens = lambda r: state.u(r) ** 2
    else:
        raise ValueError(f"dimension must be 1 or 3, got {dimension}")
    return _entropy_integral(dens, lambda r: state.u(r) ** 2, 0.0, state.r_extent(),
                             policy, floor)


def shannon_momentum(state: BoundState, dimension: int = 3,
                     policy: QuadraturePolicy | None = None, floor: float = _LOG_FLOOR) -> float:
    """Momentum-space Shannon entropy in nats (l = 0 only)."""
    _require_s_state(state)
    policy = policy or state.policy
    p_top = state.momentum_cutoff() * state.units.hbar

    def w2(p):
        return state.w(np.asarray(p, dtype=float)) ** 2

    if dimension == 3:
        dens = lambda p: w2(p) / (4.0 * math.pi * np.asarray(p) ** 2)
    elif dimension == 1:
        dens = w2
    else:
        raise ValueError(f"dimension must be 1 or 3, got {dimension}")
    return _entropy_integral(dens, w2, 0.0, p_top, policy, floor)


def fisher_position(state: BoundState) -> float:
    """I_r = 4 <p^2> - 2 (2l+1) |m| <r^-2>; the m = 0 term vanishes."""
    correction = 2.0 * (2 * state.qn.l + 1) * abs(state.qn.m)
    val = 4.0 * state.p_moment2()
    if correction:
        val -= correction * state.r_moment(-2)
    return val


def fisher_momentum(state: BoundState) -> float:
    """I_p = 4 <r^2> - 2 (2l+1) |m| <p^-2>; the m = 0 term vanishes."""
    correction = 2.0 * (2 * state.qn.l + 1) * abs(state.qn.m)
    val = 4.0 * state.r_moment(2)
    if correction:
        val -= correction * state.p_moment_neg2()
    return val


def bbm_check(record: InfoRecord, dimension: int = 3) -> bool:
    """Entropic uncertainty bound S_r + S_p >= D (1 + ln pi)."""
    bound = BBM_BOUND_3D if dimension == 3 else BBM_BOUND_1D
    return bool(record.S_t >= bound - _BBM_SLACK)


def fisher_product_check(record: InfoRecord) -> bool:
    """Fisher product bound I_r I_p > 36."""
    return bool(record.product > FISHER_PRODUCT_BOUND)


def info_record(state: BoundState, dimension: int = 3,
                policy: QuadraturePolicy | None = None) -> InfoRecord:
    """All measures for one state, with normalization guards."""
    _require_s_state(state)
    r_resid = state.position_norm_residual()
    if abs(r_resid) > _NORM_GUARD:
        raise NotNormalized(
            f"position density integrates to {1.0 + r_resid:.8g}, not 1; "
            "refusing to report information measures"
        )
    p_resid = state.momentum_norm() - 1.0
    if abs(p_resid) > _NORM_GUARD:
        raise NotNormalized(
            f"momentum density integrates to {1.0 + p_resid:.8g}, not 1; "
            "refusing to report information measures"
        )
    s_r = shannon_position(state, dimension, policy)
    s_p = shannon_momentum(state, dimension, policy)
    i_r = fisher_position(state)
    i_p = fisher_momentum(state)
    rec = InfoRecord(
        alpha=state.params.alpha,
        n=state.qn.n,
        S_r=s_r,
        S_p=s_p,
        S_t=s_r + s_p,
        I_r=i_r,
        I_p=i_p,
        product=i_r * i_p,
        bbm_ok=False,
        fisher_ok=False,
    )
    return replace(rec, bbm_ok=bbm_check(rec, dimension), fisher_ok=fisher_product_check(rec))


def info_sweep(params: PotentialParams, units: UnitSystem, n_list, alpha_grid,
               dimension: int = 3,
               policy: QuadraturePolicy = DEFAULT_POLICY) -> list[InfoRecord]:
    """One InfoRecord per (alpha, n) grid point; unbound points are flagged,
    not fabricated."""
    records = []
    for alpha in alpha_grid:
        p = PotentialParams(params.V0, params.V1, params.V2, float(alpha))
        for n in n_list:
            try:
                state = build_bound_state(p, QuantumNumbers(int(n), 0), units, policy)
                records.append(info_record(state, dimension, policy))
            except NoBoundState:
                records.append(InfoRecord(
                    alpha=float(alpha), n=int(n),
                    S_r=math.nan, S_p=math.nan, S_t=math.nan,
                    I_r=math.nan, I_p=math.nan, product=math.nan,
                    bbm_ok=False, fisher_ok=False, bound=False,
                ))
    return records
