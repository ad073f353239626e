"""Rotation-vibrational partition function and derived thermodynamics.

Three mutually validating backends for Z(beta, lambda):

  sum       direct Boltzmann sum over the closed-form levels n = 0..lambda
  integral  the classical-limit integral over rho = n + sigma, by quadrature
  closed    the antiderivative of that integral, evaluated in log-scaled
            arithmetic so huge erfi arguments cannot overflow

The antiderivative of exp(a rho^2 + b/rho^2) used by the closed backend is

  (sqrt(pi)/(4 sqrt(a))) [ e^{+2 sqrt(ab)} erfi(sqrt(a) rho - sqrt(b)/rho)
                         + e^{-2 sqrt(ab)} erfi(sqrt(a) rho + sqrt(b)/rho) ]

which differentiates back to the integrand for a > 0, b >= 0 (the printed
closed form it replaces is dimensionally inconsistent; the integral backend
gates correctness either way).

U and C use five-point central differences of ln Z with one Richardson
refinement for the integral/closed backends; the sum backend differentiates
exactly (Boltzmann-weighted moments), so single-level identities like
U = E_0, C = 0 hold bitwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import PotentialParams, QuantumNumbers, UnitSystem, bound_state_check, energy
from .quadrature import DEFAULT_POLICY, QuadraturePolicy, integrate_finite
from .specfun import LogScaled, erfi_log, logscaled_sum

__all__ = [
    "ThermoInputs",
    "ThermoSeries",
    "BACKENDS",
    "level_energies",
    "partition_sum",
    "partition_integral",
    "partition_closed_form",
    "ln_partition",
    "internal_energy",
    "free_energy",
    "entropy_thermo",
    "heat_capacity",
    "thermo_series",
]

BACKENDS = ("sum", "integral", "closed")


@dataclass(frozen=True)
class ThermoInputs:
    params: PotentialParams
    units: UnitSystem
    l: int
    lambda_max: int
    beta: float

    def __post_init__(self):
        if self.beta <= 0.0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if self.lambda_max < 0 or self.l < 0:
            raise ValueError("lambda_max and l must be non-negative")

    def with_beta(self, beta: float) -> "ThermoInputs":
        return ThermoInputs(self.params, self.units, self.l, self.lambda_max, beta)


def level_energies(params: PotentialParams, units: UnitSystem, l: int,
                   lambda_max: int) -> tuple[list[float], bool]:
    """Level energies n = 0..lambda, truncated at the first unbound level.

    Returns (energies, truncated).  The truncation flag mirrors the direct
    sum's contract: it keeps only the leading run of bound levels.
    """
    energies: list[float] = []
    for n in range(lambda_max + 1):
        diag = bound_state_check(params, QuantumNumbers(n, l), units)
        if not diag.bound:
            return energies, True
        energies.append(diag.energy)
    return energies, False


def _h_coefficients(params: PotentialParams, units: UnitSystem, l: int):
    """H1, H2, H3 and sigma of the classical-limit integrand."""
    kappa = units.kappa
    alpha = params.alpha
    ll = l * (l + 1.0)
    p1 = -(kappa * (params.V0 + params.V1) / alpha + ll)
    p2 = alpha * params.V1 + (alpha**2 / kappa) * ll
    disc = (2.0 * l + 1.0) ** 2 + 4.0 * kappa * params.V2
    sigma = 0.5 * (1.0 + math.sqrt(disc))
    h1 = alpha**2 / (4.0 * kappa)          # hbar^2 alpha^2 / (8 mu)
    h2 = h1 * p1 * p1
    h3 = (alpha**2 / (2.0 * kappa)) * p1 + p2
    return h1, h2, h3, sigma


def partition_sum(inputs: ThermoInputs, shift_energies: bool = True) -> float:
    """Z = sum_{n=0}^{lambda} exp(-beta E_n); truncates at unbound levels."""
    return math.exp(_ln_partition_sum(inputs, shift_energies))


def _ln_partition_sum(inputs: ThermoInputs, shift_energies: bool = True) -> float:
    energies, _ = level_energies(inputs.params, inputs.units, inputs.l, inputs.lambda_max)
    if not energies:
        return -math.inf
    e = np.asarray(energies)
    if shift_energies:
        e0 = float(e[0])
        return -inputs.beta * e0 + math.log(float(np.sum(np.exp(-inputs.beta * (e - e0)))))
    return math.log(float(np.sum(np.exp(-inputs.beta * e))))


def partition_integral(inputs: ThermoInputs, policy: QuadraturePolicy = DEFAULT_POLICY) -> float:
    """Classical-limit Z as a numerical integral over rho in [sigma, lambda+sigma]."""
    h1, h2, h3, sigma = _h_coefficients(inputs.params, inputs.units, inputs.l)
    if inputs.lambda_max == 0:
        return 0.0
    beta = inputs.beta
    lo, hi = sigma, inputs.lambda_max + sigma

    def exponent(rho):
        return beta * (h1 * rho**2 + h2 / rho**2 - h3)

    # the exponent is convex in rho, so its maximum sits at an endpoint;
    # scale it out to keep the integrand within floating range
    m = max(exponent(np.asarray(lo)), exponent(np.asarray(hi)))
    val = integrate_finite(lambda rho: np.exp(exponent(rho) - m), lo, hi, policy)
    return math.exp(m) * val


def _antiderivative_log(rho: float, a: float, b: float) -> LogScaled:
    """Log-scaled antiderivative of exp(a rho^2 + b / rho^2), without the
    sqrt(pi)/(4 sqrt(a)) prefactor."""
    sa, sb = math.sqrt(a), math.sqrt(b)
    cross = 2.0 * sa * sb
    t1 = erfi_log(sa * rho - sb / rho)
    t2 = erfi_log(sa * rho + sb / rho)
    return logscaled_sum([
        LogScaled(t1.sign, t1.log_magnitude + cross),
        LogScaled(t2.sign, t2.log_magnitude - cross),
    ])


def partition_closed_form(inputs: ThermoInputs) -> float:
    """Closed-form Z, overflow-safe.  Raises OverflowError only if even the
    log-domain combination leaves floating range."""
    return math.exp(ln_partition(inputs, "closed"))


def _ln_partition_closed(inputs: ThermoInputs) -> float:
    h1, h2, h3, sigma = _h_coefficients(inputs.params, inputs.units, inputs.l)
    if inputs.lambda_max == 0:
        return -math.inf
    beta = inputs.beta
    a = h1 * beta
    b = h2 * beta
    if not a > 0.0:
        raise ValueError(f"closed form requires H1*beta > 0, got {a}")
    upper = _antiderivative_log(inputs.lambda_max + sigma, a, b)
    lower = _antiderivative_log(sigma, a, b)
    diff = logscaled_sum([upper, LogScaled(-lower.sign, lower.log_magnitude)])
    if diff.sign <= 0:
        raise ValueError("closed-form antiderivative difference is not positive; "
                         "parameters are outside the validated regime")
    ln_z = -h3 * beta + math.log(math.sqrt(math.pi) / (4.0 * math.sqrt(a))) + diff.log_magnitude
    if not math.isfinite(ln_z):
        raise OverflowError("log-domain partition function left floating range")
    return ln_z


def ln_partition(inputs: ThermoInputs, backend: str = "sum") -> float:
    """ln Z under the chosen backend."""
    if backend == "sum":
        return _ln_partition_sum(inputs)
    if backend == "integral":
        z = partition_integral(inputs)
        if z <= 0.0:
            return -math.inf
        return math.log(z)
    if backend == "closed":
        return _ln_partition_closed(inputs)
    raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")


# --- derivatives of ln Z ----------------------------------------------------

_FD_REL_STEP = 1e-3


def _dln_dbeta(fn, beta: float) -> float:
    """First derivative by 5-point central differences, Richardson-refined."""

    def d4(h):
        return (-fn(beta + 2*h) + 8*fn(beta + h) - 8*fn(beta - h) + fn(beta - 2*h)) / (12*h)

    h = _FD_REL_STEP * beta
    if beta - 2*h <= 0.0:
        raise ValueError(f"finite-difference stencil leaves beta > 0 at beta = {beta}")
    c, f = d4(h), d4(0.5*h)
    return (16.0 * f - c) / 15.0


def _d2ln_dbeta2(fn, beta: float) -> float:
    """Second derivative, same scheme."""

    def d4(h):
        return (-fn(beta + 2*h) + 16*fn(beta + h) - 30*fn(beta)
                + 16*fn(beta - h) - fn(beta - 2*h)) / (12*h*h)

    h = _FD_REL_STEP * beta
    if beta - 2*h <= 0.0:
        raise ValueError(f"finite-difference stencil leaves beta > 0 at beta = {beta}")
    c, f = d4(h), d4(0.5*h)
    return (16.0 * f - c) / 15.0


def _boltzmann_moments(inputs: ThermoInputs) -> tuple[float, float]:
    """<E> and <E^2> of the discrete level distribution (sum backend)."""
    energies, _ = level_energies(inputs.params, inputs.units, inputs.l, inputs.lambda_max)
    if not energies:
        raise ValueError("no bound levels to sum over")
    e = np.asarray(energies)
    wts = np.exp(-inputs.beta * (e - e[0]))
    z = float(np.sum(wts))
    e_mean = float(np.sum(wts * e)) / z
    e2_mean = float(np.sum(wts * e * e)) / z
    return e_mean, e2_mean


def internal_energy(inputs: ThermoInputs, backend: str = "sum") -> float:
    """U = -d ln Z / d beta."""
    if backend == "sum":
        return _boltzmann_moments(inputs)[0]
    return -_dln_dbeta(lambda b: ln_partition(inputs.with_beta(b), backend), inputs.beta)


def free_energy(inputs: ThermoInputs, backend: str = "sum") -> float:
    """F = -(1/beta) ln Z."""
    return -ln_partition(inputs, backend) / inputs.beta


def entropy_thermo(inputs: ThermoInputs, backend: str = "sum") -> float:
    """S = kB ln Z - kB beta d ln Z / d beta = kB (ln Z + beta U)."""
    kb = inputs.units.kB
    return kb * (ln_partition(inputs, backend) + inputs.beta * internal_energy(inputs, backend))


def heat_capacity(inputs: ThermoInputs, backend: str = "sum") -> float:
    """C = kB beta^2 d^2 ln Z / d beta^2."""
    kb = inputs.units.kB
    if backend == "sum":
        e_mean, e2_mean = _boltzmann_moments(inputs)
        return kb * inputs.beta**2 * (e2_mean - e_mean * e_mean)
    d2 = _d2ln_dbeta2(lambda b: ln_partition(inputs.with_beta(b), backend), inputs.beta)
    return kb * inputs.beta**2 * d2


@dataclass
class ThermoSeries:
    """Z, U, F, S, C on a beta grid; failed points carry a flag and NaNs."""

    beta_grid: list[float]
    Z: list[float] = field(default_factory=list)
    U: list[float] = field(default_factory=list)
    F: list[float] = field(default_factory=list)
    S: list[float] = field(default_factory=list)
    C: list[float] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)


def thermo_series(params: PotentialParams, units: UnitSystem, l: int, lambda_max: int,
                  beta_grid, backend: str = "sum") -> ThermoSeries:
    """Evaluate all five quantities pointwise on an ascending beta grid."""
    betas = [float(b) for b in beta_grid]
    if any(b <= 0.0 for b in betas) or any(b2 <= b1 for b1, b2 in zip(betas, betas[1:])):
        raise ValueError("beta grid must be strictly positive and ascending")
    series = ThermoSeries(beta_grid=betas)
    for b in betas:
        inp = ThermoInputs(params, units, l, lambda_max, b)
        try:
            z = math.exp(ln_partition(inp, backend))
            series.Z.append(z)
            series.U.append(internal_energy(inp, backend))
            series.F.append(free_energy(inp, backend))
            series.S.append(entropy_thermo(inp, backend))
            series.C.append(heat_capacity(inp, backend))
            series.flags.append("")
        except (ValueError, OverflowError, ArithmeticError) as exc:
            for lst in (series.Z, series.U, series.F, series.S, series.C):
                lst.append(math.nan)
            series.flags.append(str(exc))
    return series
