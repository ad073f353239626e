"""Potential, coefficient map, closed-form energy spectrum and reductions.

The potential is V(r) = (V0/r + (V1/r) e^{alpha r} + V2/r^2) e^{-alpha r};
note the V1 exponentials cancel, so V1/r survives unscreened.  Energies come
from the closed-form eigenvalue expression of the exponentially approximated
radial equation; the ODE itself is never integrated.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

__all__ = [
    "UnitSystem",
    "PotentialParams",
    "QuantumNumbers",
    "CoefficientSet",
    "BoundDiagnostic",
    "NoBoundState",
    "UNIT_PRESETS",
    "potential_value",
    "coefficients",
    "energy",
    "energy_screened_kratzer",
    "energy_hellmann",
    "bound_state_check",
    "spectroscopic_to_qn",
    "qn_to_spectroscopic",
]


class NoBoundState(ValueError):
    """The requested level is not a normalizable bound state."""


@dataclass(frozen=True)
class UnitSystem:
    """Reduced mass, reduced Planck constant and Boltzmann constant."""

    mu: float
    hbar: float = 1.0
    kB: float = 1.0

    def __post_init__(self):
        if self.mu <= 0.0 or self.hbar <= 0.0 or self.kB <= 0.0:
            raise ValueError("unit constants must be strictly positive")

    @property
    def kappa(self) -> float:
        """2 mu / hbar^2, the coefficient multiplying (E - V) in the radial equation."""
        return 2.0 * self.mu / (self.hbar * self.hbar)


# "table12": hbar^2/(2 mu) = 1, the convention that reproduces the bundled
# energy reference tables.  "atomic": mu = hbar = 1, used for the
# information-measure sweeps.
UNIT_PRESETS = {
    "table12": UnitSystem(mu=0.5, hbar=1.0),
    "atomic": UnitSystem(mu=1.0, hbar=1.0),
}


@dataclass(frozen=True)
class PotentialParams:
    """The four potential parameters; alpha is the screening rate (1/length)."""

    V0: float
    V1: float
    V2: float
    alpha: float

    def __post_init__(self):
        if not self.alpha > 0.0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    def mirrored(self) -> "PotentialParams":
        """The attractive counterpart: Coulombic coefficients sign-flipped."""
        return PotentialParams(-self.V0, -self.V1, self.V2, self.alpha)


@dataclass(frozen=True)
class QuantumNumbers:
    n: int
    l: int = 0
    m: int = 0

    def __post_init__(self):
        if self.n < 0 or self.l < 0:
            raise ValueError(f"quantum numbers must satisfy n >= 0, l >= 0, got {self}")
        if abs(self.m) > self.l:
            raise ValueError(f"|m| must not exceed l, got {self}")


@dataclass(frozen=True)
class CoefficientSet:
    """Coefficients of the reduced equation in the variable z = exp(-alpha r)."""

    eps2: float
    A: float
    B: float
    C: float
    G: float
    sigma: float
    P1: float
    P2: float


def potential_value(params: PotentialParams, r):
    """V(r) for r > 0; accepts scalars or arrays."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise ValueError("potential is defined for r > 0 only")
    v = (params.V0 / r + params.V2 / r**2) * np.exp(-params.alpha * r) + params.V1 / r
    return v if v.ndim else float(v)


def _sigma(params: PotentialParams, qn: QuantumNumbers, units: UnitSystem) -> float:
    disc = (2.0 * qn.l + 1.0) ** 2 + 4.0 * units.kappa * params.V2
    if disc < 0.0:
        raise NoBoundState(
            f"V2 = {params.V2} is attractive enough to collapse the effective core "
            f"(discriminant {disc} < 0)"
        )
    return 0.5 * (1.0 + math.sqrt(disc))


def _bracket(params: PotentialParams, qn: QuantumNumbers, units: UnitSystem) -> tuple[float, float]:
    """The quantization ratio (P1 - (n+sigma)^2) / (2 (n+sigma)) and sigma."""
    sig = _sigma(params, qn, units)
    kappa = units.kappa
    ll = qn.l * (qn.l + 1.0)
    p1 = -(kappa * (params.V0 + params.V1) / params.alpha + ll)
    rho = qn.n + sig
    return (p1 - rho * rho) / (2.0 * rho), sig


def energy(params: PotentialParams, qn: QuantumNumbers, units: UnitSystem,
           require_bound: bool = False) -> float:
    """Closed-form level energy E_{nl}.

    With require_bound=True, raises NoBoundState unless the level passes
    bound_state_check (needed before constructing a wavefunction); by default
    the formula value is returned as-is so that reference tables containing
    non-normalizable rows can still be reproduced.
    """
    br, _ = _bracket(params, qn, units)
    ll = qn.l * (qn.l + 1.0)
    scale = params.alpha ** 2 / units.kappa  # hbar^2 alpha^2 / (2 mu)
    e = params.alpha * params.V1 + scale * ll - scale * br * br
    if require_bound:
        diag = bound_state_check(params, qn, units)
        if not diag.bound:
            raise NoBoundState(
                f"level n={qn.n}, l={qn.l} is not a normalizable bound state "
                f"(E = {diag.energy:.6g}, eta = {diag.eta:.6g}, G = {diag.bigG:.6g})"
            )
    return e


def energy_screened_kratzer(params: PotentialParams, qn: QuantumNumbers,
                            units: UnitSystem) -> float:
    """Reduction with V1 = 0: the screened Kratzer spectrum, as printed."""
    if params.V1 != 0.0:
        raise ValueError("screened Kratzer reduction requires V1 = 0")
    kappa = units.kappa
    ll = qn.l * (qn.l + 1.0)
    rho = qn.n + 0.5 + math.sqrt(kappa * params.V2 + ll + 0.25)
    num = -(kappa * params.V0 / params.alpha + ll) - rho * rho
    br = num / (2.0 * rho)
    scale = params.alpha ** 2 / kappa
    return scale * ll - scale * br * br


def energy_hellmann(params: PotentialParams, qn: QuantumNumbers, units: UnitSystem) -> float:
    """Reduction with V2 = 0: the Hellmann spectrum, as printed."""
    if params.V2 != 0.0:
        raise ValueError("Hellmann reduction requires V2 = 0")
    kappa = units.kappa
    ll = qn.l * (qn.l + 1.0)
    rho = qn.n + 0.5 + math.sqrt(ll + 0.25)
    num = -(kappa * (params.V0 + params.V1) / params.alpha + ll) - rho * rho
    br = num / (2.0 * rho)
    scale = params.alpha ** 2 / kappa
    return params.alpha * params.V1 + scale * ll - scale * br * br


def coefficients(params: PotentialParams, qn: QuantumNumbers, units: UnitSystem,
                 E: float) -> CoefficientSet:
    """All coefficients of the reduced equation at the given energy."""
    kappa = units.kappa
    alpha = params.alpha
    ll = qn.l * (qn.l + 1.0)
    eps2 = -kappa * E / alpha**2
    A = -kappa * params.V0 / alpha
    B = kappa * params.V1 / alpha - kappa * params.V2 - kappa * params.V0 / alpha
    C = -(kappa * params.V1 / alpha + ll)
    G = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * (A - B - C)))
    sig = _sigma(params, qn, units)
    P1 = -(kappa * (params.V0 + params.V1) / alpha + ll)
    P2 = alpha * params.V1 + (alpha**2 / kappa) * ll
    return CoefficientSet(eps2=eps2, A=A, B=B, C=C, G=G, sigma=sig, P1=P1, P2=P2)


@dataclass(frozen=True)
class BoundDiagnostic:
    """Normalizability report for one level.

    eta is the (non-negative) exponent sqrt(eps^2 - C) that governs the
    large-r falloff of the closed-form eigenfunction; eta_signed is the
    quantization ratio (P1 - (n+sigma)^2)/(2(n+sigma)), whose sign records
    whether the underlying polynomial-termination condition is met with a
    positive exponent.  |eta_signed| = eta identically.
    """

    energy: float
    eps2: float
    eta: float
    eta_signed: float
    bigG: float
    sigma: float
    decay_rate: float
    bound: bool


def bound_state_check(params: PotentialParams, qn: QuantumNumbers,
                      units: UnitSystem) -> BoundDiagnostic:
    """Evaluate E, eps^2, eta and G and decide normalizability."""
    e = energy(params, qn, units)
    co = coefficients(params, qn, units, e)
    eta2 = co.eps2 - co.C
    eta = math.sqrt(eta2) if eta2 > 0.0 else 0.0
    br, _ = _bracket(params, qn, units)
    bound = (e < 0.0) and (eta > 0.0) and (co.G > 0.5)
    return BoundDiagnostic(
        energy=e,
        eps2=co.eps2,
        eta=eta,
        eta_signed=br,
        bigG=co.G,
        sigma=co.sigma,
        decay_rate=params.alpha * eta,
        bound=bound,
    )


_LABEL_RE = re.compile(r"^(\d+)([spdf])$")
_L_OF_LETTER = {"s": 0, "p": 1, "d": 2, "f": 3}
_LETTER_OF_L = {v: k for k, v in _L_OF_LETTER.items()}


def spectroscopic_to_qn(label: str) -> QuantumNumbers:
    """Parse a label like "3d" into quantum numbers (n = N - l - 1, m = 0)."""
    m = _LABEL_RE.match(label.strip())
    if m is None:
        raise ValueError(f"malformed state label {label!r}: expected e.g. '1s', '3d'")
    big_n = int(m.group(1))
    l = _L_OF_LETTER[m.group(2)]
    if big_n < 1:
        raise ValueError(f"malformed state label {label!r}: principal number must be >= 1")
    if l >= big_n:
        raise ValueError(f"state label {label!r} has l = {l} >= N = {big_n}")
    return QuantumNumbers(n=big_n - l - 1, l=l, m=0)


def qn_to_spectroscopic(qn: QuantumNumbers) -> str:
    """Inverse of spectroscopic_to_qn where a letter exists; else 'n<l>' form."""
    letter = _LETTER_OF_L.get(qn.l)
    if letter is None:
        return f"(n={qn.n},l={qn.l})"
    return f"{qn.n + qn.l + 1}{letter}"
