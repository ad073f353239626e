import pytest

from skhpot.model import PotentialParams, QuantumNumbers, UNIT_PRESETS
from skhpot.wavefunction import build_bound_state

SWEEP_ALPHAS = tuple(round(0.1 * i, 1) for i in range(1, 10))


@pytest.fixture(scope="session")
def hydrogenic():
    """Coulomb limit with Bohr radius a = 2 under the table preset."""
    return build_bound_state(
        PotentialParams(-1.0, 0.0, 0.0, 1e-8), QuantumNumbers(0, 0), UNIT_PRESETS["table12"]
    )


@pytest.fixture(scope="session")
def sweep_states():
    """Lazy cache of sweep-family states keyed by (preset, sign, alpha, n).

    The full 18-point families are expensive; building through one shared
    cache keeps the whole suite to a single construction per state.
    """
    cache = {}

    def get(preset: str, sign: str, alpha: float, n: int):
        key = (preset, sign, alpha, n)
        if key not in cache:
            params = PotentialParams(3.0, 5.0, 10.0, alpha)
            if sign == "mirrored":
                params = params.mirrored()
            cache[key] = build_bound_state(params, QuantumNumbers(n, 0), UNIT_PRESETS[preset])
        return cache[key]

    return get
