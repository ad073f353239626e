import math

import numpy as np
import pytest

from skhpot.model import (
    NoBoundState,
    PotentialParams,
    QuantumNumbers,
    UNIT_PRESETS,
    UnitSystem,
    bound_state_check,
    coefficients,
    energy,
    energy_hellmann,
    energy_screened_kratzer,
    potential_value,
    qn_to_spectroscopic,
    spectroscopic_to_qn,
)
from skhpot.refdata import load_energy_table

T12 = UNIT_PRESETS["table12"]
ATOMIC = UNIT_PRESETS["atomic"]


class TestTypes:
    def test_presets(self):
        assert T12.kappa == pytest.approx(1.0)
        assert ATOMIC.kappa == pytest.approx(2.0)

    def test_unit_validation(self):
        with pytest.raises(ValueError):
            UnitSystem(mu=0.0)
        with pytest.raises(ValueError):
            UnitSystem(mu=1.0, hbar=-1.0)

    def test_alpha_must_be_positive(self):
        with pytest.raises(ValueError):
            PotentialParams(1.0, 1.0, 1.0, 0.0)

    def test_quantum_number_domains(self):
        with pytest.raises(ValueError):
            QuantumNumbers(-1, 0)
        with pytest.raises(ValueError):
            QuantumNumbers(0, 1, m=2)

    def test_mirrored(self):
        p = PotentialParams(3.0, 5.0, 10.0, 0.2)
        m = p.mirrored()
        assert (m.V0, m.V1, m.V2, m.alpha) == (-3.0, -5.0, 10.0, 0.2)


class TestPotentialValue:
    def test_zero_potential(self):
        assert potential_value(PotentialParams(0, 0, 0, 0.7), 1.3) == 0.0

    def test_unscreened_coulomb_part(self):
        # the V1 exponentials cancel, so only V1/r survives at large r
        assert potential_value(PotentialParams(0, 5, 0, 0.3), 2.0) == pytest.approx(2.5, rel=1e-15)

    def test_screened_parts(self):
        got = potential_value(PotentialParams(3, 0, 10, 0.5), 1.0)
        assert got == pytest.approx(13.0 * math.exp(-0.5), rel=1e-14)

    def test_domain(self):
        with pytest.raises(ValueError):
            potential_value(PotentialParams(1, 1, 1, 0.5), 0.0)

    def test_vectorized(self):
        r = np.array([0.5, 1.0, 2.0])
        v = potential_value(PotentialParams(1, -1, 2, 0.4), r)
        assert v.shape == r.shape


class TestCoefficients:
    def test_g_equals_sigma_on_random_draws(self):
        rng = np.random.default_rng(5)
        for _ in range(300):
            p = PotentialParams(float(rng.uniform(-5, 5)), float(rng.uniform(-5, 5)),
                                float(rng.uniform(0, 12)), float(rng.uniform(0.001, 1.0)))
            qn = QuantumNumbers(int(rng.integers(0, 4)), int(rng.integers(0, 4)))
            units = T12 if rng.integers(0, 2) else ATOMIC
            co = coefficients(p, qn, units, E=-1.0)
            assert co.G == pytest.approx(co.sigma, rel=1e-12)
            # same identity spelled through the defining combinations
            lhs = 1.0 + 4.0 * (co.A - co.B - co.C)
            rhs = (2 * qn.l + 1) ** 2 + 4.0 * units.kappa * p.V2
            assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_sigma_reduces_to_one(self):
        co = coefficients(PotentialParams(1, 1, 0, 0.1), QuantumNumbers(0, 0), T12, -1.0)
        assert co.sigma == 1.0

    def test_eps2_minus_c_equals_bracket_squared(self):
        p = PotentialParams(3, 5, 10, 0.001)
        qn = QuantumNumbers(0, 0)
        e = energy(p, qn, T12)
        co = coefficients(p, qn, T12, e)
        d = bound_state_check(p, qn, T12)
        assert co.eps2 - co.C == pytest.approx(d.eta_signed**2, rel=1e-9)
        assert co.eps2 == pytest.approx(1166753.487 / 1.0, rel=1e-6)


class TestEnergy:
    @pytest.mark.parametrize("label,alpha,v,expected", [
        ("1s", 0.001, (3, 5, 10), -1.166753487),
        ("1s", 0.01, (3, -5, 10), -0.1133269179),
        ("3d", 0.005, (3, 5, 10), -0.7802135070),
        ("2p", 0.01, (3, -5, 10), -0.1015562500),
    ])
    def test_reference_energies(self, label, alpha, v, expected):
        qn = spectroscopic_to_qn(label)
        p = PotentialParams(*v, alpha)
        assert energy(p, qn, T12) == pytest.approx(expected, abs=1e-6)

    def test_hydrogenic_limit(self):
        e = energy(PotentialParams(-1, 0, 0, 1e-8), QuantumNumbers(0, 0), T12)
        assert e == pytest.approx(-0.25, abs=1e-6)

    def test_require_bound(self):
        # positive-energy reference row: computable, but rejected when asked
        p = PotentialParams(-3, 5, 10, 0.01)
        qn = spectroscopic_to_qn("4s")
        assert energy(p, qn, T12) == pytest.approx(0.01661093440, abs=1e-6)
        with pytest.raises(NoBoundState):
            energy(p, qn, T12, require_bound=True)


class TestSpecialCases:
    def test_hellmann_reference_rows(self):
        p = PotentialParams(-1, -2, 0, 0.001)
        assert energy_hellmann(p, spectroscopic_to_qn("1s"), T12) == pytest.approx(
            -2.250500250, abs=1e-7)
        p5 = PotentialParams(-1, -2, 0, 0.005)
        assert energy_hellmann(p5, spectroscopic_to_qn("2s"), T12) == pytest.approx(
            -0.5650250000, abs=1e-7)
        assert energy_hellmann(p, spectroscopic_to_qn("2p"), T12) == pytest.approx(
            -0.5622502500, abs=1e-7)

    def test_collapse_identities_on_random_draws(self):
        rng = np.random.default_rng(17)
        for _ in range(1000):
            alpha = float(rng.uniform(0.001, 1.0))
            v0 = float(rng.uniform(-5, 5))
            v1 = float(rng.uniform(-5, 5))
            v2 = float(rng.uniform(0, 12))
            qn = QuantumNumbers(int(rng.integers(0, 4)), int(rng.integers(0, 4)))
            units = T12 if rng.integers(0, 2) else ATOMIC
            sk = PotentialParams(v0, 0.0, v2, alpha)
            e = energy(sk, qn, units)
            assert energy_screened_kratzer(sk, qn, units) == pytest.approx(
                e, rel=1e-14, abs=1e-14)
            he = PotentialParams(v0, v1, 0.0, alpha)
            e = energy(he, qn, units)
            assert energy_hellmann(he, qn, units) == pytest.approx(e, rel=1e-14, abs=1e-14)

    def test_reduction_guards(self):
        with pytest.raises(ValueError):
            energy_screened_kratzer(PotentialParams(1, 1, 1, 0.1), QuantumNumbers(0, 0), T12)
        with pytest.raises(ValueError):
            energy_hellmann(PotentialParams(1, 1, 1, 0.1), QuantumNumbers(0, 0), T12)

    def test_yukawa_energies_rise_with_screening(self):
        # V1 = V2 = 0: binding weakens monotonically with alpha
        qn = QuantumNumbers(0, 0)
        es = [energy_screened_kratzer(PotentialParams(-1, 0, 0, a), qn, T12)
              for a in np.linspace(0.01, 0.4, 12)]
        assert all(b > a for a, b in zip(es, es[1:]))


class TestQuantizationIdentity:
    def test_on_every_reference_row(self):
        for which in ("table1", "table2"):
            for row in load_energy_table(which):
                d = bound_state_check(row.params, row.qn, T12)
                assert d.eta == pytest.approx(abs(d.eta_signed), rel=1e-9)
                if which == "table2":
                    # the attractive family satisfies the signed condition too
                    assert d.eta_signed > 0.0


class TestBoundStateCheck:
    def test_positive_energy_row_flagged(self):
        d = bound_state_check(PotentialParams(-3, 5, 10, 0.01),
                              spectroscopic_to_qn("4s"), T12)
        assert d.energy == pytest.approx(0.01661093440, abs=1e-6)
        assert not d.bound

    def test_hydrogenic_is_bound(self):
        d = bound_state_check(PotentialParams(-1, 0, 0, 1e-8), QuantumNumbers(0, 0), T12)
        assert d.bound
        assert d.decay_rate == pytest.approx(0.5, rel=1e-6)

    def test_screening_scan_unbinds_yukawa(self):
        # pure Yukawa ground state: the quantization ratio crosses zero at
        # alpha = kappa |V0|; past it the signed exponent goes negative
        qn = QuantumNumbers(0, 0)
        flags = []
        for alpha in (0.5, 0.75, 1.0, 1.5):
            d = bound_state_check(PotentialParams(-1, 0, 0, alpha), qn, T12)
            flags.append((alpha, d.bound, d.eta_signed))
        assert flags[0][1] and flags[1][1]
        assert not flags[2][1]          # exactly at threshold: E = 0, eta = 0
        assert flags[3][2] < 0.0        # past threshold the condition fails

    def test_decay_rate_consistency(self):
        # alpha*eta must equal sqrt(kappa (P2 - E)); the two routes share no code
        rng = np.random.default_rng(23)
        for _ in range(200):
            p = PotentialParams(float(rng.uniform(-5, 0)), float(rng.uniform(-5, 5)),
                                float(rng.uniform(0, 10)), float(rng.uniform(0.001, 0.5)))
            qn = QuantumNumbers(int(rng.integers(0, 3)), int(rng.integers(0, 3)))
            d = bound_state_check(p, qn, T12)
            if not d.bound:
                continue
            co = coefficients(p, qn, T12, d.energy)
            expected = math.sqrt(T12.kappa * (co.P2 - d.energy))
            assert d.decay_rate == pytest.approx(expected, rel=1e-10)


class TestSpectroscopicLabels:
    @pytest.mark.parametrize("label,n,l", [
        ("1s", 0, 0), ("2p", 0, 1), ("4f", 0, 3), ("3d", 0, 2), ("4p", 2, 1),
    ])
    def test_parse(self, label, n, l):
        qn = spectroscopic_to_qn(label)
        assert (qn.n, qn.l, qn.m) == (n, l, 0)

    def test_round_trip(self):
        for label in ("1s", "2s", "2p", "3d", "4f", "7p"):
            assert qn_to_spectroscopic(spectroscopic_to_qn(label)) == label

    @pytest.mark.parametrize("bad", ["", "x", "5g", "0s", "2f", "s2", "1.5s"])
    def test_rejects_malformed(self, bad):
        with pytest.raises(ValueError):
            spectroscopic_to_qn(bad)
