import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subcap.bounds import (
    BoundReport,
    capacity_bound_exponential,
    capacity_bound_power,
    counting_bound_generic,
    counting_bound_power,
    exponential_envelope_inverse,
    inapplicable,
    power_envelope_inverse,
    verify_capacity_bound,
    verify_counting_bound,
    verify_densta_domination,
    verify_diag_counting,
    verify_exponential_capacity_bound,
)
from subcap.capacity import capacity_from_fading_eigs
from subcap.channel import fading_matrix
from subcap.linalg import counting_function, hermitian_eigen
from subcap.structure import build_structure_report, minimal_alpha
from subcap.study import StudyConfig

from .conftest import diag_dominant_psd, random_psd, sorted_psd


def power_diag(m, f_plus=1.0, gamma=2.0):
    return np.diag(f_plus * np.arange(1, m + 1, dtype=float) ** -gamma)


class TestCountingBoundPower:
    def test_arithmetic(self):
        assert counting_bound_power(0.25, 10, 1.0, 2.0) == pytest.approx(2.0)
        assert counting_bound_power(0.25, 1, 1.0, 2.0) == 1.0

    def test_at_rho_plus(self):
        assert counting_bound_power(3.0, 50, 3.0, 1.7) == pytest.approx(1.0)
        assert counting_bound_power(6.0, 50, 3.0, 1.7) < 1.0

    def test_saturates(self):
        assert counting_bound_power(1e-300, 17, 1.0, 2.0) == 17.0

    def test_vectorized(self):
        out = counting_bound_power(np.array([1.0, 0.25, 1e-9]), 5, 1.0, 2.0)
        np.testing.assert_allclose(out, [1.0, 2.0, 5.0])

    @pytest.mark.parametrize("x", [0.0, -1.0])
    def test_domain(self, x):
        with pytest.raises(ValueError):
            counting_bound_power(x, 4, 1.0, 2.0)


class TestCountingBoundGeneric:
    def test_power_envelope_reproduces_power_bound(self):
        f_plus, gamma, alpha, m = 1.3, 1.8, 0.4, 40
        inv = power_envelope_inverse(f_plus, gamma)
        for x in np.geomspace(1e-6, 10.0, 200):
            a = counting_bound_generic(x, m, alpha, inv)
            b = counting_bound_power(x, m, (1 + alpha) * f_plus, gamma)
            assert a == pytest.approx(b, rel=1e-12)

    def test_exponential_envelope(self):
        f_plus, gamma, alpha, m = 2.0, 0.5, 0.25, 30
        inv = exponential_envelope_inverse(f_plus, gamma)
        for x in np.geomspace(1e-4, 2.5, 50):
            expected = min(m, 1 + math.log((1 + alpha) * f_plus / x) / gamma)
            assert counting_bound_generic(x, m, alpha, inv, f_start=f_plus) == pytest.approx(expected, rel=1e-12)

    def test_above_envelope_start_is_zero(self):
        inv = exponential_envelope_inverse(1.0, 1.0)
        assert counting_bound_generic(1e6, 10, 0.0, inv, f_start=1.0) == 0.0
        # without f_start the inverse itself goes negative and is clamped
        assert counting_bound_generic(1e6, 10, 0.0, inv) == 0.0

    def test_undefined_inverse_is_zero(self):
        def bad(y):
            raise ValueError("outside range")
        assert counting_bound_generic(1.0, 5, 0.0, bad) == 0.0
        assert counting_bound_generic(1.0, 5, 0.0, lambda y: math.nan) == 0.0

    def test_domain(self):
        with pytest.raises(ValueError):
            counting_bound_generic(0.0, 4, 0.0, power_envelope_inverse(1, 2))


class TestCapacityBoundPower:
    def test_closed_form_example(self):
        # (1/ln 2)(2 + ln 2), evaluated by hand
        assert capacity_bound_power(1, 1.0, 1.0, 2.0) == pytest.approx(3.8853900817779268, rel=1e-15)

    def test_small_argument_limit(self):
        k = 1e-12
        expected = k ** 0.5 * 2 / math.log(2)
        assert capacity_bound_power(1, k, 1.0, 2.0) == pytest.approx(expected, rel=1e-9)
        assert capacity_bound_power(1, k, 1.0, 2.0) > 0

    @pytest.mark.parametrize("gamma", [1.0, 0.5, -2.0])
    def test_rejects_gamma_le_one(self, gamma):
        with pytest.raises(ValueError):
            capacity_bound_power(8, 1.0, 1.0, gamma)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0.01, 100), st.floats(0.01, 100), st.integers(1, 10_000),
           st.floats(1.01, 6), st.floats(1.0, 3.0))
    def test_monotone_in_each_argument(self, kappa, rho, m, gamma, factor):
        base = capacity_bound_power(m, kappa, rho, gamma)
        assert capacity_bound_power(m, kappa * factor, rho, gamma) >= base * (1 - 1e-14)
        assert capacity_bound_power(m, kappa, rho * factor, gamma) >= base * (1 - 1e-14)
        assert capacity_bound_power(m + 1, kappa, rho, gamma) >= base * (1 - 1e-14)

    @pytest.mark.parametrize("gamma", [1.2, 2.0, 3.5])
    def test_per_antenna_bound_eventually_decreases(self, gamma):
        ms = 2.0 ** np.arange(0, 21)
        ratio = np.array([capacity_bound_power(m, 10.0, 1.0, gamma) / m for m in ms])
        start = int(np.argmax(ratio))
        assert np.all(np.diff(ratio[start:]) < 0)
        assert ratio[-1] < 0.5 * ratio[start]


class TestCapacityBoundExponential:
    def test_zero_argument(self):
        assert capacity_bound_exponential(0, 10.0, 1.0, 2.0) == pytest.approx(0.5 / math.log(2))

    def test_unit_log(self):
        gamma = 0.7
        assert capacity_bound_exponential(1, math.e - 1, 1.0, gamma) == pytest.approx(
            (2 / gamma + 1) / math.log(2), rel=1e-14)

    def test_alternative_reading(self):
        gamma, big_l = 1.5, math.log(1 + 10 * 2.0 * 8)
        assert capacity_bound_exponential(8, 10.0, 2.0, gamma, squared_log=False) == pytest.approx(
            (1 / gamma + big_l + 2 * big_l / gamma) / math.log(2), rel=1e-14)

    def test_polylogarithmic_growth(self):
        ms = 2.0 ** np.arange(4, 21)
        b = np.array([capacity_bound_exponential(m, 10.0, 1.0, 0.5) for m in ms])
        r = b[1:] / b[:-1]
        assert np.all(r > 1)
        assert np.all(np.diff(r) < 0)
        assert r[-1] < 1.1

    def test_domain(self):
        with pytest.raises(ValueError):
            capacity_bound_exponential(4, 1.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            capacity_bound_exponential(4, -1.0, 1.0, 1.0)


class TestVerifyCountingBound:
    def test_exact_power_diagonal(self):
        f = power_diag(24)
        rep = build_structure_report(f)
        out = verify_counting_bound(hermitian_eigen(f), rep)
        assert out.holds and out.worst_margin >= 0
        assert out.checked_points >= 24 + 1

    def test_direct_count_at_breakpoints(self):
        # alpha = 0: just below f_i = i^-2 the count is i and the bound is i / (1 - eps)^(1/2)
        f = power_diag(10)
        rep = build_structure_report(f)
        lam = np.diagonal(f).real
        for i, x in enumerate(lam * (1 - 1e-6), start=1):
            assert counting_function(lam, x) == i
            assert counting_bound_power(x, 10, rep.rho_plus, rep.gamma) >= i

    @pytest.mark.parametrize("m", [8, 16, 32, 64])
    def test_scattering_pipeline(self, m):
        h, _ = StudyConfig().transfer_matrix(m)
        f = fading_matrix(h)
        rep = build_structure_report(f)
        assert rep.certified
        assert verify_counting_bound(hermitian_eigen(f).eigenvalues, rep).holds

    def test_perturbed_power_law(self, rng):
        for n in (5, 12, 30):
            f = diag_dominant_psd(rng, n, gamma=2.0, coupling=0.3)
            rep = build_structure_report(f)
            assert verify_counting_bound(hermitian_eigen(f), rep).holds

    def test_understated_alpha_report_is_honest(self):
        # strong coupling between equal diagonal entries pushes the top eigenvalue to 2
        f = np.array([[1.0, 0.99, 0], [0.99, 1.0, 0], [0, 0, 0.01]])
        rep = build_structure_report(f)
        lam = hermitian_eigen(f).eigenvalues
        fake = dataclasses.replace(rep, alpha_min=0.0, f_plus=1.0, gamma=10.0, rho_plus=1.0)
        out = verify_counting_bound(lam, fake)
        eps = 1e-9 * rep.spectral_radius
        xs = np.concatenate([lam - eps, np.geomspace(1e-9 * fake.rho_plus, fake.rho_plus, 64)])
        xs = xs[xs > 0]
        direct = np.min(np.minimum(3, (fake.rho_plus / xs) ** (1 / fake.gamma))
                        - np.array([np.sum(lam > x) for x in xs]))
        assert out.worst_margin == pytest.approx(direct, abs=1e-12)
        assert out.holds == (direct >= -1e-9)
        assert not out.holds

    def test_informational_when_gamma_small(self):
        rep = build_structure_report(np.diag([1.0, 0.9, 0.8]))
        assert not rep.gamma_admissible
        out = verify_counting_bound(np.array([1.0, 0.9, 0.8]), rep)
        assert "informational" in out.note


class TestVerifyDenstaDomination:
    def test_diagonal_equality(self):
        f = power_diag(9)
        rep = verify_densta_domination(f, 0.0)
        assert rep.holds
        assert rep.worst_margin == 0

    def test_random_certified(self):
        r = np.random.default_rng(77)
        for _ in range(100):
            f = sorted_psd(r, int(r.integers(2, 20)))
            assert verify_densta_domination(f, minimal_alpha(f)).holds

    def test_overstated_alpha(self, rng):
        f = sorted_psd(rng, 10)
        assert verify_densta_domination(f, 10 * minimal_alpha(f)).holds

    def test_understated_alpha_can_fail(self):
        f = np.array([[1.0, 0.99], [0.99, 1.0]])
        assert not verify_densta_domination(f, 0.0).holds


class TestVerifyDiagCounting:
    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 20), st.integers(0, 2**32 - 1))
    def test_holds_for_fitted_envelope(self, n, seed):
        f = random_psd(np.random.default_rng(seed), n, decay=1.2)
        assert verify_diag_counting(build_structure_report(f)).holds


class TestVerifyCapacityBound:
    def test_m1(self):
        f = np.array([[0.3]])
        rep = build_structure_report(f, gamma_fixed=2.0)
        c = capacity_from_fading_eigs([0.3], 10.0, 1).bits
        assert c == pytest.approx(math.log2(1 + 3.0))
        assert verify_capacity_bound(c, rep, 10.0, 1).holds

    @pytest.mark.parametrize("m", [8, 16, 32, 64, 128])
    def test_scattering_pipeline(self, m):
        h, _ = StudyConfig().transfer_matrix(m)
        f = fading_matrix(h)
        rep = build_structure_report(f)
        c = capacity_from_fading_eigs(hermitian_eigen(f).eigenvalues, 10.0, m).bits
        out = verify_capacity_bound(c, rep, 10.0, m)
        assert out.holds and out.worst_margin > 0

    def test_violation_reported(self):
        rep = build_structure_report(power_diag(4))
        bound = capacity_bound_power(4, 1.0, rep.rho_plus, rep.gamma)
        out = verify_capacity_bound(bound * 2, rep, 1.0, 4)
        assert not out.holds
        assert out.worst_margin == pytest.approx(-1.0)

    def test_rejects_gamma_le_one(self):
        rep = build_structure_report(np.diag([1.0, 0.9, 0.8]))
        with pytest.raises(ValueError, match="exponential"):
            verify_capacity_bound(1.0, rep, 1.0, 3)

    def test_exponential_verdict(self):
        m, gamma = 16, 0.5
        lam = np.exp(-gamma * np.arange(m))
        c = capacity_from_fading_eigs(lam, 10.0, m).bits
        assert verify_exponential_capacity_bound(c, m, 10.0, 1.0, gamma).holds


class TestBoundReport:
    def test_inapplicable(self):
        r = inapplicable("capacity_power", "no certificate")
        assert r.holds is None and not r.applicable
        d = r.to_dict()
        assert d["holds"] is None and d["note"] == "no certificate"

    def test_tolerance(self):
        from subcap.bounds import _report

        assert _report("capacity_power", [-5e-10]).holds
        assert not _report("capacity_power", [-2e-9]).holds

    def test_fields(self):
        r = BoundReport("diag_counting", True, 0.5, 3)
        assert r.to_dict()["checked_points"] == 3
