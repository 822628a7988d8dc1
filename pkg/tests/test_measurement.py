import numpy as np
import pytest
from scipy.integrate import quad

from tsvf.enlarged import EnlargedState, decode_effect, decode_rho, embed
from tsvf.linalg import (
    excited_projector,
    frob_distance,
    ground_projector,
    identity,
    sigma_minus,
    sigma_x,
    sigma_y,
    sigma_z,
)
from tsvf.measurement import (
    GaussianPovm,
    WeakValueSample,
    conventional_weak_value,
    conventional_weak_value_enlarged,
    detect_jumps,
    expectation,
    povm_operator,
    two_time_series,
    two_time_weak_value,
    two_time_weak_value_enlarged,
    voltage_mean_quadrature,
    voltage_pdf,
    voltage_two_time_weak_value_analytic,
    voltage_weak_value_analytic,
)

from oracles import random_density, random_hermitian, random_psd, voltage_pdf_three_gaussians

PLUS = 0.5 * np.array([[1.0, 1.0], [1.0, 1.0]], dtype=complex)


def well_conditioned_pair(rng):
    """Random PSD pair whose conditioning overlap is not nearly cancelled.

    Requiring Tr(E rho) >= (rho00 E00 + rho11 E11) / 3 bounds the cross-term
    weight |Tr(E rho) - diag| / Tr(E rho) by 2, so the wide-pointer reading of
    the mean voltage is a controlled approximation.  Pairs below the cutoff
    sit in the near-divergent amplification regime where that reading is
    meaningless; they are redrawn (rejection rate is a couple of percent).
    """
    while True:
        rho = random_psd(rng, 2)
        eff = random_psd(rng, 2)
        diag = (rho[0, 0] * eff[0, 0] + rho[1, 1] * eff[1, 1]).real
        if np.trace(eff @ rho).real >= diag / 3.0:
            return rho, eff


class TestExpectation:
    def test_eigenstate(self):
        assert expectation(sigma_z, ground_projector) == -1.0

    def test_maximally_mixed(self):
        assert expectation(sigma_z, identity(2) / 2) == 0.0

    def test_lowering_operator_reads_bloch_x(self):
        # for a state in the x-z plane, <sigma_-> = x / 2 and is real
        for x, z in ((0.3, 0.4), (-0.5, 0.1)):
            rho = 0.5 * (identity(2) + x * sigma_x + z * sigma_z)
            val = expectation(sigma_minus, rho)
            assert abs(val - x / 2) <= 1e-15

    def test_degenerate_state_rejected(self):
        with pytest.raises(ValueError, match="degenerate"):
            expectation(sigma_z, np.zeros((2, 2), dtype=complex))


class TestConventionalWeakValue:
    def test_identity_postselection_reduces_to_expectation(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            rho = random_density(rng, 2)
            a = random_hermitian(rng, 2)
            w = conventional_weak_value(a, rho, identity(2))
            assert abs(w.value - expectation(a, rho)) <= 1e-12

    def test_eigenstate_sandwich(self):
        w = conventional_weak_value(sigma_z, ground_projector, ground_projector)
        assert w.value == -1.0
        assert not w.diverged

    def test_plus_postselection(self):
        # <+|sigma_z|g><g|+> / |<+|g>|^2 = -1
        w = conventional_weak_value(sigma_z, ground_projector, PLUS)
        assert abs(w.value - (-1.0)) <= 1e-14

    def test_orthogonal_conditioning_flags_divergence(self):
        w = conventional_weak_value(sigma_z, ground_projector, excited_projector)
        assert w.diverged


class TestTwoTimeWeakValue:
    def test_identity_effect(self):
        rng = np.random.default_rng(1)
        rho = random_density(rng, 2)
        w = two_time_weak_value(sigma_z, rho, identity(2))
        assert abs(w.value - expectation(sigma_z, rho)) <= 1e-12

    def test_boundary_sample(self):
        w = two_time_weak_value(sigma_z, ground_projector, ground_projector)
        assert w.value == -1.0

    def test_midpoint_coincides_with_conventional(self, fluorescence_bundle):
        bundle = fluorescence_bundle
        n = bundle.scenario.grid.n_steps
        mid = n // 2
        enl_mid = EnlargedState(bundle.enlarged.states[mid], 2)
        conv = conventional_weak_value_enlarged(
            sigma_z, enl_mid, EnlargedState(bundle.enlarged.states[n - mid], 2)
        )
        two = two_time_weak_value_enlarged(sigma_z, enl_mid)
        assert abs(conv.value - two.value) <= 1e-8


class TestEnlargedForms:
    def test_conventional_matches_decoded(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            enl_t = embed(random_psd(rng, 2), random_psd(rng, 2))
            enl_rev = embed(random_psd(rng, 2), random_psd(rng, 2))
            a = random_hermitian(rng, 2)
            lhs = conventional_weak_value_enlarged(a, enl_t, enl_rev)
            rhs = conventional_weak_value(a, decode_rho(enl_t), decode_effect(enl_rev))
            assert abs(lhs.value - rhs.value) <= 1e-12
            assert lhs.diverged == rhs.diverged

    def test_two_time_matches_decoded(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            enl = embed(random_psd(rng, 2), random_psd(rng, 2))
            a = random_hermitian(rng, 2)
            lhs = two_time_weak_value_enlarged(a, enl)
            rhs = two_time_weak_value(a, decode_rho(enl), decode_effect(enl))
            assert abs(lhs.value - rhs.value) <= 1e-12

    def test_ground_pair(self):
        enl = embed(ground_projector, ground_projector)
        assert conventional_weak_value_enlarged(sigma_z, enl, enl).value == -1.0
        assert two_time_weak_value_enlarged(sigma_z, enl).value == -1.0

    def test_identity_observable_normalizes_to_one(self):
        rng = np.random.default_rng(4)
        enl = embed(random_density(rng, 2), random_psd(rng, 2))
        assert abs(conventional_weak_value_enlarged(identity(2), enl, enl).value - 1.0) <= 1e-12
        assert abs(two_time_weak_value_enlarged(identity(2), enl).value - 1.0) <= 1e-12

    def test_amplification_beyond_eigenvalue_range(self, fluorescence_bundle):
        series = two_time_series(sigma_z, fluorescence_bundle.enlarged)
        peaks = [abs(s.value.real) for s in series if not s.diverged]
        assert max(peaks) > 1.0

    def test_scale_invariance(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            rho = random_psd(rng, 2)
            eff = random_psd(rng, 2)
            a = random_hermitian(rng, 2)
            c, cp = rng.uniform(0.1, 10.0, 2)
            w1 = conventional_weak_value(a, rho, eff)
            w2 = conventional_weak_value(a, c * rho, cp * eff)
            assert abs(w1.value - w2.value) <= 1e-12
            assert w1.diverged == w2.diverged


class TestVoltagePdf:
    def test_excited_pair_is_gaussian_at_plus_one(self):
        povm = GaussianPovm(strength_a=0.7)
        vs = np.linspace(-3, 3, 13)
        dens = np.array(
            [voltage_pdf(povm, excited_projector, excited_projector, v) for v in vs]
        )
        gauss = np.exp(-((vs - 1.0) ** 2) / (2 * 0.7**2))
        ratio = dens / gauss
        assert np.abs(ratio - ratio[0]).max() <= 1e-12

    def test_ground_pair_is_gaussian_at_minus_one(self):
        povm = GaussianPovm(strength_a=0.7)
        vs = np.linspace(-3, 3, 13)
        dens = np.array(
            [voltage_pdf(povm, ground_projector, ground_projector, v) for v in vs]
        )
        gauss = np.exp(-((vs + 1.0) ** 2) / (2 * 0.7**2))
        ratio = dens / gauss
        assert np.abs(ratio - ratio[0]).max() <= 1e-12

    def test_matches_three_gaussian_expansion(self):
        rng = np.random.default_rng(6)
        povm = GaussianPovm(strength_a=1.3)
        for _ in range(10):
            rho = random_psd(rng, 2)
            eff = random_psd(rng, 2)
            enl_t = embed(rho, random_psd(rng, 2)).matrix
            enl_ref = embed(random_psd(rng, 2), eff).matrix
            for v in (-1.5, 0.0, 0.4, 2.0):
                direct = voltage_pdf(povm, rho, eff, v)
                closed = voltage_pdf_three_gaussians(enl_t, enl_ref, 1.3, v)
                assert abs(direct - closed) <= 1e-12 * max(1.0, abs(direct))

    def test_nonnegative_on_psd_pairs(self):
        rng = np.random.default_rng(7)
        povm = GaussianPovm(strength_a=0.5)
        for _ in range(10):
            rho = random_psd(rng, 2)
            eff = random_psd(rng, 2)
            for v in np.linspace(-4, 4, 17):
                assert voltage_pdf(povm, rho, eff, v) >= -1e-12

    def test_completeness(self):
        # the squared measurement operators resolve the identity
        for a in (0.5, 1.0, 3.0):
            povm = GaussianPovm(strength_a=a)
            total = np.zeros((2, 2))
            for i in range(2):
                for j in range(2):
                    total[i, j] = quad(
                        lambda v: povm_operator(povm, v).real[i, j] ** 2
                        if i == j
                        else (povm_operator(povm, v) @ povm_operator(povm, v))[i, j].real,
                        -1 - 8 * a,
                        1 + 8 * a,
                        epsabs=1e-10,
                        limit=200,
                    )[0]
            assert np.abs(total - np.eye(2)).max() <= 1e-6


class TestVoltageAnalytics:
    def test_excited_boundary_both_modes(self):
        enl = embed(excited_projector, excited_projector)
        for exact in (False, True):
            w = voltage_weak_value_analytic(enl, enl, exact, 1.0)
            assert abs(w.value - 1.0) <= 1e-14
            w2 = voltage_two_time_weak_value_analytic(enl, exact, 1.0)
            assert abs(w2.value - 1.0) <= 1e-14

    def test_ground_two_time(self):
        enl = embed(ground_projector, ground_projector)
        assert abs(voltage_two_time_weak_value_analytic(enl, False, 1.0).value + 1.0) <= 1e-14

    def test_exact_mode_matches_quadrature(self):
        rng = np.random.default_rng(8)
        povm = GaussianPovm(strength_a=1.0)
        for _ in range(10):
            rho = random_density(rng, 2)
            eff = random_density(rng, 2)
            enl = embed(rho, eff)
            analytic = voltage_weak_value_analytic(enl, enl, True, 1.0)
            numeric = voltage_mean_quadrature(povm, rho, eff)
            assert abs(analytic.value.real - numeric) <= 1e-8

    def test_verbatim_mode_near_quadrature_in_weak_limit(self):
        rng = np.random.default_rng(9)
        povm = GaussianPovm(strength_a=10.0)
        for _ in range(10):
            rho, eff = well_conditioned_pair(rng)
            rho, eff = rho / np.trace(rho).real, eff / np.trace(eff).real
            enl = embed(rho, eff)
            analytic = voltage_weak_value_analytic(enl, enl, False, 10.0)
            numeric = voltage_mean_quadrature(povm, rho, eff)
            assert abs(analytic.value.real - numeric) <= 1e-2 * max(abs(numeric), 1e-30)

    def test_two_time_matches_observable_form_when_cross_terms_vanish(self):
        # with a diagonal forward block the off-diagonal element products are
        # zero and the mean voltage equals the two-time sigma_z weak value
        rng = np.random.default_rng(10)
        for _ in range(10):
            rho = np.diag(rng.uniform(0.1, 1.0, 2)).astype(complex)
            eff = random_psd(rng, 2)
            enl = embed(rho, eff)
            v = voltage_two_time_weak_value_analytic(enl, False, 1.0)
            w = two_time_weak_value(sigma_z, decode_rho(enl), decode_effect(enl))
            assert abs(v.value - w.value) <= 1e-12

    def test_two_time_quadrature_agreement(self):
        rng = np.random.default_rng(11)
        povm = GaussianPovm(strength_a=1.0)
        for _ in range(5):
            rho = random_density(rng, 2)
            eff = random_density(rng, 2)
            enl = embed(rho, eff)
            analytic = voltage_two_time_weak_value_analytic(enl, True, 1.0)
            numeric = voltage_mean_quadrature(povm, rho, eff)
            assert abs(analytic.value.real - numeric) <= 1e-8


def make_series(times, values, diverged=None):
    diverged = diverged or [False] * len(times)
    return [
        WeakValueSample(time=t, value=complex(v), denominator=1.0, diverged=d)
        for t, v, d in zip(times, values, diverged)
    ]


class TestDetectJumps:
    def test_constant_series(self):
        series = make_series(np.linspace(0, 1, 50), [-1.0] * 50)
        assert detect_jumps(series, 0.5) == []

    def test_tanh_step(self):
        width = 0.05
        center = 0.5
        dt = 0.002
        times = np.arange(0, 1 + dt / 2, dt)
        values = np.tanh((times - center) / width)
        events = detect_jumps(make_series(times, values), 0.8)
        assert len(events) == 1
        expected = 2 * width * np.arctanh(0.8)
        assert abs(events[0].delta_j - expected) <= dt
        assert events[0].direction == 1

    def test_falling_step_direction(self):
        times = np.linspace(0, 1, 101)
        values = -np.tanh((times - 0.5) / 0.05)
        events = detect_jumps(make_series(times, values), 0.5)
        assert len(events) == 1
        assert events[0].direction == -1

    def test_diverged_samples_skipped(self):
        times = np.linspace(0, 1, 11)
        values = [-1, -1, -1, 0.0, 99.0, 0.2, 1, 1, 1, 1, 1]
        diverged = [False] * 11
        diverged[4] = True  # the wild sample is flagged and must not matter
        events = detect_jumps(make_series(times, values, diverged), 0.5)
        assert len(events) == 1

    def test_threshold_validated(self):
        with pytest.raises(ValueError, match="threshold"):
            detect_jumps([], 1.5)

    def test_empty_series(self):
        assert detect_jumps([], 0.5) == []

    def test_round_trip_counts_two_events(self):
        times = np.linspace(0, 2, 201)
        values = np.where(times < 1, np.tanh((times - 0.5) / 0.02), -np.tanh((times - 1.5) / 0.02))
        events = detect_jumps(make_series(times, values), 0.5)
        assert [e.direction for e in events] == [1, -1]
