import numpy as np
import pytest

from tsvf.dynamics import (
    IntegrationDivergedError,
    LindbladModel,
    TimeGrid,
    backward_forward_rhs,
    backward_rhs,
    forward_rhs,
    integrate,
    time_reverse,
)
from tsvf.linalg import (
    excited_projector,
    frob_distance,
    ground_projector,
    identity,
    sigma_minus,
    sigma_y,
    sigma_z,
    zeros,
)
from tsvf.models import omega_from_mhz, rate_from_khz, resonance_fluorescence

from oracles import backward_direct, random_hermitian, steady_state

OMEGA = omega_from_mhz(1.16)
K = rate_from_khz(95.0)


def fluorescence_in_per_us_units():
    # same physics expressed in rad/us so the vectorized-generator oracle
    # works at double precision
    return resonance_fluorescence(OMEGA * 1e-6, K * 1e-6)


class TestTimeGrid:
    def test_n_steps_rounding(self):
        grid = TimeGrid(t_final=2e-6, dt=1e-9)
        assert grid.n_steps == 2000
        assert len(grid.times) == 2001
        assert grid.times[-1] == pytest.approx(2e-6, rel=1e-12)

    def test_rejects_nonpositive_dt(self):
        with pytest.raises(ValueError, match="dt"):
            TimeGrid(t_final=1.0, dt=0.0)

    def test_rejects_incommensurate(self):
        with pytest.raises(ValueError, match="integer number of steps"):
            TimeGrid(t_final=1.0, dt=0.3)


class TestLindbladModel:
    def test_rejects_non_hermitian_hamiltonian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            LindbladModel(hamiltonian=sigma_minus)

    def test_rejects_mismatched_ops(self):
        with pytest.raises(ValueError, match="shape"):
            LindbladModel(hamiltonian=sigma_z, lindblad_ops=(identity(3),))


class TestForwardRhs:
    def test_pure_amplitude_damping_of_excited(self):
        model = resonance_fluorescence(0.0, K)
        out = forward_rhs(model, excited_projector)
        assert frob_distance(out, K * (ground_projector - excited_projector)) <= 1e-9

    def test_no_dynamics(self):
        model = resonance_fluorescence(0.0, 0.0)
        rng = np.random.default_rng(0)
        assert frob_distance(forward_rhs(model, random_hermitian(rng, 2)), zeros(2)) == 0.0

    def test_steady_state_is_fixed_point(self):
        rng = np.random.default_rng(1)
        models = [fluorescence_in_per_us_units()]
        for _ in range(5):
            models.append(
                LindbladModel(
                    hamiltonian=random_hermitian(rng, 2),
                    lindblad_ops=(
                        rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)),
                    ),
                )
            )
        for model in models:
            ss = steady_state(model)
            assert frob_distance(forward_rhs(model, ss), zeros(2)) <= 1e-10

    def test_dimension_mismatch(self):
        model = resonance_fluorescence(OMEGA, K)
        with pytest.raises(ValueError, match="does not match"):
            forward_rhs(model, identity(3))


class TestBackwardRhs:
    def test_identity_is_fixed_point(self):
        model = resonance_fluorescence(OMEGA, K)
        assert frob_distance(backward_rhs(model, identity(2)), zeros(2)) <= 1e-12

    def test_excited_effect_grows(self):
        # sigma_+ |e><e| sigma_- = 0 and {sigma_+ sigma_-, |e><e|} = 2|e><e|,
        # so the adjoint dissipator contributes +k |e><e|
        model = resonance_fluorescence(0.0, K)
        out = backward_rhs(model, excited_projector)
        assert frob_distance(out, K * excited_projector) <= 1e-9

    def test_reduces_to_forward_at_k_zero(self):
        model = resonance_fluorescence(OMEGA, 0.0)
        rng = np.random.default_rng(2)
        e = random_hermitian(rng, 2)
        assert frob_distance(backward_rhs(model, e), forward_rhs(model, e)) == 0.0


class TestBackwardForwardRhs:
    def test_exact_negation_of_backward(self):
        model = resonance_fluorescence(OMEGA, K)
        rng = np.random.default_rng(3)
        for _ in range(10):
            e = random_hermitian(rng, 2)
            assert (
                frob_distance(backward_forward_rhs(model, e), -backward_rhs(model, e))
                <= 1e-15 * np.linalg.norm(backward_rhs(model, e))
            )

    def test_identity_fixed_point(self):
        model = resonance_fluorescence(OMEGA, K)
        assert frob_distance(backward_forward_rhs(model, identity(2)), zeros(2)) <= 1e-12

    def test_matches_direct_negative_stepping(self):
        # integrating the forward version from the final effect, then reversing,
        # reproduces stepping the backward generator from T down to 0
        model = resonance_fluorescence(OMEGA, K)
        grid = TimeGrid(t_final=1e-6, dt=1e-9)
        from functools import partial

        traj = integrate(partial(backward_forward_rhs, model), ground_projector, grid)
        direct = backward_direct(model, ground_projector, grid)
        reversed_traj = time_reverse(traj)
        worst = max(
            frob_distance(reversed_traj.states[i], direct[i]) for i in range(len(direct))
        )
        assert worst <= 1e-8


class TestIntegrate:
    def test_zero_rhs_constant(self):
        grid = TimeGrid(t_final=1.0, dt=0.1)
        rng = np.random.default_rng(4)
        x0 = random_hermitian(rng, 2)
        traj = integrate(lambda x: zeros(2), x0, grid)
        assert all(frob_distance(s, x0) == 0.0 for s in traj.states)

    def test_rabi_rotation_closed_form(self):
        # k = 0 from the ground state: <sigma_z>(t) = -cos(omega t)
        from functools import partial

        model = resonance_fluorescence(OMEGA, 0.0)
        grid = TimeGrid(t_final=2e-6, dt=1e-9)
        traj = integrate(partial(forward_rhs, model), ground_projector, grid)
        z = np.einsum("tij,ji->t", traj.states, sigma_z).real
        assert np.abs(z + np.cos(OMEGA * grid.times)).max() <= 1e-6

    def test_amplitude_damping_closed_form(self):
        # omega = 0 from the excited state: population e^{-k t}
        from functools import partial

        model = resonance_fluorescence(0.0, K)
        grid = TimeGrid(t_final=2e-6, dt=1e-9)
        traj = integrate(partial(forward_rhs, model), excited_projector, grid)
        pop = traj.states[:, 0, 0].real
        assert np.abs(pop - np.exp(-K * grid.times)).max() <= 1e-8

    def test_divergence_names_step(self):
        grid = TimeGrid(t_final=10.0, dt=1.0)
        with np.errstate(over="ignore", invalid="ignore"):
            with pytest.raises(IntegrationDivergedError, match="step") as err:
                integrate(lambda x: 1e9 * x, identity(2), grid)
        assert err.value.step >= 1


class TestTimeReverse:
    def test_constant_fixed(self):
        grid = TimeGrid(t_final=1.0, dt=0.5)
        traj = integrate(lambda x: zeros(2), identity(2), grid)
        rev = time_reverse(traj)
        assert all(
            frob_distance(a, b) == 0.0 for a, b in zip(rev.states, traj.states)
        )

    def test_involution(self):
        from functools import partial

        model = resonance_fluorescence(OMEGA, K)
        grid = TimeGrid(t_final=1e-7, dt=1e-9)
        traj = integrate(partial(forward_rhs, model), ground_projector, grid)
        twice = time_reverse(time_reverse(traj))
        assert all(
            frob_distance(a, b) == 0.0 for a, b in zip(twice.states, traj.states)
        )


class TestInvariants:
    def test_trace_conserved_forward(self, both_bundles):
        for bundle in both_bundles:
            traces = np.einsum("tii->t", bundle.forward.states)
            assert np.abs(traces - 1.0).max() <= 1e-10

    def test_rhs_preserve_hermiticity(self):
        model = resonance_fluorescence(OMEGA, K)
        rng = np.random.default_rng(5)
        for rhs in (forward_rhs, backward_rhs, backward_forward_rhs):
            for _ in range(10):
                x = random_hermitian(rng, 2)
                out = rhs(model, x)
                assert frob_distance(out, out.conj().T) <= 1e-14 * max(
                    np.linalg.norm(out), 1.0
                )

    def test_unitality_of_backward(self):
        for omega, k, builder in (
            (OMEGA, K, resonance_fluorescence),
            (OMEGA, K, None),
        ):
            if builder is None:
                from tsvf.models import dephasing_qubit as builder
            assert (
                frob_distance(backward_rhs(builder(omega, k), identity(2)), zeros(2))
                <= 1e-12
            )

    def test_rk4_global_order(self):
        from functools import partial

        model = resonance_fluorescence(OMEGA, K)
        t_final = 2e-6

        def final_state(dt):
            grid = TimeGrid(t_final=t_final, dt=dt)
            return integrate(partial(forward_rhs, model), ground_projector, grid).states[-1]

        dt = 8e-9
        ref = final_state(dt / 16.0)
        err_coarse = frob_distance(final_state(dt), ref)
        err_half = frob_distance(final_state(dt / 2.0), ref)
        ratio = err_coarse / err_half
        assert 16.0 * 0.8 <= ratio <= 16.0 * 1.2

    def test_positivity_of_samples(self, both_bundles):
        for bundle in both_bundles:
            eigs = np.linalg.eigvalsh(bundle.forward.states)
            assert eigs.min() >= -1e-8
