"""Master-equation right-hand sides and a fixed-step RK4 integrator.

Three generators act on d x d matrices (hbar = 1, operators carry angular
frequency):

  forward:           dX/dt = -i[H, X] + sum_n ( C_n X C_n' - {C_n' C_n, X}/2 )
  backward:          dX/dt = -i[H, X] - sum_n ( C_n' X C_n - {C_n' C_n, X}/2 )
  backward-forward:  dX/dt = +i[H, X] + sum_n ( C_n' X C_n - {C_n' C_n, X}/2 )

(primes denote adjoints).  The backward generator is meant to be stepped from
the final time down to t; its forward version is the exact negation and is
stepped forward, so that the solution at t equals the backward solution at
T - t.  All trajectory products in this package use the forward version plus
`time_reverse`; negative-step integration exists only in test oracles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .linalg import ComplexMatrix, commutator, dagger, hermitize, is_hermitian

HERMITICITY_TOL = 1e-12


class IntegrationDivergedError(RuntimeError):
    """A non-finite state was produced mid-integration."""

    def __init__(self, step: int):
        self.step = step
        super().__init__(f"integration diverged: non-finite state at step {step}")


@dataclass(frozen=True, eq=False)
class LindbladModel:
    """A Hamiltonian plus jump operators C_n = sqrt(k_n) A_n (rates absorbed)."""

    hamiltonian: ComplexMatrix
    lindblad_ops: tuple[ComplexMatrix, ...] = ()

    def __post_init__(self):
        h = np.asarray(self.hamiltonian, dtype=complex)
        ops = tuple(np.asarray(c, dtype=complex) for c in self.lindblad_ops)
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "lindblad_ops", ops)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError(f"hamiltonian is not square: shape {h.shape}")
        if not is_hermitian(h, HERMITICITY_TOL):
            raise ValueError("hamiltonian is not Hermitian within 1e-12")
        for i, c in enumerate(ops):
            if c.shape != h.shape:
                raise ValueError(
                    f"lindblad operator {i} has shape {c.shape}, expected {h.shape}"
                )

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid on [0, t_final] with n_steps = round(t_final / dt) steps."""

    t_final: float
    dt: float
    n_steps: int = field(default=0)

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_final <= 0:
            raise ValueError(f"t_final must be positive, got {self.t_final}")
        n = self.n_steps if self.n_steps > 0 else int(round(self.t_final / self.dt))
        if n < 1:
            raise ValueError("grid has no steps: t_final < dt/2")
        if abs(n * self.dt - self.t_final) > 1e-12 * abs(self.t_final):
            raise ValueError(
                f"t_final = {self.t_final} is not an integer number of steps dt = {self.dt}"
            )
        object.__setattr__(self, "n_steps", n)

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.dt


@dataclass(frozen=True, eq=False)
class Trajectory:
    """n_steps + 1 state samples; sample i is the state at time i * dt."""

    grid: TimeGrid
    states: np.ndarray  # shape (n_steps + 1, d, d)

    def __post_init__(self):
        if len(self.states) != self.grid.n_steps + 1:
            raise ValueError(
                f"trajectory has {len(self.states)} samples, grid wants {self.grid.n_steps + 1}"
            )

    def __len__(self) -> int:
        return len(self.states)

    @property
    def dim(self) -> int:
        return self.states.shape[-1]


def _dissipator(ops: Sequence[ComplexMatrix], x: ComplexMatrix) -> ComplexMatrix:
    out = np.zeros_like(x)
    for c in ops:
        cd = dagger(c)
        cdc = cd @ c
        out += c @ x @ cd - 0.5 * (cdc @ x + x @ cdc)
    return out


def _adjoint_dissipator(ops: Sequence[ComplexMatrix], x: ComplexMatrix) -> ComplexMatrix:
    out = np.zeros_like(x)
    for c in ops:
        cd = dagger(c)
        cdc = cd @ c
        out += cd @ x @ c - 0.5 * (cdc @ x + x @ cdc)
    return out


def _check_dim(model: LindbladModel, x: ComplexMatrix, op: str) -> None:
    if x.shape != (model.dim, model.dim):
        raise ValueError(f"{op}: state shape {x.shape} does not match model dim {model.dim}")


def forward_rhs(model: LindbladModel, rho: ComplexMatrix) -> ComplexMatrix:
    """Generator of the forward-evolving state."""
    _check_dim(model, rho, "forward_rhs")
    return -1j * commutator(model.hamiltonian, rho) + _dissipator(model.lindblad_ops, rho)


def backward_rhs(model: LindbladModel, effect: ComplexMatrix) -> ComplexMatrix:
    """Generator of the backward-evolving effect state, stepped from T down to t."""
    _check_dim(model, effect, "backward_rhs")
    return -1j * commutator(model.hamiltonian, effect) - _adjoint_dissipator(
        model.lindblad_ops, effect
    )


def backward_forward_rhs(model: LindbladModel, effect: ComplexMatrix) -> ComplexMatrix:
    """Forward-in-time version of the backward generator (its exact negation).

    Integrating this from the final effect over [0, T] and sampling at t gives
    the backward solution at T - t.
    """
    _check_dim(model, effect, "backward_forward_rhs")
    return 1j * commutator(model.hamiltonian, effect) + _adjoint_dissipator(
        model.lindblad_ops, effect
    )


RHS = Callable[[ComplexMatrix], ComplexMatrix]


def integrate(rhs: RHS, initial: ComplexMatrix, grid: TimeGrid) -> Trajectory:
    """Classical fixed-step RK4.

    Each accepted step is re-Hermitized as (X + X') / 2, which suppresses the
    drift of anti-Hermitian round-off without altering O(dt^4) accuracy.
    Raises IntegrationDivergedError naming the step if a non-finite state
    appears.
    """
    x = np.asarray(initial, dtype=complex).copy()
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValueError(f"initial state is not square: shape {x.shape}")
    dt = grid.dt
    states = np.empty((grid.n_steps + 1, *x.shape), dtype=complex)
    states[0] = x
    for i in range(grid.n_steps):
        k1 = rhs(x)
        k2 = rhs(x + 0.5 * dt * k1)
        k3 = rhs(x + 0.5 * dt * k2)
        k4 = rhs(x + dt * k3)
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        x = hermitize(x)
        if not np.isfinite(x).all():
            raise IntegrationDivergedError(i + 1)
        states[i + 1] = x
    return Trajectory(grid=grid, states=states)


def time_reverse(traj: Trajectory) -> Trajectory:
    """Reverse the sample order: sample i of the result is sample n_steps - i."""
    return Trajectory(grid=traj.grid, states=traj.states[::-1].copy())
