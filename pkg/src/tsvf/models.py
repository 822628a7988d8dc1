"""The two concrete qubit scenarios, their boundary conditions, and observables.

Both scenarios drive a qubit at resonance, H = (omega/2) sigma_y, and differ
in the damping channel: fluorescence decays through sigma_- while the
dephasing qubit decays through sigma_z.  Default parameters are
omega/2pi = 1.16 MHz and k/2pi = 95 kHz, with both boundary conditions fixed
to the ground state.  User-facing frequencies are omega/2pi in MHz and k/2pi
in kHz; everything internal is angular (rad/s), time in seconds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import LindbladModel, TimeGrid
from .linalg import (
    ComplexMatrix,
    excited_projector,
    ground_projector,
    identity,
    sigma_minus,
    sigma_x,
    sigma_y,
    sigma_z,
)
from .measurement import GaussianPovm

DEFAULT_OMEGA_MHZ = 1.16
DEFAULT_K_KHZ = 95.0

SCENARIO_NAMES = ("fluorescence", "dephasing")
BOUNDARY_PRESETS = ("ground", "excited", "plus", "identity")
OBSERVABLE_NAMES = ("sigma_z", "photon_n", "sigma_minus", "voltage")
PHOTON_CONVENTIONS = ("field", "excitation")


def omega_from_mhz(omega_mhz: float) -> float:
    """Angular drive frequency from omega/2pi in MHz."""
    return 2.0 * np.pi * omega_mhz * 1e6


def rate_from_khz(k_khz: float) -> float:
    """Angular damping rate from k/2pi in kHz."""
    return 2.0 * np.pi * k_khz * 1e3


@dataclass(frozen=True, eq=False)
class Scenario:
    model: LindbladModel
    rho_initial: ComplexMatrix  # past condition, unit trace
    effect_final: ComplexMatrix  # future condition, PSD (trace free)
    grid: TimeGrid
    rabi_frequency: float  # rad/s
    rate: float  # rad/s
    label: str


def resonance_fluorescence(omega: float, k: float) -> LindbladModel:
    """Driven qubit with amplitude damping: H = (omega/2) sigma_y, C = sqrt(k) sigma_-."""
    if k < 0:
        raise ValueError(f"damping rate must be nonnegative, got {k}")
    return LindbladModel(
        hamiltonian=0.5 * omega * sigma_y,
        lindblad_ops=(np.sqrt(k) * sigma_minus,),
    )


def dephasing_qubit(omega: float, k: float) -> LindbladModel:
    """Driven qubit with pure dephasing: H = (omega/2) sigma_y, C = sqrt(k) sigma_z.

    Because sigma_z^2 = I the standard dissipator collapses to
    k (sigma_z X sigma_z - X).
    """
    if k < 0:
        raise ValueError(f"damping rate must be nonnegative, got {k}")
    return LindbladModel(
        hamiltonian=0.5 * omega * sigma_y,
        lindblad_ops=(np.sqrt(k) * sigma_z,),
    )


_BUILDERS = {
    "fluorescence": resonance_fluorescence,
    "dephasing": dephasing_qubit,
}


def build_model(name: str, omega: float, k: float) -> LindbladModel:
    if name not in _BUILDERS:
        raise ValueError(f"unknown scenario {name!r}; expected one of {SCENARIO_NAMES}")
    return _BUILDERS[name](omega, k)


def paper_scenario(
    name: str,
    t_final: float = 2e-6,
    dt: float = 1e-9,
    omega_mhz: float = DEFAULT_OMEGA_MHZ,
    k_khz: float = DEFAULT_K_KHZ,
) -> Scenario:
    """Reference scenario: default parameters, ground-state boundary on both ends."""
    omega = omega_from_mhz(omega_mhz)
    k = rate_from_khz(k_khz)
    return Scenario(
        model=build_model(name, omega, k),
        rho_initial=ground_projector.copy(),
        effect_final=ground_projector.copy(),
        grid=TimeGrid(t_final=t_final, dt=dt),
        rabi_frequency=omega,
        rate=k,
        label=name,
    )


def boundary_preset(name: str, d: int = 2) -> ComplexMatrix:
    """Named boundary state: ground, excited, plus (|e>+|g>)/sqrt(2), or identity."""
    if name == "identity":
        return identity(d)
    if d != 2:
        raise ValueError(f"preset {name!r} is qubit-only; got dimension {d}")
    if name == "ground":
        return ground_projector.copy()
    if name == "excited":
        return excited_projector.copy()
    if name == "plus":
        return 0.5 * np.array([[1.0, 1.0], [1.0, 1.0]], dtype=complex)
    raise ValueError(f"unknown boundary preset {name!r}; expected one of {BOUNDARY_PRESETS}")


def photon_number(convention: str = "field") -> ComplexMatrix:
    """Photon-number operator for the two-level model.

    "field": n = sigma_- sigma_+ = (I - sigma_z)/2, so <n> rises as the atom
    drops to the ground state (field quanta deplete as the atom absorbs).
    "excitation": n = sigma_+ sigma_- = (I + sigma_z)/2, the atom excitation
    number.  An interpretation choice, not ground truth.
    """
    if convention == "field":
        return 0.5 * (identity(2) - sigma_z)
    if convention == "excitation":
        return 0.5 * (identity(2) + sigma_z)
    raise ValueError(
        f"unknown photon convention {convention!r}; expected one of {PHOTON_CONVENTIONS}"
    )


def observable_set(
    photon_convention: str = "field", voltage_strength: float = 1.0
) -> dict[str, ComplexMatrix | GaussianPovm]:
    """Named measured-signal operators; sigma_minus is deliberately non-Hermitian."""
    return {
        "sigma_z": sigma_z.copy(),
        "photon_n": photon_number(photon_convention),
        "sigma_minus": sigma_minus.copy(),
        "voltage": GaussianPovm(strength_a=voltage_strength, observable=sigma_z.copy()),
    }


def bloch_coordinates(state: ComplexMatrix) -> tuple[float, float, float]:
    """Trace-normalized (x, y, z) so effect states plot sensibly."""
    if state.shape != (2, 2):
        raise ValueError(f"bloch_coordinates: expected a 2x2 state, got {state.shape}")
    tr = np.trace(state)
    if abs(tr) < 1e-12:
        raise ValueError("bloch_coordinates: state trace is below 1e-12")
    x = np.trace(state @ sigma_x) / tr
    y = np.trace(state @ sigma_y) / tr
    z = np.trace(state @ sigma_z) / tr
    return (float(x.real), float(y.real), float(z.real))
