"""Block-diagonal doubling of the system space.

An ancilla qubit is prepended so that one 2d x 2d matrix

    varrho = (1/2) diag(rho, E)

carries both the forward state rho and the (time-reversed) effect state E.
A single forward-in-time master equation then evolves the pair: its top-left
block reproduces the forward generator and its bottom-right block the
forward version of the backward generator.  The dissipator mixes two operator
families: the sandwich term uses diag(C, C') while the anticommutator term
uses I x C.  That asymmetry is the whole point of the construction; do not
"simplify" it into a standard Lindblad form.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .dynamics import LindbladModel
from .linalg import (
    ComplexMatrix,
    commutator,
    dagger,
    decoder_m,
    decoder_n,
    frob_norm,
    identity,
    ket0_projector,
    ket1_projector,
    kron,
    matrix_exponential,
    sigma_y,
    sigma_z,
)

BLOCK_TOL = 1e-9


@dataclass(eq=False)
class EnlargedState:
    """A 2d x 2d doubled-space matrix; expected block-diagonal and Hermitian.

    Construction warns instead of raising on violations so that block
    preservation can be tested as a property rather than enforced.
    """

    matrix: ComplexMatrix
    dim_original: int

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        d = self.dim_original
        if self.matrix.shape != (2 * d, 2 * d):
            raise ValueError(
                f"enlarged matrix shape {self.matrix.shape} does not match 2x{d}"
            )
        if frob_norm(self.matrix - dagger(self.matrix)) > BLOCK_TOL:
            warnings.warn("enlarged state is not Hermitian within 1e-9", stacklevel=2)
        if self.off_block_norm() > BLOCK_TOL:
            warnings.warn("enlarged state is not block-diagonal within 1e-9", stacklevel=2)

    def block(self, index: int) -> ComplexMatrix:
        """Fast slicing accessor for the diagonal blocks (0 = forward, 1 = effect)."""
        d = self.dim_original
        sl = slice(0, d) if index == 0 else slice(d, 2 * d)
        return self.matrix[sl, sl]

    def off_block_norm(self) -> float:
        d = self.dim_original
        a = frob_norm(self.matrix[:d, d:])
        b = frob_norm(self.matrix[d:, :d])
        return max(a, b)


@dataclass(frozen=True, eq=False)
class EnlargedModel:
    """Doubled-space operators: diag(H, -H), diag(C_n, C_n'), and I x C_n."""

    hamiltonian_enlarged: ComplexMatrix
    jump_ops_enlarged: tuple[ComplexMatrix, ...]
    anticomm_ops_enlarged: tuple[ComplexMatrix, ...]

    @property
    def dim(self) -> int:
        return self.hamiltonian_enlarged.shape[0]


def embed(rho: ComplexMatrix, effect: ComplexMatrix) -> EnlargedState:
    """(1/2) diag(rho, effect); the 1/2 normalizes the combined trace."""
    rho = np.asarray(rho, dtype=complex)
    effect = np.asarray(effect, dtype=complex)
    if rho.shape != effect.shape or rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"embed: incompatible shapes {rho.shape} and {effect.shape}")
    d = rho.shape[0]
    out = np.zeros((2 * d, 2 * d), dtype=complex)
    out[:d, :d] = 0.5 * rho
    out[d:, d:] = 0.5 * effect
    return EnlargedState(matrix=out, dim_original=d)


def decode_rho(enl: EnlargedState) -> ComplexMatrix:
    """Recover the forward state: 2 M varrho N.

    Implemented as the literal decoder products (not block slicing) so the
    inversion identity itself stays under test; use EnlargedState.block for
    speed.
    """
    d = enl.dim_original
    return 2.0 * (decoder_m(d) @ enl.matrix @ decoder_n(d))


def decode_effect(enl: EnlargedState) -> ComplexMatrix:
    """Recover the effect state: 2 M varrho (sigma_x x I) N."""
    d = enl.dim_original
    swap = kron(np.array([[0.0, 1.0], [1.0, 0.0]]), identity(d))
    return 2.0 * (decoder_m(d) @ enl.matrix @ swap @ decoder_n(d))


def enlarge_model(model: LindbladModel) -> EnlargedModel:
    """Build the doubled-space operators from an original-space model."""
    h = kron(sigma_z, model.hamiltonian)
    jumps = tuple(
        kron(ket0_projector, c) + kron(ket1_projector, dagger(c))
        for c in model.lindblad_ops
    )
    anticomms = tuple(kron(identity(2), c) for c in model.lindblad_ops)
    return EnlargedModel(
        hamiltonian_enlarged=h,
        jump_ops_enlarged=jumps,
        anticomm_ops_enlarged=anticomms,
    )


def enlarged_rhs(
    enl_model: EnlargedModel, enl_state: EnlargedState | ComplexMatrix
) -> ComplexMatrix:
    """Doubled-space generator.

    The sandwich term uses the jump operators while the anticommutator term
    uses the I x C family; the map is therefore not trace preserving in
    general (only the top-left block trace is conserved).
    """
    x = enl_state.matrix if isinstance(enl_state, EnlargedState) else np.asarray(enl_state)
    if x.shape != (enl_model.dim, enl_model.dim):
        raise ValueError(
            f"enlarged_rhs: state shape {x.shape} does not match model dim {enl_model.dim}"
        )
    out = -1j * commutator(enl_model.hamiltonian_enlarged, x)
    for c, cbar in zip(enl_model.jump_ops_enlarged, enl_model.anticomm_ops_enlarged):
        k = dagger(cbar) @ cbar
        out += c @ x @ dagger(c) - 0.5 * (k @ x + x @ k)
    return out


def enlarged_unitary(omega: float, t: float) -> ComplexMatrix:
    """Closed-system doubled-space propagator exp(-i (omega/2) (sigma_z x sigma_y) t)."""
    return matrix_exponential(-0.5j * omega * t * kron(sigma_z, sigma_y))
