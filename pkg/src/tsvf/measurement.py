"""Weak values, the Gaussian voltage POVM, and jump detection.

A weak value Tr[E A rho] / Tr[E rho] conditions the observable A on both a
forward state rho and an effect state E.  Two pairings are provided:

  conventional: rho at t with the effect at the same t;
  two-time:     rho at t with the effect at T - t.

The two-time pairing is evaluable from a single doubled-space state, which is
what makes it continuously monitorable; it coincides with the conventional
value at t = T/2.  Both are also available in literal decoder-product form
operating directly on doubled-space states.

Weak values stay complex end to end.  Near-orthogonal conditioning makes the
denominator vanish; such samples are flagged `diverged` rather than raised,
because the blow-up is physical amplification, not an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from .dynamics import Trajectory
from .enlarged import EnlargedState
from .linalg import (
    ComplexMatrix,
    dagger,
    decoder_m,
    decoder_n,
    frob_norm,
    identity,
    is_hermitian,
    kron,
    sigma_z,
)

#: |denominator| below this multiple of the two states' Frobenius-norm product
#: flags the sample as diverged.  Relative, so pure rescaling cannot flip it.
DIVERGENCE_REL_TOL = 1e-10

QUAD_ABS_TOL = 1e-10


@dataclass(frozen=True)
class WeakValueSample:
    """One weak-value sample; `value` is meaningless when `diverged` is set."""

    time: float
    value: complex
    denominator: complex
    diverged: bool


@dataclass(frozen=True, eq=False)
class GaussianPovm:
    """Gaussian-pointer measurement family for a Hermitian observable.

    The operator for outcome v is (2 pi a^2)^(-1/4) exp(-(v - A)^2 / 4 a^2);
    larger `strength_a` means a wider pointer, i.e. a weaker measurement.
    """

    strength_a: float
    observable: ComplexMatrix = sigma_z

    def __post_init__(self):
        object.__setattr__(self, "observable", np.asarray(self.observable, dtype=complex))
        if self.strength_a <= 0:
            raise ValueError(f"strength_a must be positive, got {self.strength_a}")
        if not is_hermitian(self.observable, 1e-12):
            raise ValueError("POVM observable must be Hermitian within 1e-12")


def expectation(observable: ComplexMatrix, state: ComplexMatrix) -> complex:
    """Tr(state @ observable) / Tr(state); trace-normalized so effect states work too."""
    if observable.shape != state.shape:
        raise ValueError(
            f"expectation: shapes {observable.shape} and {state.shape} do not match"
        )
    tr = np.trace(state)
    if abs(tr) < 1e-12:
        raise ValueError("expectation: state trace is below 1e-12 (degenerate state)")
    return complex(np.trace(state @ observable) / tr)


def _weak_sample(
    numerator: complex, denominator: complex, scale: float, time: float
) -> WeakValueSample:
    diverged = abs(denominator) < DIVERGENCE_REL_TOL * scale
    if denominator != 0:
        value = complex(numerator / denominator)
    else:
        value = complex(np.nan, np.nan)
    return WeakValueSample(
        time=time, value=value, denominator=complex(denominator), diverged=diverged
    )


def conventional_weak_value(
    observable: ComplexMatrix,
    rho_t: ComplexMatrix,
    effect_t: ComplexMatrix,
    time: float = 0.0,
) -> WeakValueSample:
    """Tr[E A rho] / Tr[E rho] with rho and E taken at the same time."""
    num = np.trace(effect_t @ observable @ rho_t)
    den = np.trace(effect_t @ rho_t)
    return _weak_sample(num, den, frob_norm(rho_t) * frob_norm(effect_t), time)


def two_time_weak_value(
    observable: ComplexMatrix,
    rho_t: ComplexMatrix,
    effect_Tmt: ComplexMatrix,
    time: float = 0.0,
) -> WeakValueSample:
    """Tr[E A rho] / Tr[E rho] with rho at t paired against the effect at T - t."""
    num = np.trace(effect_Tmt @ observable @ rho_t)
    den = np.trace(effect_Tmt @ rho_t)
    return _weak_sample(num, den, frob_norm(rho_t) * frob_norm(effect_Tmt), time)


def _decoder_factors(enl: EnlargedState) -> tuple[ComplexMatrix, ComplexMatrix]:
    """(rho/2, E/2) via the literal decoder products on one doubled-space state."""
    d = enl.dim_original
    m, n = decoder_m(d), decoder_n(d)
    swap = kron(np.array([[0.0, 1.0], [1.0, 0.0]]), identity(d))
    rho_half = m @ enl.matrix @ n
    eff_half = m @ enl.matrix @ swap @ n
    return rho_half, eff_half


def conventional_weak_value_enlarged(
    observable: ComplexMatrix,
    enl_t: EnlargedState,
    enl_Tmt: EnlargedState,
    time: float = 0.0,
) -> WeakValueSample:
    """Conventional weak value from two doubled-space states.

    The effect at t lives in the state at T - t, so this needs both samples;
    it cannot be monitored from the doubled trajectory one sample at a time.
    """
    rho_half, _ = _decoder_factors(enl_t)
    _, eff_half = _decoder_factors(enl_Tmt)
    num = np.trace(eff_half @ observable @ rho_half)
    den = np.trace(eff_half @ rho_half)
    return _weak_sample(num, den, frob_norm(rho_half) * frob_norm(eff_half), time)


def two_time_weak_value_enlarged(
    observable: ComplexMatrix, enl_t: EnlargedState, time: float = 0.0
) -> WeakValueSample:
    """Two-time weak value from a single doubled-space state.

    Builds the product state (M varrho N)(M varrho (sigma_x x I) N) and takes
    Tr[A .] / Tr[.]; everything is read off varrho at one time, which is the
    central payoff of the doubling.
    """
    rho_half, eff_half = _decoder_factors(enl_t)
    product = rho_half @ eff_half
    num = np.trace(observable @ product)
    den = np.trace(product)
    return _weak_sample(num, den, frob_norm(rho_half) * frob_norm(eff_half), time)


def conventional_series(
    observable: ComplexMatrix, enlarged_traj: Trajectory
) -> list[WeakValueSample]:
    """Conventional weak value at every sample, pairing sample i with sample n - i."""
    times = enlarged_traj.grid.times
    n = enlarged_traj.grid.n_steps
    d = enlarged_traj.dim // 2
    out = []
    for i in range(n + 1):
        enl_t = EnlargedState(enlarged_traj.states[i], d)
        enl_rev = EnlargedState(enlarged_traj.states[n - i], d)
        out.append(
            conventional_weak_value_enlarged(observable, enl_t, enl_rev, time=times[i])
        )
    return out


def two_time_series(
    observable: ComplexMatrix, enlarged_traj: Trajectory
) -> list[WeakValueSample]:
    """Two-time weak value at every sample of a doubled-space trajectory."""
    times = enlarged_traj.grid.times
    d = enlarged_traj.dim // 2
    return [
        two_time_weak_value_enlarged(
            observable, EnlargedState(state, d), time=times[i]
        )
        for i, state in enumerate(enlarged_traj.states)
    ]


# ---------------------------------------------------------------------------
# Gaussian voltage POVM
# ---------------------------------------------------------------------------


def povm_operator(povm: GaussianPovm, v: float) -> ComplexMatrix:
    """Measurement operator for outcome v, as a matrix function of the observable."""
    a = povm.strength_a
    eigs, vecs = np.linalg.eigh(povm.observable)
    weights = (2.0 * np.pi * a * a) ** (-0.25) * np.exp(-((v - eigs) ** 2) / (4.0 * a * a))
    return (vecs * weights) @ dagger(vecs)


def voltage_pdf(
    povm: GaussianPovm, rho_t: ComplexMatrix, effect: ComplexMatrix, v: float
) -> float:
    """Unnormalized outcome density Tr(Omega_v rho Omega_v' E).

    Nonnegative for PSD rho and E; divide by `voltage_normalization` to get a
    probability density.
    """
    om = povm_operator(povm, v)
    val = np.trace(om @ rho_t @ dagger(om) @ effect)
    return float(val.real)


def _quad_range(a: float) -> tuple[float, float]:
    return (-1.0 - 8.0 * a, 1.0 + 8.0 * a)


def voltage_normalization(
    povm: GaussianPovm, rho_t: ComplexMatrix, effect: ComplexMatrix
) -> float:
    """Adaptive quadrature of the unnormalized density over the +-8a support."""
    lo, hi = _quad_range(povm.strength_a)
    val, _ = quad(
        lambda v: voltage_pdf(povm, rho_t, effect, v),
        lo,
        hi,
        epsabs=QUAD_ABS_TOL,
        epsrel=QUAD_ABS_TOL,
        limit=200,
    )
    return float(val)


def voltage_mean_quadrature(
    povm: GaussianPovm, rho_t: ComplexMatrix, effect: ComplexMatrix
) -> float:
    """First moment of the normalized outcome density, by adaptive quadrature."""
    lo, hi = _quad_range(povm.strength_a)
    num, _ = quad(
        lambda v: v * voltage_pdf(povm, rho_t, effect, v),
        lo,
        hi,
        epsabs=QUAD_ABS_TOL,
        epsrel=QUAD_ABS_TOL,
        limit=200,
    )
    return float(num) / voltage_normalization(povm, rho_t, effect)


def _voltage_analytic(
    enl_t: EnlargedState,
    enl_ref: EnlargedState,
    exact_correction: bool,
    strength_a: float,
    time: float,
) -> WeakValueSample:
    r = enl_t.matrix
    e = enl_ref.matrix
    diag = r[0, 0] * e[2, 2] + r[1, 1] * e[3, 3]
    num = r[0, 0] * e[2, 2] - r[1, 1] * e[3, 3]
    cross = r[1, 0] * e[2, 3] + r[0, 1] * e[3, 2]
    if exact_correction:
        # The Gaussian moments damp the cross term by exp(-1/2a^2); dropping
        # the factor is the wide-pointer (a -> infinity) reading.
        cross = cross * np.exp(-1.0 / (2.0 * strength_a * strength_a))
    den = diag + cross
    scale = frob_norm(enl_t.matrix) * frob_norm(enl_ref.matrix)
    return _weak_sample(num, den, scale, time)


def voltage_weak_value_analytic(
    enl_t: EnlargedState,
    enl_Tmt: EnlargedState,
    exact_correction: bool = False,
    strength_a: float = 1.0,
    time: float = 0.0,
) -> WeakValueSample:
    """Closed-form mean voltage conditioned on rho at t and the effect at t.

    Element products of the doubled-space states at t and T - t; qubit only.
    """
    if enl_t.dim_original != 2 or enl_Tmt.dim_original != 2:
        raise ValueError("voltage weak values are defined for the qubit case only")
    return _voltage_analytic(enl_t, enl_Tmt, exact_correction, strength_a, time)


def voltage_two_time_weak_value_analytic(
    enl_t: EnlargedState,
    exact_correction: bool = False,
    strength_a: float = 1.0,
    time: float = 0.0,
) -> WeakValueSample:
    """Closed-form two-time mean voltage; all elements read off the one state at t."""
    if enl_t.dim_original != 2:
        raise ValueError("voltage weak values are defined for the qubit case only")
    return _voltage_analytic(enl_t, enl_t, exact_correction, strength_a, time)


# ---------------------------------------------------------------------------
# Jump detection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JumpEvent:
    """One transit of Re(value) between the -threshold and +threshold zones."""

    t_start: float
    t_end: float
    direction: int  # +1 for low -> high, -1 for high -> low

    @property
    def delta_j(self) -> float:
        return self.t_end - self.t_start


def _cross_time(t0: float, v0: float, t1: float, v1: float, level: float) -> float:
    if v1 == v0:
        return t1
    s = (level - v0) / (v1 - v0)
    return t0 + s * (t1 - t0)


def detect_jumps(
    series: Sequence[WeakValueSample], threshold: float
) -> list[JumpEvent]:
    """Find maximal transits of Re(value) across [-threshold, +threshold].

    Diverged samples are skipped.  Endpoint times are linearly interpolated
    threshold crossings, so jump durations are sub-sample accurate: t_start is
    where the signal last left the departure zone, t_end where it first
    entered the arrival zone.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    pts = [(s.time, s.value.real) for s in series if not s.diverged]
    events: list[JumpEvent] = []
    prev_zone = 0
    prev_pos = -1
    for pos, (_, v) in enumerate(pts):
        zone = 1 if v >= threshold else (-1 if v <= -threshold else 0)
        if zone == 0:
            continue
        if prev_zone != 0 and zone != prev_zone:
            t_start = _cross_time(*pts[prev_pos], *pts[prev_pos + 1], prev_zone * threshold)
            t_end = _cross_time(*pts[pos - 1], *pts[pos], zone * threshold)
            events.append(JumpEvent(t_start=t_start, t_end=t_end, direction=zone))
        prev_zone, prev_pos = zone, pos
    return events
