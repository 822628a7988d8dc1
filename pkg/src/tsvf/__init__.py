"""Simulator for open quantum systems bounded by past and future conditions."""

from .dynamics import (
    IntegrationDivergedError,
    LindbladModel,
    TimeGrid,
    Trajectory,
    backward_forward_rhs,
    backward_rhs,
    forward_rhs,
    integrate,
    time_reverse,
)
from .enlarged import (
    EnlargedModel,
    EnlargedState,
    decode_effect,
    decode_rho,
    embed,
    enlarge_model,
    enlarged_rhs,
    enlarged_unitary,
)
from .measurement import (
    GaussianPovm,
    JumpEvent,
    WeakValueSample,
    conventional_weak_value,
    conventional_weak_value_enlarged,
    detect_jumps,
    expectation,
    two_time_weak_value,
    two_time_weak_value_enlarged,
    voltage_mean_quadrature,
    voltage_pdf,
    voltage_two_time_weak_value_analytic,
    voltage_weak_value_analytic,
)
from .models import (
    Scenario,
    bloch_coordinates,
    dephasing_qubit,
    paper_scenario,
    resonance_fluorescence,
)

__version__ = "0.1.0"

__all__ = [
    "IntegrationDivergedError",
    "LindbladModel",
    "TimeGrid",
    "Trajectory",
    "backward_forward_rhs",
    "backward_rhs",
    "forward_rhs",
    "integrate",
    "time_reverse",
    "EnlargedModel",
    "EnlargedState",
    "decode_effect",
    "decode_rho",
    "embed",
    "enlarge_model",
    "enlarged_rhs",
    "enlarged_unitary",
    "GaussianPovm",
    "JumpEvent",
    "WeakValueSample",
    "conventional_weak_value",
    "conventional_weak_value_enlarged",
    "detect_jumps",
    "expectation",
    "two_time_weak_value",
    "two_time_weak_value_enlarged",
    "voltage_mean_quadrature",
    "voltage_pdf",
    "voltage_two_time_weak_value_analytic",
    "voltage_weak_value_analytic",
    "Scenario",
    "bloch_coordinates",
    "dephasing_qubit",
    "paper_scenario",
    "resonance_fluorescence",
    "__version__",
]
