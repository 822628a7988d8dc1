"""Shared fixtures: the two reference scenarios integrated once per session."""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial

import pytest

from tsvf.dynamics import Trajectory, backward_forward_rhs, forward_rhs, integrate
from tsvf.enlarged import embed, enlarge_model, enlarged_rhs
from tsvf.models import Scenario, paper_scenario


@dataclass
class ScenarioBundle:
    """Forward, backward-forward, and doubled-space trajectories of one scenario."""

    scenario: Scenario
    forward: Trajectory
    backward_forward: Trajectory  # sample i is the effect at T - i*dt
    enlarged: Trajectory


def make_bundle(scenario: Scenario) -> ScenarioBundle:
    forward = integrate(
        partial(forward_rhs, scenario.model), scenario.rho_initial, scenario.grid
    )
    backward_forward = integrate(
        partial(backward_forward_rhs, scenario.model),
        scenario.effect_final,
        scenario.grid,
    )
    enl_model = enlarge_model(scenario.model)
    enlarged = integrate(
        partial(enlarged_rhs, enl_model),
        embed(scenario.rho_initial, scenario.effect_final).matrix,
        scenario.grid,
    )
    return ScenarioBundle(
        scenario=scenario,
        forward=forward,
        backward_forward=backward_forward,
        enlarged=enlarged,
    )


@pytest.fixture(scope="session")
def fluorescence_bundle() -> ScenarioBundle:
    return make_bundle(paper_scenario("fluorescence", t_final=2e-6, dt=1e-9))


@pytest.fixture(scope="session")
def dephasing_bundle() -> ScenarioBundle:
    return make_bundle(paper_scenario("dephasing", t_final=2e-6, dt=1e-9))


@pytest.fixture(scope="session")
def both_bundles(fluorescence_bundle, dephasing_bundle) -> list[ScenarioBundle]:
    return [fluorescence_bundle, dephasing_bundle]
