"""Shared fixtures: the production parameter set and expensive solver artifacts.

Session scope keeps the ground states and quench runs computed once for the
whole suite.
"""

import numpy as np
import pytest

import becfocus as bf
from becfocus.dynamics import EvolutionConfig, evolve_1d


@pytest.fixture(scope="session")
def params():
    return bf.rb87_defaults()


@pytest.fixture(scope="session")
def units(params):
    return bf.UnitSystem.from_params(params)


@pytest.fixture(scope="session")
def g_initial(params, units):
    return units.coupling_1d_from_si(
        bf.effective_coupling_1d(params, bf.Regime.WEAKLY_INTERACTING))


@pytest.fixture(scope="session")
def default_grid():
    return bf.Grid1D(4096, -12.0, 12.0)


@pytest.fixture(scope="session")
def trap_l10(params, units):
    return bf.lg_power_law(params, 10, units)


@pytest.fixture(scope="session")
def ground_l10(trap_l10, g_initial, default_grid):
    """Production-grid ground state of the order-10 trap."""
    state, report = bf.solve_ground_1d(trap_l10, g_initial, default_grid)
    return state, report


@pytest.fixture(scope="session")
def quench_runs(ground_l10, g_initial):
    """Traces and final states for the two benchmark quenches."""
    ground, _ = ground_l10
    cfg = EvolutionConfig(dt=1e-4, t_end=0.4, store_every=2,
                          snapshot_every=10, monitor_boundary=False)
    out = {}
    for label, ratio in (("free", 0.0), ("weak", 0.58 / 100.0)):
        trace, final = evolve_1d(ground, g_initial * ratio, bf.Zero(), cfg,
                                 keep_snapshots=True)
        out[label] = (trace, final, g_initial * ratio)
    return out


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20210813)
