"""Diffractive focusing of box-trapped Bose-Einstein condensates.

Ground-state preparation in ring-beam box traps, interaction-quench free
evolution of the effective 1D mean-field equation, focusing metrics, Wigner
phase-space analysis, classical trajectories, parameter sweeps, and a
reduced-scale 3D validation pathway.
"""

from .dynamics import (DensityTrace, EvolutionConfig, QuenchProtocol,
                       evolve_1d, evolve_3d, phase_imprint)
from .grids import (Grid1D, Grid3D, WaveFunction, make_grid_1d, norm,
                    normalize, overlap, probability_density, resample,
                    to_momentum, to_position)
from .groundstate import (GroundStateError, GroundStateReport, ItpConfig,
                          solve_ground_1d, solve_ground_3d)
from .gpe3d import ComparisonReport, default_grid3, validate_quasi1d
from .metrics import (FocusReport, RectangleState, fidelity, focusing_factor,
                      rectangle_state)
from .potentials import (HardBox, Harmonic2D, LGFull, LGPowerLaw, TFProfile1D,
                         Zero, lg_full, lg_intensity, lg_power_law, tf_profile)
from .sweep import SweepAxis, SweepConfig, SweepResult, as_from_gt, gt_from_as, run_sweep
from .trajectories import DensityMovie, Trajectory, integrate_trajectory
from .units import (BOHR_RADIUS, HBAR, RB87_MASS, InteractionParams,
                    PhysicalParams, Regime, UnitSystem, contact_coupling,
                    effective_coupling_1d, interaction_ratio, rb87_defaults,
                    tf_chemical_potential, tf_energy_per_particle,
                    tf_total_energy, transverse_energy_offset,
                    transverse_overlap)
from .wigner import (WignerGrid, marginal_momentum, marginal_position,
                     negativity_volume, purity, wigner_transform)

__version__ = "0.1.0"
