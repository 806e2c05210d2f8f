"""Magnetohydrostatic equilibria and linear Parker-instability growth rates."""

from .grid import Grid1D, build_grid
from .profiles import (
    DensitySpec,
    EquilibriumProfile,
    PhysicalParams,
    build_equilibrium,
    equilibrium_residual,
    load_tabulated_profile,
)
from .criteria import (
    CriteriaReport,
    evaluate_criteria,
    kappa,
    poincare_ratio,
    varpi_and_strip_bound,
    xi_2d,
    xi_3d,
    xi_3d_of_psi,
)
from .energy import (
    GridField3D,
    ModalField,
    ModeSpec,
    dissipation,
    energy_Ec,
    energy_E_grid,
    energy_E_rewritten,
    energy_tilde,
    energy_tilde_2d,
    lift_modal_field,
    newcomb_construction,
    tserkovnikov_construction,
)
from .spectral import (
    GrowthResult,
    ModalOperators,
    alpha_of_s,
    assemble_operators,
    growth_rate_fixed_point,
    qep_residual,
    solve_qep,
)
from .evolve import ModeState, Trajectory, evolve_mode, fit_growth_rate
from .scan import DispersionTable, ScanSpec, Verdict, dispersion_scan, stability_verdict
from .presets import PRESETS, build_preset_profile, get_preset

__version__ = "0.1.0"
