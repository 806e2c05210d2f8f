"""Time integrator: divergence conservation, linearity, growth-rate recovery."""

import numpy as np
import pytest

from parkerstab.energy import ModeSpec
from parkerstab.errors import InsufficientData, InvalidMode
from parkerstab.evolve import (
    ModeState,
    divergence,
    evolve_mode,
    fit_growth_rate,
    random_state,
    stable_dt,
    state_from_eigenfield,
)
from parkerstab.grid import diff_center
from parkerstab.spectral import assemble_operators, growth_rate_fixed_point


def test_random_state_is_divergence_free(preset_profiles):
    _, prof = preset_profiles["schwarzschild-exp"]
    Dz = diff_center(prof.grid)
    for mode in (ModeSpec(0.5, 1.0), ModeSpec(0.0, 1.0), ModeSpec(0.0, 0.0)):
        st = random_state(prof, mode, seed=3)
        d = divergence(st, mode, Dz)
        assert np.max(np.abs(d)) <= 1e-12 * np.linalg.norm(st.N_hat)


def test_divergence_conserved_along_trajectory(preset_profiles):
    _, prof = preset_profiles["schwarzschild-exp"]
    mode = ModeSpec(0.5, 1.0)
    traj = evolve_mode(prof, mode, random_state(prof, mode, seed=1), t_end=1.0)
    assert traj.div_drift <= 1e-10


def test_eigen_lift_reproduces_growth_rate(preset_profiles):
    """Starting on the eigenfunction, the fitted sigma matches the eigenvalue."""
    _, prof = preset_profiles["schwarzschild-exp"]
    mode = ModeSpec(0.25, 1.0)
    fp = growth_rate_fixed_point(assemble_operators(prof, mode))
    lam = fp.lam.real
    init = state_from_eigenfield(prof, fp.field, lam)
    traj = evolve_mode(prof, mode, init, t_end=2.0)
    sigma, rms = fit_growth_rate(traj)
    assert sigma == pytest.approx(lam, rel=2e-2)
    assert rms < 1e-3
    assert traj.div_drift <= 1e-10


def test_evolution_is_linear(preset_profiles):
    _, prof = preset_profiles["uniform-g0"]
    mode = ModeSpec(1.0, 0.0)
    a = random_state(prof, mode, seed=5)
    b = ModeState(2.0 * a.rho_hat, 2.0 * a.v_hat, 2.0 * a.N_hat)
    ta = evolve_mode(prof, mode, a, t_end=0.5)
    tb = evolve_mode(prof, mode, b, t_end=0.5)
    assert np.allclose(tb.amplitude, 2.0 * ta.amplitude, rtol=1e-10)


def test_damped_preset_decays(preset_profiles):
    _, prof = preset_profiles["uniform-g0"]
    mode = ModeSpec(1.0, 1.0)
    traj = evolve_mode(prof, mode, random_state(prof, mode, seed=9), t_end=4.0)
    sigma, rms = fit_growth_rate(traj)
    assert sigma <= max(rms, 1e-8)


def test_dt_validation(preset_profiles):
    _, prof = preset_profiles["uniform-g0"]
    mode = ModeSpec(1.0, 0.0)
    st = random_state(prof, mode, seed=0)
    with pytest.raises(InvalidMode):
        evolve_mode(prof, mode, st, t_end=1.0, dt=10 * stable_dt(prof))
    with pytest.raises(ValueError):
        evolve_mode(prof, mode, st, t_end=-1.0)


def test_fit_window_validation(preset_profiles):
    _, prof = preset_profiles["uniform-g0"]
    mode = ModeSpec(1.0, 0.0)
    traj = evolve_mode(prof, mode, random_state(prof, mode, seed=0), t_end=0.5)
    with pytest.raises(ValueError):
        fit_growth_rate(traj, window=0.0)
    with pytest.raises(InsufficientData):
        fit_growth_rate(traj, window=0.01)


def test_keep_states_round_trip(preset_profiles):
    _, prof = preset_profiles["uniform-g0"]
    mode = ModeSpec(1.0, 0.0)
    traj = evolve_mode(prof, mode, random_state(prof, mode, seed=2),
                       t_end=0.2, keep_states=True)
    assert len(traj.states) == len(traj.times)
    assert traj.states[-1].t == pytest.approx(0.2)
