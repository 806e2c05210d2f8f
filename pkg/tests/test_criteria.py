"""Instability criteria and threshold wavenumbers against independent oracles."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parkerstab.criteria import (
    buoyancy_margin,
    evaluate_criteria,
    instability_weight,
    kappa,
    poincare_ratio,
    rt_margin,
    schwarzschild_margin,
    tserkovnikov_margin,
    varpi_and_strip_bound,
    xi_2d,
    xi_3d,
    xi_3d_maximizer,
    xi_3d_of_psi,
)
from parkerstab.errors import DegenerateField
from parkerstab.grid import build_grid
from parkerstab.profiles import DensitySpec, PhysicalParams, build_equilibrium


def test_poincare_ratio_exact_value():
    # sup ||psi|| / ||psi'|| on (a, b) is (b - a)/pi
    assert poincare_ratio(0.0, np.pi, 512) == pytest.approx(1.0, rel=5e-3)
    assert poincare_ratio(0.0, 2.0, 512) == pytest.approx(2.0 / np.pi, rel=5e-3)


def test_poincare_ratio_second_order_convergence():
    errs = [abs(poincare_ratio(0.0, np.pi, n) - 1.0) for n in (127, 255, 511)]
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.1)
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.1)


def test_poincare_ratio_validation():
    with pytest.raises(ValueError):
        poincare_ratio(1.0, 0.0, 64)
    with pytest.raises(ValueError):
        poincare_ratio(0.0, 1.0, 4)


@given(gamma=st.floats(1.0, 2.0), grav=st.floats(0.1, 4.0),
       H=st.floats(0.4, 3.0), contrast=st.floats(-0.6, 0.6))
@settings(max_examples=40, deadline=None)
def test_schwarzschild_equals_negative_buoyancy_sign(gamma, grav, H, contrast):
    """sign(S) = -sign((m^2)') nodewise, a consequence of the balance law."""
    params = PhysicalParams(lam=1.0, gamma=gamma, A=1.0, mu1=0.01, nu=0.01,
                            gravity=grav)
    if abs(contrast) < 1e-3:
        dens = DensitySpec(kind="exponential", rho0=1.0, scale_height=H)
    else:
        dens = DensitySpec(kind="tanh-layer", rho0=1.0, contrast=contrast,
                           width=0.3)
    prof = build_equilibrium(params, dens, build_grid(-1, 1, 48), margin=0.5)
    S, _ = schwarzschild_margin(prof)
    b, _ = buoyancy_margin(prof)
    tol = 1e-8 * (np.max(np.abs(S)) + np.max(np.abs(b)))
    mask = (np.abs(S) > tol) & (np.abs(b) > tol)
    assert np.all(np.sign(S[mask]) == -np.sign(b[mask]))


def test_margin_flags_on_presets(preset_profiles):
    flags = {}
    for name, (p, prof) in preset_profiles.items():
        flags[name] = (
            schwarzschild_margin(prof)[1],
            tserkovnikov_margin(prof)[1],
            rt_margin(prof)[1],
        )
    assert flags["uniform-g0"] == (False, False, False)
    assert flags["schwarzschild-exp"] == (True, False, False)
    assert flags["tserkovnikov-layer"] == (True, True, False)
    assert flags["rt-tanh"][2] is True
    assert flags["strong-field"][0] is True


def test_tserkovnikov_implies_schwarzschild(named_profile):
    # gamma P + lam m^2 >= gamma P, so T > 0 somewhere forces S > 0 somewhere
    _, _, prof = named_profile
    if tserkovnikov_margin(prof)[1]:
        assert schwarzschild_margin(prof)[1]


def test_varpi_and_strip_bound_manual():
    params = PhysicalParams(gravity=1.0)
    dens = DensitySpec(kind="exponential", rho0=1.0, scale_height=1.0)
    prof = build_equilibrium(params, dens, build_grid(-1, 1, 64), margin=0.5)
    W = instability_weight(prof)
    varpi, bound, sufficient = varpi_and_strip_bound(prof, -1.0, 1.0)
    assert varpi == pytest.approx(np.sqrt(np.max(np.abs(W)) / params.lam))
    assert bound == pytest.approx(2.0 * varpi / np.pi)
    assert sufficient == (np.min(np.abs(prof.m)) > bound)
    with pytest.raises(ValueError):
        varpi_and_strip_bound(prof, 1.0, -1.0)


@given(s=st.floats(0.5, 4.0))
@settings(max_examples=15, deadline=None)
def test_kappa_inverse_field_scaling(s, preset_profiles):
    """kappa(s*m) = kappa(m)/s: the denominator form scales with s^2."""
    _, prof = preset_profiles["strong-field"]
    assert kappa(prof.scale_field(s)) == pytest.approx(kappa(prof) / s, rel=1e-9)


def test_xi2d_inverse_field_scaling_when_weight_dominates(preset_profiles):
    # for large xi the numerator form is gradient-dominated; exact scaling
    # holds only for kappa, so check the qualitative decrease instead
    _, prof = preset_profiles["strong-field"]
    vals = [xi_2d(prof.scale_field(s)) for s in (1.0, 2.0, 4.0)]
    assert vals[0] > 0
    assert vals[0] >= vals[1] >= vals[2]
    # a strong enough field closes the 2D unstable window entirely
    assert vals[2] == 0.0


def test_xi3d_monotone_in_l2(preset_profiles):
    # shrinking the transverse period (larger 1/L2) weakens the tension term
    _, prof = preset_profiles["schwarzschild-exp"]
    a = xi_3d(prof, L2=0.5)
    b = xi_3d(prof, L2=1.0)
    c = xi_3d(prof, L2=4.0)
    assert a >= b >= c > 0
    assert c >= xi_2d(prof) - 1e-6


def test_xi3d_agrees_with_per_psi_radical(preset_profiles):
    """Nested-radical evaluation at the discrete maximizer reproduces xi_3d."""
    _, prof = preset_profiles["schwarzschild-exp"]
    L2 = 1.0
    t = xi_3d(prof, L2=L2)
    psi = xi_3d_maximizer(prof, t, L2)
    assert xi_3d_of_psi(prof, psi, L2) == pytest.approx(t, rel=1e-5)


def test_xi3d_of_psi_below_threshold_for_any_psi(preset_profiles, rng):
    # every test function gives a lower bound on the sup-defined threshold
    _, prof = preset_profiles["schwarzschild-exp"]
    t = xi_3d(prof, L2=1.0)
    x = (prof.grid.nodes - prof.grid.lo) / (prof.grid.hi - prof.grid.lo)
    for k in range(1, 6):
        psi = np.sin(np.pi * k * x)
        assert xi_3d_of_psi(prof, psi, 1.0) <= t * (1 + 1e-6)


def test_thresholds_zero_without_gravity(preset_profiles):
    _, prof = preset_profiles["uniform-g0"]
    assert kappa(prof) == 0.0
    assert xi_3d(prof, L2=1.0) == 0.0


def test_degenerate_field_raises(preset_profiles):
    _, prof = preset_profiles["schwarzschild-exp"]
    with pytest.raises(DegenerateField):
        kappa(prof.scale_field(0.0))


def test_evaluate_criteria_report_summary(preset_profiles):
    _, prof = preset_profiles["schwarzschild-exp"]
    rep = evaluate_criteria(prof, L2=1.0)
    s = rep.summary()
    assert s["schwarzschild_holds"] is True
    assert s["tserkovnikov_holds"] is False
    assert s["xi3d"] > 0
    assert rep.xi3d == pytest.approx(xi_3d(prof, L2=1.0))
    assert set(s) >= {"kappa", "xi2d", "xi3d", "varpi", "strip_bound"}
