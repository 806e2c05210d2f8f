"""Built-in equilibrium presets.

The presets exist so that every branch of the stability analysis is
exercisable with known qualitative behaviour:

* uniform-g0        : no gravity, constant density; every mode is damped.
* schwarzschild-exp : exponential stratification with a moderate field;
                      the buoyancy margin is positive everywhere, the
                      Tserkovnikov margin negative everywhere, so the
                      unstable band lives strictly inside 0 < xi1 < xi_3d.
* tserkovnikov-layer: same stratification with a weak field; the
                      field-corrected margin is positive near the top of the
                      layer and the xi1 = 0 mode grows.
* rt-tanh           : heavy-over-light tanh layer (rho' > 0 at the layer).
* strong-field      : sharply stratified layer whose base field sits just
                      above the kappa = 1 threshold; scale_field pushes kappa
                      (and the wavenumber thresholds) monotonically down.
"""

from __future__ import annotations

from dataclasses import dataclass

from .profiles import DensitySpec, PhysicalParams, build_equilibrium, build_grid

__all__ = ["Preset", "PRESETS", "get_preset", "build_preset_profile"]


@dataclass(frozen=True)
class Preset:
    name: str
    params: PhysicalParams
    dens: DensitySpec
    l: float            # profile interval is (-l, l)
    margin: float
    L1: float
    L2: float
    field_scale: float = 1.0


PRESETS = {
    "uniform-g0": Preset(
        name="uniform-g0",
        params=PhysicalParams(lam=2.0, gamma=1.0, A=1.0, mu1=0.05, nu=0.05, gravity=0.0),
        dens=DensitySpec(kind="constant", rho0=1.0),
        l=1.0, margin=1.0, L1=1.0, L2=1.0,
    ),
    "schwarzschild-exp": Preset(
        name="schwarzschild-exp",
        params=PhysicalParams(lam=1.0, gamma=1.0, A=1.0, mu1=0.03, nu=0.03, gravity=2.0),
        dens=DensitySpec(kind="exponential", rho0=1.0, scale_height=1.0),
        l=1.0, margin=0.5, L1=4.0, L2=1.0,
    ),
    "tserkovnikov-layer": Preset(
        name="tserkovnikov-layer",
        params=PhysicalParams(lam=1.0, gamma=1.0, A=1.0, mu1=0.02, nu=0.02, gravity=2.0),
        dens=DensitySpec(kind="exponential", rho0=1.0, scale_height=2.0),
        l=1.0, margin=0.1, L1=4.0, L2=1.0,
    ),
    "rt-tanh": Preset(
        name="rt-tanh",
        params=PhysicalParams(lam=1.0, gamma=1.4, A=1.0, mu1=0.02, nu=0.02, gravity=1.0),
        dens=DensitySpec(kind="tanh-layer", rho0=1.0, contrast=0.5,
                         center=0.0, width=0.25),
        l=1.0, margin=1.0, L1=4.0, L2=4.0,
    ),
    "strong-field": Preset(
        name="strong-field",
        params=PhysicalParams(lam=1.0, gamma=1.0, A=1.0, mu1=0.02, nu=0.02, gravity=4.0),
        dens=DensitySpec(kind="exponential", rho0=1.0, scale_height=0.5),
        l=1.0, margin=0.05, L1=4.0, L2=4.0, field_scale=1.0,
    ),
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None


def build_preset_profile(name: str, n: int = 128):
    """Grid + equilibrium for a named preset (field scaling applied)."""
    p = get_preset(name)
    grid = build_grid(-p.l, p.l, n)
    prof = build_equilibrium(p.params, p.dens, grid, margin=p.margin)
    if p.field_scale != 1.0:
        prof = prof.scale_field(p.field_scale)
    return p, prof
