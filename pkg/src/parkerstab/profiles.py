"""Magnetohydrostatic equilibrium states (rho_bar, 0, m(x3) e1) on a 1D grid.

Construction follows the closed-form recipe: pick a positive density profile
rho(x3), set P = A rho^gamma, integrate F(x3) = int_lo^x3 g*rho, choose a
constant C with C - P - F > 0 everywhere, and take

    m(x3) = + sqrt( (2/lambda) * (C - P - F) ).

With that choice the hydrostatic balance  P' + lambda*m*m' + g*rho = 0 holds
identically, which is what every stability functional downstream relies on.

Derivatives are stored analytically rather than by differencing the sampled
arrays: rho' comes from the density spec (spline derivative for tabulated
data), P' by the chain rule, and (m^2)' from the balance identity
(m^2)' = -(2/lambda)(P' + g*rho), which is exact because F' = g*rho by
definition of the primitive.  This keeps the discrete balance residual at
round-off for every profile, including tabulated ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import CubicSpline, make_interp_spline

from .errors import NegativeRadicand, NonMonotoneAbscissa, NonPositiveDensity, ParseError
from .grid import Grid1D, build_grid

__all__ = [
    "PhysicalParams",
    "DensitySpec",
    "EquilibriumProfile",
    "build_grid",
    "build_equilibrium",
    "equilibrium_residual",
    "load_tabulated_profile",
]


@dataclass(frozen=True)
class PhysicalParams:
    """Fluid/field constants.  mu2 is derived: mu2 = nu + mu1/3."""

    lam: float = 1.0          # vacuum permeability / 4 pi
    gamma: float = 1.0        # adiabatic index, P = A rho^gamma
    A: float = 1.0
    mu1: float = 0.05         # shear viscosity
    nu: float = 0.05          # bulk viscosity
    gravity: float | Callable[[np.ndarray], np.ndarray] = 1.0

    def __post_init__(self):
        if self.lam <= 0 or self.A <= 0 or self.mu1 <= 0 or self.nu <= 0:
            raise ValueError("lam, A, mu1, nu must be strictly positive")
        if self.gamma < 1:
            raise ValueError("gamma must be >= 1")

    @property
    def mu2(self) -> float:
        return self.nu + self.mu1 / 3.0

    def gravity_at(self, x3: np.ndarray) -> np.ndarray:
        if callable(self.gravity):
            g = np.asarray(self.gravity(x3), dtype=float)
        else:
            g = np.full_like(np.asarray(x3, dtype=float), float(self.gravity))
        if np.any(g < 0):
            raise ValueError("gravity must be nonnegative")
        return g


@dataclass(frozen=True, eq=False)
class DensitySpec:
    """Density profile recipe: constant, exponential, tanh-layer or tabulated."""

    kind: str
    rho0: float = 1.0          # base density
    scale_height: float = 1.0  # exponential: rho0 * exp(-x3/H)
    center: float = 0.0        # tanh-layer midpoint
    width: float = 0.2         # tanh-layer thickness
    contrast: float = 0.5      # tanh-layer: rho0 * (1 + contrast*tanh(.))
    table: np.ndarray | None = None  # (N, 2) samples for kind="tabulated"
    _spline: object | None = field(default=None, repr=False, compare=False)

    KINDS = ("constant", "exponential", "tanh-layer", "tabulated")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown density kind {self.kind!r}")
        if self.kind == "tabulated":
            if self.table is None:
                raise ValueError("tabulated spec needs a table")
            x, r = self.table[:, 0], self.table[:, 1]
            if np.any(np.diff(x) <= 0):
                raise NonMonotoneAbscissa("abscissae must be strictly increasing")
            if np.any(r <= 0):
                raise NonPositiveDensity("tabulated density must be positive")
            if len(x) >= 4:
                spline = CubicSpline(x, r, bc_type="natural")
            else:
                spline = make_interp_spline(x, r, k=1)
            object.__setattr__(self, "_spline", spline)

    def rho(self, x3: np.ndarray) -> np.ndarray:
        x3 = np.asarray(x3, dtype=float)
        if self.kind == "constant":
            return np.full_like(x3, self.rho0)
        if self.kind == "exponential":
            return self.rho0 * np.exp(-x3 / self.scale_height)
        if self.kind == "tanh-layer":
            return self.rho0 * (1.0 + self.contrast * np.tanh((x3 - self.center) / self.width))
        return self._spline(x3)

    def drho(self, x3: np.ndarray) -> np.ndarray:
        x3 = np.asarray(x3, dtype=float)
        if self.kind == "constant":
            return np.zeros_like(x3)
        if self.kind == "exponential":
            return -self.rho(x3) / self.scale_height
        if self.kind == "tanh-layer":
            t = np.tanh((x3 - self.center) / self.width)
            return self.rho0 * self.contrast * (1.0 - t * t) / self.width
        return self._spline(x3, 1) if isinstance(self._spline, CubicSpline) else self._spline.derivative()(x3)


@dataclass(frozen=True, eq=False)
class EquilibriumProfile:
    grid: Grid1D
    params: PhysicalParams
    rho: np.ndarray
    drho: np.ndarray
    pressure: np.ndarray
    dpressure: np.ndarray
    m: np.ndarray
    dm: np.ndarray
    m2prime: np.ndarray
    g: np.ndarray
    C: float

    @property
    def m2(self) -> np.ndarray:
        return self.m * self.m

    def scale_field(self, s: float) -> "EquilibriumProfile":
        """Synthetic field override m -> s*m (rho, g unchanged).

        The scaled profile no longer satisfies hydrostatic balance; it exists
        for threshold monotonicity studies only.
        """
        return replace(self, m=s * self.m, dm=s * self.dm, m2prime=s * s * self.m2prime)


def build_equilibrium(
    params: PhysicalParams,
    dens: DensitySpec,
    grid: Grid1D,
    margin: float | None = None,
) -> EquilibriumProfile:
    """Construct the balanced state on the grid.

    margin is the gap inf(C - P - F) > 0; defaults to 0.5 * max(P).
    """
    x = grid.nodes
    rho = dens.rho(x)
    if np.any(rho <= 0):
        raise NonPositiveDensity("density must be positive at every node")
    drho = dens.drho(x)
    g = params.gravity_at(x)

    P = params.A * rho ** params.gamma
    dP = params.A * params.gamma * rho ** (params.gamma - 1.0) * drho

    # primitive of g*rho from the lower endpoint (F(lo) = 0), on the grid
    # extended by the two endpoints so the running integral is anchored and
    # the supremum of P + F sees the boundary values.
    ends = np.array([grid.lo, grid.hi])
    rho_ends = dens.rho(ends)
    if np.any(rho_ends <= 0):
        raise NonPositiveDensity("density must be positive at the endpoints")
    x_full = np.concatenate(([grid.lo], x, [grid.hi]))
    f_full = params.gravity_at(x_full) * np.concatenate(
        ([rho_ends[0]], rho, [rho_ends[1]]))
    F_full = cumulative_trapezoid(f_full, x_full, initial=0.0)
    F = F_full[1:-1]

    if margin is None:
        margin = 0.5 * float(np.max(P))
    if margin <= 0:
        raise ValueError("margin must be positive")
    P_full = params.A * np.concatenate(([rho_ends[0]], rho, [rho_ends[1]])) ** params.gamma
    C = float(np.max(P_full + F_full)) + margin

    radicand = (2.0 / params.lam) * (C - P - F)
    if np.any(radicand <= 0):
        raise NegativeRadicand("C - P - F not positive; construction bug")
    m = np.sqrt(radicand)
    # balance identity: F' = g*rho exactly, so (m^2)' = -(2/lam)(P' + g*rho)
    m2prime = -(2.0 / params.lam) * (dP + g * rho)
    dm = m2prime / (2.0 * m)

    return EquilibriumProfile(
        grid=grid, params=params, rho=rho, drho=drho, pressure=P, dpressure=dP,
        m=m, dm=dm, m2prime=m2prime, g=g, C=C,
    )


def equilibrium_residual(prof: EquilibriumProfile) -> float:
    """max over nodes of |P' + lambda m m' + g rho| using stored derivatives."""
    lam = prof.params.lam
    res = prof.dpressure + lam * prof.m * prof.dm + prof.g * prof.rho
    return float(np.max(np.abs(res)))


def load_tabulated_profile(path) -> DensitySpec:
    """Read a plain-text (x3, rho) table; '#' comments ignored."""
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            parts = body.split()
            if len(parts) != 2:
                raise ParseError(f"{path}:{lineno}: expected 'x3 rho', got {body!r}")
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
    if len(rows) < 4:
        raise ParseError(f"{path}: need at least 4 data rows, got {len(rows)}")
    table = np.array(rows)
    if np.any(np.diff(table[:, 0]) <= 0):
        raise NonMonotoneAbscissa(f"{path}: x3 column must be strictly increasing")
    if np.any(table[:, 1] <= 0):
        raise NonPositiveDensity(f"{path}: density column must be positive")
    return DensitySpec(kind="tabulated", table=table)
