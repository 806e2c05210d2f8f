"""Energy functionals of the linearized slab problem.

Per-mode functionals act on real amplitude triples (phi, theta, psi) sampled
on the interior grid; full-grid functionals act on 3-component fields over a
horizontally periodic cell T x (lo, hi) with cell lengths 2*pi*L1, 2*pi*L2.

Discrete conventions (shared with the spectral module so the assembled
operators ARE these functionals):

* weighted nodal quadrature (grid.quad_sum): h per interior node with 3h/2
  at the two boundary-adjacent nodes, so integrands that do not vanish at the
  endpoints are still integrated to second order;
* vertical derivatives of amplitude fields via the central stencil with zero
  Dirichlet ghosts (grid.diff_center), applied identically in the display
  form, the completed-square rewrites and the test-function constructions --
  this is what makes the algebraic identities exact at the discrete level;
* the pure (psi')^2 penalty (total coefficient gamma*P + lam*m^2) carries an
  O(h^2) curvature stabilizer (h^2/8)(D2 psi)^2, half of the term that turns
  the central square into the symmetric one-sided average
  ((D+ psi)^2 + (D- psi)^2)/2.  Without it the odd-even null vectors of the
  central stencil evade the penalty and pollute the eigenvalue convergence;
  the half weight keeps the smooth-field bias small.  Every functional here
  subtracts the identical curvature term, so the algebraic identities between
  them are still exact;
* viscous gradient integrals via the SPD edge-difference form
  (grid.dirichlet_laplacian), which also damps odd-even node oscillations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ZeroXi1, ZeroXi2
from .grid import diff_center, dirichlet_laplacian, quad_sum, quad_weights
from .profiles import EquilibriumProfile

__all__ = [
    "ModeSpec",
    "ModalField",
    "GridField3D",
    "energy_tilde",
    "energy_tilde_sq",
    "energy_tilde_2d",
    "energy_tilde_2d_sq",
    "reduced_integral",
    "dissipation",
    "energy_Ec",
    "mass_form",
    "newcomb_construction",
    "tserkovnikov_construction",
    "energy_E_grid",
    "energy_E_rewritten",
    "lift_modal_field",
]


@dataclass(frozen=True)
class ModeSpec:
    """Horizontal wavenumber pair (xi1 along the field, xi2 transverse)."""

    xi1: float
    xi2: float

    def __post_init__(self):
        if self.xi1 < 0 or self.xi2 < 0:
            raise ValueError("wavenumbers must be >= 0")

    @property
    def xi_sq(self) -> float:
        return self.xi1 ** 2 + self.xi2 ** 2


@dataclass(frozen=True, eq=False)
class ModalField:
    """Real amplitude triple on the interior grid, zero at the endpoints."""

    phi: np.ndarray
    theta: np.ndarray
    psi: np.ndarray
    mode: ModeSpec

    @classmethod
    def zero(cls, n: int, mode: ModeSpec) -> "ModalField":
        z = np.zeros(n)
        return cls(phi=z, theta=z.copy(), psi=z.copy(), mode=mode)


def _dz(prof):
    return diff_center(prof.grid)


def _curvature_penalty(prof: EquilibriumProfile, psi: np.ndarray) -> float:
    """(h^2/8) int (gamma P + lam m^2) (D2 psi)^2, shared by all functionals."""
    g = prof.grid
    d2 = np.zeros_like(psi)
    d2 -= 2.0 * psi
    d2[:-1] += psi[1:]
    d2[1:] += psi[:-1]
    d2 /= g.h ** 2
    c = prof.params.gamma * prof.pressure + prof.params.lam * prof.m2
    return 0.125 * g.h ** 2 * quad_sum(g, c * d2 ** 2)


def energy_tilde(f: ModalField, prof: EquilibriumProfile) -> float:
    """Frequency-reduced energy (display form)."""
    p = prof.params
    xi1, xi2 = f.mode.xi1, f.mode.xi2
    dpsi = _dz(prof) @ f.psi
    d = xi1 * f.phi + xi2 * f.theta + dpsi
    gP = p.gamma * prof.pressure
    lam_m2 = p.lam * prof.m2
    integrand = (
        prof.g * prof.drho * f.psi ** 2
        + 2.0 * prof.g * prof.rho * f.psi * d
        - gP * d ** 2
        - lam_m2 * (xi1 ** 2 * (f.theta ** 2 + f.psi ** 2) + (xi2 * f.theta + dpsi) ** 2)
    )
    return quad_sum(prof.grid, integrand) - _curvature_penalty(prof, f.psi)


def energy_tilde_sq(f: ModalField, prof: EquilibriumProfile) -> float:
    """Frequency-reduced energy, completed-square rewrite (needs |xi|^2 > 0)."""
    p = prof.params
    xi1, xi2 = f.mode.xi1, f.mode.xi2
    xisq = f.mode.xi_sq
    if xisq <= 0:
        raise ValueError("completed-square form needs |xi|^2 > 0")
    dpsi = _dz(prof) @ f.psi
    gP = p.gamma * prof.pressure
    lam_m2 = p.lam * prof.m2
    W = prof.g ** 2 * prof.rho ** 2 / gP + prof.g * prof.drho
    d = xi1 * f.phi + xi2 * f.theta + dpsi
    integrand = (
        (W - p.lam * xi1 ** 2 * prof.m2) * f.psi ** 2
        - (p.lam * xi1 ** 2 * prof.m2 / xisq) * dpsi ** 2
        - gP * (d - prof.g * prof.rho * f.psi / gP) ** 2
        - lam_m2 * xisq * (f.theta + xi2 * dpsi / xisq) ** 2
    )
    return quad_sum(prof.grid, integrand) - _curvature_penalty(prof, f.psi)


def energy_tilde_2d(phi: np.ndarray, psi: np.ndarray, xi1: float,
                    prof: EquilibriumProfile) -> float:
    """2D frequency-reduced energy (display form)."""
    if xi1 <= 0:
        raise ZeroXi1("2D functional needs xi1 > 0")
    p = prof.params
    dpsi = _dz(prof) @ psi
    d = xi1 * phi + dpsi
    gP = p.gamma * prof.pressure
    integrand = (
        prof.g * prof.drho * psi ** 2
        + 2.0 * prof.g * prof.rho * psi * d
        - gP * d ** 2
        - p.lam * prof.m2 * (xi1 ** 2 * psi ** 2 + dpsi ** 2)
    )
    return quad_sum(prof.grid, integrand) - _curvature_penalty(prof, psi)


def energy_tilde_2d_sq(phi: np.ndarray, psi: np.ndarray, xi1: float,
                       prof: EquilibriumProfile) -> float:
    """2D completed-square rewrite."""
    if xi1 <= 0:
        raise ZeroXi1("2D functional needs xi1 > 0")
    p = prof.params
    dpsi = _dz(prof) @ psi
    gP = p.gamma * prof.pressure
    W = prof.g ** 2 * prof.rho ** 2 / gP + prof.g * prof.drho
    d = xi1 * phi + dpsi
    integrand = (
        (W - p.lam * xi1 ** 2 * prof.m2) * psi ** 2
        - p.lam * prof.m2 * dpsi ** 2
        - gP * (d - prof.g * prof.rho * psi / gP) ** 2
    )
    return quad_sum(prof.grid, integrand) - _curvature_penalty(prof, psi)


def reduced_integral(psi: np.ndarray, mode: ModeSpec, prof: EquilibriumProfile) -> float:
    """int ((W - lam xi1^2 m^2) psi^2 - (lam xi1^2 m^2/|xi|^2) |psi'|^2)."""
    p = prof.params
    dpsi = _dz(prof) @ psi
    gP = p.gamma * prof.pressure
    W = prof.g ** 2 * prof.rho ** 2 / gP + prof.g * prof.drho
    integrand = (
        (W - p.lam * mode.xi1 ** 2 * prof.m2) * psi ** 2
        - (p.lam * mode.xi1 ** 2 * prof.m2 / mode.xi_sq) * dpsi ** 2
    )
    return quad_sum(prof.grid, integrand) - _curvature_penalty(prof, psi)


def dissipation(f: ModalField, prof: EquilibriumProfile) -> float:
    """Per-mode viscous form mu1*int(|xi|^2 |f|^2 + |f'|^2) + mu2*int(div)^2."""
    p = prof.params
    g = prof.grid
    L = dirichlet_laplacian(g)
    xisq = f.mode.xi_sq
    grad = float(f.phi @ L @ f.phi + f.theta @ L @ f.theta + f.psi @ L @ f.psi)
    mass = quad_sum(g, f.phi ** 2 + f.theta ** 2 + f.psi ** 2)
    d = f.mode.xi1 * f.phi + f.mode.xi2 * f.theta + _dz(prof) @ f.psi
    return p.mu1 * (xisq * mass + grad) + p.mu2 * quad_sum(g, d ** 2)


def energy_Ec(f: ModalField, s: float, prof: EquilibriumProfile) -> float:
    """E_c(f, s) = tilde-energy minus s times the viscous form."""
    if s < 0:
        raise ValueError("s must be >= 0")
    return energy_tilde(f, prof) - s * dissipation(f, prof)


def mass_form(f: ModalField, prof: EquilibriumProfile) -> float:
    """int rho (phi^2 + theta^2 + psi^2)."""
    return quad_sum(prof.grid, prof.rho * (f.phi ** 2 + f.theta ** 2 + f.psi ** 2))


def newcomb_construction(psi0: np.ndarray, mode: ModeSpec,
                         prof: EquilibriumProfile) -> ModalField:
    """Test field killing both squares of the completed-square rewrite.

    theta0 = -xi2 psi0'/|xi|^2,  phi0 = (g rho psi0/(gamma P) - psi0'
    - xi2 theta0)/xi1; the tilde-energy of the result equals
    reduced_integral(psi0) exactly in the discrete convention.
    """
    if mode.xi1 == 0:
        raise ZeroXi1("construction divides by xi1")
    psi0 = np.asarray(psi0, dtype=float)
    dpsi = _dz(prof) @ psi0
    gP = prof.params.gamma * prof.pressure
    theta0 = -mode.xi2 * dpsi / mode.xi_sq
    phi0 = (prof.g * prof.rho * psi0 / gP - dpsi - mode.xi2 * theta0) / mode.xi1
    return ModalField(phi=phi0, theta=theta0, psi=psi0, mode=mode)


def tserkovnikov_construction(psi0: np.ndarray, xi2: float,
                              prof: EquilibriumProfile) -> ModalField:
    """xi1 = 0 test field; tilde-energy reduces to the Tserkovnikov integral.

    phi is irrelevant at xi1 = 0 once the square is eliminated; stored as 0.
    """
    if xi2 <= 0:
        raise ZeroXi2("construction divides by xi2")
    psi0 = np.asarray(psi0, dtype=float)
    dpsi = _dz(prof) @ psi0
    Q = prof.params.gamma * prof.pressure + prof.params.lam * prof.m2
    theta0 = (prof.g * prof.rho * psi0 / Q - dpsi) / xi2
    return ModalField(phi=np.zeros_like(psi0), theta=theta0, psi=psi0,
                      mode=ModeSpec(xi1=0.0, xi2=xi2))


# ---------------------------------------------------------------------------
# full-grid energy over the periodic cell
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GridField3D:
    """Real 3-component field on the tensor grid T x interior nodes.

    Component arrays have shape (N1, N2, n); horizontal cell lengths are
    2*pi*L1 and 2*pi*L2, sampled uniformly; the vertical direction uses the
    profile's interior nodes with Dirichlet endpoints.
    """

    w1: np.ndarray
    w2: np.ndarray
    w3: np.ndarray
    L1: float
    L2: float

    def __post_init__(self):
        if not (self.w1.shape == self.w2.shape == self.w3.shape):
            raise ValueError("component shapes differ")


def _horizontal_derivative(w: np.ndarray, axis: int, L: float) -> np.ndarray:
    N = w.shape[axis]
    k = np.fft.fftfreq(N) * N / L   # modes exp(i n x / L)
    shape = [1, 1, 1]
    shape[axis] = N
    mult = (1j * k).reshape(shape)
    return np.real(np.fft.ifft(mult * np.fft.fft(w, axis=axis), axis=axis))


def _grid_terms(w: GridField3D, prof: EquilibriumProfile):
    Dz = _dz(prof)
    d1w2 = _horizontal_derivative(w.w2, 0, w.L1)
    d1w3 = _horizontal_derivative(w.w3, 0, w.L1)
    div_v = _horizontal_derivative(w.w2, 1, w.L2) + w.w3 @ Dz.T
    div = _horizontal_derivative(w.w1, 0, w.L1) + div_v
    return d1w2, d1w3, div_v, div


def _cell_integral(w: GridField3D, prof: EquilibriumProfile, values: np.ndarray) -> float:
    N1, N2 = values.shape[0], values.shape[1]
    dA = (2 * np.pi * w.L1 / N1) * (2 * np.pi * w.L2 / N2)
    wq = quad_weights(prof.grid)
    return dA * float(np.sum(values @ wq))


def _grid_curvature_penalty(w: GridField3D, prof: EquilibriumProfile) -> float:
    """Vertical analog of _curvature_penalty applied to w3 over the cell."""
    g = prof.grid
    d2 = -2.0 * w.w3
    d2[..., :-1] += w.w3[..., 1:]
    d2[..., 1:] += w.w3[..., :-1]
    d2 /= g.h ** 2
    c = prof.params.gamma * prof.pressure + prof.params.lam * prof.m2
    return 0.125 * g.h ** 2 * _cell_integral(w, prof, c * d2 ** 2)


def energy_E_grid(w: GridField3D, prof: EquilibriumProfile) -> float:
    """Stability energy E(w) over the periodic cell (primitive form)."""
    p = prof.params
    d1w2, d1w3, div_v, div = _grid_terms(w, prof)
    gP = p.gamma * prof.pressure
    integrand = (
        prof.g * (prof.drho + prof.g * prof.rho ** 2 / gP) * w.w3 ** 2
        - (prof.g * prof.rho * w.w3 - gP * div) ** 2 / gP
        - p.lam * prof.m2 * (d1w2 ** 2 + d1w3 ** 2 + div_v ** 2)
    )
    return _cell_integral(w, prof, integrand) - _grid_curvature_penalty(w, prof)


def energy_E_rewritten(w: GridField3D, prof: EquilibriumProfile) -> float:
    """E(w) in the rewritten form trading the buoyancy weight for m m'."""
    p = prof.params
    d1w2, d1w3, div_v, div = _grid_terms(w, prof)
    gP = p.gamma * prof.pressure
    integrand = (
        -p.lam * prof.g * prof.rho * prof.m * prof.dm * w.w3 ** 2 / gP
        - (prof.g * prof.rho * w.w3 - gP * div) ** 2 / gP
        - p.lam * prof.m2 * (d1w2 ** 2 + d1w3 ** 2 + div_v ** 2)
    )
    return _cell_integral(w, prof, integrand) - _grid_curvature_penalty(w, prof)


def lift_modal_field(f: ModalField, L1: float, L2: float,
                     N1: int = 16, N2: int = 16) -> GridField3D:
    """Real single-mode lift w = (phi sin, theta sin, psi cos)(xi . x_h).

    xi1*L1 and xi2*L2 should be integers so the mode fits the periodic cell.
    """
    x1 = 2 * np.pi * L1 * np.arange(N1) / N1
    x2 = 2 * np.pi * L2 * np.arange(N2) / N2
    phase = f.mode.xi1 * x1[:, None] + f.mode.xi2 * x2[None, :]
    s, c = np.sin(phase)[..., None], np.cos(phase)[..., None]
    return GridField3D(
        w1=s * f.phi, w2=s * f.theta, w3=c * f.psi, L1=L1, L2=L2,
    )
