"""Pointwise instability criteria and variational threshold constants.

Pointwise margins (positive somewhere = criterion holds):

* Schwarzschild    S  = g rho^2/(gamma P) + rho'
* magnetic buoyancy     (m^2)'           (criterion: negative somewhere)
* Tserkovnikov     T  = g rho' + g^2 rho^2/(gamma P + lambda m^2)
* Rayleigh-Taylor       rho'

Threshold constants (suprema over H^1_0(-l, l), realized as largest
eigenvalues of discrete symmetric form pairs on the Dirichlet grid):

* kappa  : sup sqrt( int W psi^2 / int lambda m^2 |psi'|^2 ),
           W = g^2 rho^2/(gamma P) + g rho'
* xi_2d  : sup sqrt( int (W psi^2 - lambda m^2 |psi'|^2) / int lambda m^2 psi^2 )
* xi_3d  : largest xi1 > 0 for which the reduced per-mode form
           int ((W - lambda xi1^2 m^2) psi^2
                - lambda xi1^2 m^2/(xi1^2 + 1/L2^2) |psi'|^2)
           is still positive for some psi; found by bisection, with the
           per-psi nested-radical formula (xi_3d_of_psi) as independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh, eigh_tridiagonal

from .errors import BisectionFailure, DegenerateField, ZeroDenominator
from .grid import dirichlet_laplacian, trapezoid
from .profiles import EquilibriumProfile

__all__ = [
    "CriteriaReport",
    "schwarzschild_margin",
    "buoyancy_margin",
    "tserkovnikov_margin",
    "rt_margin",
    "varpi_and_strip_bound",
    "poincare_ratio",
    "kappa",
    "xi_2d",
    "xi_3d",
    "xi_3d_of_psi",
    "evaluate_criteria",
    "instability_weight",
]

XI3D_MAX_BISECT = 48
XI3D_RTOL = 1e-8


def schwarzschild_margin(prof: EquilibriumProfile):
    gamma = prof.params.gamma
    S = prof.g * prof.rho ** 2 / (gamma * prof.pressure) + prof.drho
    return S, bool(np.max(S) > 0)


def buoyancy_margin(prof: EquilibriumProfile):
    b = prof.m2prime
    return b, bool(np.min(b) < 0)


def tserkovnikov_margin(prof: EquilibriumProfile):
    p = prof.params
    T = prof.g * prof.drho + prof.g ** 2 * prof.rho ** 2 / (
        p.gamma * prof.pressure + p.lam * prof.m2
    )
    return T, bool(np.max(T) > 0)


def rt_margin(prof: EquilibriumProfile):
    return prof.drho, bool(np.max(prof.drho) > 0)


def instability_weight(prof: EquilibriumProfile) -> np.ndarray:
    """W = g^2 rho^2/(gamma P) + g rho', the weight of every threshold form."""
    gamma = prof.params.gamma
    return prof.g ** 2 * prof.rho ** 2 / (gamma * prof.pressure) + prof.g * prof.drho


def varpi_and_strip_bound(prof: EquilibriumProfile, a: float, b: float):
    """(varpi, (b-a)*varpi/pi, sufficient-stability flag min|m| > bound)."""
    if a >= b:
        raise ValueError("strip needs a < b")
    w = instability_weight(prof)
    varpi = float(np.sqrt(np.max(np.abs(w)) / prof.params.lam))
    bound = (b - a) * varpi / np.pi
    sufficient = bool(np.min(np.abs(prof.m)) > bound)
    return varpi, bound, sufficient


def poincare_ratio(a: float, b: float, n: int) -> float:
    """sup over psi in H^1_0(a,b) of sqrt(int psi^2 / int |psi'|^2).

    Equals 1/sqrt(lambda_1) with lambda_1 the first Dirichlet eigenvalue of
    -d^2/dx^2, computed from the tridiagonal second-difference operator.
    """
    if a >= b:
        raise ValueError("need a < b")
    if n < 8:
        raise ValueError("need n >= 8")
    h = (b - a) / (n + 1)
    lam1 = eigh_tridiagonal(
        np.full(n, 2.0 / h ** 2), np.full(n - 1, -1.0 / h ** 2),
        select="i", select_range=(0, 0), eigvals_only=True,
    )[0]
    return 1.0 / float(np.sqrt(lam1))


def _check_field(prof):
    if np.min(prof.m2) <= 0:
        raise DegenerateField("min m^2 <= 0")


def kappa(prof: EquilibriumProfile, l: float | None = None) -> float:
    """Rayleigh-quotient threshold of int W psi^2 over int lambda m^2 |psi'|^2."""
    _check_field(prof)
    g = prof.grid
    W = instability_weight(prof)
    if np.max(W) <= 0:
        return 0.0
    N = np.diag(g.h * W)
    A = dirichlet_laplacian(g, prof.params.lam * prof.m2)
    lam_max = eigh(N, A, subset_by_index=(g.n - 1, g.n - 1), eigvals_only=True)[0]
    return float(np.sqrt(max(0.0, lam_max)))


def xi_2d(prof: EquilibriumProfile, l: float | None = None) -> float:
    """2D threshold wavenumber; zero when the numerator form is <= 0."""
    _check_field(prof)
    g = prof.grid
    W = instability_weight(prof)
    B = np.diag(g.h * W) - dirichlet_laplacian(g, prof.params.lam * prof.m2)
    M = np.diag(g.h * prof.params.lam * prof.m2)
    lam_max = eigh(B, M, subset_by_index=(g.n - 1, g.n - 1), eigvals_only=True)[0]
    return float(np.sqrt(max(0.0, lam_max)))


def _reduced_form(prof, xi1, L2):
    """Symmetric matrix of the reduced per-mode quadratic form at xi1."""
    g = prof.grid
    lam = prof.params.lam
    W = instability_weight(prof)
    coef = xi1 ** 2 / (xi1 ** 2 + 1.0 / L2 ** 2)
    return (
        np.diag(g.h * (W - lam * xi1 ** 2 * prof.m2))
        - coef * dirichlet_laplacian(g, lam * prof.m2)
    )


def _form_positive(Q) -> bool:
    n = Q.shape[0]
    lam_max = eigh(Q, subset_by_index=(n - 1, n - 1), eigvals_only=True)[0]
    return lam_max > 0


def xi_3d(prof: EquilibriumProfile, l: float | None = None, L2: float = 1.0) -> float:
    """3D threshold wavenumber by bisection on form positivity."""
    _check_field(prof)
    if L2 <= 0:
        raise ValueError("L2 must be positive")
    lam = prof.params.lam
    W = instability_weight(prof)
    if np.max(W) <= 0:
        return 0.0
    # positivity needs W - lam*xi1^2*m^2 > 0 somewhere, giving a hard bracket
    hi = float(np.sqrt(np.max(W / (lam * prof.m2)))) * (1.0 + 1e-6)
    lo = 0.0
    if not _form_positive(_reduced_form(prof, 1e-8 * hi, L2)):
        return 0.0
    if _form_positive(_reduced_form(prof, hi, L2)):
        raise BisectionFailure("upper bracket not stable; bound logic broken")
    for _ in range(XI3D_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        if _form_positive(_reduced_form(prof, mid, L2)):
            lo = mid
        else:
            hi = mid
        if hi - lo <= XI3D_RTOL * hi:
            break
    return 0.5 * (lo + hi)


def xi_3d_maximizer(prof: EquilibriumProfile, xi1: float, L2: float) -> np.ndarray:
    """Discrete psi maximizing the reduced form at xi1 (for cross-checks)."""
    Q = _reduced_form(prof, xi1, L2)
    n = Q.shape[0]
    _, vec = eigh(Q, subset_by_index=(n - 1, n - 1))
    return vec[:, 0]


def xi_3d_of_psi(prof: EquilibriumProfile, psi: np.ndarray, L2: float) -> float:
    """Per-psi nested-radical threshold; independent oracle for xi_3d."""
    g = prof.grid
    lam = prof.params.lam
    psi = np.asarray(psi, dtype=float)
    A = dirichlet_laplacian(g, lam * prof.m2)
    grad2 = float(psi @ A @ psi)                       # int lam m^2 |psi'|^2
    B = trapezoid(g, lam * prof.m2 * psi ** 2)         # int lam m^2 psi^2
    if B <= 0:
        raise ZeroDenominator("int lam m^2 psi^2 vanished")
    IW = trapezoid(g, instability_weight(prof) * psi ** 2)
    if IW <= 0:
        return 0.0
    chi = grad2 + B / L2 ** 2 - IW
    inner = chi ** 2 + 4.0 * B * IW / L2 ** 2
    val = (np.sqrt(inner) - chi) / (2.0 * B)
    return float(np.sqrt(max(0.0, val)))


@dataclass(frozen=True)
class CriteriaReport:
    schwarzschild_margin: np.ndarray
    buoyancy: np.ndarray
    tserkovnikov_margin: np.ndarray
    rt_margin: np.ndarray
    schwarzschild_holds: bool
    tserkovnikov_holds: bool
    rt_holds: bool
    buoyancy_holds: bool
    varpi: float
    strip_bound: float
    strip_stable_sufficient: bool
    kappa: float
    xi2d: float
    xi3d: float

    def summary(self) -> dict:
        return {
            "schwarzschild_holds": self.schwarzschild_holds,
            "tserkovnikov_holds": self.tserkovnikov_holds,
            "rt_holds": self.rt_holds,
            "buoyancy_holds": self.buoyancy_holds,
            "varpi": self.varpi,
            "strip_bound": self.strip_bound,
            "strip_stable_sufficient": self.strip_stable_sufficient,
            "kappa": self.kappa,
            "xi2d": self.xi2d,
            "xi3d": self.xi3d,
        }


def evaluate_criteria(
    prof: EquilibriumProfile,
    strip: tuple[float, float] | None = None,
    L2: float = 1.0,
) -> CriteriaReport:
    """Assemble the full report.  strip defaults to the profile interval."""
    a, b = strip if strip is not None else (prof.grid.lo, prof.grid.hi)
    S, s_flag = schwarzschild_margin(prof)
    Bm, b_flag = buoyancy_margin(prof)
    T, t_flag = tserkovnikov_margin(prof)
    R, r_flag = rt_margin(prof)
    varpi, bound, sufficient = varpi_and_strip_bound(prof, a, b)
    return CriteriaReport(
        schwarzschild_margin=S,
        buoyancy=Bm,
        tserkovnikov_margin=T,
        rt_margin=R,
        schwarzschild_holds=s_flag,
        tserkovnikov_holds=t_flag,
        rt_holds=r_flag,
        buoyancy_holds=b_flag,
        varpi=varpi,
        strip_bound=bound,
        strip_stable_sufficient=sufficient,
        kappa=kappa(prof),
        xi2d=xi_2d(prof),
        xi3d=xi_3d(prof, L2=L2),
    )
