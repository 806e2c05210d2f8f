"""Per-mode operator assembly and growth-rate solvers.

The per-mode dynamics is the damped second-order system

    Lam^2 M x + Lam D x - K x = 0,      x = stacked (phi, theta, psi),

where the quadratic forms of M, D, K are exactly the mass, viscous and
tilde-energy functionals of the energy module (same quadrature, same
stencils).  Two growth-rate routes are provided:

* solve_qep            -- companion-pencil linearization, full spectrum;
* growth_rate_fixed_point -- the variational route: Lam solves
                            Lam^2 = alpha(Lam) with alpha(s) the largest
                            eigenvalue of (K - s D) x = alpha M x.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla
from scipy.optimize import brentq

from .energy import ModalField, ModeSpec
from .errors import BracketFailure, EigenFailure, ZeroVector
from .grid import diff_center, dirichlet_laplacian, quad_weights
from .profiles import EquilibriumProfile

__all__ = [
    "ModalOperators",
    "GrowthResult",
    "assemble_operators",
    "solve_qep",
    "alpha_of_s",
    "growth_rate_fixed_point",
    "qep_residual",
]

DEFAULT_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class ModalOperators:
    mass: np.ndarray       # SPD
    damping: np.ndarray    # PSD viscous form
    stiffness: np.ndarray  # symmetric, x.K.x = tilde-energy
    mode: ModeSpec
    n: int

    def split(self, x: np.ndarray):
        n = self.n
        return x[:n], x[n:2 * n], x[2 * n:]

    def to_field(self, x: np.ndarray) -> ModalField:
        phi, theta, psi = self.split(np.asarray(x))
        return ModalField(phi=phi, theta=theta, psi=psi, mode=self.mode)

    @staticmethod
    def stack(f: ModalField) -> np.ndarray:
        return np.concatenate([f.phi, f.theta, f.psi])


@dataclass(frozen=True, eq=False)
class GrowthResult:
    lam: complex
    field: ModalField
    method: str            # "qep" | "fixed_point" | "ivp"
    residual: float
    mode: ModeSpec
    vector: np.ndarray | None = None   # raw (possibly complex) eigenvector


def assemble_operators(prof: EquilibriumProfile, mode: ModeSpec) -> ModalOperators:
    p = prof.params
    g = prof.grid
    n = g.n
    xi1, xi2 = mode.xi1, mode.xi2

    I = np.eye(n)
    Z = np.zeros((n, n))
    Dc = diff_center(g)
    L = dirichlet_laplacian(g)

    B_div = np.hstack([xi1 * I, xi2 * I, Dc])        # xi1 phi + xi2 theta + psi'
    B_tens = np.hstack([Z, xi2 * I, Dc])             # xi2 theta + psi'
    P_psi = np.hstack([Z, Z, I])
    P_theta = np.hstack([Z, I, Z])

    gP = p.gamma * prof.pressure
    lam_m2 = p.lam * prof.m2
    wq = quad_weights(g)

    def w(c):
        return (wq * c)[:, None]

    K = (
        P_psi.T @ (w(prof.g * prof.drho) * P_psi)
        + P_psi.T @ (w(prof.g * prof.rho) * B_div)
        + B_div.T @ (w(prof.g * prof.rho) * P_psi)
        - B_div.T @ (w(gP) * B_div)
        - xi1 ** 2 * (P_theta.T @ (w(lam_m2) * P_theta) + P_psi.T @ (w(lam_m2) * P_psi))
        - B_tens.T @ (w(lam_m2) * B_tens)
    )
    # curvature stabilizer of the energy module: the pure (psi')^2 penalty
    # carries an extra (h^2/8)(D2 psi)^2 with the same coefficient
    h = g.h
    c = wq * (gP + lam_m2)
    D2 = np.zeros((n, n))
    idx = np.arange(n)
    D2[idx, idx] = -2.0 / h ** 2
    D2[idx[:-1], idx[:-1] + 1] = 1.0 / h ** 2
    D2[idx[1:], idx[1:] - 1] = 1.0 / h ** 2
    K[2 * n:, 2 * n:] -= 0.125 * h ** 2 * (D2.T * c) @ D2
    K = 0.5 * (K + K.T)

    Wq = np.diag(wq)
    D = p.mu1 * (mode.xi_sq * sla.block_diag(Wq, Wq, Wq) + sla.block_diag(L, L, L)) \
        + p.mu2 * (B_div.T @ (wq[:, None] * B_div))
    D = 0.5 * (D + D.T)

    M = sla.block_diag(*(np.diag(wq * prof.rho),) * 3)

    return ModalOperators(mass=M, damping=D, stiffness=K, mode=mode, n=n)


def qep_residual(lam: complex, x: np.ndarray, ops: ModalOperators) -> float:
    """||(lam^2 M + lam D - K) x||_2 divided by the mass norm of x."""
    x = np.asarray(x)
    mnorm = np.sqrt(abs(np.vdot(x, ops.mass @ x)))
    if mnorm == 0:
        raise ZeroVector("residual of a zero vector")
    r = (lam ** 2) * (ops.mass @ x) + lam * (ops.damping @ x) - ops.stiffness @ x
    return float(np.linalg.norm(r) / mnorm)


def _relative_residual(lam, x, ops):
    scale = (
        abs(lam) ** 2 * np.linalg.norm(ops.mass, 1)
        + abs(lam) * np.linalg.norm(ops.damping, 1)
        + np.linalg.norm(ops.stiffness, 1)
    )
    r = (lam ** 2) * (ops.mass @ x) + lam * (ops.damping @ x) - ops.stiffness @ x
    return float(np.linalg.norm(r) / (scale * np.linalg.norm(x)))


def _as_real_field(ops, x):
    """Phase-align a complex eigenvector and mass-normalize its real part."""
    k = int(np.argmax(np.abs(x)))
    x = x * np.exp(-1j * np.angle(x[k])) if np.iscomplexobj(x) else x
    xr = np.real(x)
    mnorm = np.sqrt(abs(xr @ ops.mass @ xr))
    if mnorm > 0:
        xr = xr / mnorm
    return ops.to_field(xr), xr


def solve_qep(ops: ModalOperators, tol: float = DEFAULT_TOL, nev: int | None = None):
    """Full quadratic-eigenproblem solve via the block companion pencil.

    Returns GrowthResults sorted by descending Re(lam); pairs whose relative
    residual exceeds tol raise EigenFailure only if none are acceptable.
    """
    n3 = ops.mass.shape[0]
    A = np.block([
        [np.zeros((n3, n3)), np.eye(n3)],
        [ops.stiffness, -ops.damping],
    ])
    B = np.block([
        [np.eye(n3), np.zeros((n3, n3))],
        [np.zeros((n3, n3)), ops.mass],
    ])
    try:
        vals, vecs = sla.eig(A, B)
    except Exception as exc:   # LAPACK failure
        raise EigenFailure(str(exc)) from exc
    finite = np.isfinite(vals)
    vals, vecs = vals[finite], vecs[:, finite]
    order = np.argsort(-vals.real)
    vals, vecs = vals[order], vecs[:, order]
    if nev is not None:
        vals, vecs = vals[:nev], vecs[:, :nev]

    results = []
    for lam, z in zip(vals, vecs.T):
        x = z[:n3]
        if np.linalg.norm(x) < 1e-12 * np.linalg.norm(z) and lam != 0:
            x = z[n3:] / lam
        field, _ = _as_real_field(ops, x)
        mnorm = np.sqrt(abs(np.vdot(x, ops.mass @ x)))
        xn = x / mnorm if mnorm > 0 else x
        results.append(GrowthResult(
            lam=complex(lam), field=field, method="qep",
            residual=_relative_residual(complex(lam), xn, ops),
            mode=ops.mode, vector=xn,
        ))
    if results and all(r.residual > tol for r in results):
        raise EigenFailure("no eigenpair met the residual tolerance")
    return results


def alpha_of_s(ops: ModalOperators, s: float):
    """Largest eigenvalue of (K - s D) x = alpha M x, with mass-normalized maximizer."""
    if s < 0:
        raise ValueError("s must be >= 0")
    n3 = ops.mass.shape[0]
    try:
        vals, vecs = sla.eigh(ops.stiffness - s * ops.damping, ops.mass,
                              subset_by_index=(n3 - 1, n3 - 1))
    except Exception as exc:
        raise EigenFailure(str(exc)) from exc
    x = vecs[:, 0]
    x = x / np.sqrt(x @ ops.mass @ x)
    return float(vals[0]), ops.to_field(x)


def growth_rate_fixed_point(ops: ModalOperators, tol: float = DEFAULT_TOL):
    """Unique Lam > 0 with Lam^2 = alpha(Lam), or None when alpha(0) <= 0.

    alpha is nonincreasing in s (D is PSD), so Phi(s) = s^2 - alpha(s) is
    increasing and Phi(sqrt(alpha(0))) >= 0 brackets the root with Phi(0) < 0.
    """
    alpha0, field0 = alpha_of_s(ops, 0.0)
    if alpha0 <= 0:
        return None

    def phi(s):
        return s * s - alpha_of_s(ops, s)[0]

    s0 = float(np.sqrt(alpha0))
    if phi(s0) < 0:
        raise BracketFailure("alpha(s) increased with s; damping not PSD?")
    if phi(s0) == 0.0:
        lam = s0
    else:
        lam = brentq(phi, 0.0, s0, rtol=max(tol, 4e-16))
    _, field = alpha_of_s(ops, lam)
    x = ModalOperators.stack(field)
    return GrowthResult(
        lam=complex(lam), field=field, method="fixed_point",
        residual=_relative_residual(lam, x, ops), mode=ops.mode, vector=x,
    )
