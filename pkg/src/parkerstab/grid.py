"""Uniform Dirichlet grid on an interval and the discrete operators used module-wide.

Conventions
-----------
The interval (lo, hi) is discretized with n interior nodes
x_j = lo + j*h, j = 1..n, h = (hi - lo)/(n + 1).  The two endpoints are
excluded from every array; all eigenfunction unknowns are implicitly zero
there (Dirichlet).

Three discrete derivative flavours are provided:

* ``diff_center`` : nodal first derivative, second-order central stencil with
  zero ghost values at the endpoints.  Used inside the energy quadratic forms
  so that the completed-square identities hold exactly at the discrete level.
* ``diff_full``   : nodal first derivative for quantities that do NOT vanish
  on the boundary (one-sided second-order stencils at the first/last node).
* ``edge_grad``   : forward differences onto the n+1 cell edges (with zero
  boundary values).  ``edge_grad.T @ diag @ edge_grad`` is the standard SPD
  discretization of -d/dx (c d/dx); used for Rayleigh-quotient thresholds and
  for the viscous Laplacian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Grid1D:
    lo: float
    hi: float
    n: int
    h: float
    nodes: np.ndarray

    def __post_init__(self):
        if self.nodes.shape != (self.n,):
            raise ValueError("node array length mismatch")


def build_grid(lo: float, hi: float, n: int) -> Grid1D:
    """Uniform interior nodes of (lo, hi); endpoints excluded."""
    if lo >= hi:
        raise ValueError(f"degenerate interval: lo={lo} >= hi={hi}")
    if n < 8:
        raise ValueError(f"need at least 8 interior nodes, got {n}")
    h = (hi - lo) / (n + 1)
    nodes = lo + h * np.arange(1, n + 1)
    return Grid1D(lo=float(lo), hi=float(hi), n=int(n), h=float(h), nodes=nodes)


def diff_center(grid: Grid1D) -> np.ndarray:
    """Central first-difference matrix with homogeneous Dirichlet ghosts."""
    n, h = grid.n, grid.h
    D = np.zeros((n, n))
    idx = np.arange(n - 1)
    D[idx, idx + 1] = 0.5 / h
    D[idx + 1, idx] = -0.5 / h
    return D


def diff_full(grid: Grid1D) -> np.ndarray:
    """First-difference matrix for non-Dirichlet data (one-sided ends)."""
    n, h = grid.n, grid.h
    D = diff_center(grid)
    # second-order one-sided stencils at the first and last interior node
    D[0, :3] = np.array([-3.0, 4.0, -1.0]) / (2 * h)
    D[-1, -3:] = np.array([1.0, -4.0, 3.0]) / (2 * h)
    return D


def edge_grad(grid: Grid1D) -> np.ndarray:
    """Forward differences onto the n+1 edges, Dirichlet boundary values."""
    n, h = grid.n, grid.h
    G = np.zeros((n + 1, n))
    idx = np.arange(n)
    G[idx, idx] = 1.0 / h
    G[idx + 1, idx] = -1.0 / h
    return G


def edge_coeffs(c: np.ndarray) -> np.ndarray:
    """Nodal coefficient array interpolated to the n+1 edge midpoints."""
    c = np.asarray(c, dtype=float)
    out = np.empty(c.size + 1)
    out[1:-1] = 0.5 * (c[:-1] + c[1:])
    out[0] = c[0]
    out[-1] = c[-1]
    return out


def dirichlet_laplacian(grid: Grid1D, c: np.ndarray | float = 1.0) -> np.ndarray:
    """SPD matrix of the form  psi -> -(c psi')'  with Dirichlet data.

    Assembled in conservative flux form with edge-midpoint coefficients, so
    psi @ L @ psi is the quadrature of integral(c |psi'|^2).
    """
    G = edge_grad(grid)
    if np.isscalar(c):
        ce = np.full(grid.n + 1, float(c))
    else:
        ce = edge_coeffs(c)
    return grid.h * (G.T * ce) @ G


def trapezoid(grid: Grid1D, values: np.ndarray) -> float:
    """Composite trapezoid over (lo, hi) of nodal values vanishing at the ends."""
    return grid.h * float(np.sum(values))


def quad_weights(grid: Grid1D) -> np.ndarray:
    """Interior quadrature weights, second order for non-vanishing integrands.

    Plain h*sum over interior nodes drops the two boundary half-cells, an O(h)
    error whenever the integrand does not vanish at the endpoints.  Weighting
    the boundary-adjacent nodes by 3h/2 restores the missing half-cells by
    constant extrapolation, which is enough for overall O(h^2) accuracy.
    """
    w = np.full(grid.n, grid.h)
    w[0] = 1.5 * grid.h
    w[-1] = 1.5 * grid.h
    return w


def quad_sum(grid: Grid1D, values: np.ndarray) -> float:
    """Weighted interior quadrature of possibly non-vanishing nodal values."""
    return float(quad_weights(grid) @ values)
