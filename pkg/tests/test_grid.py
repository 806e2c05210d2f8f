"""Grid construction and discrete operators against closed-form calculus facts."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parkerstab.grid import (
    build_grid,
    diff_center,
    diff_full,
    dirichlet_laplacian,
    edge_coeffs,
    edge_grad,
    quad_sum,
    quad_weights,
    trapezoid,
)


def test_build_grid_layout():
    g = build_grid(-1.0, 1.0, 10)
    assert g.h == pytest.approx(2.0 / 11)
    assert g.nodes[0] == pytest.approx(-1.0 + g.h)
    assert g.nodes[-1] == pytest.approx(1.0 - g.h)
    assert len(g.nodes) == 10


def test_build_grid_rejects_bad_input():
    with pytest.raises(ValueError):
        build_grid(1.0, -1.0, 32)
    with pytest.raises(ValueError):
        build_grid(0.0, 1.0, 4)


@given(n=st.integers(min_value=8, max_value=200))
@settings(max_examples=25, deadline=None)
def test_quad_weights_total_length(n):
    g = build_grid(0.0, 1.0, n)
    # weights sum to the full interval length: n*h interior + 2*(h/2) halves
    assert np.sum(quad_weights(g)) == pytest.approx(g.hi - g.lo, rel=1e-13)


def test_quad_sum_second_order_on_smooth_integrand():
    # integrand that does NOT vanish at the endpoints
    f = lambda x: np.cos(x) + x ** 2
    exact = np.sin(1.0) - np.sin(-1.0) + 2.0 / 3.0
    errs = []
    for n in (64, 128, 256):
        g = build_grid(-1.0, 1.0, n)
        errs.append(abs(quad_sum(g, f(g.nodes)) - exact))
    assert errs[0] / errs[1] > 3.0
    assert errs[1] / errs[2] > 3.0


def test_diff_center_second_order_for_dirichlet_data():
    errs = []
    for n in (64, 128):
        g = build_grid(0.0, np.pi, n)
        u = np.sin(g.nodes)          # vanishes at both endpoints
        err = np.max(np.abs(diff_center(g) @ u - np.cos(g.nodes)))
        errs.append(err)
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.15)


def test_diff_full_handles_nonvanishing_boundary():
    g = build_grid(0.0, 1.0, 128)
    u = np.exp(g.nodes)              # nonzero at both ends
    err = np.max(np.abs(diff_full(g) @ u - np.exp(g.nodes)))
    assert err < 5e-4


def test_edge_grad_shape_and_kernel():
    g = build_grid(0.0, 1.0, 16)
    G = edge_grad(g)
    assert G.shape == (17, 16)
    # gradient of the hat-interpolated linear-in-index data is constant
    u = np.arange(16.0)
    assert np.allclose((G @ u)[1:-1], 1.0 / g.h)


def test_edge_coeffs_endpoints_and_midpoints():
    c = np.array([1.0, 3.0, 5.0])
    ce = edge_coeffs(c)
    assert ce[0] == 1.0 and ce[-1] == 5.0
    assert np.allclose(ce[1:-1], [2.0, 4.0])


def test_dirichlet_laplacian_is_spd_and_consistent():
    g = build_grid(0.0, np.pi, 128)
    L = dirichlet_laplacian(g)
    assert np.allclose(L, L.T)
    u = np.sin(g.nodes)
    # quadratic form approximates int |u'|^2 = pi/2
    assert u @ L @ u == pytest.approx(np.pi / 2, rel=1e-3)
    vals = np.linalg.eigvalsh(L)
    assert np.min(vals) > 0


def test_dirichlet_laplacian_variable_coefficient():
    g = build_grid(0.0, 1.0, 256)
    c = 1.0 + g.nodes ** 2
    u = np.sin(np.pi * g.nodes)
    # int (1+x^2) pi^2 cos^2(pi x) dx on (0,1) = pi^2*(1/2 + 1/6 + 1/(4 pi^2))
    exact = np.pi ** 2 * (0.5 + 1.0 / 6.0) + 0.25
    assert u @ dirichlet_laplacian(g, c) @ u == pytest.approx(exact, rel=1e-3)


@given(n=st.integers(min_value=8, max_value=64), seed=st.integers(0, 2 ** 16))
@settings(max_examples=25, deadline=None)
def test_laplacian_form_matches_edge_sum(n, seed):
    # psi @ L @ psi equals the explicit edge-difference quadrature
    g = build_grid(-1.0, 1.0, n)
    psi = np.random.default_rng(seed).standard_normal(n)
    L = dirichlet_laplacian(g)
    dpsi = np.diff(np.concatenate(([0.0], psi, [0.0]))) / g.h
    assert psi @ L @ psi == pytest.approx(g.h * np.sum(dpsi ** 2), rel=1e-12)


def test_trapezoid_plain_sum():
    g = build_grid(0.0, 1.0, 32)
    assert trapezoid(g, np.ones(32)) == pytest.approx(32 * g.h)
