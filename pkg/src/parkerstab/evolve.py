"""Independent oracle: integrate the per-mode linearized system in time.

The linearized equations for one horizontal Fourier mode (d1 -> i*xi1,
d2 -> i*xi2) are advanced for the primitive complex amplitudes
(rho_hat, v_hat, N_hat) with an explicit RK4 step.  The discretization here
is deliberately different from the spectral module: complex primitive
variables, one-sided stencils for non-Dirichlet quantities, no quadratic
forms.  Agreement of the fitted growth rate with the eigen solvers is a
genuine cross-check.

The induction update keeps the discrete divergence i*xi1*N1 + i*xi2*N2 +
Dz*N3 exactly time-invariant: the field-gradient term v3*m' enters in the
commutator form Dz(m v3) - m Dz(v3) (a second-order discretization of m'v3),
which is what makes the cancellation exact at the matrix level.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .energy import ModalField, ModeSpec
from .errors import InsufficientData, InvalidMode, StepTooLarge, ZeroAmplitude
from .profiles import EquilibriumProfile
from .grid import diff_center, diff_full

__all__ = [
    "ModeState",
    "Trajectory",
    "random_state",
    "state_from_eigenfield",
    "evolve_mode",
    "fit_growth_rate",
    "divergence",
]

OVERFLOW_GUARD = 1e120
CFL_VISCOUS = 0.2
CFL_WAVE = 0.5


@dataclass(eq=False)
class ModeState:
    rho_hat: np.ndarray
    v_hat: np.ndarray      # shape (3, n)
    N_hat: np.ndarray      # shape (3, n)
    t: float = 0.0

    def copy(self):
        return ModeState(self.rho_hat.copy(), self.v_hat.copy(),
                         self.N_hat.copy(), self.t)


@dataclass(eq=False)
class Trajectory:
    times: np.ndarray
    amplitude: np.ndarray
    div_drift: float                    # max |div N(t) - div N(0)| / ||N||
    states: list = dc_field(default_factory=list)


def divergence(state: ModeState, mode: ModeSpec, Dz: np.ndarray) -> np.ndarray:
    return (1j * mode.xi1 * state.N_hat[0]
            + 1j * mode.xi2 * state.N_hat[1]
            + Dz @ state.N_hat[2])


def _amplitude(prof, state) -> float:
    w = prof.grid.h * prof.rho
    return float(np.sqrt(np.sum(w * np.abs(state.v_hat) ** 2)))


def random_state(prof: EquilibriumProfile, mode: ModeSpec, seed: int = 0) -> ModeState:
    """Low-pass random initial data, Dirichlet velocity, div N = 0.

    The divergence constraint is imposed algebraically on one horizontal
    magnetic component (or N3 is zeroed when xi = 0).
    """
    g = prof.grid
    rng = np.random.default_rng(seed)
    x = (g.nodes - g.lo) / (g.hi - g.lo)

    def smooth():
        out = np.zeros(g.n, dtype=complex)
        for k in range(1, 6):
            out += (rng.normal() + 1j * rng.normal()) * np.sin(np.pi * k * x)
        return out

    rho = smooth()
    v = np.array([smooth(), smooth(), smooth()])
    N = np.array([smooth(), smooth(), smooth()])
    Dz = diff_center(g)
    if mode.xi1 > 0:
        N[0] = -(1j * mode.xi2 * N[1] + Dz @ N[2]) / (1j * mode.xi1)
    elif mode.xi2 > 0:
        N[1] = -(Dz @ N[2]) / (1j * mode.xi2)
    else:
        N[2] = 0.0
    return ModeState(rho_hat=rho, v_hat=v, N_hat=N, t=0.0)


def state_from_eigenfield(prof: EquilibriumProfile, f: ModalField,
                          lam: float) -> ModeState:
    """Lift a growth eigenfunction to primitive variables.

    u = (-i phi, -i theta, psi); rho = -div(rho_bar u)/Lam;
    N = (m d1 u - u3 m' e1 - m e1 div u)/Lam, with the same commutator form
    for the u3 m' term as the integrator uses.
    """
    if lam <= 0:
        raise ValueError("need a positive growth rate")
    g = prof.grid
    Dz = diff_center(g)
    xi1, xi2 = f.mode.xi1, f.mode.xi2
    u = np.array([-1j * f.phi, -1j * f.theta, f.psi.astype(complex)])
    div_u = 1j * xi1 * u[0] + 1j * xi2 * u[1] + Dz @ u[2]
    rho = -(1j * xi1 * prof.rho * u[0] + 1j * xi2 * prof.rho * u[1]
            + Dz @ (prof.rho * u[2])) / lam
    m = prof.m
    N = np.empty((3, g.n), dtype=complex)
    N[0] = (1j * xi1 * m * u[0] - (Dz @ (m * u[2]) - m * (Dz @ u[2])) - m * div_u) / lam
    N[1] = 1j * xi1 * m * u[1] / lam
    N[2] = 1j * xi1 * m * u[2] / lam
    return ModeState(rho_hat=rho, v_hat=u, N_hat=N, t=0.0)


def stable_dt(prof: EquilibriumProfile, safety: float = CFL_VISCOUS) -> float:
    """Explicit step bound: viscous diffusion and fast-wave limits."""
    p = prof.params
    h = prof.grid.h
    diffusivity = (p.mu1 + p.mu2) / float(np.min(prof.rho))
    dt_visc = safety * h * h / diffusivity
    c2 = p.gamma * prof.pressure / prof.rho + p.lam * prof.m2 / prof.rho
    dt_wave = CFL_WAVE * h / float(np.sqrt(np.max(c2)))
    return min(dt_visc, dt_wave)


def _rhs_builder(prof: EquilibriumProfile, mode: ModeSpec):
    p = prof.params
    g = prof.grid
    h = g.h
    Dz = diff_center(g)     # for Dirichlet / boundary-vanishing quantities
    Df = diff_full(g)       # for quantities free at the boundary
    xi1, xi2 = mode.xi1, mode.xi2
    xisq = mode.xi_sq
    rho_b, m, mp = prof.rho, prof.m, prof.dm
    Pp = p.A * p.gamma * prof.rho ** (p.gamma - 1.0)   # P'(rho_bar)
    lap_diag = -2.0 / h ** 2 - xisq

    def laplacian(v):
        out = lap_diag * v
        out[:-1] += v[1:] / h ** 2
        out[1:] += v[:-1] / h ** 2
        return out

    def rhs(state: ModeState):
        v1, v2, v3 = state.v_hat
        rho = state.rho_hat
        N1, N2, N3 = state.N_hat

        div_v = 1j * xi1 * v1 + 1j * xi2 * v2 + Dz @ v3
        drho = -(1j * xi1 * rho_b * v1 + 1j * xi2 * rho_b * v2 + Dz @ (rho_b * v3))

        q = Pp * rho + p.lam * m * N1
        dv1 = (-1j * xi1 * q + p.mu1 * laplacian(v1) + p.mu2 * 1j * xi1 * div_v
               + p.lam * mp * N3 + p.lam * m * 1j * xi1 * N1) / rho_b
        dv2 = (-1j * xi2 * q + p.mu1 * laplacian(v2) + p.mu2 * 1j * xi2 * div_v
               + p.lam * m * 1j * xi1 * N2) / rho_b
        dv3 = (-(Df @ q) + p.mu1 * laplacian(v3) + p.mu2 * (Df @ div_v)
               + p.lam * m * 1j * xi1 * N3 - rho * prof.g) / rho_b

        dN1 = 1j * xi1 * m * v1 - (Dz @ (m * v3) - m * (Dz @ v3)) - m * div_v
        dN2 = 1j * xi1 * m * v2
        dN3 = 1j * xi1 * m * v3

        return drho, np.array([dv1, dv2, dv3]), np.array([dN1, dN2, dN3])

    return rhs


def evolve_mode(prof: EquilibriumProfile, mode: ModeSpec, init: ModeState,
                t_end: float, dt: float | None = None,
                n_samples: int = 256, keep_states: bool = False) -> Trajectory:
    """Advance the per-mode system with RK4 and record the velocity norm."""
    if t_end <= 0:
        raise ValueError("t_end must be positive")
    dt_max = stable_dt(prof)
    if dt is None:
        dt = dt_max
    elif dt > dt_max:
        raise InvalidMode(f"dt={dt} above explicit stability limit {dt_max:.3e}")

    rhs = _rhs_builder(prof, mode)
    Dz = diff_center(prof.grid)
    steps = int(np.ceil(t_end / dt))
    dt = t_end / steps
    sample_every = max(1, steps // n_samples)

    state = init.copy()
    div0 = divergence(state, mode, Dz)
    times = [0.0]
    amps = [_amplitude(prof, state)]
    states = [state.copy()] if keep_states else []
    div_drift = 0.0

    for k in range(1, steps + 1):
        r, v, N = state.rho_hat, state.v_hat, state.N_hat
        k1 = rhs(state)
        s2 = ModeState(r + 0.5 * dt * k1[0], v + 0.5 * dt * k1[1], N + 0.5 * dt * k1[2])
        k2 = rhs(s2)
        s3 = ModeState(r + 0.5 * dt * k2[0], v + 0.5 * dt * k2[1], N + 0.5 * dt * k2[2])
        k3 = rhs(s3)
        s4 = ModeState(r + dt * k3[0], v + dt * k3[1], N + dt * k3[2])
        k4 = rhs(s4)
        state.rho_hat = r + dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        state.v_hat = v + dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        state.N_hat = N + dt / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        state.t = k * dt

        if k % sample_every == 0 or k == steps:
            amp = _amplitude(prof, state)
            if not np.isfinite(amp) or amp > OVERFLOW_GUARD:
                raise StepTooLarge(f"norm explosion at t={state.t:.4g}")
            times.append(state.t)
            amps.append(amp)
            nnorm = np.linalg.norm(state.N_hat)
            if nnorm > 0:
                drift = np.max(np.abs(divergence(state, mode, Dz) - div0)) / nnorm
                div_drift = max(div_drift, drift)
            if keep_states:
                states.append(state.copy())

    return Trajectory(times=np.array(times), amplitude=np.array(amps),
                      div_drift=div_drift, states=states)


def fit_growth_rate(traj: Trajectory, window: float = 0.5):
    """Least-squares slope of log(amplitude) over the trailing window fraction."""
    if not 0 < window <= 1:
        raise ValueError("window must be in (0, 1]")
    n = len(traj.times)
    start = int(np.floor(n * (1.0 - window)))
    t = traj.times[start:]
    a = traj.amplitude[start:]
    if len(t) < 16:
        raise InsufficientData(f"only {len(t)} samples in the fit window")
    if np.any(a <= 1e-300):
        raise ZeroAmplitude("amplitude underflowed inside the fit window")
    la = np.log(a)
    coeffs, res = np.polyfit(t, la, 1, full=True)[:2]
    sigma = float(coeffs[0])
    rms = float(np.sqrt(res[0] / len(t))) if res.size else 0.0
    return sigma, rms
