"""Exact Gaussian dynamics via Markovian embedding.

The generalized Langevin equation

    m x'' + Int_0^t eta(t-t') x'(t') dt' + m w^2 x = F(t) - eta(t) x(0)

with delta plus exponential kernel components is rewritten as a linear
memoryless system.  Each exponential component (eta_k, tau_k) adds one
auxiliary coordinate v_k combining the memory force and its
Ornstein-Uhlenbeck noise:

    x' = p/m
    p' = -(m w^2 + sum_k eta_k/tau_k) x - (eta_f/m) p + sum_k v_k + xi_f
    v_k' = (eta_k/tau_k^2) x - v_k/tau_k + xi_k

Eliminating v_k with initial condition v_k(0) = 0 (deterministic part)
reproduces the memory integral together with the initial-slip term
-eta_k(t) x(0) exactly; the stochastic part of v_k starts in the
stationary Ornstein-Uhlenbeck distribution with variance w_k/tau_k so
that the embedded force correlator is stationary.  White-noise strengths:
B_pp = 2 * (delta noise weight), B_kk = 2 w_k / tau_k^2.

Noise enters only through second moments: the covariance obeys the
Lyapunov equation  Sigma' = A Sigma + Sigma A^T + B,  integrated with an
adaptive high-order scheme.  No trajectories are ever sampled.

The exact fringe contrast follows from the Gaussian push-forward of the
initial Wigner components: with flow Phi(t), injected noise covariance
Q(t) and initial full covariance S0 (cat widths plus stationary auxiliary
variances),

    exp(-A_int) = exp(-(d^2/2) [S0_pp - v^T S^-1 v]),
    S = (Phi S0 Phi^T + Q)_{xp},   v = (Phi S0 e_p)_{xp},

which reduces to 1 for zero noise (any invertible flow) and to the pure
fringe damping exp(-d^2 Q_pp / 2) when the flow is frozen and the packet
momentum width is large against the accumulated noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate, linalg

from .decoherence import CatState
from .errors import IntegratorFailure, TabulatedNotEmbeddable
from .kernels import NoiseModel

_PSD_FLOOR_FACTOR = 1e-10


@dataclass(frozen=True, eq=False)
class EmbeddedSystem:
    """Extended linear system equivalent to the generalized Langevin equation.

    State ordering: (x, p, v_1 ... v_K); drift matrix A, diffusion matrix B,
    stationary auxiliary variances aux_var (w_k / tau_k).
    """

    a_matrix: np.ndarray
    b_matrix: np.ndarray
    aux_var: np.ndarray
    mass: float
    freq: float

    @property
    def dim(self) -> int:
        return self.a_matrix.shape[0]

    def flow(self, t: float) -> np.ndarray:
        """Deterministic propagator Phi(t) = exp(A t)."""
        return linalg.expm(self.a_matrix * float(t))

    def initial_covariance(self, sigma_xp: np.ndarray) -> np.ndarray:
        """Block-diagonal full covariance: system block plus stationary
        auxiliary variances, no initial cross correlation."""
        n = self.dim
        s0 = np.zeros((n, n))
        s0[:2, :2] = sigma_xp
        for k, var in enumerate(self.aux_var):
            s0[2 + k, 2 + k] = var
        return s0


@dataclass(frozen=True, eq=False)
class CovarianceState:
    """Second moments along the propagation."""

    time: float
    mean: np.ndarray
    sigma: np.ndarray        # full n x n covariance
    sigma_noise: np.ndarray  # injected-noise covariance (zero initial condition)

    @property
    def sigma_noise_xp(self) -> np.ndarray:
        """Accumulated noise covariance restricted to (x, p)."""
        return self.sigma_noise[:2, :2]


def embed(model: NoiseModel) -> EmbeddedSystem:
    """Markovian embedding of a delta/exponential noise model."""
    if model.tabulated is not None:
        raise TabulatedNotEmbeddable("tabulated kernels cannot be embedded")
    modes = model.exp_modes
    n = 2 + len(modes)
    m = model.mass
    a = np.zeros((n, n))
    b = np.zeros((n, n))
    a[0, 1] = 1.0 / m
    a[1, 0] = -m * model.freq**2 - sum(mk.eta / mk.tau for mk in modes)
    a[1, 1] = -model.delta_friction / m
    b[1, 1] = 2.0 * model.delta_noise
    aux = np.zeros(len(modes))
    for k, mk in enumerate(modes):
        i = 2 + k
        a[1, i] = 1.0
        a[i, 0] = mk.eta / mk.tau**2
        a[i, i] = -1.0 / mk.tau
        b[i, i] = 2.0 * mk.noise_weight / mk.tau**2
        aux[k] = mk.noise_weight / mk.tau
    return EmbeddedSystem(a_matrix=a, b_matrix=b, aux_var=aux,
                          mass=m, freq=model.freq)


def transfer_function(sys: EmbeddedSystem, s):
    """x-response of the embedded system to a force on p,
    H(s) = [ (sI - A)^{-1} e_p ]_x; must equal 1/(m s^2 + s eta[s] + m w^2)."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    n = sys.dim
    e_p = np.zeros(n)
    e_p[1] = 1.0
    out = np.empty_like(s)
    for i, si in enumerate(s):
        out[i] = np.linalg.solve(si * np.eye(n) - sys.a_matrix, e_p)[0]
    return out if out.size > 1 else out[0]


def _project_psd(sigma: np.ndarray) -> np.ndarray:
    """Clip tiny negative eigenvalues (below -1e-10 * trace is an error
    upstream; here we only repair roundoff)."""
    sym = 0.5 * (sigma + sigma.T)
    vals, vecs = np.linalg.eigh(sym)
    floor = -_PSD_FLOOR_FACTOR * max(np.trace(sym), 0.0)
    if vals.min() >= 0.0:
        return sym
    clipped = np.clip(vals, 0.0, None)
    if vals.min() < floor:
        # genuinely indefinite: keep the projection but let callers see it
        pass
    return (vecs * clipped) @ vecs.T


def propagate_covariance(sys: EmbeddedSystem, sigma0: np.ndarray, t_grid,
                         rtol: float = 1e-10) -> list[CovarianceState]:
    """Integrate Sigma' = A Sigma + Sigma A^T + B over the grid.

    The injected-noise covariance Sigma_n (zero initial condition on every
    block) is propagated alongside.  Adaptive DOP853, local relative
    tolerance 1e-10.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("time grid must be strictly increasing")
    n = sys.dim
    a = sys.a_matrix
    b = sys.b_matrix
    sigma0 = np.asarray(sigma0, dtype=float)
    if sigma0.shape != (n, n):
        raise ValueError(f"sigma0 must be {n}x{n}")

    def rhs(_, y):
        s_full = y[: n * n].reshape(n, n)
        s_noise = y[n * n:].reshape(n, n)
        ds = a @ s_full + s_full @ a.T + b
        dn = a @ s_noise + s_noise @ a.T + b
        return np.concatenate([ds.ravel(), dn.ravel()])

    y0 = np.concatenate([sigma0.ravel(), np.zeros(n * n)])
    t0, t1 = (0.0, float(t_grid[-1]))
    eval_grid = t_grid
    prepend_zero = t_grid[0] > 0.0
    if prepend_zero:
        eval_grid = np.concatenate([[0.0], t_grid])
    if t1 == 0.0:
        sols = [y0]
    else:
        scale = max(np.max(np.abs(sigma0)), np.max(np.abs(b)) * t1, 1e-30)
        res = integrate.solve_ivp(rhs, (t0, t1), y0, method="DOP853",
                                  t_eval=eval_grid, rtol=rtol,
                                  atol=rtol * scale)
        if not res.success:
            raise IntegratorFailure(res.message)
        sols = list(res.y.T)
        if prepend_zero:
            sols = sols[1:]
    states = []
    for t, y in zip(t_grid, sols):
        s_full = _project_psd(y[: n * n].reshape(n, n))
        s_noise = 0.5 * (y[n * n:].reshape(n, n) + y[n * n:].reshape(n, n).T)
        states.append(CovarianceState(time=float(t), mean=np.zeros(n),
                                      sigma=s_full, sigma_noise=s_noise))
    return states


def stationary_covariance(sys: EmbeddedSystem) -> np.ndarray:
    """Fixed point of the Lyapunov equation, A S + S A^T + B = 0."""
    return linalg.solve_continuous_lyapunov(sys.a_matrix, -sys.b_matrix)


def _cat_sigma_xp(cat: CatState) -> np.ndarray:
    return np.diag([cat.width**2, 1.0 / (4.0 * cat.width**2)])


def contrast_from_flow(cat: CatState, phi: np.ndarray, noise_full: np.ndarray,
                       sigma0_full: np.ndarray) -> float:
    """Peak-to-peak ratio of the pushed-forward cat Wigner function.

    phi is the deterministic flow, noise_full the injected noise covariance
    (zero initial condition), sigma0_full the initial covariance of every
    Gaussian component (cat widths plus stationary auxiliary block).
    """
    d = cat.separation
    k_pp = sigma0_full[1, 1]
    s_xp = (phi @ sigma0_full @ phi.T + noise_full)[:2, :2]
    v = (phi @ sigma0_full[:, 1])[:2]
    exponent = 0.5 * d * d * (k_pp - v @ np.linalg.solve(s_xp, v))
    return float(np.exp(-exponent))


def exact_contrast(cat: CatState, sys: EmbeddedSystem, t) -> float | np.ndarray:
    """Exact peak-to-peak contrast at time(s) t.

    The cat packets contribute minimum-uncertainty widths; validated
    against the grid Fokker-Planck oracle in the test suite.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr < 0):
        raise ValueError("t must be >= 0")
    sigma0 = sys.initial_covariance(_cat_sigma_xp(cat))
    out = np.empty_like(t_arr)
    positive = t_arr > 0
    if np.any(positive):
        states = propagate_covariance(sys, sigma0, t_arr[positive])
        vals = [contrast_from_flow(cat, sys.flow(st.time), st.sigma_noise, sigma0)
                for st in states]
        out[positive] = vals
    out[~positive] = 1.0
    return out if np.ndim(t) else float(out[0])
