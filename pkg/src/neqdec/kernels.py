"""Reservoir models: friction kernels and force correlators.

Each noise source is an equilibrium reservoir with coupling weight eta_k,
temperature T_k (stored as energy, k_B = 1) and a kernel shape:

    delta        eta_k(t) = eta_k * delta(t),   eta_k[s] = eta_k
    exponential  eta_k(t) = (eta_k/tau) exp(-t/tau),  eta_k[s] = eta_k/(s tau + 1)
    tabulated    eta_k(t) = 2/(pi m) Int dw J_k(w)/w cos(w t)

The high-temperature fluctuation-dissipation relation ties the force
correlator of each reservoir to its kernel, C_k(t) = T_k eta_k(t).  Delta
atoms are one-sided weights: they are never evaluated pointwise, and every
downstream integral handles them analytically.

All types are immutable and all operations pure; safe to share across
threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import (
    DeltaKernelNotPointwise,
    EmptyEnvironment,
    NegativeTime,
    QuadratureNonConvergence,
    TabulatedNotRational,
)
from .rational import LaplaceRational


class KernelKind(enum.Enum):
    DELTA = "delta"
    EXPONENTIAL = "exponential"
    TABULATED = "tabulated"


@dataclass(frozen=True, eq=False)
class SpectralTable:
    """Sampled spectral density J(w_i) on a strictly increasing grid.

    The mass enters the paper-convention cosine transform
    eta(t) = 2 Int dw J(w) cos(wt) / (pi m w); it is declared here so a
    tabulated reservoir is self-contained.
    """

    omega: np.ndarray
    j_values: np.ndarray
    mass: float

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float)
        j = np.asarray(self.j_values, dtype=float)
        if omega.ndim != 1 or omega.size < 2 or omega.shape != j.shape:
            raise ValueError("need matching 1-d omega and J arrays (>= 2 points)")
        if np.any(np.diff(omega) <= 0):
            raise ValueError("frequency grid must be strictly increasing")
        if np.any(j < 0):
            raise ValueError("spectral density must be nonnegative")
        if omega[0] < 0:
            raise ValueError("frequency grid must be nonnegative")
        if omega[0] == 0.0 and j[0] != 0.0:
            raise ValueError("J(0) must vanish when the grid starts at 0")
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "j_values", j)


@dataclass(frozen=True)
class ReservoirSpec:
    """One equilibrium noise source."""

    kind: KernelKind
    coupling: float            # friction weight eta_k >= 0
    temperature: float         # T_k as energy, >= 0
    corr_time: float | None = None
    table: SpectralTable | None = None

    def __post_init__(self):
        if self.coupling < 0:
            raise ValueError("coupling must be >= 0")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.kind is KernelKind.EXPONENTIAL:
            if self.corr_time is None or self.corr_time <= 0:
                raise ValueError("exponential kernel needs corr_time > 0")
        if self.kind is KernelKind.TABULATED and self.table is None:
            raise ValueError("tabulated kernel needs a spectral table")

    @staticmethod
    def delta(coupling: float, temperature: float) -> "ReservoirSpec":
        return ReservoirSpec(KernelKind.DELTA, coupling, temperature)

    @staticmethod
    def exponential(coupling: float, temperature: float,
                    corr_time: float) -> "ReservoirSpec":
        return ReservoirSpec(KernelKind.EXPONENTIAL, coupling, temperature,
                             corr_time=corr_time)

    @staticmethod
    def tabulated(table: SpectralTable, temperature: float) -> "ReservoirSpec":
        # coupling is carried by J itself; store 0 to keep invariants simple
        return ReservoirSpec(KernelKind.TABULATED, 0.0, temperature, table=table)


def spectral_to_kernel(table: SpectralTable, mass: float, t: float) -> float:
    """Cosine transform of a sampled spectral density, paper convention:

        eta(t) = 2/(pi m) Int_0^inf dw J(w)/w cos(w t)

    J is interpolated linearly on its grid and vanishes outside it.
    Adaptive quadrature (oscillatory-weighted for t > 0), rel. tol 1e-8.
    """
    if t < 0:
        raise NegativeTime(f"t = {t}")
    omega = table.omega
    j = table.j_values
    lo, hi = float(omega[0]), float(omega[-1])

    def j_over_w(w):
        val = np.interp(w, omega, j, left=0.0, right=0.0)
        return np.where(w > 0, val / np.where(w > 0, w, 1.0), 0.0)

    prefactor = 2.0 / (np.pi * mass)
    if np.all(j == 0):
        return 0.0
    kwargs = dict(epsabs=0.0, epsrel=1e-8, limit=400, full_output=1)
    if t == 0.0:
        res = integrate.quad(j_over_w, lo, hi,
                             points=list(omega[1:-1][:40]), **kwargs)
    else:
        res = integrate.quad(j_over_w, lo, hi, weight="cos", wvar=t, **kwargs)
    if len(res) > 3 and res[-1]:  # explain-string present => ier != 0
        raise QuadratureNonConvergence(str(res[-1]))
    return prefactor * float(res[0])


def friction_kernel_time(spec: ReservoirSpec, t: float) -> float:
    """Pointwise kernel value eta_k(t), t >= 0.  Delta kinds are rejected:
    their time-domain value is distributional and callers must use the
    delta weight explicitly."""
    if t < 0:
        raise NegativeTime(f"t = {t}")
    if spec.kind is KernelKind.DELTA:
        raise DeltaKernelNotPointwise(
            "delta kernels carry weight, not a pointwise value")
    if spec.kind is KernelKind.EXPONENTIAL:
        return spec.coupling / spec.corr_time * np.exp(-t / spec.corr_time)
    return spectral_to_kernel(spec.table, spec.table.mass, t)


def friction_kernel_laplace(spec: ReservoirSpec) -> LaplaceRational:
    """eta_k[s]: constant for delta, eta/(s tau + 1) for exponential."""
    if spec.kind is KernelKind.DELTA:
        return LaplaceRational([spec.coupling], [1.0])
    if spec.kind is KernelKind.EXPONENTIAL:
        return LaplaceRational([spec.coupling], [1.0, spec.corr_time])
    raise TabulatedNotRational(
        "tabulated kernels need the numerical transform path")


def correlator_time(spec: ReservoirSpec, t: float) -> float:
    """C_k(t) = T_k eta_k(t) for t >= 0.

    Delta kind reports the atom weight T_k * eta_k of the delta component
    instead of a pointwise value (the only finite number it owns).
    """
    if t < 0:
        raise NegativeTime(f"t = {t}")
    if spec.kind is KernelKind.DELTA:
        return spec.temperature * spec.coupling
    return spec.temperature * friction_kernel_time(spec, t)


@dataclass(frozen=True)
class ExpMode:
    """One exponential component: kernel (eta/tau) e^{-t/tau}, correlator
    (noise_weight/tau) e^{-t/tau}.  noise_weight = eta * T for a physical
    reservoir; engineered fields may carry noise with eta = 0."""

    eta: float
    tau: float
    noise_weight: float

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if self.eta < 0 or self.noise_weight < 0:
            raise ValueError("weights must be nonnegative")

    @property
    def temperature(self) -> float:
        if self.eta == 0.0:
            raise ZeroDivisionError("pure-noise mode has no temperature")
        return self.noise_weight / self.eta


@dataclass(frozen=True, eq=False)
class TabulatedComponent:
    """Kernel precomputed on a time grid (one-time cosine transform);
    downstream integrals use piecewise-linear interpolation."""

    times: np.ndarray
    kernel: np.ndarray
    temperature: float

    def kernel_at(self, t):
        return np.interp(t, self.times, self.kernel, right=0.0)

    def correlator_at(self, t):
        return self.temperature * self.kernel_at(t)


@dataclass(frozen=True)
class SystemParams:
    """Oscillator the environment couples to."""

    mass: float
    freq: float

    def __post_init__(self):
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        if self.freq < 0:
            raise ValueError("frequency must be >= 0")


_TABULATED_GRID_POINTS = 2049


@dataclass(frozen=True, eq=False)
class NoiseModel:
    """Composed nonequilibrium environment.

    delta_friction : total Markovian friction weight (sum of delta couplings)
    delta_noise    : one-sided atom of C(t) (sum of eta_f * T_f and field
                     intensities)
    exp_modes      : exponential components, kept as separate modes
    tabulated      : optional sampled kernel/correlator component
    """

    delta_friction: float
    delta_noise: float
    exp_modes: tuple[ExpMode, ...]
    mass: float
    freq: float
    tabulated: TabulatedComponent | None = None

    # -- time domain (smooth parts; atoms live in delta_friction/noise) --

    def friction_smooth(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise NegativeTime("kernel evaluated at t < 0")
        out = np.zeros_like(t, dtype=float)
        for m in self.exp_modes:
            out = out + (m.eta / m.tau) * np.exp(-t / m.tau)
        if self.tabulated is not None:
            out = out + self.tabulated.kernel_at(t)
        return out if out.ndim else float(out)

    def correlator_smooth(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise NegativeTime("correlator evaluated at t < 0")
        out = np.zeros_like(t, dtype=float)
        for m in self.exp_modes:
            out = out + (m.noise_weight / m.tau) * np.exp(-t / m.tau)
        if self.tabulated is not None:
            out = out + self.tabulated.correlator_at(t)
        return out if out.ndim else float(out)

    # -- Laplace domain ---------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.tabulated is None

    def friction_laplace(self) -> LaplaceRational:
        if not self.is_rational:
            raise TabulatedNotRational("model has a tabulated component")
        total = LaplaceRational.constant(self.delta_friction)
        for m in self.exp_modes:
            total = total + LaplaceRational([m.eta], [1.0, m.tau])
        return total

    def correlator_laplace(self) -> LaplaceRational:
        if not self.is_rational:
            raise TabulatedNotRational("model has a tabulated component")
        total = LaplaceRational.constant(self.delta_noise)
        for m in self.exp_modes:
            total = total + LaplaceRational([m.noise_weight], [1.0, m.tau])
        return total

    # -- totals -------------------------------------------------------------

    @property
    def total_friction(self) -> float:
        """eta = Int eta(t) dt, the s -> 0 limit of eta[s]."""
        tot = self.delta_friction + sum(m.eta for m in self.exp_modes)
        if self.tabulated is not None:
            tot += float(np.trapezoid(self.tabulated.kernel, self.tabulated.times))
        return tot

    @property
    def total_noise_rate(self) -> float:
        """Long-time growth rate of sigma_pp^2 / 2 = Int C."""
        tot = self.delta_noise + sum(m.noise_weight for m in self.exp_modes)
        if self.tabulated is not None:
            tot += float(np.trapezoid(self.tabulated.temperature * self.tabulated.kernel,
                                      self.tabulated.times))
        return tot


def _tabulate_kernel(table: SpectralTable, temperature: float,
                     t_max: float) -> TabulatedComponent:
    times = np.linspace(0.0, t_max, _TABULATED_GRID_POINTS)
    kernel = np.array([spectral_to_kernel(table, table.mass, t) for t in times])
    return TabulatedComponent(times=times, kernel=kernel, temperature=temperature)


def compose(specs, system: SystemParams, tabulated_t_max: float = 50.0) -> NoiseModel:
    """Sum reservoirs into a single nonequilibrium noise model.

    Delta weights add as scalars, exponential modes are kept as separate
    (eta, tau, eta*T) triples, tabulated parts are evaluated once onto a
    time grid [0, tabulated_t_max].
    """
    specs = list(specs)
    if not specs:
        raise EmptyEnvironment("need at least one reservoir")
    delta_friction = 0.0
    delta_noise = 0.0
    modes: list[ExpMode] = []
    tab: TabulatedComponent | None = None
    for spec in specs:
        if spec.kind is KernelKind.DELTA:
            delta_friction += spec.coupling
            delta_noise += spec.coupling * spec.temperature
        elif spec.kind is KernelKind.EXPONENTIAL:
            modes.append(ExpMode(eta=spec.coupling, tau=spec.corr_time,
                                 noise_weight=spec.coupling * spec.temperature))
        else:
            if tab is not None:
                raise ValueError("at most one tabulated reservoir is supported")
            if spec.table.mass != system.mass:
                raise ValueError("tabulated reservoir mass differs from system mass")
            tab = _tabulate_kernel(spec.table, spec.temperature, tabulated_t_max)
    return NoiseModel(delta_friction=delta_friction, delta_noise=delta_noise,
                      exp_modes=tuple(modes), mass=system.mass, freq=system.freq,
                      tabulated=tab)
