"""Nonequilibrium effective temperature.

The Laplace-domain temperature of a composed environment is the ratio

    T[s] = C[s] / eta[s] = sum_k T_k eta_k[s] / sum_k eta_k[s],

a generalized fluctuation-dissipation relation.  Its inverse transform
T(t) consists of a delta atom (the s -> infinity limit) plus decaying
modes; the time-dependent effective temperature accumulates it,

    T_eff(t) = Int_{0^-}^t T(t') dt',

so T_eff(0) equals the atom and T_eff(inf) equals T[s = 0].

Rational models invert exactly by partial fractions; a fixed-node
deformed-contour (Talbot) inversion provides the numerical fallback and
serves tabulated models.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ZeroFriction
from .kernels import NoiseModel
from .rational import LaplaceRational, talbot_inverse

_T_EFF_NUMERIC_REL_TOL = 1e-6


class Provenance(enum.Enum):
    CLOSED_FORM = "closed_form"
    PARTIAL_FRACTION = "partial_fraction"
    NUMERICAL = "numerical"


@dataclass(frozen=True)
class Mode:
    """One smooth term of T(t): amplitude * exp(-rate t) * cos(freq t + phase).

    Real poles have freq = phase = 0; complex-conjugate pole pairs are
    combined into one damped-cosine mode.
    """

    amplitude: float
    rate: float
    freq: float = 0.0
    phase: float = 0.0

    def value(self, t):
        t = np.asarray(t, dtype=float)
        out = self.amplitude * np.exp(-self.rate * t)
        if self.freq != 0.0 or self.phase != 0.0:
            out = out * np.cos(self.freq * t + self.phase)
        return out

    def integral(self, t):
        """Int_0^t of the mode; closed form via the complex pole."""
        t = np.asarray(t, dtype=float)
        z = complex(-self.rate, self.freq)
        c = self.amplitude * cmath.exp(1j * self.phase)
        if z == 0:
            return (c.real) * t
        return np.real(c * (np.exp(z * t) - 1.0) / z)

    def integral_to_infinity(self) -> float:
        if self.rate <= 0:
            raise ZeroDivisionError("non-decaying mode has no infinite integral")
        z = complex(-self.rate, self.freq)
        c = self.amplitude * cmath.exp(1j * self.phase)
        return float(np.real(-c / z))


@dataclass(frozen=True)
class EffectiveTemperature:
    """T(t) = delta_weight * delta(t) + asymptote + sum of decaying modes.

    ``asymptote`` is the t -> infinity value of the smooth part (nonzero
    only for a pole at s = 0, which physical compositions do not produce).
    """

    delta_weight: float
    modes: tuple[Mode, ...]
    asymptote: float = 0.0
    provenance: Provenance = Provenance.CLOSED_FORM
    laplace_smooth: Callable | None = None  # numerical-provenance evaluator

    def temperature(self, t):
        """Smooth part of T(t) (the atom at t = 0 is reported separately).

        Numerical provenance evaluates the inversion contour and needs t > 0.
        """
        t_arr = np.asarray(t, dtype=float)
        if self.provenance is Provenance.NUMERICAL:
            if np.any(t_arr <= 0):
                raise ValueError("numerical inversion needs t > 0")
            out = np.asarray(talbot_inverse(self.laplace_smooth, t_arr))
        else:
            out = np.full_like(t_arr, self.asymptote, dtype=float)
            for m in self.modes:
                out = out + m.value(t_arr)
        return out if out.ndim else float(out)

    def t_eff(self, t):
        """T_eff(t) = delta_weight + Int_0^t smooth(t') dt'."""
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < 0):
            raise ValueError("t_eff requires t >= 0")
        if self.provenance is Provenance.NUMERICAL:
            out = np.array([self._integrate_numeric(float(ti)) for ti in np.atleast_1d(t_arr)])
            if t_arr.ndim == 0:
                return float(self.delta_weight + out[0])
            return self.delta_weight + out
        out = self.asymptote * t_arr
        for m in self.modes:
            out = out + m.integral(t_arr)
        out = out + self.delta_weight
        return out if np.ndim(out) else float(out)

    def t_eff_limit(self) -> float:
        """T_eff(t -> infinity); infinite when the smooth part has a plateau."""
        if self.asymptote != 0.0:
            return math.inf
        return self.delta_weight + sum(m.integral_to_infinity() for m in self.modes)

    def _integrate_numeric(self, t: float) -> float:
        """Trapezoid of the Talbot-inverted smooth part, refined until the
        relative change drops below 1e-6."""
        if t == 0.0:
            return 0.0
        n = 64
        prev = None
        for _ in range(8):
            grid = np.linspace(0.0, t, n + 1)
            vals = np.empty_like(grid)
            vals[1:] = np.asarray(talbot_inverse(self.laplace_smooth, grid[1:]))
            # endpoint at 0: extrapolate from the first interior samples
            vals[0] = 2.0 * vals[1] - vals[2]
            est = float(np.trapezoid(vals, grid))
            if prev is not None and abs(est - prev) <= _T_EFF_NUMERIC_REL_TOL * max(abs(est), 1e-300):
                return est
            prev = est
            n *= 2
        return est


def effective_temperature_laplace(model: NoiseModel) -> LaplaceRational:
    """T[s] = C[s]/eta[s] as a reduced rational function."""
    eta = model.friction_laplace()
    if np.all(eta.num == 0):
        raise ZeroFriction("total friction kernel is identically zero")
    return model.correlator_laplace() / eta


def invert_laplace(t_s: LaplaceRational) -> EffectiveTemperature:
    """Exact inversion of a proper rational T[s] by partial fractions.

    The delta atom is the s -> infinity limit; complex pole pairs combine
    into damped cosines.  Raises RepeatedPole / UnstablePole rather than
    guessing at confluent or growing mode structure.
    """
    offset, poles, residues = t_s.partial_fractions()
    scale = max(1.0, float(np.max(np.abs(poles))) if poles.size else 1.0)
    tiny = 1e-12 * scale
    modes: list[Mode] = []
    asymptote = 0.0
    used = np.zeros(len(poles), dtype=bool)
    for i, (p, r) in enumerate(zip(poles, residues)):
        if used[i]:
            continue
        used[i] = True
        if abs(p) <= tiny:
            asymptote += float(r.real)
            continue
        if abs(p.imag) <= tiny:
            modes.append(Mode(amplitude=float(r.real), rate=float(-p.real)))
            continue
        # find the conjugate partner
        partner = None
        for j in range(i + 1, len(poles)):
            if not used[j] and abs(poles[j] - p.conjugate()) <= 1e-9 * scale:
                partner = j
                break
        if partner is None:
            raise ValueError(f"unpaired complex pole {p:.6g}")
        used[partner] = True
        pp = p if p.imag > 0 else poles[partner]
        rr = r if p.imag > 0 else residues[partner]
        modes.append(Mode(amplitude=2.0 * abs(rr), rate=float(-pp.real),
                          freq=float(pp.imag), phase=float(cmath.phase(rr))))
    return EffectiveTemperature(delta_weight=float(offset), modes=tuple(modes),
                                asymptote=asymptote,
                                provenance=Provenance.PARTIAL_FRACTION)


def effective_temperature(model: NoiseModel) -> EffectiveTemperature:
    """Invert T[s] for the model: partial fractions when rational, the
    deformed-contour numerical route for tabulated components."""
    if model.is_rational:
        return invert_laplace(effective_temperature_laplace(model))
    return _numerical_effective_temperature(model)


def t_eff(model: NoiseModel, t):
    """Time-dependent effective temperature of a composed model."""
    return effective_temperature(model).t_eff(t)


def two_reservoir_t_eff(eta_f: float, t_f: float, eta_s: float, t_s: float,
                        tau: float, t):
    """Closed form for a fast delta reservoir plus one slow exponential
    reservoir, with eta = eta_f + eta_s:

        T_eff(t) = (eta_f T_f + eta_s T_s)/eta
                   + (eta_s/eta)(T_f - T_s) exp(-(eta/eta_f) t/tau)
    """
    if eta_f <= 0:
        raise ValueError("eta_f must be positive")
    if eta_s < 0:
        raise ValueError("eta_s must be >= 0")
    if tau <= 0:
        raise ValueError("tau must be positive")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be >= 0")
    eta = eta_f + eta_s
    out = (eta_f * t_f + eta_s * t_s) / eta \
        + (eta_s / eta) * (t_f - t_s) * np.exp(-(eta / eta_f) * t / tau)
    return out if out.ndim else float(out)


def engineered_t_eff(e1_sq: float, e2_sq: float, tau: float, eta: float,
                     charge: float, t, ambient_temperature: float = 0.0):
    """Effective temperature of two random electric fields over a constant
    ambient friction eta:

        T_eff(t) = (q^2/eta) (<E1^2> + <E2^2> (1 - exp(-t/tau)))

    <E.^2> are noise intensities.  The ambient reservoir's additive
    temperature is negligible during the experiment; it is exposed as an
    optional constant defaulting to 0.
    """
    if eta <= 0:
        raise ValueError("eta must be positive")
    if tau <= 0:
        raise ValueError("tau must be positive")
    if e1_sq < 0 or e2_sq < 0:
        raise ValueError("field intensities must be >= 0")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be >= 0")
    q2 = charge * charge
    out = ambient_temperature + (q2 / eta) * (e1_sq + e2_sq * (-np.expm1(-t / tau)))
    return out if out.ndim else float(out)


def _numerical_effective_temperature(model: NoiseModel) -> EffectiveTemperature:
    """Numerical-provenance T(t) for models with a tabulated component."""
    tab = model.tabulated
    if model.delta_friction <= 0 and model.delta_noise > 0:
        raise ZeroFriction(
            "delta noise without delta friction has no finite T(0) atom")
    delta_weight = (model.delta_noise / model.delta_friction
                    if model.delta_friction > 0 else 0.0)

    def eta_s(s):
        out = np.full_like(s, model.delta_friction, dtype=complex)
        for m in model.exp_modes:
            out = out + m.eta / (s * m.tau + 1.0)
        out = out + _laplace_of_linear_interp(tab.times, tab.kernel, s)
        return out

    def c_s(s):
        out = np.full_like(s, model.delta_noise, dtype=complex)
        for m in model.exp_modes:
            out = out + m.noise_weight / (s * m.tau + 1.0)
        out = out + _laplace_of_linear_interp(
            tab.times, tab.temperature * tab.kernel, s)
        return out

    def smooth(s):
        s = np.asarray(s, dtype=complex)
        eta = eta_s(s)
        if np.any(eta == 0):
            raise ZeroFriction("eta[s] vanished on the inversion contour")
        return c_s(s) / eta - delta_weight

    return EffectiveTemperature(delta_weight=delta_weight, modes=(),
                                provenance=Provenance.NUMERICAL,
                                laplace_smooth=smooth)


def _laplace_of_linear_interp(times: np.ndarray, values: np.ndarray, s):
    """Exact Laplace transform of a piecewise-linear function on [t0, tN],
    zero afterwards.  Stable for small |s h| via series expansions."""
    s = np.asarray(s, dtype=complex)
    out = np.zeros_like(s)
    t1 = times[:-1]
    h = np.diff(times)
    v1 = values[:-1]
    dv = np.diff(values)
    flat_s = s.ravel()
    res = np.zeros_like(flat_s)
    for idx, sv in enumerate(flat_s):
        x = sv * h
        small = np.abs(x) < 1e-4
        with np.errstate(divide="ignore", invalid="ignore"):
            f0 = np.where(small,
                          1.0 - x / 2.0 + x**2 / 6.0 - x**3 / 24.0,
                          -np.expm1(-x) / np.where(small, 1.0, x))
            f1 = np.where(small,
                          0.5 - x / 3.0 + x**2 / 8.0 - x**3 / 30.0,
                          (1.0 - np.exp(-x) * (1.0 + x)) / np.where(small, 1.0, x * x))
        seg = np.exp(-sv * t1) * h * (v1 * f0 + dv * f1)
        res[idx] = np.sum(seg)
    out = res.reshape(s.shape)
    return out
