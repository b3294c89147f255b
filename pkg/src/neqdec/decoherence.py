"""Fringe-contrast predictions from accumulated momentum diffusion.

The interference term of a cat state's Wigner function is attenuated by

    A_int(t) = d^2 sigma_pp^2(t) / 2,
    sigma_pp^2(t) = 2 Int_0^t dt' Int_0^t' dt'' C(t' - t''),

and the contrast is exp(-A_int).  For delta and exponential noise
components the double integral has closed forms:

    delta atom c:            2 c t
    exponential (w, tau):    2 w (t - tau (1 - exp(-t/tau)))

A_int can equivalently be accumulated through the effective temperature,
A_int(t) = d^2 Int Int eta(t'-t'') T(t'') (t-t'), since C = eta * T
(convolution); both routes are implemented and must agree.

Everything here is a pure function of immutable inputs.
"""

from __future__ import annotations

import cmath
import enum
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from .efftemp import EffectiveTemperature
from .errors import NegativeTime, NoDecoherence, QuadratureNonConvergence
from .kernels import NoiseModel


@dataclass(frozen=True)
class CatState:
    """Superposition of two Gaussian packets of width sigma separated by d.

    ``narrow_separation`` flags d < 3 sigma, where the packets overlap and
    the peak-to-peak contrast loses meaning.
    """

    separation: float
    width: float
    mass: float
    freq: float
    narrow_separation: bool = field(init=False)

    def __post_init__(self):
        if self.separation <= 0:
            raise ValueError("separation must be positive (packets coincide)")
        if self.width <= 0:
            raise ValueError("width must be positive")
        narrow = self.separation < 3.0 * self.width
        object.__setattr__(self, "narrow_separation", narrow)
        if narrow:
            warnings.warn("cat separation is below 3 sigma; packets overlap",
                          stacklevel=2)


class ContrastMethod(enum.Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE = "quadrature"
    EXACT_GAUSSIAN = "exact_gaussian"
    GRID_PDE = "grid_pde"


@dataclass(frozen=True, eq=False)
class ContrastCurve:
    times: np.ndarray
    a_int: np.ndarray
    contrast: np.ndarray
    method: ContrastMethod


def _exp_deficit(x):
    """x - 1 + exp(-x), the memory deficit of an exponential mode; stable
    for small x."""
    x = np.asarray(x, dtype=float)
    small = x < 1e-8
    series = 0.5 * x * x * (1.0 - x / 3.0)
    direct = x + np.expm1(-x)
    return np.where(small, series, direct)


def sigma_pp(model: NoiseModel, t, method: str = "closed") -> float | np.ndarray:
    """Accumulated momentum variance sigma_pp^2(t).

    method "closed" uses the per-component closed forms; "quadrature"
    integrates (t-u) C_smooth(u) adaptively (the delta atom is always
    handled analytically).  Tabulated components always use quadrature.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise NegativeTime("sigma_pp requires t >= 0")
    out = 2.0 * model.delta_noise * t_arr
    if method == "closed":
        for m in model.exp_modes:
            out = out + 2.0 * m.noise_weight * m.tau * _exp_deficit(t_arr / m.tau)
        if model.tabulated is not None:
            out = out + 2.0 * _quad_weighted(model, t_arr, tabulated_only=True)
    elif method == "quadrature":
        out = out + 2.0 * _quad_weighted(model, t_arr, tabulated_only=False)
    else:
        raise ValueError(f"unknown sigma_pp method {method!r}")
    return out if out.ndim else float(out)


def _quad_weighted(model: NoiseModel, t_arr, tabulated_only: bool):
    """Int_0^t (t-u) C_smooth(u) du by adaptive quadrature."""
    def c_smooth(u):
        if tabulated_only:
            return model.tabulated.correlator_at(u)
        return model.correlator_smooth(u)

    flat = np.atleast_1d(t_arr).astype(float)
    res = np.zeros_like(flat)
    breakpoints = [m.tau for m in model.exp_modes]
    for i, ti in enumerate(flat):
        if ti == 0.0:
            continue
        pts = sorted({b for b in breakpoints if 0 < b < ti})
        val, _, info, *msg = integrate.quad(
            lambda u: (ti - u) * c_smooth(u), 0.0, ti,
            points=pts or None, epsabs=1e-300, epsrel=1e-10, limit=400,
            full_output=1)
        if msg:
            raise QuadratureNonConvergence(str(msg[0]))
        res[i] = val
    return res.reshape(np.shape(t_arr))


def a_int(cat: CatState, model: NoiseModel, t, method: str = "closed"):
    """Attenuation exponent A_int(t) = d^2 sigma_pp^2(t) / 2."""
    return 0.5 * cat.separation**2 * sigma_pp(model, t, method=method)


# --- Eq.-(10)-style accumulation through the effective temperature ----------

@dataclass(frozen=True)
class KernelModes:
    """Delta-weight-plus-exponential-modes form of a kernel eta(t) or a
    temperature density T(t): atom * delta(t) + constant + sum c_i e^{-g_i t}
    with complex (c_i, g_i) closed under conjugation."""

    atom: float
    constant: float
    terms: tuple[tuple[complex, complex], ...]

    @staticmethod
    def from_friction(model: NoiseModel) -> "KernelModes":
        if model.tabulated is not None:
            raise ValueError("tabulated kernels have no mode representation")
        terms = tuple((complex(m.eta / m.tau), complex(1.0 / m.tau))
                      for m in model.exp_modes if m.eta != 0.0)
        return KernelModes(atom=model.delta_friction, constant=0.0, terms=terms)

    @staticmethod
    def from_temperature(temp: EffectiveTemperature) -> "KernelModes":
        terms: list[tuple[complex, complex]] = []
        for m in temp.modes:
            if m.freq == 0.0 and m.phase == 0.0:
                terms.append((complex(m.amplitude), complex(m.rate)))
            else:
                half = 0.5 * m.amplitude * cmath.exp(1j * m.phase)
                terms.append((half, complex(m.rate, -m.freq)))
                terms.append((half.conjugate(), complex(m.rate, m.freq)))
        return KernelModes(atom=temp.delta_weight, constant=temp.asymptote,
                           terms=tuple(terms))


def _phi1(x):
    small = np.abs(x) < 1e-3
    xs = np.where(small, 1.0, x)
    direct = (1.0 - np.exp(-xs)) / xs
    series = 1.0 - x / 2.0 + x**2 / 6.0 - x**3 / 24.0 + x**4 / 120.0
    return np.where(small, series, direct)


def _phi2(x):
    small = np.abs(x) < 1e-3
    xs = np.where(small, 1.0, x)
    direct = (1.0 - np.exp(-xs) * (1.0 + xs)) / xs**2
    series = 0.5 - x / 3.0 + x**2 / 8.0 - x**3 / 30.0 + x**4 / 144.0
    return np.where(small, series, direct)


def _phi3(x):
    """M2 = Int_0^t u^2 e^{-g u} du = t^3 phi3(g t)."""
    small = np.abs(x) < 1e-3
    xs = np.where(small, 1.0, x)
    direct = 2.0 * (1.0 - np.exp(-xs) * (1.0 + xs + xs**2 / 2.0)) / xs**3
    series = 1.0 / 3.0 - x / 4.0 + x**2 / 10.0 - x**3 / 36.0
    return np.where(small, series, direct)


def _i2_exp(gamma, t):
    """Int_0^t (t-u) e^{-gamma u} du, stable for small and complex gamma."""
    x = gamma * t
    return t * t * (_phi1(x) - _phi2(x))


def _i2_texp(gamma, t):
    """Int_0^t (t-u) u e^{-gamma u} du."""
    x = gamma * t
    return t**3 * (_phi2(x) - _phi3(x))


_RATE_MATCH_REL = 1e-8


def _double_convolution_integral(eta_rep: KernelModes, temp_rep: KernelModes, t):
    """Int_0^t (t-u) (eta * T)(u) du with (eta * T) the causal convolution.

    This is sigma_pp^2/2 for C = eta * T, evaluated analytically term by
    term; coincident rates fall back to the t e^{-g t} closed form.
    """
    t = np.asarray(t, dtype=float)
    total = np.zeros_like(t, dtype=complex)
    # atom * atom is an atom of C
    total += eta_rep.atom * temp_rep.atom * t
    # atom of one side times smooth of the other keeps the smooth shape
    for c, g in temp_rep.terms:
        total += eta_rep.atom * c * _i2_exp(g, t)
    total += eta_rep.atom * temp_rep.constant * 0.5 * t * t
    for c, g in eta_rep.terms:
        total += temp_rep.atom * c * _i2_exp(g, t)
        if temp_rep.constant != 0.0:
            # (c e^{-g t}) * const = c*const*(1 - e^{-g t})/g
            total += c * temp_rep.constant / g * (0.5 * t * t - _i2_exp(g, t))
    # smooth * smooth
    for c1, g1 in eta_rep.terms:
        for c2, g2 in temp_rep.terms:
            scale = max(abs(g1), abs(g2), 1.0)
            if abs(g1 - g2) <= _RATE_MATCH_REL * scale:
                g = 0.5 * (g1 + g2)
                total += c1 * c2 * _i2_texp(g, t)
            else:
                total += c1 * c2 * (_i2_exp(g2, t) - _i2_exp(g1, t)) / (g1 - g2)
    out = total.real
    return out if out.ndim else float(out)


def a_int_via_temperature(cat: CatState, eta_rep: KernelModes,
                          temp_rep: KernelModes, t):
    """A_int(t) accumulated through eta(.) and T(.):

        A_int(t) = d^2 IntInt eta(t'-t'') T(t'') (t-t')

    which equals d^2/2 sigma_pp^2 with C = eta * T.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise NegativeTime("a_int requires t >= 0")
    out = cat.separation**2 * _double_convolution_integral(eta_rep, temp_rep, t_arr)
    return out if np.ndim(out) else float(out)


def contrast_curve(cat: CatState, model: NoiseModel, times,
                   method: str = "closed") -> ContrastCurve:
    """exp(-A_int) sampled on a strictly increasing grid starting at 0."""
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 2:
        raise ValueError("need a 1-d grid with at least two points")
    if times[0] != 0.0 or np.any(np.diff(times) <= 0):
        raise ValueError("grid must increase strictly from 0")
    a = a_int(cat, model, times, method=method)
    tag = ContrastMethod.CLOSED_FORM if method == "closed" else ContrastMethod.QUADRATURE
    if model.tabulated is not None:
        tag = ContrastMethod.QUADRATURE
    return ContrastCurve(times=times, a_int=a, contrast=np.exp(-a), method=tag)


def coherence_time(cat: CatState, model: NoiseModel) -> float:
    """Time at which A_int reaches 1.

    Equilibrium (delta-only) models return 1/(eta T d^2) exactly; otherwise
    the root is bracketed and bisected to relative 1e-10.  A_int grows
    without bound whenever the model carries any noise, so the only failure
    is the noiseless model.
    """
    rate = model.total_noise_rate
    if rate <= 0.0:
        raise NoDecoherence("attenuation exponent is bounded below 1")
    d2 = cat.separation**2
    if not model.exp_modes and model.tabulated is None:
        return 1.0 / (model.delta_noise * d2)
    guess = 1.0 / (rate * d2)
    lo, hi = guess, guess
    while a_int(cat, model, hi) < 1.0:
        hi *= 2.0
        if hi > 1e18 * guess:
            raise NoDecoherence("failed to bracket A_int = 1")
    while a_int(cat, model, lo) > 1.0:
        lo /= 2.0
    hi = max(hi, lo * (1.0 + 1e-12))
    return float(optimize.brentq(lambda t: a_int(cat, model, t) - 1.0,
                                 lo, hi, rtol=4e-14, xtol=1e-300))
