"""Real rational functions of the Laplace variable s.

Coefficients are stored in ascending powers.  Construction reduces common
numerator/denominator roots (coincidence tolerance 1e-12) so that pole
bookkeeping downstream stays honest.  Also provides simple-pole partial
fractions and a fixed-node deformed-contour (Talbot) numerical inverse
transform used as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import RepeatedPole, UnstablePole

_ROOT_MATCH_TOL = 1e-12


def _trim(coeffs) -> np.ndarray:
    c = np.atleast_1d(np.asarray(coeffs, dtype=float))
    nz = np.nonzero(c)[0]
    if nz.size == 0:
        return np.zeros(1)
    return c[: nz[-1] + 1]


def _cancel_common_roots(num: np.ndarray, den: np.ndarray):
    """Divide out numerator/denominator roots that coincide within tolerance."""
    if len(num) < 2 or len(den) < 2 or np.all(num == 0):
        return num, den
    nroots = list(npoly.polyroots(num))
    droots = list(npoly.polyroots(den))
    changed = False
    kept_n = []
    for r in nroots:
        hit = None
        for i, q in enumerate(droots):
            if abs(r - q) <= _ROOT_MATCH_TOL * max(1.0, abs(r), abs(q)):
                hit = i
                break
        if hit is None:
            kept_n.append(r)
        else:
            droots.pop(hit)
            changed = True
    if not changed:
        return num, den
    n_lead = num[-1]
    d_lead = den[-1]
    new_num = n_lead * npoly.polyfromroots(kept_n)
    new_den = d_lead * npoly.polyfromroots(droots)
    # conjugate-closed root sets give real polynomials up to roundoff
    return _trim(new_num.real), _trim(new_den.real)


@dataclass(frozen=True, eq=False)
class LaplaceRational:
    """num(s)/den(s) with real coefficients in ascending powers of s."""

    num: np.ndarray
    den: np.ndarray

    def __init__(self, num, den):
        num = _trim(num)
        den = _trim(den)
        if den[-1] == 0.0 or np.all(den == 0):
            raise ValueError("denominator leading coefficient must be nonzero")
        num, den = _cancel_common_roots(num, den)
        # normalize scale: monic-like denominator keeps coefficients tame
        scale = den[-1]
        object.__setattr__(self, "num", num / scale)
        object.__setattr__(self, "den", den / scale)

    # -- basic queries -------------------------------------------------

    @property
    def num_degree(self) -> int:
        return len(self.num) - 1

    @property
    def den_degree(self) -> int:
        return len(self.den) - 1

    @property
    def is_proper(self) -> bool:
        return self.num_degree <= self.den_degree

    def __call__(self, s):
        s = np.asarray(s)
        return npoly.polyval(s, self.num) / npoly.polyval(s, self.den)

    def limit_at_infinity(self) -> float:
        """lim_{s->inf} num/den; zero for strictly proper, inf for improper."""
        dn, dd = self.num_degree, self.den_degree
        if dn < dd:
            return 0.0
        if dn == dd:
            return float(self.num[-1] / self.den[-1])
        return float("inf")

    def poles(self) -> np.ndarray:
        if self.den_degree == 0:
            return np.zeros(0, dtype=complex)
        return npoly.polyroots(self.den)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: "LaplaceRational") -> "LaplaceRational":
        n = npoly.polyadd(npoly.polymul(self.num, other.den),
                          npoly.polymul(other.num, self.den))
        return LaplaceRational(n, npoly.polymul(self.den, other.den))

    def __mul__(self, other: "LaplaceRational") -> "LaplaceRational":
        return LaplaceRational(npoly.polymul(self.num, other.num),
                               npoly.polymul(self.den, other.den))

    def __truediv__(self, other: "LaplaceRational") -> "LaplaceRational":
        if np.all(other.num == 0):
            raise ZeroDivisionError("division by the zero rational")
        return LaplaceRational(npoly.polymul(self.num, other.den),
                               npoly.polymul(self.den, other.num))

    @staticmethod
    def constant(value: float) -> "LaplaceRational":
        return LaplaceRational([float(value)], [1.0])

    # -- decomposition ---------------------------------------------------

    def partial_fractions(self, stable_tol: float = 1e-9):
        """Split a proper rational into (value at infinity, poles, residues).

        Requires simple poles with nonpositive real part; the remainder
        num/den - limit is strictly proper, so f(t) = sum r_i exp(p_i t).
        """
        if not self.is_proper:
            raise ValueError("partial fractions require deg(num) <= deg(den)")
        offset = self.limit_at_infinity()
        poles = self.poles()
        if poles.size == 0:
            return offset, poles, np.zeros(0, dtype=complex)
        scale = max(1.0, float(np.max(np.abs(poles))))
        for i in range(len(poles)):
            for j in range(i + 1, len(poles)):
                if abs(poles[i] - poles[j]) <= stable_tol * scale:
                    raise RepeatedPole(
                        f"poles {poles[i]:.6g} and {poles[j]:.6g} coincide")
        unstable = poles[poles.real > stable_tol * scale]
        if unstable.size:
            raise UnstablePole(f"pole with positive real part: {unstable[0]:.6g}")
        # strictly proper remainder: rem = num - offset*den (degree drops)
        rem = _trim(npoly.polysub(self.num, offset * np.asarray(self.den)))
        dden = npoly.polyder(self.den)
        residues = npoly.polyval(poles, rem) / npoly.polyval(poles, dden)
        return offset, poles, residues


def talbot_inverse(laplace_fn, t, n_nodes: int = 48):
    """Fixed Talbot inversion of a strictly proper transform at times t > 0.

    Deformed-contour evaluation with fixed nodes (Abate-Valko): for each t,
    r = 2M/(5t), s(theta) = r*theta*(cot(theta) + i) walks the contour.
    Used only as a cross-check of the exact partial-fraction route and for
    tabulated models without a rational transform.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t <= 0):
        raise ValueError("Talbot inversion needs t > 0")
    M = int(n_nodes)
    theta = np.arange(1, M) * np.pi / M
    cot = 1.0 / np.tan(theta)
    sigma = theta + (theta * cot - 1.0) * cot
    out = np.empty_like(t)
    for i, ti in enumerate(t):
        r = 2.0 * M / (5.0 * ti)
        s = r * theta * (cot + 1j)
        vals = np.asarray(laplace_fn(s), dtype=complex)
        acc = 0.5 * np.real(laplace_fn(np.array([r + 0j]))[0]) * np.exp(r * ti)
        acc += np.sum(np.real(np.exp(ti * s) * vals * (1.0 + 1j * sigma)))
        out[i] = acc * r / M
    return out if out.size > 1 else float(out[0])
