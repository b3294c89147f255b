"""Exception hierarchy.

``ConfigInvalid`` maps to CLI exit code 2, everything derived from
``NumericalError`` to exit code 3.
"""

from __future__ import annotations


class NeqdecError(Exception):
    """Base class for all package errors."""


class ConfigInvalid(NeqdecError):
    """Scenario configuration rejected; carries the offending field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class NumericalError(NeqdecError):
    """Base class for numerical/model failures (CLI exit code 3)."""


# --- kernels ---------------------------------------------------------------

class DeltaKernelNotPointwise(NumericalError):
    """A delta kernel has no pointwise time-domain value."""


class NegativeTime(NumericalError):
    """Kernels and correlators are defined for t >= 0 only."""


class TabulatedNotRational(NumericalError):
    """Tabulated reservoirs have no rational Laplace transform."""


class QuadratureNonConvergence(NumericalError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class EmptyEnvironment(NumericalError):
    """compose() needs at least one reservoir."""


# --- effective temperature -------------------------------------------------

class ZeroFriction(NumericalError):
    """Total friction kernel vanishes; T[s] = C[s]/eta[s] undefined."""


class RepeatedPole(NumericalError):
    """Partial fractions require simple denominator roots."""


class UnstablePole(NumericalError):
    """Denominator root with positive real part."""


# --- decoherence -----------------------------------------------------------

class NoDecoherence(NumericalError):
    """Attenuation exponent stays below 1 forever (no noise)."""


# --- langevin --------------------------------------------------------------

class TabulatedNotEmbeddable(NumericalError):
    """Only delta/exponential components admit a Markovian embedding."""


class IntegratorFailure(NumericalError):
    """Covariance propagation did not converge."""


# --- wigner ----------------------------------------------------------------

class GridTooSmall(NumericalError):
    """Phase-space grid does not span the required support."""


class StepTooLarge(NumericalError):
    """Drift sub-step violates the CFL-style shift restriction."""


class NormalizationDrift(NumericalError):
    """Total Wigner mass drifted beyond tolerance during evolution."""


class PeakBelowFloor(NumericalError):
    """Interference peak decayed below the representable floor."""


# --- trap ------------------------------------------------------------------

class FrequencyOutOfRange(NumericalError):
    """Trap frequency outside the ion's declared range."""


class InconsistentFlatness(NumericalError):
    """Calibration data are not consistent with a flat spectrum."""


class FitNonConvergence(NumericalError):
    """Spectral fit failed for every start."""


class DegenerateComponents(NumericalError):
    """Two fitted correlation times are indistinguishable."""
