"""Linear optical network, detectors, and the derived detection context.

The measurement device mixes a signal mode, a coherent reference (local
oscillator, LO), and a vacuum port in a passive linear network with two
detected outputs.  Everything downstream (densities, moments, simulation)
is parameterized by two per-detector numbers derived here:

    sigma_j^2 = eta_j |alpha_j|^2 + nu_j      (photocurrent variance)
    h_j       = eta_j conj(Q_j1) alpha_j      (signal-noise coupling)

where alpha_j = Q_j1 <a> + Q_j2 alpha_L is the mean field at detector j.

Phase convention
----------------
For the standard lossless cross-correlation splitter we fix T real >= 0 and
R = i|R|.  Under that choice, driving the LO with physical phase
-(phi + pi/2) makes the device probe the quadrature
x_phi = a e^{i phi} + a^dagger e^{-i phi}: in the strong-LO limit the mean
of the product outcome is -eta_1 eta_2 |T|^2 |R|^2 |alpha_L|^2 <:(dx_phi)^2:>,
with no residual phase offset.  ``LocalOscillator.for_optical_phase`` applies
that mapping; phase scans and the scenario configs use it throughout.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalValidityError, RegimeWarning

_GRAM_TOL = 1e-12

# Below eta_j |alpha_j|^2 of this, the Gaussian limit of the photocount
# statistics degrades; we warn rather than fail (the MC oracle quantifies
# the error empirically).
DEFAULT_INTENSITY_FLOOR = 100.0


@dataclass(frozen=True)
class LonMatrix:
    """2x3 input-output matrix of the linear optical network.

    Rows are the detected output modes, columns the signal, reference, and
    vacuum inputs.  The matrix must extend to a 3x3 unitary whose third row
    carries the loss mode, which is equivalent to the Gram matrix q q^dagger
    having eigenvalues in [0, 1].  Constant loss shows up purely as a
    row-norm deficit; no explicit loss-mode amplitude is stored.
    """

    q: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=complex)
        if q.shape != (2, 3):
            raise ValueError(f"LON matrix must be 2x3, got shape {q.shape}")
        q.flags.writeable = False
        object.__setattr__(self, "q", q)
        gram = q @ q.conj().T
        eigs = np.linalg.eigvalsh(gram)
        if eigs.min() < -_GRAM_TOL or eigs.max() > 1.0 + _GRAM_TOL:
            raise ValueError(
                "LON matrix is not a submatrix of a unitary: Gram eigenvalues "
                f"{eigs} fall outside [0, 1]"
            )

    def row_norms(self) -> tuple[float, float]:
        n = np.linalg.norm(self.q, axis=1)
        return float(n[0]), float(n[1])


@dataclass(frozen=True)
class DetectorConfig:
    """Linear photodetector: quantum efficiency and mean dark-count rate."""

    eta: float
    nu: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"efficiency must be in [0, 1], got {self.eta}")
        if self.nu < 0.0:
            raise ValueError(f"dark-count rate must be >= 0, got {self.nu}")


@dataclass(frozen=True)
class LocalOscillator:
    """Coherent reference field alpha_L = magnitude * exp(i * phase).

    ``phase`` is the physical phase of the field; it is stored exactly as
    given (reduced mod 2*pi only when reporting, never in computation).
    """

    magnitude: float
    phase: float = 0.0

    def __post_init__(self):
        if self.magnitude < 0.0:
            raise ValueError(f"LO magnitude must be >= 0, got {self.magnitude}")

    @property
    def amplitude(self) -> complex:
        return self.magnitude * cmath.exp(1j * self.phase)

    @property
    def phase_mod_2pi(self) -> float:
        return self.phase % (2.0 * math.pi)

    @classmethod
    def for_optical_phase(cls, magnitude: float, phi: float) -> "LocalOscillator":
        """LO that probes quadrature x_phi in the cross-correlation scheme.

        See the module docstring: with T real and R = i|R| the physical LO
        phase realizing optical phase phi is -(phi + pi/2).
        """
        return cls(magnitude=magnitude, phase=-(phi + 0.5 * math.pi))


def make_cross_correlation_lon(t: complex, r: complex) -> LonMatrix:
    """Single-splitter network: signal and LO interfere on one beam splitter.

    ``t`` and ``r`` are the field transmittance and reflectance.  Lossless
    operation (|t|^2 + |r|^2 = 1) additionally requires the beam-splitter
    phase condition conj(t) r + conj(r) t = 0; a norm deficit models
    constant loss.
    """
    t, r = complex(t), complex(r)
    s = abs(t) ** 2 + abs(r) ** 2
    if s > 1.0 + _GRAM_TOL:
        raise ValueError(f"|t|^2 + |r|^2 = {s} > 1 is non-physical")
    phase_mismatch = 2.0 * (t.conjugate() * r).real
    if abs(s - 1.0) <= _GRAM_TOL and abs(phase_mismatch) > 1e-9:
        raise ValueError(
            "lossless beam splitter violates the phase condition "
            f"conj(t)*r + conj(r)*t = 0 (got {phase_mismatch})"
        )
    return LonMatrix(np.array([[t, r, 0.0], [r, t, 0.0]], dtype=complex))


def symmetric_cross_lon(transmittance_sq: float, reflectance_sq: float) -> LonMatrix:
    """Cross-correlation network from intensity ratios, T real, R = i|R|."""
    if transmittance_sq < 0.0 or reflectance_sq < 0.0:
        raise ValueError("intensity ratios must be nonnegative")
    return make_cross_correlation_lon(
        math.sqrt(transmittance_sq), 1j * math.sqrt(reflectance_sq)
    )


def make_intensity_correlation_lon(
    t1: complex, r1: complex, t2: complex, r2: complex
) -> LonMatrix:
    """Two-splitter network: signal/LO splitter followed by a tap splitter."""
    t1, r1, t2, r2 = complex(t1), complex(r1), complex(t2), complex(r2)
    for k, (t, r) in enumerate([(t1, r1), (t2, r2)], start=1):
        s = abs(t) ** 2 + abs(r) ** 2
        if s > 1.0 + _GRAM_TOL:
            raise ValueError(f"splitter {k}: |t|^2 + |r|^2 = {s} > 1 is non-physical")
    return LonMatrix(
        np.array(
            [[t2 * t1, t2 * r1, r2], [r2 * t1, r2 * r1, t2]],
            dtype=complex,
        )
    )


def output_amplitude(
    lon: LonMatrix, j: int, alpha: complex, lo: LocalOscillator
) -> complex:
    """Mean coherent amplitude at detector j for signal amplitude alpha."""
    if j not in (1, 2):
        raise ValueError(f"detector index must be 1 or 2, got {j}")
    row = lon.q[j - 1]
    return complex(row[0]) * alpha + complex(row[1]) * lo.amplitude


@dataclass(frozen=True)
class DetectionContext:
    """All device-side quantities entering the correlation statistics.

    Immutable; ``sigma_sq`` and ``h`` are cached at construction.  They
    depend on the signal only through its mean amplitude.
    """

    lon: LonMatrix
    det1: DetectorConfig
    det2: DetectorConfig
    lo: LocalOscillator
    mean_signal: complex
    sigma_sq: tuple[float, float] = field(init=False)
    h: tuple[complex, complex] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "mean_signal", complex(self.mean_signal))
        sigma_sq = []
        h = []
        for j, det in ((1, self.det1), (2, self.det2)):
            a_j = output_amplitude(self.lon, j, self.mean_signal, self.lo)
            sigma_sq.append(det.eta * abs(a_j) ** 2 + det.nu)
            h.append(det.eta * complex(self.lon.q[j - 1, 0]).conjugate() * a_j)
        object.__setattr__(self, "sigma_sq", (sigma_sq[0], sigma_sq[1]))
        object.__setattr__(self, "h", (h[0], h[1]))

    @property
    def sigma(self) -> tuple[float, float]:
        return (math.sqrt(self.sigma_sq[0]), math.sqrt(self.sigma_sq[1]))

    @property
    def sigma_product(self) -> float:
        return self.sigma[0] * self.sigma[1]

    def with_mean_signal(self, mean_signal: complex) -> "DetectionContext":
        return DetectionContext(self.lon, self.det1, self.det2, self.lo, mean_signal)


def build_context(
    lon: LonMatrix,
    det1: DetectorConfig,
    det2: DetectorConfig,
    lo: LocalOscillator,
    mean_signal: complex = 0j,
    intensity_floor: float = DEFAULT_INTENSITY_FLOOR,
) -> DetectionContext:
    """Assemble a :class:`DetectionContext`, checking the detection regime.

    Warns (does not fail) when eta_j |alpha_j|^2 falls below
    ``intensity_floor``, and rejects contexts with a vanishing photocurrent
    variance outright.
    """
    ctx = DetectionContext(lon, det1, det2, lo, mean_signal)
    for j, det in ((1, det1), (2, det2)):
        bright = ctx.sigma_sq[j - 1] - det.nu
        if bright < intensity_floor:
            warnings.warn(
                f"detector {j}: eta*|alpha_{j}|^2 = {bright:.3g} < {intensity_floor:g}; "
                "not in the high-intensity regime, the Gaussian photocount limit "
                "may be inaccurate",
                RegimeWarning,
                stacklevel=2,
            )
    if min(ctx.sigma_sq) <= 0.0:
        raise NumericalValidityError(
            f"photocurrent variances must be positive, got sigma^2 = {ctx.sigma_sq}"
        )
    return ctx
