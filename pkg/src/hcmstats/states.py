"""Signal states: coherent, Gaussian (squeezed/thermal), and Fock.

Gaussian states are parameterized by the maximal and minimal quadrature
variances V_x >= V_p (coherent-state level = 1 in the convention
x_phi = a e^{i phi} + a^dagger e^{-i phi}), the phase-space orientation
angle phi_xi, and the mean amplitude.  The quadrature variance measured at
optical phase phi is

    V(phi) = (V_p - V_x)/2 * cos(2 phi + phi_xi) + (V_x + V_p)/2,

so phi_xi = 0 with a real mean gives an amplitude-squeezed state and
phi_xi = pi a phase-squeezed one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Coherent:
    alpha: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))

    @property
    def mean(self) -> complex:
        return self.alpha


@dataclass(frozen=True)
class Gaussian:
    v_x: float
    v_p: float
    phi_xi: float = 0.0
    mean: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "mean", complex(self.mean))
        if not self.v_p > 0.0:
            raise ValueError(f"V_p must be > 0, got {self.v_p}")
        if self.v_x < self.v_p:
            raise ValueError(
                f"V_x must be the larger variance: V_x = {self.v_x} < V_p = {self.v_p}"
            )
        if self.v_x * self.v_p < 1.0 - 1e-12:
            raise ValueError(
                f"V_x * V_p = {self.v_x * self.v_p} violates the uncertainty bound (>= 1)"
            )

    @property
    def is_classical(self) -> bool:
        """True when the phase-space distribution is a probability density."""
        return self.v_p >= 1.0

    @property
    def is_pure(self) -> bool:
        return abs(self.v_x * self.v_p - 1.0) <= 1e-12

    def quadrature_variance(self, phi: float) -> float:
        import math

        return 0.5 * (self.v_p - self.v_x) * math.cos(2.0 * phi + self.phi_xi) + 0.5 * (
            self.v_x + self.v_p
        )


@dataclass(frozen=True)
class Fock:
    """Photon-number state |n>.  Its mean amplitude is identically zero."""

    n: int

    def __post_init__(self):
        if self.n < 0 or self.n != int(self.n):
            raise ValueError(f"photon number must be a nonnegative integer, got {self.n}")

    @property
    def mean(self) -> complex:
        return 0j


SignalState = Union[Coherent, Gaussian, Fock]


def coherent_equivalent(state: SignalState) -> Coherent:
    """Coherent state with the same mean amplitude (the reference probe)."""
    return Coherent(state.mean)
