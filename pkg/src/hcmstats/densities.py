"""Closed-form probability densities w(M) of the product outcome M = c1*c2.

In the bright-light regime the two photocurrent fluctuations conditioned on
a phase-space point are independent Gaussians with variances sigma_j^2 and
means mu_j(gamma) = conj(h_j) gamma + h_j conj(gamma).  Mixing over the
signal's phase-space distribution and taking the product law gives, for

  * coherent signals:  w(M) = K_0(|M| / s1 s2) / (pi s1 s2),
  * Gaussian signals:  a tilted-K_0 law in terms of the joint parameters
    (s1, s2, C) of the two correlated photocurrents,
  * Fock signals:      a finite series of weight functions W_{a,b} whose
    coefficients come from an exact derivative recursion.

All densities are nonnegative, integrate to one, and may carry an
integrable logarithmic singularity at M = 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

from .bessel import bessel_k, bessel_k_scaled, bessel_k_sequence
from .errors import NumericalValidityError
from .network import DetectionContext
from .states import Coherent, Fock, Gaussian, SignalState

__all__ = [
    "weight_w",
    "weight_w_at_zero",
    "g_function",
    "fock_g_derivatives",
    "fock_weight_coefficients",
    "GaussianJointParams",
    "gaussian_joint_params",
    "pdf_coherent",
    "pdf_gaussian",
    "pdf_fock",
    "CorrelationPdf",
    "correlation_pdf",
]

MAX_FOCK_N = 20


# ---------------------------------------------------------------------------
# weight functions W_{a,b} and the Gaussian kernel G_{a,b}
# ---------------------------------------------------------------------------

def weight_w(a: int, b: int, z: float) -> float:
    """Weight function W_{a,b}(z) multiplying each series term.

    W_{a,b}(z) = (1/pi) (1/(2a)!) C(2a, b) z^(2a-b) |z|^(b-a) K_(b-a)(|z|),
    with K_(-v) = K_v.  Defined for 0 <= b <= 2a and z != 0.
    """
    if a < 0 or not 0 <= b <= 2 * a:
        raise ValueError(f"require 0 <= b <= 2a, got a={a}, b={b}")
    if z == 0.0:
        raise ValueError("W_{a,b} is singular or needs a limit at z = 0")
    az = abs(z)
    sign = 1.0 if z > 0 or (2 * a - b) % 2 == 0 else -1.0
    # z^(2a-b) |z|^(b-a) = sign(z)^b * |z|^a
    mag = az**a * bessel_k(abs(b - a), az)
    return sign * math.comb(2 * a, b) / math.factorial(2 * a) / math.pi * mag


def weight_w_at_zero(a: int, b: int) -> float:
    """Finite limit of W_{a,b}(z) as z -> 0; requires (a, b) != (0, 0).

    Only b = 0 and b = 2a survive with the value Gamma(a) 2^(a-1) / (pi (2a)!);
    W_{0,0} diverges logarithmically and every other index tends to zero.
    """
    if (a, b) == (0, 0):
        raise ValueError("W_{0,0} diverges logarithmically at z = 0")
    if b in (0, 2 * a) and a >= 1:
        return math.gamma(a) * 2.0 ** (a - 1) / (math.pi * math.factorial(2 * a))
    return 0.0


def g_function(a: int, b: int, gamma: complex, ctx: DetectionContext) -> float:
    """Gaussian kernel G_{a,b}(gamma) = (mu1/s1)^a (mu2/s2)^b exp(-mu1^2/2s1^2 - mu2^2/2s2^2)."""
    if a < 0 or b < 0:
        raise ValueError("indices must be nonnegative")
    s1, s2 = ctx.sigma
    h1, h2 = ctx.h
    gamma = complex(gamma)
    mu1 = (h1.conjugate() * gamma + h1 * gamma.conjugate()).real
    mu2 = (h2.conjugate() * gamma + h2 * gamma.conjugate()).real
    return (
        (mu1 / s1) ** a
        * (mu2 / s2) ** b
        * math.exp(-0.5 * (mu1 / s1) ** 2 - 0.5 * (mu2 / s2) ** 2)
    )


# ---------------------------------------------------------------------------
# derivative recursion for Fock states
# ---------------------------------------------------------------------------

class GDerivatives:
    """Equal-order mixed derivatives of G_{a,b} at the phase-space origin.

    value(q, a, b) returns d^q/d(gamma)^q d^q/d(conj gamma)^q G_{a,b} at
    gamma = 0.  One derivative maps G_{a,b} onto four neighbours:

        d/d(conj gamma) G_{a,b} = -(h1/s1) G_{a+1,b} - (h2/s2) G_{a,b+1}
                                  + a (h1/s1) G_{a-1,b} + b (h2/s2) G_{a,b-1}

    and d/d(gamma) acts the same way with conjugated couplings.  Peeling one
    pair of derivatives off and using G_{a,b}(0) = delta_{a,0} delta_{b,0}
    gives a memoized recursion; results are exactly real.
    """

    def __init__(self, ctx: DetectionContext):
        s1, s2 = ctx.sigma
        self._r1 = ctx.h[0] / s1
        self._r2 = ctx.h[1] / s2
        self._memo: dict[tuple[int, int, int], complex] = {}

    def _step(self, a: int, b: int, r1: complex, r2: complex):
        terms = [(-r1, a + 1, b), (-r2, a, b + 1)]
        if a > 0:
            terms.append((a * r1, a - 1, b))
        if b > 0:
            terms.append((b * r2, a, b - 1))
        return terms

    def _value(self, q: int, a: int, b: int) -> complex:
        if q == 0:
            return 1.0 + 0.0j if (a, b) == (0, 0) else 0.0j
        key = (q, a, b)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        acc = 0.0j
        c1, c2 = self._r1.conjugate(), self._r2.conjugate()
        for coeff1, a1, b1 in self._step(a, b, self._r1, self._r2):
            for coeff2, a2, b2 in self._step(a1, b1, c1, c2):
                acc += coeff1 * coeff2 * self._value(q - 1, a2, b2)
        self._memo[key] = acc
        return acc

    def value(self, q: int, a: int, b: int) -> float:
        if q < 0 or a < 0 or b < 0:
            raise ValueError("indices must be nonnegative")
        v = self._value(q, a, b)
        return v.real


def fock_g_derivatives(
    q: int, ctx: DetectionContext, n_max: int = MAX_FOCK_N
) -> dict[tuple[int, int], float]:
    """Table of d^q d*^q G_{a,b}|_0 over every index pair that can survive.

    Only a + b even and a + b <= 2q contribute; the table is keyed (a, b).
    The coefficient tables stay sparse (O(q^2) entries), so the default cap
    of 20 is comfortable; raise ``n_max`` at your own risk of combinatorial
    round-off.
    """
    if q > n_max:
        raise ValueError(f"derivative order {q} exceeds the configured maximum {n_max}")
    calc = GDerivatives(ctx)
    table = {}
    for u in range(q + 1):
        for a in range(2 * u + 1):
            table[(a, 2 * u - a)] = calc.value(q, a, 2 * u - a)
    return table


def fock_weight_coefficients(
    n: int, ctx: DetectionContext, n_max: int = MAX_FOCK_N
) -> dict[tuple[int, int], float]:
    """Coefficients c_{u,l} with w(M) = (1/s1 s2) sum c_{u,l} W_{u,l}(M/s1 s2).

    Collapses the binomial sum over derivative orders of the photon-number
    state's phase-space representation; the series is finite, so there is no
    truncation error.
    """
    if not 0 <= n <= n_max:
        raise ValueError(f"photon number must be in [0, {n_max}], got {n}")
    calc = GDerivatives(ctx)
    coeffs: dict[tuple[int, int], float] = {}
    for q in range(n + 1):
        weight = math.comb(n, q) / math.factorial(q)
        for u in range(q + 1):
            for ell in range(2 * u + 1):
                d = calc.value(q, ell, 2 * u - ell)
                if d != 0.0:
                    coeffs[(u, ell)] = coeffs.get((u, ell), 0.0) + weight * d
    return coeffs


# ---------------------------------------------------------------------------
# coherent states
# ---------------------------------------------------------------------------

def pdf_coherent(m: float, ctx: DetectionContext) -> float:
    """w(M) for a coherent signal: K_0(|M|/s1 s2) / (pi s1 s2).

    The signal amplitude enters only through the variances sigma_j^2; the
    density is symmetric in M with an integrable log singularity at M = 0.
    """
    scale = ctx.sigma_product
    if m == 0.0:
        return math.inf
    return bessel_k(0, abs(m) / scale) / (math.pi * scale)


# ---------------------------------------------------------------------------
# Gaussian states
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianJointParams:
    """Joint law of the two photocurrents for a Gaussian signal.

    The currents are zero-mean correlated Gaussians with standard deviations
    s1, s2 and correlation coefficient corr in (-1, 1).
    """

    s1: float
    s2: float
    corr: float

    def __post_init__(self):
        if not (self.s1 > 0.0 and self.s2 > 0.0):
            raise NumericalValidityError(
                f"joint standard deviations must be positive, got ({self.s1}, {self.s2})"
            )
        if not abs(self.corr) < 1.0:
            raise NumericalValidityError(
                f"|correlation| = {abs(self.corr)} >= 1: outside the validity regime"
            )

    @property
    def scale(self) -> float:
        return self.s1 * self.s2


def gaussian_joint_params(state: Gaussian, ctx: DetectionContext) -> GaussianJointParams:
    """Map a Gaussian signal through the detection context to (s1, s2, C).

    J_{u,l} = sigma_u sigma_l delta_{u,l}
              + (1/2)(-1)^(u+l) { (V_p + V_x - 2) Re[h_u conj(h_l)]
                                  + (V_p - V_x) Re[h_u h_l e^{-i phi_xi}] },
    s_j = sqrt(J_{j,j}), C = -J_{1,2} / (s1 s2).
    """
    if complex(state.mean) != ctx.mean_signal:
        raise ValueError(
            "context was built for a different mean amplitude than the state: "
            f"{ctx.mean_signal} vs {state.mean}"
        )
    sig = ctx.sigma
    h = ctx.h
    rot = cmath.exp(-1j * state.phi_xi)
    sum_term = state.v_p + state.v_x - 2.0
    diff_term = state.v_p - state.v_x

    def j_entry(u: int, ell: int) -> float:
        base = sig[u] * sig[ell] if u == ell else 0.0
        brace = sum_term * (h[u] * h[ell].conjugate()).real + diff_term * (
            h[u] * h[ell] * rot
        ).real
        return base + 0.5 * ((-1.0) ** (u + ell)) * brace

    j11, j22, j12 = j_entry(0, 0), j_entry(1, 1), j_entry(0, 1)
    if j11 <= 0.0 or j22 <= 0.0:
        raise NumericalValidityError(
            f"joint variances not positive (J11={j11}, J22={j22}): "
            "state is outside the validity regime of the Gaussian reduction"
        )
    s1, s2 = math.sqrt(j11), math.sqrt(j22)
    return GaussianJointParams(s1=s1, s2=s2, corr=-j12 / (s1 * s2))


def pdf_gaussian(m: float, params: GaussianJointParams) -> float:
    """w(M) for a Gaussian signal, in terms of the joint parameters.

    w(M) = exp(C M / (s1 s2 (1 - C^2))) K_0(|M| / (s1 s2 (1 - C^2)))
           / (pi s1 s2 sqrt(1 - C^2)).

    Computed with the exponentially scaled K_0 so the tilt factor and the
    Bessel decay combine without overflow.
    """
    if m == 0.0:
        return math.inf
    corr = params.corr
    eff = params.scale * (1.0 - corr * corr)
    x = m / eff
    prefactor = 1.0 / (math.pi * params.scale * math.sqrt(1.0 - corr * corr))
    return prefactor * math.exp(corr * x - abs(x)) * bessel_k_scaled(0, abs(x))


# ---------------------------------------------------------------------------
# Fock states
# ---------------------------------------------------------------------------

def pdf_fock(m: float, n: int, ctx: DetectionContext) -> float:
    """w(M) for the signal in a photon-number state |n>.

    Finite double sum over weight functions (no truncation error), with the
    coefficient set renormalized by its analytically exact integral to absorb
    the floating-point cancellation that accumulates at large n.  Requires a
    context built with zero mean amplitude.
    """
    if ctx.mean_signal != 0j:
        raise ValueError("Fock states have zero mean amplitude; build the context with <a> = 0")
    coeffs = _normalized_fock_coefficients(n, ctx)[0]
    return _fock_pdf_value(m, coeffs, ctx.sigma_product)


def _normalized_fock_coefficients(
    n: int, ctx: DetectionContext
) -> tuple[dict[tuple[int, int], float], float]:
    coeffs = fock_weight_coefficients(n, ctx)
    norm = fock_series_normalization(coeffs)
    if abs(norm - 1.0) > 1e-12:
        coeffs = {key: c / norm for key, c in coeffs.items()}
    return coeffs, norm


def fock_series_normalization(coeffs: dict[tuple[int, int], float]) -> float:
    """Exact integral of the weight series with the given coefficients.

    Odd-l weights are odd in z and drop out; for even l,
    int W_{u,l}(z) dz = (2/pi) C(2u, l)/(2u)! * 2^(u-1)
                        Gamma((u+1-v)/2) Gamma((u+1+v)/2),  v = |l - u|.
    The analytically exact value for |n> is 1; in double precision the
    coefficient collapse loses digits to cancellation as n grows (about
    1e-5 relative by n = 20), and this sum measures exactly that loss.
    """
    total = 0.0
    for (u, ell), c in coeffs.items():
        if ell % 2:
            continue
        nu = abs(ell - u)
        integral = (
            2.0 ** (u - 1)
            * math.gamma(0.5 * (u + 1 - nu))
            * math.gamma(0.5 * (u + 1 + nu))
        )
        total += c * (2.0 / math.pi) * math.comb(2 * u, ell) / math.factorial(2 * u) * integral
    return total


def _prepare_fock_terms(
    coeffs: dict[tuple[int, int], float],
) -> tuple[list[tuple[int, int, int, float]], int]:
    """Fold the combinatorial factors of each W_{u,l} into its coefficient.

    Returns (terms, max_order) with terms of the form
    (u, |l - u|, l mod 2, c * C(2u, l) / ((2u)! pi)); the weight then reduces
    to sign(z)^l |z|^u K_{|l-u|}(|z|), so one Bessel recurrence pass per
    evaluation point covers every term.
    """
    terms = []
    max_order = 0
    for (u, ell), c in coeffs.items():
        order = abs(ell - u)
        max_order = max(max_order, order)
        fac = math.comb(2 * u, ell) / (math.factorial(2 * u) * math.pi)
        terms.append((u, order, ell % 2, c * fac))
    return terms, max_order


def _fock_pdf_value(
    m: float,
    coeffs: dict[tuple[int, int], float],
    scale: float,
    prepared: tuple[list[tuple[int, int, int, float]], int] | None = None,
) -> float:
    z = m / scale
    if z == 0.0:
        c00 = coeffs.get((0, 0), 0.0)
        if c00 > 1e-300:
            return math.inf
        total = sum(
            c * weight_w_at_zero(u, ell) for (u, ell), c in coeffs.items() if (u, ell) != (0, 0)
        )
        return total / scale
    terms, max_order = prepared if prepared is not None else _prepare_fock_terms(coeffs)
    return _fock_pdf_from_terms(z, terms, max_order) / scale


def _fock_pdf_from_terms(
    z: float, terms: list[tuple[int, int, int, float]], max_order: int
) -> float:
    az = abs(z)
    k_values = bessel_k_sequence(max_order, az)
    max_u = max(u for u, _, _, _ in terms)
    powers = [1.0]
    for _ in range(max_u):
        powers.append(powers[-1] * az)
    negative = z < 0.0
    total = 0.0
    for u, order, parity, c in terms:
        val = c * powers[u] * k_values[order]
        if negative and parity:
            val = -val
        total += val
    return total


# ---------------------------------------------------------------------------
# evaluable density objects
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CorrelationPdf:
    """Evaluable density of the product outcome for one state and context.

    ``scale`` is sigma_1 sigma_2 of the context; ``pdf`` takes M in raw
    units and ``pdf_normalized`` takes x = M / scale (and returns the density
    of the normalized variable).  The density diverges logarithmically at
    M = 0 whenever the K_0 coefficient survives; evaluation there yields inf.
    """

    kind: str
    ctx: DetectionContext
    scale: float
    _pdf: Callable[[float], float]
    joint: GaussianJointParams | None = None
    meta: dict = field(default_factory=dict)

    def pdf(self, m: float) -> float:
        return self._pdf(float(m))

    def pdf_normalized(self, x: float) -> float:
        return self.scale * self._pdf(float(x) * self.scale)

    def evaluate(self, m_values) -> list[float]:
        return [self._pdf(float(m)) for m in m_values]

    def normalization_error(self, tol: float = 1e-8) -> float:
        """|integral of the density - 1|, by singularity-aware quadrature."""
        from .oracles import density_moment_numeric

        return abs(density_moment_numeric(self, 0, tol=tol) - 1.0)


def correlation_pdf(state: SignalState, ctx: DetectionContext) -> CorrelationPdf:
    """Dispatch to the closed-form density for the given signal state."""
    scale = ctx.sigma_product
    if isinstance(state, Coherent):
        if complex(state.alpha) != ctx.mean_signal:
            raise ValueError(
                "context mean amplitude does not match the coherent amplitude: "
                f"{ctx.mean_signal} vs {state.alpha}"
            )
        return CorrelationPdf(
            kind="coherent", ctx=ctx, scale=scale, _pdf=lambda m: pdf_coherent(m, ctx)
        )
    if isinstance(state, Gaussian):
        params = gaussian_joint_params(state, ctx)
        return CorrelationPdf(
            kind="gaussian",
            ctx=ctx,
            scale=scale,
            _pdf=lambda m: pdf_gaussian(m, params),
            joint=params,
            meta={"s1": params.s1, "s2": params.s2, "corr": params.corr},
        )
    if isinstance(state, Fock):
        if ctx.mean_signal != 0j:
            raise ValueError(
                "Fock states have zero mean amplitude; build the context with <a> = 0"
            )
        coeffs, series_norm = _normalized_fock_coefficients(state.n, ctx)
        prepared = _prepare_fock_terms(coeffs)
        return CorrelationPdf(
            kind="fock",
            ctx=ctx,
            scale=scale,
            _pdf=lambda m: _fock_pdf_value(m, coeffs, scale, prepared),
            meta={"n": state.n, "series_normalization": series_norm},
        )
    raise TypeError(f"unsupported signal state: {state!r}")
