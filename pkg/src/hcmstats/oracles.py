"""Independent validation paths for the closed-form densities.

Two oracles, deliberately decoupled from the closed forms they check:

  * a photodetection Monte-Carlo at the Poisson-count level (no Gaussian
    approximation inside), sampling the phase-space distribution of
    classical states, and
  * direct numerical evaluation of the product law
    w(M) = int dy/|y| p(y, M/y) from an evaluable joint density of the two
    photocurrents.

Also hosts singularity-aware quadrature of the densities themselves
(normalization and moment checks).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import integrate

from .densities import CorrelationPdf
from .errors import NonconvergenceError, NumericalValidityError
from .network import DetectionContext
from .states import Coherent, Fock, Gaussian, SignalState

__all__ = [
    "ClassicalPSampler",
    "SimulationRun",
    "simulate_counts",
    "empirical_product_histogram",
    "JointDensity",
    "joint_pdf_numeric",
    "pdf_via_product_integral",
    "density_moment_numeric",
    "bin_averaged_density",
]

SHARD_SIZE = 1 << 18


# ---------------------------------------------------------------------------
# phase-space sampling of classical states
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassicalPSampler:
    """Sampler of the centered phase-space distribution of a classical state.

    Coherent states are a point mass at the origin.  A classical Gaussian
    state (V_p >= 1) has the noise distribution of gamma = e^{i phi_xi/2}(u + iv)
    with independent u ~ N(0, (V_p - 1)/4) and v ~ N(0, (V_x - 1)/4); this
    is the unique assignment that reproduces the quadrature variance
    V(phi) = (V_p - V_x)/2 cos(2 phi + phi_xi) + (V_x + V_p)/2.

    Construction fails for squeezed states (V_p < 1) and photon-number
    states with n >= 1, whose distributions are not probability densities.
    """

    state: SignalState

    def __post_init__(self):
        state = self.state
        if isinstance(state, Coherent):
            return
        if isinstance(state, Gaussian):
            if not state.is_classical:
                raise NumericalValidityError(
                    f"V_p = {state.v_p} < 1: squeezed states have no classical "
                    "phase-space density to sample"
                )
            return
        if isinstance(state, Fock):
            if state.n >= 1:
                raise NumericalValidityError(
                    f"Fock state |{state.n}> has no classical phase-space density to sample"
                )
            return
        raise TypeError(f"unsupported signal state: {state!r}")

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Draw n centered noise amplitudes gamma as a complex array."""
        state = self.state
        if isinstance(state, Gaussian):
            su = math.sqrt(max(state.v_p - 1.0, 0.0) / 4.0)
            sv = math.sqrt(max(state.v_x - 1.0, 0.0) / 4.0)
            u = rng.normal(0.0, su, size=n) if su > 0 else np.zeros(n)
            v = rng.normal(0.0, sv, size=n) if sv > 0 else np.zeros(n)
            return np.exp(0.5j * state.phi_xi) * (u + 1j * v)
        return np.zeros(n, dtype=complex)


# ---------------------------------------------------------------------------
# photodetection Monte-Carlo
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimulationRun:
    """Raw counts of one Monte-Carlo run plus derived fluctuation products.

    Reproducible bit-exactly from (seed, n_samples): the run is sharded into
    fixed-size blocks, each driven by a counter-based stream derived from
    the seed and the shard index, so the sample stream does not depend on
    scheduling or shard count.
    """

    seed: int
    n_samples: int
    m1: np.ndarray
    m2: np.ndarray
    ctx: DetectionContext

    @cached_property
    def mean_counts(self) -> tuple[float, float]:
        return float(self.m1.mean()), float(self.m2.mean())

    @cached_property
    def products(self) -> np.ndarray:
        """Fluctuation products M_i = (m1_i - <x1>)(m2_i - <x2>), empirical means."""
        x1, x2 = self.mean_counts
        return (self.m1 - x1) * (self.m2 - x2)

    def product_mean_var(self) -> tuple[float, float]:
        p = self.products
        return float(p.mean()), float(p.var())


def _shard_rng(seed: int, shard: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(shard,))
    return np.random.Generator(np.random.Philox(ss))


def simulate_counts(
    sampler: ClassicalPSampler,
    ctx: DetectionContext,
    seed: int,
    n: int,
) -> SimulationRun:
    """Draw n joint photocounts (m1, m2) from the Poisson detection model.

    Per sample: draw gamma from the state's phase-space distribution, form
    the detector intensities lambda_j = eta_j |alpha_j(gamma + <a>)|^2 + nu_j,
    and draw independent Poisson counts.  The Poisson sampling is exact
    (transformed rejection at large intensity), never a Gaussian surrogate,
    so the run is independent of the bright-light approximation under test.
    """
    if n < 1:
        raise ValueError(f"need at least one sample, got {n}")
    q = ctx.lon.q
    a_lo = ctx.lo.amplitude
    etas = (ctx.det1.eta, ctx.det2.eta)
    nus = (ctx.det1.nu, ctx.det2.nu)
    m1_parts, m2_parts = [], []
    n_shards = (n + SHARD_SIZE - 1) // SHARD_SIZE
    for shard in range(n_shards):
        k = min(SHARD_SIZE, n - shard * SHARD_SIZE)
        rng = _shard_rng(seed, shard)
        gamma = sampler.draw(rng, k)
        alpha = gamma + ctx.mean_signal
        counts = []
        for j in range(2):
            field = q[j, 0] * alpha + q[j, 1] * a_lo
            lam = etas[j] * np.abs(field) ** 2 + nus[j]
            counts.append(rng.poisson(lam))
        m1_parts.append(counts[0])
        m2_parts.append(counts[1])
    return SimulationRun(
        seed=seed,
        n_samples=n,
        m1=np.concatenate(m1_parts),
        m2=np.concatenate(m2_parts),
        ctx=ctx,
    )


def empirical_product_histogram(
    run: SimulationRun,
    bins: int = 120,
    m_range: tuple[float, float] = (-6.0, 6.0),
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Histogram of M_i / (sigma_1 sigma_2) as (centers, density, counts).

    The density is normalized by the total sample count (not just the
    in-range part), so it estimates the true density at the bin centers.
    """
    scaled = run.products / run.ctx.sigma_product
    counts, edges = np.histogram(scaled, bins=bins, range=m_range)
    widths = np.diff(edges)
    centers = 0.5 * (edges[:-1] + edges[1:])
    density = counts / (run.n_samples * widths)
    return centers, density, counts


# ---------------------------------------------------------------------------
# evaluable joint densities of the two photocurrents
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JointDensity:
    """Joint density p(c1, c2) of the photocurrent fluctuations."""

    kind: str
    s1: float
    s2: float
    corr: float
    poly: tuple[tuple[int, int, float], ...] = ()

    def pdf(self, c1: float, c2: float) -> float:
        x1, x2 = c1 / self.s1, c2 / self.s2
        rho = self.corr
        norm = 2.0 * math.pi * self.s1 * self.s2 * math.sqrt(1.0 - rho * rho)
        expo = -(x1 * x1 - 2.0 * rho * x1 * x2 + x2 * x2) / (2.0 * (1.0 - rho * rho))
        base = math.exp(expo) / norm
        if not self.poly:
            return base
        return base * sum(c * x1**a * x2**b for a, b, c in self.poly)


def _expand_joint_derivative(q: int, r1: complex, r2: complex) -> dict:
    """Coefficient table of d^q d*^q applied to the conditioned joint Gaussian.

    Works in the basis X_{a,b} = ((c1 - mu1)/s1)^a ((c2 - mu2)/s2)^b exp(...),
    where one derivative acts as

        d* X_{a,b} = + r1 X_{a+1,b} + r2 X_{a,b+1}
                     - a r1 X_{a-1,b} - b r2 X_{a,b-1}

    (same shifts as the G recursion, opposite signs) and d/d(gamma) uses the
    conjugated couplings.  Evaluating at gamma = 0 then turns X_{a,b} into
    (c1/s1)^a (c2/s2)^b times the bare Gaussian.
    """

    def apply(table: dict, ra: complex, rb: complex) -> dict:
        out: dict[tuple[int, int], complex] = {}

        def add(key, val):
            out[key] = out.get(key, 0.0j) + val

        for (a, b), c in table.items():
            add((a + 1, b), c * ra)
            add((a, b + 1), c * rb)
            if a > 0:
                add((a - 1, b), -c * a * ra)
            if b > 0:
                add((a, b - 1), -c * b * rb)
        return out

    table: dict[tuple[int, int], complex] = {(0, 0): 1.0 + 0.0j}
    for _ in range(q):
        table = apply(table, r1, r2)
    for _ in range(q):
        table = apply(table, r1.conjugate(), r2.conjugate())
    return table


def joint_pdf_numeric(state: SignalState, ctx: DetectionContext) -> JointDensity:
    """Joint photocurrent density for the supported state families.

    Coherent signals give a product of centered normals; Gaussian signals a
    correlated bivariate normal; photon-number states (n <= 5) a polynomial
    times the bare Gaussian, with coefficients from the derivative expansion
    of the conditioned joint law.
    """
    s1, s2 = ctx.sigma
    if isinstance(state, Coherent):
        return JointDensity(kind="coherent", s1=s1, s2=s2, corr=0.0)
    if isinstance(state, Gaussian):
        from .densities import gaussian_joint_params

        params = gaussian_joint_params(state, ctx)
        return JointDensity(kind="gaussian", s1=params.s1, s2=params.s2, corr=params.corr)
    if isinstance(state, Fock):
        if state.n > 5:
            raise ValueError(f"joint density supported for n <= 5, got n = {state.n}")
        if ctx.mean_signal != 0j:
            raise ValueError("Fock states require a context built with <a> = 0")
        r1, r2 = ctx.h[0] / s1, ctx.h[1] / s2
        acc: dict[tuple[int, int], complex] = {}
        for q_ord in range(state.n + 1):
            weight = math.comb(state.n, q_ord) / math.factorial(q_ord)
            for key, c in _expand_joint_derivative(q_ord, r1, r2).items():
                acc[key] = acc.get(key, 0.0j) + weight * c
        poly = tuple(
            (a, b, c.real) for (a, b), c in sorted(acc.items()) if abs(c) > 1e-300
        )
        return JointDensity(kind="fock", s1=s1, s2=s2, corr=0.0, poly=poly)
    raise TypeError(f"unsupported signal state: {state!r}")


# ---------------------------------------------------------------------------
# product-integral oracle
# ---------------------------------------------------------------------------

def pdf_via_product_integral(joint: JointDensity, m: float, tol: float = 1e-8) -> float:
    """Evaluate w(M) = int dy/|y| p(y, M/y) by adaptive quadrature.

    The substitution y = +-e^t removes both the y -> 0 and |y| -> inf
    endpoint problems: the transformed integrand decays double-exponentially
    on both sides of its peak near t0 = ln sqrt(|M| s1 / s2).
    """
    if m == 0.0:
        raise ValueError("the product integral is evaluated away from M = 0")
    scale = joint.s1 * joint.s2 * max(1.0 - joint.corr**2, 1e-6)
    t0 = 0.5 * math.log(abs(m) * joint.s1 / joint.s2)
    z = abs(m) / scale
    half_width = max(4.0, 0.5 * math.log(3200.0 / min(z, 3200.0)) + 2.0)

    def integrand(t: float) -> float:
        y = math.exp(t)
        return joint.pdf(y, m / y) + joint.pdf(-y, -m / y)

    val, err = integrate.quad(
        integrand,
        t0 - half_width,
        t0 + half_width,
        limit=300,
        epsabs=0.0,
        epsrel=tol * 0.1,
    )
    if val != 0.0 and err > tol * abs(val):
        raise NonconvergenceError(
            f"product integral did not converge at M = {m}: "
            f"relative error estimate {err / abs(val):.2e} > {tol:.2e}",
            achieved=err / abs(val),
        )
    return val


# ---------------------------------------------------------------------------
# quadrature of the densities themselves
# ---------------------------------------------------------------------------

def density_moment_numeric(pdf: CorrelationPdf, k: int = 0, tol: float = 1e-8) -> float:
    """int x^k w(x) dx of the normalized density (x = M / sigma_1 sigma_2).

    Splits the axis at the singular point x = 0 and at |x| = 1, letting the
    adaptive rule resolve the integrable log endpoint.
    """
    f = pdf.pdf_normalized

    def g(x: float) -> float:
        return x**k * f(x)

    pieces = [(0.0, 1.0), (1.0, math.inf), (-1.0, 0.0), (-math.inf, -1.0)]
    total = 0.0
    err_total = 0.0
    for a, b in pieces:
        val, err = integrate.quad(g, a, b, limit=300, epsabs=1e-13, epsrel=tol * 0.1)
        total += val
        err_total += err
    if err_total > max(tol * abs(total), 1e-10):
        raise NonconvergenceError(
            f"density moment k={k} did not converge: error estimate {err_total:.2e}",
            achieved=err_total,
        )
    return total


def raw_moments_numeric(pdf: CorrelationPdf, tol: float = 1e-8) -> tuple[float, float]:
    """(E(M), var(M)) in raw units by quadrature of the density."""
    m1 = density_moment_numeric(pdf, 1, tol=tol)
    m2 = density_moment_numeric(pdf, 2, tol=tol)
    return pdf.scale * m1, pdf.scale**2 * (m2 - m1 * m1)


def bin_averaged_density(pdf: CorrelationPdf, edges: np.ndarray) -> np.ndarray:
    """Mean of the normalized closed-form density over each histogram bin.

    Bins straddling the origin are split there so the log singularity is an
    endpoint of each quadrature panel.
    """
    f = pdf.pdf_normalized
    out = np.empty(len(edges) - 1)
    for i, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
        if a < 0.0 < b:
            val = (
                integrate.quad(f, a, 0.0, limit=100)[0]
                + integrate.quad(f, 0.0, b, limit=100)[0]
            )
        else:
            val = integrate.quad(f, a, b, limit=100)[0]
        out[i] = val / (b - a)
    return out
