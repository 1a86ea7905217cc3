"""Acceptance suite: one test per release criterion, tolerances pinned.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS line per
criterion.
"""

import cmath
import math
import time

import numpy as np
import pytest
from scipy import integrate

from conftest import TWO_PI, cross_context
from hcmstats import (
    ClassicalPSampler,
    Coherent,
    Fock,
    Gaussian,
    cauchy_schwarz_d,
    correlation_pdf,
    empirical_product_histogram,
    gaussian_normal_ordered_moments,
    mean_var_m,
    nonclassicality_r,
    pdf_via_product_integral,
    simulate_counts,
)
from hcmstats.densities import GaussianJointParams, pdf_gaussian
from hcmstats.oracles import JointDensity, bin_averaged_density, raw_moments_numeric

LO_MAG = 1000.0  # |alpha_L|^2 = 1e6 throughout

GAUSSIAN_SETS = [
    # six parameter sets, including both orientations of the reference state
    Gaussian(4.0, 0.5, 0.0, 1000.0 + 0j),
    Gaussian(4.0, 0.5, math.pi, 1000.0 + 0j),
    Gaussian(3.0, 3.0, 0.0, 0j),              # thermal, n_bar = 1
    Gaussian(2.0, 0.5, 1.3, 200.0 + 0j),      # pure squeezed, rotated
    Gaussian(3.0, 1.2, 2.1, 500.0 + 300.0j),  # mixed, complex mean
    Gaussian(1.5, 1.0, 0.7, 50.0 + 0j),       # near-coherent
]


def report(number: int, text: str) -> None:
    print(f"ACCEPTANCE {number:2d} PASS  {text}")


def fig_context(state, phi=0.0, t2=0.14, r2=0.86, nu=0.0):
    return cross_context(
        t2=t2, r2=r2, nu1=nu, nu2=nu, mean=state.mean, lo_mag=LO_MAG, phi=phi
    )


def random_classical_states(seed, count):
    rng = np.random.default_rng(seed)
    states = []
    for _ in range(count):
        v_p = rng.uniform(1.0, 5.0)
        v_x = v_p + rng.uniform(0.0, 4.0)
        states.append(
            Gaussian(
                v_x,
                v_p,
                rng.uniform(0.0, TWO_PI),
                rng.uniform(50.0, 800.0) * cmath.exp(1j * rng.uniform(0.0, TWO_PI)),
            )
        )
    return states


def test_criterion_1_normalization():
    t0 = time.monotonic()
    cases = [("coherent", correlation_pdf(Coherent(0), cross_context(lo_mag=LO_MAG)))]
    for i, state in enumerate(GAUSSIAN_SETS):
        ctx = fig_context(state, phi=0.3 + 0.4 * i)
        cases.append((f"gaussian[{i}]", correlation_pdf(state, ctx)))
    ctx0 = cross_context(lo_mag=LO_MAG)
    for n in range(5):
        cases.append((f"fock[{n}]", correlation_pdf(Fock(n), ctx0)))
    for name, pdf in cases:
        err = pdf.normalization_error(tol=1e-7)
        assert err < 1e-6, (name, err)
    elapsed = time.monotonic() - t0
    assert elapsed < 10.0, f"normalization suite took {elapsed:.1f} s"
    report(1, f"12 densities normalized to 1e-6 in {elapsed:.2f} s")


def test_criterion_2_coherent_closed_form():
    # independent Bessel oracle via the integral representation
    k0_oracle, err = integrate.quad(
        lambda t: math.exp(-math.cosh(t)), 0.0, 12.0,
        limit=300, epsabs=1e-14, epsrel=1e-14,
    )
    assert err < 1e-12 * k0_oracle
    assert k0_oracle == pytest.approx(0.421024, abs=5e-7)
    ctx = cross_context(lo_mag=LO_MAG)
    scale = ctx.sigma_product
    pdf = correlation_pdf(Coherent(0), ctx)
    assert pdf.pdf(scale) == pytest.approx(k0_oracle / (math.pi * scale), rel=1e-10)
    grid = np.linspace(1e-3, 6.0, 1000)
    asym = max(
        abs(pdf.pdf_normalized(x) - pdf.pdf_normalized(-x)) for x in grid
    )
    assert asym < 1e-12
    report(2, f"w(s1 s2) = K0(1)/(pi s1 s2); max asymmetry {asym:.1e}")


def test_criterion_3_gaussian_oracle_equivalence():
    t0 = time.monotonic()
    s1, s2 = 2.0, 0.7
    worst = 0.0
    grid = [x for x in np.linspace(-6.0, 6.0, 121) if abs(x) >= 0.05]
    for corr in (-0.6, 0.0, 0.6):
        joint = JointDensity(kind="gaussian", s1=s1, s2=s2, corr=corr)
        params = GaussianJointParams(s1=s1, s2=s2, corr=corr)
        for x in grid:
            m = x * s1 * s2
            closed = pdf_gaussian(m, params)
            oracle = pdf_via_product_integral(joint, m, tol=1e-8)
            worst = max(worst, abs(closed - oracle) / abs(oracle))
    elapsed = time.monotonic() - t0
    assert worst <= 1e-6, worst
    assert elapsed < 60.0, f"oracle comparison took {elapsed:.1f} s"
    report(3, f"closed form vs product integral: worst rel err {worst:.1e} "
              f"in {elapsed:.1f} s")


def test_criterion_4_reductions():
    ctx = cross_context(t2=0.3, r2=0.7, lo_mag=LO_MAG)
    coh = correlation_pdf(Coherent(0), ctx)
    gauss = correlation_pdf(Gaussian(1.0, 1.0, 0.0, 0j), ctx)
    fock0 = correlation_pdf(Fock(0), ctx)
    xs = [x for x in np.linspace(-6.0, 6.0, 241) if x != 0.0]
    for x in xs:
        ref = coh.pdf_normalized(x)
        assert abs(gauss.pdf_normalized(x) - ref) <= 1e-12 * max(1.0, ref)
        assert abs(fock0.pdf_normalized(x) - ref) <= 1e-12 * max(1.0, ref)
    # single photon against the independently coded closed form
    from hcmstats.bessel import bessel_k

    ctx_eta = cross_context(eta1=0.8, eta2=0.8, lo_mag=LO_MAG)
    s1, s2 = ctx_eta.sigma
    h1, h2 = ctx_eta.h
    a = abs(h1) ** 2 / s1**2 + abs(h2) ** 2 / s2**2
    b = 2.0 * (h1 * h2.conjugate()).real / (s1 * s2)
    fock1 = correlation_pdf(Fock(1), ctx_eta)
    for x in xs:
        closed = (
            (1.0 - a) * bessel_k(0, abs(x))
            + a * abs(x) * bessel_k(1, abs(x))
            + b * x * bessel_k(0, abs(x))
        ) / math.pi
        val = fock1.pdf_normalized(x)
        assert abs(val - closed) <= 1e-12 * max(1.0, abs(closed))
    report(4, "Gaussian(1,1) and Fock(0) reduce to coherent; Fock(1) matches "
              "the closed form to 1e-12")


def test_criterion_5_fock_means():
    ctx = cross_context(lo_mag=LO_MAG)
    for n in range(1, 5):
        pdf = correlation_pdf(Fock(n), ctx)
        mean, _ = raw_moments_numeric(pdf, tol=1e-8)
        expected = -0.5 * n * LO_MAG**2
        assert mean == pytest.approx(expected, rel=1e-4), n
    report(5, "integrated Fock means equal -0.5 n |alpha_L|^2 (n = 1..4) to 1e-4")


def test_criterion_6_gaussian_moments():
    for phi_xi in (0.0, math.pi):
        state = Gaussian(4.0, 0.5, phi_xi, 1000.0 + 0j)
        for phi in np.linspace(0.0, TWO_PI, 8, endpoint=False):
            ctx = fig_context(state, phi=phi)
            pdf = correlation_pdf(state, ctx)
            mean_q, var_q = raw_moments_numeric(pdf, tol=1e-8)
            mean_th, var_th = mean_var_m(state, ctx)
            assert mean_q == pytest.approx(mean_th, rel=1e-5), (phi_xi, phi)
            assert var_q == pytest.approx(var_th, rel=1e-5), (phi_xi, phi)
    report(6, "integrated Gaussian mean and variance match C s1 s2 and "
              "(1 + C^2) s1^2 s2^2 at 8 phases, both orientations")


def test_criterion_7_cauchy_schwarz():
    state = Gaussian(4.0, 0.5, math.pi, 1000.0 + 0j)
    amp2 = abs(state.mean) ** 2
    scale = amp2**2
    d_0 = cauchy_schwarz_d(gaussian_normal_ordered_moments(state, 0.0))
    d_pi = cauchy_schwarz_d(gaussian_normal_ordered_moments(state, math.pi))
    d_half = cauchy_schwarz_d(gaussian_normal_ordered_moments(state, math.pi / 2))
    assert abs(d_0) < 1e-9 * scale
    assert abs(d_pi) < 1e-9 * scale
    assert d_half / amp2 == pytest.approx(-1.5, rel=1e-9)
    for state in random_classical_states(2718, 20):
        cls_scale = max(1.0, abs(state.mean) ** 4)
        for phi in np.linspace(0.0, TWO_PI, 64):
            d = cauchy_schwarz_d(gaussian_normal_ordered_moments(state, phi))
            assert d >= -1e-9 * cls_scale
    report(7, "D zeros at 0 and pi, D(pi/2)/|<a>|^2 = -1.5; 20 classical "
              "states satisfy D >= 0 at 64 phases")


def test_criterion_8_variance_criterion():
    ctx = cross_context(lo_mag=LO_MAG)
    _, var = mean_var_m(Coherent(0), ctx)
    assert abs(nonclassicality_r(var, ctx)) < 1e-12
    for state in random_classical_states(314, 20):
        for phi in np.linspace(0.0, TWO_PI, 16, endpoint=False):
            c = fig_context(state, phi=phi, t2=0.5, r2=0.5)
            _, var = mean_var_m(state, c)
            assert nonclassicality_r(var, c) >= -1e-9
    # amplitude-squeezed reference state: the nonclassical phase set strictly
    # contains the squeezing set on a 720-point grid
    state = Gaussian(4.0, 0.5, 0.0, 1000.0 + 0j)
    phis = np.linspace(0.0, TWO_PI, 720, endpoint=False)
    squeezed = np.empty(len(phis), dtype=bool)
    nonclassical = np.empty(len(phis), dtype=bool)
    for i, phi in enumerate(phis):
        c = fig_context(state, phi=float(phi))
        _, var = mean_var_m(state, c)
        nonclassical[i] = nonclassicality_r(var, c) < 0.0
        squeezed[i] = gaussian_normal_ordered_moments(state, float(phi)).var_x < 0.0
    assert np.all(nonclassical[squeezed])
    assert np.any(nonclassical & ~squeezed)
    report(8, f"r = 0 for coherent; r >= 0 for 20 classical states; "
              f"{{r < 0}} ({nonclassical.sum()} pts) strictly contains "
              f"{{var_x < 0}} ({squeezed.sum()} pts) on the 720-point grid")


def test_criterion_9_monte_carlo_closure():
    t0 = time.monotonic()
    n_samples = 1_000_000
    thermal = Gaussian(3.0, 3.0, 0.0, 0j)
    for name, state, seed in (
        ("coherent", Coherent(0), 1001),
        ("thermal", thermal, 1002),
    ):
        ctx = cross_context(lo_mag=LO_MAG)
        run = simulate_counts(ClassicalPSampler(state), ctx, seed=seed, n=n_samples)
        mean_mc, var_mc = run.product_mean_var()
        mean_th, var_th = mean_var_m(state, ctx)
        se_mean = math.sqrt(var_mc / n_samples)
        assert abs(mean_mc - mean_th) < 3.0 * se_mean, name
        p = run.products
        se_var = math.sqrt((np.mean((p - p.mean()) ** 4) - var_mc**2) / n_samples)
        assert abs(var_mc - var_th) < 3.0 * se_var, name
        centers, density, _ = empirical_product_histogram(run, bins=120)
        closed = correlation_pdf(state, ctx)
        reference = bin_averaged_density(closed, np.linspace(-6.0, 6.0, 121))
        sup = float(np.max(np.abs(density - reference)))
        assert sup <= 0.01, (name, sup)
    elapsed = time.monotonic() - t0
    assert elapsed < 120.0, f"Monte-Carlo closure took {elapsed:.1f} s"
    report(9, f"1e6-sample runs match closed forms within 3 SE, "
              f"sup-distance <= 0.01, in {elapsed:.1f} s")


def test_criterion_10_dark_noise():
    state = Gaussian(4.0, 0.5, math.pi, 1000.0 + 0j)
    results = []
    for nu in (0.0, 10.0, 100.0):
        ctx = fig_context(state, phi=0.9, nu=nu)
        results.append(mean_var_m(state, ctx))
    means = [m for m, _ in results]
    variances = [v for _, v in results]
    assert means[1] == pytest.approx(means[0], rel=1e-9)
    assert means[2] == pytest.approx(means[0], rel=1e-9)
    assert variances[0] < variances[1] < variances[2]
    report(10, "dark counts leave E(M) unchanged and strictly inflate var(M)")
