import math

import pytest
from scipy import integrate

from hcmstats.bessel import UNDERFLOW_Z, bessel_k, bessel_k_scaled

# Published table values ((Abramowitz & Stegun), also reproduced by the
# integral-representation oracle below at development time).
K0_AT_1 = 0.42102443824070834
K1_AT_1 = 0.6019072301972346


def k_integral_oracle_scaled(order, z):
    """Independent reference for e^z K_v(z), from the integral representation.

    e^z K_v(z) = int_0^inf exp(-z (cosh t - 1)) cosh(v t) dt; the scaled
    integrand stays representable for every z of interest.
    """
    # cutoff where the integrand has decayed ~exp(-80) below its peak, with
    # room for the cosh(v t) growth of the orders tested here
    t_max = math.acosh(1.0 + 80.0 / z) + 3.0
    val, err = integrate.quad(
        lambda t: math.exp(-z * (math.cosh(t) - 1.0)) * math.cosh(order * t),
        0.0,
        t_max,
        limit=400,
        epsabs=0.0,
        epsrel=1e-13,
    )
    assert err < 1e-10 * abs(val)
    return val


def test_frozen_table_values():
    assert bessel_k(0, 1.0) == pytest.approx(K0_AT_1, rel=1e-12)
    assert bessel_k(1, 1.0) == pytest.approx(K1_AT_1, rel=1e-12)


def test_matches_integral_oracle():
    assert k_integral_oracle_scaled(0, 1.0) * math.exp(-1.0) == pytest.approx(
        K0_AT_1, rel=1e-10
    )
    assert k_integral_oracle_scaled(1, 1.0) * math.exp(-1.0) == pytest.approx(
        K1_AT_1, rel=1e-10
    )
    for z in [1e-6, 0.01, 0.5, 1.0, 1.999, 2.0, 2.001, 7.3, 40.0, 250.0, 700.0]:
        for order in [0, 1, 2, 5, 12, 20]:
            ref = k_integral_oracle_scaled(order, z)
            assert bessel_k_scaled(order, z) == pytest.approx(ref, rel=1e-10), (order, z)


def test_large_z_asymptotic():
    z = 500.0
    leading = math.sqrt(math.pi / (2.0 * z)) * math.exp(-z)
    assert bessel_k(0, z) / leading == pytest.approx(1.0, abs=1e-3)
    # the scaled value removes the exponential and stays well conditioned
    assert bessel_k_scaled(0, z) == pytest.approx(
        math.sqrt(math.pi / (2.0 * z)), rel=1e-3
    )


def test_upward_recurrence_identity():
    for z in [0.03, 1.7, 9.0, 120.0]:
        for v in range(1, 15):
            lhs = bessel_k(v + 1, z)
            rhs = bessel_k(v - 1, z) + (2.0 * v / z) * bessel_k(v, z)
            assert lhs == pytest.approx(rhs, rel=1e-12)


def test_sequence_matches_individual_orders():
    from hcmstats.bessel import bessel_k_sequence

    for z in [0.1, 1.5, 3.0, 80.0]:
        seq = bessel_k_sequence(12, z)
        assert len(seq) == 13
        for v, val in enumerate(seq):
            assert val == pytest.approx(bessel_k(v, z), rel=1e-14)
    assert bessel_k_sequence(3, UNDERFLOW_Z + 10.0) == [0.0, 0.0, 0.0, 0.0]


def test_scaled_consistency():
    for z in [0.2, 1.0, 3.0, 30.0]:
        for v in [0, 1, 4]:
            assert bessel_k_scaled(v, z) * math.exp(-z) == pytest.approx(
                bessel_k(v, z), rel=1e-13
            )


def test_underflow_returns_zero():
    assert bessel_k(0, UNDERFLOW_Z + 60.0) == 0.0
    # the scaled companion still carries the magnitude
    assert bessel_k_scaled(0, UNDERFLOW_Z + 60.0) > 0.0


@pytest.mark.parametrize("bad_z", [0.0, -1.0])
def test_rejects_nonpositive_argument(bad_z):
    with pytest.raises(ValueError):
        bessel_k(0, bad_z)


def test_rejects_negative_order():
    with pytest.raises(ValueError):
        bessel_k(-1, 1.0)


def test_monotone_in_order():
    # K_v(z) increases with v at fixed z
    for z in [0.5, 5.0]:
        values = [bessel_k(v, z) for v in range(6)]
        assert all(a < b for a, b in zip(values, values[1:]))
