"""Modified Bessel functions of the second kind, K_v, for integer order.

The correlation densities in this package are built entirely from K_0 and
K_1 plus the stable upward recurrence

    K_{v+1}(z) = K_{v-1}(z) + (2 v / z) K_v(z).

K_0 and K_1 themselves are evaluated with the classic two-regime scheme:
a power series for z <= 2 and a Steed-type continued fraction for z > 2
(both good to close to machine precision, comfortably beyond the 10
significant digits promised over z in [1e-8, 700]).

Exponentially scaled variants e^z K_v(z) are provided so that densities of
the form exp(c*M) * K_0(|M|) can be computed in a cancellation-free way
without intermediate under/overflow.
"""

from __future__ import annotations

import math

_EULER_GAMMA = 0.5772156649015328606

# exp(-z) underflows to zero in IEEE double just above this point; K_v is
# then not representable and we report an underflowed zero.
UNDERFLOW_Z = 745.0

_SERIES_CROSSOVER = 2.0
_CF_MAX_ITER = 10_000


def _k01_series(z: float) -> tuple[float, float]:
    """Power series for (K_0(z), K_1(z)), accurate for 0 < z <= 2."""
    t = 0.25 * z * z
    lg = math.log(0.5 * z)

    # K_0 = -(ln(z/2) + gamma) I_0 + sum_{k>=1} t^k/(k!)^2 * H_k
    term = 1.0
    i0 = 1.0
    s0 = 0.0
    harmonic = 0.0
    k = 0
    while True:
        k += 1
        term *= t / (k * k)
        harmonic += 1.0 / k
        i0 += term
        s0 += term * harmonic
        if term < 1e-19 * i0:
            break
    k0 = -(lg + _EULER_GAMMA) * i0 + s0

    # K_1 = 1/z + ln(z/2) I_1 - (z/4) sum_k [psi(k+1)+psi(k+2)] t^k/(k!(k+1)!)
    term = 1.0
    i1_sum = 1.0
    s1 = 1.0 - 2.0 * _EULER_GAMMA
    h_k = 0.0
    h_k1 = 1.0
    k = 0
    while True:
        k += 1
        term *= t / (k * (k + 1))
        h_k += 1.0 / k
        h_k1 += 1.0 / (k + 1)
        i1_sum += term
        s1 += term * (h_k + h_k1 - 2.0 * _EULER_GAMMA)
        if term < 1e-19 * i1_sum:
            break
    i1 = 0.5 * z * i1_sum
    k1 = 1.0 / z + lg * i1 - 0.25 * z * s1
    return k0, k1


def _k01_scaled_cf(z: float) -> tuple[float, float]:
    """Continued fraction for (e^z K_0(z), e^z K_1(z)), z >= 2.

    Steed's algorithm for the CF2 fraction of the modified Bessel equation,
    specialized to order zero.
    """
    a1 = 0.25
    b = 2.0 * (1.0 + z)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a = -a1
    c = a1
    q = c
    s = 1.0 + q * delh
    for i in range(2, _CF_MAX_ITER):
        a -= 2.0 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < 1e-16:
            break
    h = a1 * h
    k0s = math.sqrt(math.pi / (2.0 * z)) / s
    k1s = k0s * (z + 0.5 - h) / z
    return k0s, k1s


def _validate(order: int, z: float) -> None:
    if order < 0 or order != int(order):
        raise ValueError(f"order must be a nonnegative integer, got {order!r}")
    if not z > 0.0:
        raise ValueError(f"K_v requires z > 0, got {z!r}")


def bessel_k_scaled(order: int, z: float) -> float:
    """Exponentially scaled modified Bessel function e^z K_order(z)."""
    _validate(order, z)
    if z <= _SERIES_CROSSOVER:
        k0, k1 = _k01_series(z)
        e = math.exp(z)
        k0, k1 = k0 * e, k1 * e
    else:
        k0, k1 = _k01_scaled_cf(z)
    if order == 0:
        return k0
    prev, cur = k0, k1
    for v in range(1, order):
        prev, cur = cur, prev + (2.0 * v / z) * cur
    return cur


def bessel_k(order: int, z: float) -> float:
    """Modified Bessel function of the second kind K_order(z), z > 0.

    For z beyond the double-precision underflow range the value is the
    underflowed 0.0; callers needing the magnitude there should use
    :func:`bessel_k_scaled` instead.
    """
    _validate(order, z)
    if z > UNDERFLOW_Z:
        return 0.0
    return bessel_k_scaled(order, z) * math.exp(-z)


def bessel_k_sequence(max_order: int, z: float) -> list[float]:
    """[K_0(z), ..., K_max_order(z)] from one recurrence pass.

    Much cheaper than repeated :func:`bessel_k` calls when a series needs
    many orders at the same argument.
    """
    _validate(max_order, z)
    if z > UNDERFLOW_Z:
        return [0.0] * (max_order + 1)
    e = math.exp(-z)
    if z <= _SERIES_CROSSOVER:
        k0, k1 = _k01_series(z)
    else:
        k0s, k1s = _k01_scaled_cf(z)
        k0, k1 = k0s * e, k1s * e
    out = [k0]
    if max_order >= 1:
        out.append(k1)
    for v in range(1, max_order):
        out.append(out[v - 1] + (2.0 * v / z) * out[v])
    return out
