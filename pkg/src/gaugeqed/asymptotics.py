"""Large-coupling behaviour of the dipole-gauge two-level parameters."""

from __future__ import annotations

import math

import numpy as np

from .bosons import quadrature
from .errors import PerturbativeRegimeViolated


def zeta_asymptote(omega_sq: float, d: float) -> float:
    """Limit of zeta_D when the renormalized well is dominated by D^2 xi^2 / 2."""
    return d * d / (d * d + omega_sq)


def n0(n: int) -> float:
    """<1|(a+a^dag)^(2n)|1> - <0|(a+a^dag)^(2n)|0>."""
    if n < 1:
        raise ValueError("n must be >= 1")
    q = quadrature(2 * n + 3)
    m = np.linalg.matrix_power(q, 2 * n)
    return float(round(m[1, 1] - m[0, 0]))


def perturbative_tilde(c2n: float, n: int, d: float) -> tuple[float, float]:
    """First-order (omega~_10, x~_10) for D^2 xi^2/2 + c2n xi^(2n)/(2n)! about the oscillator of frequency D."""
    if d <= 0:
        raise PerturbativeRegimeViolated("D must be > 0")
    xd = math.sqrt(1.0 / (2 * d))
    nn = n0(n)
    fact = math.factorial(2 * n)
    corr = c2n * nn * xd ** (2 * n) / fact
    if n == 1:
        ok = d * d > 2 * abs(c2n)
    else:
        ok = abs(corr) / d < 0.5
    if not ok:
        raise PerturbativeRegimeViolated(f"correction {corr:.3g} is not small against D = {d:.3g}")
    w10 = d + corr
    x10 = xd - (c2n / (2 * d)) * (nn / fact) * xd ** (2 * n + 1)
    return w10, x10
