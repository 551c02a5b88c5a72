"""
Hankel functions of the first kind, orders 0 and 1

Ascending series for z < SERIES_SWITCH, Hankel's asymptotic expansion above.
"""

import math
from typing import NamedTuple

import numpy as np

from ..utils.errors import NumericPreconditionError

EULER_GAMMA = 0.57721566490153286061

SERIES_SWITCH = 12.0

# enough for (z/2)^{2k}/(k!)^2 < 1e-18 at z = 12
SERIES_TERMS = 40

ASYMPTOTIC_TERMS = 30


class BesselSeries(NamedTuple):
    """
    Ascending-series values

    s is the tail S(z) = −Σ_{k≥1} H_k (−z²/4)^k/(k!)², so that
    Y0 = (2/π)((log(z/2) + γ)J0 + S).
    """
    j0: np.ndarray
    y0: np.ndarray
    j1: np.ndarray
    y1: np.ndarray
    s: np.ndarray


def _positive(z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if np.any(~(z > 0)):
        raise NumericPreconditionError("Hankel functions need z > 0")
    return z


def bessel_series(z) -> BesselSeries:
    """J0, Y0, J1, Y1 and the tail S from the ascending series (accurate for z < 12)"""
    z = _positive(z)
    q = 0.25 * z * z
    term0 = np.ones_like(z)
    term1 = np.ones_like(z)
    harmonic = 0.0
    psi_sum = -2 * EULER_GAMMA + 1.0    # ψ(1) + ψ(2)

    j0 = term0.copy()
    s = np.zeros_like(z)
    j1_sum = term1.copy()
    y1_sum = psi_sum * term1
    for k in range(1, SERIES_TERMS):
        term0 = term0 * (-q) / (k * k)
        term1 = term1 * (-q) / (k * (k + 1))
        harmonic += 1.0 / k
        psi_sum += 1.0 / k + 1.0 / (k + 1)
        j0 = j0 + term0
        s = s - harmonic * term0
        j1_sum = j1_sum + term1
        y1_sum = y1_sum + psi_sum * term1

    half = 0.5 * z
    log_half = np.log(half)
    j1 = half * j1_sum
    y0 = (2 / math.pi) * ((log_half + EULER_GAMMA) * j0 + s)
    y1 = -2 / (math.pi * z) + (2 / math.pi) * log_half * j1 - half * y1_sum / math.pi
    return BesselSeries(j0=j0, y0=y0, j1=j1, y1=y1, s=s)


def _asymptotic(nu: int, z: np.ndarray) -> np.ndarray:
    """√(2/πz) e^{i(z − νπ/2 − π/4)} Σ_k i^k a_k(ν)/z^k, summed while terms decrease"""
    mu = 4.0 * nu * nu
    total = np.ones_like(z, dtype=complex)
    term = np.ones_like(z, dtype=complex)
    active = np.ones(z.shape, dtype=bool)
    for k in range(1, ASYMPTOTIC_TERMS + 1):
        new = term * 1j * (mu - (2 * k - 1) ** 2) / (8.0 * k * z)
        active &= np.abs(new) < np.abs(term)
        if not active.any():
            break
        total = np.where(active, total + new, total)
        term = new
    phase = z - nu * math.pi / 2 - math.pi / 4
    return np.sqrt(2 / (math.pi * z)) * np.exp(1j * phase) * total


def _hankel(nu: int, z):
    z_arr = _positive(z)
    scalar = z_arr.ndim == 0
    z_arr = np.atleast_1d(z_arr)
    out = np.empty(z_arr.shape, dtype=complex)
    small = z_arr < SERIES_SWITCH
    if small.any():
        series = bessel_series(z_arr[small])
        if nu == 0:
            out[small] = series.j0 + 1j * series.y0
        else:
            out[small] = series.j1 + 1j * series.y1
    if (~small).any():
        out[~small] = _asymptotic(nu, z_arr[~small])
    return complex(out[0]) if scalar else out


def hankel1_0(z):
    """
    H_0^(1)(z) = J0(z) + iY0(z), vectorized

    Raises:
        NumericPreconditionError: z ≤ 0

    Example:
        >>> hankel1_0(1.0)
        (0.7651976865579666+0.08825696421567697j)
    """
    return _hankel(0, z)


def hankel1_1(z):
    """H_1^(1)(z) = J1(z) + iY1(z), vectorized; ~ −2i/(πz) as z → 0"""
    return _hankel(1, z)
