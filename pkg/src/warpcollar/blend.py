"""Quintic smoothstep polynomials shared by the profile bridge and warp schedules.

The quintic ``w(u) = 10u^3 - 15u^4 + 6u^5`` rises from 0 to 1 on [0, 1] with
``w' = w'' = 0`` at both ends, so ramps assembled from it join constant pieces
with two continuous derivatives.  ``smoothstep_i1`` and ``smoothstep_i2`` are
its running integrals, needed when a ramp is prescribed at the level of a
first or second derivative.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "smoothstep",
    "smoothstep_d1",
    "smoothstep_d2",
    "smoothstep_i1",
    "smoothstep_i2",
    "ss_f",
    "ss_d1_f",
    "ss_i1_f",
    "ss_i2_f",
]


def smoothstep(u):
    """C^2 step: 0 -> 1 on [0, 1], flat to second order at both ends."""
    u = np.clip(u, 0.0, 1.0)
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u))


def smoothstep_d1(u):
    """First derivative of :func:`smoothstep` (0 outside [0, 1])."""
    u = np.asarray(u, dtype=float)
    inside = (u > 0.0) & (u < 1.0)
    uc = np.clip(u, 0.0, 1.0)
    d = uc * uc * (30.0 + uc * (-60.0 + 30.0 * uc))
    return np.where(inside, d, 0.0)


def smoothstep_d2(u):
    """Second derivative of :func:`smoothstep` (0 outside [0, 1])."""
    u = np.asarray(u, dtype=float)
    inside = (u > 0.0) & (u < 1.0)
    uc = np.clip(u, 0.0, 1.0)
    d = uc * (60.0 + uc * (-180.0 + 120.0 * uc))
    return np.where(inside, d, 0.0)


def smoothstep_i1(u):
    """Running integral of :func:`smoothstep` from 0; extends linearly past u=1."""
    u = np.asarray(u, dtype=float)
    uc = np.clip(u, 0.0, 1.0)
    val = uc**4 * (2.5 + uc * (-3.0 + uc))
    # beyond u = 1 the integrand is 1, so the integral grows linearly
    return np.where(u > 1.0, 0.5 + (u - 1.0), val)


def smoothstep_i2(u):
    """Double running integral of :func:`smoothstep` from 0."""
    u = np.asarray(u, dtype=float)
    uc = np.clip(u, 0.0, 1.0)
    val = uc**5 * (0.5 + uc * (-0.5 + uc / 7.0))
    tail = (1.0 / 7.0) + 0.5 * (u - 1.0) + 0.5 * (u - 1.0) ** 2
    return np.where(u > 1.0, tail, val)


# Scalar (pure-float) twins of the above, for hot ODE right-hand sides.
# Kept textually parallel to the array versions; a unit test pins agreement.


def ss_f(u: float) -> float:
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u))


def ss_d1_f(u: float) -> float:
    if u <= 0.0 or u >= 1.0:
        return 0.0
    return u * u * (30.0 + u * (-60.0 + 30.0 * u))


def ss_i1_f(u: float) -> float:
    if u <= 0.0:
        return 0.0
    if u > 1.0:
        return 0.5 + (u - 1.0)
    return u**4 * (2.5 + u * (-3.0 + u))


def ss_i2_f(u: float) -> float:
    if u <= 0.0:
        return 0.0
    if u > 1.0:
        return (1.0 / 7.0) + 0.5 * (u - 1.0) + 0.5 * (u - 1.0) ** 2
    return u**5 * (0.5 + u * (-0.5 + u / 7.0))
