"""Slice-metric families g_t on the cross-section, and their extension in t.

Two variants are implemented:

* ``ScaledConstCurv`` -- g_t = a(t)^2 g' with g' a constant-curvature
  reference metric (curvature k in {-1, 0, +1} for chart-based work; the
  algebraic quantities accept any k).  The shape operator is (a'/a) Id, the
  intrinsic curvature k/a^2, and the Codazzi term vanishes identically.
* ``ConformalTorus2D`` -- g_t = e^{2 phi(t,x)} (dx1^2 + dx2^2) on a 2-torus,
  with phi given in closed form.  Its Codazzi term is generically nonzero,
  which is exactly why it exists: it exercises the mixed-plane curvature
  formula against the finite-difference oracle.

Both have isotropic shape operator A = alpha(t, x) Id, which downstream code
relies on (it makes the normal frame along reduced geodesics parallel).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .blend import smoothstep, smoothstep_d1, smoothstep_i1, ss_d1_f, ss_f, ss_i1_f

__all__ = [
    "ConstantWarp",
    "ScheduleWarp",
    "ExtensionSchedule",
    "InsufficientHeadroom",
    "build_extension_schedule",
    "ScaledConstCurv",
    "ConformalTorus2D",
    "PhiSpec",
    "SliceData",
    "slice_data",
]


class InsufficientHeadroom(ValueError):
    """target_C leaves no room for the slope constraints of the extension."""


@dataclass(frozen=True)
class ExtensionSchedule:
    """Constraint metadata of a warp schedule.

    ``initial_slope_floor`` is half the minimum eigenvalue of d/dt g_t at
    t = 0 taken against the frozen reference form, i.e. a0' * a0 for the
    scaled family; the schedule keeps a'(t) a(t) >= this floor on
    (-eps, 1/2].
    """

    t_freeze: float
    half_slope_horizon: float
    initial_slope_floor: float


@dataclass(frozen=True)
class ConstantWarp:
    """a(t) == value; static slice family (frozen for every t)."""

    value: float = 1.0

    def __post_init__(self) -> None:
        if not (self.value > 0.0):
            raise ValueError(f"warp value must be positive, got {self.value}")

    t_freeze = 0.0

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        if t.ndim == 0:
            return self.value, 0.0, 0.0
        z = np.zeros_like(t)
        return np.full_like(t, self.value), z, z

    def scalar_jet(self, t: float) -> tuple[float, float, float]:
        return self.value, 0.0, 0.0

    def to_record(self) -> dict:
        return {"kind": "constant", "value": self.value}


@dataclass(frozen=True)
class ScheduleWarp:
    """C^2 monotone warp: linear for t <= 0, shaped slope, frozen for t >= 1.

    ``branch`` is ``rise`` when the slope climbs from a0' to ``s_mid`` before
    decaying (enough headroom), or ``dip`` when it descends to a0'/2, holds,
    and decays over a window of width ``tau`` after t = 1/2.
    """

    a0: float
    a0p: float
    target: float
    branch: str
    s_mid: float
    tau: float

    t_freeze = 1.0

    def eval(self, t):
        """Return (a, a', a'') at t (scalar or array)."""
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        a = np.empty_like(t)
        ap = np.empty_like(t)
        app = np.empty_like(t)

        neg = t <= 0.0
        a[neg] = self.a0 + self.a0p * t[neg]
        ap[neg] = self.a0p
        app[neg] = 0.0

        if self.branch == "rise":
            seg1 = (t > 0.0) & (t <= 0.5)
            seg2 = (t > 0.5) & (t < 1.0)
            rest = t >= 1.0
            d = self.s_mid - self.a0p
            if np.any(seg1):
                u = 2.0 * t[seg1]
                a[seg1] = self.a0 + self.a0p * t[seg1] + d * 0.5 * smoothstep_i1(u)
                ap[seg1] = self.a0p + d * smoothstep(u)
                app[seg1] = 2.0 * d * smoothstep_d1(u)
            a_half = self.a0 + 0.5 * self.a0p + 0.25 * d
            if np.any(seg2):
                u = 2.0 * t[seg2] - 1.0
                a[seg2] = a_half + self.s_mid * (t[seg2] - 0.5) - self.s_mid * 0.5 * smoothstep_i1(u)
                ap[seg2] = self.s_mid * (1.0 - smoothstep(u))
                app[seg2] = -2.0 * self.s_mid * smoothstep_d1(u)
            if np.any(rest):
                a[rest] = a_half + 0.25 * self.s_mid
                ap[rest] = 0.0
                app[rest] = 0.0
        else:  # dip
            tau = self.tau
            lo = self.a0p / 2.0
            seg1 = (t > 0.0) & (t <= tau)
            seg2 = (t > tau) & (t <= 0.5)
            seg3 = (t > 0.5) & (t < 0.5 + tau)
            rest = t >= 0.5 + tau
            if np.any(seg1):
                u = t[seg1] / tau
                a[seg1] = self.a0 + self.a0p * t[seg1] - lo * tau * smoothstep_i1(u)
                ap[seg1] = self.a0p - lo * smoothstep(u)
                app[seg1] = -(lo / tau) * smoothstep_d1(u)
            a_tau = self.a0 + self.a0p * tau - lo * tau * 0.5
            if np.any(seg2):
                a[seg2] = a_tau + lo * (t[seg2] - tau)
                ap[seg2] = lo
                app[seg2] = 0.0
            a_half = a_tau + lo * (0.5 - tau)
            if np.any(seg3):
                u = (t[seg3] - 0.5) / tau
                a[seg3] = a_half + lo * (t[seg3] - 0.5) - lo * tau * smoothstep_i1(u)
                ap[seg3] = lo * (1.0 - smoothstep(u))
                app[seg3] = -(lo / tau) * smoothstep_d1(u)
            if np.any(rest):
                a[rest] = a_half + lo * tau * 0.5
                ap[rest] = 0.0
                app[rest] = 0.0

        if scalar:
            return float(a[0]), float(ap[0]), float(app[0])
        return a, ap, app

    def scalar_jet(self, t: float) -> tuple[float, float, float]:
        """Pure-float (a, a', a''); hot path for ODE right-hand sides."""
        if t <= 0.0:
            return self.a0 + self.a0p * t, self.a0p, 0.0
        if self.branch == "rise":
            d = self.s_mid - self.a0p
            if t <= 0.5:
                u = 2.0 * t
                return (
                    self.a0 + self.a0p * t + d * 0.5 * ss_i1_f(u),
                    self.a0p + d * ss_f(u),
                    2.0 * d * ss_d1_f(u),
                )
            a_half = self.a0 + 0.5 * self.a0p + 0.25 * d
            if t < 1.0:
                u = 2.0 * t - 1.0
                return (
                    a_half + self.s_mid * (t - 0.5) - self.s_mid * 0.5 * ss_i1_f(u),
                    self.s_mid * (1.0 - ss_f(u)),
                    -2.0 * self.s_mid * ss_d1_f(u),
                )
            return a_half + 0.25 * self.s_mid, 0.0, 0.0
        tau = self.tau
        lo = self.a0p / 2.0
        if t <= tau:
            u = t / tau
            return (
                self.a0 + self.a0p * t - lo * tau * ss_i1_f(u),
                self.a0p - lo * ss_f(u),
                -(lo / tau) * ss_d1_f(u),
            )
        a_tau = self.a0 + self.a0p * tau - lo * tau * 0.5
        if t <= 0.5:
            return a_tau + lo * (t - tau), lo, 0.0
        a_half = a_tau + lo * (0.5 - tau)
        if t < 0.5 + tau:
            u = (t - 0.5) / tau
            return (
                a_half + lo * (t - 0.5) - lo * tau * ss_i1_f(u),
                lo * (1.0 - ss_f(u)),
                -(lo / tau) * ss_d1_f(u),
            )
        return a_half + lo * tau * 0.5, 0.0, 0.0

    def metadata(self) -> ExtensionSchedule:
        return ExtensionSchedule(
            t_freeze=1.0,
            half_slope_horizon=0.5,
            initial_slope_floor=self.a0p * self.a0,
        )

    def to_record(self) -> dict:
        return {
            "kind": "schedule",
            "a0": self.a0,
            "a0p": self.a0p,
            "target": self.target,
            "branch": self.branch,
            "s_mid": self.s_mid,
            "tau": self.tau,
        }


def warp_from_record(rec: dict):
    if rec["kind"] == "constant":
        return ConstantWarp(rec["value"])
    return ScheduleWarp(rec["a0"], rec["a0p"], rec["target"], rec["branch"], rec["s_mid"], rec["tau"])


def build_extension_schedule(a0: float, a0p: float, target_C: float) -> ScheduleWarp:
    """Monotone C^2 warp with a(0)=a0, a'(0)=a0p, a' >= a0p/2 on (-eps, 1/2],
    a' >= 0 everywhere, and a = sqrt(target_C), a' = 0 for t >= 1.

    Rejects targets without headroom: target_C must be at least
    a0^2 + a0p/4 and sqrt(target_C) must exceed a0 + a0p/4 (the integral of
    the slope floor makes anything less unreachable).
    """
    if not (a0 > 0.0):
        raise ValueError(f"a0 must be positive, got {a0}")
    if not (a0p > 0.0):
        raise ValueError(f"a0p must be positive, got {a0p}")
    if target_C < a0 * a0 + a0p / 4.0:
        raise InsufficientHeadroom(
            f"target_C={target_C:.6g} violates target_C >= a0^2 + a0p/4 = "
            f"{a0 * a0 + a0p / 4.0:.6g}"
        )
    delta = math.sqrt(target_C) - a0
    if delta <= a0p / 4.0 * (1.0 + 1e-9):
        raise InsufficientHeadroom(
            f"target_C={target_C:.6g} violates sqrt(target_C) > a0 + a0p/4 = "
            f"{a0 + a0p / 4.0:.6g} (slope floor makes the target unreachable)"
        )
    if delta >= a0p / 2.0:
        s_mid = 2.0 * delta - 0.5 * a0p
        return ScheduleWarp(a0, a0p, target_C, "rise", s_mid, 0.0)
    tau = (4.0 * delta / a0p - 1.0) / 2.0
    return ScheduleWarp(a0, a0p, target_C, "dip", 0.0, tau)


# --- phi specification for the conformal torus family ----------------------


@dataclass(frozen=True)
class PhiSpec:
    """phi(t, x1, x2) = (c0 + c1 t + c2 sin(om_t t + ph_t))
                        * sin(om1 x1 + ph1) * cos(om2 x2 + ph2).

    Closed-form jet to order 2 (t, x1, x2, tt, t1, t2, 11, 22); periodic in x
    for integer frequencies.
    """

    c0: float = 0.0
    c1: float = 0.1
    c2: float = 0.0
    om_t: float = 1.0
    ph_t: float = 0.0
    om1: float = 1.0
    ph1: float = 0.0
    om2: float = 0.0
    ph2: float = 0.0

    def _tpart(self, t):
        return self.c0 + self.c1 * t + self.c2 * np.sin(self.om_t * t + self.ph_t)

    def _tpart_d1(self, t):
        return self.c1 + self.c2 * self.om_t * np.cos(self.om_t * t + self.ph_t)

    def _tpart_d2(self, t):
        return -self.c2 * self.om_t**2 * np.sin(self.om_t * t + self.ph_t)

    def jet(self, t, x1, x2) -> dict:
        t = np.asarray(t, dtype=float)
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        s1 = np.sin(self.om1 * x1 + self.ph1)
        c1x = np.cos(self.om1 * x1 + self.ph1)
        c2x = np.cos(self.om2 * x2 + self.ph2)
        s2 = np.sin(self.om2 * x2 + self.ph2)
        g, g1, g2 = self._tpart(t), self._tpart_d1(t), self._tpart_d2(t)
        return {
            "phi": g * s1 * c2x,
            "t": g1 * s1 * c2x,
            "tt": g2 * s1 * c2x,
            "x1": g * self.om1 * c1x * c2x,
            "x2": -g * self.om2 * s1 * s2,
            "t1": g1 * self.om1 * c1x * c2x,
            "t2": -g1 * self.om2 * s1 * s2,
            "11": -g * self.om1**2 * s1 * c2x,
            "22": -g * self.om2**2 * s1 * c2x,
        }

    def to_record(self) -> dict:
        return {
            "c0": self.c0, "c1": self.c1, "c2": self.c2,
            "om_t": self.om_t, "ph_t": self.ph_t,
            "om1": self.om1, "ph1": self.ph1,
            "om2": self.om2, "ph2": self.ph2,
        }


# --- slice families ---------------------------------------------------------


@dataclass(frozen=True)
class ScaledConstCurv:
    """g_t = a(t)^2 g' with g' of constant curvature k; dim 1 or 2."""

    k: float
    dim: int
    warp: ConstantWarp | ScheduleWarp

    def __post_init__(self) -> None:
        if self.dim not in (1, 2):
            raise ValueError(f"slice dimension must be 1 or 2, got {self.dim}")
        if self.dim == 1 and self.k != 0.0:
            raise ValueError("1-dimensional slices are flat; use k = 0")

    @property
    def t_freeze(self) -> float:
        return self.warp.t_freeze

    def frozen_scale(self) -> float:
        """a(t)^2 for t >= t_freeze (the C of g_t = C g')."""
        a, _, _ = self.warp.eval(max(self.t_freeze, 1.0))
        return float(a) ** 2

    def far_curvature(self) -> float:
        """Intrinsic curvature of the frozen slice (0 for dim 1)."""
        if self.dim == 1:
            return 0.0
        return self.k / self.frozen_scale()

    def ref_metric_diag(self, x1):
        """Diagonal of the reference metric g' in its chart.

        Charts exist for k in {-1, 0, +1}: flat torus, unit sphere
        (dtheta^2 + sin^2 theta dphi^2), hyperbolic (sinh).  Needed only by
        the coordinate-based oracle and geodesic bookkeeping.
        """
        x1 = np.asarray(x1, dtype=float)
        if self.dim == 1:
            return (np.ones_like(x1),)
        if self.k == 0.0:
            return (np.ones_like(x1), np.ones_like(x1))
        if self.k == 1.0:
            return (np.ones_like(x1), np.sin(x1) ** 2)
        if self.k == -1.0:
            return (np.ones_like(x1), np.sinh(x1) ** 2)
        raise ValueError(
            f"no reference chart for k={self.k}; charts exist for k in {{-1, 0, 1}}"
        )

    def to_record(self) -> dict:
        return {"variant": "scaled_const_curv", "k": self.k, "dim": self.dim,
                "warp": self.warp.to_record()}


@dataclass(frozen=True)
class ConformalTorus2D:
    """g_t = e^{2 phi(t,x)} (dx1^2 + dx2^2) on the 2-torus."""

    phi: PhiSpec

    dim = 2
    k = None

    def to_record(self) -> dict:
        return {"variant": "conformal_torus_2d", "phi": self.phi.to_record()}


def slice_family_from_record(rec: dict):
    if rec["variant"] == "scaled_const_curv":
        return ScaledConstCurv(rec["k"], rec["dim"], warp_from_record(rec["warp"]))
    return ConformalTorus2D(PhiSpec(**rec["phi"]))


@dataclass(frozen=True)
class SliceData:
    """Pointwise slice quantities entering the curvature formulas.

    The shape operator is ``alpha * Id``; ``alpha_prime`` is its t-derivative.
    ``codazzi_grad`` holds the orthonormal-frame components (g1, g2) such that
    for g_t-orthonormal X perp Y the Codazzi scalar is
    F(X, Y) = -(X . codazzi_grad); the sign follows the curvature convention
    R(U,V)W = nabla_U nabla_V W - nabla_V nabla_U W - nabla_[U,V] W with
    F = <R(X,Y)Y, T>, under which the unit sphere has curvature +1.
    """

    alpha: np.ndarray | float
    alpha_prime: np.ndarray | float
    k_int: np.ndarray | float | None
    codazzi_grad: tuple
    dim: int

    def shape_operator(self):
        """A as a dim x dim matrix (scalar base point only)."""
        return float(self.alpha) * np.eye(self.dim)

    def codazzi(self, X, Y) -> float:
        """F(X, Y) for orthonormal-frame component vectors X, Y."""
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        g = np.asarray(self.codazzi_grad, dtype=float)
        return float(-(X @ g) * (Y @ Y) + (Y @ g) * (X @ Y))


def slice_data(family, t, x=None) -> SliceData:
    """Shape operator scalar, its t-derivative, intrinsic curvature and the
    Codazzi gradient of ``family`` at time t (and slice point x where the
    family is position dependent)."""
    if isinstance(family, ScaledConstCurv):
        a, ap, app = family.warp.eval(t)
        alpha = ap / a
        alpha_prime = (app * a - ap * ap) / (a * a)
        k_int = None if family.dim == 1 else family.k / (a * a)
        zero = np.zeros_like(np.asarray(t, dtype=float))
        grad = (zero,) if family.dim == 1 else (zero, zero)
        return SliceData(alpha, alpha_prime, k_int, grad, family.dim)
    if isinstance(family, ConformalTorus2D):
        if x is None:
            raise ValueError("ConformalTorus2D slice data needs a slice point x")
        x1, x2 = x
        j = family.phi.jet(t, x1, x2)
        emph = np.exp(-j["phi"])
        k_int = -(emph**2) * (j["11"] + j["22"])
        grad = (emph * j["t1"], emph * j["t2"])
        return SliceData(j["t"], j["tt"], k_int, grad, 2)
    raise TypeError(f"unknown slice family {type(family).__name__}")
