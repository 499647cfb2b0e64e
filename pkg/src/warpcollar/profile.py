"""Warping profile f(t): flat part, convex C^2 bridge, and closed-form far field.

The profile equals 1 for t <= 0, follows a convex bridge on [0, t0], and
switches to the closed-form far-field warp on [t0, oo).  The far field is one
of ``(C/kappa)cosh(kappa t)``, ``exp(kappa t)``, ``(C/kappa)sinh(kappa t)``
depending on the sign of the asymptotic slice curvature; all three drive the
ambient sectional curvature to ``-kappa^2``.

The bridge is assembled at the level of f'': a compactly supported C^1 bump
(the mollified hinge between the constant 1 and the tangent line of the far
field at t0) plus a terminal C^1 ramp that brings f'' up to the far-field
value at t0.  This keeps f'' >= 0 everywhere with exact C^2 joins at both
ends; near t = 0 the profile is exactly 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .blend import (
    smoothstep,
    smoothstep_d1,
    smoothstep_i1,
    smoothstep_i2,
    ss_d1_f,
    ss_f,
    ss_i1_f,
    ss_i2_f,
)

__all__ = [
    "CASE_NEGATIVE",
    "CASE_FLAT",
    "CASE_NONNEGATIVE",
    "CurvatureCase",
    "FarField",
    "FeasibilityResult",
    "Bridge",
    "ProfileFunction",
    "UnitProfile",
    "InfeasibleBridge",
    "select_far_field",
    "check_bridge_feasibility",
    "build_profile",
    "eval_profile",
    "scan_kappa_min",
]

CASE_NEGATIVE = "negative"
CASE_FLAT = "flat"
CASE_NONNEGATIVE = "nonnegative"

_CASES = (CASE_NEGATIVE, CASE_FLAT, CASE_NONNEGATIVE)

# The far-field value at the bridge endpoint must clear 1 by this gap for the
# convex bridge (which starts at height 1 with slope 0) to have room to land.
_RAISE_GAP = 0.02


class InfeasibleBridge(ValueError):
    """No convex C^2 bridge exists for the requested (case, kappa, t0)."""


@dataclass(frozen=True)
class CurvatureCase:
    """Asymptotic slice-curvature case selecting the far-field warp.

    ``tag`` is one of ``negative`` (inf K^int = -C^2 < 0), ``flat``
    (K^int = 0) or ``nonnegative`` (K^int >= 0 with sup = C^2 > 0).
    """

    tag: str
    C: float = 1.0

    def __post_init__(self) -> None:
        if self.tag not in _CASES:
            raise ValueError(f"unknown curvature case tag {self.tag!r}")
        if not (self.C > 0.0) or not math.isfinite(self.C):
            raise ValueError(f"curvature scale C must be positive, got {self.C}")


@dataclass(frozen=True)
class FarField:
    """Closed-form far-field warp f_cc with exact derivatives."""

    case: CurvatureCase
    kappa: float

    def value(self, t):
        k, C = self.kappa, self.case.C
        tag = self.case.tag
        if tag == CASE_NEGATIVE:
            return (C / k) * np.cosh(k * np.asarray(t, dtype=float))
        if tag == CASE_FLAT:
            return np.exp(k * np.asarray(t, dtype=float))
        return (C / k) * np.sinh(k * np.asarray(t, dtype=float))

    def d1(self, t):
        k, C = self.kappa, self.case.C
        tag = self.case.tag
        if tag == CASE_NEGATIVE:
            return C * np.sinh(k * np.asarray(t, dtype=float))
        if tag == CASE_FLAT:
            return k * np.exp(k * np.asarray(t, dtype=float))
        return C * np.cosh(k * np.asarray(t, dtype=float))

    def d2(self, t):
        k, C = self.kappa, self.case.C
        tag = self.case.tag
        if tag == CASE_NEGATIVE:
            return C * k * np.cosh(k * np.asarray(t, dtype=float))
        if tag == CASE_FLAT:
            return k * k * np.exp(k * np.asarray(t, dtype=float))
        return C * k * np.sinh(k * np.asarray(t, dtype=float))

    def solve_value(self, target: float) -> float:
        """Smallest t > 0 with f_cc(t) = target (target above the t=0 value)."""
        k, C = self.kappa, self.case.C
        tag = self.case.tag
        if tag == CASE_NEGATIVE:
            arg = target * k / C
            if arg < 1.0:
                raise ValueError(f"far field never reaches {target}")
            return math.acosh(arg) / k
        if tag == CASE_FLAT:
            if target <= 0.0:
                raise ValueError("target must be positive")
            return math.log(target) / k
        return math.asinh(target * k / C) / k


def select_far_field(case: CurvatureCase, kappa: float) -> FarField:
    """Far-field warp handle for the given case; rejects kappa <= 0, C <= 0."""
    if not (kappa > 0.0) or not math.isfinite(kappa):
        raise ValueError(f"kappa must be positive, got {kappa}")
    # CurvatureCase validates C > 0 on construction; re-validate defensively
    if not (case.C > 0.0):
        raise ValueError(f"curvature scale C must be positive, got {case.C}")
    return FarField(case, float(kappa))


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    slack: float


def check_bridge_feasibility(case: CurvatureCase, kappa: float, t0: float) -> FeasibilityResult:
    """Tangent-line condition at t0: the point (0, 1) must sit strictly above
    the tangent to the far-field graph, i.e. f_cc(t0) - f_cc'(t0) t0 < 1."""
    if not (t0 > 0.0):
        raise ValueError(f"t0 must be positive, got {t0}")
    ff = select_far_field(case, kappa)
    slack = 1.0 - (float(ff.value(t0)) - float(ff.d1(t0)) * t0)
    return FeasibilityResult(feasible=slack > 0.0, slack=slack)


@dataclass(frozen=True)
class Bridge:
    """Knots and coefficients of the convex C^2 bridge on [0, t0].

    ``f'`` rises from 0 to ``m_b`` across a smoothstep bump centred at
    ``t_b`` with half-width ``rho_b``, stays at ``m_b`` along a straight
    plateau, then gains the far-field curvature through a ramp of width
    ``rho3`` ending at t0 where f'' = ``f2`` matches the far field.
    """

    t_b: float
    rho_b: float
    m_b: float
    rho3: float
    f2: float
    t0: float

    @property
    def t_lo(self) -> float:
        return self.t_b - self.rho_b

    @property
    def t_hi(self) -> float:
        return self.t_b + self.rho_b

    @property
    def t_ramp(self) -> float:
        return self.t0 - self.rho3


@dataclass(frozen=True)
class ProfileFunction:
    """Piecewise warping profile: flat / bridge / far field."""

    case: CurvatureCase
    kappa: float
    t0: float
    t0_requested: float
    bridge: Bridge

    @property
    def far(self) -> FarField:
        return FarField(self.case, self.kappa)

    def eval(self, t):
        """Return (f, f', f'') at t (scalar or array)."""
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        br = self.bridge
        f = np.empty_like(t)
        fp = np.empty_like(t)
        fpp = np.empty_like(t)

        flat = t <= br.t_lo
        bump = (t > br.t_lo) & (t < br.t_hi)
        plat = (t >= br.t_hi) & (t < br.t_ramp)
        ramp = (t >= br.t_ramp) & (t < br.t0)
        far = t >= br.t0

        f[flat] = 1.0
        fp[flat] = 0.0
        fpp[flat] = 0.0

        if np.any(bump):
            u = (t[bump] - br.t_lo) / (2.0 * br.rho_b)
            f[bump] = 1.0 + br.m_b * 2.0 * br.rho_b * smoothstep_i1(u)
            fp[bump] = br.m_b * smoothstep(u)
            fpp[bump] = br.m_b * smoothstep_d1(u) / (2.0 * br.rho_b)

        if np.any(plat):
            f[plat] = 1.0 + br.m_b * br.rho_b + br.m_b * (t[plat] - br.t_hi)
            fp[plat] = br.m_b
            fpp[plat] = 0.0

        if np.any(ramp):
            v = (t[ramp] - br.t_ramp) / br.rho3
            f_r0 = 1.0 + br.m_b * br.rho_b + br.m_b * (br.t_ramp - br.t_hi)
            f[ramp] = f_r0 + br.m_b * (t[ramp] - br.t_ramp) + br.f2 * br.rho3**2 * smoothstep_i2(v)
            fp[ramp] = br.m_b + br.f2 * br.rho3 * smoothstep_i1(v)
            fpp[ramp] = br.f2 * smoothstep(v)

        if np.any(far):
            ff = self.far
            f[far] = ff.value(t[far])
            fp[far] = ff.d1(t[far])
            fpp[far] = ff.d2(t[far])

        if scalar:
            return float(f[0]), float(fp[0]), float(fpp[0])
        return f, fp, fpp

    def scalar_jet(self, t: float) -> tuple[float, float, float]:
        """Pure-float (f, f', f''); hot path for ODE right-hand sides."""
        br = self.bridge
        if t <= br.t_lo:
            return 1.0, 0.0, 0.0
        if t >= br.t0:
            k, C = self.kappa, self.case.C
            tag = self.case.tag
            if tag == CASE_NEGATIVE:
                return (C / k) * math.cosh(k * t), C * math.sinh(k * t), C * k * math.cosh(k * t)
            if tag == CASE_FLAT:
                e = math.exp(k * t)
                return e, k * e, k * k * e
            return (C / k) * math.sinh(k * t), C * math.cosh(k * t), C * k * math.sinh(k * t)
        if t < br.t_hi:
            u = (t - br.t_lo) / (2.0 * br.rho_b)
            return (
                1.0 + br.m_b * 2.0 * br.rho_b * ss_i1_f(u),
                br.m_b * ss_f(u),
                br.m_b * ss_d1_f(u) / (2.0 * br.rho_b),
            )
        if t < br.t_ramp:
            return 1.0 + br.m_b * br.rho_b + br.m_b * (t - br.t_hi), br.m_b, 0.0
        v = (t - br.t_ramp) / br.rho3
        f_r0 = 1.0 + br.m_b * br.rho_b + br.m_b * (br.t_ramp - br.t_hi)
        return (
            f_r0 + br.m_b * (t - br.t_ramp) + br.f2 * br.rho3**2 * ss_i2_f(v),
            br.m_b + br.f2 * br.rho3 * ss_i1_f(v),
            br.f2 * ss_f(v),
        )

    def log_slope(self, t):
        """f'/f at t."""
        f, fp, _ = self.eval(t)
        return fp / f

    def convexity_min(self, lo: float = -1.0, hi: float = 3.0, n: int = 10_000) -> float:
        """Minimum of f'' over an n-point grid on [lo, hi]."""
        _, _, fpp = self.eval(np.linspace(lo, hi, n))
        return float(np.min(fpp))

    def to_record(self) -> dict:
        return {
            "case": self.case.tag,
            "C": self.case.C,
            "kappa": self.kappa,
            "t0": self.t0,
            "t0_requested": self.t0_requested,
            "bridge": {
                "t_b": self.bridge.t_b,
                "rho_b": self.bridge.rho_b,
                "m_b": self.bridge.m_b,
                "rho3": self.bridge.rho3,
                "f2": self.bridge.f2,
                "t0": self.bridge.t0,
            },
        }

    @staticmethod
    def from_record(rec: dict) -> "ProfileFunction":
        br = rec["bridge"]
        return ProfileFunction(
            case=CurvatureCase(rec["case"], rec["C"]),
            kappa=rec["kappa"],
            t0=rec["t0"],
            t0_requested=rec["t0_requested"],
            bridge=Bridge(br["t_b"], br["rho_b"], br["m_b"], br["rho3"], br["f2"], br["t0"]),
        )


class UnitProfile:
    """Trivial profile f == 1 (the unwarped extension h = dt^2 + g_t)."""

    kappa = 0.0
    t0 = math.inf

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        if t.ndim == 0:
            return 1.0, 0.0, 0.0
        z = np.zeros_like(t)
        return np.ones_like(t), z, z

    def scalar_jet(self, t: float) -> tuple[float, float, float]:
        return 1.0, 0.0, 0.0

    def log_slope(self, t):
        t = np.asarray(t, dtype=float)
        return 0.0 if t.ndim == 0 else np.zeros_like(t)


def build_profile(case: CurvatureCase, kappa: float, t0: float | None = None) -> ProfileFunction:
    """Construct the full profile; raises :class:`InfeasibleBridge` if the
    tangent condition fails at the requested t0 (default 1/sqrt(kappa)).

    If the far field has not yet reached height 1 + gap at the requested t0,
    the bridge endpoint is raised to the first t where it has; the far-field
    invariant f = f_cc on [t0, oo) then holds for the stored (raised) t0.
    """
    ff = select_far_field(case, kappa)
    t0_req = 1.0 / math.sqrt(kappa) if t0 is None else float(t0)
    if not (t0_req > 0.0):
        raise ValueError(f"t0 must be positive, got {t0_req}")

    feas = check_bridge_feasibility(case, kappa, t0_req)
    if not feas.feasible:
        raise InfeasibleBridge(
            f"tangent condition fails at t0={t0_req:.6g} (slack {feas.slack:.6g}); "
            f"kappa={kappa:.6g} is too small for case {case.tag!r} "
            "(run scan-kappa for the feasibility threshold)"
        )

    t0_eff = t0_req
    if float(ff.value(t0_req)) < 1.0 + _RAISE_GAP:
        t0_eff = ff.solve_value(1.0 + _RAISE_GAP)
        if t0_eff <= t0_req:  # numerical guard; solve_value is monotone
            t0_eff = t0_req
        feas_eff = check_bridge_feasibility(case, kappa, t0_eff)
        if not feas_eff.feasible:
            raise InfeasibleBridge(
                f"tangent condition fails at raised t0={t0_eff:.6g} "
                f"(slack {feas_eff.slack:.6g})"
            )

    T = t0_eff
    F0 = float(ff.value(T))
    F1 = float(ff.d1(T))
    F2 = float(ff.d2(T))
    if F1 <= 0.0:
        raise InfeasibleBridge(f"far field slope {F1} not positive at t0={T}")

    rho_b = T / 8.0
    rho3 = min(T / 8.0, F1 / (4.0 * max(F2, 1e-300)))
    for _ in range(200):
        m_b = F1 - 0.5 * F2 * rho3
        d_num = F0 - 1.0 - F2 * rho3**2 / 7.0
        if m_b > 0.0 and d_num > 0.0:
            D = d_num / m_b
            if rho_b + rho3 <= D <= T - rho_b:
                bridge = Bridge(t_b=T - D, rho_b=rho_b, m_b=m_b, rho3=rho3, f2=F2, t0=T)
                return ProfileFunction(
                    case=case, kappa=float(kappa), t0=T, t0_requested=t0_req, bridge=bridge
                )
        rho_b *= 0.5
        rho3 *= 0.5
    raise InfeasibleBridge(
        f"bridge width selection failed for case {case.tag!r}, kappa={kappa:.6g}, "
        f"t0={T:.6g} (F0={F0:.6g}, F1={F1:.6g})"
    )


def eval_profile(p: ProfileFunction, t):
    """Functional alias for ``p.eval(t)``; returns (f, f', f'')."""
    return p.eval(t)


def profile_constructible(case: CurvatureCase, kappa: float, t0: float | None = None) -> bool:
    try:
        build_profile(case, kappa, t0)
        return True
    except (InfeasibleBridge, ValueError):
        return False


def scan_kappa_min(
    case: CurvatureCase,
    kappa_lo: float = 0.05,
    kappa_hi: float = 64.0,
    tol: float = 1e-9,
) -> dict:
    """Bisect the feasibility threshold in kappa at t0 = 1/sqrt(kappa).

    Returns a dict with ``kappa_min`` (smallest kappa in [lo, hi] where the
    tangent condition holds; the scan floor when it holds everywhere),
    ``transition`` (True when the threshold is interior to the range), and
    ``kappa_min_constructible`` for the full bridge construction.
    """

    def tangent_ok(k: float) -> bool:
        return check_bridge_feasibility(case, k, 1.0 / math.sqrt(k)).feasible

    def bisect(pred, lo: float, hi: float) -> float:
        # pred(hi) is True, pred(lo) is False: find the switch point
        while hi - lo > tol * max(1.0, hi):
            mid = 0.5 * (lo + hi)
            if pred(mid):
                hi = mid
            else:
                lo = mid
        return hi

    out: dict = {}
    if tangent_ok(kappa_lo):
        out["kappa_min"] = kappa_lo
        out["transition"] = False
    elif not tangent_ok(kappa_hi):
        raise ValueError(f"tangent condition fails across the whole range for {case.tag!r}")
    else:
        out["kappa_min"] = bisect(tangent_ok, kappa_lo, kappa_hi)
        out["transition"] = True

    if profile_constructible(case, kappa_lo):
        out["kappa_min_constructible"] = kappa_lo
        out["constructible_transition"] = False
    elif not profile_constructible(case, kappa_hi):
        raise ValueError(f"profile not constructible across the whole range for {case.tag!r}")
    else:
        out["kappa_min_constructible"] = bisect(
            lambda k: profile_constructible(case, k), kappa_lo, kappa_hi
        )
        out["constructible_transition"] = True
    return out
