"""Geodesics through the collar, Jacobi fields along them, and the
hyperbolicity certificates built on both.

Geodesics of dt^2 + F(t)^2 g' (F = f a, the scaled family) reduce to

    t'' = L^2 F'/F^3,    |x'|_{g'} = L / F^2,

with the Clairaut constant L = F^2 |x'|_{g'} conserved and unit speed
t'^2 + L^2/F^2 = 1.  Since F is nondecreasing, t(s) is convex: a geodesic
entering the collar never returns on its own.  Re-entry into the compact
side is therefore *emulated*: a bounce at t = 0 stands in for a passage
through the inner manifold, and a velocity mirror at a prescribed depth
budget stands in for the far side turning the geodesic around.  Both leave
(J, J') untouched; the curvature seen by the Jacobi flow is even in t' for
the scaled family, so the flow stays consistent across either reflection.

Jacobi data evolves in the parallel orthonormal normal frame (e_1 in the
surface swept by the reduced geodesic, e_2 the orthogonal slice direction;
parallel because the implemented slice families have isotropic shape
operator).  In that frame J'' + R(s) J = 0 with R assembled from the
sectional-curvature formulas by polarization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curvature import CollarMetric
from .odes import Event, EventSpec, StepRejected, Trajectory, integrate, rk45_step
from .report import Check, CheckRow, VerificationReport, rng_from_seed, DEFAULT_SEED
from .slices import ConformalTorus2D, ScaledConstCurv

__all__ = [
    "GeodesicState",
    "JacobiFrameState",
    "JacobiTrajectory",
    "VerifierConfig",
    "RiccatiResult",
    "entering_state",
    "geodesic_step",
    "integrate_geodesic",
    "integrate_coordinate_geodesic",
    "conformal_geodesic_accel",
    "normal_plane_curvature",
    "curvature_operator_along",
    "jacobi_evolve",
    "riccati_evolve",
    "certify_no_conjugate_points",
    "certify_unbounded_growth",
]


@dataclass(frozen=True)
class GeodesicState:
    """Unit-speed geodesic state in collar coordinates.

    ``slice_pos`` is the accumulated g'-arclength of the slice projection
    (the projection runs along a fixed g'-geodesic); ``L`` is the Clairaut
    constant; ``arc`` the accumulated arclength.
    """

    t: float
    tdot: float
    slice_pos: float = 0.0
    L: float = 0.0
    arc: float = 0.0

    def speed_residual(self, m: CollarMetric) -> float:
        F = float(m.total_warp(self.t)[0])
        return abs(self.tdot**2 + (self.L / F) ** 2 - 1.0)


@dataclass(frozen=True)
class VerifierConfig:
    """Thresholds of the dynamic certificates.

    ``Q_M`` is the entry-slope threshold of the inner manifold (a free,
    user-supplied constant here); ``epsilon`` the slack in the recovery
    bound; ``min_transit`` the guaranteed arclength spent beyond
    t = 1/sqrt(kappa); ``entry_cos_floor`` caps entry grazing, standing in
    for the short-transit bound a strictly convex boundary would provide.
    """

    Q_M: float = 2.0
    epsilon: float = 0.1
    min_transit: float = 1.0
    entry_cos_floor: float = 0.6

    def __post_init__(self) -> None:
        if not (self.Q_M > 0.0):
            raise ValueError("Q_M must be positive")
        if not (0.0 < self.epsilon < 0.5):
            raise ValueError("epsilon must lie in (0, 1/2)")
        if not (0.0 < self.entry_cos_floor < 1.0):
            raise ValueError("entry_cos_floor must lie in (0, 1)")

    def mu_target(self, kappa: float) -> float:
        return (1.0 - self.epsilon) * kappa / math.sqrt(2.0)


def entering_state(m: CollarMetric, tdot0: float, slice_pos: float = 0.0) -> GeodesicState:
    """State at the boundary t = 0 heading into the collar with t' = tdot0."""
    if not (0.0 < tdot0 <= 1.0):
        raise ValueError("entering states need tdot0 in (0, 1]")
    F0 = float(m.total_warp(0.0)[0])
    L = F0 * math.sqrt(max(0.0, 1.0 - tdot0 * tdot0))
    return GeodesicState(t=0.0, tdot=tdot0, slice_pos=slice_pos, L=L, arc=0.0)


def _geodesic_rhs(m: CollarMetric, L: float):
    prof = m.profile.scalar_jet
    warp = m.slice_family.warp.scalar_jet
    L2 = L * L

    def rhs(s, y):
        f, fp, _ = prof(y[0])
        a, ap, _ = warp(y[0])
        F = f * a
        Fp = fp * a + f * ap
        F2 = F * F
        return np.array([y[1], L2 * Fp / (F2 * F), L / F2])

    return rhs


def geodesic_step(
    m: CollarMetric,
    state: GeodesicState,
    h: float,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> GeodesicState:
    """One embedded Runge-Kutta step of the reduced geodesic equations.

    Raises :class:`StepRejected` (with a suggested step) when the local
    error estimate exceeds the tolerance; re-asserts the unit-speed
    invariant on acceptance.
    """
    if not isinstance(m.slice_family, ScaledConstCurv):
        raise TypeError("reduced geodesics apply to the scaled family only")
    rhs = _geodesic_rhs(m, state.L)
    y = np.array([state.t, state.tdot, state.slice_pos])
    y5, err_vec, _, _ = rk45_step(rhs, 0.0, y, h)
    scale = atol + rtol * np.maximum(np.abs(y), np.abs(y5))
    err = float(np.max(np.abs(err_vec) / scale))
    if err > 1.0:
        suggested = h * max(0.2, 0.9 * err**-0.2)
        raise StepRejected(f"step error {err:.3g} over tolerance", suggested)
    new = GeodesicState(float(y5[0]), float(y5[1]), float(y5[2]), state.L, state.arc + h)
    res = new.speed_residual(m)
    if res > 1e-6:
        raise RuntimeError(f"unit-speed invariant broken: residual {res:.3g}")
    return new


def integrate_geodesic(
    m: CollarMetric,
    state: GeodesicState,
    length: float,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    bounce_at_zero: bool = False,
    max_bounces: int = 8,
) -> Trajectory:
    """Reduced geodesic trajectory over the given arclength.

    With ``bounce_at_zero`` the trajectory reflects (t' -> -t') whenever it
    reaches t = 0 heading down, emulating re-entry into the inner manifold.
    """
    if not isinstance(m.slice_family, ScaledConstCurv):
        raise TypeError("reduced geodesics apply to the scaled family only")
    rhs = _geodesic_rhs(m, state.L)
    y0 = np.array([state.t, state.tdot, state.slice_pos])
    s0 = state.arc
    s_end = s0 + length
    pieces: list[Trajectory] = []
    events: list[Event] = []
    for _ in range(max_bounces + 1):
        evs = ()
        if bounce_at_zero:
            evs = (EventSpec("bounce", lambda s, y: y[0], terminal=True, direction=-1),)
        traj = integrate(rhs, s0, y0, s_end, rtol=rtol, atol=atol, events=evs)
        pieces.append(traj)
        events.extend(traj.events)
        if traj.status.startswith("terminated:bounce"):
            y0 = traj.end_state.copy()
            y0[1] = -y0[1]
            s0 = float(traj.s[-1])
            if s_end - s0 <= 1e-12:
                break
        else:
            break
    s = np.concatenate([p.s for p in pieces])
    y = np.vstack([p.y for p in pieces])
    return Trajectory(s, y, events, pieces[-1].status)


def conformal_geodesic_accel(m: CollarMetric):
    """Closed-form geodesic acceleration for the conformal torus family;
    coordinates (t, x1, x2), compared against the finite-difference
    Christoffel integrator in tests."""
    if not isinstance(m.slice_family, ConformalTorus2D):
        raise TypeError("closed-form accel is for the conformal family")
    phi = m.slice_family.phi
    prof = m.profile.scalar_jet

    def accel(q, v):
        t, x1, x2 = q
        f, fp, _ = prof(t)
        j = phi.jet(t, x1, x2)
        pt = fp / f + float(j["t"])
        p1 = float(j["x1"])
        p2 = float(j["x2"])
        e2 = (f * math.exp(float(j["phi"]))) ** 2
        vt, v1, v2 = v
        return np.array([
            pt * e2 * (v1 * v1 + v2 * v2),
            -2.0 * pt * vt * v1 - p1 * v1 * v1 - 2.0 * p2 * v1 * v2 + p1 * v2 * v2,
            -2.0 * pt * vt * v2 - p2 * v2 * v2 - 2.0 * p1 * v1 * v2 + p2 * v1 * v1,
        ])

    return accel


def integrate_coordinate_geodesic(
    m: CollarMetric,
    q0,
    v0,
    length: float,
    accel,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> Trajectory:
    """Coordinate-space geodesic x'' = accel(x, x'); used with either the
    closed-form conformal acceleration or the finite-difference oracle."""
    n = len(q0)

    def rhs(s, z):
        out = np.empty(2 * n)
        out[:n] = z[n:]
        out[n:] = accel(z[:n], z[n:])
        return out

    z0 = np.concatenate([np.asarray(q0, dtype=float), np.asarray(v0, dtype=float)])
    return integrate(rhs, 0.0, z0, length, rtol=rtol, atol=atol)


# --- Jacobi machinery -------------------------------------------------------


def _scalar_curvatures(m: CollarMetric):
    """Closure t -> (K_xt, K_xy) in pure floats (K_xy None for dim 1)."""
    prof = m.profile.scalar_jet
    warp = m.slice_family.warp.scalar_jet
    k_ref = m.slice_family.k
    dim = m.dim_slice

    def kpair(t: float):
        f, fp, fpp = prof(t)
        a, ap, app = warp(t)
        alpha = ap / a
        alphap = (app * a - ap * ap) / (a * a)
        lf = fp / f
        k1 = -fpp / f - (alphap + alpha * alpha) - 2.0 * lf * alpha
        if dim == 1:
            return k1, None
        k3 = k_ref / (a * a * f * f) - alpha * alpha - lf * lf - 2.0 * lf * alpha
        return k1, k3

    return kpair


def normal_plane_curvature(m: CollarMetric, state: GeodesicState, theta: float) -> float:
    """Curvature of span(gamma', u_theta), u_theta = cos(theta) e1 +
    sin(theta) e2 in the parallel normal frame."""
    kpair = _scalar_curvatures(m)
    k1, k3 = kpair(state.t)
    if m.dim_slice == 1:
        return k1
    F = float(m.total_warp(state.t)[0])
    p2 = (state.L / F) ** 2
    r11 = k1
    r22 = state.tdot**2 * k1 + p2 * k3
    c, s = math.cos(theta), math.sin(theta)
    return c * c * r11 + s * s * r22  # r12 = 0: Codazzi term vanishes (scaled family)


def curvature_operator_along(m: CollarMetric, state: GeodesicState) -> np.ndarray:
    """R(s) in the parallel normal frame, recovered by polarization from the
    quadratic form theta -> K(span(gamma', u_theta)) at {0, pi/4, pi/2}."""
    if not isinstance(m.slice_family, ScaledConstCurv):
        raise TypeError("the normal-frame operator is built for the scaled family")
    if m.dim_slice == 1:
        return np.array([[normal_plane_curvature(m, state, 0.0)]])
    q0 = normal_plane_curvature(m, state, 0.0)
    q1 = normal_plane_curvature(m, state, math.pi / 4.0)
    q2 = normal_plane_curvature(m, state, math.pi / 2.0)
    r12 = q1 - 0.5 * (q0 + q2)
    return np.array([[q0, r12], [r12, q2]])


@dataclass(frozen=True)
class JacobiFrameState:
    """Snapshot of matrix Jacobi data in the parallel normal frame."""

    s: float
    state: GeodesicState
    J: np.ndarray
    Jdot: np.ndarray
    frame: str = "surface-normal & orthogonal slice direction (parallel)"

    @property
    def mu(self) -> float:
        j = self.J[:, 0]
        jd = self.Jdot[:, 0]
        return float(j @ jd / (j @ j))

    def wronskian(self) -> np.ndarray:
        return self.J.T @ self.Jdot - self.Jdot.T @ self.J


@dataclass
class JacobiTrajectory:
    """Sampled (geodesic, J, J') flow with event bookkeeping."""

    m: CollarMetric
    L: float
    d: int
    s: np.ndarray
    y: np.ndarray  # columns: t, tdot, sigma, J flat, Jdot flat
    events: list[Event] = field(default_factory=list)
    status: str = "reached_end"

    @property
    def t(self) -> np.ndarray:
        return self.y[:, 0]

    @property
    def tdot(self) -> np.ndarray:
        return self.y[:, 1]

    def J(self, i: int | slice = slice(None)) -> np.ndarray:
        d = self.d
        return self.y[i, 3:3 + d * d].reshape(-1, d, d)

    def Jdot(self, i: int | slice = slice(None)) -> np.ndarray:
        d = self.d
        return self.y[i, 3 + d * d:].reshape(-1, d, d)

    @property
    def det_J(self) -> np.ndarray:
        return np.linalg.det(self.J())

    @property
    def norm_J(self) -> np.ndarray:
        return np.linalg.norm(self.J(), axis=(1, 2))

    def mu_columns(self) -> np.ndarray:
        """mu_J per column of J at every sample; nan where the column vanishes."""
        J = self.J()
        Jd = self.Jdot()
        num = np.einsum("nij,nij->nj", J, Jd)
        den = np.einsum("nij,nij->nj", J, J)
        with np.errstate(invalid="ignore", divide="ignore"):
            return num / den

    def wronskian_drift(self) -> float:
        J = self.J()
        Jd = self.Jdot()
        W = np.einsum("nji,njk->nik", J, Jd) - np.einsum("nji,njk->nik", Jd, J)
        return float(np.max(np.abs(W - W[0])))

    def frame_state(self, i: int) -> JacobiFrameState:
        st = GeodesicState(float(self.y[i, 0]), float(self.y[i, 1]),
                           float(self.y[i, 2]), self.L, float(self.s[i]))
        return JacobiFrameState(float(self.s[i]), st, self.J(i)[0], self.Jdot(i)[0])

    def det_zero_events(self) -> list[Event]:
        return [e for e in self.events if e.name == "det_zero"]


def _coupled_rhs(m: CollarMetric, L: float, d: int):
    prof = m.profile.scalar_jet
    warp = m.slice_family.warp.scalar_jet
    k_ref = m.slice_family.k
    L2 = L * L

    def rhs(s, z):
        t, td = z[0], z[1]
        f, fp, fpp = prof(t)
        a, ap, app = warp(t)
        F = f * a
        Fp = fp * a + f * ap
        F2 = F * F
        alpha = ap / a
        alphap = (app * a - ap * ap) / (a * a)
        lf = fp / f
        k1 = -fpp / f - (alphap + alpha * alpha) - 2.0 * lf * alpha
        out = np.empty(3 + 2 * d * d)
        out[0] = td
        out[1] = L2 * Fp / (F2 * F)
        out[2] = L / F2
        if d == 1:
            out[3] = z[4]
            out[4] = -k1 * z[3]
        else:
            k3 = k_ref / (a * a * f * f) - alpha * alpha - lf * lf - 2.0 * lf * alpha
            r11 = k1
            r22 = td * td * k1 + (L2 / F2) * k3
            out[3:7] = z[7:11]
            out[7] = -r11 * z[3]
            out[8] = -r11 * z[4]
            out[9] = -r22 * z[5]
            out[10] = -r22 * z[6]
        return out

    return rhs


def _det_event(d: int) -> EventSpec:
    if d == 1:
        return EventSpec("det_zero", lambda s, z: z[3])
    return EventSpec("det_zero", lambda s, z: z[3] * z[6] - z[4] * z[5])


def jacobi_evolve(
    m: CollarMetric,
    state: GeodesicState,
    J0,
    J0dot,
    length: float,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    extra_events: tuple = (),
) -> JacobiTrajectory:
    """Evolve J'' + R(s) J = 0 coupled to the reduced geodesic; records
    sign changes of det J (localized on dense output) and any extra events."""
    if not isinstance(m.slice_family, ScaledConstCurv):
        raise TypeError("Jacobi evolution applies to the scaled family only")
    d = m.dim_slice
    J0 = np.asarray(J0, dtype=float).reshape(d, d)
    J0dot = np.asarray(J0dot, dtype=float).reshape(d, d)
    z0 = np.concatenate([[state.t, state.tdot, state.slice_pos], J0.ravel(), J0dot.ravel()])
    rhs = _coupled_rhs(m, state.L, d)
    traj = integrate(rhs, state.arc, z0, state.arc + length, rtol=rtol, atol=atol,
                     events=(_det_event(d),) + tuple(extra_events))
    return JacobiTrajectory(m, state.L, d, traj.s, traj.y, traj.events, traj.status)


# --- scalar Riccati instrument ----------------------------------------------


@dataclass
class RiccatiResult:
    s: np.ndarray
    u: np.ndarray
    blowdown: bool
    s_blow: float | None
    u_final: float | None


def riccati_evolve(
    K_profile,
    u0: float,
    length: float,
    blow_cap: float = 1e6,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> RiccatiResult:
    """Integrate u' = -K(s) - u^2; a dive below -blow_cap is reported as a
    blowdown (conjugate point of the underlying scalar Jacobi field) with the
    asymptote location corrected by the 1/u tail."""

    def rhs(s, y):
        return np.array([-K_profile(s) - y[0] * y[0]])

    cap = EventSpec("blowdown", lambda s, y: y[0] + blow_cap, terminal=True, direction=-1)
    traj = integrate(rhs, 0.0, np.array([float(u0)]), length, rtol=rtol, atol=atol,
                     events=(cap,))
    if traj.status.startswith("terminated:blowdown"):
        s_ev = float(traj.s[-1])
        u_ev = float(traj.y[-1, 0])
        return RiccatiResult(traj.s, traj.y[:, 0], True, s_ev + 1.0 / abs(u_ev), None)
    return RiccatiResult(traj.s, traj.y[:, 0], False, None, float(traj.y[-1, 0]))


# --- certificates ------------------------------------------------------------


def _cert_echo(m: CollarMetric, cfg: VerifierConfig, n_samples: int, extra: dict) -> dict:
    echo = {
        "kappa": repr(float(m.kappa)),
        "slice": repr(sorted(m.slice_family.to_record().items())),
        "t0": repr(float(m.t0)),
        "Q_M": repr(cfg.Q_M),
        "epsilon": repr(cfg.epsilon),
        "min_transit": repr(cfg.min_transit),
        "entry_cos_floor": repr(cfg.entry_cos_floor),
        "n_samples": str(n_samples),
    }
    echo.update(extra)
    return echo


def _sample_entries(m, cfg, n_samples, rng):
    d = m.dim_slice
    tdots = rng.uniform(cfg.entry_cos_floor, 1.0, size=n_samples)
    mus = rng.uniform(-0.995 * cfg.Q_M, cfg.Q_M, size=(n_samples, d))
    return tdots, mus


def certify_no_conjugate_points(
    m: CollarMetric,
    cfg: VerifierConfig,
    n_samples: int = 100,
    seed: int = DEFAULT_SEED,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> VerificationReport:
    """Drive entering states through the collar with cone Jacobi seeds
    (mu(0) > -Q_M per column): no det J zero may occur, and once the deep
    region t > 1/sqrt(kappa) has been occupied for ``min_transit`` of
    arclength, every column slope must have recovered to
    (1 - epsilon) kappa / sqrt(2).
    """
    rng = rng_from_seed(seed)
    tdots, mus = _sample_entries(m, cfg, n_samples, rng)
    region_t = m.region_start
    d = m.dim_slice

    n_det_zero = 0
    worst_zero: CheckRow | None = None
    min_mu = math.inf
    mu_witness = CheckRow()
    max_dwell = 0.0
    dwell_witness = CheckRow()

    enter_ev = EventSpec("deep_enter", lambda s, z: z[0] - region_t, direction=1)
    for i in range(n_samples):
        st = entering_state(m, float(tdots[i]))
        length = m.t0 / cfg.entry_cos_floor + cfg.min_transit + 0.75
        traj = jacobi_evolve(m, st, np.eye(d), np.diag(mus[i]), length,
                             rtol=rtol, atol=atol, extra_events=(enter_ev,))
        zeros = traj.det_zero_events()
        if zeros:
            n_det_zero += len(zeros)
            if worst_zero is None or zeros[0].s < (worst_zero.t or math.inf):
                worst_zero = CheckRow(t=zeros[0].s, x1=float(i), mode="det_zero",
                                      value=0.0)
        enters = [e for e in traj.events if e.name == "deep_enter"]
        if not enters:
            raise RuntimeError(f"sample {i} never reached the deep region")
        s_enter = enters[0].s
        if s_enter > max_dwell:
            max_dwell = s_enter
            dwell_witness = CheckRow(t=s_enter, x1=float(i), mode="dwell", value=s_enter)
        s_exit = s_enter + cfg.min_transit
        mu_cols = traj.mu_columns()
        for c in range(d):
            mu_exit = float(np.interp(s_exit, traj.s, mu_cols[:, c]))
            if mu_exit < min_mu:
                min_mu = mu_exit
                mu_witness = CheckRow(t=s_exit, x1=float(i), x2=float(c),
                                      mode="mu_exit", value=mu_exit)

    target = cfg.mu_target(m.kappa)
    checks = [
        Check("cone_seed_no_conjugate", passed=n_det_zero == 0,
              witness=worst_zero or CheckRow(mode="det_zero"),
              bound=0.0, measured=float(n_det_zero)),
        Check("mu_recovery", passed=min_mu >= target,
              witness=mu_witness, bound=target, measured=min_mu),
        Check("collar_dwell", passed=max_dwell <= 0.5,
              witness=dwell_witness, bound=0.5, measured=max_dwell),
    ]
    echo = _cert_echo(m, cfg, n_samples, {"certificate": "no_conjugate_points"})
    return VerificationReport(checks, echo, seed=seed)


def certify_unbounded_growth(
    m: CollarMetric,
    cfg: VerifierConfig,
    n_samples: int = 12,
    n_cross: tuple = (1, 2, 3),
    seed: int = DEFAULT_SEED,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> VerificationReport:
    """Accumulated expansion per crossing of the deep region.

    Trajectories are folded back by a velocity mirror after a fixed depth
    budget and bounced at t = 0, emulating repeated passages; along every
    completed crossing of {t > 1/sqrt(kappa)} the integral of mu_J (taken
    exactly as the log of the column-norm ratio) must reach at least
    (1 - epsilon) kappa / sqrt(2) * min_transit - epsilon, giving a matching
    lower bound on the norm growth factor per crossing.
    """
    rng = rng_from_seed(seed)
    region_t = m.region_start
    d = m.dim_slice
    budget = cfg.min_transit + 0.2

    tdots, mus = _sample_entries(m, cfg, n_samples, rng)
    bound = cfg.mu_target(m.kappa) * cfg.min_transit - cfg.epsilon

    min_int_mu = math.inf
    witness = CheckRow()
    n_det_zero = 0
    crossings_done = 0

    for i in range(n_samples):
        wanted = int(n_cross[i % len(n_cross)])
        z = np.concatenate([[0.0, float(tdots[i]), 0.0],
                            np.eye(d).ravel(), np.diag(mus[i]).ravel()])
        rhs = _coupled_rhs(m, float(entering_state(m, float(tdots[i])).L), d)
        s_now = 0.0
        det_ev = _det_event(d)

        def col_norms(zz):
            J = zz[3:3 + d * d].reshape(d, d)
            return np.sqrt((J * J).sum(axis=0))

        for crossing in range(wanted):
            # ascend to the deep boundary
            up = EventSpec("enter", lambda s, zz: zz[0] - region_t, terminal=True, direction=1)
            traj = integrate(rhs, s_now, z, s_now + 10.0, rtol=rtol, atol=atol,
                             events=(det_ev, up))
            n_det_zero += sum(1 for e in traj.events if e.name == "det_zero")
            if not traj.status.startswith("terminated:enter"):
                raise RuntimeError(f"sample {i} failed to reach the deep region")
            z = traj.end_state.copy()
            s_now = float(traj.s[-1])
            norms_in = col_norms(z)
            # spend the depth budget, then mirror the velocity
            traj = integrate(rhs, s_now, z, s_now + budget, rtol=rtol, atol=atol,
                             events=(det_ev,))
            n_det_zero += sum(1 for e in traj.events if e.name == "det_zero")
            z = traj.end_state.copy()
            s_now = float(traj.s[-1])
            z[1] = -z[1]
            # descend through the deep boundary
            down = EventSpec("exit", lambda s, zz: zz[0] - region_t, terminal=True, direction=-1)
            traj = integrate(rhs, s_now, z, s_now + 10.0, rtol=rtol, atol=atol,
                             events=(det_ev, down))
            n_det_zero += sum(1 for e in traj.events if e.name == "det_zero")
            if not traj.status.startswith("terminated:exit"):
                raise RuntimeError(f"sample {i} failed to leave the deep region")
            z = traj.end_state.copy()
            s_now = float(traj.s[-1])
            norms_out = col_norms(z)
            int_mu = float(np.min(np.log(norms_out / norms_in)))
            crossings_done += 1
            if int_mu < min_int_mu:
                min_int_mu = int_mu
                witness = CheckRow(t=s_now, x1=float(i), x2=float(crossing),
                                   mode="crossing", value=int_mu)
            if crossing + 1 < wanted:
                # descend to the boundary and bounce, emulating re-entry
                zero = EventSpec("bounce", lambda s, zz: zz[0], terminal=True, direction=-1)
                traj = integrate(rhs, s_now, z, s_now + 10.0, rtol=rtol, atol=atol,
                                 events=(det_ev, zero))
                n_det_zero += sum(1 for e in traj.events if e.name == "det_zero")
                if not traj.status.startswith("terminated:bounce"):
                    raise RuntimeError(f"sample {i} failed to return to t = 0")
                z = traj.end_state.copy()
                s_now = float(traj.s[-1])
                z[1] = -z[1]

    growth = math.exp(min_int_mu)
    checks = [
        Check("crossing_mu_integral", passed=min_int_mu >= bound,
              witness=witness, bound=bound, measured=min_int_mu),
        Check("crossing_growth", passed=growth >= math.exp(bound),
              witness=witness, bound=math.exp(bound), measured=growth),
        Check("no_conjugate_in_crossings", passed=n_det_zero == 0,
              witness=CheckRow(mode="det_zero", value=float(n_det_zero)),
              bound=0.0, measured=float(n_det_zero)),
    ]
    echo = _cert_echo(m, cfg, n_samples, {
        "certificate": "unbounded_growth",
        "n_cross": repr(tuple(int(c) for c in n_cross)),
        "budget": repr(budget),
    })
    return VerificationReport(checks, echo, seed=seed)
