"""Adaptive embedded Runge-Kutta integration with event localization.

A plain Dormand-Prince 5(4) pair drives every trajectory in the package
(geodesics, Jacobi systems, Riccati comparisons, the finite-difference
oracle integrator).  Accepted steps carry cubic Hermite dense output, which
the event machinery bisects to localize sign changes (conjugate points,
boundary crossings, blowdowns) well below step resolution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = ["StepRejected", "EventSpec", "Event", "Trajectory", "rk45_step", "integrate"]

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
                187 / 2100, 1 / 40])


class StepRejected(RuntimeError):
    """A trial step exceeded the error tolerance; carries a suggested h."""

    def __init__(self, message: str, suggested_h: float):
        super().__init__(message)
        self.suggested_h = suggested_h


def rk45_step(rhs, s: float, y: np.ndarray, h: float):
    """One Dormand-Prince trial step.

    Returns (y5, err_norm, f0) where err_norm <= 1 means the step meets a
    unit tolerance scale supplied by the caller through the rhs closure; the
    caller rescales below.
    """
    k = [rhs(s, y)]
    for i in range(1, 7):
        yi = y + h * sum(a * kk for a, kk in zip(_A[i], k))
        k.append(rhs(s + _C[i] * h, yi))
    y5 = y + h * sum(b * kk for b, kk in zip(_B5, k))
    y4 = y + h * sum(b * kk for b, kk in zip(_B4, k))
    return y5, y5 - y4, k[0], k[6]


@dataclass(frozen=True)
class EventSpec:
    """Scalar event g(s, y); fires on a sign change of g along the solution."""

    name: str
    fn: Callable
    terminal: bool = False
    direction: int = 0  # +1: only -- -> +, -1: only + -> -, 0: both


@dataclass(frozen=True)
class Event:
    name: str
    s: float
    y: np.ndarray


@dataclass
class Trajectory:
    s: np.ndarray
    y: np.ndarray
    events: list[Event] = field(default_factory=list)
    status: str = "reached_end"

    @property
    def end_state(self) -> np.ndarray:
        return self.y[-1]


def _hermite(y0, f0, y1, f1, h, theta):
    t2 = theta * theta
    t3 = t2 * theta
    h00 = 2 * t3 - 3 * t2 + 1
    h10 = t3 - 2 * t2 + theta
    h01 = -2 * t3 + 3 * t2
    h11 = t3 - t2
    return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1


def _localize(ev: EventSpec, s0, y0, f0, s1, y1, f1):
    h = s1 - s0
    g0 = float(ev.fn(s0, y0))
    lo, hi = 0.0, 1.0
    glo = g0
    for _ in range(90):
        mid = 0.5 * (lo + hi)
        ym = _hermite(y0, f0, y1, f1, h, mid)
        gm = float(ev.fn(s0 + mid * h, ym))
        if glo * gm <= 0.0:
            hi = mid
        else:
            lo = mid
            glo = gm
        if (hi - lo) * abs(h) < 1e-14 * max(1.0, abs(s1)):
            break
    theta = 0.5 * (lo + hi)
    return s0 + theta * h, _hermite(y0, f0, y1, f1, h, theta)


def integrate(
    rhs,
    s0: float,
    y0,
    s_end: float,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    max_step: float = np.inf,
    first_step: float | None = None,
    events: tuple = (),
    max_steps: int = 2_000_000,
) -> Trajectory:
    """Integrate y' = rhs(s, y) from s0 to s_end, recording accepted steps."""
    y = np.asarray(y0, dtype=float).copy()
    s = float(s0)
    if s_end <= s:
        raise ValueError("s_end must exceed s0")
    span = s_end - s
    if first_step is None:
        f0 = np.asarray(rhs(s, y))
        scale = atol + rtol * np.abs(y)
        d0 = float(np.sqrt(np.mean((y / scale) ** 2)))
        d1 = float(np.sqrt(np.mean((f0 / scale) ** 2)))
        if d0 > 1e-5 and d1 > 1e-5:
            h = 0.01 * d0 / d1
        else:
            h = 1e-6
        h = min(span, max_step, h)
    else:
        h = min(first_step, span, max_step)

    ss = [s]
    ys = [y.copy()]
    out_events: list[Event] = []
    g_prev = [float(ev.fn(s, y)) for ev in events]
    status = "reached_end"

    steps = 0
    while s < s_end:
        steps += 1
        if steps > max_steps:
            status = "max_steps"
            break
        h = min(h, s_end - s)
        y_new, err_vec, f_start, f_stop = rk45_step(rhs, s, y, h)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.max(np.abs(err_vec) / scale))
        if err <= 1.0 or h <= 1e-14 * max(1.0, abs(s)):
            s_new = s + h
            terminated = False
            for j, ev in enumerate(events):
                g_new = float(ev.fn(s_new, y_new))
                crossed = g_prev[j] * g_new < 0.0 or (g_prev[j] != 0.0 and g_new == 0.0)
                if crossed:
                    rising = g_new > g_prev[j]
                    if ev.direction == 0 or (ev.direction > 0) == rising:
                        s_ev, y_ev = _localize(ev, s, y, f_start, s_new, y_new, f_stop)
                        out_events.append(Event(ev.name, s_ev, y_ev))
                        if ev.terminal:
                            ss.append(s_ev)
                            ys.append(y_ev)
                            status = f"terminated:{ev.name}"
                            terminated = True
                            break
                g_prev[j] = g_new
            if terminated:
                break
            s, y = s_new, y_new
            ss.append(s)
            ys.append(y.copy())
            h = min(max_step, h * min(5.0, max(0.2, 0.9 * err ** -0.2 if err > 0 else 5.0)))
        else:
            h *= max(0.2, 0.9 * err ** -0.2)

    return Trajectory(np.array(ss), np.array(ys), out_events, status)
