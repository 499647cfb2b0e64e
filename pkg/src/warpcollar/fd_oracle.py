"""Finite-difference Riemann-tensor oracle, independent of the closed formulas.

Everything here works from metric *values* only: second-order central
differences build Christoffel symbols, nested differences build the Riemann
tensor, and sectional curvature comes from the textbook quotient

    K(U, V) = <R(U,V)V, U> / (|U|^2 |V|^2 - <U,V>^2).

Convention: R(e_i, e_j) e_k = (d_i G^l_jk - d_j G^l_ik + G G - G G) e_l, under
which the round unit sphere has curvature +1.  The oracle shares nothing with
:mod:`warpcollar.curvature` beyond the metric components themselves, so
agreement between the two is a genuine cross-check of the formulas.

This module also carries the oracle geodesic integrand (velocity derivative
from finite-difference Christoffels) used to cross-check the reduced geodesic
equations.
"""

from __future__ import annotations

import numpy as np

from .curvature import CollarMetric, TangentPlane
from .slices import ConformalTorus2D, ScaledConstCurv

__all__ = [
    "StepTooSmall",
    "metric_components",
    "christoffels_fd",
    "riemann_lowered_fd",
    "oracle_sectional",
    "frame_to_coords",
    "fd_geodesic_accel",
]


class StepTooSmall(ValueError):
    """Cancellation detected: Riemann symmetry residual beyond tolerance."""


def metric_components(m: CollarMetric, p, unwarped: bool = False) -> np.ndarray:
    """Metric matrix at p = (t, x1[, x2]); ``unwarped`` replaces f by 1."""
    p = np.asarray(p, dtype=float)
    t = p[0]
    n = m.dim_slice + 1
    g = np.zeros((n, n))
    g[0, 0] = 1.0
    f = 1.0 if unwarped else m.profile.eval(t)[0]
    fam = m.slice_family
    if isinstance(fam, ScaledConstCurv):
        a = fam.warp.eval(t)[0]
        ref = fam.ref_metric_diag(p[1])
        for i in range(fam.dim):
            g[i + 1, i + 1] = (f * a) ** 2 * float(ref[i])
    elif isinstance(fam, ConformalTorus2D):
        phi = float(fam.phi.jet(t, p[1], p[2])["phi"])
        c = (f * np.exp(phi)) ** 2
        g[1, 1] = c
        g[2, 2] = c
    else:
        raise TypeError(f"unknown slice family {type(fam).__name__}")
    return g


def christoffels_fd(m: CollarMetric, p, step: float, unwarped: bool = False) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    n = p.size
    dg = np.empty((n, n, n))
    for i in range(n):
        e = np.zeros(n)
        e[i] = step
        dg[i] = (metric_components(m, p + e, unwarped) -
                 metric_components(m, p - e, unwarped)) / (2.0 * step)
    gi = np.linalg.inv(metric_components(m, p, unwarped))
    # G^k_ij = 1/2 g^{kl} (d_i g_lj + d_j g_li - d_l g_ij)
    G = np.empty((n, n, n))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                s = 0.0
                for l in range(n):
                    s += gi[k, l] * (dg[i][l, j] + dg[j][l, i] - dg[l][i, j])
                G[k, i, j] = 0.5 * s
    return G


def riemann_lowered_fd(
    m: CollarMetric, p, step: float, unwarped: bool = False,
    symmetry_tol: float = 0.05,
) -> np.ndarray:
    """R[i,j,k,l] = <R(e_i,e_j) e_k, e_l> from nested central differences.

    Raises :class:`StepTooSmall` when the computed tensor violates the
    Riemann symmetries by more than ``symmetry_tol`` relative to its scale,
    the signature of catastrophic cancellation in the differences.
    """
    p = np.asarray(p, dtype=float)
    n = p.size
    G = christoffels_fd(m, p, step, unwarped)
    dG = np.empty((n, n, n, n))
    for i in range(n):
        e = np.zeros(n)
        e[i] = step
        dG[i] = (christoffels_fd(m, p + e, step, unwarped) -
                 christoffels_fd(m, p - e, step, unwarped)) / (2.0 * step)
    R_up = np.empty((n, n, n, n))  # R^l_{.ijk} as [l, i, j, k]
    for l in range(n):
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    s = dG[i][l, j, k] - dG[j][l, i, k]
                    for mm in range(n):
                        s += G[l, i, mm] * G[mm, j, k] - G[l, j, mm] * G[mm, i, k]
                    R_up[l, i, j, k] = s
    g = metric_components(m, p, unwarped)
    R = np.einsum("lm,mijk->ijkl", g, R_up)

    scale = float(np.max(np.abs(R)))
    if scale > 1e-7:
        resid = max(
            float(np.max(np.abs(R + R.transpose(1, 0, 2, 3)))),
            float(np.max(np.abs(R + R.transpose(0, 1, 3, 2)))),
            float(np.max(np.abs(R - R.transpose(2, 3, 0, 1)))),
        )
        if resid > symmetry_tol * scale:
            raise StepTooSmall(
                f"Riemann symmetry residual {resid:.3g} exceeds "
                f"{symmetry_tol:.3g} x scale {scale:.3g} at step {step:.3g}"
            )
    # The nested differences preserve the tensor symmetries structurally, so
    # the residual alone cannot flag cancellation; estimate the rounding
    # noise floor of a second difference directly.
    g_scale = float(np.max(np.abs(g)))
    noise = 8.0 * np.finfo(float).eps * g_scale / (step * step)
    if noise > 0.02 * scale and noise > 1e-6 * g_scale:
        raise StepTooSmall(
            f"rounding noise estimate {noise:.3g} is not small against the "
            f"Riemann scale {scale:.3g} at step {step:.3g}"
        )
    return R


def frame_to_coords(m: CollarMetric, t: float, x, comps) -> np.ndarray:
    """Coordinate components of a slice vector given g_t-orthonormal-frame
    components (the slice metric of both families is diagonal in its chart)."""
    comps = np.asarray(comps, dtype=float)
    fam = m.slice_family
    out = np.zeros(fam.dim + 1)
    if isinstance(fam, ScaledConstCurv):
        a = float(fam.warp.eval(t)[0])
        ref = fam.ref_metric_diag(x[0] if x else 0.0)
        for i in range(fam.dim):
            out[i + 1] = comps[i] / (a * np.sqrt(float(ref[i])))
    else:
        phi = float(fam.phi.jet(t, x[0], x[1])["phi"])
        out[1:] = comps / np.exp(phi)
    return out


def oracle_sectional(m: CollarMetric, plane: TangentPlane, step: float = 1e-3) -> float:
    """Sectional curvature of ``plane`` from the finite-difference Riemann
    tensor; shares no code path with the closed formulas."""
    if step <= 0.0:
        raise ValueError("step must be positive")
    dim = m.dim_slice
    X, Y = plane.resolved(dim)
    t = plane.base_t
    x = tuple(plane.base_x) if plane.base_x else ((1.0,) * dim if
        isinstance(m.slice_family, ScaledConstCurv) and m.slice_family.k != 0.0
        else (0.0,) * dim)
    p = np.array([t, *x])
    e_t = np.zeros(dim + 1)
    e_t[0] = 1.0
    Xc = frame_to_coords(m, t, x, X)
    if plane.mode == "xt":
        U, V = Xc, e_t
    elif plane.mode == "xy":
        U, V = Xc, frame_to_coords(m, t, x, Y)
    else:
        U = Xc + plane.a * e_t
        V = frame_to_coords(m, t, x, Y)
    R = riemann_lowered_fd(m, p, step)
    g = metric_components(m, p)
    num = float(np.einsum("i,j,k,l,ijkl->", U, V, V, U, R))
    den = float((U @ g @ U) * (V @ g @ V) - (U @ g @ V) ** 2)
    return num / den


def fd_geodesic_accel(m: CollarMetric, q, v, step: float = 1e-4) -> np.ndarray:
    """Acceleration -G^k_ij v^i v^j from finite-difference Christoffels; the
    integrand of the coordinate-space oracle geodesic integrator."""
    G = christoffels_fd(m, np.asarray(q, dtype=float), step)
    return -np.einsum("kij,i,j->k", G, v, v)
