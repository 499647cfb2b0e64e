import math

import numpy as np
import pytest

from warpcollar import (
    ConformalTorus2D,
    ConstantWarp,
    InsufficientHeadroom,
    PhiSpec,
    ScaledConstCurv,
    ScheduleWarp,
    UnitProfile,
    build_extension_schedule,
    slice_data,
)
from warpcollar.curvature import CollarMetric
from warpcollar.fd_oracle import riemann_lowered_fd


class TestScheduleConstruction:
    def test_reference_targets(self):
        w = build_extension_schedule(1.0, 1.0, 4.0)
        a1, ap1, _ = w.eval(1.0)
        assert a1 == pytest.approx(2.0, abs=1e-12)
        assert ap1 == 0.0
        assert w.eval(0.25)[1] >= 0.5
        a0, ap0, _ = w.eval(0.0)
        assert a0 == pytest.approx(1.0, abs=1e-14)
        assert ap0 == pytest.approx(1.0, abs=1e-14)

    def test_slope_floor_holds_into_original_region(self):
        w = build_extension_schedule(1.0, 1.0, 4.0)
        assert w.eval(-0.1)[1] >= 0.5

    def test_monotone(self):
        w = build_extension_schedule(1.0, 1.0, 4.0)
        t = np.linspace(-0.25, 1.5, 1000)
        a, ap, _ = w.eval(t)
        assert np.all(np.diff(a) >= 0)
        assert np.all(ap >= -1e-15)

    def test_frozen_after_one(self):
        w = build_extension_schedule(1.0, 1.0, 4.0)
        t = np.linspace(1.0, 3.0, 50)
        a, ap, app = w.eval(t)
        np.testing.assert_allclose(a, 2.0, atol=1e-13)
        assert np.max(np.abs(ap)) == 0.0
        assert np.max(np.abs(app)) == 0.0

    def test_dip_branch(self):
        # delta = sqrt(2.1) - 1 ~ 0.449 in (a0p/4, a0p/2) for a0p = 1.2
        w = build_extension_schedule(1.0, 1.2, 2.1)
        assert w.branch == "dip"
        t = np.linspace(0.0, 1.0, 2001)
        a, ap, _ = w.eval(t)
        assert a[-1] == pytest.approx(math.sqrt(2.1), abs=1e-12)
        assert np.min(ap[t <= 0.5]) >= 0.6 - 1e-12
        assert np.min(ap) >= -1e-15

    def test_rejects_insufficient_headroom(self):
        with pytest.raises(InsufficientHeadroom):
            build_extension_schedule(1.0, 1.0, 1.2)  # below a0^2 + a0p/4
        with pytest.raises(InsufficientHeadroom):
            build_extension_schedule(0.4, 1.0, 0.42)  # above spec floor, below reach
        with pytest.raises(ValueError):
            build_extension_schedule(-1.0, 1.0, 4.0)
        with pytest.raises(ValueError):
            build_extension_schedule(1.0, 0.0, 4.0)

    def test_form_floor_paper_bullet(self):
        # d/dt g_t >= (1/2) d/dt g_t|_0 as fixed bilinear forms: a'(t) a(t) >= a0' a0 / 2
        w = build_extension_schedule(1.0, 1.0, 4.0)
        t = np.linspace(-0.2, 0.5, 500)
        a, ap, _ = w.eval(t)
        floor = w.metadata().initial_slope_floor
        assert np.min(ap * a) >= floor / 2.0 - 1e-12

    def test_scalar_jet_matches_eval(self):
        for w in (build_extension_schedule(1.0, 1.0, 4.0),
                  build_extension_schedule(1.0, 1.2, 2.1),
                  ConstantWarp(1.7)):
            for t in np.linspace(-0.3, 1.4, 301):
                sj = w.scalar_jet(float(t))
                ev = w.eval(float(t))
                assert sj == tuple(float(v) for v in ev)


class TestSliceData:
    def test_static_hyperbolic(self):
        fam = ScaledConstCurv(-1.0, 2, ConstantWarp(1.0))
        sd = slice_data(fam, 0.7)
        assert float(sd.alpha) == 0.0
        assert float(sd.k_int) == -1.0
        assert sd.codazzi((1.0, 0.0), (0.0, 1.0)) == 0.0
        np.testing.assert_array_equal(sd.shape_operator(), np.zeros((2, 2)))

    def test_exponential_warp(self):
        # a = e^t at t = 0: shape operator is the identity, flat slices stay flat
        w = ScheduleWarp(1.0, 1.0, 4.0, "rise", 1.5, 0.0)
        fam = ScaledConstCurv(0.0, 2, w)
        sd = slice_data(fam, 0.0)
        assert float(sd.alpha) == pytest.approx(1.0)
        assert float(sd.k_int) == 0.0
        np.testing.assert_allclose(sd.shape_operator(), np.eye(2))

    def test_dim1_has_no_intrinsic_curvature(self):
        fam = ScaledConstCurv(0.0, 1, ConstantWarp(2.0))
        sd = slice_data(fam, 0.3)
        assert sd.k_int is None
        assert sd.dim == 1

    def test_conformal_jet_matches_finite_differences(self):
        phi = PhiSpec(c1=0.1, c2=0.05, om_t=1.3, om1=1.0, om2=2.0, ph1=0.4)
        t, x1, x2 = 0.3, 1.1, 0.6
        hs = (2e-3, 1e-3)
        errs = {}
        for h in hs:
            j = phi.jet(t, x1, x2)
            fd = {
                "t": (phi.jet(t + h, x1, x2)["phi"] - phi.jet(t - h, x1, x2)["phi"]) / (2 * h),
                "x1": (phi.jet(t, x1 + h, x2)["phi"] - phi.jet(t, x1 - h, x2)["phi"]) / (2 * h),
                "x2": (phi.jet(t, x1, x2 + h)["phi"] - phi.jet(t, x1, x2 - h)["phi"]) / (2 * h),
                "tt": (phi.jet(t + h, x1, x2)["t"] - phi.jet(t - h, x1, x2)["t"]) / (2 * h),
                "t1": (phi.jet(t, x1 + h, x2)["t"] - phi.jet(t, x1 - h, x2)["t"]) / (2 * h),
                "11": (phi.jet(t, x1 + h, x2)["x1"] - phi.jet(t, x1 - h, x2)["x1"]) / (2 * h),
                "22": (phi.jet(t, x1, x2 + h)["x2"] - phi.jet(t, x1, x2 - h)["x2"]) / (2 * h),
            }
            errs[h] = {k: abs(float(j[k]) - float(v)) for k, v in fd.items()}
        for key in errs[hs[0]]:
            e_big, e_small = errs[hs[0]][key], errs[hs[1]][key]
            if e_big < 1e-12:
                continue
            order = math.log(e_big / e_small) / math.log(hs[0] / hs[1])
            assert 1.8 <= order <= 2.2, f"{key}: observed order {order}"

    def test_codazzi_against_riemann_component(self):
        # F(X,Y) = <R(X,Y)Y, T> of the unwarped extension, via the FD oracle
        phi = PhiSpec(c1=0.1, om1=1.0)  # phi = 0.1 t sin(x1)
        fam = ConformalTorus2D(phi)
        m = CollarMetric(UnitProfile(), fam, 1.0)
        for x1 in (1.0, 2.2):
            t, x2 = 0.0, 0.5
            sd = slice_data(fam, t, (x1, x2))
            sc = math.exp(-float(phi.jet(t, x1, x2)["phi"]))
            X = np.array([0.0, sc, 0.0])
            Y = np.array([0.0, 0.0, sc])
            R = riemann_lowered_fd(m, np.array([t, x1, x2]), 2e-4)
            F_fd = float(np.einsum("i,j,k,l,ijkl->", X, Y, Y, np.array([1.0, 0, 0]), R))
            F_an = sd.codazzi((1.0, 0.0), (0.0, 1.0))
            assert F_an == pytest.approx(F_fd, abs=5e-7)
            assert abs(F_an) > 1e-3  # generic point: the term is really nonzero

    def test_codazzi_vanishes_at_gradient_node(self):
        # at x1 = pi/2 the t-slope of phi = 0.1 t sin(x1) has zero gradient
        fam = ConformalTorus2D(PhiSpec(c1=0.1, om1=1.0))
        sd = slice_data(fam, 0.0, (math.pi / 2.0, 0.0))
        assert sd.codazzi((1.0, 0.0), (0.0, 1.0)) == pytest.approx(0.0, abs=1e-15)

    def test_conformal_needs_point(self):
        fam = ConformalTorus2D(PhiSpec())
        with pytest.raises(ValueError):
            slice_data(fam, 0.0)

    def test_dim_validation(self):
        with pytest.raises(ValueError):
            ScaledConstCurv(-1.0, 3, ConstantWarp(1.0))
        with pytest.raises(ValueError):
            ScaledConstCurv(-1.0, 1, ConstantWarp(1.0))
