import math

import numpy as np
import pytest

from warpcollar import (
    CollarMetric,
    ConformalTorus2D,
    ConstantWarp,
    CurvatureCase,
    GridSpec,
    NonOrthonormalPlane,
    PhiSpec,
    ScaledConstCurv,
    TangentPlane,
    UnitProfile,
    build_collar_metric,
    build_extension_schedule,
    collar_curvatures,
    far_field_curvatures,
    measure_interior_bound,
    mixed_extrema,
    sectional_curvature,
    verify_lemma_bounds,
)


def hyperbolic_metric(kappa: float) -> CollarMetric:
    return build_collar_metric(ScaledConstCurv(-1.0, 2, ConstantWarp(1.0)), kappa)


def preset_metric(name: str, kappa: float) -> CollarMetric:
    if name == "hyperbolic":
        fam = ScaledConstCurv(-1.0, 2, ConstantWarp(1.0))
    elif name == "flat":
        fam = ScaledConstCurv(0.0, 2, build_extension_schedule(1.0, 1.0, 4.0))
    else:
        fam = ScaledConstCurv(1.0, 2, ConstantWarp(1.0))
    return build_collar_metric(fam, kappa)


class TestConstantCurvatureIdentity:
    def test_minus_kappa_squared_every_mode(self):
        m = hyperbolic_metric(3.0)
        for mode, a in (("xt", 0.0), ("xy", 0.0), ("mixed", 0.7), ("mixed", -2.3)):
            pl = TangentPlane(base_t=1.5, mode=mode, a=a)
            assert sectional_curvature(m, pl) == pytest.approx(-9.0, rel=1e-12)

    def test_flat_product_is_flat(self):
        # f == 1, static flat slices: every plane is flat
        fam = ScaledConstCurv(0.0, 2, ConstantWarp(1.0))
        m = CollarMetric(UnitProfile(), fam, 1.0)
        for mode, a in (("xt", 0.0), ("xy", 0.0), ("mixed", 1.3)):
            pl = TangentPlane(base_t=0.4, mode=mode, a=a)
            assert sectional_curvature(m, pl) == 0.0


class TestFarFieldFormulas:
    def test_flat_xt_value(self):
        m = preset_metric("flat", 2.0)
        assert far_field_curvatures(m, 1.5, "xt") == pytest.approx(-4.0, rel=1e-12)

    def test_sphere_xy_value(self):
        # unit sphere slice, f = sinh(kappa t)/kappa, kappa = 2, t = 1:
        # K = k^2/sinh^2(2) - k^2 coth^2(2) = -4 by the hyperbolic identity
        fam = ScaledConstCurv(1.0, 2, ConstantWarp(1.0))
        m = build_collar_metric(fam, 2.0)
        val = far_field_curvatures(m, 1.0, "xy")
        expected = 4.0 / math.sinh(2.0) ** 2 - 4.0 / math.tanh(2.0) ** 2
        assert val == pytest.approx(expected, rel=1e-14)
        assert val == pytest.approx(-4.0, abs=1e-12)

    def test_mixed_limit_is_xy(self):
        m = preset_metric("flat", 2.0)
        xy = far_field_curvatures(m, 1.4, "xy")
        tiny = far_field_curvatures(m, 1.4, "mixed", a=1e-9)
        assert tiny == pytest.approx(xy, rel=1e-12)

    def test_matches_general_formula_everywhere_frozen(self):
        for name in ("hyperbolic", "flat", "sphere"):
            m = preset_metric(name, 5.0)
            for t in np.linspace(max(1.0, m.t0), 3.0, 9):
                for mode, a in (("xt", None), ("xy", None), ("mixed", 0.9)):
                    general = sectional_curvature(
                        m, TangentPlane(base_t=float(t), mode=mode, a=a or 0.9))
                    simple = far_field_curvatures(m, float(t), mode, a)
                    assert general == pytest.approx(simple, abs=1e-12 * m.kappa**2)

    def test_rejects_unfrozen_region(self):
        m = preset_metric("flat", 2.0)  # schedule freezes at t = 1
        with pytest.raises(ValueError):
            far_field_curvatures(m, 0.8, "xt")


class TestPlaneValidation:
    def test_non_unit_rejected(self):
        m = hyperbolic_metric(3.0)
        with pytest.raises(NonOrthonormalPlane):
            sectional_curvature(m, TangentPlane(base_t=1.0, mode="xy", X=(1.1, 0.0)))

    def test_non_orthogonal_rejected(self):
        m = hyperbolic_metric(3.0)
        s = 1.0 / math.sqrt(2.0)
        with pytest.raises(NonOrthonormalPlane):
            sectional_curvature(
                m, TangentPlane(base_t=1.0, mode="xy", X=(1.0, 0.0), Y=(s, s)))

    def test_mixed_needs_nonzero_a(self):
        m = hyperbolic_metric(3.0)
        with pytest.raises(ValueError):
            sectional_curvature(m, TangentPlane(base_t=1.0, mode="mixed", a=0.0))

    def test_dim1_has_no_xy_planes(self):
        fam = ScaledConstCurv(0.0, 1, ConstantWarp(1.0))
        m = build_collar_metric(fam, 4.0)
        with pytest.raises(ValueError):
            sectional_curvature(m, TangentPlane(base_t=1.0, mode="xy"))


class TestFormulaProperties:
    def test_xy_symmetry_under_swap(self):
        phi = PhiSpec(c1=0.1, c2=0.07, om_t=0.9, om1=1.0, om2=2.0)
        m = CollarMetric(build_collar_metric(
            ScaledConstCurv(0.0, 2, ConstantWarp(1.0)), 2.0).profile,
            ConformalTorus2D(phi), 2.0)
        pl = TangentPlane(base_t=0.4, base_x=(1.0, 0.7), mode="xy",
                          X=(1.0, 0.0), Y=(0.0, 1.0))
        swapped = TangentPlane(base_t=0.4, base_x=(1.0, 0.7), mode="xy",
                               X=(0.0, 1.0), Y=(1.0, 0.0))
        assert sectional_curvature(m, pl) == pytest.approx(
            sectional_curvature(m, swapped), abs=1e-12)

    def test_mixed_endpoints(self):
        phi = PhiSpec(c1=0.1, om1=1.0)
        prof = build_collar_metric(ScaledConstCurv(0.0, 2, ConstantWarp(1.0)), 2.0).profile
        m = CollarMetric(prof, ConformalTorus2D(phi), 2.0)
        base = dict(base_t=0.4, base_x=(1.0, 0.5))
        xy = sectional_curvature(m, TangentPlane(mode="xy", **base))
        xt_y = sectional_curvature(m, TangentPlane(mode="xt", X=(0.0, 1.0), **base))
        small = sectional_curvature(m, TangentPlane(mode="mixed", a=1e-6, **base))
        large = sectional_curvature(m, TangentPlane(mode="mixed", a=1e6, **base))
        assert small == pytest.approx(xy, abs=1e-5)
        assert large == pytest.approx(xt_y, abs=1e-5)

    def test_warped_never_exceeds_unwarped_normal_planes(self):
        # f'' >= 0, f' >= 0, f >= 1, A >= 0  =>  K_warped(X,T) <= K_unwarped(X,T)
        fam = ScaledConstCurv(0.0, 2, build_extension_schedule(1.0, 1.0, 4.0))
        warped = build_collar_metric(fam, 5.0)
        unwarped = CollarMetric(UnitProfile(), fam, 5.0)
        for t in np.linspace(-0.2, 3.0, 200):
            pl = TangentPlane(base_t=float(t), mode="xt")
            assert sectional_curvature(warped, pl) <= sectional_curvature(unwarped, pl) + 1e-12

    def test_mixed_extrema_envelope(self):
        # the exact extrema never exceed max(K_xy, K_ty) + |F|/f
        rng = np.random.default_rng(5)
        f = rng.uniform(1.0, 4.0, 50)
        kxy = rng.uniform(-9.0, 1.0, 50)
        kty = rng.uniform(-9.0, 1.0, 50)
        F = rng.uniform(-2.0, 2.0, 50)
        lo, hi = mixed_extrema(f, kxy, kty, F)
        env_hi = np.maximum(kxy, kty) + np.abs(F) / f
        env_lo = np.minimum(kxy, kty) - np.abs(F) / f
        assert np.all(hi <= env_hi + 1e-12)
        assert np.all(lo >= env_lo - 1e-12)
        # and they bracket a dense sample over the mixing parameter
        for a in np.linspace(-30.0, 30.0, 121):
            val = (f * f * kxy + a * a * kty + 2 * a * F) / (f * f + a * a)
            assert np.all(val <= hi + 1e-10)
            assert np.all(val >= lo - 1e-10)


class TestLemmaBounds:
    def test_all_pass_hyperbolic(self):
        m = hyperbolic_metric(10.0)
        rep = verify_lemma_bounds(m)
        assert rep.passed
        by_id = {c.check_id: c for c in rep.checks}
        # exact equality of the asymptotic value on the frozen region
        assert by_id["asymptotic"].measured <= 1e-10 * 100.0
        assert by_id["deep_bound"].measured <= -50.0

    def test_all_pass_every_preset_kappa20(self):
        for name in ("hyperbolic", "flat", "sphere"):
            rep = verify_lemma_bounds(preset_metric(name, 20.0))
            assert rep.passed, (name, [c.check_id for c in rep.failed_checks()])

    def test_deep_bound_fails_for_raised_bridge(self):
        # kappa = 3: the bridge endpoint is raised past 1/sqrt(kappa), so the
        # deep region contains a patch of bridge with mild curvature
        m = hyperbolic_metric(3.0)
        assert m.t0 > m.region_start
        rep = verify_lemma_bounds(m)
        by_id = {c.check_id: c for c in rep.checks}
        assert not by_id["deep_bound"].passed
        witness_t = by_id["deep_bound"].witness.t
        assert m.region_start <= witness_t < m.t0
        assert by_id["deep_bound"].witness.value > -4.5

    def test_measured_interior_bound(self):
        m = preset_metric("sphere", 20.0)
        c0 = measure_interior_bound(m)
        assert c0 == pytest.approx(1.0, abs=1e-6)
        m2 = hyperbolic_metric(20.0)
        assert measure_interior_bound(m2) == pytest.approx(0.0, abs=1e-9)

    def test_supplied_c0_respected(self):
        m = preset_metric("sphere", 20.0)
        rep = verify_lemma_bounds(m, C0=0.5)  # too small: bridge has K up to 1
        by_id = {c.check_id: c for c in rep.checks}
        assert not by_id["global_bound"].passed

    def test_conformal_rejected(self):
        m = CollarMetric(hyperbolic_metric(3.0).profile,
                         ConformalTorus2D(PhiSpec()), 3.0)
        with pytest.raises(TypeError):
            verify_lemma_bounds(m)

    def test_dim1_supported(self):
        fam = ScaledConstCurv(0.0, 1, ConstantWarp(1.0))
        m = build_collar_metric(fam, 20.0)
        rep = verify_lemma_bounds(m)
        assert rep.passed

    def test_curvature_profiles_match_pointwise(self):
        m = preset_metric("flat", 7.0)
        t = np.linspace(-0.2, 2.5, 40)
        kxt, kxy = collar_curvatures(m, t)
        for i, ti in enumerate(t):
            assert kxt[i] == pytest.approx(
                sectional_curvature(m, TangentPlane(base_t=float(ti), mode="xt")),
                rel=1e-13, abs=1e-13)
            assert kxy[i] == pytest.approx(
                sectional_curvature(m, TangentPlane(base_t=float(ti), mode="xy")),
                rel=1e-13, abs=1e-13)

    def test_grid_spec_validation(self):
        with pytest.raises(ValueError):
            GridSpec(n_t=4)
