import numpy as np
import pytest
from scipy.integrate import trapezoid as trapezoid_rule

from crackfgm.material import SI3N4, SUS304, FgmSpec, ThermalState, isotropic, point_properties_array
from crackfgm.section import (
    SectionError,
    integrate_section,
    reduced_stiffness,
    shear_correction_factor,
    thickness_rule,
)

H = 0.1
STEEL = isotropic("steel", 200e9, 0.3, 7800.0, alpha=1.2e-5)
HOMOGENEOUS = FgmSpec(STEEL, STEEL, 1.0, 0.3)


def trapezoid(fgm, thermal, h, f, points=100_001):
    z = np.linspace(-h / 2, h / 2, points)
    p = point_properties_array(fgm, thermal, z, h)
    return trapezoid_rule(f(z, p), z)


class TestReducedStiffness:
    def test_isotropic_entries(self):
        Qp, Qs = reduced_stiffness(200e9, 0.3)
        assert Qp[0, 0] == pytest.approx(200e9 / 0.91)
        assert Qp[0, 1] == pytest.approx(0.3 * 200e9 / 0.91)
        assert Qp[2, 2] == pytest.approx(200e9 / 2.6)
        np.testing.assert_allclose(Qs, np.eye(2) * 200e9 / 2.6)

    def test_rejects_bad_input(self):
        with pytest.raises(SectionError):
            reduced_stiffness(-1.0, 0.3)
        with pytest.raises(SectionError):
            reduced_stiffness(1.0, 0.5)


class TestHomogeneousSection:
    def test_closed_form(self):
        s = integrate_section(HOMOGENEOUS, ThermalState(), H)
        Qp, _ = reduced_stiffness(200e9, 0.3)
        np.testing.assert_allclose(s.A, Qp * H, rtol=1e-13)
        np.testing.assert_allclose(s.D, Qp * H**3 / 12, rtol=1e-13)
        assert np.max(np.abs(s.B)) < 1e-12 * np.max(np.abs(s.A)) * H
        assert s.p == pytest.approx(7800.0 * H)
        assert s.I == pytest.approx(7800.0 * H**3 / 12)

    def test_shear_correction_is_five_sixths(self):
        ks = shear_correction_factor(HOMOGENEOUS, ThermalState(), H)
        assert abs(ks - 5.0 / 6.0) < 1e-10

    def test_ambient_has_no_thermal_load(self):
        s = integrate_section(HOMOGENEOUS, ThermalState(), H)
        assert not s.has_thermal_load
        np.testing.assert_array_equal(s.NT, 0.0)
        np.testing.assert_array_equal(s.MT, 0.0)


class TestGradedSection:
    @pytest.mark.parametrize("n", [0.5, 1.0, 2.0, 5.0])
    def test_coupling_matches_trapezoid(self, n):
        fgm = FgmSpec(SI3N4, SUS304, n)
        thermal = ThermalState(600.0, 300.0)
        s = integrate_section(fgm, thermal, H)
        B11 = trapezoid(fgm, thermal, H, lambda z, p: z * p["E"] / (1 - p["nu"] ** 2))
        assert s.B[0, 0] == pytest.approx(B11, rel=1e-6)
        NT = trapezoid(fgm, thermal, H, lambda z, p: p["E"] / (1 - p["nu"]) * p["alpha"] * (p["T"] - 300.0))
        assert s.NT[0] == pytest.approx(NT, rel=1e-6)

    def test_ceramic_top_gives_positive_coupling(self):
        # Stiffer ceramic on top moves the neutral surface up: B11 > 0.
        s = integrate_section(FgmSpec(SI3N4, SUS304, 1.0), ThermalState(), H)
        assert s.B[0, 0] > 0

    def test_positive_definite(self):
        s = integrate_section(FgmSpec(SI3N4, SUS304, 10.0), ThermalState(600.0, 300.0), H)
        assert np.all(np.linalg.eigvalsh(s.A) > 0)
        assert np.all(np.linalg.eigvalsh(s.D) > 0)
        assert 0.0 < s.ks <= 1.0

    def test_thermal_resultants_are_linear_for_fixed_properties(self):
        # Temperature-independent phases: NT, MT are linear in (Tc - T0, Tm - T0).
        c = isotropic("c", 300e9, 0.28, 2370.0, alpha=6e-6, kappa=9.19)
        m = isotropic("m", 200e9, 0.28, 8166.0, alpha=1.2e-5, kappa=12.04)
        fgm = FgmSpec(c, m, 2.0)

        def loads(Tc, Tm):
            s = integrate_section(fgm, ThermalState(Tc, Tm), H)
            return np.concatenate([s.NT, s.MT])

        a, b = loads(400.0, 300.0), loads(300.0, 350.0)
        both = loads(400.0, 350.0)
        np.testing.assert_allclose(both, a + b, rtol=1e-10, atol=1e-12 * np.max(np.abs(both)))
        np.testing.assert_allclose(loads(500.0, 300.0), 2 * a, rtol=1e-10)

    def test_graded_rule_refines_toward_metal_face(self):
        z, w = thickness_rule(H, 0.5, 20)
        assert np.sum(w) == pytest.approx(H)
        assert np.min(z) - (-H / 2) < 1e-12

    def test_rejects_bad_thickness(self):
        with pytest.raises(SectionError):
            integrate_section(HOMOGENEOUS, ThermalState(), 0.0)
