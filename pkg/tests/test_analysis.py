import math

import numpy as np
import pytest

from crackfgm.analysis import analyze, default_divisions
from crackfgm.material import SI3N4, SUS304, FgmSpec, ThermalState
from crackfgm.mesh import PlateGeometry


@pytest.mark.parametrize(
    "crack, level, expected",
    [(0.0, None, (8, 8)), (0.5, None, (16, 16)), (0.2, None, (20, 20)), (0.0, 16, (16, 16)), (0.6, 16, (20, 20))],
)
def test_default_divisions(crack, level, expected):
    assert default_divisions(PlateGeometry(crack_ratio=crack), level) == expected


def test_temperature_lowers_frequency():
    fgm = FgmSpec(SI3N4, SUS304, 1.0)
    omegas = [
        analyze(fgm, ThermalState(Tc, 300.0), PlateGeometry(), n_modes=2).result.Omega["ceramic"][0]
        for Tc in (300.0, 400.0, 600.0)
    ]
    assert omegas[0] > omegas[1] > omegas[2]


def test_prestress_is_compressive_under_heating():
    an = analyze(FgmSpec(SI3N4, SUS304, 2.0), ThermalState(600.0, 300.0), PlateGeometry(), n_modes=2)
    N = an.prestress.resultants
    assert np.mean(N[..., 0]) < 0 and np.mean(N[..., 1]) < 0


def test_skew_frames_agree_for_clamped_edges():
    geo = PlateGeometry(psi=math.radians(30))
    fgm = FgmSpec(SI3N4, SUS304, 0.0)
    a = analyze(fgm, ThermalState(), geo, bc="CCCC", n_modes=3, skew_frame="edge")
    b = analyze(fgm, ThermalState(), geo, bc="CCCC", n_modes=3, skew_frame="global")
    np.testing.assert_allclose(a.result.omegas, b.result.omegas, rtol=1e-9)


def test_rectangular_plate_ignores_skew_frame():
    fgm = FgmSpec(SI3N4, SUS304, 0.5)
    a = analyze(fgm, ThermalState(), PlateGeometry(), n_modes=3, skew_frame="edge")
    b = analyze(fgm, ThermalState(), PlateGeometry(), n_modes=3, skew_frame="global")
    np.testing.assert_array_equal(a.result.omegas, b.result.omegas)


def test_unknown_skew_frame():
    with pytest.raises(ValueError):
        analyze(FgmSpec(SI3N4, SUS304, 0.0), ThermalState(), PlateGeometry(), skew_frame="local")


def test_all_schemes_reported():
    an = analyze(FgmSpec(SI3N4, SUS304, 1.0), ThermalState(), PlateGeometry(), n_modes=2)
    assert set(an.result.Omega) == {"ceramic", "metal_h", "metal_a2h"}
    assert an.bc == "SSSS"
