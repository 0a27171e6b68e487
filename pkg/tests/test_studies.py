import math
from pathlib import Path

import numpy as np
import pytest

from crackfgm.analysis import analyze
from crackfgm.material import FgmSpec, ThermalState, isotropic
from crackfgm.mesh import PlateGeometry
from crackfgm.studies import (
    RESULT_FIELDS,
    ConfigError,
    override_case,
    parse_config,
    parse_config_text,
    run_case,
    run_study,
    sample_mode_shape,
    export_mode_shape,
    write_outputs,
)

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

STEEL = """
materials.ceramic.E = 200e9
materials.ceramic.alpha = 1.0e-5
materials.ceramic.rho = 7800.0
materials.ceramic.kappa = 1.0
materials.ceramic.nu = 0.3
materials.metal.E = 200e9
materials.metal.alpha = 1.0e-5
materials.metal.rho = 7800.0
materials.metal.kappa = 1.0
materials.metal.nu = 0.3
materials.poisson = 0.3
"""


def config(extra="", base=STEEL):
    return parse_config_text(base + "geometry.a_h = 10.0\ncases.gradient_indices = 0.0\n" + extra)


class TestParsing:
    def test_minimal_defaults(self):
        cfg = parse_config(CONFIGS / "minimal.toml")
        assert cfg.T0 == 300.0
        assert cfg.mesh_level is None
        assert cfg.bc == ["SSSS"]
        assert cfg.thermal == [(300.0, 300.0)]
        assert cfg.a == 1.0
        assert cfg.ceramic.name == "steel"
        assert cfg.scheme == "ceramic"
        assert parse_config_text(STEEL + "geometry.a_h = 10.0\ncases.gradient_indices = 0.0\n").n_modes == 10

    def test_table1_grid(self):
        cfg = parse_config(CONFIGS / "table1_sweep.toml")
        cases = cfg.cases()
        assert len(cases) == 6 * 3 * 3 * 2 * 2 * 4 * 2
        assert [c.key for c in cases] == sorted(c.key for c in cases)
        assert {c.psi_deg for c in cases} == {0.0, 15.0, 30.0, 45.0}
        assert {c.bc for c in cases} == {"SSSS", "CCCC"}

    @pytest.mark.parametrize("name", sorted(p.name for p in CONFIGS.glob("*.toml")))
    def test_shipped_configs_parse(self, name):
        assert parse_config(CONFIGS / name).cases()

    @pytest.mark.parametrize(
        "extra, key",
        [
            ('geometry.psi_deg = "thirty"', "geometry.psi_deg[0]"),
            ("cases.crack_ratios = [0.2, -0.1]", "cases.crack_ratios[1]"),
            ('analysis.scheme = "plate"', "analysis.scheme"),
            ('cases.bc = ["SSSS", "SCSC"]', "cases.bc[1]"),
            ("analysis.n_modes = 0", "analysis.n_modes"),
            ("cases.thermal = [[400.0, 300.0, 1.0]]", "cases.thermal[0]"),
            ("geometry.a = -1.0", "geometry.a"),
        ],
    )
    def test_errors_name_the_key(self, extra, key):
        with pytest.raises(ConfigError, match=key.replace("[", r"\[").replace("]", r"\]")):
            config(extra)

    def test_missing_key(self):
        with pytest.raises(ConfigError, match="materials.metal.rho"):
            parse_config_text(STEEL.replace("materials.metal.rho = 7800.0", "") + "geometry.a_h = 10.0\ncases.gradient_indices = 0.0")

    def test_malformed_toml(self):
        with pytest.raises(ConfigError):
            parse_config_text("geometry.a_h = = 3")

    def test_relative_output_dir(self, tmp_path):
        path = tmp_path / "study.toml"
        path.write_text(STEEL + 'geometry.a_h = 10.0\ncases.gradient_indices = 0.0\noutput.dir = "out"\n')
        assert parse_config(path).output_dir == str(tmp_path / "out")

    def test_override(self):
        cfg = override_case(config("cases.crack_ratios = [0.0, 0.2]"), ca=0.4, tc=400.0, bc="CCCC")
        assert cfg.crack_ratios == [0.4] and cfg.thermal == [(400.0, 300.0)] and cfg.bc == ["CCCC"]


class TestRunStudy:
    def test_two_rows_for_two_modes(self):
        rows = run_study(config("analysis.n_modes = 2"))
        assert [r.mode_index for r in rows] == [1, 2]
        assert rows[0].Omega == pytest.approx(rows[0].omega_rad_s * math.sqrt(7800 * 0.1 / (200e9 * 0.001 / (12 * 0.91))))
        assert all(r.error == "" for r in rows)

    def test_failed_case_is_flagged(self, tmp_path):
        cfg = config("cases.thermal = [[300.0, 300.0], [2000.0, 2000.0]]\nanalysis.n_modes = 3\n")
        cfg.output_dir = str(tmp_path)
        rows = run_study(cfg)
        bad = [r for r in rows if r.error]
        assert len(bad) == 1 and "ThermalBuckling" in bad[0].error and bad[0].Omega is None
        assert len(rows) == 3 + 1
        results, table = write_outputs(cfg, rows)
        lines = Path(results).read_text().splitlines()
        assert lines[0] == ",".join(RESULT_FIELDS)
        assert len(lines) == 1 + len(rows)
        assert "error" in Path(table).read_text()

    def test_byte_identical_reruns(self, tmp_path):
        text = []
        for k in range(2):
            cfg = config("cases.crack_ratios = [0.0, 0.5]\nanalysis.n_modes = 3\n")
            cfg.output_dir = str(tmp_path / str(k))
            results, _ = write_outputs(cfg, run_study(cfg))
            text.append(Path(results).read_bytes())
        assert text[0] == text[1]

    def test_paper_table_layout(self, tmp_path):
        cfg = config("cases.crack_ratios = [0.0, 0.5]\nanalysis.n_modes = 3\n")
        cfg.output_dir = str(tmp_path)
        rows = run_study(cfg)
        _, table = write_outputs(cfg, rows)
        header, line = Path(table).read_text().splitlines()
        assert header.endswith("mode1_ca0,mode1_ca0.5,mode2_ca0,mode2_ca0.5")
        values = line.split(",")[-4:]
        assert values[0] == f"{rows[0].Omega:.3f}"
        assert all(len(v.split(".")[1]) == 3 for v in values)

    def test_mesh_dump(self, tmp_path):
        cfg = config("analysis.n_modes = 1\noutput.mesh_dump = true\n")
        cfg.output_dir = str(tmp_path)
        run_study(cfg)
        assert (tmp_path / "mesh_0.txt").exists()


class TestModeShape:
    def test_uncracked_first_mode_peaks_at_centre(self):
        cfg = config("analysis.n_modes = 1\n")
        grid = sample_mode_shape(run_case(cfg, cfg.cases()[0]), 1, 21)
        assert grid.shape == (441, 3)
        centre = np.flatnonzero(np.isclose(grid[:, 0], 0.5) & np.isclose(grid[:, 1], 0.5))
        assert grid[centre, 2] == pytest.approx(1.0)
        assert np.argmax(grid[:, 2]) == centre[0]
        x, y = grid[:, 0], grid[:, 1]
        np.testing.assert_allclose(grid[:, 2], np.sin(np.pi * x) * np.sin(np.pi * y), atol=0.01)

    def test_crack_opening_visible(self, tmp_path):
        cfg = config("cases.crack_ratios = 0.6\nanalysis.n_modes = 2\n")
        an = run_case(cfg, cfg.cases()[0])
        grid = export_mode_shape(an, 2, 21, tmp_path / "m.txt")
        lines = (tmp_path / "m.txt").read_text().splitlines()
        assert lines[0] == "# x y w" and len(lines) == 1 + len(grid)
        on_line = np.isclose(grid[:, 1], 0.5)
        xs, counts = np.unique(grid[on_line, 0], return_counts=True)
        twins = xs[counts == 2]
        assert len(twins) == 11  # grid columns strictly inside 0.2 < x < 0.8
        jumps = [abs(np.diff(grid[on_line & np.isclose(grid[:, 0], x), 2])[0]) for x in twins]
        assert max(jumps) > 1e-3

    def test_free_plate_rejected(self):
        steel = isotropic("s", 200e9, 0.3, 7800.0)
        an = analyze(FgmSpec(steel, steel, 0.0, 0.3), ThermalState(), PlateGeometry(), bc="FREE", n_modes=7)
        with pytest.raises(ValueError):
            sample_mode_shape(an, 7, 5)

    def test_mode_out_of_range(self):
        cfg = config("analysis.n_modes = 2\n")
        an = run_case(cfg, cfg.cases()[0])
        with pytest.raises(IndexError):
            sample_mode_shape(an, 3, 5)
        with pytest.raises(IndexError):
            sample_mode_shape(an, 0, 5)
