"""Configuration-driven parameter studies and their CSV / grid output.

Configuration files are TOML written as flat dotted key paths, one value or
list per key.  Every list-valued key also accepts a single scalar.

==============================  ==========================================
key                             meaning
==============================  ==========================================
materials.ceramic.name          label
materials.ceramic.E             modulus: number, or [P0, P-1, P1, P2, P3]
materials.ceramic.alpha         expansion: number or coefficient list
materials.ceramic.rho           density (kg/m^3)
materials.ceramic.kappa         conductivity (W/mK)
materials.ceramic.nu            Poisson ratio
materials.metal.*               same fields for the metal phase
materials.poisson               constant nu, or "mori-tanaka" (default 0.28)
geometry.a                      plate length in m (default 1.0)
geometry.a_b                    aspect ratios a/b
geometry.a_h                    side-to-thickness ratios a/h
geometry.psi_deg                skew angles in degrees (default 0)
cases.crack_ratios              c/a values (default 0)
cases.gradient_indices          gradient indices n
cases.thermal                   [Tc, Tm] pairs in K (default [[300, 300]])
cases.T0                        stress-free temperature (default 300)
cases.bc                        "SSSS" and/or "CCCC" (default "SSSS")
analysis.mesh_level             element divisions (default 16 cracked, 8 not)
analysis.n_modes                modes per case (default 10)
analysis.scheme                 ceramic | metal_h | metal_a2h
analysis.skew_frame             edge | global (default edge)
analysis.ceramic_modulus        base | T_ref (default base)
analysis.n_gauss                thickness quadrature order (default 20)
output.dir                      output directory (default "results")
output.paper_modes              modes shown in paper_table.csv (default 2)
output.mesh_dump                write mesh_<case>.txt per case (default false)
==============================  ==========================================
"""

from __future__ import annotations

import csv
import itertools
import logging
import math
import os
import sys
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence

import numpy as np

from .analysis import Analysis, analyze, default_divisions
from .material import FgmSpec, MaterialError, PhaseMaterial, TemperatureCoefficients, ThermalState
from .mesh import PlateGeometry
from .element import NDOF
from .solver import SCHEMES

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

log = logging.getLogger(__name__)

BCS = ("SSSS", "CCCC")
RESULT_FIELDS = [
    "case_id", "a_b", "a_h", "n", "c_a", "psi_deg", "Tc", "Tm", "bc",
    "mode_index", "omega_rad_s", "Omega", "scheme", "error",
]


class ConfigError(ValueError):
    """Malformed study configuration; the message names the key path."""


@dataclass(frozen=True)
class CaseSpec:
    a_b: float
    a_h: float
    n: float
    c_a: float
    psi_deg: float
    Tc: float
    Tm: float
    bc: str

    @property
    def key(self):
        return (self.a_b, self.a_h, self.n, self.c_a, self.psi_deg, self.Tc, self.Tm, self.bc)


@dataclass
class StudyConfig:
    ceramic: PhaseMaterial
    metal: PhaseMaterial
    poisson: object = 0.28
    a: float = 1.0
    a_b: List[float] = field(default_factory=lambda: [1.0])
    a_h: List[float] = field(default_factory=lambda: [10.0])
    psi_deg: List[float] = field(default_factory=lambda: [0.0])
    crack_ratios: List[float] = field(default_factory=lambda: [0.0])
    gradient_indices: List[float] = field(default_factory=lambda: [0.0])
    thermal: List[tuple] = field(default_factory=lambda: [(300.0, 300.0)])
    T0: float = 300.0
    bc: List[str] = field(default_factory=lambda: ["SSSS"])
    mesh_level: Optional[int] = None
    n_modes: int = 10
    scheme: str = "ceramic"
    skew_frame: str = "edge"
    ceramic_modulus: str = "base"
    n_gauss: int = 20
    output_dir: str = "results"
    paper_modes: int = 2
    mesh_dump: bool = False

    def cases(self) -> List[CaseSpec]:
        """Full case grid in lexicographic order."""
        grid = itertools.product(
            self.a_b, self.a_h, self.gradient_indices, self.crack_ratios,
            self.psi_deg, self.thermal, self.bc,
        )
        cases = {
            CaseSpec(ab, ah, n, ca, psi, float(T[0]), float(T[1]), bc)
            for ab, ah, n, ca, psi, T, bc in grid
        }
        return sorted(cases, key=lambda c: c.key)

    def fgm(self, n: float) -> FgmSpec:
        return FgmSpec(self.ceramic, self.metal, n, self.poisson)

    def geometry(self, case: CaseSpec) -> PlateGeometry:
        return PlateGeometry(
            a=self.a,
            b=self.a / case.a_b,
            h=self.a / case.a_h,
            psi=math.radians(case.psi_deg),
            crack_ratio=case.c_a,
        )


@dataclass
class ResultRow:
    case_id: int
    a_b: float
    a_h: float
    n: float
    c_a: float
    psi_deg: float
    Tc: float
    Tm: float
    bc: str
    mode_index: Optional[int]
    omega_rad_s: Optional[float]
    Omega: Optional[float]
    scheme: str
    error: str = ""


# --------------------------------------------------------------------------
# parsing


def _get(tree, path, default=KeyError):
    node = tree
    for part in path.split("."):
        if not isinstance(node, dict) or part not in node:
            if default is KeyError:
                raise ConfigError(f"missing required key '{path}'")
            return default
        node = node[part]
    return node


def _number(value, path, positive=False, nonneg=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{path}' must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"'{path}' must be finite")
    if positive and value <= 0:
        raise ConfigError(f"'{path}' must be positive, got {value}")
    if nonneg and value < 0:
        raise ConfigError(f"'{path}' must be non-negative, got {value}")
    return value


def _number_list(value, path, **kw):
    items = value if isinstance(value, list) else [value]
    if not items:
        raise ConfigError(f"'{path}' must not be empty")
    return [_number(v, f"{path}[{i}]", **kw) for i, v in enumerate(items)]


def _coefficients(value, path):
    if isinstance(value, list):
        nums = _number_list(value, path)
        if not 1 <= len(nums) <= 5:
            raise ConfigError(f"'{path}' takes 1 to 5 coefficients [P0, P-1, P1, P2, P3]")
        nums = nums + [0.0] * (5 - len(nums))
        if nums[0] <= 0:
            raise ConfigError(f"'{path}[0]' (P0) must be positive")
        return TemperatureCoefficients(*nums)
    return TemperatureCoefficients.constant(_number(value, path, positive=True))


def _phase(tree, which):
    base = f"materials.{which}"
    try:
        return PhaseMaterial(
            name=str(_get(tree, f"{base}.name", which)),
            E_coeffs=_coefficients(_get(tree, f"{base}.E"), f"{base}.E"),
            alpha_coeffs=_coefficients(_get(tree, f"{base}.alpha"), f"{base}.alpha"),
            rho=_number(_get(tree, f"{base}.rho"), f"{base}.rho", positive=True),
            kappa=_number(_get(tree, f"{base}.kappa"), f"{base}.kappa", positive=True),
            nu=_number(_get(tree, f"{base}.nu"), f"{base}.nu"),
        )
    except MaterialError as exc:
        raise ConfigError(f"'{base}': {exc}") from exc


def _choice(value, path, allowed):
    if value not in allowed:
        raise ConfigError(f"'{path}' must be one of {', '.join(allowed)}; got {value!r}")
    return value


def config_from_dict(tree: dict) -> StudyConfig:
    """Validate a parsed TOML tree and fill defaults."""
    poisson = _get(tree, "materials.poisson", 0.28)
    if isinstance(poisson, str):
        _choice(poisson, "materials.poisson", ("mori-tanaka",))
    else:
        poisson = _number(poisson, "materials.poisson")
        if not 0 < poisson < 0.5:
            raise ConfigError("'materials.poisson' must lie in (0, 0.5)")

    thermal_raw = _get(tree, "cases.thermal", [[300.0, 300.0]])
    if not isinstance(thermal_raw, list) or not thermal_raw:
        raise ConfigError("'cases.thermal' must be a non-empty list of [Tc, Tm] pairs")
    if not isinstance(thermal_raw[0], list):
        thermal_raw = [thermal_raw]
    thermal = []
    for i, pair in enumerate(thermal_raw):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ConfigError(f"'cases.thermal[{i}]' must be a [Tc, Tm] pair")
        thermal.append(tuple(_number_list(pair, f"cases.thermal[{i}]", positive=True)))

    bc_raw = _get(tree, "cases.bc", ["SSSS"])
    bcs = bc_raw if isinstance(bc_raw, list) else [bc_raw]
    if not bcs:
        raise ConfigError("'cases.bc' must not be empty")
    bcs = [_choice(str(b).upper(), f"cases.bc[{i}]", BCS) for i, b in enumerate(bcs)]

    crack = _number_list(_get(tree, "cases.crack_ratios", [0.0]), "cases.crack_ratios", nonneg=True)
    for i, c in enumerate(crack):
        if c >= 1:
            raise ConfigError(f"'cases.crack_ratios[{i}]' must be below 1")
    psi = _number_list(_get(tree, "geometry.psi_deg", [0.0]), "geometry.psi_deg", nonneg=True)
    for i, p in enumerate(psi):
        if p >= 90:
            raise ConfigError(f"'geometry.psi_deg[{i}]' must be below 90")

    level = _get(tree, "analysis.mesh_level", None)
    if level is not None:
        level = int(_number(level, "analysis.mesh_level", positive=True))
    n_modes = int(_number(_get(tree, "analysis.n_modes", 10), "analysis.n_modes", positive=True))

    return StudyConfig(
        ceramic=_phase(tree, "ceramic"),
        metal=_phase(tree, "metal"),
        poisson=poisson,
        a=_number(_get(tree, "geometry.a", 1.0), "geometry.a", positive=True),
        a_b=_number_list(_get(tree, "geometry.a_b", [1.0]), "geometry.a_b", positive=True),
        a_h=_number_list(_get(tree, "geometry.a_h"), "geometry.a_h", positive=True),
        psi_deg=psi,
        crack_ratios=crack,
        gradient_indices=_number_list(_get(tree, "cases.gradient_indices"), "cases.gradient_indices", nonneg=True),
        thermal=thermal,
        T0=_number(_get(tree, "cases.T0", 300.0), "cases.T0", positive=True),
        bc=bcs,
        mesh_level=level,
        n_modes=n_modes,
        scheme=_choice(_get(tree, "analysis.scheme", "ceramic"), "analysis.scheme", SCHEMES),
        skew_frame=_choice(_get(tree, "analysis.skew_frame", "edge"), "analysis.skew_frame", ("edge", "global")),
        ceramic_modulus=_choice(
            _get(tree, "analysis.ceramic_modulus", "base"), "analysis.ceramic_modulus", ("base", "T_ref")
        ),
        n_gauss=int(_number(_get(tree, "analysis.n_gauss", 20), "analysis.n_gauss", positive=True)),
        output_dir=str(_get(tree, "output.dir", "results")),
        paper_modes=int(_number(_get(tree, "output.paper_modes", 2), "output.paper_modes", positive=True)),
        mesh_dump=bool(_get(tree, "output.mesh_dump", False)),
    )


def parse_config_text(text: str) -> StudyConfig:
    try:
        tree = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed configuration: {exc}") from exc
    return config_from_dict(tree)


def parse_config(path) -> StudyConfig:
    """Read and validate a study configuration file.

    Relative ``output.dir`` paths are resolved against the file's directory.
    """
    with open(path, "rb") as fh:
        raw = fh.read()
    config = parse_config_text(raw.decode("utf-8"))
    if not os.path.isabs(config.output_dir):
        config.output_dir = os.path.normpath(os.path.join(os.path.dirname(os.path.abspath(path)), config.output_dir))
    return config


# --------------------------------------------------------------------------
# running


def run_case(config: StudyConfig, case: CaseSpec) -> Analysis:
    geometry = config.geometry(case)
    divisions = default_divisions(geometry, config.mesh_level)
    return analyze(
        config.fgm(case.n),
        ThermalState(case.Tc, case.Tm, config.T0),
        geometry,
        bc=case.bc,
        divisions=divisions,
        n_modes=config.n_modes,
        n_gauss=config.n_gauss,
        skew_frame=config.skew_frame,
        ceramic_modulus=config.ceramic_modulus,
    )


def _rows_for(case_id: int, case: CaseSpec, config: StudyConfig, analysis: Optional[Analysis], error: str = ""):
    common = dict(
        case_id=case_id, a_b=case.a_b, a_h=case.a_h, n=case.n, c_a=case.c_a,
        psi_deg=case.psi_deg, Tc=case.Tc, Tm=case.Tm, bc=case.bc, scheme=config.scheme,
    )
    if analysis is None:
        return [ResultRow(mode_index=None, omega_rad_s=None, Omega=None, error=error, **common)]
    res = analysis.result
    return [
        ResultRow(mode_index=k + 1, omega_rad_s=float(w), Omega=float(O), **common)
        for k, (w, O) in enumerate(zip(res.omegas, res.Omega[config.scheme]))
    ]


def run_study(config: StudyConfig, cases: Optional[Sequence[CaseSpec]] = None, keep: bool = False):
    """Run every case; failing cases yield one flagged row and the sweep continues.

    Returns the result rows, plus the list of analyses when ``keep`` is set.
    """
    cases = config.cases() if cases is None else list(cases)
    rows: List[ResultRow] = []
    kept = []
    for case_id, case in enumerate(cases):
        try:
            analysis = run_case(config, case)
        except Exception as exc:  # recorded per case, the sweep goes on
            log.warning("case %d %s failed: %s", case_id, case, exc)
            rows.extend(_rows_for(case_id, case, config, None, f"{type(exc).__name__}: {exc}"))
            kept.append(None)
            continue
        rows.extend(_rows_for(case_id, case, config, analysis))
        if config.mesh_dump:
            os.makedirs(config.output_dir, exist_ok=True)
            analysis.mesh.dump(os.path.join(config.output_dir, f"mesh_{case_id}.txt"))
        kept.append(analysis if keep else None)
        log.info("case %d/%d done", case_id + 1, len(cases))
    return (rows, kept) if keep else rows


def _fmt(value, digits=9):
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return f"{float(value):.{digits}g}"


def write_results(rows: Sequence[ResultRow], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULT_FIELDS)
        for row in rows:
            writer.writerow([_fmt(getattr(row, name)) for name in RESULT_FIELDS])


def write_paper_table(rows: Sequence[ResultRow], path, n_modes: int = 2) -> None:
    """Reference-table layout: one line per (a/b, a/h, bc, Tc, Tm, psi, n), columns per mode and c/a."""
    cracks = sorted({r.c_a for r in rows})
    header = ["a_b", "a_h", "bc", "Tc", "Tm", "psi_deg", "n"]
    header += [f"mode{k}_ca{c:g}" for k in range(1, n_modes + 1) for c in cracks]
    table = {}
    for r in rows:
        key = (r.a_b, r.a_h, r.bc, r.Tc, r.Tm, r.psi_deg, r.n)
        cells = table.setdefault(key, {})
        if r.mode_index is not None and r.mode_index <= n_modes:
            cells[(r.mode_index, r.c_a)] = f"{r.Omega:.3f}"
        elif r.mode_index is None:
            for k in range(1, n_modes + 1):
                cells[(k, r.c_a)] = "error"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for key in sorted(table, key=lambda k: (k[0], k[1], k[2], k[3], k[4], k[5], k[6])):
            a_b, a_h, bc, Tc, Tm, psi, n = key
            line = [_fmt(a_b), _fmt(a_h), bc, _fmt(Tc), _fmt(Tm), _fmt(psi), _fmt(n)]
            line += [table[key].get((k, c), "") for k in range(1, n_modes + 1) for c in cracks]
            writer.writerow(line)


def write_outputs(config: StudyConfig, rows: Sequence[ResultRow]) -> tuple:
    os.makedirs(config.output_dir, exist_ok=True)
    results = os.path.join(config.output_dir, "results.csv")
    table = os.path.join(config.output_dir, "paper_table.csv")
    write_results(rows, results)
    write_paper_table(rows, table, config.paper_modes)
    return results, table


def override_case(config: StudyConfig, **values) -> StudyConfig:
    """Copy of ``config`` restricted to single values for the given axes."""
    mapping = {
        "n": "gradient_indices", "ca": "crack_ratios", "psi": "psi_deg",
        "a_b": "a_b", "a_h": "a_h", "bc": "bc",
    }
    changes = {}
    for key, value in values.items():
        if value is None:
            continue
        if key in mapping:
            changes[mapping[key]] = [value]
    Tc, Tm = values.get("tc"), values.get("tm")
    if Tc is not None or Tm is not None:
        base = config.thermal[0]
        changes["thermal"] = [(Tc if Tc is not None else base[0], Tm if Tm is not None else base[1])]
    return replace(config, **changes)


# --------------------------------------------------------------------------
# mode shapes


def sample_mode_shape(analysis: Analysis, mode_index: int, resolution: int = 41) -> np.ndarray:
    """``(x, y, w)`` samples of one mode on a regular planform grid.

    ``mode_index`` is 1-based.  Values are scaled so that max |w| = 1.  Grid
    points on an open crack are emitted twice, lower face first.
    """
    if analysis.bc == "FREE":
        raise ValueError("mode shape export needs a supported plate (bc is FREE)")
    n_avail = analysis.result.vectors.shape[1]
    if not 1 <= mode_index <= n_avail:
        raise IndexError(f"mode index {mode_index} out of range 1..{n_avail}")
    if resolution < 2:
        raise ValueError("resolution must be at least 2")

    from .element import shape_functions

    mesh, geo = analysis.mesh, analysis.geometry
    w_nodes = analysis.result.modes[2::NDOF, mode_index - 1]
    dx, dy = geo.a / mesh.nx, geo.b / mesh.ny
    c = geo.crack_ratio * geo.a
    x_lo, x_hi = (geo.a - c) / 2, (geo.a + c) / 2

    samples = []

    def value(ex, ey, X, Y):
        xi = 2.0 * (X - ex * dx) / dx - 1.0
        eta = 2.0 * (Y - ey * dy) / dy - 1.0
        N, _ = shape_functions(xi, eta)
        return float(N @ w_nodes[mesh.elements[ey * mesh.nx + ex]])

    for Y in np.linspace(0.0, geo.b, resolution):
        for X in np.linspace(0.0, geo.a, resolution):
            ex = min(int(X / dx), mesh.nx - 1)
            ey = min(int(Y / dy), mesh.ny - 1)
            x, y = geo.map(X, Y)
            tol = 1e-12 * geo.a
            on_crack = c > 0 and abs(Y - geo.b / 2) < 1e-12 * geo.b and x_lo + tol < X < x_hi - tol
            if on_crack:
                samples.append((x, y, value(ex, mesh.ny // 2 - 1, X, Y)))
                samples.append((x, y, value(ex, mesh.ny // 2, X, Y)))
            else:
                samples.append((x, y, value(ex, ey, X, Y)))

    grid = np.array(samples, dtype=float)
    k = np.argmax(np.abs(grid[:, 2]))
    grid[:, 2] /= grid[k, 2]
    return grid


def export_mode_shape(analysis: Analysis, mode_index: int, resolution: int, path) -> np.ndarray:
    """Write ``x y w`` lines for one mode; returns the sampled grid."""
    grid = sample_mode_shape(analysis, mode_index, resolution)
    with open(path, "w") as fh:
        fh.write("# x y w\n")
        for x, y, w in grid:
            fh.write(f"{x:.9g} {y:.9g} {w:.9g}\n")
    return grid
