"""Heating the ceramic face: prestress, frequency drop and buckling.

The thermal resultants are found with a static solve first, then enter the
eigenproblem through the geometric stiffness.  Past the critical
temperature the stiffness turns indefinite and the analysis raises.
"""

from crackfgm import SI3N4, SUS304, FgmSpec, PlateGeometry, ThermalBucklingError, ThermalState, analyze

fgm = FgmSpec(SI3N4, SUS304, 1.0)
geometry = PlateGeometry(h=0.05)  # a/h = 20

for Tc in (300.0, 400.0, 600.0, 800.0, 1000.0):
    try:
        run = analyze(fgm, ThermalState(Tc, 300.0), geometry, n_modes=1)
    except ThermalBucklingError as exc:
        print(f"Tc = {Tc:.0f} K: buckled (lowest eigenvalue {exc.eigenvalue:.3g})")
        continue
    Nxx = run.prestress.resultants[..., 0].mean() if run.prestress is not None else 0.0
    print(f"Tc = {Tc:.0f} K: Omega_1 = {run.result.Omega['ceramic'][0]:.3f}, mean Nxx = {Nxx:.3e} N/m")
