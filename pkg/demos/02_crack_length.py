"""How a centre crack softens a graded Si3N4/SUS304 plate.

Longer cracks and more metal (larger n) both lower the fundamental
frequency; the second mode, which opens the crack, drops fastest.
"""

from crackfgm import SI3N4, SUS304, FgmSpec, PlateGeometry, ThermalState, analyze, default_divisions

print("n     c/a   Omega_1   Omega_2")
for n in (0.0, 1.0, 5.0):
    for c in (0.0, 0.2, 0.4, 0.6):
        geometry = PlateGeometry(h=0.1, crack_ratio=c)
        run = analyze(FgmSpec(SI3N4, SUS304, n), ThermalState(), geometry, divisions=default_divisions(geometry), n_modes=2)
        w1, w2 = run.result.Omega["ceramic"]
        print(f"{n:<5g} {c:<5g} {w1:8.3f}  {w2:8.3f}")
