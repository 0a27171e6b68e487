"""A thin steel plate, simply supported on all four edges.

The Mindlin element should approach the classical thin-plate result
Omega = 2 pi^2 as the plate gets thinner, without locking.
"""

import math

from crackfgm import FgmSpec, PlateGeometry, ThermalState, analyze, isotropic

steel = isotropic("steel", 200e9, 0.3, 7800.0)
plate = FgmSpec(steel, steel, n=0.0, poisson=0.3)

print("a/h     Omega_1    thin-plate limit")
for a_h in (10, 100, 1000):
    run = analyze(plate, ThermalState(), PlateGeometry(h=1.0 / a_h), divisions=(16, 16), n_modes=1)
    print(f"{a_h:<6d}  {run.result.Omega['ceramic'][0]:.4f}    {2 * math.pi**2:.4f}")
