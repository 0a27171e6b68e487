"""Sample the second mode of a cracked plate and look across the crack.

Points on the crack line are written twice, once per face, so the opening
shows up as two different w values at the same (x, y).
"""

import numpy as np

from crackfgm import SI3N4, SUS304, FgmSpec, PlateGeometry, ThermalState, analyze
from crackfgm.studies import sample_mode_shape

geometry = PlateGeometry(h=0.1, crack_ratio=0.6)
run = analyze(FgmSpec(SI3N4, SUS304, 0.0), ThermalState(600.0, 300.0), geometry, divisions=(20, 20), n_modes=2)
grid = sample_mode_shape(run, mode_index=2, resolution=21)

on_crack = np.isclose(grid[:, 1], 0.5)
xs, counts = np.unique(grid[on_crack, 0], return_counts=True)
print("x      w (lower face)  w (upper face)")
for x in xs[counts == 2]:
    lower, upper = grid[on_crack & np.isclose(grid[:, 0], x), 2]
    print(f"{x:.2f}   {lower:+.4f}         {upper:+.4f}")
