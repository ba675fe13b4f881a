"""
Stars of plates in d dimensions
===============================

Each arm becomes a slab with d-2 flat transverse directions. Energies are
per unit transverse area and forces become pressures.
"""
import numpy as np

from netcasimir import energy_per_area_star, plate_coefficient, pressure_star
from netcasimir.oracle import pressure_appendix

# %%
# Parallel-plate coefficients, W/A = c/L^(d-1).
for d in (2, 3, 4, 5, 6):
    print(f"d={d}  c_D = {plate_coefficient(d, 'dirichlet'):+.10f}   c_N = {plate_coefficient(d, 'neumann'):+.10f}")

# %%
# The pressure on arm 1 from two routes: the main engine, and a pole sum plus
# a contour remainder evaluated with QUADPACK.
lengths = [1.0, 0.6, 1.7]
for d in (2, 4, 6):
    P = pressure_star(d, lengths, "neumann", 0)
    print(f"d={d}  engine {P:+.14f}   pole/contour {pressure_appendix(d, lengths, 'neumann', 0):+.14f}")

# %%
# The identity (d-1) W/A = sum_i P_i L_i holds for every d.
res = energy_per_area_star(4, lengths, "dirichlet", with_pressures=True)
print("residual", abs(3 * res.energy_per_area - sum(P * L for P, L in zip(res.pressures.values(), lengths))))

# %%
# Neumann pressure on arm 1 as the side arms change: it changes sign once,
# just as in d=2, near L2=L3 = 0.50 (d=3) and 0.34 (d=4).
grid = np.geomspace(0.05, 50, 13)
for d in (3, 4):
    vals = [pressure_star(d, [1, x, x], "neumann", 0) for x in grid]
    print(f"d={d}", " ".join(f"{v:+.4f}" for v in vals))
