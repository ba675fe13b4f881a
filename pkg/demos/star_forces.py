"""
Forces on a three-arm star
==========================

A massless scalar lives on three segments glued at one point. The far end
of every arm is held at Dirichlet or Neumann. We look at the force on
arm 1 as the other two arms shrink or grow together.
"""
import math

import numpy as np

from netcasimir import energy_star, force_star
from netcasimir.special import dilog

# %%
# Symmetric star: with equal arms the Dirichlet energy is -pi/16 and every
# arm feels -pi/48, while the Neumann star has no energy at all.
for bc in ("dirichlet", "neumann"):
    res = energy_star([1, 1, 1], bc, with_forces=True)
    print(f"{bc:9s}  W = {res.energy:+.12f}   F1 = {res.forces['E1']:+.12f}")
print("-pi/16 =", -math.pi / 16, "  -pi/48 =", -math.pi / 48)

# %%
# Sweep L2 = L3 from 0.05 to 50 with L1 = 1. Dirichlet arm 1 is always pulled
# in. For Neumann the sign flips once: short Neumann stubs leave arm 1 looking
# like a strip (attractive), long ones push it out.
grid = np.geomspace(0.05, 50, 25)
table = np.array([[force_star([1, x, x], bc, 0) for bc in ("dirichlet", "neumann")] for x in grid])
print("\n   L2=L3        F1 (D)          F1 (N)")
for x, (fd, fn) in zip(grid, table):
    print(f"{x:8.3f}  {fd:+.10f}  {fn:+.10f}")
s = np.sign(table[:, 1])
print("Neumann sign changes:", int(np.sum(s[1:] != s[:-1])))

# %%
# Both limits are known in closed form. Very long side arms give a
# dilogarithm, very thin ones give the strip force -pi/24.
for bc, x in (("dirichlet", 1 / 3), ("neumann", -1 / 3)):
    print(f"{bc:9s} long arms: {force_star([1, 1e6, 1e6], bc, 0):+.12f}"
          f"   -Li2({x:+.4f})/(4 pi) = {-dilog(x) / (4 * math.pi):+.12f}")
print(f"dirichlet thin arms: {force_star([1, 1e-6, 1e-6], 'dirichlet', 0):+.10f}   -pi/24 = {-math.pi / 24:+.10f}")
