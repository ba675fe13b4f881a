"""
A tree and a loop
=================

Graphs beyond stars go through the general engine, which builds the
junction matrix and integrates its log-derivative on the imaginary axis.
"""
import math

from netcasimir import conformal_residual, energy_general, force_general, preset_circle, preset_loop4, preset_tree5

# %%
# With all edges of length L the energy is a pure number over L.
for name, make, n in (("tree5", preset_tree5, 5), ("loop4", preset_loop4, 4)):
    for bc in ("dirichlet", "neumann"):
        g = make([1.0] * n, bc)
        res = energy_general(g, with_forces=True)
        print(f"{name} {bc:9s} W*L = {res.energy:+.8f}   |W - sum F L| = {conformal_residual(g, res):.1e}")

# %%
# Degenerations. Pinching the two middle edges of the loop leaves a strip for
# E1, so the force on it approaches -pi/24. A single closed edge is a circle
# with energy -pi/(6L).
for bc in ("dirichlet", "neumann"):
    F = force_general(preset_loop4([0.5, 1e-4, 1e-4, 0.5], bc), "E1")
    print(f"pinched loop {bc:9s} F1 = {F:+.6f}   (-pi/24 = {-math.pi / 24:+.6f})")
print(f"circle L=1  W = {energy_general(preset_circle(1.0)).energy:+.10f}   (-pi/6 = {-math.pi / 6:+.10f})")
