"""Parallel transport along loops in RP^2: flat, but with holonomy -1.

Run:  python3 demos/02_flat_transport_and_holonomy.py
"""
import numpy as np

from rp2spin import connection as conn
from rp2spin.geometry import build_path

north = [0.0, 0.0, 1.0]
q = conn.real_field()

# half a great circle from x to -x is a closed loop in RP^2 that cannot be shrunk
for n in (100, 1000, 10000):
    loop = build_path("half-great-circle", {"start": north}, n)
    res = conn.holonomy_result(loop, q)
    print(f"generator loop, {n:5d} steps: phase {res.phase.real:+.6f}, "
          f"raw product error {abs(res.raw_overlap + 1):.2e}")

# a small circle bounds a disk, so it must come back to +1
small = build_path("small-circle", {"axis": north, "rho": 0.1}, 1000)
print("\ncontractible loop phase:", conn.holonomy(small, q))

# curvature: phase per enclosed area vanishes for q, but not for the monopole bundle
for rho in (0.2, 0.1, 0.05):
    flat = conn.curvature_probe(north, rho, q).phase_per_area
    bloch = conn.curvature_probe(north, rho, conn.bloch_field()).phase_per_area
    print(f"rho {rho:4}: phase/area  q {flat:+.1e}   Bloch {bloch:+.6f}")

# rotating a point and transporting back measures the fiber's spin, which is zero here
S = conn.local_spin_operator(q, 3, [0.6, 0.0, 0.8])
print("\nlocal spin on the scalar bundle:", np.abs(S).max())
