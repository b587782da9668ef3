"""The transported spin basis for two spin-1/2 particles.

Run:  python3 demos/03_two_spin_basis.py
"""
import numpy as np

from rp2spin import connection as conn
from rp2spin import twospin as ts
from rp2spin.geometry import DiscretePath, build_path

np.set_printoptions(precision=4, suppress=True)

# ten Schwinger states with two quanta in four modes
B = ts.schwinger_basis()
print("Gram matrix is identity:", np.allclose(B.conj().T @ B, np.eye(10)))

r = np.array([0.48, -0.36, 0.8])
th, ph = ts.spherical_angles(r)
print(f"\nW(theta={th:.3f}, phi={ph:.3f}) =\n", ts.w_matrix(th, ph))
print("\ntriplet projector P(J=1)(r):\n", ts.triplet_projector(r))

# exchange r -> -r flips the triplet and fixes the singlet
s, res = ts.exchange_signs(r)
print("\nexchange signs (J,m) =", dict(zip(ts.JM_LABELS, s.real)), f"residual {res:.1e}")

# the basis is parallel along curves
t = np.linspace(0, 1, 2001)
curve = np.stack([np.sin(2 * t), 0 * t, np.cos(2 * t)], axis=1)
print("parallel-transport residual:", ts.pt_condition_residual(DiscretePath(curve), t[1]))

# holonomy on the four-dimensional bundle around the generator of RP^2
loop = build_path("half-great-circle", {"start": r}, 2000)
print("\nholonomy matrix:\n", conn.holonomy_matrix(loop, ts.two_spin_field()).real)

# spin operators: rotate, transport back, differentiate
S3 = conn.local_spin_operator(ts.two_spin_field(), 3, [0, 0, 1])
print("\nS_3 at the north pole (numerical):\n", S3.real)
