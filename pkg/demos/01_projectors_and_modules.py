"""The spin-1 vector psi, its projector p, and the even/odd module isomorphism.

Run:  python3 demos/01_projectors_and_modules.py
"""
import numpy as np

from rp2spin import scalar
from rp2spin.geometry import SU2Element, rotate, wigner_d1
from rp2spin.sections import SampledSection, paired_points

rng = np.random.default_rng(1)

# psi is odd, so the projector p = psi psi^dagger only depends on the line [x]
x = np.array([0.36, 0.48, 0.8])
print("psi(x)        ", np.round(scalar.psi(x), 4))
print("psi(-x)       ", np.round(scalar.psi(-x), 4))
print("|p(-x) - p(x)|", np.abs(scalar.grassmann_projector(-x) - scalar.grassmann_projector(x)).max())

# one constant unitary carries p to the real projector q = x x^T
C = scalar.real_intertwiner()
print("\nintertwiner C with q = C^dagger p C:\n", np.round(C, 4))

# rotating the point is the same as acting with the spin-1 matrix
g = SU2Element.from_axis_angle([1, 1, 0], 0.9)
print("\n|D(g) psi(x) - psi(g x)| =",
      np.linalg.norm(wigner_d1(g) @ scalar.psi(x) - scalar.psi(rotate(g, x))))

# even C^3-valued sections and odd scalars are the same module
pts = paired_points(rng, 500)
f = SampledSection.from_function(pts, lambda y: np.stack([y[:, 0] ** 2, y[:, 0] * y[:, 1],
                                                          1 + 0 * y[:, 2]], axis=1))
g_odd = scalar.iso_forward(f)
print("\nforward image is odd:", g_odd.is_odd())
back = scalar.iso_backward(g_odd)
pf = np.einsum("nij,nj->ni", scalar.grassmann_projector(pts), f.values)
print("backward(forward(f)) = p f, residual", np.abs(back.values - pf).max())
