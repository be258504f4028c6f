"""Spectral entropy, its gradient maps, and the Bregman geometry of the
trace-one slice.

Run: python3 demos/02_entropy_and_divergence.py
"""

import math

import numpy as np

import symcone as sc

structure = sc.direct_sum(sc.soc(3), sc.psd(2))
r = structure.rank
e = sc.identity(structure)

# The barycenter e/r is the entropy minimizer on the slice, with value -ln r.
print(f"entropy at e/{r}: {sc.entropy(e / r):.6f}  (-ln r = {-math.log(r):.6f})")

# Gradient and inverse gradient are the spectral log/exp shifted by e.
rng = np.random.default_rng(1)
u = 0.9 * sc.random_trace_one(structure, rng) + 0.1 * (e / r)
g = sc.entropy_gradient(u)
back = sc.entropy_gradient_inverse(g)
print("gradient round trip error:", sc.norm(back - u))

# The divergence to the barycenter never exceeds ln r on the slice.
worst = max(sc.bregman(sc.random_trace_one(structure, rng), e / r) for _ in range(200))
print(f"max divergence to barycenter over 200 samples: {worst:.4f} <= ln r = {math.log(r):.4f}")

# Projecting onto the slice is a pure rescaling.
y = sc.exp_element(sc.random_bounded_loss(structure, rng))
p = sc.bregman_project_trace_one(y)
print("projection trace:", sc.trace(p), " equals y/tr(y):", sc.norm(p - y / sc.trace(y)))

# Level curves over the trace-one slice of soc(2): the slice is the half disk.
u1, u2, phi, breg = sc.soc2_level_curves(41)
inside = ~np.isnan(phi)
print("\nlevel-curve grid: {} points inside the half disk".format(int(inside.sum())))
imin = np.unravel_index(np.nanargmin(breg), breg.shape)
print("divergence minimum at u =", (u1[imin], u2[imin]), "(reference point (0.21, 0.28))")
imin = np.unravel_index(np.nanargmin(phi), phi.shape)
print("entropy minimum at u =", (u1[imin], u2[imin]), "(slice barycenter)")
