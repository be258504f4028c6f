"""Tour of the algebra kernel: structures, products, spectra, cone order.

Run: python3 demos/01_jordan_algebra_basics.py
"""

import numpy as np

import symcone as sc

# A direct sum mixing all three primitive block kinds.
structure = sc.direct_sum(sc.orthant(3), sc.soc(2), sc.psd(2))
print(f"structure: {structure}  (rank {structure.rank}, ambient dim {structure.ambient_dim})")

e = sc.identity(structure)
print("identity blocks:", [b.tolist() for b in e.blocks])
print("trace of identity = rank:", sc.trace(e))

# Worked second-order-cone product: (x, s) o (x', s') = (s x' + s' x, x.x' + s s').
s2 = sc.soc(2)
x = sc.element(s2, [np.array([1.0, 0.0, 2.0])])
y = sc.element(s2, [np.array([0.0, 1.0, 3.0])])
print("\nsoc product ((1,0),2) o ((0,1),3):", sc.jordan_product(x, y).blocks[0])
print("inner product (twice the Euclidean one):", sc.inner(x, y))

# Spectral decomposition of ((3,4),10): eigenvalues s +- ||x||.
z = sc.element(s2, [np.array([3.0, 4.0, 10.0])])
dec = sc.spectral_decompose(z)
print("\neigenvalues of ((3,4),10):", dec.eigenvalues)
print("frame vectors:", [q.blocks[0].tolist() for q in dec.frame])

# Spectral maps: exp and ln are inverse bijections between algebra and cone interior.
rng = np.random.default_rng(0)
w = sc.random_bounded_loss(structure, rng)
roundtrip = sc.ln_element(sc.exp_element(w))
print("\n||ln(exp(w)) - w|| =", sc.norm(roundtrip - w))

# Cone order: every bounded loss sits between -e and e.
print("-e <= w <= e:", sc.cone_leq(-1.0 * e, w) and sc.cone_leq(w, e))
print("min/max eigenvalues of w:", sc.min_eigenvalue(w), sc.max_eigenvalue(w))

# JSON round trip preserves every coefficient exactly.
blob = sc.element_to_json(w)
w2 = sc.element_from_json(structure, blob)
print("serialization exact:", all(np.array_equal(a, b) for a, b in zip(w.blocks, w2.blocks)))
