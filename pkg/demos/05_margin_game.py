"""The l2-l1 margin game: simplex weights versus the ball learner, with
equilibrium certificates.

Run: python3 demos/05_margin_game.py
"""

import numpy as np

import symcone as sc
from symcone.harness import instance_rng

n, d = 1000, 5
inst = sc.generate_svm_instance(n, d, margin=0.1, rng=instance_rng(21, 0))
print(f"instance: {n} points in R^{d}, generated margin {inst.generated_margin:.4f}")
print("row norms <= 1:", bool(np.all(np.linalg.norm(inst.points, axis=1) <= 1 + 1e-12)))

for T in (100, 1000):
    tr = sc.svm_game_run(inst, T)
    print(
        f"T={T:5d}: attained margin {tr.attained_margin:.4f} "
        f"(ratio {tr.attained_margin / inst.generated_margin:.3f})  "
        f"value bracket [{tr.simplex_value:.4f}, {tr.ball_value:.4f}]  "
        f"gap {tr.nash_gap:.4f}  guarantee 2*eps = {2 * sc.nash_epsilon(T, n):.4f}"
    )

# Horizon needed for a 0.02-accurate equilibrium with n = 1000 points.
print("\nhorizon required for a 0.02 gap:", sc.required_horizon(0.02, n))
print("cosine(learned, generating) at T=1000:", round(
    float(
        np.dot(tr.x_bar, inst.direction)
        / (np.linalg.norm(tr.x_bar) * np.linalg.norm(inst.direction))
    ),
    6,
))
