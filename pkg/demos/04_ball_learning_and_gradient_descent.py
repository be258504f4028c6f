"""Online linear optimization over the unit ball: the tanh-based learner,
its lift to the second-order cone, and projected gradient descent on the
same loss streams.

Run: python3 demos/04_ball_learning_and_gradient_descent.py
"""

import math

import numpy as np

import symcone as sc
from symcone.harness import instance_rng, sample_ball_losses, simulate_ball_regret, simulate_ogd_regret

d = 10
T = 4096

# The ball iterate is tanh(eta ||L||) against the cumulative loss direction.
L = np.array([3.0, 4.0] + [0.0] * (d - 2))
print("ball iterate for ||L||=5, eta=0.3:", np.round(sc.ball_iterate(L, 0.3)[:3], 4))

# Lift: playing the same losses embedded as (m, 0) in the second-order cone
# reproduces the ball trajectory as (b/2, 1/2).
s = sc.soc(d)
ball = sc.init_ball_learner(d, sc.Fixed(0.2))
cone = sc.init_learner(s, sc.Fixed(0.2))
rng = instance_rng(11, 0)
for _ in range(50):
    m = sample_ball_losses(d, 1, rng)[0]
    ball = sc.scmwu_ball_step(ball, m)
    cone = sc.scmwu_step(cone, sc.element(s, [np.concatenate([m, [0.0]])]))
dev = float(np.max(np.abs(cone.iterate.blocks[0] - np.concatenate([ball.iterate / 2, [0.5]]))))
print(f"lifted-run deviation after 50 steps: {dev:.2e}")

# Regret comparison on identical streams: tanh learner vs gradient descent.
print(f"\n{d}-dimensional ball, T={T}, fixed stepsizes tuned to the horizon:")
losses = sample_ball_losses(d, T, instance_rng(11, 1))
tanh_cols = simulate_ball_regret(losses, "optimized")
ogd_cols = simulate_ogd_regret(losses, 1.0 / math.sqrt(T))
for t in (256, 1024, 4096):
    print(
        f"t={t:5d}  tanh-learner regret {tanh_cols['regret'][t - 1]:7.3f}   "
        f"gradient-descent regret {ogd_cols['regret'][t - 1]:7.3f}   "
        f"optimized bound {tanh_cols['bound_optimized'][t - 1]:7.3f}"
    )
