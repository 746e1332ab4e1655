# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Intrinsic graphs in the Heisenberg group
#
# A function `phi(y, t)` on the plane `x = 0` defines a graph that is
# intrinsic Lipschitz exactly when `phi_y + (phi**2 / 2)_t` is bounded.
# `phi = sgn(t) sqrt(2|t|)` has source `sgn t`.

# %%
import math

import numpy as np

from balance_lab import HPoint, d_phi, graph_balance_residual, intrinsic_lip_constant, rademacher_residual, surface_library
from balance_lab.heisenberg import bracket_xy

P, Q = HPoint(1, 0, 0), HPoint(0, 1, 0)
print("P.Q =", P * Q, " Q.P =", Q * P)
print("[X, Y] at a random point:", np.round(bracket_xy([0.3, -1.1, 2.0]), 6))

# %%
surf = surface_library("sqrt")
print("balance residual:", graph_balance_residual(surf))
print("intrinsic Lipschitz constant (sampled):", intrinsic_lip_constant(surf, 20000, 1e-3, 0))
print("d_phi((0,0),(0.5,0.1)) =", float(d_phi(surf, (0, 0), (0.5, 0.1))))

# %% [markdown]
# ## Intrinsic differentiability
# Away from `t = 0` the graph is differentiable with coefficient `g(A0)`;
# the residual `R(s)` decays linearly. On `t = 0` it is stuck at `sqrt 2`.

# %%
for A0 in [(0.0, 0.5), (0.3, -0.2), (0.0, 0.0)]:
    tab = rademacher_residual(surf, A0)
    print(A0, "w =", tab.w_hat, " R(s) =", np.round(tab.residuals, 5))
print("sqrt 2 =", math.sqrt(2))
