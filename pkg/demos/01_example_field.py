# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # A continuous solution with a square-root profile
#
# `u = sgn(x) sqrt|x|` solves `u_t + (u**2)_x = sgn x`. It is constant in
# time, continuous, and only 1/2-Hoelder at the origin. We sample it,
# follow a characteristic and measure its regularity.

# %%
import math

import numpy as np

from balance_lab import (
    analytic_library,
    holder_seminorm,
    lipschitz_along,
    oscillation_A,
    oscillation_survey,
    trace_characteristic,
    weak_residual,
)

field = analytic_library("example33", nx=4001, x_span=(-1.0, 1.0))
print(field.name, field.u.shape, field.flux.name, "interpolation:", field.interpolation)

# %% [markdown]
# ## Characteristics
# From `(0, 1/4)` the curve solves `x' = 2 sqrt(x)`, so `x(t) = (1/2 + t)**2`.
# Along it `u = 1/2 + t`, which changes at exactly the rate `sup|g| = 1`.

# %%
ch = trace_characteristic(field, 0.0, 0.25, 0.4)
err = np.abs(ch.positions - (0.5 + ch.times) ** 2).max()
print(f"max |x(t) - (1/2+t)^2| = {err:.2e}")
print(f"Lipschitz constant of u along the curve: {lipschitz_along(field, ch):.12f}")

# %% [markdown]
# ## Hoelder regularity at t = 0

# %%
rep = holder_seminorm(field, 0.0, 2)
print(f"empirical constant   {rep.empirical:.8f}  (sqrt 2 = {math.sqrt(2):.8f})")
print(f"theoretical constant {rep.theoretical:.8f}")
print(f"fitted exponent      {rep.exponent_fit:.4f} over {rep.scales} dyadic scales")

# %% [markdown]
# ## Where is the oscillation large?
# `A_delta(t, x)` is the local 1/2-Hoelder quotient. It is 1 at the
# origin and small elsewhere, so the fraction of points above a threshold
# shrinks with delta.

# %%
print("A at 0:", oscillation_A(field, 0.0, 0.0, 2, 0.125))
print("A at 1/2:", round(oscillation_A(field, 0.0, 0.5, 2, 0.125), 6))
wide = analytic_library("example33")
tab = oscillation_survey(wide, 2000, [0.2, 0.1, 0.05, 0.025, 0.0125], 0.5, 2, seed=0)
for delta, frac in tab.rows():
    print(f"delta={delta:<7} fraction={frac:.4f}")

# %% [markdown]
# ## Weak form
# The closed form satisfies the equation up to rounding; the sampled
# (bilinear) field shows the discretization error.

# %%
print("closed form:", weak_residual(field, 20, 0))
sampled = analytic_library("example33", nx=1001, nt=1001, x_span=(-1, 1), t_span=(-1, 1), interpolation="bilinear")
print("bilinear, dx = 2e-3:", weak_residual(sampled, 20, 0))
