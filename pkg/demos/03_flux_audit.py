# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # How nonlinear is a flux?
#
# The order-`l` constant `c_l` is the best `c` in
# `|f(v+h) - f(v) - f'(v) h| >= c |h|**l`.

# %%
from balance_lab import FluxModel, builtin_flux, check_fprime_separation, convexity_ratio_q, inflection_zeros, nonlinearity_constant
from balance_lab.flux import min_order_at_point

for iv in [(-1, 1), (2, 7)]:
    print("burgers on", iv, nonlinearity_constant(builtin_flux("burgers", iv), 2))

# %% [markdown]
# `u**3` degenerates at 0: over a symmetric interval the remainder can
# vanish for nonzero `h`, so `c_3 = 0` there, although pointwise the
# order at 0 is 3 with constant 1.

# %%
cubic = builtin_flux("cubic", (-1, 1))
print("c_3 on [-1, 1]:", nonlinearity_constant(cubic, 3))
print("order at 0:", min_order_at_point(cubic, 0.0))

# %% [markdown]
# ## Inflections and the ratio q

# %%
w = FluxModel.polynomial([0, 0, -1, 0, 1], (-2, 2), 2, name="u^4 - u^2")
print("zeros of f'':", inflection_zeros(w))
stats = convexity_ratio_q(builtin_flux("cubic", (-10, 10)), (1, 2), (0.5, 3))
print("q on I=[1,2], J=[0.5,3]:", stats.q)

# %% [markdown]
# The scanned constant also separates derivatives:
# `|f'(v) - f'(w)| >= 2 c |v - w|**(l-1)`.

# %%
quartic = builtin_flux("quartic", (-5, 5))
c = nonlinearity_constant(quartic, 2, (1, 2))
print("c_2 on [1,2] =", c, "separation margin", check_fprime_separation(quartic, 2, c, (1, 2)).margin)
