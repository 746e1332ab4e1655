# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Integral balances and covering averages
#
# For a convex flux, the mass in a band of width `h` to the right of a
# characteristic grows at most by the source integrated over the band;
# to the left it grows at least by it.

# %%
import numpy as np

from balance_lab import analytic_library, balance_sweep, dafermos_balance, lebesgue_point_test, make_region, trace_characteristic

ex = analytic_library("example33")
gamma = trace_characteristic(ex, 0.0, 0.5, 0.2)
rep = dafermos_balance(ex, gamma, 0.05, 0.0, 0.2)
print(f"right band: {rep.lhs_plus:.6f} <= {rep.rhs_plus:.6f}")
print(f"left band:  {rep.lhs_minus:.6f} >= {rep.rhs_minus:.6f}")
print(f"quadrature error bound {rep.quad_error_bound:.2e}")

# %% [markdown]
# With `u = t` and `g = 1` both inequalities are equalities.

# %%
uni = analytic_library("uniform_source")
reps = balance_sweep(uni, 20, seed=1)
print("max gap:", max(abs(r.lhs_plus - r.rhs_plus) for r in reps))

# %% [markdown]
# ## Regions along characteristics
# `S` has half-height `eps` and half-width `rho * eps**2`, sheared along the
# characteristic. Averages of `sgn x` over shrinking regions centred away
# from the jump converge to the point value.

# %%
region = make_region(ex, 0.0, 1.0, 0.1, 0.5)
print("area", region.area, "= 4 rho eps^3 =", 4 * 0.5 * 0.1**3)
tab = lebesgue_point_test(ex, ex.source, 0.0, 0.5, breaks=(0.0,))
for rho, eps, dev, ok in tab.rows():
    if eps == tab.epss[-1]:
        print(f"rho={rho:<6} eps={eps:<8} mean|q - q0|={dev:.2e} pass={ok}")

# %% [markdown]
# A vertical region straddling the jump of `sgn x` never settles.

# %%
flat = analytic_library("constant", c=0.0)
neg = lebesgue_point_test(flat, lambda t, x: np.sign(x), 0.5, 0.0, breaks=(0.0,), reference=0.0)
print("negative control, smallest deviation:", neg.deviations.min())
