"""Numerical laboratory for continuous solutions of scalar balance laws ``u_t + f(u)_x = g``.

Modules
-------
flux        nonlinearity constants, inflection points and convexity ratios of fluxes
solver      solution fields, characteristics, the weak residual and closed-form fields
estimates   Dafermos balances, Lipschitz and Hoelder estimates, oscillation surveys
covering    tilted covering regions and the covering Lebesgue-point test
heisenberg  first Heisenberg group, intrinsic graphs and the Rademacher residual
cli         scenario-driven command-line harness
"""

from .flux import (
    FluxModel,
    builtin_flux,
    check_fprime_separation,
    convexity_ratio_q,
    inflection_zeros,
    min_order_at_point,
    nonlinearity_constant,
    pointwise_nonlinearity_constant,
)
from .solver import (
    ANALYTIC_FIELDS,
    Characteristic,
    CharacteristicCrossing,
    SolutionField,
    analytic_library,
    read_field_csv,
    solve_characteristics,
    trace_characteristic,
    trace_characteristics,
    weak_residual,
    weak_residuals,
    write_field_csv,
)
from .estimates import (
    BalanceReport,
    HolderReport,
    balance_sweep,
    dafermos_balance,
    holder_seminorm,
    lipschitz_along,
    lipschitz_sweep,
    oscillation_A,
    oscillation_survey,
)
from .covering import CoveringRegion, average_over, lebesgue_point_test, make_region, region_area
from .heisenberg import (
    GraphSurface,
    HPoint,
    d_phi,
    dist_inf,
    graph_balance_residual,
    group_mul,
    intrinsic_lip_constant,
    rademacher_residual,
    surface_library,
)

__version__ = "0.1.0"
