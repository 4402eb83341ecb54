"""Fractional calculus, Mittag-Leffler evaluation and invariant subspace
solutions of the time-fractional modified Kuramoto-Sivashinsky equation."""

from fracmks.fractional_calculus import (
    FractionalOrder,
    SampledFunction,
    TimeGrid,
    caputo_l1,
    caputo_power,
    laplace_numeric,
    rl_integral,
    rl_integral_power,
    verify_inversion,
)
from fracmks.invariant_subspace import (
    InvarianceReport,
    MKSParams,
    SubspaceElement,
    annihilator_residual,
    apply_operator_pointwise,
    coefficient_map,
    evaluate_element,
    invariance_check,
)
from fracmks.mks_solution import (
    Alpha1M,
    AlphaHalfM,
    C1Mode,
    GapReport,
    GeneralM,
    Half,
    ResidualReport,
    SolutionParams,
    coeff_c1_paper,
    coeff_c1_quadrature,
    coeff_c2_c3,
    composition_gap,
    evaluate_solution,
    particular_case,
    pde_residual,
    reduced_system_numeric,
)
from fracmks.special_functions import (
    MLMethod,
    MLParams,
    MLResult,
    erf,
    gamma,
    mittag_leffler,
    ml,
)

__all__ = [
    "Alpha1M",
    "AlphaHalfM",
    "C1Mode",
    "FractionalOrder",
    "GapReport",
    "GeneralM",
    "Half",
    "InvarianceReport",
    "MKSParams",
    "MLMethod",
    "MLParams",
    "MLResult",
    "ResidualReport",
    "SampledFunction",
    "SolutionParams",
    "SubspaceElement",
    "TimeGrid",
    "annihilator_residual",
    "apply_operator_pointwise",
    "caputo_l1",
    "caputo_power",
    "coeff_c1_paper",
    "coeff_c1_quadrature",
    "coeff_c2_c3",
    "coefficient_map",
    "composition_gap",
    "erf",
    "evaluate_element",
    "evaluate_solution",
    "gamma",
    "invariance_check",
    "laplace_numeric",
    "mittag_leffler",
    "ml",
    "particular_case",
    "pde_residual",
    "reduced_system_numeric",
    "rl_integral",
    "rl_integral_power",
    "verify_inversion",
]
