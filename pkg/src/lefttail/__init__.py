"""Optimal left-tail bounds for moment-constrained nonnegative sums.

Given the total mean m and total second moment s of a sum of
independent nonnegative random variables, the package evaluates the
best possible bounds of the form

    P(S <= x)  <=  inf over w > x  of  E (w - eta)_+^alpha / (w - x)^alpha

against scaled binomial, scaled Poisson, and shifted normal reference
laws eta, together with their exponential (alpha -> infinity) limits,
plus brute-force and Monte Carlo oracles that verify every claim the
fast paths make.
"""

from .bounds import (
    BoundResult,
    Regime,
    cantelli_combined,
    exponential_bound,
    exponential_tail_pair,
    lattice_tangency_root,
    left_tail_bound,
    log_concave_constant,
    normal_tangency_root,
    regime_of,
)
from .errors import (
    ConstraintError,
    NumericError,
    RegimeError,
    UnsupportedFamilyError,
    UnsupportedOrderError,
)
from .laws import (
    Family,
    MomentBudget,
    PartialMomentTriple,
    ReferenceLaw,
    TwoPointLaw,
    lattice_cdf,
    lattice_pmf,
    lattice_pmf_array,
    normal_positive_part_moment,
    partial_moment_sweep,
    partial_moment_triple,
    positive_part_moment,
    scaled_binomial,
    scaled_poisson,
    shifted_normal,
    tangency_residual,
    tilted_mean,
    truncation_index,
    two_point_law,
)
from .oracle import (
    AtomLaw,
    CheckResult,
    MomentFunction,
    SumSpec,
    adaptive_simpson,
    empirical_tail,
    extremal_moment,
    extremal_sum,
    grid_infimum,
    mixture_sum,
    normal_moment_quadrature,
    random_three_atom,
    run_verification,
    sample_sum,
)
from .report import (
    SweepRow,
    comparison_curve,
    figure_dataset,
    sweep,
    true_tail,
    uniform_z_grid,
    write_csv,
    write_jsonl,
)

__version__ = "0.1.0"
