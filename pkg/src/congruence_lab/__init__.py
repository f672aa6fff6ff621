"""Desk-scale laboratory for small solutions of ternary quadratic congruences
x1^2 + alpha2 x2^2 + alpha3 x3^2 = 0 mod p^m: exact solution-count histograms,
the main term and its constant, the variance decomposition over Dirichlet
characters, quadratic Gauss-sum identities, and the exact-rational
exponent-pair calculus with its optimization objective."""

from .arith import PrimePower, legendre, mod_inverse, padic_valuation, primitive_root
from .characters import (
    DirichletCharacter,
    char_eval,
    char_sum,
    completed_legendre_form_sum,
    enumerate_characters,
    gauss_sum_closed,
    gauss_sum_direct,
    legendre_twisted_double_sum,
    max_nonprincipal_char_sum,
    tau_p,
)
from .congruence import (
    ExperimentConfig,
    MainTermReport,
    SolutionHistogram,
    c_q,
    count_solutions,
    exceptional_set,
    main_term,
    n_threshold,
    padic_small_value_count,
    solution_histogram,
)
from .exppair import (
    ExponentPair,
    SearchResult,
    apply_A,
    apply_B,
    apply_word,
    mu_threshold,
    objective_f,
    remark_bracket,
    search_min_f,
)
from .variance import (
    VarianceReport,
    bound_ratio_report,
    quadruple_count_identity,
    variance_decomposition_check,
    variance_direct,
    variance_v1,
    variance_v2,
)

__version__ = "0.1.0"
