"""Exact feasibility, construction and sampling of equicorrelated symmetric Bernoulli vectors."""

from symbern.combinatorics import a_nk, binom, r_nk
from symbern.constructors import (
    FeasibilityReport,
    InfeasibleTarget,
    classify,
    construct_for_p,
    f_max,
    f_min,
    m_n,
    p_min_binary,
)
from symbern.count_pmf import (
    CountPMF,
    FullPMF,
    agreement_probability,
    check_marginals,
    covariance_matrix,
    expand_to_full,
    symmetrize,
)
from symbern.intraclass import (
    CovarianceMatrix,
    IntraclassSpec,
    build_matrix,
    eigenvalues,
    is_psd,
    p_from_rho,
    p_good_threshold,
    rho_from_p,
    rho_min_psd,
)
from symbern.lp_oracle import (
    LPResult,
    RationalLP,
    build_full_program,
    build_symmetrized_program,
    solve,
    verify_thresholds,
)
from symbern.rational import format_rational, parse_rational
from symbern.sampler import EmpiricalStats, SampleBatch, estimate, sample

__all__ = [
    "CountPMF",
    "CovarianceMatrix",
    "EmpiricalStats",
    "FeasibilityReport",
    "FullPMF",
    "InfeasibleTarget",
    "IntraclassSpec",
    "LPResult",
    "RationalLP",
    "SampleBatch",
    "a_nk",
    "agreement_probability",
    "binom",
    "build_full_program",
    "build_matrix",
    "build_symmetrized_program",
    "check_marginals",
    "classify",
    "construct_for_p",
    "covariance_matrix",
    "eigenvalues",
    "estimate",
    "expand_to_full",
    "f_max",
    "f_min",
    "format_rational",
    "is_psd",
    "m_n",
    "p_from_rho",
    "p_good_threshold",
    "p_min_binary",
    "parse_rational",
    "r_nk",
    "rho_from_p",
    "rho_min_psd",
    "sample",
    "solve",
    "symmetrize",
    "verify_thresholds",
]
