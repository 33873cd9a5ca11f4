"""Rank and kernel analysis for Z_p Z_{p^2}-additive codes and their Gray images."""

from .backend import backend_name
from .code import (
    DEFAULT_CAP,
    AdditiveCode,
    CodeType,
    InconsistentTypeError,
    SizeCapError,
    infer_type,
    load_code,
    save_code,
    standard_form,
)
from .construct import (
    ConstructionError,
    ConstructionPlan,
    admissible_pair_rbar_range,
    admissible_rank_range,
    assemble_Sr,
    assemble_Srk,
    binom_identity_check,
    build_A,
    build_gamma,
    build_placement,
    load_plan,
    realize,
    save_plan,
)
from .gray import (
    CarryPolynomial,
    GrayMap,
    carry_direct,
    carry_word,
    coeff_support,
    power_sum_coeff,
    span_power_degrees,
)
from .ring import SUPPORTED_PRIMES, MixedSpace, check_prime
from .span_kernel import (
    CosetRepSearchError,
    KernelReport,
    RankReport,
    analyze,
    coset_decomposition,
    kernel_of,
    rank_bounds,
    rank_of,
    row_reduce,
    span_generators,
    span_is_zpzp2_linear,
)

__version__ = "0.1.0"
