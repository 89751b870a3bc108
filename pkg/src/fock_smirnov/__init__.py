"""Inner-outer (Smirnov) factorization of free functions on truncated Fock space."""

from .commutative import (
    MultiIndexSeries,
    commutative_smirnov,
    da_mult_matrix,
    da_norm_sq,
    free_lift,
    symmetrize,
)
from .cnp import CnpSample, kernel_matrix, outer_restriction_check, restrict_smirnov
from .fockops import (
    TruncatedOperator,
    creation_matrix,
    gram_defect,
    left_mult_matrix,
    right_mult_matrix,
    transpose_unitary,
)
from .series import (
    FreeSeries,
    add,
    cauchy_product,
    evaluate,
    fock_norm_sq,
    in_free_ball,
    invert,
    scale,
    transpose_series,
)
from .smirnov import (
    SmirnovPair,
    VerificationReport,
    a_inverse,
    canonical_pair,
    fejer_riesz_degree1,
    graph_representer,
    verify_pair,
)
from .words import concat, enumerate_words, letter_count, transpose

__all__ = [name for name in dir() if not name.startswith("_")]
