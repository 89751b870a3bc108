"""Matrices of creation and multiplication operators on truncated Fock space.

Every operator maps the span of words of length <= N (its domain) into the
span of words of length <= M (its codomain), both in the graded order of
:func:`~fock_smirnov.words.enumerate_words`.  Multiplication matrices are
rectangular with M = N + deg F, which makes them exact: no product term is
dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .series import FreeSeries, transpose_series
from .words import Word, enumerate_words, transpose, word_index


@dataclass(frozen=True)
class TruncatedOperator:
    d: int
    domain_degree: int
    codomain_degree: int
    matrix: np.ndarray

    def __post_init__(self):
        rows, cols = self.matrix.shape
        if rows != len(enumerate_words(self.d, self.codomain_degree)):
            raise ValueError("row count does not match codomain basis")
        if cols != len(enumerate_words(self.d, self.domain_degree)):
            raise ValueError("column count does not match domain basis")

    @property
    def domain_basis(self) -> list[Word]:
        return enumerate_words(self.d, self.domain_degree)

    @property
    def codomain_basis(self) -> list[Word]:
        return enumerate_words(self.d, self.codomain_degree)

    def __matmul__(self, other):
        if isinstance(other, TruncatedOperator):
            if other.codomain_degree != self.domain_degree:
                raise ValueError("incompatible truncations")
            return TruncatedOperator(
                self.d, other.domain_degree, self.codomain_degree, self.matrix @ other.matrix
            )
        return self.matrix @ other

    @property
    def H(self) -> TruncatedOperator:
        return TruncatedOperator(self.d, self.codomain_degree, self.domain_degree, self.matrix.conj().T)

    def block(self, out_degree: int, in_degree: int) -> np.ndarray:
        """Sub-block from words of exact length ``in_degree`` to exact length ``out_degree``."""
        rows = _degree_slice(self.d, out_degree)
        cols = _degree_slice(self.d, in_degree)
        return self.matrix[rows, cols]

    def restrict(self, domain_degree: int, codomain_degree: int | None = None) -> TruncatedOperator:
        """Compress to a smaller domain (and optionally codomain) truncation."""
        if codomain_degree is None:
            codomain_degree = self.codomain_degree
        nr = len(enumerate_words(self.d, codomain_degree))
        nc = len(enumerate_words(self.d, domain_degree))
        return TruncatedOperator(self.d, domain_degree, codomain_degree, self.matrix[:nr, :nc])

    def apply(self, F: FreeSeries) -> FreeSeries:
        v = F.coefficient_vector(self.domain_basis)
        return FreeSeries.from_vector(self.d, self.codomain_basis, self.matrix @ v)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "domain_degree": self.domain_degree,
            "codomain_degree": self.codomain_degree,
            "matrix": [[[z.real, z.imag] for z in row] for row in self.matrix],
        }


def _degree_slice(d: int, k: int) -> slice:
    start = len(enumerate_words(d, k - 1)) if k > 0 else 0
    return slice(start, len(enumerate_words(d, k)))


def _check_letter(i: int, d: int) -> None:
    if not 1 <= i <= d:
        raise ValueError(f"letter {i} outside 1..{d}")


def creation_matrix(i: int, d: int, N: int, side: str = "left") -> TruncatedOperator:
    """L_i (prepend letter i) or R_i (append letter i) from degree N into N+1."""
    _check_letter(i, d)
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    dom = enumerate_words(d, N)
    idx = word_index(d, N + 1)
    m = np.zeros((len(idx), len(dom)), dtype=complex)
    for col, w in enumerate(dom):
        target = (i,) + w if side == "left" else w + (i,)
        m[idx[target], col] = 1.0
    return TruncatedOperator(d, N, N + 1, m)


def word_operator(word: Sequence[int], d: int, N: int, side: str = "left") -> TruncatedOperator:
    """Shift by a whole word: xi_w -> xi_{word w} (left) or xi_w -> xi_{w word} (right)."""
    word = tuple(word)
    dom = enumerate_words(d, N)
    idx = word_index(d, N + len(word))
    m = np.zeros((len(idx), len(dom)), dtype=complex)
    for col, w in enumerate(dom):
        target = word + w if side == "left" else w + word
        m[idx[target], col] = 1.0
    return TruncatedOperator(d, N, N + len(word), m)


def transpose_unitary(d: int, N: int) -> TruncatedOperator:
    """The permutation W: xi_a -> xi_{a reversed} on words of length <= N."""
    dom = enumerate_words(d, N)
    idx = word_index(d, N)
    m = np.zeros((len(dom), len(dom)), dtype=complex)
    for col, w in enumerate(dom):
        m[idx[transpose(w)], col] = 1.0
    return TruncatedOperator(d, N, N, m)


def left_mult_matrix(F: FreeSeries, N: int) -> TruncatedOperator:
    """Exact matrix of G -> FG from degree <= N into degree <= N + deg F."""
    return _mult_matrix(F, N, left=True)


def right_mult_matrix(F: FreeSeries, N: int) -> TruncatedOperator:
    """Exact matrix of G -> GF from degree <= N into degree <= N + deg F."""
    return _mult_matrix(F, N, left=False)


def _mult_matrix(F: FreeSeries, N: int, left: bool) -> TruncatedOperator:
    d = F.d
    M = N + F.degree
    dom = enumerate_words(d, N)
    idx = word_index(d, M)
    m = np.zeros((len(idx), len(dom)), dtype=complex)
    terms = list(F.items())
    for col, w in enumerate(dom):
        for b, c in terms:
            m[idx[b + w if left else w + b], col] += c
    return TruncatedOperator(d, N, M, m)


def right_mult_via_transpose(F: FreeSeries, N: int) -> TruncatedOperator:
    """W_M . left_mult(F^dagger) . W_N^*; must agree with :func:`right_mult_matrix`."""
    L = left_mult_matrix(transpose_series(F), N)
    W_out = transpose_unitary(F.d, L.codomain_degree)
    W_in = transpose_unitary(F.d, N)
    return W_out @ L @ W_in.H


def gram_defect(H_list: Sequence[FreeSeries], N: int, d: int | None = None) -> np.ndarray:
    """G = I + sum_i M_{H_i}^* M_{H_i} on the degree <= N basis (dense)."""
    if d is None:
        if not H_list:
            raise ValueError("d is required when H_list is empty")
        d = H_list[0].d
    n = len(enumerate_words(d, N))
    G = np.eye(n, dtype=complex)
    for H in H_list:
        if H.d != d:
            raise ValueError("all series must share d")
        M = left_mult_matrix(H, N).matrix
        G += M.conj().T @ M
    return G
