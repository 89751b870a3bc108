"""Drury-Arveson side: commutative series, free lifts and symmetrization.

The monomial z^n has squared H^2_d norm n!/|n|! (multinomial expansion of
the kernel (1 - <z, w>)^{-1}).  The lift spreads h_n over the words with
letter count n using exactly that weight, which makes it isometric and
compatible with evaluation at commuting scalars; symmetrization sums
coefficients over those same words and is the adjoint of the lift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

from .series import FreeSeries, fock_norm_sq
from .smirnov import SmirnovPair, a_inverse, canonical_pair, verify_pair
from .words import MultiIndex, enumerate_multi_indices, letter_count, words_with_count


class MultiIndexSeries:
    """Sparse commutative power series sum_n h_n z^n in d variables."""

    __slots__ = ("d", "_coeffs")
    __array_ufunc__ = None

    def __init__(self, d: int, coeffs: Mapping[Sequence[int], complex] | None = None):
        if d < 1:
            raise ValueError("d must be positive")
        self.d = int(d)
        clean: dict[MultiIndex, complex] = {}
        for n, c in (coeffs or {}).items():
            n = tuple(int(k) for k in n)
            if len(n) != self.d or any(k < 0 for k in n):
                raise ValueError(f"bad multi-index {n} for d={self.d}")
            clean[n] = clean.get(n, 0j) + complex(c)
        self._coeffs = {n: c for n, c in clean.items() if c != 0}

    @classmethod
    def one(cls, d: int) -> MultiIndexSeries:
        return cls(d, {(0,) * d: 1.0})

    @property
    def coeffs(self) -> dict[MultiIndex, complex]:
        return dict(self._coeffs)

    def __getitem__(self, n: Sequence[int]) -> complex:
        return self._coeffs.get(tuple(n), 0j)

    def __len__(self) -> int:
        return len(self._coeffs)

    def indices(self) -> list[MultiIndex]:
        return sorted(self._coeffs, key=lambda n: (sum(n), tuple(-k for k in n)))

    def items(self):
        return ((n, self._coeffs[n]) for n in self.indices())

    @property
    def degree(self) -> int:
        return max((sum(n) for n in self._coeffs), default=0)

    @property
    def constant(self) -> complex:
        return self._coeffs.get((0,) * self.d, 0j)

    def __add__(self, other: MultiIndexSeries) -> MultiIndexSeries:
        if other.d != self.d:
            raise ValueError("dimension mismatch")
        out = self.coeffs
        for n, c in other._coeffs.items():
            out[n] = out.get(n, 0j) + c
        return MultiIndexSeries(self.d, out)

    def __sub__(self, other: MultiIndexSeries) -> MultiIndexSeries:
        return self + (-1.0) * other

    def __rmul__(self, c) -> MultiIndexSeries:
        c = complex(c)
        return MultiIndexSeries(self.d, {n: c * v for n, v in self._coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, MultiIndexSeries):
            return product(self, other)
        return self.__rmul__(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiIndexSeries):
            return NotImplemented
        return self.d == other.d and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.d, frozenset(self._coeffs.items())))

    def __repr__(self) -> str:
        return f"MultiIndexSeries(d={self.d}, {dict(self.items())})"

    def __call__(self, z: Sequence[complex]) -> complex:
        z = np.asarray(z, dtype=complex)
        if z.shape != (self.d,):
            raise ValueError(f"expected a point of C^{self.d}")
        total = 0j
        for n, c in self._coeffs.items():
            total += c * np.prod(z ** np.asarray(n))
        return complex(total)

    def truncate(self, N: int) -> MultiIndexSeries:
        return MultiIndexSeries(self.d, {n: c for n, c in self._coeffs.items() if sum(n) <= N})

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "terms": [{"index": list(n), "re": c.real, "im": c.imag} for n, c in self.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> MultiIndexSeries:
        d = int(data["d"])
        coeffs: dict[MultiIndex, complex] = {}
        for t in data.get("terms", []):
            n = tuple(int(k) for k in t["index"])
            coeffs[n] = coeffs.get(n, 0j) + complex(t.get("re", 0.0), t.get("im", 0.0))
        return cls(d, coeffs)


def product(f: MultiIndexSeries, g: MultiIndexSeries, N: int | None = None) -> MultiIndexSeries:
    if f.d != g.d:
        raise ValueError("dimension mismatch")
    out: dict[MultiIndex, complex] = {}
    for n, a in f._coeffs.items():
        for m, b in g._coeffs.items():
            k = tuple(x + y for x, y in zip(n, m))
            if N is not None and sum(k) > N:
                continue
            out[k] = out.get(k, 0j) + a * b
    return MultiIndexSeries(f.d, out)


def da_weight(n: Sequence[int]) -> float:
    """||z^n||^2 in H^2_d, i.e. n! / |n|!."""
    return math.prod(math.factorial(k) for k in n) / math.factorial(sum(n))


def da_norm_sq(h: MultiIndexSeries) -> float:
    return float(sum(abs(c) ** 2 * da_weight(n) for n, c in h._coeffs.items()))


def free_lift(h: MultiIndexSeries) -> FreeSeries:
    coeffs = {}
    for n, c in h._coeffs.items():
        w = da_weight(n) * c
        for word in words_with_count(n):
            coeffs[word] = w
    return FreeSeries(h.d, coeffs)


def symmetrize(F: FreeSeries) -> MultiIndexSeries:
    out: dict[MultiIndex, complex] = {}
    for w, c in F.coeffs.items():
        n = letter_count(w, F.d)
        out[n] = out.get(n, 0j) + c
    return MultiIndexSeries(F.d, out)


# -- multiplication operators in the orthonormal monomial basis ---------------


@dataclass(frozen=True)
class MultiIndexOperator:
    d: int
    domain_degree: int
    codomain_degree: int
    matrix: np.ndarray

    @property
    def domain_basis(self) -> list[MultiIndex]:
        return enumerate_multi_indices(self.d, self.domain_degree)

    @property
    def codomain_basis(self) -> list[MultiIndex]:
        return enumerate_multi_indices(self.d, self.codomain_degree)


def da_mult_matrix(f: MultiIndexSeries, N: int, codomain_degree: int | None = None) -> MultiIndexOperator:
    """Multiplication by f from degree <= N into degree <= N + deg f.

    Basis vectors are z^n / sqrt(n!/|n|!), so the matrix of a contractive
    multiplier has all singular values <= 1.
    """
    M = N + f.degree if codomain_degree is None else codomain_degree
    if M < N + f.degree:
        raise ValueError("codomain too small for an exact matrix")
    dom = enumerate_multi_indices(f.d, N)
    index = {n: k for k, n in enumerate(enumerate_multi_indices(f.d, M))}
    mat = np.zeros((len(index), len(dom)), dtype=complex)
    terms = list(f.items())
    for col, m in enumerate(dom):
        sm = math.sqrt(da_weight(m))
        for k, c in terms:
            n = tuple(x + y for x, y in zip(k, m))
            mat[index[n], col] += c * math.sqrt(da_weight(n)) / sm
    return MultiIndexOperator(f.d, N, M, mat)


def column_norm(f_list: Sequence[MultiIndexSeries], N: int) -> float:
    """Largest singular value of the stacked column of multipliers on degree <= N."""
    M = N + max(f.degree for f in f_list)
    blocks = [da_mult_matrix(f, N, codomain_degree=M).matrix for f in f_list]
    return float(np.linalg.norm(np.vstack(blocks), 2))


# -- commutative Smirnov pairs -------------------------------------------------

Liftable = Union[MultiIndexSeries, FreeSeries]


@dataclass
class CommutativePair:
    a: MultiIndexSeries
    b_list: list[MultiIndexSeries]
    a_inverse: MultiIndexSeries
    free_pair: SmirnovPair
    lifts: list[FreeSeries]
    report: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "a": self.a.to_json(),
            "b": [b.to_json() for b in self.b_list],
            "a_inverse": self.a_inverse.to_json(),
            "report": self.report,
        }


def commutative_smirnov(
    h_list: Sequence[Liftable],
    N: int,
    d: int | None = None,
    tol: float = 1e-8,
    seed: int = 0,
    check_column: bool = True,
) -> CommutativePair:
    """Smirnov pair (a, b_1, ...) for h_i via free lift, free factorization and symmetrization.

    Entries given as :class:`FreeSeries` are used as their own lift; commutative
    entries get the norm-preserving lift.
    """
    lifts = [h if isinstance(h, FreeSeries) else free_lift(h) for h in h_list]
    if d is None:
        if not lifts:
            raise ValueError("d is required when h_list is empty")
        d = lifts[0].d
    pair = canonical_pair(lifts, N, d=d)
    a = symmetrize(pair.A)
    b_list = [symmetrize(B) for B in pair.B_list]
    inv = symmetrize(a_inverse(pair, N))

    h_norms = [da_norm_sq(symmetrize(H)) for H in lifts]
    bound = 1.0 + sum(h_norms)
    inv_norm = da_norm_sq(inv)
    free_report = verify_pair(lifts, pair, N, tol=tol, seed=seed)
    report = {
        "N": N,
        "a_empty": a.constant.real,
        "a_inverse_da_norm_sq": inv_norm,
        "norm_bound": bound,
        "norm_bound_ok": inv_norm <= bound + tol,
        "free": free_report.to_json(),
    }
    if check_column:
        K = max(N - max((H.degree for H in lifts), default=0) - 1, 0)
        report["headroom_degree"] = K
        report["column_norm"] = column_norm([a] + b_list, K)
    return CommutativePair(a=a, b_list=b_list, a_inverse=inv, free_pair=pair, lifts=lifts, report=report)
