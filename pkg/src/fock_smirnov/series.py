"""Truncated free (noncommutative) power series.

A :class:`FreeSeries` is a finitely supported map from words to complex
coefficients.  Infinite series only ever appear here through their
truncations, so every operation that can produce an infinite tail takes an
explicit degree bound.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Mapping, Sequence

import numpy as np

from .words import EMPTY, Word, as_word, transpose


class FreeSeries:
    """Sparse free power series in ``d`` noncommuting variables.

    Coefficients are stored in a dict keyed by word tuples; exact zeros are
    dropped on construction.  Instances are treated as immutable.
    """

    __slots__ = ("d", "_coeffs")
    __array_ufunc__ = None  # numpy scalars defer to __rmul__

    def __init__(self, d: int, coeffs: Mapping[Sequence[int], complex] | None = None):
        if d < 1:
            raise ValueError("d must be positive")
        self.d = int(d)
        clean: dict[Word, complex] = {}
        for w, c in (coeffs or {}).items():
            w = as_word(w, self.d)
            c = complex(c)
            if c != 0:
                clean[w] = clean.get(w, 0j) + c
        self._coeffs = {w: c for w, c in clean.items() if c != 0}

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, d: int) -> FreeSeries:
        return cls(d)

    @classmethod
    def one(cls, d: int) -> FreeSeries:
        return cls(d, {EMPTY: 1.0})

    @classmethod
    def monomial(cls, d: int, word: Sequence[int], coeff: complex = 1.0) -> FreeSeries:
        return cls(d, {tuple(word): coeff})

    @classmethod
    def variable(cls, d: int, i: int) -> FreeSeries:
        return cls.monomial(d, (i,))

    # -- accessors ------------------------------------------------------------

    @property
    def coeffs(self) -> dict[Word, complex]:
        return dict(self._coeffs)

    def __getitem__(self, w: Sequence[int]) -> complex:
        return self._coeffs.get(tuple(w), 0j)

    def __iter__(self):
        return iter(self.words())

    def __len__(self) -> int:
        return len(self._coeffs)

    def items(self):
        return ((w, self._coeffs[w]) for w in self.words())

    def words(self) -> list[Word]:
        return sorted(self._coeffs, key=lambda w: (len(w), w))

    @property
    def degree(self) -> int:
        """Length of the longest word in the support (0 for the zero series)."""
        return max((len(w) for w in self._coeffs), default=0)

    @property
    def constant(self) -> complex:
        return self._coeffs.get(EMPTY, 0j)

    def is_zero(self) -> bool:
        return not self._coeffs

    def truncate(self, N: int) -> FreeSeries:
        return FreeSeries(self.d, {w: c for w, c in self._coeffs.items() if len(w) <= N})

    def coefficient_vector(self, basis: Sequence[Word]) -> np.ndarray:
        """Coefficients listed along ``basis``; words outside the basis must be absent."""
        index = {w: k for k, w in enumerate(basis)}
        v = np.zeros(len(basis), dtype=complex)
        for w, c in self._coeffs.items():
            if w not in index:
                raise ValueError(f"word {w} not in basis")
            v[index[w]] = c
        return v

    @classmethod
    def from_vector(cls, d: int, basis: Sequence[Word], vec: Iterable[complex]) -> FreeSeries:
        return cls(d, {w: c for w, c in zip(basis, vec)})

    # -- arithmetic sugar -----------------------------------------------------

    def __add__(self, other: FreeSeries) -> FreeSeries:
        return add(self, other)

    def __sub__(self, other: FreeSeries) -> FreeSeries:
        return add(self, scale(-1.0, other))

    def __neg__(self) -> FreeSeries:
        return scale(-1.0, self)

    def __mul__(self, other):
        if isinstance(other, FreeSeries):
            return cauchy_product(self, other)
        return scale(other, self)

    def __rmul__(self, other):
        return scale(other, self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeSeries):
            return NotImplemented
        return self.d == other.d and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.d, frozenset(self._coeffs.items())))

    def __repr__(self) -> str:
        if not self._coeffs:
            return f"FreeSeries(d={self.d}, 0)"
        parts = []
        for w, c in self.items():
            label = "".join(f"X{i}" for i in w) or "1"
            parts.append(f"({c:.6g})*{label}")
        return f"FreeSeries(d={self.d}, " + " + ".join(parts) + ")"

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "terms": [{"word": list(w), "re": c.real, "im": c.imag} for w, c in self.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> FreeSeries:
        d = int(data["d"])
        coeffs: dict[Word, complex] = {}
        for t in data.get("terms", []):
            w = as_word(t["word"], d)
            coeffs[w] = coeffs.get(w, 0j) + complex(t.get("re", 0.0), t.get("im", 0.0))
        return cls(d, coeffs)


def _same_d(F: FreeSeries, G: FreeSeries) -> int:
    if F.d != G.d:
        raise ValueError(f"dimension mismatch: d={F.d} vs d={G.d}")
    return F.d


def add(F: FreeSeries, G: FreeSeries) -> FreeSeries:
    d = _same_d(F, G)
    out = F.coeffs
    for w, c in G._coeffs.items():
        out[w] = out.get(w, 0j) + c
    return FreeSeries(d, out)


def scale(c: complex, F: FreeSeries) -> FreeSeries:
    c = complex(c)
    return FreeSeries(F.d, {w: c * v for w, v in F._coeffs.items()})


def cauchy_product(F: FreeSeries, G: FreeSeries, N: int | None = None) -> FreeSeries:
    """Noncommutative product FG, keeping words of length <= N (all if None)."""
    d = _same_d(F, G)
    out: dict[Word, complex] = {}
    for u, fu in F._coeffs.items():
        for v, gv in G._coeffs.items():
            if N is not None and len(u) + len(v) > N:
                continue
            w = u + v
            out[w] = out.get(w, 0j) + fu * gv
    return FreeSeries(d, out)


def fock_norm_sq(F: FreeSeries) -> float:
    return float(sum(abs(c) ** 2 for c in F._coeffs.values()))


def fock_inner(F: FreeSeries, G: FreeSeries) -> complex:
    """<F, G>, linear in F."""
    _same_d(F, G)
    return sum((c * np.conj(G[w]) for w, c in F._coeffs.items()), 0j)


def invert(F: FreeSeries, N: int) -> FreeSeries:
    """Truncation to degree N of the multiplicative inverse of F.

    Uses the graded recursion g_a = -(1/f_0) * sum over splits a = b c with
    b nonempty of f_b g_c.  Only words that are concatenations of support
    words of F - f_0 can carry a nonzero coefficient, so those are the only
    ones visited.
    """
    f0 = F.constant
    if f0 == 0:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    tail = [(w, c) for w, c in F._coeffs.items() if w]
    support = {EMPTY}
    queue = deque([EMPTY])
    while queue:
        w = queue.popleft()
        for b, _ in tail:
            bw = b + w
            if len(bw) <= N and bw not in support:
                support.add(bw)
                queue.append(bw)
    g: dict[Word, complex] = {}
    for a in sorted(support, key=lambda w: (len(w), w)):
        if not a:
            g[a] = 1.0 / f0
            continue
        acc = 0j
        for b, fb in tail:
            if len(b) <= len(a) and a[: len(b)] == b:
                acc += fb * g.get(a[len(b):], 0j)
        g[a] = -acc / f0
    return FreeSeries(F.d, g)


def transpose_series(F: FreeSeries) -> FreeSeries:
    return FreeSeries(F.d, {transpose(w): c for w, c in F._coeffs.items()})


# -- evaluation on matrix tuples ----------------------------------------------


def as_matrix_tuple(X, d: int | None = None) -> np.ndarray:
    """Coerce a d-tuple of n x n matrices (or of scalars) to a (d, n, n) array."""
    arrs = [np.atleast_2d(np.asarray(x, dtype=complex)) for x in X]
    if not arrs:
        raise ValueError("empty matrix tuple")
    n = arrs[0].shape[0]
    for a in arrs:
        if a.shape != (n, n):
            raise ValueError(f"matrix tuple entries must all be {n}x{n}, got {a.shape}")
    if d is not None and len(arrs) != d:
        raise ValueError(f"expected {d} matrices, got {len(arrs)}")
    return np.stack(arrs)


def evaluate(F: FreeSeries, X) -> np.ndarray:
    """F(X) = sum_a c_a X^a as an exact finite sum over the stored words."""
    T = as_matrix_tuple(X, F.d)
    n = T.shape[1]
    powers: dict[Word, np.ndarray] = {EMPTY: np.eye(n, dtype=complex)}

    def power(w: Word) -> np.ndarray:
        if w not in powers:
            powers[w] = power(w[:-1]) @ T[w[-1] - 1]
        return powers[w]

    out = np.zeros((n, n), dtype=complex)
    for w, c in F.items():
        out += c * power(w)
    return out


def evaluate_scalar(F: FreeSeries, z: Sequence[complex]) -> complex:
    """F at a point of C^d, i.e. at a tuple of commuting 1 x 1 matrices."""
    z = np.asarray(z, dtype=complex)
    if z.shape != (F.d,):
        raise ValueError(f"expected a point in C^{F.d}")
    total = 0j
    for w, c in F._coeffs.items():
        term = c
        for i in w:
            term *= z[i - 1]
        total += term
    return complex(total)


def in_free_ball(X) -> tuple[bool, float]:
    """Membership in the free unit ball with margin 1 - ||sum_j X_j X_j^*||."""
    T = as_matrix_tuple(X)
    S = np.einsum("jab,jcb->ac", T, T.conj())
    margin = 1.0 - float(np.linalg.eigvalsh(S)[-1])
    return margin > 0, margin

