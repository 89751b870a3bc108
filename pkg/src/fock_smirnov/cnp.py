"""Complete Pick kernels on finite samples and restriction of Smirnov data.

A complete Pick space is represented by finitely many points together with
their images u(x) in the open unit ball of C^d; everything is checked
pointwise on E = u(points).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .commutative import Liftable, MultiIndexSeries, commutative_smirnov, da_weight
from .series import FreeSeries, evaluate_scalar
from .words import enumerate_multi_indices

OUTERNESS_CRITERION = "finite-sample criterion: a(u(x)) != 0 for every sampled x"


@dataclass(frozen=True)
class CnpSample:
    labels: tuple[str, ...]
    u: np.ndarray  # (m, d) complex

    def __post_init__(self):
        u = np.atleast_2d(np.asarray(self.u, dtype=complex))
        object.__setattr__(self, "u", u)
        if len(self.labels) != u.shape[0]:
            raise ValueError("one label per point required")
        sq = np.sum(np.abs(u) ** 2, axis=1)
        if np.any(sq >= 1.0):
            bad = [self.labels[k] for k in np.flatnonzero(sq >= 1.0)]
            raise ValueError(f"u-values not in the open unit ball at {bad}")

    @property
    def d(self) -> int:
        return self.u.shape[1]

    def __len__(self) -> int:
        return self.u.shape[0]

    @classmethod
    def from_points(cls, points: Sequence[Sequence[complex]], labels: Sequence[str] | None = None):
        u = np.asarray(points, dtype=complex)
        if labels is None:
            labels = [f"x{k}" for k in range(len(u))]
        return cls(tuple(labels), u)

    @classmethod
    def random(cls, m: int, d: int, rng: np.random.Generator, max_radius: float = 0.95):
        z = rng.standard_normal((m, d)) + 1j * rng.standard_normal((m, d))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        r = max_radius * rng.uniform(0.0, 1.0, size=(m, 1)) ** (1.0 / (2 * d))
        return cls.from_points(z * r)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "points": [
                {"label": lab, "u": [[z.real, z.imag] for z in row]}
                for lab, row in zip(self.labels, self.u)
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> CnpSample:
        d = int(data["d"])
        labels, rows = [], []
        for p in data["points"]:
            row = [complex(*z) if isinstance(z, (list, tuple)) else complex(z) for z in p["u"]]
            if len(row) != d:
                raise ValueError(f"point {p.get('label')} has {len(row)} coordinates, expected {d}")
            labels.append(str(p.get("label", f"x{len(labels)}")))
            rows.append(row)
        return cls(tuple(labels), np.asarray(rows, dtype=complex).reshape(len(rows), d))


def kernel_matrix(sample: CnpSample) -> np.ndarray:
    """k(x_i, x_j) = 1 / (1 - <u(x_i), u(x_j)>)."""
    u = sample.u
    return 1.0 / (1.0 - u @ u.conj().T)


def _evaluate(f, z) -> complex:
    if isinstance(f, FreeSeries):
        return evaluate_scalar(f, z)
    return f(z)


@dataclass
class RestrictionReport:
    residual: float
    a_values: np.ndarray
    outer: bool
    outer_margin: float
    N: int
    criterion: str = OUTERNESS_CRITERION

    def to_json(self) -> dict:
        return {
            "residual": self.residual,
            "a_values": [[z.real, z.imag] for z in self.a_values],
            "outer": self.outer,
            "outer_margin": self.outer_margin,
            "N": self.N,
            "criterion": self.criterion,
        }


def restrict_smirnov(
    h_list: Sequence[Liftable], sample: CnpSample, N: int, seed: int = 0
) -> RestrictionReport:
    """Factor on the ball, then check h_i(u(x)) a(u(x)) = b_i(u(x)) on the sample."""
    pair = commutative_smirnov(h_list, N, d=sample.d, seed=seed, check_column=False)
    residual = 0.0
    a_vals = np.array([pair.a(z) for z in sample.u], dtype=complex)
    for h, b in zip(h_list, pair.b_list):
        for z, az in zip(sample.u, a_vals):
            residual = max(residual, abs(_evaluate(h, z) * az - b(z)))
    outer, margin = outer_restriction_check(pair.a, sample)
    return RestrictionReport(residual=residual, a_values=a_vals, outer=outer, outer_margin=margin, N=N)


def outer_restriction_check(a: MultiIndexSeries, sample: CnpSample) -> tuple[bool, float]:
    """(min_x |a(u(x))| > 0, min_x |a(u(x))|).

    When the kernel functions at the sample are independent, M_a^* acts on
    them diagonally with eigenvalues conj(a(u(x))), so this is exactly
    injectivity of M_a^* on the sampled span.
    """
    if len(sample) == 0:
        return True, float("inf")
    margin = min(abs(a(z)) for z in sample.u)
    return margin > 0, float(margin)


def kernel_coordinates(w: Sequence[complex], N: int) -> np.ndarray:
    """k_w = (1 - <z, w>)^{-1} truncated at degree N, in the orthonormal monomial basis."""
    w = np.asarray(w, dtype=complex)
    out = []
    for n in enumerate_multi_indices(len(w), N):
        out.append(np.prod(np.conj(w) ** np.asarray(n)) / np.sqrt(da_weight(n)))
    return np.asarray(out, dtype=complex)
