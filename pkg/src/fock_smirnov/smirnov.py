"""Canonical inner-outer (Smirnov) pairs for polynomial free functions.

For H = (H_1, ..., H_k) the graph of F -> (H_1 F, ..., H_k F) carries the
inner product <F, (I + sum_i M_{H_i}^* M_{H_i}) F'>.  The vector in the graph
representing F (+) HF -> <F, xi_empty> has first component c solving

    G c = e_empty,   G = I + sum_i M_{H_i}^* M_{H_i},

and squared norm c_empty.  Normalizing gives the wandering vector, whose
components are A = c / sqrt(c_empty) and B_i = H_i A.

G is a finite combination tau_0 I + sum_g (tau_g L_g + conj(tau_g) L_g^*), so
its compression to degree <= N leaves invariant the span of the words that
can be reached from the empty word by prepending or stripping the words g
with tau_g != 0.  The solve is carried out on that span only; it is exact
(not an approximation) and keeps the worked examples at N = 30 cheap.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .fockops import gram_defect
from .series import (
    FreeSeries,
    cauchy_product,
    evaluate,
    fock_norm_sq,
    invert,
    scale,
)
from .words import EMPTY, Word, count_words, enumerate_words

DENSE_SOLVE_LIMIT = 4000
DENSE_ISOMETRY_LIMIT = 1500
SAMPLE_RADIUS_SQ = 0.81


@dataclass(frozen=True)
class SmirnovPair:
    A: FreeSeries
    B_list: tuple[FreeSeries, ...]
    N: int
    representer_norm_sq: float
    phase: str = "a_empty>0"

    @property
    def d(self) -> int:
        return self.A.d

    @property
    def a_empty(self) -> float:
        return self.A.constant.real

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "phase": self.phase,
            "representer_norm_sq": self.representer_norm_sq,
            "A": self.A.to_json(),
            "B": [B.to_json() for B in self.B_list],
        }


@dataclass
class VerificationReport:
    isometry_residual: float
    factorization_residual: float
    norm_identity_residual: float
    invertibility_margin: float
    N: int
    headroom_degree: int
    isometry_method: str
    a_inverse_norm_sq: float
    target_norm_sq: float
    n_samples: int
    seed: int
    extra: dict = field(default_factory=dict)

    def residuals(self) -> dict[str, float]:
        return {
            "isometry_residual": self.isometry_residual,
            "factorization_residual": self.factorization_residual,
            "norm_identity_residual": self.norm_identity_residual,
        }

    def passed(self, tol: float) -> bool:
        return all(r <= tol for r in self.residuals().values()) and self.invertibility_margin > 0

    def to_json(self) -> dict:
        out = asdict(self)
        out.update(out.pop("extra"))
        return out


def _ambient_d(H_list: Sequence[FreeSeries], d: int | None) -> int:
    if d is None:
        if not H_list:
            raise ValueError("d is required when H_list is empty")
        d = H_list[0].d
    for H in H_list:
        if H.d != d:
            raise ValueError("all series must share the ambient dimension")
    return d


def gram_symbol(F_list: Sequence[FreeSeries]) -> dict[Word, complex]:
    """Coefficients tau_g with sum_F M_F^* M_F = tau_0 I + sum_g (tau_g L_g + h.c.).

    tau_g = sum_F sum_b conj(f_b) f_{bg}; only g with tau_g != 0 are returned.
    """
    tau: dict[Word, complex] = {}
    for F in F_list:
        terms = F.coeffs
        for b, fb in terms.items():
            cb = np.conj(fb)
            for w, fw in terms.items():
                if len(w) >= len(b) and w[: len(b)] == b:
                    g = w[len(b):]
                    tau[g] = tau.get(g, 0j) + cb * fw
    return {g: t for g, t in tau.items() if t != 0}


def reachable_words(tau: dict[Word, complex], N: int) -> list[Word]:
    """Words of length <= N reachable from the empty word under the moves w -> gw, gw -> w."""
    shifts = [g for g in tau if g]
    seen = {EMPTY}
    queue = deque([EMPTY])
    while queue:
        w = queue.popleft()
        for g in shifts:
            up = g + w
            if len(up) <= N and up not in seen:
                seen.add(up)
                queue.append(up)
            if len(w) >= len(g) and w[: len(g)] == g:
                down = w[len(g):]
                if down not in seen:
                    seen.add(down)
                    queue.append(down)
    return sorted(seen, key=lambda w: (len(w), w))


def symbol_matrix(tau: dict[Word, complex], basis: Sequence[Word], N: int, shift: float = 0.0):
    """Compression of shift*I + tau_0 I + sum_g (tau_g L_g + h.c.) to ``basis`` (sparse CSR).

    ``basis`` must be closed under the moves of :func:`reachable_words` up to
    length N, or be all words of length <= N.
    """
    index = {w: k for k, w in enumerate(basis)}
    rows, cols, vals = [], [], []
    diag = shift + tau.get(EMPTY, 0j)
    for k, w in enumerate(basis):
        if diag != 0:
            rows.append(k)
            cols.append(k)
            vals.append(diag)
        for g, t in tau.items():
            if not g or len(g) + len(w) > N:
                continue
            j = index.get(g + w)
            if j is None:
                continue
            rows += [j, k]
            cols += [k, j]
            vals += [t, np.conj(t)]
    n = len(basis)
    return scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(n, n), dtype=complex)


def graph_representer(
    H_list: Sequence[FreeSeries], N: int, d: int | None = None, method: str = "sparse"
) -> FreeSeries:
    """Solve G c = e_empty on words of length <= N; returns c as a series.

    ``method="dense"`` assembles the full :func:`gram_defect` matrix and uses a
    Cholesky solve; ``"sparse"`` restricts to the reachable words first.
    """
    d = _ambient_d(H_list, d)
    if method == "dense":
        G = gram_defect(H_list, N, d=d)
        basis = enumerate_words(d, N)
        rhs = np.zeros(len(basis), dtype=complex)
        rhs[0] = 1.0
        c = _hpd_solve(G, rhs)
        return FreeSeries.from_vector(d, basis, c)
    if method != "sparse":
        raise ValueError(f"unknown method {method!r}")
    tau = gram_symbol(H_list)
    basis = reachable_words(tau, N)
    G = symbol_matrix(tau, basis, N, shift=1.0)
    rhs = np.zeros(len(basis), dtype=complex)
    rhs[0] = 1.0
    if len(basis) <= DENSE_SOLVE_LIMIT:
        c = _hpd_solve(G.toarray(), rhs)
    else:
        c = scipy.sparse.linalg.spsolve(G.tocsc(), rhs)
    return FreeSeries.from_vector(d, basis, c)


def _hpd_solve(G: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    try:
        factor = scipy.linalg.cho_factor(G, lower=True)
    except np.linalg.LinAlgError as exc:  # G >= I, so this is a bug upstream
        raise RuntimeError("Gram matrix is not positive definite") from exc
    return scipy.linalg.cho_solve(factor, rhs)


def canonical_pair(
    H_list: Sequence[FreeSeries], N: int, d: int | None = None, method: str = "sparse"
) -> SmirnovPair:
    """Canonical (A, B_1, ..., B_k) with a_empty > 0, A truncated at degree N."""
    d = _ambient_d(H_list, d)
    c = graph_representer(H_list, N, d=d, method=method)
    c0 = c.constant
    norm_sq = float(abs(c0))
    if not norm_sq > 0:
        raise RuntimeError("degenerate representer")
    # unimodular rotation so that a_empty is real and positive
    coeffs = scale(complex(np.conj(c0) / abs(c0)) / math.sqrt(norm_sq), c).coeffs
    coeffs[EMPTY] = math.sqrt(norm_sq)  # drop roundoff in the imaginary part
    A = FreeSeries(d, coeffs)
    B_list = tuple(cauchy_product(H, A, N + H.degree) for H in H_list)
    return SmirnovPair(A=A, B_list=B_list, N=N, representer_norm_sq=norm_sq)


def a_inverse(pair: SmirnovPair, N: int | None = None) -> FreeSeries:
    return invert(pair.A, pair.N if N is None else N)


def sample_ball_tuples(
    d: int, count: int, seed: int = 0, radius_sq: float = SAMPLE_RADIUS_SQ
) -> list[np.ndarray]:
    """Reproducible random tuples with ||sum_j X_j X_j^*|| <= radius_sq, sizes cycling 1, 2, 3."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        n = 1 + k % 3
        X = rng.standard_normal((d, n, n)) + 1j * rng.standard_normal((d, n, n))
        S = np.einsum("jab,jcb->ac", X, X.conj())
        top = float(np.linalg.eigvalsh(S)[-1])
        target = radius_sq * rng.uniform(0.05, 1.0)
        out.append(X * math.sqrt(target / top))
    return out


def isometry_residual(pair: SmirnovPair, K: int) -> tuple[float, str]:
    """||Phi^* Phi - I|| on the words of length <= K, Phi = (A; B_1; ...).

    Exact spectral norm when the block is small, otherwise the upper bound
    |tau_0 - 1| + 2 sum_{0<|g|<=K} |tau_g| from the symbol of Phi^* Phi.
    """
    tau = gram_symbol((pair.A,) + pair.B_list)
    d = pair.d
    if count_words(d, K) <= DENSE_ISOMETRY_LIMIT:
        basis = enumerate_words(d, K)
        T = symbol_matrix(tau, basis, K, shift=-1.0).toarray()
        if not T.size:
            return 0.0, "dense"
        return float(np.max(np.abs(np.linalg.eigvalsh(T)))), "dense"
    bound = abs(tau.get(EMPTY, 0j) - 1.0)
    bound += 2.0 * sum(abs(t) for g, t in tau.items() if g and len(g) <= K)
    return float(bound), "symbol-bound"


def verify_pair(
    H_list: Sequence[FreeSeries],
    pair: SmirnovPair,
    N: int | None = None,
    tol: float = 1e-8,
    seed: int = 0,
    n_samples: int = 10,
) -> VerificationReport:
    """Residuals of the isometry, factorization and norm identities for ``pair``."""
    N = pair.N if N is None else N
    max_deg = max((H.degree for H in H_list), default=0)
    K = max(N - max_deg - 1, 0)
    iso, method = isometry_residual(pair, K)

    fact = 0.0
    margin = math.inf
    for X in sample_ball_tuples(pair.d, max(n_samples, 10), seed=seed):
        AX = evaluate(pair.A, X)
        margin = min(margin, float(np.linalg.svd(AX, compute_uv=False)[-1]))
        for H, B in zip(H_list, pair.B_list):
            R = evaluate(H, X) @ AX - evaluate(B, X)
            fact = max(fact, float(np.linalg.norm(R, 2)))

    inv_norm = fock_norm_sq(a_inverse(pair, N))
    target = 1.0 + sum(fock_norm_sq(H) for H in H_list)
    report = VerificationReport(
        isometry_residual=iso,
        factorization_residual=fact,
        norm_identity_residual=abs(inv_norm - target),
        invertibility_margin=margin,
        N=N,
        headroom_degree=K,
        isometry_method=method,
        a_inverse_norm_sq=inv_norm,
        target_norm_sq=target,
        n_samples=max(n_samples, 10),
        seed=seed,
    )
    report.extra = {"tol": tol, "passed": report.passed(tol)}
    return report


def fejer_riesz_degree1(r0: float, r1: complex) -> tuple[float, float]:
    """Outer factor of r0 + r1 z + conj(r1) conj(z) = |c0 + c1 w z|^2 on the circle, |w| = 1.

    Returns the real pair c0 >= c1 >= 0 (the phase of r1 is carried by w).
    """
    a = abs(complex(r1))
    if not r0 > 2.0 * a:
        raise ValueError("symbol is not strictly positive on the circle")
    plus = math.sqrt(r0 + 2.0 * a)
    minus = math.sqrt(r0 - 2.0 * a)
    return 0.5 * (plus + minus), 0.5 * (plus - minus)
