import math

import numpy as np
import pytest

from fock_smirnov.commutative import MultiIndexSeries
from fock_smirnov.series import FreeSeries

SQ5, SQ7, SQ3, SQ2 = math.sqrt(5), math.sqrt(7), math.sqrt(3), math.sqrt(2)
C0, C1 = 0.5 * (SQ5 + 1), 0.5 * (SQ5 - 1)
D0, D1 = (SQ7 + SQ3) / (2 * SQ2), (SQ7 - SQ3) / (2 * SQ2)

# the three free lifts of z1 + z1 z2
EX1 = FreeSeries(2, {(1,): 1, (2, 1): 1})
EX2 = FreeSeries(2, {(1,): 1, (1, 2): 1})
EX3 = FreeSeries(2, {(1,): 1, (1, 2): 0.5, (2, 1): 0.5})
H_COMM = MultiIndexSeries(2, {(1, 0): 1, (1, 1): 1})


def random_series(rng, d, deg, density=0.6, complex_coeffs=True, constant=None):
    coeffs = {}
    for k in range(deg + 1):
        for w in np.ndindex(*([d] * k)):
            if rng.uniform() < density:
                c = rng.standard_normal()
                if complex_coeffs:
                    c = c + 1j * rng.standard_normal()
                coeffs[tuple(i + 1 for i in w)] = c
    if constant is not None:
        coeffs[()] = constant
    return FreeSeries(d, coeffs)


def random_multi_series(rng, d, deg, density=0.7):
    from fock_smirnov.words import enumerate_multi_indices

    coeffs = {}
    for n in enumerate_multi_indices(d, deg):
        if rng.uniform() < density:
            coeffs[n] = rng.standard_normal() + 1j * rng.standard_normal()
    return MultiIndexSeries(d, coeffs)


def geometric_inverse(c0, c1, N, letter=2, d=2):
    """Truncation of (c0 + c1 X_letter)^{-1}, written out from the geometric series."""
    return FreeSeries(d, {(letter,) * k: (1 / c0) * (-c1 / c0) ** k for k in range(N + 1)})


def max_coeff_diff(F, G):
    words = set(F.coeffs) | set(G.coeffs)
    return max((abs(F[w] - G[w]) for w in words), default=0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


# -- acceptance summary --------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
