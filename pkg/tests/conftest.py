import math
from fractions import Fraction as F

import numpy as np

from catalytic.entropy import shannon
from catalytic.exact import ProbVector, apply_permutation, marginalize, tensor_all, uniform


def random_rational(rng, n, max_den=12, allow_zero=True):
    """Random distribution on n points with denominator at most max_den."""
    while True:
        den = int(rng.integers(max(n, 2), max_den + 1))
        cuts = np.sort(rng.integers(0, den + 1, size=n - 1))
        parts = np.diff(np.concatenate([[0], cuts, [den]]))
        if allow_zero or parts.min() > 0:
            return ProbVector([F(int(v), den) for v in parts])


def random_increasing_pair(rng, max_dim=4, max_den=12):
    """(p, p') with S(p') > S(p) and rank(p') >= rank(p), distinct spectra."""
    while True:
        n = int(rng.integers(2, max_dim + 1))
        p, pp = random_rational(rng, n, max_den), random_rational(rng, n, max_den)
        if shannon(pp) > shannon(p) + 1e-9 and pp.rank >= p.rank and p.sorted_desc() != pp.sorted_desc():
            return p, pp


def random_decreasing_pair(rng, max_dim=4, max_den=12):
    while True:
        n = int(rng.integers(2, max_dim + 1))
        p, pp = random_rational(rng, n, max_den), random_rational(rng, n, max_den)
        if shannon(pp) < shannon(p) - 1e-9:
            return p, pp


def replay_classical(cert):
    """Independent float replay of a classical certificate: (system marginal, catalyst marginal)."""
    d = cert.ancilla_dim
    parts = [cert.state] + ([uniform(d)] if d > 1 else []) + [cert.catalyst]
    final = apply_permutation(cert.dynamics, tensor_all(*parts))
    n_sys = 2 if d > 1 else 1
    sys = marginalize(final, list(range(n_sys)))
    cat = marginalize(final, list(range(n_sys, len(final.shape))))
    return np.array(sys.as_floats()), np.array(cat.as_floats())


def entropy_oracle(p):
    """Shannon entropy by brute summation, independent of the package."""
    return -sum(float(v) * math.log(float(v)) for v in p if v > 0)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
