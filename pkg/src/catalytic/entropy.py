"""Rényi entropies, majorization and trumping diagnostics.

Negative orders need care: the literal ``S_alpha`` for ``alpha < 0`` grows
when a distribution becomes *more* ordered.  :func:`renyi_entropy` returns the
literal value; :func:`renyi_monotone` flips its sign for ``alpha < 0`` so that
every grid point is non-decreasing along majorization.  Trumping verdicts and
violation scans use the monotone form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exact import JointDist
from .quantum import DensityMatrix, eigvalsh, partial_trace

TOL_RANK = 1e-9
TOL_MAJOR = 1e-12
TOL_NORM = 1e-10
INF = math.inf
ALPHA_GRID: tuple[float, ...] = (-INF, -4.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 4.0, INF)


class EntropyError(ValueError):
    pass


@dataclass(frozen=True)
class EntropyValue:
    value: float
    units: str
    alpha: float
    infinite: bool = False

    def __float__(self):
        return self.value


def _log(units: str):
    if units == "nats":
        return math.log
    if units == "bits":
        return math.log2
    raise EntropyError(f"unknown units {units!r}")


def spectrum_of(state) -> list[float]:
    """Probability spectrum of a state as non-negative floats, tiny values zeroed."""
    if isinstance(state, DensityMatrix):
        w = [float(v) for v in eigvalsh(state.matrix)]
        return [v if v > TOL_RANK else 0.0 for v in w]
    if isinstance(state, JointDist):
        return [float(e) for e in state.entries]
    vals = list(state)
    if vals and all(isinstance(v, (Fraction, int)) for v in vals):
        return [float(v) for v in vals]
    return [float(v) if float(v) > TOL_RANK else 0.0 for v in vals]


def rank_of(state) -> int:
    if isinstance(state, JointDist):
        return state.rank
    return sum(1 for v in spectrum_of(state) if v > 0)


def renyi_entropy(state, alpha: float, units: str = "nats") -> EntropyValue:
    """``S_alpha = log(sum p^alpha) / (1 - alpha)`` with the usual limits.

    ``alpha = 0`` gives log rank, ``1`` Shannon/von Neumann, ``inf`` is
    ``-log p_max`` and ``-inf`` is ``-log p_min`` over the full support.
    Rank-deficient states at negative order come back flagged infinite.
    """
    log = _log(units)
    alpha = float(alpha)
    p = spectrum_of(state)
    pos = [v for v in p if v > 0]
    deficient = len(pos) < len(p)
    if alpha == 1.0:
        return EntropyValue(-sum(v * log(v) for v in pos), units, alpha)
    if alpha == 0.0:
        return EntropyValue(log(len(pos)), units, alpha)
    if alpha == INF:
        return EntropyValue(-log(max(pos)), units, alpha)
    if alpha < 0 and deficient:
        return EntropyValue(INF, units, alpha, infinite=True)
    if alpha == -INF:
        return EntropyValue(-log(min(pos)), units, alpha)
    # factor out p_max so large |alpha| does not overflow
    top = max(pos) if alpha > 0 else min(pos)
    s = sum((v / top) ** alpha for v in pos)
    return EntropyValue((alpha * log(top) + log(s)) / (1.0 - alpha), units, alpha)


def renyi_monotone(state, alpha: float, units: str = "nats") -> float:
    """Sign-corrected Rényi entropy, non-decreasing along majorization for every alpha."""
    s = renyi_entropy(state, alpha, units)
    return -s.value if alpha < 0 else s.value


def shannon(state, units: str = "nats") -> float:
    return renyi_entropy(state, 1.0, units).value


def negentropy(state, units: str = "nats") -> float:
    n = state.dim if isinstance(state, DensityMatrix) else len(spectrum_of(state))
    return _log(units)(n) - shannon(state, units)


def mutual_information(rho: DensityMatrix, a: Sequence[int], b: Sequence[int], units: str = "bits") -> float:
    a, b = sorted(a), sorted(b)
    s_a = shannon(partial_trace(rho, a), units)
    s_b = shannon(partial_trace(rho, b), units)
    s_ab = shannon(partial_trace(rho, sorted(a + b)), units)
    return s_a + s_b - s_ab


def _normalized(v: Sequence, exact: bool) -> list:
    if exact:
        vals = [Fraction(x) for x in v]
        if sum(vals) != 1:
            raise EntropyError(f"vector sums to {sum(vals)}, not 1")
        return vals
    vals = [float(x) for x in v]
    if abs(sum(vals) - 1.0) > TOL_NORM:
        raise EntropyError(f"vector sums to {sum(vals)!r}, not 1")
    return vals


def partial_sum_gaps(x: Sequence, y: Sequence) -> list:
    """Top-k sums of sorted x minus those of sorted y, k = 1..n (zero padded)."""
    n = max(len(x), len(y))
    xs = sorted(list(x) + [0] * (n - len(x)), reverse=True)
    ys = sorted(list(y) + [0] * (n - len(y)), reverse=True)
    gaps, sx, sy = [], 0, 0
    for a, b in zip(xs, ys):
        sx += a
        sy += b
        gaps.append(sx - sy)
    return gaps


def majorizes(x: Sequence, y: Sequence, tol: float = TOL_MAJOR) -> bool:
    """True iff x ⪰ y; exact when both inputs are rational."""
    if isinstance(x, JointDist):
        x = x.entries
    if isinstance(y, JointDist):
        y = y.entries
    exact = all(isinstance(v, (Fraction, int)) for v in list(x) + list(y))
    x, y = _normalized(x, exact), _normalized(y, exact)
    gaps = partial_sum_gaps(x, y)
    if exact:
        return all(g >= 0 for g in gaps)
    return all(g >= -tol for g in gaps)


@dataclass
class TrumpingVerdict:
    alpha_grid: list[float]
    rows: list[dict]
    violations: list[tuple[float, float, float]]
    passed: bool
    grid_only: bool = True

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "grid_only": self.grid_only,
            "rows": [{k: _jsonable(v) for k, v in r.items()} for r in self.rows],
            "violations": [[_jsonable(a), _jsonable(s), _jsonable(t)] for a, s, t in self.violations],
        }


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return "inf" if v > 0 else "-inf"
    return v


def _scan(before, after, alphas: Iterable[float], units: str, tol: float):
    rows, violations = [], []
    for a in alphas:
        s0 = renyi_entropy(before, a, units)
        s1 = renyi_entropy(after, a, units)
        m0 = renyi_monotone(before, a, units)
        m1 = renyi_monotone(after, a, units)
        if m0 == m1:
            delta = 0.0
        else:
            delta = m1 - m0
        if math.isnan(delta):
            delta = 0.0
        sign = 0 if abs(delta) <= tol else (1 if delta > 0 else -1)
        rows.append({"alpha": a, "before": s0.value, "after": s1.value,
                     "monotone_change": delta, "sign": sign})
        if sign < 0:
            violations.append((a, s0.value, s1.value))
    return rows, violations


def trumping_check(rho, rho_prime, extra_alphas: Sequence[float] = (), units: str = "nats",
                   tol: float = TOL_MAJOR) -> TrumpingVerdict:
    """Grid check of the Rényi conditions for ``rho`` trumping into ``rho_prime``."""
    n0 = len(spectrum_of(rho))
    n1 = len(spectrum_of(rho_prime))
    if n0 != n1:
        raise EntropyError(f"dimension mismatch {n0} vs {n1}")
    grid = sorted(set(ALPHA_GRID) | {float(a) for a in extra_alphas})
    rows, violations = _scan(rho, rho_prime, grid, units, tol)
    return TrumpingVerdict(grid, rows, violations, not violations)


@dataclass
class MonotoneScan:
    rows: list[dict]
    violations: list[tuple[float, float, float]]
    mode: str
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "rows": [{k: _jsonable(v) for k, v in r.items()} for r in self.rows],
            "violations": [[_jsonable(a), _jsonable(s), _jsonable(t)] for a, s, t in self.violations],
            "notes": self.notes,
        }


def monotone_violation_scan(cert, extra_alphas: Sequence[float] = (), units: str = "nats",
                            tol: float = TOL_MAJOR) -> MonotoneScan:
    """List every grid order that a verified catalytic transition strictly decreases."""
    from .catalysis.certificate import CertificateError, verify_certificate

    report = verify_certificate(cert)
    if not report.passed:
        raise CertificateError("certificate does not verify; refusing to scan it")
    grid = sorted(set(ALPHA_GRID) | {float(a) for a in extra_alphas})
    rows, violations = _scan(cert.state, cert.target, grid, units, tol)
    return MonotoneScan(rows, violations, cert.mode)


def random_majorizing_pair(n: int, rng: np.random.Generator, steps: int | None = None):
    """Float pair (x, y) with x ⪰ y, y obtained from x by random T-transforms."""
    x = rng.dirichlet(np.ones(n) * rng.uniform(0.3, 2.0))
    y = x.copy()
    for _ in range(steps if steps is not None else 2 * n):
        i, j = rng.choice(n, size=2, replace=False)
        t = rng.uniform(0, 1)
        y[i], y[j] = (1 - t) * y[i] + t * y[j], t * y[i] + (1 - t) * y[j]
    return x, y
