"""Worked demonstrations: the qutrit counterexample table and catalytic cooling."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .catalysis import (
    SearchBudget,
    SearchStats,
    TransitionCertificate,
    build_theorem1_certificate,
    find_correlating_witness,
    rational_spectra,
)
from .constructions import Basis, decohere
from .entropy import majorizes, mutual_information, renyi_entropy
from .exact import Permutation, ProbVector
from .quantum import DensityMatrix, apply_local, eigvalsh, min_eigenvalue, partial_trace, tensor_q, trace_distance

N_MAX = 6
TOL_COOLING = 1e-6


class CoolingError(ValueError):
    def __init__(self, message: str, achieved_eps: float | None = None):
        super().__init__(message if achieved_eps is None else f"{message}; achieved epsilon {achieved_eps:.6g} bits")
        self.achieved_eps = achieved_eps


class CatalystNotFound(CoolingError):
    """The budgeted search found no catalyst for the requested epsilon."""


def fig2_example() -> TransitionCertificate:
    """diag(0, 1/2, 1/2) with catalyst (2/3, 1/3) goes to diag(1/6, 1/6, 2/3).

    The table is indexed (A, B) with B fastest; the permutation swaps
    (A0,B0) with (A1,B1) and (A1,B0) with (A2,B1).
    """
    half, third = Fraction(1, 2), Fraction(1, 3)
    p = ProbVector([0, half, half])
    p_prime = ProbVector([Fraction(1, 6), Fraction(1, 6), Fraction(2, 3)])
    q = ProbVector([2 * third, third])
    flat = lambda a, b: 2 * a + b  # noqa: E731
    perm = Permutation.from_cycles(6, f"({flat(0, 0)} {flat(1, 1)})({flat(1, 0)} {flat(2, 1)})")
    return TransitionCertificate(mode="conjecture", state=p, target=p_prime, catalyst=q, dynamics=perm,
                                 meta={"source": "qutrit counterexample table"})


def binary_entropy_bits(delta: float) -> float:
    if delta <= 0.0 or delta >= 1.0:
        return 0.0
    return -(delta * math.log2(delta) + (1 - delta) * math.log2(1 - delta))


def cold_delta(eps_bits: float, tol: float = 1e-12) -> float:
    """delta in (0, 1/2] with h(delta) = eps_bits, by bisection."""
    if eps_bits >= 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if binary_entropy_bits(mid) < eps_bits:
            lo = mid
        else:
            hi = mid
    return lo


def rational_delta(delta: float, max_denominator: int) -> Fraction:
    """Largest fraction not above ``delta`` with bounded denominator (keeps S(target) <= eps)."""
    f = Fraction(delta).limit_denominator(max_denominator)
    if f > delta:
        f = Fraction(math.floor(delta * max_denominator), max_denominator)
    return f


@dataclass
class CoolingReport:
    n: int
    pairs: int
    eps_bits: float
    delta: float
    cold_state: list[float]
    cold_entropy_bits: float
    cold_purity_distance: float
    catalyst_dim: int
    marginal_residuals: list[float]
    catalyst_residuals: list[float]
    mutual_information_pairs: list[list[float]]
    mutual_information_cold: list[list[float]]
    lambda_min_joint: list[float]
    lambda_min_target: list[float]
    lambda_ratio: list[float]
    lambda_min_with_catalyst: float
    lambda_min_initial: float
    majorization_holds: bool
    certificate_residuals: dict
    seconds: float
    units: str = "bits"
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (max(self.marginal_residuals) <= TOL_COOLING and max(self.catalyst_residuals) <= TOL_COOLING
                and self.majorization_holds)

    @property
    def max_pair_mi(self) -> float:
        mi = np.array(self.mutual_information_pairs)
        np.fill_diagonal(mi, 0.0)
        return float(mi.max()) if mi.size else 0.0

    def to_json(self) -> dict:
        out = dict(self.__dict__)
        out["pass"] = self.passed
        out["max_pair_mutual_information"] = self.max_pair_mi
        return out


def _check_qubit(rho: DensityMatrix) -> float:
    if rho.dim != 2:
        raise CoolingError("cooling acts on qubits")
    s = renyi_entropy(rho, 1, "bits").value
    if not s < 0.5:
        raise CoolingError(f"S(rho) = {s:.6g} bits; the protocol needs S(rho) < 1/2 bit")
    return s


def cooling_witness(rho: DensityMatrix, eps_bits: float, budget: SearchBudget | None = None,
                    max_denominator: int = 1000):
    """Dephasing-catalysis certificate for rho ⊗ rho -> diag(1-delta, delta) ⊗ 1_2."""
    budget = budget or SearchBudget(max_catalyst_dim=8, max_denominator=8, max_seconds=30.0,
                                    strategies=("product", "lp", "lp-catalyst"))
    delta = cold_delta(eps_bits)
    spec = rational_spectra(rho, rho).p
    delta_r = rational_delta(delta, max_denominator)
    if delta_r <= 0:
        raise CoolingError("target too pure for the rational grid", None)
    if delta_r >= spec.entries[-1]:
        delta_r = spec.entries[-1]
    pair = tensor_q(rho, rho)
    target_cold = DensityMatrix.from_diagonal([1 - float(delta_r), float(delta_r)])
    target = tensor_q(target_cold, DensityMatrix.maximally_mixed(2))
    spectra = rational_spectra(pair, target)
    stats = SearchStats()
    witness = find_correlating_witness(spectra.p, spectra.p_prime, budget, stats=stats)
    return pair, target, target_cold, delta_r, witness, stats


def achievable_epsilon(rho: DensityMatrix, budget: SearchBudget | None = None,
                       grid=(0.06, 0.08, 0.1, 0.12, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45)) -> float | None:
    """Smallest grid epsilon (bits) for which the budgeted witness search succeeds."""
    s = _check_qubit(rho)
    for eps in grid:
        if eps >= s:
            return eps
        *_, witness, _ = cooling_witness(rho, eps, budget)
        if witness is not None:
            return eps
    return None


def cooling_run(rho: DensityMatrix, eps_bits: float, n: int, budget: SearchBudget | None = None,
                n_max: int = N_MAX, report_achievable: bool = True) -> CoolingReport:
    """Run the sequential catalytic cooling protocol on ``n`` qubits (``n/2`` pairs).

    Every pair meets the same catalyst through one fixed unitary, after
    which the catalyst is dephased.  Marginals, catalyst return, pairwise
    mutual informations and the minimum-eigenvalue ratios are recorded.
    """
    start = time.monotonic()
    s_rho = _check_qubit(rho)
    if not eps_bits > 0:
        raise CoolingError("epsilon must be positive")
    if n < 2 or n % 2 or n > n_max:
        raise CoolingError(f"n must be even and between 2 and {n_max}")
    pair, target, target_cold, delta, witness, stats = cooling_witness(rho, eps_bits, budget)
    if witness is None:
        achieved = achievable_epsilon(rho, budget) if report_achievable else None
        raise CatalystNotFound(f"no catalyst found for epsilon = {eps_bits:g} bits within budget "
                           f"({stats.cells} catalysts tried)", achieved)
    cert = build_theorem1_certificate(pair, target, witness)
    u = np.asarray(cert.dynamics)
    sigma = cert.catalyst
    k = n // 2
    m = witness.catalyst_dim
    dims = [4] * k + list(sigma.dims)
    cat_idx = [k, k + 1]
    state = tensor_q(*([pair.with_dims([4])] * k), sigma)
    basis_b, basis_r = Basis.computational(sigma.dims[0]), Basis.computational(sigma.dims[1])
    marg_res, cat_res = [], []
    for i in range(k):
        state = apply_local(state, u, [i] + cat_idx)
        state = decohere(decohere(state, basis_b, k), basis_r, k + 1)
        cat_res.append(trace_distance(partial_trace(state, cat_idx).matrix, sigma.matrix))
    for i in range(k):
        marg_res.append(trace_distance(partial_trace(state, [i]).matrix, target.matrix))
    qubits = partial_trace(state, list(range(k)))
    # split every pair into its cold and hot qubit
    split = qubits.with_dims([2] * (2 * k))
    mi_pairs = [[0.0] * k for _ in range(k)]
    mi_cold = [[0.0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            mi_pairs[i][j] = mi_pairs[j][i] = mutual_information(qubits, [i], [j])
            mi_cold[i][j] = mi_cold[j][i] = mutual_information(split, [2 * i], [2 * j])
    lam, lam_t, ratio = [], [], []
    for j in range(1, k + 1):
        gamma = partial_trace(state, list(range(j)))
        lam_j = max(min_eigenvalue(gamma), 0.0)
        lam_tj = min_eigenvalue(target) ** j
        lam.append(lam_j)
        lam_t.append(lam_tj)
        ratio.append(lam_tj / lam_j if lam_j > 0 else math.inf)
    initial = tensor_q(*([pair.with_dims([4])] * k), sigma)
    w_init = np.sort(np.clip(np.real(np.diag(initial.matrix)), 0, None))[::-1]
    w_final = np.clip(eigvalsh(state.matrix), 0, None)
    w_final = w_final / w_final.sum()
    cold = np.real(np.diag(target_cold.matrix))
    notes = []
    if eps_bits >= s_rho:
        notes.append("epsilon is at least S(rho): the target is reachable without cooling")
    return CoolingReport(
        n=n, pairs=k, eps_bits=eps_bits, delta=float(delta), cold_state=[float(v) for v in cold],
        cold_entropy_bits=binary_entropy_bits(float(delta)), cold_purity_distance=float(delta),
        catalyst_dim=sigma.dim, marginal_residuals=marg_res, catalyst_residuals=cat_res,
        mutual_information_pairs=mi_pairs, mutual_information_cold=mi_cold,
        lambda_min_joint=lam, lambda_min_target=lam_t, lambda_ratio=ratio,
        lambda_min_with_catalyst=max(min_eigenvalue(state), 0.0), lambda_min_initial=float(w_init[-1]),
        majorization_holds=majorizes(w_init, w_final, 1e-9),
        certificate_residuals=cert.meta.get("residuals", {}), seconds=time.monotonic() - start,
        notes=notes + [f"catalyst B dimension {m}, found by {stats.found_by}"],
    )


def rate_table(rho: DensityMatrix, eps_bits: float, n: int, n_max: int = N_MAX) -> list[dict]:
    """Cold qubits n/2 from the protocol against the bound n(1 - S(rho)) bits, for even sizes up to n."""
    s = _check_qubit(rho)
    if not eps_bits > 0:
        raise CoolingError("epsilon must be positive")
    if n < 2 or n % 2 or n > n_max:
        raise CoolingError(f"n must be even and between 2 and {n_max}")
    return [{"n": size, "cold_qubits": size // 2, "bound_bits": size * (1 - s),
             "entropy_bits": s, "eps_bits": eps_bits} for size in range(2, n + 1, 2)]
