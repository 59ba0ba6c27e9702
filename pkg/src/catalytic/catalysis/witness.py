"""Correlated-catalyst witnesses and the bounded searches that find them.

A witness for ``p -> p'`` is a catalyst ``tau`` with a joint table ``r`` whose
marginals are ``p'`` and ``tau`` and with ``p ⊗ tau ⪰ r``.  No closed-form
construction is used; the search walks catalyst dimension and denominator
upwards and tries, per catalyst,

* the uncorrelated table ``p' ⊗ tau``,
* a branch-and-bound over placements of the atoms of ``p ⊗ tau`` into the
  cells of ``r`` (so ``r`` is a permutation of ``p ⊗ tau``),
* a linear program over ``r`` whose solution is snapped to a small lattice
  and re-checked exactly.

scipy's HiGHS only proposes candidates; acceptance is always the exact
rational majorization test.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterator, Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import coo_matrix

from ..entropy import majorizes, shannon
from ..exact import JointDist, ProbVector, as_fraction, marginalize, tensor_dist

TOL_ENTROPY = 1e-12


class WitnessError(ValueError):
    pass


@dataclass(frozen=True)
class WitnessPair:
    tau: ProbVector
    joint: JointDist

    def __post_init__(self):
        if len(self.joint.shape) != 2 or self.joint.shape[1] != self.tau.dimension:
            raise WitnessError(f"joint shape {self.joint.shape} does not match catalyst of size {self.tau.dimension}")

    @property
    def catalyst_dim(self) -> int:
        return self.tau.dimension

    def problems(self, p: ProbVector, p_prime: ProbVector) -> list[str]:
        out = []
        n = self.joint.shape[0]
        if n != p.dimension or n != p_prime.dimension:
            out.append("system dimension mismatch")
            return out
        if marginalize(self.joint, [0]) != p_prime:
            out.append("row marginal differs from target")
        if marginalize(self.joint, [1]) != self.tau:
            out.append("column marginal differs from catalyst")
        if not majorizes(tensor_dist(p, self.tau).entries, self.joint.entries):
            out.append("p ⊗ tau does not majorize the joint table")
        return out

    def check(self, p: ProbVector, p_prime: ProbVector) -> None:
        problems = self.problems(p, p_prime)
        if problems:
            raise WitnessError("; ".join(problems))

    def stripped(self) -> "WitnessPair":
        """Drop catalyst atoms of probability zero (their columns are zero too)."""
        keep = [b for b, t in enumerate(self.tau.entries) if t != 0]
        if len(keep) == self.tau.dimension:
            return self
        n, m = self.joint.shape
        entries = [self.joint.entries[a * m + b] for a in range(n) for b in keep]
        return WitnessPair(ProbVector([self.tau.entries[b] for b in keep]), JointDist(entries, (n, len(keep))))

    def to_json(self) -> dict:
        from ..serialize import dist_to_json
        return {"tau": dist_to_json(self.tau), "joint": dist_to_json(self.joint)}


@dataclass
class SearchBudget:
    """Limits for the bounded searches.

    ``max_atoms`` caps the common denominator of ``p ⊗ q`` in the conjecture
    search and the table size ``n·d²·m`` of a controlled-permutation realization when
    ``realizable`` witnesses are requested.
    """

    max_catalyst_dim: int = 4
    max_denominator: int = 12
    max_atoms: int = 200_000
    max_seconds: float = 20.0
    max_nodes: int = 50_000
    strategies: tuple[str, ...] = ("product", "permutation", "lp")


@dataclass
class SearchStats:
    cells: int = 0
    nodes: int = 0
    lp_calls: int = 0
    out_of_budget: bool = False
    seconds: float = 0.0
    found_by: str | None = None

    def to_json(self) -> dict:
        return dict(self.__dict__)


def as_prob_vector(v) -> ProbVector:
    if isinstance(v, ProbVector):
        return v
    if isinstance(v, JointDist):
        return ProbVector(v.entries)
    return ProbVector([as_fraction(x) for x in v])


def impossibility_reason(p: ProbVector, p_prime: ProbVector, epsilon: Fraction = Fraction(0)) -> str | None:
    """Reason why no catalytic permutation can reach ``p'`` exactly, if any.

    Subadditivity of entropy on the final joint state gives S(p) <= S(p'),
    with equality only for a product output, which forces equal spectra.
    Ranks cannot drop under an exact marginal condition either.
    """
    if epsilon > 0:
        return None
    s0, s1 = shannon(p), shannon(p_prime)
    if s1 < s0 - TOL_ENTROPY:
        return f"entropy decreases ({s0:.12g} -> {s1:.12g} nats); subadditivity forbids it"
    if abs(s1 - s0) <= TOL_ENTROPY and p.sorted_desc() != p_prime.sorted_desc():
        return "equal entropy with different spectra; equality in subadditivity forces a product output"
    if p_prime.rank < p.rank:
        return f"rank decreases ({p.rank} -> {p_prime.rank})"
    return None


def check_witness_preconditions(p: ProbVector, p_prime: ProbVector) -> None:
    if p.dimension != p_prime.dimension:
        raise WitnessError("p and p' must have the same dimension")
    if p.sorted_desc() == p_prime.sorted_desc():
        raise WitnessError("p and p' have equal spectra; a strict entropy increase is required")
    if not shannon(p_prime) > shannon(p) + TOL_ENTROPY:
        raise WitnessError("S(p') must exceed S(p)")
    if p_prime.rank < p.rank:
        raise WitnessError("rank(p') must be at least rank(p)")


def catalyst_candidates(max_dim: int, max_den: int, min_dim: int = 2) -> Iterator[ProbVector]:
    """Full-rank catalysts with descending entries, by dimension then denominator."""
    seen = set()
    for m in range(min_dim, max_dim + 1):
        for q in range(m, max_den + 1):
            for parts in _partitions(q, m, q):
                tau = tuple(Fraction(k, q) for k in parts)
                if tau not in seen:
                    seen.add(tau)
                    yield ProbVector(tau)


def _partitions(total: int, parts: int, cap: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        if 1 <= total <= cap:
            yield (total,)
        return
    for first in range(min(cap, total - parts + 1), 0, -1):
        if first * parts < total:
            break
        for rest in _partitions(total - first, parts - 1, first):
            yield (first,) + rest


# ---------------------------------------------------------------- atom search

@dataclass
class PlacementResult:
    table: list[int] | None
    nodes: int
    complete: bool


def place_atoms(values: Sequence[int], rows: Sequence[int], cols: Sequence[int], slack: int = 0,
                node_limit: int = 50_000, deadline: float | None = None) -> PlacementResult:
    """Branch and bound: arrange integer ``values`` in an n×m grid.

    Column sums must equal ``cols`` exactly; row sums must equal ``rows`` up
    to a total absolute deviation of ``slack``.  Cells are filled row-major,
    trying distinct values in descending order, with top-k / bottom-k sum
    bounds pruning every partially filled row and column.
    """
    n, m = len(rows), len(cols)
    if len(values) != n * m or sum(cols) != sum(values):
        return PlacementResult(None, 0, True)
    vals = sorted(set(values), reverse=True)
    counts = [values.count(v) for v in vals]
    row_left = [m] * n
    col_left = [n] * m
    row_need = list(rows)
    col_need = list(cols)
    table = [0] * (n * m)
    state = {"nodes": 0, "slack": slack, "stopped": False}

    def k_extreme(k: int, largest: bool) -> int:
        total = 0
        idx = range(len(vals)) if largest else range(len(vals) - 1, -1, -1)
        for i in idx:
            if k == 0:
                break
            take = min(k, counts[i])
            total += take * vals[i]
            k -= take
        return total

    def feasible(need: int, left: int, tol: int) -> bool:
        if left == 0:
            return abs(need) <= tol
        return k_extreme(left, False) - tol <= need <= k_extreme(left, True) + tol

    def rec(cell: int) -> bool:
        if cell == n * m:
            return True
        state["nodes"] += 1
        if state["nodes"] > node_limit or (deadline is not None and state["nodes"] % 256 == 0
                                           and time.monotonic() > deadline):
            state["stopped"] = True
            return False
        a, b = divmod(cell, m)
        for i, v in enumerate(vals):
            if counts[i] == 0 or v > col_need[b]:
                continue
            if slack == 0 and v > row_need[a]:
                continue
            counts[i] -= 1
            row_need[a] -= v
            col_need[b] -= v
            row_left[a] -= 1
            col_left[b] -= 1
            spent = 0
            ok = feasible(col_need[b], col_left[b], 0)
            if ok:
                if row_left[a] == 0:
                    spent = abs(row_need[a])
                    ok = spent <= state["slack"]
                else:
                    ok = feasible(row_need[a], row_left[a], state["slack"])
            if ok:
                state["slack"] -= spent
                table[cell] = v
                if rec(cell + 1):
                    return True
                state["slack"] += spent
            counts[i] += 1
            row_need[a] += v
            col_need[b] += v
            row_left[a] += 1
            col_left[b] += 1
            if state["stopped"]:
                return False
        return False

    found = rec(0)
    return PlacementResult(list(table) if found else None, state["nodes"], not state["stopped"])


def _scaled(x: Sequence[Fraction], rows: Sequence[Fraction], cols: Sequence[Fraction]):
    den = lcm(*(v.denominator for v in list(x) + list(rows) + list(cols)))
    to_int = lambda seq: [int(v * den) for v in seq]  # noqa: E731
    return den, to_int(x), to_int(rows), to_int(cols)


def permutation_witness(p: ProbVector, p_prime: ProbVector, tau: ProbVector, *, slack: Fraction = Fraction(0),
                        node_limit: int = 50_000, deadline: float | None = None,
                        max_atoms: int | None = None) -> tuple[JointDist | None, PlacementResult | None]:
    x = tensor_dist(p, tau).entries
    den, xi, ri, ci = _scaled(x, p_prime.entries, tau.entries)
    if max_atoms is not None and den > max_atoms:
        return None, None
    res = place_atoms(xi, ri, ci, int(math.floor(slack * den)), node_limit, deadline)
    if res.table is None:
        return None, res
    return JointDist([Fraction(v, den) for v in res.table], (p.dimension, tau.dimension)), res


# ---------------------------------------------------------------- LP proposals

def lp_joint(x: Sequence[float], rows: Sequence[float], cols: Sequence[float]) -> tuple[float, np.ndarray | None]:
    """Max-margin table r with given marginals and ``x ⪰ r`` (floats).

    Top-k sums use the standard dual encoding
    ``k t_k + sum_i u_ki <= X_k - s`` with ``u_ki >= r_i - t_k``, ``u >= 0``.
    """
    n, m = len(rows), len(cols)
    N = n * m
    K = N - 1
    xs = np.sort(np.asarray(x, float))[::-1]
    top = np.cumsum(xs)
    ir, it, iu, isg = 0, N, N + K, N + K + K * N
    nv = isg + 1
    r_, c_, v_ = [], [], []
    b = []
    row = 0
    for k in range(K):
        r_ += [row, row]
        c_ += [it + k, isg]
        v_ += [k + 1, 1.0]
        r_ += [row] * N
        c_ += list(range(iu + k * N, iu + (k + 1) * N))
        v_ += [1.0] * N
        b.append(top[k])
        row += 1
    for k in range(K):
        for i in range(N):
            r_ += [row, row, row]
            c_ += [ir + i, it + k, iu + k * N + i]
            v_ += [1.0, -1.0, -1.0]
            b.append(0.0)
            row += 1
    a_ub = coo_matrix((v_, (r_, c_)), shape=(row, nv)).tocsr()
    er, ec, ev, beq = [], [], [], []
    eq = 0
    for a in range(n):
        er += [eq] * m
        ec += [ir + a * m + j for j in range(m)]
        ev += [1.0] * m
        beq.append(rows[a])
        eq += 1
    for j in range(m):
        er += [eq] * n
        ec += [ir + a * m + j for a in range(n)]
        ev += [1.0] * n
        beq.append(cols[j])
        eq += 1
    a_eq = coo_matrix((ev, (er, ec)), shape=(eq, nv)).tocsr()
    bounds = [(0, None)] * N + [(None, None)] * K + [(0, None)] * (K * N) + [(None, 1.0)]
    c = np.zeros(nv)
    c[isg] = -1.0
    res = linprog(c, A_ub=a_ub, b_ub=b, A_eq=a_eq, b_eq=beq, bounds=bounds, method="highs")
    if res.status != 0:
        return -math.inf, None
    return float(-res.fun), res.x[:N]


def _repair(cells: list[Fraction], rows: Sequence[Fraction], cols: Sequence[Fraction], n: int, m: int):
    """Fix marginals exactly by adjusting the heaviest row and column."""
    ar = max(range(n), key=lambda a: rows[a])
    bc = max(range(m), key=lambda b: cols[b])
    g = [list(cells[a * m:(a + 1) * m]) for a in range(n)]
    for a in range(n):
        if a != ar:
            g[a][bc] = rows[a] - sum(g[a][b] for b in range(m) if b != bc)
    for b in range(m):
        if b != bc:
            g[ar][b] = cols[b] - sum(g[a][b] for a in range(n) if a != ar)
    g[ar][bc] = rows[ar] - sum(g[ar][b] for b in range(m) if b != bc)
    flat = [v for r in g for v in r]
    return flat if all(v >= 0 for v in flat) else None


def lp_witness(p: ProbVector, p_prime: ProbVector, tau: ProbVector,
               lattices: Sequence[int] = (1, 2, 3, 4, 6, 12),
               fine_denominator: int | None = None) -> JointDist | None:
    n, m = p.dimension, tau.dimension
    x = tensor_dist(p, tau).entries
    margin, r = lp_joint([float(v) for v in x], p_prime.as_floats(), tau.as_floats())
    if r is None or margin < -1e-9:
        return None
    base = lcm(p_prime.denominator(), tau.denominator())
    dens = [base * k for k in lattices] + [lcm(*(v.denominator for v in x))]
    if fine_denominator:
        dens.append(fine_denominator)
    tried = set()
    for den in dens:
        if den in tried:
            continue
        tried.add(den)
        cells = [Fraction(round(v * den), den) for v in r]
        flat = _repair(cells, p_prime.entries, tau.entries, n, m)
        if flat is not None and majorizes(x, flat):
            return JointDist(flat, (n, m))
    return None


def lp_catalyst(p: Sequence[float], p_prime: Sequence[float], m: int, order: Sequence[int],
                floor: float = 1e-7) -> tuple[float, np.ndarray | None, np.ndarray | None]:
    """Joint LP over catalyst and table for a frozen ordering of ``p ⊗ tau``.

    With the ordering fixed, the top-k sums of ``p ⊗ tau`` along it are
    linear in ``tau`` and lower-bound the true top-k sums, so a positive
    margin here is a sufficient condition.
    """
    n = len(p)
    N = n * m
    K = N - 1
    it, ir, itk, iu, isg = 0, m, m + N, m + N + K, m + N + K + K * N
    nv = isg + 1
    r_, c_, v_, b = [], [], [], []
    row = 0
    for k in range(K):
        coef: dict[int, float] = {}
        for j in range(k + 1):
            a, c = divmod(order[j], m)
            coef[c] = coef.get(c, 0.0) - p[a]
        r_ += [row, row] + [row] * N + [row] * len(coef)
        c_ += [itk + k, isg] + list(range(iu + k * N, iu + (k + 1) * N)) + [it + c for c in coef]
        v_ += [k + 1, 1.0] + [1.0] * N + list(coef.values())
        b.append(0.0)
        row += 1
    for k in range(K):
        for i in range(N):
            r_ += [row, row, row]
            c_ += [ir + i, itk + k, iu + k * N + i]
            v_ += [1.0, -1.0, -1.0]
            b.append(0.0)
            row += 1
    a_ub = coo_matrix((v_, (r_, c_)), shape=(row, nv)).tocsr()
    er, ec, ev, beq = [], [], [], []
    eq = 0
    for a in range(n):
        er += [eq] * m
        ec += [ir + a * m + j for j in range(m)]
        ev += [1.0] * m
        beq.append(p_prime[a])
        eq += 1
    for j in range(m):
        er += [eq] * (n + 1)
        ec += [ir + a * m + j for a in range(n)] + [it + j]
        ev += [1.0] * n + [-1.0]
        beq.append(0.0)
        eq += 1
    er += [eq] * m
    ec += list(range(m))
    ev += [1.0] * m
    beq.append(1.0)
    eq += 1
    a_eq = coo_matrix((ev, (er, ec)), shape=(eq, nv)).tocsr()
    bounds = [(floor, None)] * m + [(0, None)] * N + [(None, None)] * K + [(0, None)] * (K * N) + [(None, 1.0)]
    c = np.zeros(nv)
    c[isg] = -1.0
    res = linprog(c, A_ub=a_ub, b_ub=b, A_eq=a_eq, b_eq=beq, bounds=bounds, method="highs")
    if res.status != 0:
        return -math.inf, None, None
    return float(-res.fun), res.x[:m], res.x[ir:ir + N]


def continuous_catalyst_witness(p: ProbVector, p_prime: ProbVector, m: int, *, starts: int = 4, iters: int = 30,
                                seed: int = 0, catalyst_denominator: int = 10**4,
                                deadline: float | None = None) -> WitnessPair | None:
    """Alternate between sorting ``p ⊗ tau`` and re-solving :func:`lp_catalyst`,
    then rationalize the best catalyst and re-derive the table exactly."""
    rng = np.random.default_rng(seed)
    pf, ppf = p.as_floats(), p_prime.as_floats()
    best, best_tau = -math.inf, None
    for _ in range(starts):
        tau = np.sort(rng.dirichlet(np.ones(m)))[::-1]
        current = -math.inf
        for _ in range(iters):
            if deadline is not None and time.monotonic() > deadline:
                break
            x = np.kron(pf, tau)
            order = list(np.argsort(-x, kind="stable"))
            margin, tau_new, _ = lp_catalyst(pf, ppf, m, order)
            if tau_new is None or margin <= current + 1e-13:
                break
            current, tau = margin, tau_new
        if current > best:
            best, best_tau = current, tau
    if best_tau is None or best < -1e-9:
        return None
    entries = sorted(rationalize_positive(best_tau, catalyst_denominator), reverse=True)
    tau_r = ProbVector(entries)
    table = lp_witness(p, p_prime, tau_r, fine_denominator=10**6)
    return None if table is None else WitnessPair(tau_r, table)


def rationalize_positive(values: Sequence[float], denominator: int) -> list[Fraction]:
    """Round to a common denominator, keep every entry positive, fix the sum on the largest."""
    out = [Fraction(max(round(float(v) * denominator), 1), denominator) for v in values]
    top = max(range(len(out)), key=lambda i: out[i])
    out[top] += 1 - sum(out)
    if out[top] <= 0:
        raise WitnessError("catalyst too fine for the rounding grid")
    return out


# ---------------------------------------------------------------- driver

def _realization_ok(p: ProbVector, witness: WitnessPair, max_atoms: int) -> bool:
    from ..constructions import ConstructionError, chain_to_controlled_permutation, hlp_chain

    n, m = witness.joint.shape
    cap = math.isqrt(max(max_atoms // (n * m), 1))
    try:
        chain = hlp_chain(tensor_dist(p, witness.tau).entries, witness.joint.entries)
        chain_to_controlled_permutation(chain, max_control=cap)
    except ConstructionError:
        return False
    return True


def find_correlating_witness(p, p_prime, budget: SearchBudget | None = None, *, realizable: bool = False,
                             stats: SearchStats | None = None) -> WitnessPair | None:
    """Bounded search for a witness; ``None`` means the budget ran out, nothing more.

    With ``realizable=True`` a witness is only accepted when its exact
    controlled-permutation realization fits in ``budget.max_atoms``.
    """
    p, p_prime = as_prob_vector(p), as_prob_vector(p_prime)
    budget = budget or SearchBudget()
    stats = stats if stats is not None else SearchStats()
    check_witness_preconditions(p, p_prime)
    start = time.monotonic()
    deadline = start + budget.max_seconds

    def accept(w: WitnessPair, how: str) -> WitnessPair | None:
        w.check(p, p_prime)
        if realizable and not _realization_ok(p, w, budget.max_atoms):
            return None
        stats.found_by = how
        stats.seconds = time.monotonic() - start
        return w

    if majorizes(p.entries, p_prime.entries):
        w = accept(WitnessPair(ProbVector([1]), JointDist(p_prime.entries, (p.dimension, 1))), "majorization")
        if w is not None:
            return w
    for tau in catalyst_candidates(budget.max_catalyst_dim, budget.max_denominator):
        if time.monotonic() > deadline:
            stats.out_of_budget = True
            break
        stats.cells += 1
        x = tensor_dist(p, tau).entries
        if "product" in budget.strategies:
            r = tensor_dist(p_prime, tau)
            if majorizes(x, r.entries):
                w = accept(WitnessPair(tau, JointDist(r.entries, (p.dimension, tau.dimension))), "product")
                if w is not None:
                    return w
        if "permutation" in budget.strategies:
            table, res = permutation_witness(p, p_prime, tau, node_limit=budget.max_nodes, deadline=deadline,
                                             max_atoms=budget.max_atoms)
            if res is not None:
                stats.nodes += res.nodes
            if table is not None:
                w = accept(WitnessPair(tau, table), "permutation")
                if w is not None:
                    return w
        if "lp" in budget.strategies:
            stats.lp_calls += 1
            table = lp_witness(p, p_prime, tau)
            if table is not None:
                w = accept(WitnessPair(tau, table), "lp")
                if w is not None:
                    return w
    if "lp-catalyst" in budget.strategies and not stats.out_of_budget:
        for m in range(2, budget.max_catalyst_dim + 1):
            if time.monotonic() > deadline:
                stats.out_of_budget = True
                break
            stats.lp_calls += 1
            table = continuous_catalyst_witness(p, p_prime, m, deadline=deadline)
            if table is not None:
                w = accept(table, "lp-catalyst")
                if w is not None:
                    return w
    stats.seconds = time.monotonic() - start
    return None


@dataclass
class SearchResult:
    status: str  # found | impossible | exhausted | budget
    certificate: object | None = None
    reason: str = ""
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def found(self) -> bool:
        return self.status == "found"

    def to_json(self) -> dict:
        from ..serialize import certificate_to_json
        out = {"status": self.status, "reason": self.reason, "stats": self.stats.to_json()}
        if self.certificate is not None:
            out["certificate"] = certificate_to_json(self.certificate)
        return out


def _matching_permutation(source: Sequence[Fraction], target: Sequence[Fraction]):
    from ..exact import Permutation

    pool: dict[Fraction, list[int]] = {}
    for k, v in enumerate(target):
        pool.setdefault(v, []).append(k)
    return Permutation(pool[v].pop(0) for v in source)


def search_conjecture_certificate(p, p_prime, budget: SearchBudget | None = None,
                                  epsilon=0) -> SearchResult:
    """Look for a single permutation P and catalyst q with [P(p⊗q)]_Z = q exactly and
    ``‖[P(p⊗q)]_X − p'‖₁ ≤ epsilon``."""
    from ..exact import Permutation
    from .certificate import TransitionCertificate, verify_certificate

    p, p_prime = as_prob_vector(p), as_prob_vector(p_prime)
    epsilon = as_fraction(epsilon)
    budget = budget or SearchBudget()
    stats = SearchStats()
    start = time.monotonic()
    deadline = start + budget.max_seconds
    if p.dimension != p_prime.dimension:
        return SearchResult("impossible", None, "dimension mismatch", stats)
    reason = impossibility_reason(p, p_prime, epsilon)
    if reason:
        return SearchResult("impossible", None, reason, stats)

    def finish(tau: ProbVector, perm: Permutation) -> SearchResult:
        cert = TransitionCertificate(mode="classical_conjecture", state=p, target=p_prime, catalyst=tau,
                                     dynamics=perm, epsilon=epsilon)
        report = verify_certificate(cert)
        if not report.passed:
            raise AssertionError(f"search produced an invalid certificate: {report.residuals}")
        stats.seconds = time.monotonic() - start
        return SearchResult("found", cert, "", stats)

    if p.sorted_desc() == p_prime.sorted_desc() or sum(abs(a - b) for a, b in zip(p, p_prime)) <= epsilon:
        target = p_prime.entries if p.sorted_desc() == p_prime.sorted_desc() else p.entries
        stats.found_by = "relabel"
        return finish(ProbVector([1]), _matching_permutation(p.entries, target))
    for tau in catalyst_candidates(budget.max_catalyst_dim, budget.max_denominator):
        if time.monotonic() > deadline:
            stats.out_of_budget = True
            break
        stats.cells += 1
        table, res = permutation_witness(p, p_prime, tau, slack=epsilon, node_limit=budget.max_nodes,
                                         deadline=deadline, max_atoms=budget.max_atoms)
        if res is None:
            continue
        stats.nodes += res.nodes
        if not res.complete:
            stats.out_of_budget = True
        if table is not None:
            stats.found_by = "permutation"
            x = tensor_dist(p, tau).entries
            return finish(tau, _matching_permutation(x, table.entries))
    stats.seconds = time.monotonic() - start
    status = "budget" if stats.out_of_budget else "exhausted"
    return SearchResult(status, None, "no certificate within the searched catalysts", stats)
