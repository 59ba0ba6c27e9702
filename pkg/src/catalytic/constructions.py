"""Decoherence, clock bases, dephasing dilations and majorization realizers."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import NamedTuple, Sequence

import numpy as np

from .entropy import TOL_MAJOR, majorizes
from .exact import ExactError, Permutation, as_fraction
from .quantum import TOL_UNITARY, DensityMatrix, LinalgError, check_unitary

MAX_CONTROL_DIM = 10**6


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class Basis:
    """Orthonormal basis stored as the columns of a unitary."""

    vectors: np.ndarray

    def __post_init__(self):
        try:
            check_unitary(self.vectors, TOL_UNITARY)
        except LinalgError as exc:
            raise ConstructionError(f"basis columns are not orthonormal: {exc}") from exc

    @classmethod
    def computational(cls, d: int) -> "Basis":
        return cls(np.eye(d, dtype=complex))

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def is_computational(self) -> bool:
        return bool(np.allclose(self.vectors, np.eye(self.dim), atol=1e-14))


def decohere(rho: DensityMatrix, basis: Basis, subsystem: int | None = None) -> DensityMatrix:
    """Pinch ``rho`` in ``basis``, either globally or on one subsystem."""
    if subsystem is None:
        if basis.dim != rho.dim:
            raise ConstructionError(f"basis of dimension {basis.dim} for state of dimension {rho.dim}")
        b = basis.vectors
        w = np.real(np.einsum("ij,jk,ki->i", b.conj().T, rho.matrix, b))
        return DensityMatrix((b * w) @ b.conj().T, rho.dims, validate=False)
    dims = list(rho.dims)
    if not 0 <= subsystem < len(dims) or dims[subsystem] != basis.dim:
        raise ConstructionError(f"basis of dimension {basis.dim} does not fit subsystem {subsystem} of {dims}")
    n = len(dims)
    t = rho.matrix.reshape(dims + dims)
    b = basis.vectors
    if not basis.is_computational():
        t = np.moveaxis(np.tensordot(b.conj().T, t, axes=([1], [subsystem])), 0, subsystem)
        t = np.moveaxis(np.tensordot(t, b, axes=([n + subsystem], [0])), -1, n + subsystem)
    keep = np.eye(dims[subsystem])
    shape = [1] * (2 * n)
    shape[subsystem] = shape[n + subsystem] = dims[subsystem]
    t = t * keep.reshape(shape)
    if not basis.is_computational():
        t = np.moveaxis(np.tensordot(b, t, axes=([1], [subsystem])), 0, subsystem)
        t = np.moveaxis(np.tensordot(t, b.conj().T, axes=([n + subsystem], [0])), -1, n + subsystem)
    d = rho.dim
    return DensityMatrix(t.reshape(d, d), dims, validate=False)


def clock_unitary_basis(d: int) -> list[np.ndarray]:
    """Powers of the clock matrix Z = diag(1, w, ..., w^(d-1)), w = exp(2 pi i / d)."""
    if d < 1:
        raise ConstructionError("dimension must be positive")
    phases = np.exp(2j * np.pi * np.arange(d) / d)
    return [np.diag(phases**j) for j in range(d)]


def dephasing_dilation(d: int, basis: Basis) -> np.ndarray:
    """Controlled clock unitary sum_j |j><j| ⊗ Z^j on system ⊗ ancilla (both dimension d)."""
    if basis.dim != d:
        raise ConstructionError(f"basis dimension {basis.dim} != {d}")
    out = np.zeros((d * d, d * d), dtype=complex)
    for j, z in enumerate(clock_unitary_basis(d)):
        ket = basis.vectors[:, j]
        out += np.kron(np.outer(ket, ket.conj()), z)
    return out


class TStep(NamedTuple):
    i: int
    j: int
    t: Fraction | float


@dataclass(frozen=True)
class TTransformChain:
    """Ordered T-transforms followed by an optional relabelling of positions."""

    size: int
    steps: tuple[TStep, ...]
    relabel: Permutation | None = None

    def __post_init__(self):
        for s in self.steps:
            if not 0 <= s.t <= 1 or s.i == s.j:
                raise ConstructionError(f"invalid T-transform {s}")
        if self.relabel is not None and self.relabel.size != self.size:
            raise ConstructionError("relabel size mismatch")

    def __len__(self):
        return len(self.steps)

    def apply(self, x: Sequence) -> list:
        v = list(x)
        if len(v) != self.size:
            raise ConstructionError(f"chain of size {self.size} applied to {len(v)} entries")
        for i, j, t in self.steps:
            v[i], v[j] = (1 - t) * v[i] + t * v[j], t * v[i] + (1 - t) * v[j]
        if self.relabel is not None:
            v = self.relabel.permute_list(v)
        return v


def _desc_order(v: Sequence) -> list[int]:
    return sorted(range(len(v)), key=lambda i: (-v[i], i))


def _hlp_steps(x: Sequence, y: Sequence, tol) -> tuple[list[TStep], Permutation | None]:
    n = len(x)
    order = _desc_order(x)
    yorder = _desc_order(y)
    ys = [y[i] for i in yorder]
    work = list(x)
    steps: list[TStep] = []
    start = 0
    while True:
        r = next((k for k in range(start, n) if abs(work[order[k]] - ys[k]) > tol), None)
        if r is None:
            break
        j = order[r]
        if work[j] < ys[r]:
            raise ConstructionError("source does not majorize target")
        s = next((k for k in range(r + 1, n) if work[order[k]] < ys[k] - tol), None)
        if s is None and tol:
            # float mode: deficits may all sit below tol; take the largest one
            gaps = [(ys[k] - work[order[k]], -k) for k in range(r + 1, n)]
            best = max(gaps, default=(0, 0))
            s = -best[1] if best[0] > 0 else None
        if s is None:
            raise ConstructionError("source does not majorize target")
        k = order[s]
        wj, wk = work[j], work[k]
        hit_j = wj - ys[r] <= ys[s] - wk
        delta = (wj - ys[r]) if hit_j else (ys[s] - wk)
        t = delta / (wj - wk)
        work[j], work[k] = (1 - t) * wj + t * wk, t * wj + (1 - t) * wk
        # pin the coordinate that hit its target so float drift cannot re-open it
        if hit_j:
            work[j] = ys[r]
        else:
            work[k] = ys[s]
        steps.append(TStep(j, k, t))
        start = r
    relabel = [0] * n
    for r in range(n):
        relabel[order[r]] = yorder[r]
    perm = Permutation(relabel)
    return steps, (None if perm.is_identity() else perm)


def hlp_chain(x: Sequence, y: Sequence) -> TTransformChain:
    """Exact T-transform chain (at most n-1 steps) carrying x onto y."""
    x = [as_fraction(v) for v in x]
    y = [as_fraction(v) for v in y]
    if len(x) != len(y):
        raise ConstructionError("length mismatch")
    try:
        ok = majorizes(x, y)
    except ValueError as exc:
        raise ConstructionError(str(exc)) from exc
    if not ok:
        raise ConstructionError("source does not majorize target")
    steps, relabel = _hlp_steps(x, y, Fraction(0))
    return TTransformChain(len(x), tuple(steps), relabel)


@dataclass(frozen=True)
class ControlledPermutation:
    """Permutation P_i on the target applied when the control reads i."""

    perms: tuple[Permutation, ...]

    def __post_init__(self):
        if not self.perms:
            raise ConstructionError("need at least one branch")
        if len({p.size for p in self.perms}) != 1:
            raise ConstructionError("branches act on different sizes")

    @property
    def control_dim(self) -> int:
        return len(self.perms)

    @property
    def target_size(self) -> int:
        return self.perms[0].size

    def average(self, x: Sequence[Fraction]) -> list[Fraction]:
        acc = [Fraction(0)] * self.target_size
        for p in self.perms:
            for k, v in enumerate(p.permute_list(list(x))):
                acc[k] += v
        return [a / self.control_dim for a in acc]

    def as_permutation(self) -> Permutation:
        """Global permutation on control ⊗ target (control slowest)."""
        n = self.target_size
        return Permutation(c * n + p.mapping[k] for c, p in enumerate(self.perms) for k in range(n))


def chain_to_controlled_permutation(chain: TTransformChain,
                                    max_control: int = MAX_CONTROL_DIM) -> tuple[int, ControlledPermutation]:
    """Expand a rational chain into an equal-weight mixture of permutations.

    Each T-transform is a coin flip between identity and a transposition, so
    the chain is a distribution over permutations; merging equal branches and
    clearing denominators gives the control dimension.
    """
    n = chain.size
    dist: dict[tuple[int, ...], Fraction] = {tuple(range(n)): Fraction(1)}
    for i, j, t in chain.steps:
        t = as_fraction(t)
        nxt: dict[tuple[int, ...], Fraction] = defaultdict(Fraction)
        for perm, w in dist.items():
            if t != 1:
                nxt[perm] += (1 - t) * w
            if t != 0:
                swapped = tuple(j if m == i else i if m == j else m for m in perm)
                nxt[swapped] += t * w
        dist = dict(nxt)
        if lcm(*(w.denominator for w in dist.values())) > max_control:
            raise ConstructionError(f"control dimension exceeds cap {max_control}")
    if chain.relabel is not None:
        r = chain.relabel.mapping
        dist = {tuple(r[m] for m in perm): w for perm, w in dist.items()}
    d = lcm(*(w.denominator for w in dist.values()))
    branches: list[Permutation] = []
    for perm, w in sorted(dist.items(), key=lambda kv: (-kv[1], kv[0])):
        branches.extend([Permutation(perm)] * int(w * d))
    return d, ControlledPermutation(tuple(branches))


def givens(n: int, i: int, j: int, t: float) -> np.ndarray:
    g = np.eye(n, dtype=complex)
    c, s = np.sqrt(1.0 - t), np.sqrt(t)
    g[i, i] = g[j, j] = c
    g[i, j] = s
    g[j, i] = -s
    return g


def schur_horn_unitary(spectrum: Sequence[float], target_diag: Sequence[float],
                       tol: float = TOL_MAJOR) -> np.ndarray:
    """Unitary U with diag(U diag(spectrum) U^dag) = target_diag.

    Each T-transform of the chain becomes a real rotation by arccos(sqrt(1-t))
    on the two coordinates it mixes; those coordinates never carry
    off-diagonal weight when they are mixed, so diagonals follow the chain.
    """
    lam = np.asarray([float(v) for v in spectrum])
    tgt = np.asarray([float(v) for v in target_diag])
    if lam.shape != tgt.shape:
        raise ConstructionError("length mismatch")
    if abs(lam.sum() - tgt.sum()) > 1e-10 or not majorizes(lam / lam.sum(), tgt / tgt.sum(), tol):
        raise ConstructionError("spectrum does not majorize target diagonal")
    n = lam.size
    steps, relabel = _hlp_steps(list(lam), list(tgt), 1e-13)
    u = np.eye(n, dtype=complex)
    for i, j, t in steps:
        u = givens(n, i, j, min(max(float(t), 0.0), 1.0)) @ u
    if relabel is not None:
        pm = np.zeros((n, n))
        for k, m in enumerate(relabel.mapping):
            pm[m, k] = 1.0
        u = pm @ u
    return u


def permutation_matrix(perm: Permutation) -> np.ndarray:
    m = np.zeros((perm.size, perm.size), dtype=complex)
    m[list(perm.mapping), list(range(perm.size))] = 1.0
    return m


__all__ = [
    "Basis", "ConstructionError", "ControlledPermutation", "ExactError", "TStep", "TTransformChain",
    "chain_to_controlled_permutation", "clock_unitary_basis", "decohere", "dephasing_dilation",
    "givens", "hlp_chain", "permutation_matrix", "schur_horn_unitary",
]
