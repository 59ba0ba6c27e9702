"""Dense linear algebra for finite-dimensional quantum states."""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np

TOL_HERM = 1e-9
TOL_PSD = 1e-9
TOL_TRACE = 1e-10
TOL_UNITARY = 1e-10
JACOBI_MAX_DIM = 64
JACOBI_MAX_SWEEPS = 100


class LinalgError(ValueError):
    pass


class ConvergenceError(LinalgError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (off-diagonal residual {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _check_square(h) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise LinalgError(f"expected a square matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise LinalgError("matrix has non-finite entries")
    return h


def hermiticity_error(h) -> float:
    h = np.asarray(h)
    return float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0


def _jacobi(h: np.ndarray, max_sweeps: int) -> tuple[np.ndarray, np.ndarray]:
    n = h.shape[0]
    a = h.copy()
    v = np.eye(n, dtype=complex)
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n), v
    mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a[mask]) ** 2))
        if off < 1e-14 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                # phase-align a_pq, then a real symmetric rotation
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                j = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ j
                a[idx, :] = j.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ j
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    else:
        off = np.sqrt(np.sum(np.abs(a[mask]) ** 2))
        if off >= 1e-14 * scale:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps", off / scale)
    return np.real(np.diag(a)).copy(), v


def hermitian_eig(h, *, method: str = "auto", max_sweeps: int = JACOBI_MAX_SWEEPS) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    ``method="auto"`` uses cyclic Jacobi up to dimension 64 and LAPACK above.
    Each eigenvector is phased so its first non-negligible component is real
    and positive.
    """
    h = _check_square(h)
    err = hermiticity_error(h)
    if err > TOL_HERM * max(1.0, float(np.max(np.abs(h)))):
        raise LinalgError(f"matrix is not Hermitian (max |H - H^dag| = {err:.3e})")
    h = (h + h.conj().T) / 2
    n = h.shape[0]
    if method == "auto":
        method = "jacobi" if n <= JACOBI_MAX_DIM else "lapack"
    if method == "jacobi":
        w, v = _jacobi(h, max_sweeps)
    elif method == "lapack":
        w, v = np.linalg.eigh(h)
    else:
        raise LinalgError(f"unknown method {method!r}")
    order = np.argsort(-w, kind="stable")
    w, v = w[order], v[:, order]
    for k in range(n):
        col = v[:, k]
        big = np.flatnonzero(np.abs(col) > 1e-10)
        if big.size:
            ph = col[big[0]] / abs(col[big[0]])
            v[:, k] = col * ph.conjugate()
    return Spectrum(w, v)


def eigvalsh(h) -> np.ndarray:
    return hermitian_eig(h).eigenvalues


def unitarity_error(u) -> float:
    u = np.asarray(u)
    return float(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))))


def check_unitary(u, tol: float = TOL_UNITARY) -> np.ndarray:
    u = _check_square(u)
    err = unitarity_error(u)
    if err > tol:
        raise LinalgError(f"matrix is not unitary (max |UU^dag - I| = {err:.3e})")
    return u


class DensityMatrix:
    """Unit-trace positive semidefinite matrix with subsystem dimensions."""

    __slots__ = ("matrix", "dims")

    def __init__(self, matrix, dims: Sequence[int] | None = None, *, validate: bool = True):
        m = _check_square(matrix)
        dims = (m.shape[0],) if dims is None else tuple(int(d) for d in dims)
        if prod(dims) != m.shape[0] or any(d < 1 for d in dims):
            raise LinalgError(f"dims {dims} do not match matrix of size {m.shape[0]}")
        if validate:
            err = hermiticity_error(m)
            if err > TOL_HERM:
                raise LinalgError(f"density matrix not Hermitian ({err:.3e})")
            tr = np.trace(m).real
            if abs(tr - 1.0) > TOL_TRACE:
                raise LinalgError(f"trace {tr!r} differs from 1")
            m = (m + m.conj().T) / 2
            low = float(np.min(eigvalsh(m)))
            if low < -TOL_PSD:
                raise LinalgError(f"negative eigenvalue {low:.3e}")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    def __setattr__(self, name, value):
        raise AttributeError("density matrices are immutable")

    def __repr__(self):
        return f"DensityMatrix(dims={list(self.dims)})"

    @classmethod
    def from_diagonal(cls, diag: Iterable, dims: Sequence[int] | None = None) -> "DensityMatrix":
        return cls(np.diag(np.asarray([float(x) for x in diag], dtype=complex)), dims)

    @classmethod
    def maximally_mixed(cls, d: int) -> "DensityMatrix":
        return cls(np.eye(d, dtype=complex) / d)

    @classmethod
    def pure(cls, psi, dims: Sequence[int] | None = None) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()), dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def spectrum(self) -> Spectrum:
        return hermitian_eig(self.matrix)

    def eigenvalues(self) -> np.ndarray:
        return eigvalsh(self.matrix)

    def rank(self, tol: float = 1e-9) -> int:
        return int(np.sum(self.eigenvalues() > tol))

    def with_dims(self, dims: Sequence[int]) -> "DensityMatrix":
        return DensityMatrix(self.matrix, dims, validate=False)

    def evolve(self, u: np.ndarray) -> "DensityMatrix":
        return DensityMatrix(u @ self.matrix @ u.conj().T, self.dims, validate=False)


def tensor_q(*states: DensityMatrix) -> DensityMatrix:
    m = states[0].matrix
    dims = states[0].dims
    for s in states[1:]:
        m = np.kron(m, s.matrix)
        dims = dims + s.dims
    return DensityMatrix(m, dims, validate=False)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    keep = sorted(set(keep))
    n = len(rho.dims)
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise LinalgError(f"invalid keep set {keep} for {n} subsystems")
    if n > 26:
        raise LinalgError("too many subsystems")
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows = [letters[i] for i in range(n)]
    cols = [letters[i] if i not in keep else letters[i].upper() for i in range(n)]
    out = "".join(rows[i] for i in keep) + "".join(cols[i] for i in keep)
    t = rho.matrix.reshape(rho.dims + rho.dims)
    reduced = np.einsum("".join(rows) + "".join(cols) + "->" + out, t)
    d = prod(rho.dims[i] for i in keep)
    return DensityMatrix(reduced.reshape(d, d), [rho.dims[i] for i in keep], validate=False)


def trace_distance(a, b) -> float:
    ma = a.matrix if isinstance(a, DensityMatrix) else np.asarray(a)
    mb = b.matrix if isinstance(b, DensityMatrix) else np.asarray(b)
    if ma.shape != mb.shape:
        raise LinalgError(f"dimension mismatch {ma.shape} vs {mb.shape}")
    diff = ma - mb
    diff = (diff + diff.conj().T) / 2
    return float(0.5 * np.sum(np.abs(eigvalsh(diff))))


def min_eigenvalue(rho) -> float:
    m = rho.matrix if isinstance(rho, DensityMatrix) else rho
    return float(eigvalsh(m)[-1])


def embed_operator(op: np.ndarray, dims: Sequence[int], targets: Sequence[int]) -> np.ndarray:
    """Lift ``op`` acting on ``targets`` (in that order) to the full space."""
    dims = list(dims)
    targets = list(targets)
    n = len(dims)
    if len(set(targets)) != len(targets) or any(not 0 <= t < n for t in targets):
        raise LinalgError(f"invalid targets {targets}")
    dt = prod(dims[t] for t in targets)
    if op.shape != (dt, dt):
        raise LinalgError(f"operator of shape {op.shape} does not act on dims {[dims[t] for t in targets]}")
    rest = [k for k in range(n) if k not in targets]
    order = targets + rest
    full = np.kron(op, np.eye(prod(dims[k] for k in rest), dtype=complex))
    full = full.reshape([dims[k] for k in order] * 2)
    pos = [order.index(k) for k in range(n)]
    full = full.transpose(pos + [n + p for p in pos])
    d = prod(dims)
    return full.reshape(d, d)


def apply_local(rho: DensityMatrix, op: np.ndarray, targets: Sequence[int]) -> DensityMatrix:
    """Conjugate ``rho`` by ``op`` acting on ``targets`` without building the full operator."""
    dims = list(rho.dims)
    n = len(dims)
    targets = list(targets)
    tdims = [dims[t] for t in targets]
    k = len(targets)
    t = rho.matrix.reshape(dims + dims)
    u = op.reshape(tdims + tdims)
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    rows = list(letters[:n])
    cols = list(letters[n:2 * n])
    new = list(letters[2 * n:2 * n + k])
    # U on the row indices
    out_rows = rows.copy()
    for i, tg in enumerate(targets):
        out_rows[tg] = new[i]
    spec = "".join(new) + "".join(rows[tg] for tg in targets) + "," + "".join(rows) + "".join(cols)
    t = np.einsum(spec + "->" + "".join(out_rows) + "".join(cols), u, t)
    # U^dag on the column indices
    out_cols = cols.copy()
    for i, tg in enumerate(targets):
        out_cols[tg] = new[i]
    spec = "".join(rows) + "".join(cols) + "," + "".join(new) + "".join(cols[tg] for tg in targets)
    t = np.einsum(spec + "->" + "".join(rows) + "".join(out_cols), t, u.conj())
    d = prod(dims)
    return DensityMatrix(t.reshape(d, d), dims, validate=False)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density_matrix(d: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    k = d if rank is None else rank
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)
