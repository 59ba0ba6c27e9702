"""Transition certificates and their verifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

import numpy as np

from ..constructions import Basis, decohere
from ..entropy import rank_of, renyi_entropy
from ..exact import JointDist, Permutation, ProbVector, apply_permutation, l1_distance, marginalize, tensor_all, uniform
from ..quantum import DensityMatrix, partial_trace, tensor_q, trace_distance, unitarity_error

MODES = ("theorem1", "conjecture", "lemma2", "classical_lemma3", "classical_conjecture")
TOL_QUANTUM = 1e-8
TOL_UNITARY_CERT = 1e-8


class CertificateError(ValueError):
    """Structurally inconsistent certificate (as opposed to one that fails)."""


@dataclass
class TransitionCertificate:
    """Everything needed to replay a catalytic transition.

    Classical encodings carry :class:`ProbVector` states, a :class:`JointDist`
    catalyst and a :class:`Permutation` on ``system ⊗ ancilla ⊗ catalyst``.
    Quantum encodings carry density matrices and a unitary.  ``ancilla_dim``
    is the size of the maximally mixed register that rides along with the
    system (``1`` when absent).
    """

    mode: str
    state: DensityMatrix | ProbVector
    target: DensityMatrix | ProbVector
    catalyst: DensityMatrix | JointDist
    dynamics: np.ndarray | Permutation
    basis: Basis | None = None
    ancilla_dim: int = 1
    epsilon: Fraction = Fraction(0)
    meta: dict = field(default_factory=dict)

    @property
    def is_classical(self) -> bool:
        return isinstance(self.dynamics, Permutation)


@dataclass
class VerificationReport:
    passed: bool
    mode: str
    residuals: dict[str, float]
    exact: dict[str, Fraction] = field(default_factory=dict)
    entropy: dict[str, float] = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "mode": self.mode,
            "residuals": self.residuals,
            "exact_residuals": {k: f"{v.numerator}/{v.denominator}" for k, v in self.exact.items()},
            "entropy_nats": self.entropy,
            "info": self.info,
        }


def _entropy_table(before, after) -> dict[str, float]:
    return {
        "S_before": renyi_entropy(before, 1).value,
        "S_after": renyi_entropy(after, 1).value,
        "S0_before": renyi_entropy(before, 0).value,
        "S0_after": renyi_entropy(after, 0).value,
        "rank_before": rank_of(before),
        "rank_after": rank_of(after),
    }


def check_structure(cert: TransitionCertificate) -> None:
    if cert.mode not in MODES:
        raise CertificateError(f"unknown mode {cert.mode!r}")
    if cert.ancilla_dim < 1:
        raise CertificateError("ancilla dimension must be positive")
    if cert.is_classical:
        for name in ("state", "target"):
            if not isinstance(getattr(cert, name), ProbVector):
                raise CertificateError(f"classical certificate needs a ProbVector {name}")
        if not isinstance(cert.catalyst, JointDist):
            raise CertificateError("classical certificate needs a JointDist catalyst")
        if cert.mode in ("theorem1", "lemma2"):
            raise CertificateError(f"mode {cert.mode} needs a quantum encoding")
        n = cert.state.dimension
        if cert.target.dimension != n:
            raise CertificateError("state and target dimensions differ")
        size = n * cert.ancilla_dim * cert.catalyst.dimension
        if cert.dynamics.size != size:
            raise CertificateError(f"permutation of size {cert.dynamics.size} on a space of size {size}")
        if cert.mode == "conjecture" and cert.ancilla_dim != 1:
            raise CertificateError("conjecture mode admits no ancilla")
        return
    if cert.mode.startswith("classical"):
        raise CertificateError(f"mode {cert.mode} needs a classical encoding")
    for name in ("state", "target", "catalyst"):
        if not isinstance(getattr(cert, name), DensityMatrix):
            raise CertificateError(f"quantum certificate needs a DensityMatrix {name}")
    if cert.state.dim != cert.target.dim:
        raise CertificateError("state and target dimensions differ")
    u = np.asarray(cert.dynamics)
    size = cert.state.dim * cert.ancilla_dim * cert.catalyst.dim
    if u.shape != (size, size):
        raise CertificateError(f"unitary of shape {u.shape} on a space of size {size}")
    err = unitarity_error(u)
    if err > TOL_UNITARY_CERT:
        raise CertificateError(f"dynamics not unitary ({err:.3e})")
    if cert.mode == "lemma2" and cert.ancilla_dim < 1:
        raise CertificateError("lemma2 needs an ancilla")
    if cert.mode == "theorem1":
        basis = cert.basis or Basis.computational(cert.catalyst.dim)
        if basis.dim != cert.catalyst.dim:
            raise CertificateError("dephasing basis does not match the catalyst")
        sigma = cert.catalyst.with_dims([cert.catalyst.dim])
        if trace_distance(decohere(sigma, basis), sigma) > TOL_QUANTUM:
            raise CertificateError("catalyst is not quasi-classical in the dephasing basis")


def verify_certificate(cert: TransitionCertificate, tol: float = TOL_QUANTUM) -> VerificationReport:
    check_structure(cert)
    if cert.is_classical:
        return _verify_classical(cert)
    return _verify_quantum(cert, tol)


def _verify_classical(cert: TransitionCertificate) -> VerificationReport:
    p, p_prime, q, d = cert.state, cert.target, cert.catalyst, cert.ancilla_dim
    parts = [p] + ([uniform(d)] if d > 1 else []) + [q]
    initial = tensor_all(*parts)
    final = apply_permutation(cert.dynamics, initial)
    n_sys = 2 if d > 1 else 1
    sys_axes = list(range(n_sys))
    cat_axes = list(range(n_sys, len(final.shape)))
    out_sys = marginalize(final, sys_axes)
    out_cat = marginalize(final, cat_axes)
    want_sys = tensor_all(p_prime, uniform(d)) if d > 1 else p_prime
    transition = l1_distance(out_sys.entries, want_sys.entries)
    catalyst = l1_distance(out_cat.entries, q.entries)
    exact = {"transition": transition, "catalyst": catalyst}
    out_x = marginalize(final, [0])
    if d > 1:
        out_y = marginalize(final, [1])
        exact["decorrelation"] = l1_distance(out_sys.entries, tensor_all(out_x, out_y).entries)
    if cert.mode == "classical_conjecture":
        exact["transition"] = l1_distance(out_x.entries, p_prime.entries)
        passed = exact["catalyst"] == 0 and exact["transition"] <= cert.epsilon
    else:
        passed = all(v == 0 for v in exact.values())
    residuals = {k: float(v) for k, v in exact.items()}
    info = {"norm": "l1", "final_system_marginal": [str(v) for v in out_x.entries]}
    return VerificationReport(passed, cert.mode, residuals, exact, _entropy_table(p, p_prime), info)


def _verify_quantum(cert: TransitionCertificate, tol: float) -> VerificationReport:
    rho, rho_p, sigma, d = cert.state, cert.target, cert.catalyst, cert.ancilla_dim
    sys_parts = [rho] + ([DensityMatrix.maximally_mixed(d)] if cert.mode == "lemma2" or d > 1 else [])
    n_sys = sum(len(s.dims) for s in sys_parts)
    joint = tensor_q(*sys_parts, sigma)
    u = np.asarray(cert.dynamics)
    final = DensityMatrix(u @ joint.matrix @ u.conj().T, joint.dims, validate=False)
    sys_idx = list(range(n_sys))
    cat_idx = list(range(n_sys, len(final.dims)))
    out_sys = partial_trace(final, sys_idx)
    out_cat = partial_trace(final, cat_idx)
    want_sys = tensor_q(rho_p, *sys_parts[1:]) if len(sys_parts) > 1 else rho_p
    residuals = {"transition": trace_distance(out_sys.matrix, want_sys.matrix)}
    cat_flat = out_cat.with_dims([out_cat.dim])
    if cert.mode == "theorem1":
        basis = cert.basis or Basis.computational(sigma.dim)
        cat_flat = decohere(cat_flat, basis)
    residuals["catalyst"] = trace_distance(cat_flat.matrix, sigma.matrix)
    if cert.mode == "lemma2":
        n_a = len(rho.dims)
        a_idx = list(range(n_a))
        r2_idx = list(range(n_a, n_sys))
        marg_a = partial_trace(out_sys, a_idx)
        marg_r2 = partial_trace(out_sys, r2_idx)
        residuals["decorrelation"] = trace_distance(out_sys.matrix, tensor_q(marg_a, marg_r2).matrix)
    passed = all(v <= tol for v in residuals.values())
    info = {"norm": "trace_distance", "dimension": final.dim}
    return VerificationReport(passed, cert.mode, residuals, {}, _entropy_table(rho, rho_p), info)


def certificate_dims(cert: TransitionCertificate) -> list[int]:
    if cert.is_classical:
        return [cert.state.dimension] + ([cert.ancilla_dim] if cert.ancilla_dim > 1 else []) + list(cert.catalyst.shape)
    return list(cert.state.dims) + ([cert.ancilla_dim] if cert.ancilla_dim > 1 or cert.mode == "lemma2" else []) \
        + list(cert.catalyst.dims)


def total_dim(cert: TransitionCertificate) -> int:
    return prod(certificate_dims(cert))
