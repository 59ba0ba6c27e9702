"""Certificate builders: exact classical realization and the quantum pipelines."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..constructions import (
    Basis,
    ConstructionError,
    chain_to_controlled_permutation,
    dephasing_dilation,
    hlp_chain,
    schur_horn_unitary,
)
from ..entropy import shannon
from ..exact import JointDist, Permutation, ProbVector, rationalize, tensor_dist, uniform
from ..quantum import DensityMatrix, embed_operator, hermitian_eig, tensor_q
from .certificate import CertificateError, TransitionCertificate, verify_certificate
from .witness import TOL_ENTROPY, WitnessError, WitnessPair, as_prob_vector

MAX_TABLE = 2_000_000
RATIONAL_DENOMINATOR = 10**4
BUILD_TOL = 1e-7


def build_classical_lemma3(p, p_prime, witness: WitnessPair, max_table: int = MAX_TABLE) -> TransitionCertificate:
    """Exact permutation on X ⊗ Y ⊗ A ⊗ Z realizing ``p ⊗ 1_d ⊗ q -> p' ⊗ 1_d ⊗ q``.

    The chain ``p ⊗ tau -> r`` is expanded into ``d`` equally likely
    permutations selected by a uniform register A; a second step shifts A
    cyclically by the value of the uniform register Y, which leaves A
    uniform and uncorrelated from X ⊗ Y.  The returned catalyst is
    ``q = 1_d ⊗ tau`` on A ⊗ Z.
    """
    p, p_prime = as_prob_vector(p), as_prob_vector(p_prime)
    witness = witness.stripped()
    try:
        witness.check(p, p_prime)
    except WitnessError as exc:
        raise CertificateError(f"invalid witness: {exc}") from exc
    n, m = witness.joint.shape
    x = tensor_dist(p, witness.tau).entries
    try:
        chain = hlp_chain(x, witness.joint.entries)
        d, cp = chain_to_controlled_permutation(chain)
    except ConstructionError as exc:
        raise CertificateError(f"cannot realize the witness: {exc}") from exc
    if n * d * d * m > max_table:
        raise CertificateError(f"realization needs {n * d * d * m} cells (cap {max_table}); control dimension {d}")
    if d == 1:
        perm = cp.perms[0]
        catalyst: JointDist = witness.tau
    else:
        mapping = []
        for a in range(n):
            for y in range(d):
                for c in range(d):
                    branch = cp.perms[c].mapping
                    for z in range(m):
                        a2, z2 = divmod(branch[a * m + z], m)
                        mapping.append(((a2 * d + y) * d + (c + y) % d) * m + z2)
        perm = Permutation(mapping)
        catalyst = tensor_dist(uniform(d), witness.tau)
    cert = TransitionCertificate(
        mode="classical_lemma3", state=p, target=p_prime, catalyst=catalyst, dynamics=perm,
        ancilla_dim=d,
        meta={"control_dim": d, "chain_length": len(chain), "catalyst_dim": m,
              "witness": witness.to_json()},
    )
    report = verify_certificate(cert)
    if not report.passed:
        raise CertificateError(f"controlled-permutation realization failed verification: {report.residuals}")
    return cert


@dataclass
class RationalSpectra:
    p: ProbVector
    p_prime: ProbVector
    basis: np.ndarray
    basis_prime: np.ndarray
    eigenvalues: np.ndarray
    eigenvalues_prime: np.ndarray
    perturbation: float
    perturbation_prime: float

    def snapped(self) -> tuple[DensityMatrix, DensityMatrix]:
        def build(v, w):
            return (v * np.array([float(t) for t in w])) @ v.conj().T
        return (DensityMatrix(build(self.basis, self.p.entries)),
                DensityMatrix(build(self.basis_prime, self.p_prime.entries)))


def rational_spectra(rho: DensityMatrix, rho_prime: DensityMatrix,
                     max_denominator: int = RATIONAL_DENOMINATOR) -> RationalSpectra:
    """Descending spectra of both states, rationalized by continued fractions.

    The reported perturbations are trace distances between each state and its
    rationalized counterpart (same eigenbasis).
    """
    s, sp = hermitian_eig(rho.matrix), hermitian_eig(rho_prime.matrix)
    p = rationalize(list(s.eigenvalues), max_denominator)
    pp = rationalize(list(sp.eigenvalues), max_denominator)
    pert = 0.5 * float(np.sum(np.abs(s.eigenvalues - np.array([float(v) for v in p]))))
    pert_p = 0.5 * float(np.sum(np.abs(sp.eigenvalues - np.array([float(v) for v in pp]))))
    return RationalSpectra(ProbVector(p), ProbVector(pp), s.eigenvectors, sp.eigenvectors,
                           s.eigenvalues, sp.eigenvalues, pert, pert_p)


def _align_witness(witness: WitnessPair, p_prime: ProbVector) -> WitnessPair:
    """Reorder witness rows so its row marginal matches ``p_prime`` entry by entry."""
    n, m = witness.joint.shape
    rows = [witness.joint.entries[a * m:(a + 1) * m] for a in range(n)]
    sums = [sum(r) for r in rows]
    if sums == list(p_prime.entries):
        return witness
    pool: dict[Fraction, list[int]] = {}
    for a, s in enumerate(sums):
        pool.setdefault(s, []).append(a)
    try:
        order = [pool[v].pop(0) for v in p_prime.entries]
    except (KeyError, IndexError):
        raise CertificateError("witness row marginal is not a rearrangement of the target spectrum") from None
    return WitnessPair(witness.tau, JointDist([v for a in order for v in rows[a]], (n, m)))


def _quantum_preconditions(rho: DensityMatrix, rho_prime: DensityMatrix, spectra: RationalSpectra) -> None:
    if rho.dim != rho_prime.dim:
        raise CertificateError("states have different dimensions")
    if spectra.p.sorted_desc() == spectra.p_prime.sorted_desc() \
            and np.allclose(spectra.eigenvalues, spectra.eigenvalues_prime, atol=1e-12):
        raise CertificateError("states have equal spectra; the transition needs a strict entropy increase")
    if not shannon(rho_prime) > shannon(rho) + TOL_ENTROPY:
        raise CertificateError("S(rho') must exceed S(rho)")
    if rho_prime.rank() < rho.rank():
        raise CertificateError("rank(rho') must be at least rank(rho)")


def _core_unitary(spectra: RationalSpectra, witness: WitnessPair) -> np.ndarray:
    """W on A ⊗ B: Schur–Horn from diag(p ⊗ tau) to diag(r), dressed by eigenbases."""
    n, m = witness.joint.shape
    x = [float(v) for v in tensor_dist(spectra.p, witness.tau).entries]
    r = [float(v) for v in witness.joint.entries]
    s = schur_horn_unitary(x, r)
    eye = np.eye(m)
    return np.kron(spectra.basis_prime, eye) @ s @ np.kron(spectra.basis, eye).conj().T


def _prepare(rho, rho_prime, witness, snap):
    if witness is None:
        raise CertificateError("a witness is required; run find_correlating_witness on the spectra first")
    spectra = rational_spectra(rho, rho_prime)
    _quantum_preconditions(rho, rho_prime, spectra)
    witness = _align_witness(witness.stripped(), spectra.p_prime)
    try:
        witness.check(spectra.p, spectra.p_prime)
    except WitnessError as exc:
        raise CertificateError(f"witness does not match the rationalized spectra: {exc}") from exc
    if snap:
        rho, rho_prime = spectra.snapped()
    return rho, rho_prime, spectra, witness


def _finish(cert: TransitionCertificate, tol: float) -> TransitionCertificate:
    report = verify_certificate(cert, tol=tol)
    if not report.passed:
        raise CertificateError(f"{cert.mode} certificate misses tolerance {tol:g}: {report.residuals}")
    cert.meta["residuals"] = report.residuals
    return cert


def build_theorem1_certificate(rho: DensityMatrix, rho_prime: DensityMatrix, witness: WitnessPair | None,
                               *, snap: bool = False, tol: float = BUILD_TOL) -> TransitionCertificate:
    """Dephasing-assisted catalysis on A ⊗ B ⊗ R with catalyst ``tau ⊗ 1_n``.

    ``W`` sends ``rho ⊗ tau`` to a state whose diagonal in the eigenbasis of
    ``rho'`` (times the catalyst basis) is the witness table; the controlled
    clock on A ⊗ R then dephases A, leaving ``rho'`` on A and ``tau-tilde ⊗ 1_n``
    on B ⊗ R, which dephases back to the catalyst.
    """
    rho, rho_prime, spectra, witness = _prepare(rho, rho_prime, witness, snap)
    n, m = witness.joint.shape
    w = _core_unitary(spectra, witness)
    v_ar = dephasing_dilation(n, Basis(spectra.basis_prime))
    dims = [n, m, n]
    u = embed_operator(v_ar, dims, [0, 2]) @ embed_operator(w, dims, [0, 1])
    sigma = tensor_q(DensityMatrix.from_diagonal(witness.tau.as_floats()), DensityMatrix.maximally_mixed(n))
    cert = TransitionCertificate(
        mode="theorem1", state=rho.with_dims([n]), target=rho_prime.with_dims([n]), catalyst=sigma,
        dynamics=u, basis=Basis.computational(m * n), ancilla_dim=1,
        meta={"witness": witness.to_json(), "catalyst_dim": m, "dilation_dim": n,
              "rationalization_error": [spectra.perturbation, spectra.perturbation_prime],
              "snapped": snap},
    )
    return _finish(cert, tol)


def build_lemma2_certificate(rho: DensityMatrix, rho_prime: DensityMatrix, witness: WitnessPair | None,
                             *, snap: bool = False, tol: float = BUILD_TOL) -> TransitionCertificate:
    """``rho ⊗ 1_m -> rho' ⊗ 1_m`` with the catalyst returned exactly, no external dephasing.

    Layout A ⊗ R2 ⊗ B ⊗ R: the dephasing-catalysis unitary on A ⊗ B ⊗ R is followed by a
    controlled clock from B onto the maximally mixed R2, which dephases B in
    place of the external map.
    """
    rho, rho_prime, spectra, witness = _prepare(rho, rho_prime, witness, snap)
    n, m = witness.joint.shape
    w = _core_unitary(spectra, witness)
    v_ar = dephasing_dilation(n, Basis(spectra.basis_prime))
    v_r2b = dephasing_dilation(m, Basis.computational(m))
    dims = [n, m, m, n]
    u = embed_operator(v_r2b, dims, [2, 1]) @ embed_operator(v_ar, dims, [0, 3]) @ embed_operator(w, dims, [0, 2])
    sigma = tensor_q(DensityMatrix.from_diagonal(witness.tau.as_floats()), DensityMatrix.maximally_mixed(n))
    cert = TransitionCertificate(
        mode="lemma2", state=rho.with_dims([n]), target=rho_prime.with_dims([n]), catalyst=sigma,
        dynamics=u, basis=None, ancilla_dim=m,
        meta={"witness": witness.to_json(), "catalyst_dim": m, "dilation_dim": n,
              "rationalization_error": [spectra.perturbation, spectra.perturbation_prime],
              "snapped": snap},
    )
    return _finish(cert, tol)
