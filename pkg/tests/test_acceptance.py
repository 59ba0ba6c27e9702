"""Acceptance sweeps.  Each test records one PASS/FAIL line, printed at the end of the session."""

import json
import math
import time
from dataclasses import replace
from fractions import Fraction as F

import numpy as np
import pytest

from catalytic.catalysis import (
    SearchBudget, WitnessPair, build_classical_lemma3, build_lemma2_certificate, build_theorem1_certificate,
    find_correlating_witness, rational_spectra, search_conjecture_certificate, verify_certificate,
)
from catalytic.cli import main
from catalytic.constructions import Basis, decohere, dephasing_dilation, schur_horn_unitary
from catalytic.entropy import ALPHA_GRID, majorizes, random_majorizing_pair, trumping_check
from catalytic.exact import JointDist, Permutation, ProbVector
from catalytic.protocols import CoolingError, cooling_run, fig2_example
from catalytic.quantum import (
    DensityMatrix, partial_trace, random_density_matrix, random_unitary, tensor_q, trace_distance,
    unitarity_error,
)
from catalytic.serialize import certificate_from_json

from conftest import entropy_oracle, random_decreasing_pair, random_increasing_pair, replay_classical

RESULTS = []


def record(number, title, ok, detail, seconds, limit):
    ok = ok and seconds < limit
    RESULTS.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail}; {seconds:.2f} s, limit {limit} s)")
    print(RESULTS[-1])
    return ok


def test_1_counterexample_table(capsys):
    t0 = time.monotonic()
    code = main(["fig2"])
    out = json.loads(capsys.readouterr().out)
    cert = certificate_from_json(out["certificate"])
    report = verify_certificate(cert)
    zero = out["verification"]["exact_residuals"] == {"transition": "0/1", "catalyst": "0/1"}
    marg = out["verification"]["info"]["final_system_marginal"] == ["1/6", "1/6", "2/3"]
    sys, cat = replay_classical(cert)
    cat_ok = [str(v) for v in cert.catalyst.entries] == ["2/3", "1/3"] and np.allclose(cat, [2 / 3, 1 / 3])
    inf_row = [r for r in out["scan"]["rows"] if r["alpha"] == "inf"][0]
    drop = (abs(inf_row["before"] - math.log(2)) < 1e-12 and abs(inf_row["after"] - math.log(1.5)) < 1e-12
            and inf_row["sign"] == -1)
    ok = code == 0 and report.passed and zero and marg and cat_ok and drop
    assert record(1, "counterexample certificate exact, S_inf log 2 -> log 3/2", ok,
                  f"residuals {out['verification']['exact_residuals']}", time.monotonic() - t0, 1)


def test_2_dephasing_dilation():
    t0 = time.monotonic()
    rng = np.random.default_rng(1)
    worst = 0.0
    for d in (2, 3, 4, 6):
        for _ in range(200):
            rho = random_density_matrix(d, rng)
            basis = Basis(random_unitary(d, rng))
            v = dephasing_dilation(d, basis)
            out = partial_trace(tensor_q(rho, DensityMatrix.maximally_mixed(d)).evolve(v), [0])
            worst = max(worst, trace_distance(out.matrix, decohere(rho, basis).matrix))
    assert record(2, "dilation reproduces dephasing", worst <= 1e-10, f"worst trace distance {worst:.2e}",
                  time.monotonic() - t0, 10)


def test_3_schur_horn():
    t0 = time.monotonic()
    rng = np.random.default_rng(2)
    diag_err = unit_err = 0.0
    for n in (3, 5, 8):
        for _ in range(100):
            lam, diag = random_majorizing_pair(n, rng)
            lam = np.sort(lam)[::-1] if rng.random() < 0.5 else lam
            u = schur_horn_unitary(lam, diag)
            got = np.real(np.diag(u @ np.diag(lam) @ u.conj().T))
            diag_err = max(diag_err, float(np.abs(got - diag).max()))
            unit_err = max(unit_err, unitarity_error(u))
    ok = diag_err <= 1e-8 and unit_err <= 1e-10
    assert record(3, "Schur-Horn unitary synthesis", ok, f"diag {diag_err:.1e}, unitarity {unit_err:.1e}",
                  time.monotonic() - t0, 30)


def test_4_classical_realization_pipeline():
    t0 = time.monotonic()
    rng = np.random.default_rng(2024)
    found = 0
    bad = []
    for k in range(50):
        p, pp = random_increasing_pair(rng, max_dim=4, max_den=12)
        w = find_correlating_witness(p, pp, SearchBudget(max_seconds=3), realizable=True)
        if w is None:
            continue
        cert = build_classical_lemma3(p, pp, w)
        report = verify_certificate(cert)
        found += 1
        zero = report.passed and all(v == 0 for v in report.exact.values())
        converse = entropy_oracle(cert.target.entries) > entropy_oracle(cert.state.entries) \
            and sum(1 for v in cert.target.entries if v) >= sum(1 for v in cert.state.entries if v)
        if not (zero and converse):
            bad.append(k)
    assert record(4, "witness search + exact controlled-permutation realization", not bad and found > 0,
                  f"{found}/50 witnesses found, {len(bad)} bad certificates", time.monotonic() - t0, 300)


def _diag_state(spectrum, rng):
    u = random_unitary(len(spectrum), rng)
    return DensityMatrix(u @ np.diag([float(v) for v in spectrum]) @ u.conj().T)


def _random_quantum_pairs(rng, count):
    pairs = []
    tries = 0
    while len(pairs) < count and tries < 200:
        tries += 1
        p, pp = random_increasing_pair(rng, max_dim=3, max_den=10)
        rho, rho_p = _diag_state(p.entries, rng), _diag_state(pp.entries, rng)
        spectra = rational_spectra(rho, rho_p)
        if spectra.p.sorted_desc() != p.sorted_desc() or spectra.p_prime.sorted_desc() != pp.sorted_desc():
            continue
        w = find_correlating_witness(spectra.p, spectra.p_prime, SearchBudget(max_seconds=2))
        if w is not None:
            pairs.append((rho, rho_p, w))
    return pairs


def test_5_quantum_pipelines():
    t0 = time.monotonic()
    rng = np.random.default_rng(5)
    fig2_w = WitnessPair(ProbVector([F(2, 3), F(1, 3)]), JointDist([F(1, 6), 0, F(1, 6), 0, F(1, 3), F(1, 3)], (3, 2)))
    cases = [(_diag_state([0, F(1, 2), F(1, 2)], rng), _diag_state([F(1, 6), F(1, 6), F(2, 3)], rng), fig2_w)]
    cases += _random_quantum_pairs(rng, 20)
    worst = {"transition": 0.0, "catalyst": 0.0, "decorrelation": 0.0}
    failures = 0
    for rho, rho_p, w in cases:
        for builder in (build_theorem1_certificate, build_lemma2_certificate):
            report = verify_certificate(builder(rho, rho_p, w), tol=1e-7)
            for key, v in report.residuals.items():
                worst[key] = max(worst[key], v)
            failures += not report.passed
    ok = failures == 0 and len(cases) == 21 and worst["decorrelation"] <= 1e-8
    detail = f"{len(cases)} pairs, worst " + ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    assert record(5, "dephasing-assisted and self-dephasing quantum certificates", ok, detail,
                  time.monotonic() - t0, 120)


def _mutate_classical(cert, rng):
    kind = rng.integers(3)
    if kind == 0:
        m = list(cert.dynamics.mapping)
        i, j = rng.choice(len(m), size=2, replace=False)
        m[i], m[j] = m[j], m[i]
        return replace(cert, dynamics=Permutation(m))
    target = cert.target if kind == 1 else cert.catalyst
    e = list(target.entries)
    i, j = rng.choice(len(e), size=2, replace=False)
    step = min(e[i], F(int(rng.integers(1, 4)), 12))
    e[i] -= step
    e[j] += step
    new = type(target)(e) if kind == 1 else ProbVector(e).reshape(target.shape)
    return replace(cert, target=new) if kind == 1 else replace(cert, catalyst=new)


def _classical_claim_holds(cert):
    try:
        sys, cat = replay_classical(cert)
    except Exception:
        return False
    d = cert.ancilla_dim
    want = np.kron(cert.target.as_floats(), np.full(d, 1 / d)) if d > 1 else np.array(cert.target.as_floats())
    return np.abs(sys - want).sum() <= 1e-12 and np.abs(cat - np.array(cert.catalyst.as_floats())).sum() <= 1e-12


def _quantum_claim_holds(cert):
    u = cert.dynamics
    n, m = cert.state.dim, cert.catalyst.dim
    joint = np.kron(cert.state.matrix, cert.catalyst.matrix)
    out = (u @ joint @ u.conj().T).reshape(n, m, n, m)
    sys = np.einsum("ajbj->ab", out)
    cat = np.einsum("ajak->jk", out)
    cat = np.diag(np.diag(cat))
    tnorm = lambda x: 0.5 * np.abs(np.linalg.eigvalsh((x + x.conj().T) / 2)).sum()  # noqa: E731
    return tnorm(sys - cert.target.matrix) <= 1e-8 and tnorm(cat - cert.catalyst.matrix) <= 1e-8


def _mutate_quantum(cert, rng):
    kind = rng.integers(2)
    if kind == 0:
        k = cert.dynamics.shape[0]
        h = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
        h = (h + h.conj().T) * 10 ** rng.uniform(-6, -1)
        w, v = np.linalg.eigh(h)
        return replace(cert, dynamics=(v * np.exp(1j * w)) @ v.conj().T @ cert.dynamics)
    u = random_unitary(cert.target.dim, rng)
    return replace(cert, target=DensityMatrix(u @ cert.target.matrix @ u.conj().T))


def test_6_converse_enforcement():
    t0 = time.monotonic()
    rng = np.random.default_rng(6)
    impossible = 0
    for _ in range(50):
        p, pp = random_decreasing_pair(rng)
        result = search_conjecture_certificate(p, pp, SearchBudget(max_seconds=1))
        impossible += result.status == "impossible" and result.certificate is None
    classical = [fig2_example()]
    for _ in range(4):
        p, pp = random_increasing_pair(rng, max_dim=3, max_den=6)
        w = find_correlating_witness(p, pp, SearchBudget(max_seconds=2), realizable=True)
        if w is not None:
            classical.append(build_classical_lemma3(p, pp, w))
    quantum = [c for rho, rho_p, w in _random_quantum_pairs(rng, 2)
               for c in [build_theorem1_certificate(rho, rho_p, w)]]
    accepted_bad = changed = 0
    for k in range(1000):
        if k % 4 == 3 and quantum:
            mutant = _mutate_quantum(quantum[k % len(quantum)], rng)
            holds = _quantum_claim_holds(mutant)
        else:
            mutant = _mutate_classical(classical[k % len(classical)], rng)
            holds = _classical_claim_holds(mutant)
        try:
            passed = verify_certificate(mutant).passed
        except Exception:
            passed = False
        if not holds:
            changed += 1
            accepted_bad += passed
    ok = impossible == 50 and accepted_bad == 0 and changed > 500
    assert record(6, "converse enforcement and mutation rejection", ok,
                  f"{impossible}/50 provably impossible, {changed} breaking mutations, {accepted_bad} accepted",
                  time.monotonic() - t0, 120)


def test_7_cooling():
    t0 = time.monotonic()
    rho = DensityMatrix.from_diagonal([0.9, 0.1])
    try:
        report = cooling_run(rho, 0.05, 4)
    except CoolingError as exc:
        record(7, "catalytic cooling at epsilon 0.05 bits, n = 4", False, str(exc), time.monotonic() - t0, 60)
        pytest.fail(f"cooling at 0.05 bits not reached: {exc}")
    ok = (max(report.marginal_residuals) <= 1e-6 and max(report.catalyst_residuals) <= 1e-6
          and report.max_pair_mi > 1e-3 and report.lambda_ratio[1] < report.lambda_ratio[0])
    assert record(7, "catalytic cooling at epsilon 0.05 bits, n = 4", ok,
                  f"max pair MI {report.max_pair_mi:.3g} bits, lambda ratios {report.lambda_ratio}",
                  time.monotonic() - t0, 60)


def test_8_renyi_monotonicity():
    t0 = time.monotonic()
    rng = np.random.default_rng(8)
    violations = 0
    for _ in range(500):
        x, y = random_majorizing_pair(int(rng.integers(2, 7)), rng)
        assert majorizes(x, y, 1e-12)
        violations += len(trumping_check(x, y, tol=1e-12).violations)
    assert record(8, "Renyi monotones on majorizing pairs", violations == 0,
                  f"{violations} violations over {len(ALPHA_GRID)} orders", time.monotonic() - t0, 10)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
