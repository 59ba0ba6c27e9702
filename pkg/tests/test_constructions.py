from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from catalytic.constructions import (
    Basis, ConstructionError, TStep, TTransformChain, chain_to_controlled_permutation,
    clock_unitary_basis, decohere, dephasing_dilation, hlp_chain, schur_horn_unitary,
)
from catalytic.entropy import random_majorizing_pair
from catalytic.exact import Permutation
from catalytic.quantum import (
    DensityMatrix, partial_trace, random_density_matrix, random_unitary, tensor_q, trace_distance,
    unitarity_error,
)


def test_clock_unitaries_qubit():
    u = clock_unitary_basis(2)
    assert np.allclose(u[0], np.eye(2)) and np.allclose(u[1], np.diag([1, -1]))
    assert abs(np.trace(u[0] @ u[1].conj().T)) < 1e-15


def test_clock_unitaries_orthogonal():
    u = clock_unitary_basis(5)
    gram = np.array([[np.trace(a @ b.conj().T) for b in u] for a in u])
    assert np.abs(gram - 5 * np.eye(5)).max() <= 1e-10


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.integers(0, 2**32 - 1))
def test_decohere_is_idempotent(d, seed):
    rng = np.random.default_rng(seed)
    rho = random_density_matrix(d, rng)
    basis = Basis(random_unitary(d, rng))
    once = decohere(rho, basis)
    assert trace_distance(decohere(once, basis).matrix, once.matrix) <= 1e-12


def test_subsystem_decohere_matches_global_on_product():
    rng = np.random.default_rng(4)
    a, b = random_density_matrix(2, rng), random_density_matrix(3, rng)
    basis = Basis(random_unitary(3, rng))
    local = decohere(tensor_q(a, b), basis, subsystem=1)
    assert trace_distance(local.matrix, tensor_q(a, decohere(b, basis)).matrix) <= 1e-12


def test_dilation_on_qubit_computational_basis():
    rng = np.random.default_rng(11)
    rho = random_density_matrix(2, rng)
    v = dephasing_dilation(2, Basis.computational(2))
    joint = tensor_q(rho, DensityMatrix.maximally_mixed(2))
    out = partial_trace(joint.evolve(v), [0])
    assert trace_distance(out.matrix, np.diag(np.diag(rho.matrix))) <= 1e-10


def test_single_t_transform():
    chain = hlp_chain([1, 0], [F(1, 2), F(1, 2)])
    assert list(chain.steps) == [TStep(0, 1, F(1, 2))]
    d, cp = chain_to_controlled_permutation(chain)
    assert d == 2
    assert set(cp.perms) == {Permutation.identity(2), Permutation.transposition(2, 0, 1)}


def test_three_level_chain_replays_exactly():
    x, y = [F(1, 2), F(1, 3), F(1, 6)], [F(1, 3)] * 3
    chain = hlp_chain(x, y)
    assert len(chain) <= 2
    assert chain.apply(x) == y


def test_chain_rejects_non_majorizing():
    with pytest.raises(ConstructionError):
        hlp_chain([F(1, 2), F(1, 2)], [F(3, 4), F(1, 4)])
    with pytest.raises(ConstructionError):
        TTransformChain(2, (TStep(0, 0, F(1, 2)),))


def test_control_dimension_cap():
    chain = hlp_chain([1, 0, 0], [F(1, 3), F(1, 3), F(1, 3)])
    with pytest.raises(ConstructionError):
        chain_to_controlled_permutation(chain, max_control=2)


fractions = st.lists(st.integers(0, 12), min_size=2, max_size=5).filter(lambda w: sum(w) > 0)


@settings(max_examples=60, deadline=None)
@given(fractions, st.integers(0, 2**32 - 1))
def test_controlled_permutation_average_hits_target(w, seed):
    x = [F(v, sum(w)) for v in w]
    rng = np.random.default_rng(seed)
    y = list(x)
    for _ in range(3):
        i, j = rng.choice(len(y), size=2, replace=False)
        t = F(int(rng.integers(0, 5)), 4)
        y[i], y[j] = (1 - t) * y[i] + t * y[j], t * y[i] + (1 - t) * y[j]
    rng.shuffle(y)
    chain = hlp_chain(x, y)
    assert len(chain) <= len(x) - 1
    assert chain.apply(x) == y
    d, cp = chain_to_controlled_permutation(chain)
    assert cp.control_dim == d
    assert cp.average(x) == y


def test_schur_horn_two_level_rotation():
    u = schur_horn_unitary([1.0, 0.0], [0.5, 0.5])
    assert np.allclose(np.abs(u), np.full((2, 2), 2**-0.5))
    diag = np.real(np.diag(u @ np.diag([1.0, 0.0]) @ u.conj().T))
    assert np.allclose(diag, [0.5, 0.5], atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.integers(0, 2**32 - 1))
def test_schur_horn_random(n, seed):
    rng = np.random.default_rng(seed)
    lam, diag = random_majorizing_pair(n, rng)
    u = schur_horn_unitary(lam, diag)
    out = np.real(np.diag(u @ np.diag(lam) @ u.conj().T))
    assert np.abs(out - diag).max() <= 1e-8
    assert unitarity_error(u) <= 1e-10


def test_schur_horn_rejects_bad_pair():
    with pytest.raises(ConstructionError):
        schur_horn_unitary([0.5, 0.5], [0.9, 0.1])
