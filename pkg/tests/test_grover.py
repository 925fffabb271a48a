import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ghostgrover.errors import InvalidArgumentError, ResourceError
from ghostgrover.grover import (
    ProbabilityVector,
    absorbed_basis_probabilities,
    amplitude_mean,
    cj_equivalence_check,
    diffusion_apply,
    diffusion_matrix,
    grover_iterate,
    grover_probabilities,
    h0_overlap,
    optimal_iterations,
    success_probability,
    theoretical_success,
)
from ghostgrover.state import (
    OracleObject,
    SchmidtState,
    apply_oracle,
    builtin_object,
    gaussian_profile,
    point_object,
    uniform_block_profile,
)


def dense_D(M):
    # oracle: 2|h0><h0| - I from an explicit outer product
    h0 = np.ones(M) / math.sqrt(M)
    return 2 * np.outer(h0, h0) - np.eye(M)


def random_pair(m, rng):
    lam = np.abs(rng.normal(size=(m, m)))
    lam /= np.linalg.norm(lam)
    return SchmidtState(lam), OracleObject(rng.random((m, m)) < 0.4)


# -- diffusion --------------------------------------------------------------------

def test_diffusion_fixes_h0():
    h0 = np.full(16, 0.25)
    np.testing.assert_allclose(diffusion_apply(h0), h0, atol=1e-15)


def test_diffusion_negates_orthogonal_vectors():
    v = np.array([1.0, -1.0, 2.0, -2.0])
    np.testing.assert_allclose(diffusion_apply(v), -v, atol=1e-15)


def test_diffusion_example():
    np.testing.assert_allclose(diffusion_apply([0.5, 0.5, 0.5, -0.5]), [0, 0, 0, 1], atol=1e-15)


def test_diffusion_matrix_matches_outer_product():
    np.testing.assert_allclose(diffusion_matrix(9), dense_D(9), atol=1e-15)


def test_two_means_are_distinct():
    v = np.array([1.0, 1.0, 1.0, 1.0])
    assert amplitude_mean(v) == 1.0
    assert h0_overlap(v) == 2.0


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 300), st.integers(0, 2**32 - 1))
def test_diffusion_properties(M, seed):
    v = np.random.default_rng(seed).normal(size=M)
    Dv = diffusion_apply(v)
    assert abs(np.linalg.norm(Dv) - np.linalg.norm(v)) <= 1e-12 * max(1, np.linalg.norm(v))
    np.testing.assert_allclose(diffusion_apply(Dv), v, atol=1e-12)
    np.testing.assert_allclose(Dv + v, 2 * v.mean(), atol=1e-12)
    np.testing.assert_allclose(Dv, dense_D(M) @ v, atol=1e-12)


# -- single-iteration probabilities ------------------------------------------------

def test_exact_search_m2():
    idler = apply_oracle(uniform_block_profile(2, 2), point_object(2, 1, 1))
    p = grover_probabilities(idler).p
    np.testing.assert_allclose(p, [0, 0, 0, 1], atol=1e-12)


def test_empty_object_uniform():
    idler = apply_oracle(uniform_block_profile(4, 4), builtin_object("empty", 4))
    np.testing.assert_allclose(grover_probabilities(idler).p, np.full(16, 1 / 16), atol=1e-15)


def test_closed_form_matches_matrix_form_m8_five_marks():
    rng = np.random.default_rng(11)
    marks = np.zeros(64, dtype=bool)
    marks[rng.choice(64, 5, replace=False)] = True
    idler = apply_oracle(uniform_block_profile(8, 8), OracleObject(marks.reshape(8, 8)))
    expected = (dense_D(64) @ idler.vector) ** 2
    np.testing.assert_allclose(grover_probabilities(idler).p, expected, atol=1e-12)


@pytest.mark.parametrize("m", [2, 4, 8])
def test_closed_form_vs_matrix_random(m):
    rng = np.random.default_rng(m)
    D = dense_D(m * m)
    for _ in range(100):
        s, obj = random_pair(m, rng)
        idler = apply_oracle(s, obj)
        expected = (D @ idler.vector) ** 2
        np.testing.assert_allclose(grover_probabilities(idler).p, expected, atol=1e-12, rtol=0)
        np.testing.assert_allclose(absorbed_basis_probabilities(idler).p,
                                   grover_probabilities(idler).p, atol=1e-12, rtol=0)


def test_physical_probabilities_sum_to_one():
    rng = np.random.default_rng(3)
    s, obj = random_pair(8, rng)
    p = grover_probabilities(apply_oracle(s, obj))
    assert p.convention == "physical"
    assert p.p.sum() == pytest.approx(1.0, abs=1e-12)


def test_absorbed_basis_examples():
    idler = apply_oracle(uniform_block_profile(2, 2), point_object(2, 1, 1))
    np.testing.assert_allclose(absorbed_basis_probabilities(idler).p, [0, 0, 0, 1], atol=1e-12)
    empty = apply_oracle(uniform_block_profile(4, 4), builtin_object("empty", 4))
    np.testing.assert_allclose(absorbed_basis_probabilities(empty).p, 1 / 16, atol=1e-15)


def test_probability_vector_rejects_bad_convention():
    with pytest.raises(InvalidArgumentError):
        ProbabilityVector([0.5, 0.5], "other")


# -- iteration --------------------------------------------------------------------

def test_iterate_m2_one_step():
    s, obj = uniform_block_profile(2, 2), point_object(2, 0, 1)
    assert success_probability(grover_iterate(s, obj, 1), obj) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("t", [1, 2, 5])
def test_iterate_zero_steps(t):
    obj = OracleObject(np.arange(64).reshape(8, 8) < t)
    v = grover_iterate(uniform_block_profile(8, 8), obj, 0)
    assert success_probability(v, obj) == pytest.approx(t / 64, abs=1e-15)


def test_iterate_m1024_one_mark():
    obj = point_object(32, 7, 19)
    k = optimal_iterations(1024, 1)
    assert k == 25
    p = success_probability(grover_iterate(uniform_block_profile(32, 32), obj, k), obj)
    assert p >= 0.999
    assert p == pytest.approx(theoretical_success(1024, 1, k), abs=1e-9)


def test_iterate_negative_k():
    with pytest.raises(InvalidArgumentError):
        grover_iterate(uniform_block_profile(2, 2), point_object(2, 0, 0), -1)


@pytest.mark.parametrize("m, t", [(m, t) for m in (2, 4, 8, 16, 32, 64) for t in (1, 2, 5)
                                  if t < m * m])
def test_amplification_law(m, t):
    M = m * m
    rng = np.random.default_rng(M * 10 + t)
    marks = np.zeros(M, dtype=bool)
    marks[rng.choice(M, t, replace=False)] = True
    obj = OracleObject(marks.reshape(m, m))
    state = uniform_block_profile(m, m)
    for k in range(3 * optimal_iterations(M, t) + 1):
        got = success_probability(grover_iterate(state, obj, k), obj)
        assert abs(got - theoretical_success(M, t, k)) <= 1e-9


@pytest.mark.parametrize("M,t,k", [(4, 1, 1), (1048576, 1, 804), (4, 3, 0), (64, 5, 2)])
def test_optimal_iterations(M, t, k):
    assert optimal_iterations(M, t) == k


@pytest.mark.parametrize("M,t", [(4, 0), (4, 4), (4, 5)])
def test_optimal_iterations_domain(M, t):
    with pytest.raises(InvalidArgumentError):
        optimal_iterations(M, t)


# -- tensor vs sequential -------------------------------------------------------------

def joint_by_kron(state, obj):
    # explicit two-photon vector sum_j lam_j |j>_s |j>_i and operator O (x) D
    M = state.m**2
    lam = state.lam.ravel()
    psi = sum(lam[j] * np.kron(np.eye(M)[j], np.eye(M)[j]) for j in range(M))
    op = np.kron(np.diag(obj.signs.ravel()), dense_D(M))
    out = op @ psi
    h0 = np.ones(M) / math.sqrt(M)
    return np.array([np.kron(h0, np.eye(M)[j]) @ out for j in range(M)]) ** 2


def test_cj_m2_mark3_proportional():
    s, obj = uniform_block_profile(2, 2), point_object(2, 1, 1)
    rep = cj_equivalence_check(s, obj)
    np.testing.assert_allclose(rep.joint, joint_by_kron(s, obj), atol=1e-15)
    assert rep.proportional
    assert rep.max_rel_deviation <= 1e-12
    # sequential D.O h0 = (0,0,0,1); the joint path carries the extra 1/M
    assert rep.constant == pytest.approx(0.25, rel=1e-12)


def test_cj_m4_uniform_empty():
    s, obj = uniform_block_profile(4, 4), builtin_object("empty", 4)
    rep = cj_equivalence_check(s, obj)
    np.testing.assert_allclose(rep.joint, rep.joint[0], atol=1e-15)
    np.testing.assert_allclose(rep.sequential, 1 / 16, atol=1e-15)


def test_cj_gaussian_records_h0_start_deviation():
    s, obj = gaussian_profile(4, 1.5), point_object(4, 1, 2)
    rep = cj_equivalence_check(s, obj)
    np.testing.assert_allclose(rep.joint, joint_by_kron(s, obj), atol=1e-15)
    # the lambda-weighted start keeps proportionality; an h0 start does not
    assert rep.proportional
    assert rep.h0_start_deviation > 1e-3


def test_cj_resource_cap():
    with pytest.raises(ResourceError):
        cj_equivalence_check(uniform_block_profile(32, 32), point_object(32, 0, 0))
