from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from ..errors import BadIndices, TraceIncomplete, UnknownEigenvalue
from ..fock import StateVector, exp_state, heisenberg_state
from ..lattice import GramMatrix
from ..twisted import evaluate
from ..zhu import (ReductionTrace, ZhuElement, build_zhu, check_group_algebra_iso, circle_product, evaluate_element,
                   heisenberg_zhu_certificate, lemma_coefficient, matrices_equal, o_relation,
                   replay, semisimplicity_and_rationality, star_product, theta_eigenvalue,
                   zhu_structure)


A1 = GramMatrix.from_rows([[2]], 'A1')
A2 = GramMatrix.from_rows([[2, -1], [-1, 2]], 'A2')
A1A1 = GramMatrix.from_rows([[2, 0], [0, 2]], 'A1xA1')


@pytest.fixture(scope='module')
def a1():
    return build_zhu(A1)


@pytest.fixture(scope='module')
def a2():
    return build_zhu(A2)


def lemma_recursion(m: int, k: int) -> sympy.Rational:
    b = lambda j: sympy.binomial(sympy.Rational(1, 2), j)
    rows = {}
    for row in range(m + 1):
        rows[row] = -b(row + k + 1) - sum(b(j) * rows[row - j] for j in range(1, row + 1))
    return rows[m]


def test_lemma_coefficients():
    """Test lemma_coefficient."""
    assert lemma_coefficient(0, 0) == Fraction(-1, 2)
    assert lemma_coefficient(1, 0) == Fraction(3, 8)


@pytest.mark.parametrize('m, k', [(0, 1), (1, 1), (2, 0), (2, 3), (4, 2)])
def test_lemma_coefficients_match_recursion(m, k):
    """Lemma coefficients match a sympy recursion."""
    expected = lemma_recursion(m, k)
    assert lemma_coefficient(m, k) == Fraction(int(expected.p), int(expected.q))


def test_normalization_is_calibrated(a1, a2):
    """Normalization is calibrated."""
    assert a1[4] == 'full'
    assert a2[4] == 'full'


def test_theta_eigenvalue(a1):
    """Test theta_eigenvalue."""
    voa = a1[1]
    assert theta_eigenvalue(voa, heisenberg_state([(0, -1)], (0,))) == 1
    assert theta_eigenvalue(voa, heisenberg_state([(0, -1), (0, -1)], (0,))) == 0
    with pytest.raises(UnknownEigenvalue):
        theta_eigenvalue(voa, exp_state((1,)))


def test_untwisted_star_product_has_unit(a1):
    """Untwisted star product has unit."""
    voa = a1[1]
    for m in voa.basis_up_to(2):
        v = StateVector.of(m)
        assert star_product(voa, voa.vacuum(), v, T=1) == v


def test_unknown_order(a1):
    """Only T = 1 and T = 2 are supported."""
    voa = a1[1]
    with pytest.raises(UnknownEigenvalue):
        circle_product(voa, voa.vacuum(), voa.vacuum(), T=3)


def test_o_relation_indices(a1):
    """o_relation needs m >= n >= 0."""
    voa = a1[1]
    with pytest.raises(BadIndices):
        o_relation(voa, voa.vacuum(), voa.vacuum(), m=0, n=1)


def test_A1_exponential_of_2alpha(a1):
    """A1 exponential of 2alpha."""
    extension, voa, reducer, modules, _ = a1
    assert reducer.reduce(exp_state((2,))) == ZhuElement({0: Fraction(-1, 256)}, 2)
    adjusted = extension.Q.section_sign((2,))
    assert reducer.reduce(exp_state((2,), adjusted)) == ZhuElement({0: Fraction(1, 256)}, 2)
    assert reducer.cosets.reps == [(0,), (1,)]
    assert reducer.reduce(exp_state((1,))) == ZhuElement({1: Fraction(1)}, 2)
    assert reducer.reduce(exp_state((-1,))) == ZhuElement({1: Fraction(-1)}, 2)


def test_A1_structure(a1):
    """A1 structure."""
    extension, voa, reducer, modules, _ = a1
    structure = zhu_structure(reducer)
    assert structure.dim == 2
    assert structure.is_associative()
    assert structure.center_reps() == [0, 1]
    # u_a * u_a == -1, so the algebra is C[x]/(x^2 + 1)
    assert structure.table[1][1] == ZhuElement({0: Fraction(-1, 16)}, 2)
    assert structure.u_table()[1][1] == ZhuElement({0: Fraction(-1)}, 2)
    assert check_group_algebra_iso(structure, extension)['iso_group_algebra']


@pytest.mark.parametrize('gram, center', [(A2, [0]), (A1A1, [0, 1, 2, 3])])
def test_rank_two_structure(gram, center):
    """Rank two structure."""
    extension, voa, reducer, modules, _ = build_zhu(gram)
    structure = zhu_structure(reducer)
    assert structure.dim == 4
    assert structure.is_associative()
    assert structure.center_reps() == center
    assert check_group_algebra_iso(structure, extension)['iso_group_algebra']


def test_A2_products_of_both_signs(a2):
    """A2 products of both signs."""
    reducer = a2[2]
    reps = [b for b in reducer.cosets.reps if any(b)]
    assert {A2.inner(a, b) for a in reps for b in reps if a != b} == {-1, 1}
    assert 'descent' in reducer.reduce_traced(exp_state((2, 1))).trace.rule_counts()


@pytest.mark.parametrize('which, lam', [('a1', '1/16'), ('a2', '1/8')])
def test_rationality_certificate(which, lam, request):
    """Test semisimplicity_and_rationality."""
    extension, voa, reducer, modules, _ = request.getfixturevalue(which)
    certificate = semisimplicity_and_rationality(zhu_structure(reducer), modules)
    assert certificate['omega_constant'] == lam
    assert certificate['sum_of_squares'] == 2 ** extension.gram.dim
    assert certificate['theta_rational']


def test_heisenberg_certificate(a1):
    """Test heisenberg_zhu_certificate."""
    reducer, modules = a1[2], a1[3]
    result = heisenberg_zhu_certificate(reducer, max_weight=6, modules=modules)
    assert result['A_theta_M1_is_C']


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 4), st.integers(0, 1000), st.sampled_from([-2, -1, 1, 3]))
def test_dual_path(a1, wt, pick, coefficient):
    """Reduction and top-level evaluation agree on A1."""
    extension, voa, reducer, modules, _ = a1
    basis = voa.basis(wt)
    v = StateVector.of(basis[pick % len(basis)], Fraction(coefficient))
    assert matrices_equal(evaluate(modules, v), evaluate_element(modules, reducer.reduce(v)))


def test_o_theta_generators_vanish(a1):
    """Circle products reduce to zero on A1."""
    extension, voa, reducer, modules, _ = a1
    states = [StateVector.of(m) for m in voa.basis_up_to(1)]
    for u in states:
        for v in states:
            w = circle_product(voa, u, v)
            assert reducer.reduce(w).is_zero()
            assert all(M.is_zero_matrix for M in evaluate(modules, w))


def basis_state(voa, wt: int, pick: int, coefficient: int) -> StateVector:
    basis = voa.basis(wt)
    return StateVector.of(basis[pick % len(basis)], Fraction(coefficient))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 3), st.integers(0, 1000), st.sampled_from([-2, -1, 1, 3]))
def test_dual_path_A2(a2, wt, pick, coefficient):
    """Reduction and top-level evaluation agree on A2."""
    extension, voa, reducer, modules, _ = a2
    v = basis_state(voa, wt, pick, coefficient)
    assert matrices_equal(evaluate(modules, v), evaluate_element(modules, reducer.reduce(v)))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 3), st.integers(0, 1000), st.integers(0, 1000))
def test_reduction_replays_and_is_idempotent(a2, wt, first, second):
    """Replaying the trace of a reduction gives its result; reducing a normal form changes nothing."""
    reducer = a2[2]
    voa = a2[1]
    v = basis_state(voa, wt, first, 1) + basis_state(voa, wt, second, -2)
    reduction = reducer.reduce_traced(v)
    assert reduction.element == reducer.reduce(v)
    assert replay(reduction.trace, v) == reduction.element
    assert reducer.reduce(reducer.lift(reduction.element)) == reduction.element


def test_each_reduction_gets_its_own_trace(a2):
    """A second reduction of the same state records the same rewrites afresh."""
    reducer = a2[2]
    v = heisenberg_state([(0, -2), (1, -1)], (1, 1))
    first = reducer.reduce_traced(v).trace
    second = reducer.reduce_traced(v).trace
    assert first is not second
    assert first.steps == second.steps
    assert {'theta-even', 'heisenberg'} <= set(first.rule_counts())
    assert all(step.phase in ('parity', 'heisenberg', 'exponential') for step in first.steps)


def test_replay_needs_every_rewrite(a2):
    """Replay with a trace that lacks rewrites is refused."""
    reducer = a2[2]
    v = exp_state((2, 1))
    with pytest.raises(TraceIncomplete):
        replay(ReductionTrace(reducer.dim), v)


@pytest.mark.parametrize('m, n', [(1, 0), (2, 1), (3, 3)])
def test_o_relations_reduce_to_zero_on_A2(a2, m, n):
    """Res_z (1+z)^(wt u - 1 + delta_r + r/2 + n) z^(-m-delta_r-1) Y(u, z) w lies in O_theta."""
    extension, voa, reducer, modules, _ = a2
    states = [StateVector.of(x) for x in voa.basis_up_to(1)]
    for x in states:
        for u in (voa.theta_even_part(x), voa.theta_odd_part(x)):
            if not u:
                continue
            for w in states:
                relation = o_relation(voa, u, w, m, n)
                assert reducer.reduce(relation).is_zero()
                assert all(M.is_zero_matrix for M in evaluate(modules, relation))


def test_star_product_is_multiplicative_on_top_levels(a2):
    """o(u * v) = o(u) o(v) for theta-even u on every twisted module."""
    extension, voa, reducer, modules, _ = a2
    states = [StateVector.of(x) for x in voa.basis_up_to(1)]
    even = [voa.theta_even_part(x) for x in states]
    for u in (e for e in even if e):
        for v in states:
            left = evaluate(modules, star_product(voa, u, v))
            right = [a * b for a, b in zip(evaluate(modules, u), evaluate(modules, v))]
            assert matrices_equal(left, right)


def test_even_times_odd_is_zero_on_A2(a2):
    """V^0 * V^1 lies in O_theta."""
    extension, voa, reducer, modules, _ = a2
    states = [StateVector.of(x) for x in voa.basis_up_to(1)]
    for x in states:
        u = voa.theta_even_part(x)
        if not u:
            continue
        for y in states:
            v = voa.theta_odd_part(y)
            if v:
                assert reducer.reduce(star_product(voa, u, v)).is_zero()
