from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from ..errors import NotHomogeneous
from ..extension import lift
from ..fock import StateVector, apply_delta, binomial, exp_state, heisenberg_state, linear_sum, weight_of
from ..lattice import GramMatrix
from ..voa import LatticeVOA, weight_one_lie_algebra


A1 = GramMatrix.from_rows([[2]], 'A1')
A2 = GramMatrix.from_rows([[2, -1], [-1, 2]], 'A2')


@pytest.fixture(scope='module')
def a1():
    return LatticeVOA(A1)


@pytest.fixture(scope='module')
def a2():
    return LatticeVOA(A2)


def test_vacuum_and_creation(a2):
    """Vacuum and creation."""
    vac = a2.vacuum()
    for m in a2.basis_up_to(2):
        v = StateVector.of(m)
        assert a2.mode(vac, -1, v) == v
        assert a2.mode(v, -1, vac) == v
        for n in range(0, 3):
            assert a2.mode(v, n, vac).is_zero()


def test_exp_mode_leading_term(a2):
    """Exp mode leading term."""
    alpha, beta = (1, 0), (0, 1)
    n = -A2.inner(alpha, beta) - 1
    assert a2.exp_mode(lift(alpha), n, exp_state(beta)) == exp_state((1, 1))
    assert a2.exp_mode(lift(beta), n, exp_state(alpha)) == exp_state((1, 1), -1)
    assert a2.exp_mode(lift(alpha), n + 1, exp_state(beta)).is_zero()


def test_exp_mode_creates_heisenberg_modes(a1):
    """Exp modes create Heisenberg modes."""
    # e_a(0) e_-a = a(-1) 1 for <a,-a> = -2
    image = a1.exp_mode(lift((1,)), 0, exp_state((-1,)))
    sign = a1.cocycle((1,), (-1,))
    assert image == heisenberg_state([(0, -1)], (0,)).scale(sign)


def test_heisenberg_field_commutes_with_exp_field(a1):
    """Heisenberg and exponential fields satisfy the commutator relation."""
    a = heisenberg_state([(0, -1)], (0,))
    e = exp_state((1,))
    w = heisenberg_state([(0, -1)], (1,))
    for m in range(-1, 3):
        for n in range(-2, 2):
            left = a1.mode(a, m, a1.mode(e, n, w)) - a1.mode(e, n, a1.mode(a, m, w))
            assert left == a1.mode(e, m + n, w).scale(2)


@pytest.mark.parametrize('gram', [A1, A2])
def test_virasoro_grading(gram):
    """Virasoro grading."""
    voa = LatticeVOA(gram)
    for m in voa.basis_up_to(3):
        v = StateVector.of(m)
        assert voa.virasoro_mode(0, v) == v.scale(voa.weight(v))


@pytest.mark.parametrize('gram', [A1, A2])
def test_central_charge(gram):
    """Central charge."""
    voa = LatticeVOA(gram)
    omega = voa.omega()
    assert voa.virasoro_mode(2, omega) == voa.vacuum().scale(Fraction(gram.dim, 2))
    assert voa.virasoro_mode(0, omega) == omega.scale(2)


def test_translation(a2):
    """L(-1) acts as translation."""
    v = heisenberg_state([(0, -1)], (0, 0))
    assert a2.virasoro_mode(-1, v) == heisenberg_state([(0, -2)], (0, 0))
    e = exp_state((1, 0))
    assert a2.virasoro_mode(-1, e) == a2.mode(e, -2, a2.vacuum())


def test_virasoro_commutator(a2):
    """Virasoro commutator."""
    v = heisenberg_state([(1, -1)], (1, 1))
    left = a2.virasoro_mode(1, a2.virasoro_mode(-1, v)) - a2.virasoro_mode(-1, a2.virasoro_mode(1, v))
    assert left == a2.virasoro_mode(0, v).scale(2)


@pytest.mark.parametrize('gram', [A1, A2])
def test_delta_shifts_omega_by_rank_over_16(gram):
    """Delta shifts omega by rank over 16."""
    voa = LatticeVOA(gram)
    series = apply_delta(gram, voa.omega())
    assert series[0] == voa.omega()
    assert series[2] == voa.vacuum().scale(Fraction(gram.dim, 16))
    assert set(series) == {0, 2}


def test_theta(a2):
    """Test theta_state."""
    for m in a2.basis_up_to(2):
        v = StateVector.of(m)
        assert a2.theta_state(a2.theta_state(v)) == v
        assert a2.theta_even_part(v) + a2.theta_odd_part(v) == v
    assert a2.theta_state(heisenberg_state([(0, -1)], (0, 0))) == heisenberg_state([(0, -1)], (0, 0)).scale(-1)
    assert set(m.label for m in a2.theta_state(exp_state((1, 0))).terms) == {(-1, 0)}


@pytest.mark.parametrize('gram, dim, roots', [(A1, 3, 2), (A2, 8, 6)])
def test_weight_one_lie_algebra(gram, dim, roots):
    """Test weight_one_lie_algebra."""
    lie = weight_one_lie_algebra(gram)
    assert lie.dim == dim
    assert len(lie.roots) == roots
    assert lie.is_antisymmetric()
    assert lie.satisfies_jacobi()
    assert lie.form_is_invariant()


def test_basis_dimensions(a1, a2):
    """Basis dimensions."""
    assert len(a1.basis(1)) == 3
    assert len(a2.basis(1)) == 8
    assert len(a1.basis(0)) == 1


VOAS = {'A1': LatticeVOA(A1), 'A2': LatticeVOA(A2)}


def pick(voa, wt: int, index: int) -> StateVector:
    basis = voa.basis_up_to(wt)
    return StateVector.of(basis[index % len(basis)])


def products_up_to(voa, u: StateVector, v: StateVector):
    """(j, u_j v) for all j >= 0 with u_j v possibly non-zero."""
    top = int(voa.weight(u) + voa.weight(v)) - 1
    return [(j, voa.mode(u, j, v)) for j in range(top + 1)]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(VOAS)), st.integers(0, 1000), st.integers(0, 1000), st.integers(0, 1000),
       st.integers(-2, 2), st.integers(-2, 2))
def test_commutator_formula(name, i, j, k, m, n):
    """[u_m, v_n] w = sum_j binom(m, j) (u_j v)_{m+n-j} w."""
    voa = VOAS[name]
    u, v, w = pick(voa, 1, i), pick(voa, 1, j), pick(voa, 1, k)
    left = voa.mode(u, m, voa.mode(v, n, w)) - voa.mode(v, n, voa.mode(u, m, w))
    right = linear_sum(voa.mode(p, m + n - q, w).scale(binomial(Fraction(m), q))
                       for q, p in products_up_to(voa, u, v) if p)
    assert left == right


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(VOAS)), st.integers(0, 1000), st.integers(0, 1000), st.integers(-3, 2))
def test_skew_symmetry(name, i, j, n):
    """u_n v = sum_j (-1)^(n+j+1) L(-1)^j / j! v_{n+j} u."""
    voa = VOAS[name]
    u, v = pick(voa, 2, i), pick(voa, 1, j)
    top = int(voa.weight(u) + voa.weight(v)) - 1
    terms = []
    for q in range(top - n + 1):
        t = voa.mode(v, n + q, u)
        for _ in range(q):
            t = voa.virasoro_mode(-1, t)
        if t:
            sign = -1 if (n + q) % 2 == 0 else 1
            terms.append(t.scale(Fraction(sign, factorial(q))))
    assert voa.mode(u, n, v) == linear_sum(terms)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(VOAS)), st.integers(0, 1000), st.integers(0, 1000), st.integers(0, 6))
def test_mode_weights(name, i, j, target):
    """wt(u_n v) = wt u + wt v - n - 1 for outputs up to weight 6."""
    voa = VOAS[name]
    u, v = pick(voa, 2, i), pick(voa, 2, j)
    n = int(voa.weight(u) + voa.weight(v)) - 1 - target
    result = voa.mode(u, n, v)
    assert all(weight_of(voa.gram, m) == target for m in result.terms)


def test_weight_one_lie_algebra_needs_a_matching_voa():
    """Brackets that leave the listed weight-one basis raise NotHomogeneous."""
    skewed = LatticeVOA(GramMatrix.from_rows([[2, 1], [1, 2]], 'A2'))
    with pytest.raises(NotHomogeneous):
        weight_one_lie_algebra(GramMatrix.from_rows([[2, 0], [0, 2]], 'A1xA1'), skewed)
