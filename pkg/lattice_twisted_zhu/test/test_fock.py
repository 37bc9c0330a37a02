from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from ..errors import NotHomogeneous, SectorMismatch
from ..fock import (FockMonomial, StateVector, act_modes, apply_delta, delta_coefficients,
                    exp_state, exponential_terms, fock_basis, format_scalar, heisenberg_act,
                    heisenberg_state, mode_multisets, schur, vacuum, weight)
from ..lattice import GramMatrix


A1 = GramMatrix.from_rows([[2]], 'A1')
A2 = GramMatrix.from_rows([[2, -1], [-1, 2]], 'A2')


def taylor_coefficient(m: int, n: int) -> Fraction:
    x, y = sympy.symbols('x y')
    f = -sympy.log((sympy.sqrt(1 + x) + sympy.sqrt(1 + y)) / 2)
    for _ in range(m):
        f = sympy.diff(f, x)
    for _ in range(n):
        f = sympy.diff(f, y)
    value = sympy.nsimplify(sympy.simplify(f.subs({x: 0, y: 0}) / (sympy.factorial(m) * sympy.factorial(n))))
    return Fraction(int(value.p), int(value.q))


def test_delta_constants():
    """Delta constants."""
    c = delta_coefficients(3)
    assert c[0, 0] == 0
    assert c[1, 0] == c[0, 1] == Fraction(-1, 4)
    assert c[1, 1] == Fraction(1, 16)


@pytest.mark.parametrize('m, n', [(0, 2), (2, 0), (1, 2), (2, 2), (3, 1), (0, 3)])
def test_delta_constants_match_taylor_expansion(m, n):
    """Delta constants match a Taylor expansion."""
    c = delta_coefficients(3)
    assert c[m, n] == taylor_coefficient(m, n)
    assert c[m, n] == c[n, m]


def test_schur_polynomials():
    """Test schur."""
    x1, x2 = sympy.symbols('x1 x2')
    assert schur(0) == 1
    assert sympy.expand(schur(1) - x1) == 0
    assert sympy.expand(schur(2) - (x1 ** 2 / 2 + x2 / 2)) == 0


def test_exponential_terms_agree_with_schur():
    """Exponential terms agree with Schur polynomials."""
    terms = dict(exponential_terms(Fraction(2)))
    assert terms == {(Fraction(1), Fraction(1)): Fraction(1, 2), (Fraction(2),): Fraction(1, 2)}
    twisted = dict(exponential_terms(Fraction(1), twisted=True))
    assert twisted == {(Fraction(1, 2), Fraction(1, 2)): Fraction(2)}


def test_mode_multisets():
    """Test mode_multisets."""
    assert len(mode_multisets(1, 4)) == 5
    assert len(mode_multisets(2, 2)) == 5
    assert len(mode_multisets(1, Fraction(1, 2), twisted=True)) == 1
    assert len(mode_multisets(1, 2, twisted=True)) == 2


creation = st.tuples(st.integers(0, 1), st.integers(-3, -1))


@settings(max_examples=60, deadline=None)
@given(st.lists(creation, max_size=3), st.integers(0, 1), st.integers(0, 1),
       st.integers(-3, 3), st.integers(-3, 3), st.tuples(st.integers(-1, 1), st.integers(-1, 1)))
def test_heisenberg_commutator(modes, i, j, m, n, label):
    """Heisenberg commutator."""
    state = heisenberg_state(modes, label)
    ab = heisenberg_act(A2, i, m, heisenberg_act(A2, j, n, state))
    ba = heisenberg_act(A2, j, n, heisenberg_act(A2, i, m, state))
    expected = state.scale(m * A2[i, j]) if m + n == 0 else StateVector()
    assert ab - ba == expected


def test_zero_mode_reads_the_label():
    """Zero mode reads the label."""
    state = exp_state((1, 1))
    assert heisenberg_act(A2, 0, 0, state) == state.scale(1)
    assert heisenberg_act(A2, 1, 0, exp_state((1, 0))) == exp_state((1, 0)).scale(-1)


def test_annihilation():
    """Positive modes remove a matching creation mode."""
    state = heisenberg_state([(0, -1), (0, -1)], (0,))
    assert heisenberg_act(A1, 0, 1, state) == heisenberg_state([(0, -1)], (0,)).scale(4)
    assert heisenberg_act(A1, 0, 2, state).is_zero()


def test_sector_mismatch():
    """Modes outside the sector raise SectorMismatch."""
    with pytest.raises(SectorMismatch):
        heisenberg_act(A1, 0, Fraction(1, 2), vacuum(A1))
    with pytest.raises(SectorMismatch):
        FockMonomial.make([(0, -1)], 0, twisted=True)


def test_act_modes_order():
    """Act modes order."""
    state = act_modes(A1, [(0, 1), (0, -1)], vacuum(A1))
    assert state == vacuum(A1).scale(2)


def test_weights():
    """Test weight."""
    assert weight(A2, exp_state((1, 1))) == 1
    assert weight(A2, heisenberg_state([(0, -2)], (1, 0))) == 3
    with pytest.raises(NotHomogeneous):
        weight(A2, exp_state((1, 0)) + vacuum(A2))


def test_fock_basis_is_sorted_and_distinct():
    """Fock basis is sorted and distinct."""
    basis = fock_basis(2, 3, (0, 0))
    assert len(basis) == len(set(basis)) == 10


def test_delta_of_weight_one_state_is_trivial():
    """Delta of weight one state is trivial."""
    state = heisenberg_state([(0, -1)], (0, 0))
    assert apply_delta(A2, state) == {0: state}


def test_delta_of_two_mode_state():
    """Delta of two mode state."""
    state = heisenberg_state([(0, -1), (0, -1)], (0,))
    series = apply_delta(A1, state)
    # c_11 * G^-1 * a(1)a(1) a(-1)^2 1 = 1/16 * 1/2 * 8
    assert series[2] == vacuum(A1).scale(Fraction(1, 4))
    assert series[0] == state


def test_format_scalar():
    """Test format_scalar."""
    assert format_scalar(Fraction(-3, 4)) == '-3/4'
    assert format_scalar(sympy.I / 2) == '0/1+1/2*i'
    assert format_scalar(sympy.Rational(2, 3)) == '2/3'
