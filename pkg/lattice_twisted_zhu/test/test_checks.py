import numpy as np

from ..checks import all_passed, check_automorphisms, random_state, run_check, run_checks
from ..errors import Counterexample, NotClosed
from ..fock import is_homogeneous
from ..lattice import GramMatrix
from ..voa import LatticeVOA


A1 = GramMatrix.from_rows([[2]], 'A1')


def test_run_check_outcomes():
    """Test run_check."""
    assert run_check('ok', lambda: {'x': 1}).data == {'x': 1}
    assert not run_check('counterexample', lambda: Counterexample('c')).passed
    assert not run_check('false', lambda: False).passed

    def broken():
        raise NotClosed('product leaves K')

    result = run_check('raises', broken)
    assert not result.passed
    assert 'NotClosed' in result.detail


def test_random_states_are_homogeneous():
    """Random states are homogeneous."""
    voa = LatticeVOA(A1)
    rng = np.random.default_rng(0)
    for _ in range(20):
        v = random_state(voa, rng, 3)
        assert v and is_homogeneous(A1, v)


def test_random_states_depend_only_on_seed():
    """Random states depend only on seed."""
    voa = LatticeVOA(A1)
    first = [random_state(voa, np.random.default_rng(7), 4) for _ in range(3)]
    second = [random_state(voa, np.random.default_rng(7), 4) for _ in range(3)]
    assert first == second


def test_suite_passes_on_A1():
    """Suite passes on A1."""
    results = run_checks(A1, cutoff=3, seed=1, samples=20)
    failed = [(r.name, r.detail) for r in results if not r.passed]
    assert not failed
    assert all_passed(results)
    assert {r.name for r in results} >= {'zhu table', 'dual path', 'rationality', 'automorphisms'}


def test_check_automorphisms_covers_generators():
    """theta, Hom(L, Z/2), the generators of O(L) and the sampled lifts are all verified."""
    voa = LatticeVOA(A1)
    report = check_automorphisms(A1, voa, 3, np.random.default_rng(0))
    assert report == {'order_O_L': 2, 'generators': 1, 'verified': 6, 'cutoff': 3}
