"""
The invariant suite run by the `verify` command.

Each check returns a CheckResult; a check fails when it raises one of the
package errors, returns a Counterexample or reports a false property. Nothing
here raises past run_checks.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional
import logging
import time

import numpy as np

from .aut import (composition_discrepancy, conjugation_identity, generating_set, hom_L_Z2,
                  lift_isometry, lifts_of, theta_lift, verify_automorphism)
from .config import DEFAULT_CUTOFF, DEFAULT_SEED
from .errors import Counterexample, HypothesisFailed, LatticeVOAError
from .extension import ExtensionData, build_K, window
from .fock import StateVector, delta_coefficients, exp_state, format_scalar, linear_sum
from .lattice import GramMatrix, isometry_group, short_vectors
from .twisted import evaluate
from .voa import LatticeVOA, weight_one_lie_algebra
from .zhu import (build_zhu, check_group_algebra_iso, circle_product, evaluate_element,
                  heisenberg_zhu_certificate, matrices_equal, semisimplicity_and_rationality,
                  star_product, zhu_structure)


logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ''
    data: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {'name': self.name, 'passed': self.passed, 'detail': self.detail, 'data': self.data}


def run_check(name: str, fn: Callable[[], object]) -> CheckResult:
    """Runs fn and turns its outcome into a CheckResult."""
    start = time.perf_counter()
    try:
        outcome = fn()
    except LatticeVOAError as e:
        result = CheckResult(name, False, f'{type(e).__name__}: {e}')
    else:
        if isinstance(outcome, Counterexample):
            result = CheckResult(name, False, str(outcome))
        elif outcome is False:
            result = CheckResult(name, False, 'property does not hold')
        else:
            result = CheckResult(name, True, data=outcome if isinstance(outcome, dict) else {})
    result.seconds = time.perf_counter() - start
    level = logging.INFO if result.passed else logging.WARNING
    logger.log(level, 'check %s: %s (%.2fs) %s', name, 'ok' if result.passed else 'FAILED',
               result.seconds, result.detail)
    return result


def random_state(voa: LatticeVOA, rng: np.random.Generator, max_weight: int = 5) -> StateVector:
    """A homogeneous state: up to three basis monomials of one weight with small integer coefficients."""
    wt = int(rng.integers(0, max_weight + 1))
    basis = voa.basis(wt)
    k = int(rng.integers(1, min(3, len(basis)) + 1))
    picks = rng.choice(len(basis), size=k, replace=False)
    return linear_sum(StateVector.of(basis[int(i)], Fraction(int(rng.choice([-3, -2, -1, 1, 2, 3]))))
                      for i in picks)


def _sample_windows(d: int):
    if d <= 2:
        return list(window(d, 1))
    unit = [tuple(int(i == j) for j in range(d)) for i in range(d)]
    return unit + [tuple(-x for x in v) for v in unit]


def check_cocycle(extension: ExtensionData) -> dict:
    cocycle = extension.cocycle
    sample = _sample_windows(extension.gram.dim)
    for a in sample:
        for b in sample:
            if not cocycle.commutator_holds(a, b):
                raise HypothesisFailed('commutator', f'eps({a},{b}) eps({b},{a}) != (-1)^<a,b>')
            for c in sample:
                if not cocycle.cocycle_holds(a, b, c):
                    raise HypothesisFailed('2-cocycle', f'fails at {a}, {b}, {c}')
    return {'triples': len(sample) ** 3}


def check_quotient(extension: ExtensionData) -> dict:
    build_K(extension.gram, extension.cocycle)
    Q = extension.Q
    d = extension.gram.dim
    if Q.order != 2 ** (d + 1):
        raise HypothesisFailed('|L^/K| = 2^(d+1)', f'order {Q.order}')
    if not Q.is_associative():
        raise HypothesisFailed('associative', 'L^/K table is not associative')
    central = {Q.elements[g][1] for g in Q.center()}
    in_R = {i for i, b in enumerate(extension.cosets.reps) if extension.R.contains(extension.gram, b)}
    if central != in_R:
        raise HypothesisFailed('center = R^/K', f'central cosets {sorted(central)}, R cosets {sorted(in_R)}')
    census = extension.census()
    if sum(n ** 2 for n in census['dims']) != 2 ** d:
        raise HypothesisFailed('sum of squares', f'dims {census["dims"]}')
    return census


def check_delta_constants() -> dict:
    c = delta_coefficients(2)
    expected = {(0, 0): Fraction(0), (1, 0): Fraction(-1, 4), (0, 1): Fraction(-1, 4), (1, 1): Fraction(1, 16)}
    for key, value in expected.items():
        if c[key] != value:
            raise HypothesisFailed('Delta constants', f'c{key} = {c[key]}, expected {value}')
    return {f'c{m}{n}': format_scalar(v) for (m, n), v in expected.items()}


def check_vertex_algebra(voa: LatticeVOA, cutoff: int) -> dict:
    basis = voa.basis_up_to(min(cutoff, 3))
    for m in basis:
        v = StateVector.of(m)
        if voa.theta_state(voa.theta_state(v)) != v:
            raise HypothesisFailed('theta^2 = 1', str(m))
        if voa.virasoro_mode(0, v) != v.scale(voa.weight(v)):
            raise HypothesisFailed('L(0) grading', str(m))
        if voa.general_mode(voa.vacuum(), -1, v) != v:
            raise HypothesisFailed('vacuum', str(m))
    return {'states': len(basis)}


def check_lie_algebra(gram: GramMatrix, voa: LatticeVOA) -> dict:
    lie = weight_one_lie_algebra(gram, voa)
    if lie.dim != gram.dim + len(lie.roots):
        raise HypothesisFailed('dim g = d + #roots', f'{lie.dim}')
    if not lie.is_antisymmetric():
        raise HypothesisFailed('antisymmetry')
    if not lie.satisfies_jacobi():
        raise HypothesisFailed('Jacobi')
    if not lie.form_is_invariant():
        raise HypothesisFailed('invariant form')
    return {'dim': lie.dim, 'roots': len(lie.roots)}


def check_section_value(reducer, extension: ExtensionData) -> dict:
    """iota(e'_{2a}) == 2^(-4<a,a>) for the adjusted lift of every short representative."""
    gram = extension.gram
    values = {}
    for alpha in extension.cosets.reps:
        if not any(alpha):
            continue
        two_alpha = tuple(2 * a for a in alpha)
        sign = extension.Q.section_sign(two_alpha)
        element = reducer.reduce(exp_state(two_alpha, sign))
        expected = Fraction(1, 2 ** (4 * gram.norm(alpha)))
        if element.coeffs != {0: expected}:
            raise HypothesisFailed('adjusted e_{2a}', f'{two_alpha} reduces to {element.vector()}')
        values[str(alpha)] = format_scalar(expected)
    return values


def check_dual_path(reducer, modules, rng: np.random.Generator, samples: int, max_weight: int = 5) -> dict:
    """Reduction and top-level evaluation agree on products of representatives and on random states."""
    voa = reducer.voa
    states = [star_product(voa, reducer.u_state(a), reducer.u_state(b))
              for a in reducer.cosets.reps for b in reducer.cosets.reps]
    states += [random_state(voa, rng, max_weight) for _ in range(samples)]
    for v in states:
        if not v:
            continue
        if not matrices_equal(evaluate(modules, v), evaluate_element(modules, reducer.reduce(v))):
            return Counterexample('dual path', v=repr(v), detail='reduction disagrees with o(v) on T_chi')
    return {'states': len(states)}


def check_o_theta(reducer, modules, rng: np.random.Generator, samples: int, max_weight: int = 2) -> dict:
    """u o_theta v reduces to zero and acts by zero on every top level."""
    voa = reducer.voa
    for _ in range(samples):
        u = random_state(voa, rng, max_weight)
        v = random_state(voa, rng, max_weight)
        for part in (voa.theta_even_part(u), voa.theta_odd_part(u)):
            if not part:
                continue
            w = circle_product(voa, part, v)
            if not w:
                continue
            if not reducer.reduce(w).is_zero():
                return Counterexample('O_theta reduces to zero', u=repr(part), v=repr(v))
            if not all(M.is_zero_matrix for M in evaluate(modules, w)):
                return Counterexample('O_theta acts by zero', u=repr(part), v=repr(v))
    return {'pairs': samples}


def check_automorphisms(gram: GramMatrix, voa: LatticeVOA, cutoff: int,
                        rng: np.random.Generator, extra_lifts: int = 2) -> dict:
    """
    Generators of O(L^) preserve the vertex operators: theta, every element
    of Hom(L, Z/2) and the default lifts of a generating set of O(L), plus a
    few sampled lifts. Lifted isometries also satisfy the conjugation
    identity with every root.
    """
    cocycle = voa.cocycle
    if gram.dim > 1:
        cutoff = min(cutoff, 3)
    th = theta_lift(cocycle)
    square = th.compose(th)
    if any(square.sign(v) != 1 or square.image(v) != tuple(v) for v in _sample_windows(gram.dim)):
        return Counterexample('theta^2 = id', detail=repr(square.eta))
    group = isometry_group(gram)
    generators = [lift_isometry(sigma, cocycle) for sigma in generating_set(group)]
    picks = rng.choice(len(group), size=min(extra_lifts, len(group)), replace=False)
    sampled = []
    for i in sorted(int(i) for i in picks):
        options = lifts_of(group[i], cocycle)
        sampled.append(options[int(rng.integers(0, len(options)))])
    lifts = [th] + generators + sampled
    candidates = lifts + hom_L_Z2(gram)
    for aut in candidates:
        bad = verify_automorphism(aut, voa, cutoff)
        if bad:
            return bad
    for s in generators:
        for t in generators:
            composition_discrepancy(s, t)
    roots = short_vectors(gram, 2)
    for sigma in lifts:
        for root in roots:
            bad = conjugation_identity(sigma, exp_state(root), voa, cutoff)
            if bad:
                return bad
    return {'order_O_L': len(group), 'generators': len(generators),
            'verified': len(candidates), 'cutoff': cutoff}


def run_checks(gram: GramMatrix, cutoff: int = DEFAULT_CUTOFF, seed: int = DEFAULT_SEED,
               samples: int = 100, normalization: str = 'calibrated', cocycle=None) -> List[CheckResult]:
    """
    Runs the full suite on one lattice. Randomised checks draw from
    numpy.random.default_rng(seed), so results depend only on the inputs.
    """
    rng = np.random.default_rng(seed)
    results: List[CheckResult] = []
    built: dict = {}

    def build():
        extension, voa, reducer, modules, chosen = build_zhu(gram, cocycle, normalization)
        built.update(extension=extension, voa=voa, reducer=reducer, modules=modules)
        return {'normalization': chosen}

    results.append(run_check('build', build))
    results.append(run_check('delta constants', check_delta_constants))
    if not built:
        return results

    extension, voa = built['extension'], built['voa']
    reducer, modules = built['reducer'], built['modules']
    structure: Optional[object] = None

    def table():
        nonlocal structure
        structure = zhu_structure(reducer)
        if not structure.is_associative():
            raise HypothesisFailed('associative', 'A_theta table')
        return check_group_algebra_iso(structure, extension)

    results.append(run_check('cocycle identities', lambda: check_cocycle(extension)))
    results.append(run_check('quotient group and census', lambda: check_quotient(extension)))
    results.append(run_check('vertex algebra axioms', lambda: check_vertex_algebra(voa, cutoff)))
    results.append(run_check('weight one Lie algebra', lambda: check_lie_algebra(gram, voa)))
    results.append(run_check('zhu table', table))
    results.append(run_check('adjusted section value', lambda: check_section_value(reducer, extension)))
    results.append(run_check('dual path', lambda: check_dual_path(reducer, modules, rng, samples)))
    results.append(run_check('O_theta generators', lambda: check_o_theta(reducer, modules, rng, max(samples // 10, 5))))
    results.append(run_check('A_theta(M(1)) = C', lambda: heisenberg_zhu_certificate(reducer, modules=modules)))
    if structure is not None:
        results.append(run_check('rationality', lambda: semisimplicity_and_rationality(structure, modules)))
    results.append(run_check('automorphisms', lambda: check_automorphisms(gram, voa, cutoff, rng)))
    return results


def all_passed(results: List[CheckResult]) -> bool:
    return all(r.passed for r in results)
