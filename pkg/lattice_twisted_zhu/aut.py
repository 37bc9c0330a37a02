"""
The automorphism skeleton of V_L: Hom(L, Z/2) and the rational diagonal
automorphisms, lifts of isometries to L^, their action on V_L, exhaustive
checks of the automorphism axioms on a weight truncation and the
conjugation identity sigma e^{a_0} sigma^-1 = e^{(sigma a)_0}.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, List, Optional, Sequence, Tuple, Union
import logging

import sympy

from .errors import Counterexample, LiftInconsistent, NotNilpotent
from .extension import Cocycle, ExtElement, build_cocycle, lift, theta, window
from .fock import FockMonomial, StateVector, heisenberg_act, linear_sum
from .lattice import (GramMatrix, IntMatrix, apply_matrix, identity_matrix, is_isometry,
                      isometry_group, matmul)
from .voa import LatticeVOA, weight_one_lie_algebra


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiagonalAut:
    """e^{h(0)} with rational character values: iota(e_alpha) -> prod c_i^alpha_i iota(e_alpha)."""
    values: Tuple[Fraction, ...]

    def factor(self, alpha: Sequence[int]) -> Fraction:
        result = Fraction(1)
        for c, k in zip(self.values, alpha):
            result *= Fraction(c) ** k
        return result

    def act(self, state: StateVector) -> StateVector:
        return StateVector({m: c * self.factor(m.label) for m, c in state.terms.items()})

    def inverse(self) -> 'DiagonalAut':
        return DiagonalAut(tuple(1 / Fraction(c) for c in self.values))

    def compose(self, other: 'DiagonalAut') -> 'DiagonalAut':
        return DiagonalAut(tuple(Fraction(a) * b for a, b in zip(self.values, other.values)))

    def is_identity(self) -> bool:
        return all(c == 1 for c in self.values)


def hom_L_Z2(gram: GramMatrix) -> List[DiagonalAut]:
    """Hom(L, Z/2) realised as the 2^d diagonal automorphisms with c_i = +-1."""
    return [DiagonalAut(tuple(Fraction((-1) ** b) for b in bits))
            for bits in product((0, 1), repeat=gram.dim)]


def _inverse_matrix(sigma: IntMatrix) -> IntMatrix:
    inv = sympy.Matrix(sigma).inv()
    return tuple(tuple(int(inv[i, j]) for j in range(inv.cols)) for i in range(inv.rows))


class LiftedIsometry:
    """
    sigma^(e_alpha) = eta(alpha) e_{sigma alpha} with eta the quadratic
    function eta(alpha) = prod eta_i^alpha_i
    (-1)^(sum_{i<j} alpha_i alpha_j F_ij + sum_i binom(alpha_i, 2) F_ii),
    where (-1)^F_ij = eps(sigma a_i, sigma a_j) eps(a_i, a_j).
    """

    def __init__(self, sigma: IntMatrix, eta: Sequence[int], cocycle: Cocycle,
                 flips: Iterable[Sequence[int]] = ()):
        self.sigma = tuple(tuple(int(x) for x in row) for row in sigma)
        self.eta = tuple(int(e) for e in eta)
        # vectors whose sign is negated by hand; non-empty only for corrupted maps
        self.flips = frozenset(tuple(v) for v in flips)
        self.cocycle = cocycle
        gram = cocycle.gram
        d = gram.dim
        images = [self.image(gram.basis_vector(i)) for i in range(d)]
        self.F = tuple(tuple(0 if cocycle(images[i], images[j]) * cocycle(gram.basis_vector(i), gram.basis_vector(j)) == 1 else 1
                             for j in range(d)) for i in range(d))

    @property
    def gram(self) -> GramMatrix:
        return self.cocycle.gram

    def image(self, alpha: Sequence[int]) -> Tuple[int, ...]:
        return apply_matrix(self.sigma, alpha)

    def sign(self, alpha: Sequence[int]) -> int:
        alpha = tuple(alpha)
        d = len(alpha)
        exponent = sum(alpha[i] * alpha[j] * self.F[i][j] for i in range(d) for j in range(i + 1, d))
        exponent += sum(alpha[i] * (alpha[i] - 1) // 2 * self.F[i][i] for i in range(d))
        result = -1 if exponent % 2 else 1
        for e, k in zip(self.eta, alpha):
            if e == -1 and k % 2:
                result = -result
        if alpha in self.flips:
            result = -result
        return result

    def on_element(self, a: ExtElement) -> ExtElement:
        return ExtElement(a.sign * self.sign(a.vec), self.image(a.vec))

    def act(self, state: StateVector) -> StateVector:
        """(sigma a_{i_1})(n_1)...(sigma a_{i_k})(n_k) (x) iota(sigma^ e_alpha)."""
        gram = self.gram
        out = []
        for m, c in state.terms.items():
            image = self.on_element(ExtElement(1, m.label))
            current = StateVector.of(FockMonomial((), image.vec), c * image.sign)
            for i, n in m.modes:
                current = linear_sum(heisenberg_act(gram, r, n, current).scale(self.sigma[r][i])
                                     for r in range(gram.dim) if self.sigma[r][i])
            out.append(current)
        return linear_sum(out)

    def inverse(self) -> 'LiftedIsometry':
        inv = _inverse_matrix(self.sigma)
        d = self.gram.dim
        pre = [apply_matrix(inv, self.gram.basis_vector(i)) for i in range(d)]
        return LiftedIsometry(inv, [self.sign(p) for p in pre], self.cocycle)

    def compose(self, other: 'LiftedIsometry') -> 'LiftedIsometry':
        """self o other."""
        d = self.gram.dim
        basis = [self.gram.basis_vector(i) for i in range(d)]
        eta = [self.sign(other.image(b)) * other.sign(b) for b in basis]
        return LiftedIsometry(matmul(self.sigma, other.sigma), eta, self.cocycle)

    def is_multiplicative(self, radius: int = 2) -> Optional[Tuple]:
        """The first pair (a, b) with sigma^(a) sigma^(b) != sigma^(ab), or None."""
        cocycle = self.cocycle
        sample = [lift(v) for v in window(self.gram.dim, radius)]
        for a in sample:
            for b in sample:
                left = self.on_element(a).mul(self.on_element(b), cocycle)
                right = self.on_element(a.mul(b, cocycle))
                if left != right:
                    return a, b
        return None


Automorphism = Union[DiagonalAut, LiftedIsometry]


def lift_isometry(sigma: IntMatrix, cocycle: Cocycle, eta: Optional[Sequence[int]] = None,
                  radius: int = 2) -> LiftedIsometry:
    """
    Lifts sigma in O(L) to L^, with sign +1 on the basis unless eta is given.

    Raises:
        LiftInconsistent: sigma is not an isometry or the lift is not
            multiplicative on the sampled window.
    """
    gram = cocycle.gram
    if not is_isometry(gram, sigma):
        raise LiftInconsistent(f'{sigma} is not an isometry')
    lifted = LiftedIsometry(sigma, eta or [1] * gram.dim, cocycle)
    bad = lifted.is_multiplicative(radius if gram.dim <= 2 else 1)
    if bad:
        raise LiftInconsistent(f'lift of {sigma} is not multiplicative at {bad[0]}, {bad[1]}')
    return lifted


def theta_lift(cocycle: Cocycle) -> LiftedIsometry:
    """theta as the lift of -1 with eta_i = sign of theta(e_{a_i})."""
    gram = cocycle.gram
    d = gram.dim
    minus = tuple(tuple(-int(i == j) for j in range(d)) for i in range(d))
    eta = [theta(lift(gram.basis_vector(i)), cocycle).sign for i in range(d)]
    return lift_isometry(minus, cocycle, eta)


def act_on_state(aut: Automorphism, state: StateVector) -> StateVector:
    return aut.act(state)


def verify_automorphism(aut: Automorphism, voa: LatticeVOA, cutoff: int) -> Optional[Counterexample]:
    """
    Checks sigma(u_n v) = sigma(u)_n sigma(v) for basis monomials u, v up to
    the weight cutoff and all n whose output weight lies in [0, cutoff], and
    sigma(omega) = omega. Returns the first violation or None.
    """
    omega = voa.omega()
    if aut.act(omega) != omega:
        return Counterexample('preserves omega', u=omega, detail=repr(aut.act(omega)))
    basis = voa.basis_up_to(cutoff)
    images = {m: aut.act(StateVector.of(m)) for m in basis}
    for u in basis:
        wt_u = u.fock_weight + Fraction(voa.gram.norm(u.label), 2)
        for v in basis:
            wt_v = v.fock_weight + Fraction(voa.gram.norm(v.label), 2)
            top = int(wt_u + wt_v) - 1
            for n in range(top - cutoff, top + 1):
                left = aut.act(voa.mode(u, n, StateVector.of(v)))
                right = voa.mode(images[u], n, images[v])
                if left != right:
                    return Counterexample('automorphism', u=str(u), n=n, v=str(v),
                                          detail=f'{left!r} != {right!r}')
    logger.info('automorphism verified on %d basis states up to weight %d', len(basis), cutoff)
    return None


def zero_mode_exponential(voa: LatticeVOA, a: StateVector, state: StateVector,
                          max_order: int = 32) -> StateVector:
    """
    exp(a_0) state as a finite sum.

    Raises:
        NotNilpotent: a_0^k state is still non-zero at k = max_order.
    """
    total = state
    term = state
    for k in range(1, max_order + 1):
        term = voa.mode(a, 0, term).scale(Fraction(1, k))
        if not term:
            return total
        total = total + term
    raise NotNilpotent(f'a_0 is not nilpotent within {max_order} steps on {state!r}')


def conjugation_identity(sigma: LiftedIsometry, a: StateVector, voa: LatticeVOA,
                         cutoff: int, max_order: int = 32) -> Optional[Counterexample]:
    """sigma exp(a_0) sigma^-1 v = exp((sigma a)_0) v for basis v up to the cutoff."""
    inverse = sigma.inverse()
    image = sigma.act(a)
    for v in voa.basis_up_to(cutoff):
        state = StateVector.of(v)
        left = sigma.act(zero_mode_exponential(voa, a, inverse.act(state), max_order))
        right = zero_mode_exponential(voa, image, state, max_order)
        if left != right:
            return Counterexample('conjugation', u=repr(a), v=str(v), detail=f'{left!r} != {right!r}')
    return None


def diagonal_conjugate(sigma: LiftedIsometry, aut: DiagonalAut) -> DiagonalAut:
    """sigma D_c sigma^-1 = D_{c o sigma^-1} on the basis."""
    inv = _inverse_matrix(sigma.sigma)
    d = sigma.gram.dim
    return DiagonalAut(tuple(aut.factor(apply_matrix(inv, sigma.gram.basis_vector(i))) for i in range(d)))


def diagonal_conjugation_holds(sigma: LiftedIsometry, aut: DiagonalAut, voa: LatticeVOA, cutoff: int) -> bool:
    conj = diagonal_conjugate(sigma, aut)
    inverse = sigma.inverse()
    for v in voa.basis_up_to(cutoff):
        state = StateVector.of(v)
        if sigma.act(aut.act(inverse.act(state))) != conj.act(state):
            return False
    return True


def composition_discrepancy(s: LiftedIsometry, t: LiftedIsometry, radius: int = 1) -> DiagonalAut:
    """
    The character lambda with s^ t^ = lambda . (st)^, where (st)^ is the
    default lift of the product.

    Raises:
        LiftInconsistent: the discrepancy is not a homomorphism L -> +-1.
    """
    product_lift = LiftedIsometry(matmul(s.sigma, t.sigma), [1] * s.gram.dim, s.cocycle)
    composed = s.compose(t)

    def ratio(v):
        return composed.sign(v) * product_lift.sign(v)

    d = s.gram.dim
    for x in window(d, radius):
        for y in window(d, radius):
            if ratio(tuple(a + b for a, b in zip(x, y))) != ratio(x) * ratio(y):
                raise LiftInconsistent(f'discrepancy of lifts is not a character at {x}, {y}')
    return DiagonalAut(tuple(Fraction(ratio(s.gram.basis_vector(i))) for i in range(d)))


def generating_set(group: Sequence[IntMatrix]) -> List[IntMatrix]:
    """A generating set of a finite matrix group, chosen greedily in the given order."""
    if not group:
        return []
    d = len(group[0])
    identity = identity_matrix(d)
    generators: List[IntMatrix] = []
    span = {identity}
    for g in group:
        if g in span:
            continue
        generators.append(g)
        span = {identity}
        frontier = [identity]
        while frontier:
            grown = []
            for x in frontier:
                for s in generators:
                    y = matmul(x, s)
                    if y not in span:
                        span.add(y)
                        grown.append(y)
            frontier = grown
    logger.debug('%d generators for a group of order %d', len(generators), len(span))
    return generators


def _unit_and_negatives(d: int) -> List[Tuple[int, ...]]:
    units = [tuple(int(i == j) for j in range(d)) for i in range(d)]
    return units + [tuple(-x for x in v) for v in units]


def lift_difference(s: LiftedIsometry, t: LiftedIsometry) -> DiagonalAut:
    """
    The element c of Hom(L, Z/2) with s^ = t^ o D_c, for two lifts of the
    same isometry.

    Raises:
        LiftInconsistent: the isometries differ or the sign ratio is not a
            character of L.
    """
    if s.sigma != t.sigma:
        raise LiftInconsistent(f'lifts of different isometries {s.sigma} and {t.sigma}')
    d = s.gram.dim

    def ratio(v):
        return s.sign(v) * t.sign(v)

    vectors = _unit_and_negatives(d)
    for x in vectors:
        for y in vectors:
            if ratio(tuple(a + b for a, b in zip(x, y))) != ratio(x) * ratio(y):
                raise LiftInconsistent(f'lifts of {s.sigma} differ by a non-character at {x}, {y}')
    return DiagonalAut(tuple(Fraction(ratio(s.gram.basis_vector(i))) for i in range(d)))


def lifts_of(sigma: IntMatrix, cocycle: Cocycle) -> List[LiftedIsometry]:
    """
    All 2^d lifts of sigma, one per sign choice on the basis. The first is
    the default lift; each other one is checked to be the default composed
    with an element of Hom(L, Z/2), which makes it multiplicative as well.
    """
    base = lift_isometry(sigma, cocycle, radius=1)
    lifts = [base]
    for eta in product((1, -1), repeat=cocycle.gram.dim):
        if -1 in eta:
            lifted = LiftedIsometry(base.sigma, eta, cocycle)
            lift_difference(lifted, base)
            lifts.append(lifted)
    return lifts


def hom_exponent(gram: GramMatrix, aut: DiagonalAut) -> Tuple[Fraction, ...]:
    """
    h in L (x) Q with aut = exp(2 pi i h(0)), i.e. <h, a_i> = 1/2 exactly
    where aut flips the sign of iota(e_{a_i}).
    """
    b = [Fraction(0) if c == 1 else Fraction(1, 2) for c in aut.values]
    inv = gram.inverse
    return tuple(sum((inv[i][j] * b[j] for j in range(gram.dim)), Fraction(0)) for i in range(gram.dim))


def hom_in_N_and_O_Lhat(aut: DiagonalAut, cocycle: Cocycle) -> bool:
    """
    aut is exp(2 pi i h(0)) for a weight-one h, so it lies in N, and it is
    the lift of the identity isometry with the same signs, so it lies in
    O(L^). Both are compared with aut on a window of lattice vectors.
    """
    gram = cocycle.gram
    if any(c not in (1, -1) for c in aut.values):
        return False
    h = hom_exponent(gram, aut)
    as_lift = LiftedIsometry(identity_matrix(gram.dim), [int(c) for c in aut.values], cocycle)
    for v in window(gram.dim, 1):
        pairing = sum((h[i] * gram[i, j] * v[j] for i in range(gram.dim) for j in range(gram.dim)), Fraction(0))
        if (2 * pairing).denominator != 1:
            return False
        if aut.factor(v) != (-1) ** int(2 * pairing) or as_lift.sign(v) != aut.factor(v):
            return False
    return True


def aut_report(gram: GramMatrix, cocycle: Optional[Cocycle] = None, voa: Optional[LatticeVOA] = None) -> dict:
    """Group orders and the data of the continuous part N; no claim beyond them."""
    cocycle = cocycle or build_cocycle(gram)
    voa = voa or LatticeVOA(gram, cocycle)
    d = gram.dim
    group = isometry_group(gram)
    lifts = [lifted for sigma in group for lifted in lifts_of(sigma, cocycle)]
    distinct = {(lifted.sigma, tuple(lifted.sign(gram.basis_vector(i)) for i in range(d))) for lifted in lifts}
    lie = weight_one_lie_algebra(gram, voa)
    homs = hom_L_Z2(gram)
    th = theta_lift(cocycle)
    theta_matches = all(th.on_element(lift(v)) == theta(lift(v), cocycle) for v in window(d, 2))
    logger.info('%d lifts of %d isometries, %d distinct', len(lifts), len(group), len(distinct))
    return {
        'order_O_L': len(group),
        'hom_L_Z2': len(homs),
        'order_O_Lhat': len(distinct),
        'lifts_pairwise_distinct': len(distinct) == len(lifts),
        'weight_one_dim': lie.dim,
        'root_count': len(lie.roots),
        'theta_is_lift_of_minus_one': theta_matches,
        'hom_L_Z2_in_N_cap_O_Lhat': all(hom_in_N_and_O_Lhat(h, cocycle) for h in homs),
        'statement': 'Aut(V_L) = N O(L^); Aut(V_L)/N is a quotient of O(L)',
    }


def identity_lift(cocycle: Cocycle) -> LiftedIsometry:
    return lift_isometry(identity_matrix(cocycle.gram.dim), cocycle)
