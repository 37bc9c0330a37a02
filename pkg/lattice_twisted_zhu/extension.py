"""
The central extension 1 -> <±1> -> L^ -> L -> 1 with commutator
(-1)^<a,b>, the involution theta, the subgroup K = {theta(a) a^-1},
the finite quotient L^/K, its central characters and the irreducible
modules T_chi.
"""
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple
import logging

import sympy

from .config import DEFAULT_WINDOW
from .errors import (InconsistencyError, InductionNotIrreducible, NotClosed,
                     SectionAdjustmentFailed)
from .lattice import (CosetTable, GramMatrix, LatticeVector, RSublattice, add, compute_R,
                      coset_key, cosets_mod_2L, half, in_2L, neg)


logger = logging.getLogger(__name__)


class Cocycle:
    """
    Bilinear 2-cocycle eps(a, b) = (-1)^(a^T B b) for a 0/1 matrix B.

    The standard choice is B = (Gram mod 2) strictly below the diagonal,
    so eps(a_i, a_j) = (-1)^<a_i,a_j> for i > j and 1 otherwise.
    """

    def __init__(self, gram: GramMatrix, table: Sequence[Sequence[int]]):
        self.gram = gram
        self.table = tuple(tuple(int(x) % 2 for x in row) for row in table)

    def __call__(self, a: Sequence[int], b: Sequence[int]) -> int:
        d = self.gram.dim
        t = self.table
        exponent = sum(a[i] * t[i][j] * b[j] for i in range(d) for j in range(d)
                       if t[i][j] and a[i] and b[j])
        return -1 if exponent % 2 else 1

    def __repr__(self):
        return f'Cocycle({self.table})'

    def commutator_holds(self, a, b) -> bool:
        return self(a, b) * self(b, a) == (-1) ** (self.gram.inner(a, b) % 2)

    def cocycle_holds(self, a, b, c) -> bool:
        return self(a, b) * self(add(a, b), c) == self(b, c) * self(a, add(b, c))


def build_cocycle(gram: GramMatrix) -> Cocycle:
    d = gram.dim
    return Cocycle(gram, [[gram[i, j] % 2 if i > j else 0 for j in range(d)] for i in range(d)])


@dataclass(frozen=True)
class ExtElement:
    """The element sign * e_vec of L^."""
    sign: int
    vec: LatticeVector

    @property
    def bar(self) -> LatticeVector:
        return self.vec

    def mul(self, other: 'ExtElement', cocycle: Cocycle) -> 'ExtElement':
        return ExtElement(self.sign * other.sign * cocycle(self.vec, other.vec),
                          add(self.vec, other.vec))

    def inverse(self, cocycle: Cocycle) -> 'ExtElement':
        return ExtElement(self.sign * cocycle(self.vec, neg(self.vec)), neg(self.vec))

    def negate(self) -> 'ExtElement':
        return ExtElement(-self.sign, self.vec)


def lift(vec: Sequence[int]) -> ExtElement:
    """The section e: L -> L^."""
    return ExtElement(1, tuple(vec))


def theta(a: ExtElement, cocycle: Cocycle) -> ExtElement:
    """theta(a) = a^-1 (-1)^(<a,a>/2)."""
    inv = a.inverse(cocycle)
    if (cocycle.gram.norm(a.vec) // 2) % 2:
        return inv.negate()
    return inv


def window(d: int, radius: int) -> Iterable[LatticeVector]:
    return product(range(-radius, radius + 1), repeat=d)


class KSubgroup:
    """K = {theta(a) a^-1}; exactly one signed lift of each vector of 2L."""

    def __init__(self, cocycle: Cocycle, signs: Dict[LatticeVector, int]):
        self.cocycle = cocycle
        self.signs = signs

    def sign(self, v: Sequence[int]) -> int:
        """The sign s with s * e_v in K, for v in 2L."""
        v = tuple(v)
        if v in self.signs:
            return self.signs[v]
        gamma = neg(half(v))
        a = lift(gamma)
        return theta(a, self.cocycle).mul(a.inverse(self.cocycle), self.cocycle).sign

    def contains(self, a: ExtElement) -> bool:
        return in_2L(a.vec) and self.sign(a.vec) == a.sign

    def elements(self) -> List[ExtElement]:
        return [ExtElement(s, v) for v, s in sorted(self.signs.items())]


def build_K(gram: GramMatrix, cocycle: Cocycle, radius: Optional[int] = None) -> KSubgroup:
    """
    Builds K on the sampled window {theta(a) a^-1 : |coords of a| <= radius}
    and checks that it projects onto 2L with one sign per vector and is
    closed under products that stay inside the sample.

    Raises:
        NotClosed: two signs over one vector, or a product leaves K.
    """
    if radius is None:
        radius = DEFAULT_WINDOW if gram.dim <= 2 else 1
    signs: Dict[LatticeVector, int] = {}
    for gamma in window(gram.dim, radius):
        a = lift(gamma)
        k = theta(a, cocycle).mul(a.inverse(cocycle), cocycle)
        if not in_2L(k.vec):
            raise NotClosed(f'theta(a)a^-1 = {k} does not lie over 2L')
        if signs.setdefault(k.vec, k.sign) != k.sign:
            raise NotClosed(f'both signs of e_{k.vec} arise in K')
    if signs.get(gram.zero()) != 1:
        raise NotClosed('identity is not in K')
    elements = [ExtElement(s, v) for v, s in signs.items()]
    for a in elements:
        for b in elements:
            c = a.mul(b, cocycle)
            if c.vec in signs and signs[c.vec] != c.sign:
                raise NotClosed(f'product {a} * {b} = {c} is not in K')
    logger.debug('K sampled on %d vectors of 2L', len(signs))
    return KSubgroup(cocycle, signs)


@dataclass
class QuotientGroup:
    """
    L^/K of order 2^(d+1). Element index 2*i + (sign == -1) stands for
    sign * e_{beta_i} K where beta_i are the coset representatives of L/2L.
    """
    gram: GramMatrix
    cocycle: Cocycle
    K: KSubgroup
    cosets: CosetTable
    elements: List[Tuple[int, int]] = field(default_factory=list)
    mul: List[List[int]] = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> int:
        return self.index(1, 0)

    @property
    def minus_one(self) -> int:
        return self.index(-1, 0)

    @staticmethod
    def index(sign: int, i: int) -> int:
        return 2 * i + (sign == -1)

    def section_sign(self, vec: Sequence[int]) -> int:
        """s(v) such that s(v) e_v = e_{beta_i} mod K; equal to 1 on representatives."""
        i, diff = self.cosets.locate(vec)
        return self.cocycle(self.cosets.reps[i], diff) * self.K.sign(diff)

    def adjusted_lift(self, vec: Sequence[int]) -> ExtElement:
        """The section twisted by section_sign, for which e_{2a} lies in K."""
        return ExtElement(self.section_sign(vec), tuple(vec))

    def element_of(self, a: ExtElement) -> int:
        i, _ = self.cosets.locate(a.vec)
        return self.index(a.sign * self.section_sign(a.vec), i)

    def ext_of(self, idx: int) -> ExtElement:
        sign, i = self.elements[idx]
        return ExtElement(sign, self.cosets.reps[i])

    def inverse(self, idx: int) -> int:
        row = self.mul[idx]
        return row.index(self.identity)

    def center(self) -> List[int]:
        n = self.order
        return [g for g in range(n) if all(self.mul[g][h] == self.mul[h][g] for h in range(n))]

    def is_associative(self) -> bool:
        m = self.mul
        n = self.order
        return all(m[m[a][b]][c] == m[a][m[b][c]] for a in range(n) for b in range(n) for c in range(n))


def quotient_group(gram: GramMatrix, cocycle: Cocycle, K: KSubgroup,
                   cosets: Optional[CosetTable] = None,
                   radius: int = 1) -> QuotientGroup:
    """
    Builds the multiplication table of L^/K on (sign, coset representative)
    pairs, with the section adjusted so that representative lifts of 2L lie
    in K.

    Raises:
        SectionAdjustmentFailed: the adjusted lifts of 2L are not in K.
        NotClosed: the table is not associative or not induced from L^.
    """
    cosets = cosets or cosets_mod_2L(gram)
    Q = QuotientGroup(gram, cocycle, K, cosets)
    Q.elements = [(s, i) for i in range(len(cosets)) for s in (1, -1)]
    if Q.section_sign(gram.zero()) != 1 or any(Q.section_sign(r) != 1 for r in cosets.reps):
        raise SectionAdjustmentFailed('representatives do not have trivial section sign')
    for gamma in window(gram.dim, radius):
        two_gamma = tuple(2 * c for c in gamma)
        if not K.contains(Q.adjusted_lift(two_gamma)):
            raise SectionAdjustmentFailed(f'adjusted lift of {two_gamma} is not in K')
    Q.mul = [[Q.element_of(Q.ext_of(a).mul(Q.ext_of(b), cocycle)) for b in range(Q.order)]
             for a in range(Q.order)]
    if not Q.is_associative():
        raise NotClosed('multiplication table of L^/K is not associative')
    sample = [ExtElement(s, v) for v in window(gram.dim, radius) for s in (1, -1)]
    for a in sample:
        for b in sample:
            if Q.element_of(a.mul(b, cocycle)) != Q.mul[Q.element_of(a)][Q.element_of(b)]:
                raise NotClosed(f'reduction mod K is not multiplicative at {a}, {b}')
    logger.info('L^/K built with order %d and center of order %d', Q.order, len(Q.center()))
    return Q


def _independent(keys: Iterable[Tuple[int, ...]], d: int) -> List[Tuple[int, ...]]:
    basis = []
    span = {tuple([0] * d)}
    for g in keys:
        if g not in span:
            basis.append(g)
            span |= {tuple((a + b) % 2 for a, b in zip(k, g)) for k in span}
    return basis


def _extend_character(Q: QuotientGroup, basis: List[Tuple[int, ...]],
                      values: Sequence) -> Dict[int, sympy.Expr]:
    """Extends values on the lifts (1, e_g) of a basis g of an abelian subgroup."""
    gens = [Q.index(1, Q.cosets.index_of(g)) for g in basis]
    chi = {}
    for bits in product((0, 1), repeat=len(basis)):
        g = Q.identity
        value = sympy.Integer(1)
        for bit, gen, val in zip(bits, gens, values):
            if bit:
                g = Q.mul[g][gen]
                value *= val
        sign, i = Q.elements[g]
        chi[Q.index(sign, i)] = sympy.expand(value)
        chi[Q.index(-sign, i)] = sympy.expand(-value)
    return chi


@dataclass
class CentralCharacter:
    values: Dict[int, sympy.Expr]

    def __call__(self, idx: int) -> sympy.Expr:
        return self.values[idx]


def _square_roots(Q: QuotientGroup, gen: int) -> Tuple:
    sq = Q.mul[gen][gen]
    if sq == Q.identity:
        return (sympy.Integer(1), sympy.Integer(-1))
    if sq == Q.minus_one:
        return (sympy.I, -sympy.I)
    raise InconsistencyError(f'square of generator {Q.elements[gen]} is not central in <±1>')


def central_characters(Q: QuotientGroup, R: RSublattice) -> List[CentralCharacter]:
    """All characters of R^/K with chi((-1)K) = -1; there are |R/2L| of them."""
    center = set(Q.center())
    for i in R.rep_indices:
        if Q.index(1, i) not in center:
            raise InconsistencyError(f'lift of R-representative {Q.cosets.reps[i]} is not central')
    d = Q.gram.dim
    basis = _independent((coset_key(Q.cosets.reps[i]) for i in R.rep_indices), d)
    gens = [Q.index(1, Q.cosets.index_of(g)) for g in basis]
    options = [_square_roots(Q, g) for g in gens]
    characters = [CentralCharacter(_extend_character(Q, basis, values))
                  for values in product(*options)]
    logger.info('%d central characters', len(characters))
    return characters


@dataclass
class TChiModule:
    character: CentralCharacter
    dim: int
    action: Dict[int, sympy.Matrix]

    def matrix(self, idx: int) -> sympy.Matrix:
        return self.action[idx]

    def matrix_of(self, a: ExtElement, Q: QuotientGroup) -> sympy.Matrix:
        return self.action[Q.element_of(a)]


def maximal_isotropic(Q: QuotientGroup, R: RSublattice) -> List[Tuple[int, ...]]:
    """Greedy maximal isotropic subspace of L/2L (for (-1)^<a,b>) containing R/2L."""
    gram = Q.gram
    d = gram.dim
    basis = _independent((coset_key(Q.cosets.reps[i]) for i in R.rep_indices), d)
    for rep in Q.cosets.reps:
        key = coset_key(rep)
        span = _span_set(basis, d)
        if key in span:
            continue
        if all(gram.inner(key, g) % 2 == 0 for g in basis):
            basis.append(key)
    return basis


def _span_set(basis, d):
    span = {tuple([0] * d)}
    for g in basis:
        span |= {tuple((a + b) % 2 for a, b in zip(k, g)) for k in span}
    return span


def commutant_dimension(matrices: Iterable[sympy.Matrix], dim: int) -> int:
    """Dimension of {X : X M = M X for all M}."""
    unknowns = sympy.symbols(f'x0:{dim * dim}')
    X = sympy.Matrix(dim, dim, unknowns)
    equations = []
    for M in matrices:
        equations.extend(list(X * M - M * X))
    system = sympy.Matrix([[sympy.expand(eq).coeff(u) for u in unknowns] for eq in equations])
    return dim * dim - system.rank()


def irreducible_module(Q: QuotientGroup, chi: CentralCharacter, R: RSublattice) -> TChiModule:
    """
    T_chi induced from a linear character of the preimage of a maximal
    isotropic subspace A of L/2L containing R/2L; dim T_chi = |L/R|^(1/2).

    Raises:
        InductionNotIrreducible: the commutant of the action is not scalar.
    """
    d = Q.gram.dim
    A_basis = maximal_isotropic(Q, R)
    A = _span_set(A_basis, d)
    r_basis = _independent((coset_key(Q.cosets.reps[i]) for i in R.rep_indices), d)
    extra = [g for g in A_basis if g not in _span_set(r_basis, d)]
    values = [chi(Q.index(1, Q.cosets.index_of(g))) for g in r_basis]
    values += [_square_roots(Q, Q.index(1, Q.cosets.index_of(g)))[0] for g in extra]
    lam = _extend_character(Q, r_basis + extra, values)

    transversal = []
    covered = set()
    for i, rep in enumerate(Q.cosets.reps):
        key = coset_key(rep)
        if key not in covered:
            transversal.append(Q.index(1, i))
            covered |= {tuple((a + b) % 2 for a, b in zip(key, k)) for k in A}
    dim = len(transversal)
    inverses = [Q.inverse(t) for t in transversal]

    action = {}
    for g in range(Q.order):
        M = sympy.zeros(dim, dim)
        for a in range(dim):
            for b in range(dim):
                h = Q.mul[Q.mul[inverses[a]][g]][transversal[b]]
                if coset_key(Q.cosets.reps[Q.elements[h][1]]) in A:
                    M[a, b] = lam[h]
        action[g] = M
    module = TChiModule(chi, dim, action)
    check_module(Q, module)
    return module


def check_module(Q: QuotientGroup, module: TChiModule):
    action = module.action
    for g in range(Q.order):
        for h in range(Q.order):
            if not (action[g] * action[h] - action[Q.mul[g][h]]).expand().is_zero_matrix:
                raise InconsistencyError(f'T_chi is not a representation at {Q.elements[g]}, {Q.elements[h]}')
    if action[Q.minus_one] != -sympy.eye(module.dim):
        raise InconsistencyError('(-1)K does not act as -1 on T_chi')
    if commutant_dimension(action.values(), module.dim) != 1:
        raise InductionNotIrreducible('induced module has a non-scalar commutant')
    for g in range(Q.order):
        twisted = Q.element_of(theta(Q.ext_of(g), Q.cocycle))
        if action[twisted] != action[g]:
            raise InconsistencyError(f'theta(a) != a on T_chi for a = {Q.elements[g]}')


@dataclass
class ExtensionData:
    """Everything built from (L, eps): K, L^/K, R and the modules T_chi."""
    gram: GramMatrix
    cocycle: Cocycle
    cosets: CosetTable
    R: RSublattice
    K: KSubgroup
    Q: QuotientGroup
    characters: List[CentralCharacter]
    modules: List[TChiModule]

    def census(self) -> dict:
        return {'central_characters': len(self.characters),
                'dims': [m.dim for m in self.modules],
                'order_Q': self.Q.order,
                'order_center': len(self.Q.center()),
                'R_cosets': len(self.R.rep_indices)}


def build_extension(gram: GramMatrix, cocycle: Optional[Cocycle] = None) -> ExtensionData:
    cocycle = cocycle or build_cocycle(gram)
    cosets = cosets_mod_2L(gram)
    R = compute_R(gram, cosets)
    K = build_K(gram, cocycle)
    Q = quotient_group(gram, cocycle, K, cosets)
    characters = central_characters(Q, R)
    modules = [irreducible_module(Q, chi, R) for chi in characters]
    logger.info('census: %d modules T_chi of dimensions %s', len(modules), [m.dim for m in modules])
    return ExtensionData(gram, cocycle, cosets, R, K, Q, characters, modules)
