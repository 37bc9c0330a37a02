"""
Graded Fock-space states of M(1) (integer modes) and M_{Z+1/2}(1)
(half-integer modes), exact scalars, Schur polynomials, the constants
c_mn and the operator Delta_z.

The working frame is the lattice basis a_1..a_d: the Heisenberg bracket is
[a_i(m), a_j(n)] = m G_ij delta_{m+n,0} and a_i(0) acts on the label beta
by <a_i, beta>.
"""
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, Hashable, Iterable, Iterator, List, Sequence, Tuple, Union
import logging

import sympy
from sympy.utilities.iterables import partitions

from .errors import NotHomogeneous, SectorMismatch
from .lattice import GramMatrix, LatticeVector


logger = logging.getLogger(__name__)

Scalar = Union[Fraction, sympy.Expr]
Mode = Tuple[int, Fraction]

HALF = Fraction(1, 2)
HALF_SYMPY = sympy.Rational(1, 2)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, sympy.Rational):
        return Fraction(int(x.p), int(x.q))
    return Fraction(x)


def normalise_scalar(c: Scalar) -> Scalar:
    if isinstance(c, sympy.Basic):
        c = sympy.expand(c)
        if c.is_Rational:
            return Fraction(int(c.p), int(c.q))
    return c


def format_scalar(c: Scalar) -> str:
    """'p/q' for rationals, 'p/q+r/s*i' for Gaussian rationals."""
    c = normalise_scalar(c)
    if isinstance(c, (int, Fraction)):
        c = Fraction(c)
        return f'{c.numerator}/{c.denominator}'
    re, im = (as_fraction(part) for part in c.as_real_imag())
    return f'{re.numerator}/{re.denominator}{"+" if im >= 0 else "-"}{abs(im.numerator)}/{im.denominator}*i'


@lru_cache(maxsize=None)
def binomial(x: Fraction, k: int) -> Fraction:
    """Generalised binomial coefficient binom(x, k) for rational x."""
    if k < 0:
        return Fraction(0)
    result = Fraction(1)
    for j in range(k):
        result *= (Fraction(x) - j)
    return result / factorial(k)


@dataclass(frozen=True, order=True)
class FockMonomial:
    """
    a_{i_1}(n_1)...a_{i_k}(n_k) (x) label with all n < 0.

    The label is a lattice vector in the untwisted sector and a T_chi basis
    index in the twisted sector.
    """
    modes: Tuple[Mode, ...]
    label: Hashable
    twisted: bool = False

    @classmethod
    def make(cls, modes: Iterable[Tuple[int, object]], label, twisted: bool = False) -> 'FockMonomial':
        modes = tuple(sorted((int(i), Fraction(n)) for i, n in modes))
        for _, n in modes:
            if n >= 0:
                raise SectorMismatch(f'mode {n} is not a creation mode')
            if (n.denominator == 2) != twisted or n.denominator > 2:
                raise SectorMismatch(f'mode {n} does not belong to the {"twisted" if twisted else "untwisted"} sector')
        return cls(modes, label, twisted)

    @property
    def fock_weight(self) -> Fraction:
        return -sum((n for _, n in self.modes), Fraction(0))

    @property
    def length(self) -> int:
        return len(self.modes)

    def with_label(self, label) -> 'FockMonomial':
        return FockMonomial(self.modes, label, self.twisted)

    def add_mode(self, i: int, n: Fraction) -> 'FockMonomial':
        return FockMonomial(tuple(sorted(self.modes + ((i, Fraction(n)),))), self.label, self.twisted)

    def to_json(self) -> dict:
        label = list(self.label) if isinstance(self.label, tuple) else self.label
        return {'modes': [[i, n.numerator, n.denominator] for i, n in self.modes], 'label': label}

    def __str__(self):
        ops = ''.join(f'a{i}({n})' for i, n in self.modes)
        return f'{ops}|{self.label}>' if not self.twisted else f'{ops}|t{self.label}>'


class StateVector:
    """Finite linear combination of FockMonomials of one sector."""

    __slots__ = ('terms',)

    def __init__(self, terms: Dict[FockMonomial, Scalar] = None):
        self.terms: Dict[FockMonomial, Scalar] = {}
        for m, c in (terms or {}).items():
            c = normalise_scalar(c)
            if c != 0:
                self.terms[m] = c

    @classmethod
    def of(cls, monomial: FockMonomial, coefficient: Scalar = Fraction(1)) -> 'StateVector':
        return cls({monomial: coefficient})

    @classmethod
    def zero(cls) -> 'StateVector':
        return cls()

    def __iter__(self) -> Iterator[Tuple[FockMonomial, Scalar]]:
        return iter(sorted(self.terms.items(), key=lambda t: (t[0].modes, str(t[0].label))))

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, StateVector):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms))

    def __add__(self, other: 'StateVector') -> 'StateVector':
        result = dict(self.terms)
        for m, c in other.terms.items():
            result[m] = result.get(m, 0) + c
        return StateVector(result)

    def __sub__(self, other: 'StateVector') -> 'StateVector':
        return self + other.scale(-1)

    def __neg__(self) -> 'StateVector':
        return self.scale(-1)

    def scale(self, c: Scalar) -> 'StateVector':
        if c == 0:
            return StateVector()
        return StateVector({m: v * c for m, v in self.terms.items()})

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def coefficient(self, monomial: FockMonomial) -> Scalar:
        return self.terms.get(monomial, Fraction(0))

    def labels(self) -> List:
        return sorted({m.label for m in self.terms}, key=str)

    def by_label(self) -> Dict[Hashable, 'StateVector']:
        parts = defaultdict(dict)
        for m, c in self.terms.items():
            parts[m.label][m] = c
        return {label: StateVector(t) for label, t in parts.items()}

    @property
    def twisted(self) -> bool:
        return any(m.twisted for m in self.terms)

    def to_json(self) -> list:
        return [{**m.to_json(), 'coeff': format_scalar(c)} for m, c in self]

    def __repr__(self):
        if not self.terms:
            return 'StateVector(0)'
        return ' + '.join(f'({format_scalar(c)}) {m}' for m, c in self)


def linear_sum(states: Iterable[StateVector]) -> StateVector:
    total: Dict[FockMonomial, Scalar] = defaultdict(lambda: Fraction(0))
    for s in states:
        for m, c in s.terms.items():
            total[m] += c
    return StateVector(dict(total))


def vacuum(gram: GramMatrix) -> StateVector:
    return StateVector.of(FockMonomial((), gram.zero()))


def exp_state(vec: Sequence[int], coefficient: Scalar = Fraction(1)) -> StateVector:
    """iota(e_vec) as a state of V_L."""
    return StateVector.of(FockMonomial((), tuple(vec)), coefficient)


def heisenberg_state(modes: Iterable[Tuple[int, object]], label, twisted: bool = False) -> StateVector:
    return StateVector.of(FockMonomial.make(modes, label, twisted))


def _check_sector(n: Fraction, monomial: FockMonomial):
    if n.denominator > 2 or (n.denominator == 2) != monomial.twisted:
        raise SectorMismatch(f'mode {n} cannot act on the {"twisted" if monomial.twisted else "untwisted"} sector')


def act_monomial(gram: GramMatrix, i: int, n: Fraction, monomial: FockMonomial) -> Dict[FockMonomial, Fraction]:
    """a_i(n) applied to one monomial."""
    n = Fraction(n)
    _check_sector(n, monomial)
    if n < 0:
        return {monomial.add_mode(i, n): Fraction(1)}
    if n == 0:
        pairing = gram.pair_with_basis(monomial.label)[i]
        return {monomial: Fraction(pairing)} if pairing else {}
    result: Dict[FockMonomial, Fraction] = defaultdict(lambda: Fraction(0))
    modes = monomial.modes
    seen = set()
    for k, (j, m) in enumerate(modes):
        if m != -n or gram[i, j] == 0 or (j, m) in seen:
            continue
        seen.add((j, m))
        multiplicity = modes.count((j, m))
        rest = modes[:k] + modes[k + 1:]
        result[FockMonomial(rest, monomial.label, monomial.twisted)] += n * gram[i, j] * multiplicity
    return result


def heisenberg_act(gram: GramMatrix, i: int, n, state: StateVector) -> StateVector:
    """
    a_i(n) applied to a state.

    Raises:
        SectorMismatch: integer mode on the twisted sector or vice versa.
    """
    n = Fraction(n)
    total: Dict[FockMonomial, Scalar] = defaultdict(lambda: Fraction(0))
    for monomial, c in state.terms.items():
        for m, v in act_monomial(gram, i, n, monomial).items():
            total[m] += c * v
    return StateVector(dict(total))


def act_modes(gram: GramMatrix, modes: Sequence[Tuple[int, object]], state: StateVector) -> StateVector:
    """a_{i_1}(n_1)...a_{i_k}(n_k) state, rightmost operator first."""
    for i, n in reversed(list(modes)):
        state = heisenberg_act(gram, i, n, state)
    return state


def weight_of(gram: GramMatrix, monomial: FockMonomial) -> Fraction:
    if monomial.twisted:
        return monomial.fock_weight + Fraction(gram.dim, 16)
    return monomial.fock_weight + Fraction(gram.norm(monomial.label), 2)


def weight(gram: GramMatrix, state: StateVector) -> Fraction:
    """
    The common L(0)-weight of the monomials of a state.

    Raises:
        NotHomogeneous: the state mixes weights or is zero.
    """
    weights = {weight_of(gram, m) for m in state.terms}
    if len(weights) != 1:
        raise NotHomogeneous(f'state {state!r} has weights {sorted(weights)}')
    return weights.pop()


def is_homogeneous(gram: GramMatrix, state: StateVector) -> bool:
    return len({weight_of(gram, m) for m in state.terms}) == 1


def homogeneous_parts(gram: GramMatrix, state: StateVector) -> Dict[Fraction, StateVector]:
    """{weight: component} of a state."""
    parts: Dict[Fraction, Dict[FockMonomial, Scalar]] = defaultdict(dict)
    for m, c in state.terms.items():
        parts[weight_of(gram, m)][m] = c
    return {wt: StateVector(t) for wt, t in parts.items()}


def mode_multisets(d: int, total: Fraction, twisted: bool = False) -> List[Tuple[Mode, ...]]:
    """All sorted multisets of creation modes (i, -n) with sum of n equal to total."""
    total = Fraction(total)
    if twisted:
        sizes = [Fraction(2 * k + 1, 2) for k in range(int(total) + 1)]
        sizes = [s for s in sizes if s <= total]
    else:
        sizes = [Fraction(k) for k in range(1, int(total) + 1)]
    slots = sorted((i, -s) for i in range(d) for s in sizes)
    found = []

    def extend(start: int, remaining: Fraction, chosen: list):
        if remaining == 0:
            found.append(tuple(chosen))
            return
        for k in range(start, len(slots)):
            i, n = slots[k]
            if -n <= remaining:
                chosen.append(slots[k])
                extend(k, remaining + n, chosen)
                chosen.pop()

    extend(0, total, [])
    return found


def fock_basis(d: int, total: Fraction, label, twisted: bool = False) -> List[FockMonomial]:
    return [FockMonomial(modes, label, twisted) for modes in mode_multisets(d, total, twisted)]


def schur(r: int) -> sympy.Expr:
    """p_r(x_1, ..., x_r): the y^r coefficient of exp(sum_n x_n y^n / n)."""
    y = sympy.Symbol('y')
    xs = sympy.symbols(f'x1:{r + 2}')
    exponent = sum(xs[n - 1] * y ** n / n for n in range(1, r + 1))
    series = sympy.series(sympy.exp(exponent), y, 0, r + 1).removeO()
    return sympy.expand(series).coeff(y, r)


@lru_cache(maxsize=None)
def exponential_terms(degree: Fraction, twisted: bool = False, sign: int = 1) -> Tuple[Tuple[Tuple[Fraction, ...], Fraction], ...]:
    """
    Expansion of the y^degree coefficient of exp(sum_n sign * x_n y^n / n) as
    (parts, coefficient) pairs, parts running over positive integers or, in
    the twisted sector, over positive half-odd-integers.
    """
    degree = Fraction(degree)
    scale = 2 if twisted else 1
    target = degree * scale
    if target.denominator != 1 or target < 0:
        return ()
    if target == 0:
        return (((), Fraction(1)),)
    terms = []
    for partition in partitions(int(target)):
        if twisted and any(p % 2 == 0 for p in partition):
            continue
        coefficient = Fraction(1)
        parts = []
        for p, k in sorted(partition.items()):
            n = Fraction(p, scale)
            coefficient *= (Fraction(sign) / n) ** k / factorial(k)
            parts.extend([n] * k)
        terms.append((tuple(parts), coefficient))
    return tuple(terms)


@dataclass
class DeltaCoeffs:
    """c_mn with sum c_mn x^m y^n = -log(((1+x)^(1/2) + (1+y)^(1/2)) / 2)."""
    max_order: int
    c: Dict[Tuple[int, int], Fraction]

    def __getitem__(self, mn: Tuple[int, int]) -> Fraction:
        return self.c.get(mn, Fraction(0))

    def nonzero(self) -> List[Tuple[int, int]]:
        return sorted(mn for mn, v in self.c.items() if v)


@lru_cache(maxsize=None)
def delta_coefficients(max_order: int) -> DeltaCoeffs:
    """Exact bivariate Taylor coefficients c_mn for m, n <= max_order."""
    x, y = sympy.symbols('x y')
    N = max_order

    def truncate(p: sympy.Poly) -> sympy.Poly:
        return sympy.Poly.from_dict({(i, j): c for (i, j), c in p.terms() if i <= N and j <= N},
                                    x, y, domain=sympy.QQ)

    root_x = sum(sympy.binomial(HALF_SYMPY, k) * x ** k for k in range(N + 1))
    root_y = sum(sympy.binomial(HALF_SYMPY, k) * y ** k for k in range(N + 1))
    g = sympy.Poly((root_x + root_y) / 2 - 1, x, y, domain=sympy.QQ)
    total = sympy.Poly(0, x, y, domain=sympy.QQ)
    power = sympy.Poly(1, x, y, domain=sympy.QQ)
    for k in range(1, 2 * N + 1):
        power = truncate(power * g)
        total += power * sympy.Rational((-1) ** k, k)
    c = {(i, j): as_fraction(v) for (i, j), v in truncate(total).terms()}
    for m in range(N + 1):
        for n in range(N + 1):
            c.setdefault((m, n), Fraction(0))
    logger.debug('computed c_mn up to order %d', N)
    return DeltaCoeffs(N, c)




def apply_delta(gram: GramMatrix, state: StateVector) -> Dict[int, StateVector]:
    """
    e^{Delta_z} state as {k: coefficient of z^{-k}}, with
    Delta_z = sum_{m,n>=0} c_mn sum_ij (G^-1)_ij a_i(m) a_j(n) z^{-m-n}.
    """
    if state.twisted:
        raise SectorMismatch('Delta_z acts on untwisted states')
    if state.is_zero():
        return {}
    top = int(max(m.fock_weight for m in state.terms))
    coeffs = delta_coefficients(max(top, 1))
    inverse = gram.inverse
    d = gram.dim
    pairs = [(m, n) for (m, n) in coeffs.nonzero() if m + n > 0]

    def delta(series: Dict[int, StateVector]) -> Dict[int, StateVector]:
        out: Dict[int, StateVector] = {}
        for k, s in series.items():
            for m, n in pairs:
                for j in range(d):
                    right = heisenberg_act(gram, j, n, s)
                    if right.is_zero():
                        continue
                    for i in range(d):
                        if inverse[i][j] == 0:
                            continue
                        term = heisenberg_act(gram, i, m, right)
                        if term:
                            out[k + m + n] = out.get(k + m + n, StateVector()) + term.scale(coeffs[m, n] * inverse[i][j])
        return {k: s for k, s in out.items() if s}

    result = {0: state}
    current = {0: state}
    j = 1
    while current:
        current = {k: s.scale(Fraction(1, j)) for k, s in delta(current).items()}
        for k, s in current.items():
            result[k] = result.get(k, StateVector()) + s
        j += 1
    return {k: s for k, s in sorted(result.items()) if s}
