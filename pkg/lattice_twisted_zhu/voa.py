"""
Modes u_n v of the lattice vertex operator algebra V_L = M(1) (x) C{L}.

Y(u, z) for u = a_{i_1}(-n_1)...a_{i_k}(-n_k) (x) iota(e_alpha) is the
normal-ordered product of the derivative fields d^(n_j - 1) a_{i_j}(z) with
Y(iota(e_alpha), z) = E^-(alpha, z) E^+(alpha, z) e_alpha z^alpha. The same
expansion, with half-integer modes and a different label step, gives the
twisted operators W_theta (see twisted.py).

Mode caches are plain dicts owned by each engine instance; an engine must not
be shared between threads while it is filling its cache.
"""
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, List, Sequence, Tuple, Union
import logging

from .errors import NotHomogeneous
from .extension import Cocycle, ExtElement, build_cocycle, theta
from .fock import (FockMonomial, Scalar, StateVector, binomial, exponential_terms,
                   fock_basis, heisenberg_act, linear_sum, vacuum, weight)
from .lattice import GramMatrix, LatticeVector, add, short_vectors, vectors_up_to


logger = logging.getLogger(__name__)

Branch = Tuple[Fraction, StateVector, Tuple[int, ...]]


def top_fock_weight(state: StateVector) -> Fraction:
    return max((m.fock_weight for m in state.terms), default=Fraction(0))


class ModeEngine:
    """
    Coefficient extraction for normal-ordered fields acting on a Fock space.

    Subclasses fix the sector through `twisted` and implement `label_step`,
    which applies the group-element part e_alpha z^(...) to a state and returns
    {power shift: state}.
    """
    twisted = False

    def __init__(self, gram: GramMatrix):
        self.gram = gram
        self._cache: Dict[Tuple, StateVector] = {}

    def label_step(self, alpha: LatticeVector, state: StateVector) -> Dict[Fraction, StateVector]:
        raise NotImplementedError

    def steps(self, top: Fraction) -> List[Fraction]:
        """Admissible degrees 0 <= r <= top of the exponential factors."""
        unit = Fraction(1, 2) if self.twisted else Fraction(1)
        return [unit * k for k in range(int(Fraction(top) / unit) + 1)]

    def annihilator_modes(self, top: Fraction) -> List[Fraction]:
        if self.twisted:
            return [Fraction(2 * k + 1, 2) for k in range(int(top + Fraction(1, 2)))
                    if Fraction(2 * k + 1, 2) <= top]
        return [Fraction(m) for m in range(int(top) + 1)]

    def creator_modes(self, top: Fraction) -> List[Fraction]:
        if self.twisted:
            return [Fraction(2 * k + 1, 2) for k in range(int(top + Fraction(1, 2)))
                    if Fraction(2 * k + 1, 2) <= top]
        return [Fraction(m) for m in range(1, int(top) + 1)]

    def alpha_act(self, alpha: Sequence[int], n: Fraction, state: StateVector) -> StateVector:
        """alpha(n) = sum_i alpha_i a_i(n)."""
        return linear_sum(heisenberg_act(self.gram, i, n, state).scale(c)
                          for i, c in enumerate(alpha) if c)

    def _exponential(self, alpha, degree: Fraction, sign: int, state: StateVector) -> StateVector:
        """Degree-`degree` part of exp(sign * sum_n alpha(sign * -n) z^... / n) on a state."""
        total = []
        for parts, coefficient in exponential_terms(degree, self.twisted, sign):
            t = state
            for p in parts:
                t = self.alpha_act(alpha, -p if sign > 0 else p, t)
                if not t:
                    break
            if t:
                total.append(t.scale(coefficient))
        return linear_sum(total)

    def _annihilate(self, factors, alpha, w: StateVector) -> List[Branch]:
        branches: List[Branch] = [(Fraction(0), w, ())]
        for k, (i, nk) in enumerate(factors):
            grown = []
            for power, state, creators in branches:
                grown.append((power, state, creators + (k,)))
                for m in self.annihilator_modes(top_fock_weight(state)):
                    t = heisenberg_act(self.gram, i, m, state)
                    if t:
                        grown.append((power - m - nk, t.scale(binomial(-m - 1, int(nk) - 1)), creators))
            branches = grown
        result = []
        if not any(alpha):
            return branches
        for power, state, creators in branches:
            for r in self.steps(top_fock_weight(state)):
                t = self._exponential(alpha, r, -1, state)
                if t:
                    result.append((power - r, t, creators))
        return result

    def _distribute(self, total: Fraction, count: int) -> Iterable[Tuple[Tuple[Fraction, ...], Fraction]]:
        """Creator modes mu_1..mu_count and a remainder s >= 0 with sum mu + s = total."""
        options = self.creator_modes(total)
        for mus in product(options, repeat=count):
            s = total - sum(mus, Fraction(0))
            if s < 0:
                continue
            if not self.twisted and s.denominator != 1:
                continue
            if self.twisted and (2 * s).denominator != 1:
                continue
            yield mus, s

    def _create(self, factors, alpha, creators, total: Fraction, state: StateVector) -> StateVector:
        out = []
        for mus, s in self._distribute(total, len(creators)):
            coefficient = Fraction(1)
            for k, mu in zip(creators, mus):
                coefficient *= binomial(mu - 1, int(factors[k][1]) - 1)
                if not coefficient:
                    break
            if not coefficient:
                continue
            t = state
            for k, mu in zip(creators, mus):
                t = heisenberg_act(self.gram, factors[k][0], -mu, t)
            if any(alpha):
                t = self._exponential(alpha, s, 1, t)
            elif s:
                continue
            if t:
                out.append(t.scale(coefficient))
        return linear_sum(out)

    def _compute(self, u: FockMonomial, n: Fraction, w: StateVector) -> StateVector:
        factors = [(i, -m) for i, m in u.modes]
        alpha = u.label
        target = -n - 1
        out = []
        for power, state, creators in self._annihilate(factors, alpha, w):
            for shift, t in self.label_step(alpha, state).items():
                total = target - power - shift + sum((factors[k][1] for k in creators), Fraction(0))
                if total < 0:
                    continue
                result = self._create(factors, alpha, creators, total, t)
                if result:
                    out.append(result)
        return linear_sum(out)

    def monomial_mode(self, u: FockMonomial, n, w: FockMonomial) -> StateVector:
        n = Fraction(n)
        key = (u, n, w)
        if key not in self._cache:
            self._cache[key] = self._compute(u, n, StateVector.of(w))
        return self._cache[key]

    def mode(self, u: Union[StateVector, FockMonomial], n, w: StateVector) -> StateVector:
        """u_n w, bilinear in u and w."""
        if isinstance(u, FockMonomial):
            u = StateVector.of(u)
        out = []
        for um, uc in u.terms.items():
            for wm, wc in w.terms.items():
                t = self.monomial_mode(um, n, wm)
                if t:
                    out.append(t.scale(uc * wc))
        return linear_sum(out)


class LatticeVOA(ModeEngine):
    """V_L for an even positive-definite lattice with a fixed 2-cocycle."""

    def __init__(self, gram: GramMatrix, cocycle: Cocycle = None):
        super().__init__(gram)
        self.cocycle = cocycle or build_cocycle(gram)

    def label_step(self, alpha, state):
        """e_alpha z^alpha: iota(e_beta) -> eps(alpha, beta) z^<alpha,beta> iota(e_{alpha+beta})."""
        parts = defaultdict(dict)
        for m, c in state.terms.items():
            beta = m.label
            shift = Fraction(self.gram.inner(alpha, beta))
            parts[shift][m.with_label(add(alpha, beta))] = c * self.cocycle(alpha, beta)
        return {shift: StateVector(t) for shift, t in parts.items()}

    @property
    def rank(self) -> int:
        return self.gram.dim

    def vacuum(self) -> StateVector:
        return vacuum(self.gram)

    def exp_mode(self, a: ExtElement, n, v: StateVector) -> StateVector:
        """Coefficient of z^(-n-1) in Y(iota(a), z) v."""
        return self.mode(FockMonomial((), a.vec), n, v).scale(a.sign)

    def general_mode(self, u: Union[StateVector, FockMonomial], n, v: StateVector) -> StateVector:
        return self.mode(u, n, v)

    def omega(self) -> StateVector:
        """omega = 1/2 sum_ij (G^-1)_ij a_i(-1) a_j(-1) vacuum."""
        inverse = self.gram.inverse
        zero = self.gram.zero()
        terms = defaultdict(lambda: Fraction(0))
        for i in range(self.rank):
            for j in range(self.rank):
                if inverse[i][j]:
                    terms[FockMonomial.make([(i, -1), (j, -1)], zero)] += inverse[i][j] / 2
        return StateVector(dict(terms))

    def virasoro_mode(self, n: int, v: StateVector) -> StateVector:
        """L(n) v = omega_{n+1} v."""
        return self.mode(self.omega(), n + 1, v)

    def theta_state(self, v: StateVector) -> StateVector:
        """theta acts by -1 on the Heisenberg modes and by theta on iota(e_alpha)."""
        terms = defaultdict(lambda: Fraction(0))
        for m, c in v.terms.items():
            image = theta(ExtElement(1, m.label), self.cocycle)
            terms[m.with_label(image.vec)] += c * image.sign * (-1) ** len(m.modes)
        return StateVector(dict(terms))

    def basis(self, wt) -> List[FockMonomial]:
        """Monomial basis of the weight-wt subspace of V_L."""
        wt = Fraction(wt)
        found = []
        for gamma in vectors_up_to(self.gram, int(2 * wt)):
            fock = wt - Fraction(self.gram.norm(gamma), 2)
            if fock >= 0 and fock.denominator == 1:
                found.extend(fock_basis(self.rank, fock, gamma))
        return sorted(found)

    def basis_up_to(self, wt) -> List[FockMonomial]:
        return [m for k in range(int(wt) + 1) for m in self.basis(k)]

    def theta_even_part(self, v: StateVector) -> StateVector:
        return (v + self.theta_state(v)).scale(Fraction(1, 2))

    def theta_odd_part(self, v: StateVector) -> StateVector:
        return (v - self.theta_state(v)).scale(Fraction(1, 2))

    def weight(self, v: StateVector) -> Fraction:
        return weight(self.gram, v)


@dataclass
class LieAlgebraData:
    """Weight-one Lie algebra g = V_1 with [u, v] = u_0 v and (u|v) 1 = u_1 v."""
    basis: List[FockMonomial]
    bracket: List[List[Dict[int, Scalar]]]
    form: List[List[Scalar]]
    roots: List[LatticeVector] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def bracket_vector(self, x: Dict[int, Scalar], y: Dict[int, Scalar]) -> Dict[int, Scalar]:
        out = defaultdict(lambda: Fraction(0))
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.bracket[i][j].items():
                    out[k] += a * b * c
        return {k: v for k, v in out.items() if v}

    def is_antisymmetric(self) -> bool:
        n = self.dim
        return all(self.bracket_vector({i: 1}, {j: 1}) == {k: -v for k, v in self.bracket[j][i].items()}
                   for i in range(n) for j in range(n))

    def satisfies_jacobi(self) -> bool:
        n = self.dim
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    x, y, z = {i: 1}, {j: 1}, {k: 1}
                    total = defaultdict(lambda: Fraction(0))
                    for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
                        for key, val in self.bracket_vector(a, self.bracket_vector(b, c)).items():
                            total[key] += val
                    if any(total.values()):
                        return False
        return True

    def form_is_invariant(self) -> bool:
        """([u, v] | w) = (u | [v, w]) and the form is symmetric."""
        n = self.dim
        for i in range(n):
            for j in range(n):
                if self.form[i][j] != self.form[j][i]:
                    return False
                for k in range(n):
                    left = sum((c * self.form[m][k] for m, c in self.bracket[i][j].items()), Fraction(0))
                    right = sum((c * self.form[i][m] for m, c in self.bracket[j][k].items()), Fraction(0))
                    if left != right:
                        return False
        return True


def weight_one_lie_algebra(gram: GramMatrix, voa: LatticeVOA = None) -> LieAlgebraData:
    """Structure constants of V_1 = span{a_i(-1) 1} + span{iota(e_alpha) : <alpha,alpha> = 2}."""
    voa = voa or LatticeVOA(gram)
    zero = gram.zero()
    roots = short_vectors(gram, 2)
    basis = ([FockMonomial.make([(i, -1)], zero) for i in range(gram.dim)]
             + [FockMonomial((), r) for r in roots])
    position = {m: k for k, m in enumerate(basis)}
    vac = FockMonomial((), zero)
    bracket = []
    form = []
    for u in basis:
        row, form_row = [], []
        for v in basis:
            w = voa.mode(u, 0, StateVector.of(v))
            coords = {}
            for m, c in w.terms.items():
                if m not in position:
                    raise NotHomogeneous(f'u_0 v left V_1: {m}')
                coords[position[m]] = c
            row.append(coords)
            form_row.append(voa.mode(u, 1, StateVector.of(v)).coefficient(vac))
        bracket.append(row)
        form.append(form_row)
    logger.info('weight-one Lie algebra has dimension %d with %d roots', len(basis), len(roots))
    return LieAlgebraData(basis, bracket, form, roots)
