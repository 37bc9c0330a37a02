"""
theta-twisted modules V_L^{T_chi} = M_{Z+1/2}(1) (x) T_chi and the twisted
vertex operators Y_theta(v, z) = W_theta(e^{Delta_z} v, z).

Modes are indexed by Y_theta(v, z) = sum_n v_n z^(-n-1) with n in Z/2, so
that o(v) = v_{wt v - 1} preserves the grading.
"""
from fractions import Fraction
from typing import Dict, List, Optional
import logging

import sympy

from .errors import NotHomogeneous, ValidationError
from .extension import ExtElement, ExtensionData, TChiModule, build_extension, lift
from .fock import (FockMonomial, StateVector, apply_delta, fock_basis, homogeneous_parts,
                   linear_sum, mode_multisets)
from .voa import LatticeVOA, ModeEngine


logger = logging.getLogger(__name__)


def normalization_constant(norm: int, normalization: str = 'full') -> Fraction:
    """2^(-<a,a>) for 'full', 2^(-<a,a>/2) for 'half'."""
    if normalization == 'full':
        return Fraction(1, 2 ** norm)
    if normalization == 'half':
        return Fraction(1, 2 ** (norm // 2))
    raise ValidationError(f'unknown normalization {normalization!r}')


class TwistedModule(ModeEngine):
    """
    The twisted module built on T_chi.

    Args:
        extension: the data of L^/K the module T_chi belongs to.
        module: the L^/K-module T_chi.
        normalization: 'full' or 'half', the power of 2 in front of
            Y_theta(iota(a), z).
        voa: the untwisted V_L the vertex operators are attached to.
    """
    twisted = True

    def __init__(self, extension: ExtensionData, module: TChiModule,
                 normalization: str = 'full', voa: Optional[LatticeVOA] = None):
        super().__init__(extension.gram)
        normalization_constant(2, normalization)
        self.extension = extension
        self.module = module
        self.normalization = normalization
        self.voa = voa or LatticeVOA(extension.gram, extension.cocycle)
        self._matrices: Dict = {}

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def top_weight(self) -> Fraction:
        return Fraction(self.gram.dim, 16)

    def group_matrix(self, alpha) -> sympy.Matrix:
        alpha = tuple(alpha)
        if alpha not in self._matrices:
            self._matrices[alpha] = self.module.matrix_of(lift(alpha), self.extension.Q)
        return self._matrices[alpha]

    def label_step(self, alpha, state):
        """N(alpha) a z^(-<alpha,alpha>/2) with a acting on T_chi."""
        norm = self.gram.norm(alpha)
        scale = normalization_constant(norm, self.normalization)
        rho = self.group_matrix(alpha)
        terms = {}
        for m, c in state.terms.items():
            for target in range(self.dim):
                entry = rho[target, m.label]
                if entry != 0:
                    key = m.with_label(target)
                    terms[key] = terms.get(key, 0) + c * entry * scale
        return {Fraction(-norm, 2): StateVector(terms)}

    def top_state(self, t: int) -> StateVector:
        return StateVector.of(FockMonomial((), t, True))

    def twisted_exp_mode(self, a: ExtElement, n, w: StateVector) -> StateVector:
        """Coefficient of z^(-n-1) in Y_theta(iota(a), z) w."""
        return self.mode(FockMonomial((), a.vec), n, w).scale(a.sign)

    def twisted_general_mode(self, v: StateVector, n, w: StateVector) -> StateVector:
        """Coefficient of z^(-n-1) in Y_theta(v, z) w."""
        n = Fraction(n)
        return linear_sum(self.mode(part, n - k, w) for k, part in apply_delta(self.gram, v).items())

    def twisted_virasoro(self, n: int, w: StateVector) -> StateVector:
        return self.twisted_general_mode(self.voa.omega(), n + 1, w)

    def top_level_matrix(self, v: StateVector) -> sympy.Matrix:
        """
        The matrix of o(v) = v_{wt v - 1} on the top level T_chi, extended
        linearly over the homogeneous components of v.

        Raises:
            NotHomogeneous: o(v) does not preserve the top level.
        """
        M = sympy.zeros(self.dim, self.dim)
        for wt, part in sorted(homogeneous_parts(self.gram, v).items()):
            for t in range(self.dim):
                image = self.twisted_general_mode(part, wt - 1, self.top_state(t))
                for m, c in image.terms.items():
                    if m.modes:
                        raise NotHomogeneous(f'o(v) left the top level: {m}')
                    M[m.label, t] += c
        return M.applyfunc(sympy.expand)

    def basis(self, wt) -> List[FockMonomial]:
        """Basis of the weight-(d/16 + wt) subspace."""
        return [m for t in range(self.dim) for m in fock_basis(self.gram.dim, Fraction(wt), t, True)]

    def graded_dimensions(self, cutoff) -> Dict[Fraction, int]:
        """{d/16 + k: dimension} for k = 0, 1/2, ..., cutoff."""
        dims = {}
        for k in range(int(2 * Fraction(cutoff)) + 1):
            level = Fraction(k, 2)
            dims[self.top_weight + level] = len(mode_multisets(self.gram.dim, level, True)) * self.dim
        return dims


def twisted_modules(gram, cocycle=None, normalization: str = 'full',
                    extension: Optional[ExtensionData] = None,
                    voa: Optional[LatticeVOA] = None) -> List[TwistedModule]:
    """One TwistedModule per central character chi with chi(-1) = -1."""
    extension = extension or build_extension(gram, cocycle)
    voa = voa or LatticeVOA(extension.gram, extension.cocycle)
    modules = [TwistedModule(extension, m, normalization, voa) for m in extension.modules]
    logger.info('%d twisted modules with normalization %s', len(modules), normalization)
    return modules


def evaluate(modules: List[TwistedModule], v: StateVector) -> List[sympy.Matrix]:
    """The direct sum of o(v) over all irreducible twisted modules."""
    return [m.top_level_matrix(v) for m in modules]
