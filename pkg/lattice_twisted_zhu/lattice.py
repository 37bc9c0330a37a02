"""
Even positive-definite lattices given by their Gram matrix: the pairing,
the cosets of 2L, the sublattice R, short vectors and the isometry group.

Lattice vectors are plain tuples of integers (coordinates in the basis the
Gram matrix is written in).
"""
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import ceil, floor, sqrt
from typing import Dict, List, Sequence, Tuple, Union
import json
import logging

import numpy as np
import sympy
from sympy.matrices.normalforms import hermite_normal_form

from .config import MAX_ISOMETRY_RANK
from .errors import (DimensionMismatch, NotEven, NotPositiveDefinite,
                     NotSymmetric, ValidationError)


logger = logging.getLogger(__name__)

LatticeVector = Tuple[int, ...]
IntMatrix = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class GramMatrix:
    entries: IntMatrix
    name: str = ''

    @property
    def dim(self) -> int:
        return len(self.entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], name: str = '') -> 'GramMatrix':
        return cls(tuple(tuple(int(x) for x in row) for row in rows), name)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def inner(self, x: Sequence[int], y: Sequence[int]) -> int:
        return inner(self, x, y)

    def norm(self, x: Sequence[int]) -> int:
        return inner(self, x, x)

    def pair_with_basis(self, x: Sequence) -> Tuple:
        """Returns (<a_i, x>)_i, i.e. G x."""
        return tuple(sum(row[j] * x[j] for j in range(self.dim)) for row in self.entries)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    @cached_property
    def inverse(self) -> Tuple[Tuple[Fraction, ...], ...]:
        inv = sympy.Matrix(self.entries).inv()
        return tuple(tuple(Fraction(int(inv[i, j].p), int(inv[i, j].q))
                           for j in range(self.dim))
                     for i in range(self.dim))

    def zero(self) -> LatticeVector:
        return (0,) * self.dim

    def basis_vector(self, i: int) -> LatticeVector:
        return tuple(int(i == j) for j in range(self.dim))


GramLike = Union[GramMatrix, Sequence[Sequence[int]]]


def as_gram(gram: GramLike) -> GramMatrix:
    if isinstance(gram, GramMatrix):
        return gram
    return GramMatrix.from_rows(gram)


def validate(gram: GramLike) -> GramMatrix:
    """
    Checks that the matrix is the Gram matrix of an even positive-definite
    lattice and returns it as a GramMatrix.

    Raises:
        ValidationError: not a square integer matrix.
        NotSymmetric, NotEven, NotPositiveDefinite: the named axiom fails.
    """
    name = gram.name if isinstance(gram, GramMatrix) else ''
    rows = gram.entries if isinstance(gram, GramMatrix) else gram
    if not (isinstance(rows, (list, tuple, np.ndarray))
            and all(isinstance(r, (list, tuple, np.ndarray)) for r in rows)):
        raise ValidationError(f'Gram matrix must be a list of rows, got {rows!r}')
    rows = [list(r) for r in rows]
    d = len(rows)
    if d == 0 or any(len(r) != d for r in rows):
        raise ValidationError('Gram matrix must be a non-empty square matrix')
    if any(not isinstance(x, (int, np.integer)) or isinstance(x, bool)
           for r in rows for x in r):
        raise ValidationError('Gram matrix entries must be integers')
    for i in range(d):
        for j in range(i):
            if rows[i][j] != rows[j][i]:
                raise NotSymmetric(f'entry ({i},{j}) = {rows[i][j]} but ({j},{i}) = {rows[j][i]}')
    for i in range(d):
        if rows[i][i] % 2:
            raise NotEven(f'diagonal entry {i} is {rows[i][i]}, lattice is not even')
    m = sympy.Matrix(rows)
    for k in range(1, d + 1):
        minor = m[:k, :k].det()
        if minor <= 0:
            raise NotPositiveDefinite(f'leading principal minor of order {k} is {minor}')
    return GramMatrix.from_rows(rows, name)


def load_lattice(path: str) -> GramMatrix:
    """Reads a lattice file {"name": ..., "gram": [[...]]} and validates it."""
    try:
        with open(path) as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ValidationError(f'{path}: cannot read lattice file ({e})')
    if not isinstance(data, dict) or 'gram' not in data:
        raise ValidationError(f'{path}: missing "gram" field')
    gram = validate(data['gram'])
    return GramMatrix(gram.entries, data.get('name', ''))


def inner(gram: GramLike, x: Sequence[int], y: Sequence[int]) -> int:
    gram = as_gram(gram)
    d = gram.dim
    if len(x) != d or len(y) != d:
        raise DimensionMismatch(f'vectors of length {len(x)} and {len(y)} in rank {d}')
    e = gram.entries
    return sum(x[i] * e[i][j] * y[j] for i in range(d) for j in range(d) if x[i] and y[j])


def add(x: Sequence[int], y: Sequence[int]) -> LatticeVector:
    return tuple(a + b for a, b in zip(x, y))


def sub(x: Sequence[int], y: Sequence[int]) -> LatticeVector:
    return tuple(a - b for a, b in zip(x, y))


def neg(x: Sequence[int]) -> LatticeVector:
    return tuple(-a for a in x)


def scale(k: int, x: Sequence[int]) -> LatticeVector:
    return tuple(k * a for a in x)


def coset_key(v: Sequence[int]) -> Tuple[int, ...]:
    return tuple(c % 2 for c in v)


def in_2L(v: Sequence[int]) -> bool:
    return all(c % 2 == 0 for c in v)


def half(v: Sequence[int]) -> LatticeVector:
    assert in_2L(v), f'{v} is not in 2L'
    return tuple(c // 2 for c in v)


def vectors_up_to(gram: GramLike, bound: int) -> List[LatticeVector]:
    """
    All v with <v,v> <= bound, by Fincke-Pohst enumeration on the
    LDL^T decomposition of the Gram matrix.
    """
    gram = as_gram(gram)
    d = gram.dim
    lower, diag = sympy.Matrix(gram.entries).LDLdecomposition()
    L = [[Fraction(int(lower[i, j].p), int(lower[i, j].q)) for j in range(d)] for i in range(d)]
    D = [Fraction(int(diag[i, i].p), int(diag[i, i].q)) for i in range(d)]
    found = []
    x = [0] * d

    def recurse(i: int, remaining: Fraction):
        if i < 0:
            found.append(tuple(x))
            return
        centre = -sum((L[j][i] * x[j] for j in range(i + 1, d)), Fraction(0))
        radius = sqrt(float(remaining / D[i]))
        for xi in range(floor(centre - radius) - 1, ceil(centre + radius) + 2):
            y = xi - centre
            q = D[i] * y * y
            if q <= remaining:
                x[i] = xi
                recurse(i - 1, remaining - q)
        x[i] = 0

    recurse(d - 1, Fraction(bound))
    return sorted(found)


def short_vectors(gram: GramLike, norm: int) -> List[LatticeVector]:
    """All v with <v,v> == norm."""
    gram = as_gram(gram)
    return [v for v in vectors_up_to(gram, norm) if gram.norm(v) == norm]


@dataclass
class CosetTable:
    reps: List[LatticeVector]
    index: Dict[Tuple[int, ...], int]

    def __len__(self):
        return len(self.reps)

    def index_of(self, v: Sequence[int]) -> int:
        return self.index[coset_key(v)]

    def locate(self, v: Sequence[int]) -> Tuple[int, LatticeVector]:
        """Returns (i, v - reps[i]); the difference lies in 2L."""
        i = self.index_of(v)
        return i, sub(v, self.reps[i])


def _rep_order(gram: GramMatrix, v: LatticeVector) -> Tuple:
    return gram.norm(v), tuple(-c for c in v)


def cosets_mod_2L(gram: GramLike) -> CosetTable:
    """
    Minimal-norm representatives of L/2L, ties broken toward the
    lexicographically largest coordinates, so (1, 0) is preferred to
    (-1, 0); reps[0] is the zero vector.
    """
    gram = as_gram(gram)
    keys = list(product((0, 1), repeat=gram.dim))
    bound = max(gram.norm(k) for k in keys)
    best: Dict[Tuple[int, ...], LatticeVector] = {}
    for v in vectors_up_to(gram, bound):
        key = coset_key(v)
        if key not in best or _rep_order(gram, v) < _rep_order(gram, best[key]):
            best[key] = v
    reps = sorted(best.values(), key=lambda v: _rep_order(gram, v))
    return CosetTable(reps, {coset_key(v): i for i, v in enumerate(reps)})


@dataclass
class RSublattice:
    """R = {a : <a, L> in 2Z} with a Z-basis and its cosets modulo 2L."""
    basis: List[LatticeVector]
    rep_indices: List[int]
    reps: List[LatticeVector] = field(default_factory=list)

    def contains(self, gram: GramMatrix, v: Sequence[int]) -> bool:
        return all(x % 2 == 0 for x in gram.pair_with_basis(v))


def compute_R(gram: GramLike, cosets: CosetTable = None) -> RSublattice:
    gram = as_gram(gram)
    cosets = cosets or cosets_mod_2L(gram)
    d = gram.dim
    G2 = gram.array % 2
    kernel = [k for k in product((0, 1), repeat=d) if not ((G2 @ np.array(k)) % 2).any()]
    generators = ([list(k) for k in kernel if any(k)]
                  + [[2 * x for x in gram.basis_vector(j)] for j in range(d)])
    hnf = hermite_normal_form(sympy.Matrix(generators).T)
    basis = [tuple(int(hnf[i, j]) for i in range(d)) for j in range(hnf.shape[1])
             if any(hnf[i, j] for i in range(d))]
    rep_indices = sorted(cosets.index_of(k) for k in kernel)
    logger.debug('R has basis %s and %d cosets mod 2L', basis, len(rep_indices))
    return RSublattice(basis, rep_indices, [cosets.reps[i] for i in rep_indices])


def _fingerprint(gram: GramMatrix, v: LatticeVector, shell: List[LatticeVector]) -> Tuple:
    return tuple(sorted(Counter(gram.inner(v, w) for w in shell).items()))


def apply_matrix(sigma: IntMatrix, v: Sequence[int]) -> LatticeVector:
    return tuple(sum(sigma[r][c] * v[c] for c in range(len(v))) for r in range(len(sigma)))


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in (np.array(a) @ np.array(b)))


def identity_matrix(d: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))


def is_isometry(gram: GramMatrix, sigma: IntMatrix) -> bool:
    s = np.array(sigma, dtype=np.int64)
    return bool((s.T @ gram.array @ s == gram.array).all())


def isometry_group(gram: GramLike) -> List[IntMatrix]:
    """
    O(L) by backtracking over images of basis vectors: the image of a_k runs
    over the shell of norm <a_k,a_k> with matching fingerprint and must
    pair correctly with the images already chosen.
    """
    gram = as_gram(gram)
    d = gram.dim
    if d > MAX_ISOMETRY_RANK:
        raise ValidationError(f'isometry search is limited to rank <= {MAX_ISOMETRY_RANK}')
    shells = {n: short_vectors(gram, n) for n in {gram[k, k] for k in range(d)}}
    shell = shells[min(shells)]
    candidates = []
    for k in range(d):
        target = _fingerprint(gram, gram.basis_vector(k), shell)
        candidates.append([v for v in shells[gram[k, k]]
                           if _fingerprint(gram, v, shell) == target])

    found = []
    images: List[LatticeVector] = []

    def extend(k: int):
        if k == d:
            found.append(tuple(tuple(images[c][r] for c in range(d)) for r in range(d)))
            return
        for v in candidates[k]:
            if all(gram.inner(v, images[j]) == gram[k, j] for j in range(k)):
                images.append(v)
                extend(k + 1)
                images.pop()

    extend(0)
    logger.info('isometry group of %s has order %d', gram.name or gram.entries, len(found))
    return sorted(found)
