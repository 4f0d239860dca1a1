"""Symmetric bilinear forms, s-forms and s-spaces over the rationals.

An *s-form* is a symmetric nondegenerate form on an even-dimensional space
that admits a basis of null vectors.  An *s-space* couples such a form with
one designated admissible basis.  All arithmetic is exact.
"""
from __future__ import annotations

import enum
import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .exceptions import (
    DegenerateFormError,
    DimensionError,
    NoRationalNullVectorError,
    NotAnSSpaceError,
    NotSymmetricError,
)

__all__ = [
    "BilinearForm",
    "SSpace",
    "Subspace",
    "SubspaceType",
    "block_traces",
    "classify_subspace",
    "congruence_diagonalize",
    "evaluate",
    "gram_matrix",
    "is_admissible_basis",
    "orthogonal_complement",
    "permanent2",
    "signature",
    "standard_sform",
    "standardize",
    "verify_isometry",
]


@dataclass(frozen=True)
class BilinearForm:
    """Exact symmetric nondegenerate form on an even-dimensional space."""

    matrix: tuple

    def __post_init__(self):
        m = la.matrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        if not m or not la.is_square(m):
            raise DimensionError("form matrix must be square and non-empty")
        if len(m) % 2:
            raise DimensionError(f"form dimension must be even, got {len(m)}")
        if not la.is_symmetric(m):
            raise NotSymmetricError("form matrix is not symmetric")
        if la.det(m) == 0:
            raise DegenerateFormError("form is degenerate (determinant 0)")

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @property
    def n(self) -> int:
        return self.dim // 2

    def __call__(self, v, w) -> Fraction:
        return evaluate(self, v, w)


def _as_form(form) -> BilinearForm:
    return form if isinstance(form, BilinearForm) else BilinearForm(form)


def evaluate(form: BilinearForm, v: Sequence, w: Sequence) -> Fraction:
    """``v^T S w`` for the form's matrix ``S``."""
    m = _as_form(form).matrix
    if len(v) != len(m) or len(w) != len(m):
        raise DimensionError(f"vectors of length {len(v)}, {len(w)} for a form of dimension {len(m)}")
    return la.dot(la.vector(v), la.matvec(m, la.vector(w)))


def standard_sform(n: int) -> BilinearForm:
    """The block form ``[[0, I_n], [I_n, 0]]``."""
    if n < 1:
        raise DimensionError("n must be at least 1")
    z, i = la.zeros(n), la.identity(n)
    return BilinearForm(la.from_blocks([[z, i], [i, z]]))


def permanent2(v: Sequence, w: Sequence) -> Fraction:
    """Permanent of the 2x2 matrix with columns ``v`` and ``w``."""
    if len(v) != 2 or len(w) != 2:
        raise DimensionError("permanent2 takes two vectors of length 2")
    v, w = la.vector(v), la.vector(w)
    return v[0] * w[1] + v[1] * w[0]


def gram_matrix(form: BilinearForm, basis: Sequence[Sequence]) -> tuple:
    """Gram matrix ``[s(b_i, b_j)]`` of the form on the given vectors."""
    m = _as_form(form).matrix
    vs = [la.vector(b) for b in basis]
    images = [la.matvec(m, b) for b in vs]
    return tuple(tuple(la.dot(bi, sj) for sj in images) for bi in vs)


def is_admissible_basis(form: BilinearForm, basis: Sequence[Sequence]) -> bool:
    form = _as_form(form)
    if len(basis) != form.dim or any(len(b) != form.dim for b in basis):
        raise DimensionError(f"an admissible basis needs {form.dim} vectors of length {form.dim}")
    vs = tuple(la.vector(b) for b in basis)
    if la.rank(vs) != form.dim:
        return False
    return all(evaluate(form, b, b) == 0 for b in vs)


def block_traces(form) -> list[Fraction]:
    """Traces of the leading principal k x k blocks, k = 1..dim."""
    m = form.matrix if isinstance(form, BilinearForm) else la.matrix(form)
    return list(itertools.accumulate(m[k][k] for k in range(len(m))))


def congruence_diagonalize(gram) -> tuple[list[Fraction], tuple]:
    """Diagonalize a symmetric matrix by congruence.

    Returns ``(d, P)`` with ``P A P^T = diag(d)``; the rows of ``P`` are the
    new basis vectors in the old coordinates.  Zero pivots are handled by
    symmetric row/column exchanges, or by adding a row/column with a nonzero
    off-diagonal entry when the whole remaining diagonal vanishes.
    """
    a = [list(r) for r in la.matrix(gram)]
    n = len(a)
    p = [list(r) for r in la.identity(n)]

    def swap(i, j):
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]
        p[i], p[j] = p[j], p[i]

    def add_to(k, j, f):
        # row_k += f row_j, then col_k += f col_j
        a[k] = [x + f * y for x, y in zip(a[k], a[j])]
        for row in a:
            row[k] += f * row[j]
        p[k] = [x + f * y for x, y in zip(p[k], p[j])]

    d = []
    for k in range(n):
        if a[k][k] == 0:
            i = next((i for i in range(k + 1, n) if a[i][i] != 0), None)
            if i is not None:
                swap(k, i)
            else:
                pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j] != 0), None)
                if pair is None:
                    d.extend([Fraction(0)] * (n - k))
                    break
                i, j = pair
                if i != k:
                    swap(k, i)
                    if j == k:
                        j = i
                add_to(k, j, Fraction(1))
        piv = a[k][k]
        for i in range(k + 1, n):
            if a[i][k] != 0:
                add_to(i, k, -a[i][k] / piv)
        d.append(piv)
    return d, tuple(tuple(r) for r in p)


def signature(form) -> tuple[int, int]:
    """Numbers of positive and negative squares (Sylvester's law of inertia)."""
    m = form.matrix if isinstance(form, BilinearForm) else la.matrix(form)
    if not la.is_symmetric(m):
        raise NotSymmetricError("signature needs a symmetric matrix")
    d, _ = congruence_diagonalize(m)
    if any(x == 0 for x in d):
        raise DegenerateFormError("form is degenerate")
    pos = sum(1 for x in d if x > 0)
    return pos, len(d) - pos


def verify_isometry(phi, form_a, form_b) -> bool:
    """True iff ``phi^T B phi == A``, i.e. ``s_b(phi v, phi w) == s_a(v, w)``."""
    phi = la.matrix(phi)
    a, b = _as_form(form_a).matrix, _as_form(form_b).matrix
    if la.shape(phi) != (len(b), len(a)):
        raise DimensionError(f"map of shape {la.shape(phi)} between forms of dims {len(a)}, {len(b)}")
    return la.matmul(la.matmul(la.transpose(phi), b), phi) == a


# -- standardization --------------------------------------------------------

def _legendre(coeffs):
    """Nonzero integer solution of a x^2 + b y^2 + c z^2 = 0, or None."""
    from sympy import Integer, symbols
    from sympy.solvers.diophantine.diophantine import diop_ternary_quadratic_normal

    lcm = math.lcm(*(c.denominator for c in coeffs))
    ints = [int(c * lcm) for c in coeffs]
    if any(c == 0 for c in ints):
        return None
    if all(c > 0 for c in ints) or all(c < 0 for c in ints):
        return None
    x, y, z = symbols("x y z", integer=True)
    sol = diop_ternary_quadratic_normal(
        Integer(ints[0]) * x**2 + Integer(ints[1]) * y**2 + Integer(ints[2]) * z**2
    )
    if sol[0] is None:
        return None
    sol = tuple(int(s) for s in sol)
    # sympy occasionally returns a non-solution for non-squarefree input
    if sum(c * s * s for c, s in zip(ints, sol)) != 0 or not any(sol):
        return None
    return sol


def _find_null_vector(form: BilinearForm, basis: list) -> tuple:
    q = lambda v: evaluate(form, v, v)  # noqa: E731

    for b in basis:
        if q(b) == 0:
            return b
    for bi, bj in itertools.combinations(basis, 2):
        for cand in (la.vadd(bi, bj), la.vadd(bi, la.vscale(-1, bj))):
            if q(cand) == 0:
                return cand
    # q(bi + t bj) = a + 2ct + dt^2 has a rational root iff c^2 - ad is a square
    for bi, bj in itertools.permutations(basis, 2):
        a, c, d = q(bi), evaluate(form, bi, bj), q(bj)
        r = la.rational_sqrt(c * c - a * d)
        if r is not None:
            return la.vadd(bi, la.vscale((-c + r) / d, bj))

    gram = gram_matrix(form, basis)
    diag, p = congruence_diagonalize(gram)
    ortho = [_combine(row, basis) for row in p]
    for i, j in itertools.combinations(range(len(diag)), 2):
        r = la.rational_sqrt(-diag[i] / diag[j])
        if r is not None:
            return la.vadd(ortho[i], la.vscale(r, ortho[j]))
    for idx in itertools.combinations(range(len(diag)), 3):
        sol = _legendre([diag[k] for k in idx])
        if sol is not None:
            return _combine(sol, [ortho[k] for k in idx])
    # larger spaces: fold the tail into one coefficient and retry as a ternary
    rng = random.Random(len(diag))
    k = len(diag)
    for _ in range(400):
        i, j = rng.sample(range(k), 2)
        rest = [t for t in range(k) if t not in (i, j)]
        ys = [rng.randint(-3, 3) for _ in rest]
        if not any(ys):
            continue
        tail = la.vector([0] * len(ortho[0]))
        c = Fraction(0)
        for t, y in zip(rest, ys):
            tail = la.vadd(tail, la.vscale(y, ortho[t]))
            c += diag[t] * y * y
        if c == 0:
            return tail
        sol = _legendre([diag[i], diag[j], c])
        if sol is not None:
            return _combine(sol, [ortho[i], ortho[j], tail])
    raise NoRationalNullVectorError("could not find a rational null vector for this form")


def _combine(coeffs, vectors) -> tuple:
    out = la.vector([0] * len(vectors[0]))
    for c, v in zip(coeffs, vectors):
        out = la.vadd(out, la.vscale(c, v))
    return out


def standardize(form) -> tuple[tuple, ...]:
    """Return a basis ``(u_1..u_n, w_1..w_n)`` whose Gram matrix is the standard s-form.

    Hyperbolic pairs are split off one at a time: find a null vector ``u``,
    a partner ``w`` with ``s(u, w) = 1``, make the partner null, and continue
    in the orthogonal complement of the pair.
    """
    form = _as_form(form)
    n = form.n
    sig = signature(form)
    if sig != (n, n):
        raise NotAnSSpaceError(f"signature {sig} is not ({n}, {n})")
    current = list(la.identity(form.dim))
    us, ws = [], []
    while current:
        u = _find_null_vector(form, current)
        b = next(b for b in current if evaluate(form, u, b) != 0)
        w = la.vscale(1 / evaluate(form, u, b), b)
        w = la.vadd(w, la.vscale(-evaluate(form, w, w) / 2, u))
        us.append(u)
        ws.append(w)
        projected = [
            la.vadd(v, la.vadd(la.vscale(-evaluate(form, v, w), u), la.vscale(-evaluate(form, v, u), w)))
            for v in current
        ]
        current = [v for v in la.independent_subset(projected) if not la.is_zero(v)]
        assert len(current) == form.dim - 2 * len(us)
    return tuple(us + ws)


# -- subspaces ---------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """Span of a set of vectors in a space of dimension ``ambient_dim``."""

    spanning_vectors: tuple
    ambient_dim: int
    _reduced: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        vs = tuple(la.vector(v) for v in self.spanning_vectors)
        if any(len(v) != self.ambient_dim for v in vs):
            raise DimensionError(f"spanning vectors must have length {self.ambient_dim}")
        if not self._reduced:
            vs = tuple(v for v in la.independent_subset(vs) if not la.is_zero(v))
        object.__setattr__(self, "spanning_vectors", vs)

    @classmethod
    def span(cls, *vectors, ambient_dim: int | None = None) -> "Subspace":
        if ambient_dim is None:
            ambient_dim = len(vectors[0])
        return cls(tuple(vectors), ambient_dim)

    @classmethod
    def full(cls, dim: int) -> "Subspace":
        return cls(la.identity(dim), dim)

    @property
    def dim(self) -> int:
        return len(self.spanning_vectors)

    def contains(self, other: "Subspace") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise DimensionError("subspaces live in different spaces")
        if other.dim == 0:
            return True
        return la.rank(self.spanning_vectors + other.spanning_vectors) == self.dim

    def same_as(self, other: "Subspace") -> bool:
        return self.dim == other.dim and self.contains(other)

    def intersection_dim(self, other: "Subspace") -> int:
        union = self.spanning_vectors + other.spanning_vectors
        return self.dim + other.dim - (la.rank(union) if union else 0)


class SubspaceType(str, enum.Enum):
    LAGRANGIAN = "lagrangian"
    ISOTROPIC = "isotropic"
    COISOTROPIC = "coisotropic"
    SYMPLECTIC_LIKE = "symplectic-like"
    NONE = "none"


def orthogonal_complement(form, w: Subspace) -> Subspace:
    form = _as_form(form)
    if w.ambient_dim != form.dim:
        raise DimensionError(f"subspace of a {w.ambient_dim}-space, form of dimension {form.dim}")
    constraints = tuple(la.matvec(form.matrix, v) for v in w.spanning_vectors)
    return Subspace(la.nullspace(constraints, form.dim), form.dim, _reduced=True)


def classify_subspace(form, w: Subspace) -> SubspaceType:
    perp = orthogonal_complement(form, w)
    w_in_perp = perp.contains(w)
    perp_in_w = w.contains(perp)
    if w_in_perp and perp_in_w:
        return SubspaceType.LAGRANGIAN
    if w_in_perp:
        return SubspaceType.ISOTROPIC
    if perp_in_w:
        return SubspaceType.COISOTROPIC
    if 0 < w.dim < w.ambient_dim and w.intersection_dim(perp) == 0:
        return SubspaceType.SYMPLECTIC_LIKE
    return SubspaceType.NONE


# -- s-spaces ----------------------------------------------------------------

@dataclass(frozen=True)
class SSpace:
    """A form of signature (n, n) together with an admissible basis."""

    form: BilinearForm
    admissible_basis: tuple

    def __post_init__(self):
        form = _as_form(self.form)
        basis = tuple(la.vector(b) for b in self.admissible_basis)
        object.__setattr__(self, "form", form)
        object.__setattr__(self, "admissible_basis", basis)
        if signature(form) != (form.n, form.n):
            raise NotAnSSpaceError(f"signature {signature(form)} is not ({form.n}, {form.n})")
        if not is_admissible_basis(form, basis):
            raise NotAnSSpaceError("basis is not admissible (dependent, or a vector is not null)")

    @classmethod
    def standard(cls, n: int) -> "SSpace":
        return cls(standard_sform(n), la.identity(2 * n))

    @classmethod
    def from_form(cls, form) -> "SSpace":
        return cls(_as_form(form), standardize(form))

    @property
    def dim(self) -> int:
        return self.form.dim

    def gram(self) -> tuple:
        return gram_matrix(self.form, self.admissible_basis)

    def block_traces(self) -> list[Fraction]:
        return block_traces(self.gram())
