"""The s-plectic group Ap(n) = {D : D^T s D = s} and its Lie algebra."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg as la
from .exceptions import DimensionError, SingularMatrixError, SplecticError, ToleranceExceeded
from .sform import standard_sform

__all__ = [
    "ApproxGroupElement",
    "BlockConditions",
    "GroupElement",
    "algebra_element",
    "antidiag_family",
    "ap1_generator_A",
    "ap1_generator_B",
    "check_block_conditions",
    "diag_family",
    "exp_into_group",
    "is_algebra_element",
    "is_ap_member",
    "lower_shear",
    "split_blocks",
    "upper_shear",
]


def _checked(d, n: int):
    d = la.matrix(d)
    if n < 1 or la.shape(d) != (2 * n, 2 * n):
        raise DimensionError(f"expected a {2 * n}x{2 * n} matrix, got {la.shape(d)}")
    return d


def split_blocks(d, n: int):
    """The n x n blocks ``(P, Q, R, S)`` of ``[[P, Q], [R, S]]``."""
    d = _checked(d, n)
    return (
        la.block(d, 0, n, 0, n),
        la.block(d, 0, n, n, 2 * n),
        la.block(d, n, 2 * n, 0, n),
        la.block(d, n, 2 * n, n, 2 * n),
    )


def is_ap_member(d, n: int) -> bool:
    d = _checked(d, n)
    s = standard_sform(n).matrix
    return la.matmul(la.matmul(la.transpose(d), s), d) == s


@dataclass(frozen=True)
class BlockConditions:
    rtp_antisymmetric: bool  # R^T P = -P^T R
    rtq_pts_identity: bool  # R^T Q + P^T S = I
    stq_antisymmetric: bool  # S^T Q = -Q^T S
    stp_qtr_identity: bool  # S^T P + Q^T R = I

    @property
    def all(self) -> bool:
        return (self.rtp_antisymmetric and self.rtq_pts_identity
                and self.stq_antisymmetric and self.stp_qtr_identity)

    def as_dict(self) -> dict:
        return {
            "R^T P = -P^T R": self.rtp_antisymmetric,
            "R^T Q + P^T S = I": self.rtq_pts_identity,
            "S^T Q = -Q^T S": self.stq_antisymmetric,
            "S^T P + Q^T R = I": self.stp_qtr_identity,
        }


def check_block_conditions(d, n: int) -> BlockConditions:
    p, q, r, s = split_blocks(d, n)
    t, mm = la.transpose, la.matmul
    eye = la.identity(n)
    return BlockConditions(
        rtp_antisymmetric=mm(t(r), p) == la.scale(-1, mm(t(p), r)),
        rtq_pts_identity=la.add(mm(t(r), q), mm(t(p), s)) == eye,
        stq_antisymmetric=mm(t(s), q) == la.scale(-1, mm(t(q), s)),
        stp_qtr_identity=la.add(mm(t(s), p), mm(t(q), r)) == eye,
    )


@dataclass(frozen=True)
class GroupElement:
    """An exact element of Ap(n)."""

    matrix: tuple

    def __post_init__(self):
        m = la.matrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        if len(m) % 2 or not la.is_square(m):
            raise DimensionError("Ap(n) elements are 2n x 2n")
        if not is_ap_member(m, len(m) // 2):
            raise SplecticError("matrix does not preserve the standard s-form")

    @property
    def n(self) -> int:
        return len(self.matrix) // 2

    @property
    def blocks(self):
        return split_blocks(self.matrix, self.n)

    @property
    def det(self) -> Fraction:
        return la.det(self.matrix)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(la.matmul(self.matrix, other.matrix))

    def inverse(self) -> "GroupElement":
        # D^T s D = s and s^2 = I give D^{-1} = s D^T s
        s = standard_sform(self.n).matrix
        return GroupElement(la.matmul(la.matmul(s, la.transpose(self.matrix)), s))


def _nonzero(x, name):
    x = la.as_fraction(x)
    if x == 0:
        raise SingularMatrixError(f"{name} must be nonzero")
    return x


def ap1_generator_A(q) -> GroupElement:
    q = _nonzero(q, "q")
    return GroupElement(((0, q), (1 / q, 0)))


def ap1_generator_B(p) -> GroupElement:
    p = _nonzero(p, "p")
    return GroupElement(((p, 0), (0, 1 / p)))


def diag_family(m) -> GroupElement:
    """``[[M, 0], [0, M^-T]]`` for invertible M."""
    m = la.matrix(m)
    mit = la.transpose(la.inverse(m))
    z = la.zeros(len(m))
    return GroupElement(la.from_blocks([[m, z], [z, mit]]))


def antidiag_family(q) -> GroupElement:
    """``[[0, Q], [Q^-T, 0]]`` for invertible Q."""
    q = la.matrix(q)
    qit = la.transpose(la.inverse(q))
    z = la.zeros(len(q))
    return GroupElement(la.from_blocks([[z, q], [qit, z]]))


def _antisymmetric(b):
    b = la.matrix(b)
    if la.transpose(b) != la.scale(-1, b):
        raise SplecticError("shear block must be antisymmetric")
    return b


def upper_shear(b) -> GroupElement:
    """``[[I, B], [0, I]]`` with B antisymmetric."""
    b = _antisymmetric(b)
    n = len(b)
    return GroupElement(la.from_blocks([[la.identity(n), b], [la.zeros(n), la.identity(n)]]))


def lower_shear(c) -> GroupElement:
    """``[[I, 0], [C, I]]`` with C antisymmetric."""
    c = _antisymmetric(c)
    n = len(c)
    return GroupElement(la.from_blocks([[la.identity(n), la.zeros(n)], [c, la.identity(n)]]))


def is_algebra_element(x, n: int) -> bool:
    """Exact check of ``X^T s + s X = 0``."""
    x = _checked(x, n)
    s = standard_sform(n).matrix
    return la.is_zero(la.add(la.matmul(la.transpose(x), s), la.matmul(s, x)))


def algebra_element(a, b, c) -> tuple:
    """Assemble ``[[A, B], [C, -A^T]]``; B and C must be antisymmetric."""
    a, b, c = la.matrix(a), _antisymmetric(b), _antisymmetric(c)
    return la.from_blocks([[a, b], [c, la.scale(-1, la.transpose(a))]])


@dataclass(frozen=True)
class ApproxGroupElement:
    matrix: np.ndarray
    residual: float


def exp_into_group(x, tolerance: float = 1e-10) -> ApproxGroupElement:
    """Floating-point exponential of an algebra element, with a residual guarantee."""
    from scipy.linalg import expm

    xm = la.matrix(x)
    n = len(xm) // 2
    if not is_algebra_element(xm, n):
        raise SplecticError("not an element of the Lie algebra of Ap(n)")
    e = expm(la.to_float(xm))
    s = la.to_float(standard_sform(n).matrix)
    residual = float(np.max(np.abs(e.T @ s @ e - s)))
    if residual > tolerance:
        raise ToleranceExceeded(f"residual {residual:.3e} exceeds tolerance {tolerance:.3e}", residual)
    return ApproxGroupElement(e, residual)
