"""Exact Poisson algebra of quadratic observables of the D=2 oscillator.

Phase-space coordinates are ``z = (x1, x2, p1, p2)`` in dualized form.  A
quadratic observable is stored as a symmetric 4x4 rational matrix ``Q`` with
``f(z) = z^T Q z``.  The bracket attached to a configuration metric ``g`` is
``{f, h} = grad(f)^T W grad(h)`` with ``W = [[0, g^-1], [-g^-1, 0]]``.
"""
from __future__ import annotations

import enum
import itertools
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg as la
from .exceptions import NotClosedError, SplecticError
from .mechanics import Metric, OscillatorParams, PhasePoint, symplectic_form
from .sform import congruence_diagonalize

__all__ = [
    "AlgebraType",
    "BracketStructure",
    "GEOMETRIES",
    "IdentityReport",
    "Polynomial",
    "QuadraticObservable",
    "check_identity",
    "classify_algebra",
    "conserved_under",
    "evaluate_observable",
    "geometry_hamiltonian",
    "hamiltonian_observable",
    "jhf_components",
    "literal_jhf_components",
    "poisson_bracket",
    "structure_constants",
]

NVARS = 4
VARIABLES = ("x1", "x2", "p1", "p2")


@dataclass(frozen=True)
class QuadraticObservable:
    gram: tuple
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        g = la.matrix(self.gram)
        if la.shape(g) != (NVARS, NVARS):
            raise SplecticError("quadratic observables are 4x4")
        if not la.is_symmetric(g):
            raise SplecticError("observable matrix must be symmetric")
        object.__setattr__(self, "gram", g)

    @classmethod
    def zero(cls) -> "QuadraticObservable":
        return cls(la.zeros(NVARS))

    @classmethod
    def from_coefficients(cls, coeffs: dict, label: str | None = None) -> "QuadraticObservable":
        """Build from monomial coefficients, e.g. ``{("x1", "p2"): 1, ("x2", "x2"): 3}``."""
        g = [[Fraction(0)] * NVARS for _ in range(NVARS)]
        for (a, b), c in coeffs.items():
            i, j = VARIABLES.index(a), VARIABLES.index(b)
            c = la.as_fraction(c)
            if i == j:
                g[i][i] += c
            else:
                g[i][j] += c / 2
                g[j][i] += c / 2
        return cls(g, label)

    def is_zero(self) -> bool:
        return la.is_zero(self.gram)

    def __add__(self, other):
        return QuadraticObservable(la.add(self.gram, other.gram))

    def __sub__(self, other):
        return QuadraticObservable(la.sub(self.gram, other.gram))

    def __neg__(self):
        return QuadraticObservable(la.scale(-1, self.gram))

    def __mul__(self, c):
        return QuadraticObservable(la.scale(c, self.gram))

    __rmul__ = __mul__

    def __call__(self, z) -> float:
        z = np.asarray(z, dtype=float)
        return float(z @ la.to_float(self.gram) @ z)

    def flat(self) -> tuple:
        """Upper-triangle coefficients; a coordinate vector in the 10-dim space of quadratics."""
        return tuple(self.gram[i][j] for i in range(NVARS) for j in range(i, NVARS))

    def to_polynomial(self) -> "Polynomial":
        terms = defaultdict(Fraction)
        for i in range(NVARS):
            for j in range(NVARS):
                if self.gram[i][j]:
                    e = [0] * NVARS
                    e[i] += 1
                    e[j] += 1
                    terms[tuple(e)] += self.gram[i][j]
        return Polynomial(dict(terms))

    def __str__(self):
        return str(self.to_polynomial())


class Polynomial:
    """Sparse polynomial in ``(x1, x2, p1, p2)`` with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {e: Fraction(c) for e, c in (terms or {}).items() if c != 0}

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial(out)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = la.as_fraction(other)
            return Polynomial({e: c * v for e, v in self.terms.items()})
        out = defaultdict(Fraction)
        for (e1, c1), (e2, c2) in itertools.product(self.terms.items(), other.terms.items()):
            out[tuple(a + b for a, b in zip(e1, e2))] += c1 * c2
        return Polynomial(dict(out))

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def derivative(self, k: int) -> "Polynomial":
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                d = list(e)
                d[k] -= 1
                out[tuple(d)] = c * e[k]
        return Polynomial(out)

    def __call__(self, z) -> float:
        return float(sum(float(c) * np.prod([zi**k for zi, k in zip(z, e)]) for e, c in self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"{v}^{k}" if k > 1 else v for v, k in zip(VARIABLES, e) if k)
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)

    def bracket(self, other: "Polynomial", metric: Metric) -> "Polynomial":
        w = symplectic_form(metric)
        out = Polynomial()
        for i, j in itertools.product(range(NVARS), repeat=2):
            if w[i][j]:
                out = out + self.derivative(i) * other.derivative(j) * w[i][j]
        return out


def _params_exact(params: OscillatorParams) -> tuple[Fraction, Fraction]:
    return la.as_fraction(params.mass), la.as_fraction(params.omega)


def jhf_components(params: OscillatorParams) -> tuple[QuadraticObservable, ...]:
    """The four quadratic integrals ``(H0, H1, H2, H3)``.

    The potential parts carry ``m w^2 / 2`` so that ``H0`` is the Euclidean
    Hamiltonian and ``H0^2 - H1^2 - H2^2 - H3^2`` vanishes identically.
    """
    m, w = _params_exact(params)
    k = m * w * w
    half = Fraction(1, 2)
    h0 = {("p1", "p1"): half / m, ("p2", "p2"): half / m, ("x1", "x1"): half * k, ("x2", "x2"): half * k}
    h1 = {("p1", "p2"): 1 / m, ("x1", "x2"): k}
    h2 = {("p2", "p2"): half / m, ("p1", "p1"): -half / m, ("x2", "x2"): half * k, ("x1", "x1"): -half * k}
    h3 = {("x1", "p2"): w, ("x2", "p1"): -w}
    return tuple(
        QuadraticObservable.from_coefficients(c, f"H{i}") for i, c in enumerate((h0, h1, h2, h3))
    )


def literal_jhf_components(params: OscillatorParams) -> tuple[QuadraticObservable, ...]:
    """The same four functions with the potential coefficients taken as ``m w^2`` (no 1/2)."""
    m, w = _params_exact(params)
    k = m * w * w
    half = Fraction(1, 2)
    h0 = {("p1", "p1"): half / m, ("p2", "p2"): half / m, ("x1", "x1"): k, ("x2", "x2"): k}
    h1 = {("p1", "p2"): 1 / m, ("x1", "x2"): k}
    h2 = {("p2", "p2"): half / m, ("p1", "p1"): -half / m, ("x2", "x2"): k, ("x1", "x1"): -k}
    h3 = {("x1", "p2"): w, ("x2", "p1"): -w}
    return tuple(
        QuadraticObservable.from_coefficients(c, f"H{i}") for i, c in enumerate((h0, h1, h2, h3))
    )


def hamiltonian_observable(params: OscillatorParams, metric: Metric) -> QuadraticObservable:
    """``(1/2m) g^-1(p, p) + (m w^2 / 2) g^-1(x, x)`` as a quadratic observable."""
    m, w = _params_exact(params)
    gi = metric.inverse
    z = la.zeros(2)
    gram = la.from_blocks([[la.scale(m * w * w / 2, gi), z], [z, la.scale(1 / (2 * m), gi)]])
    return QuadraticObservable(gram, f"H[{metric.kind}]")


def evaluate_observable(f: QuadraticObservable, point: PhasePoint) -> float:
    return f(point.z)


def poisson_bracket(f: QuadraticObservable, g: QuadraticObservable, metric: Metric) -> QuadraticObservable:
    # grad f = 2 A z, so {f, g} = 4 z^T A W B z; symmetrizing gives 2 (A W B - B W A)
    w = symplectic_form(metric)
    a, b = f.gram, g.gram
    awb = la.matmul(la.matmul(a, w), b)
    # A, B symmetric and W antisymmetric, so B W A = -(A W B)^T
    return QuadraticObservable(la.scale(2, la.add(awb, la.transpose(awb))))


# -- geometries ---------------------------------------------------------------

@dataclass(frozen=True)
class Geometry:
    name: str
    metric_kind: str
    hamiltonian: int  # index into (H0, H1, H2, H3)
    triple: tuple[int, int, int]
    expected_algebra: str

    @property
    def metric(self) -> Metric:
        return Metric.named(self.metric_kind)


GEOMETRIES = {
    "euclidean": Geometry("euclidean", "euclidean", 0, (1, 2, 3), "su2"),
    "hyperbolic": Geometry("hyperbolic", "hyperbolic", 2, (0, 1, 3), "su11"),
    "s": Geometry("s", "s", 1, (0, 2, 3), "su11"),
}


def geometry_hamiltonian(metric: Metric, params: OscillatorParams) -> QuadraticObservable:
    """``H0``, ``H2`` or ``H1`` for the Euclidean, hyperbolic and s metric; generic form otherwise."""
    if metric.kind in GEOMETRIES:
        return jhf_components(params)[GEOMETRIES[metric.kind].hamiltonian]
    return hamiltonian_observable(params, metric)


def conserved_under(f: QuadraticObservable, metric: Metric, params: OscillatorParams) -> bool:
    return poisson_bracket(f, geometry_hamiltonian(metric, params), metric).is_zero()


# -- quadratic identity ----------------------------------------------------------

@dataclass(frozen=True)
class IdentityReport:
    symbolic_zero: bool
    polynomial: str
    samples: int
    max_residual: float
    max_relative_residual: float

    def as_dict(self) -> dict:
        return {
            "symbolic_zero": self.symbolic_zero,
            "polynomial": self.polynomial,
            "samples": self.samples,
            "max_residual": self.max_residual,
            "max_relative_residual": self.max_relative_residual,
        }


def identity_polynomial(components: Sequence[QuadraticObservable]) -> Polynomial:
    """``H0^2 - H1^2 - H2^2 - H3^2`` as an exact degree-4 polynomial."""
    p = [h.to_polynomial() for h in components]
    return p[0] * p[0] - p[1] * p[1] - p[2] * p[2] - p[3] * p[3]


def check_identity(
    params: OscillatorParams,
    samples: int = 1000,
    seed: int = 0,
    components: Sequence[QuadraticObservable] | None = None,
) -> IdentityReport:
    """Check ``H0^2 - H1^2 - H2^2 - H3^2 = 0`` symbolically and at random points.

    The relative residual is measured against ``H0^2 + H1^2 + H2^2 + H3^2``.
    """
    comps = jhf_components(params) if components is None else components
    poly = identity_polynomial(comps)
    rng = np.random.default_rng(seed)
    mats = np.array([la.to_float(h.gram) for h in comps])
    max_abs = max_rel = 0.0
    for _ in range(samples):
        z = rng.uniform(-2, 2, NVARS)
        vals = np.einsum("i,kij,j->k", z, mats, z)
        res = abs(vals[0] ** 2 - vals[1] ** 2 - vals[2] ** 2 - vals[3] ** 2)
        scale = float(np.sum(vals**2)) or 1.0
        max_abs = max(max_abs, float(res))
        max_rel = max(max_rel, float(res) / scale)
    return IdentityReport(poly.is_zero(), str(poly), samples, max_abs, max_rel)


# -- structure constants and classification ---------------------------------------

class AlgebraType(str, enum.Enum):
    SU2 = "su2"
    SU11 = "su11"
    ABELIAN = "abelian"
    OTHER = "other"


@dataclass(frozen=True)
class BracketStructure:
    """``{e_i, e_j} = sum_k constants[i][j][k] e_k`` and the Killing form."""

    basis: tuple
    metric: Metric
    constants: tuple
    killing: tuple

    @property
    def labels(self) -> list[str]:
        return [b.label or f"e{i}" for i, b in enumerate(self.basis)]

    def jacobi_holds(self) -> bool:
        c = self.constants
        d = len(c)
        for i, j, k in itertools.combinations(range(d), 3):
            for m in range(d):
                total = sum(
                    c[j][k][l] * c[i][l][m] + c[k][i][l] * c[j][l][m] + c[i][j][l] * c[k][l][m]
                    for l in range(d)
                )
                if total != 0:
                    return False
        return True

    def antisymmetric(self) -> bool:
        c = self.constants
        d = len(c)
        return all(c[i][j][k] == -c[j][i][k] for i in range(d) for j in range(d) for k in range(d))

    def brackets(self) -> dict[str, dict[str, str]]:
        out = {}
        labels = self.labels
        for i, j in itertools.combinations(range(len(self.basis)), 2):
            out[f"{{{labels[i]},{labels[j]}}}"] = {
                labels[k]: str(c) for k, c in enumerate(self.constants[i][j]) if c != 0
            }
        return out

    def as_dict(self) -> dict:
        return {
            "metric": self.metric.kind,
            "basis": self.labels,
            "brackets": self.brackets(),
            "constants": [[[str(c) for c in cij] for cij in ci] for ci in self.constants],
            "killing": [[str(x) for x in row] for row in self.killing],
            "jacobi": self.jacobi_holds(),
        }


def _coordinates(target: tuple, columns: Sequence[tuple]) -> tuple | None:
    """Exact solution of ``sum_k x_k columns[k] = target`` or None."""
    d = len(columns)
    aug = tuple(tuple(col[r] for col in columns) + (target[r],) for r in range(len(target)))
    red, pivots = la.rref(aug)
    if d in pivots:
        return None
    x = [Fraction(0)] * d
    for row, p in zip(red, pivots):
        x[p] = row[d]
    return tuple(x)


def structure_constants(basis: Sequence[QuadraticObservable], metric: Metric) -> BracketStructure:
    basis = tuple(basis)
    cols = [b.flat() for b in basis]
    if la.rank(tuple(cols)) != len(basis):
        raise SplecticError("basis observables are linearly dependent")
    d = len(basis)
    zero = (Fraction(0),) * d
    c = [[zero] * d for _ in range(d)]
    for i, j in itertools.combinations(range(d), 2):
        br = poisson_bracket(basis[i], basis[j], metric)
        coords = _coordinates(br.flat(), cols)
        if coords is None:
            li, lj = basis[i].label or f"e{i}", basis[j].label or f"e{j}"
            raise NotClosedError(f"{{{li},{lj}}} = {br} is not in the span of the basis", br, (i, j))
        c[i][j] = coords
        c[j][i] = tuple(-x for x in coords)
    constants = tuple(tuple(row) for row in c)
    killing = tuple(
        tuple(
            sum((constants[i][b][a] * constants[j][a][b] for a in range(d) for b in range(d)), Fraction(0))
            for j in range(d)
        )
        for i in range(d)
    )
    return BracketStructure(basis, metric, constants, killing)


def classify_algebra(bs: BracketStructure) -> AlgebraType:
    """Killing-form classification of a 3-dimensional real Lie algebra."""
    if all(x == 0 for ci in bs.constants for cij in ci for x in cij):
        return AlgebraType.ABELIAN
    d, _ = congruence_diagonalize(bs.killing)
    if any(x == 0 for x in d):
        return AlgebraType.OTHER
    if all(x < 0 for x in d):
        return AlgebraType.SU2
    if any(x > 0 for x in d) and any(x < 0 for x in d):
        return AlgebraType.SU11
    return AlgebraType.OTHER


def random_quadratic(rng: random.Random, bound: int = 5) -> QuadraticObservable:
    """Random symmetric 4x4 matrix with small rational entries."""
    g = [[Fraction(0)] * NVARS for _ in range(NVARS)]
    for i in range(NVARS):
        for j in range(i, NVARS):
            g[i][j] = g[j][i] = Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
    return QuadraticObservable(g)
