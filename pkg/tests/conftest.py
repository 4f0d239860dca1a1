import itertools
import os
import random
from fractions import Fraction

import pytest
import sympy as sp

from splectic import linalg as la
from splectic.ap_group import GroupElement, antidiag_family, diag_family, lower_shear, upper_shear
from splectic.sform import BilinearForm

SEED = int(os.environ.get("SPLECTIC_SEED", "20261015"))

X1, X2, P1, P2 = sp.symbols("x1 x2 p1 p2")
Z = (X1, X2, P1, P2)


@pytest.fixture
def rng():
    return random.Random(SEED)


def rand_fraction(rng, bound=6, den=4):
    return Fraction(rng.randint(-bound, bound), rng.randint(1, den))


def rand_matrix(rng, r, c=None, bound=4, den=1):
    c = r if c is None else c
    return la.matrix([[rand_fraction(rng, bound, den) for _ in range(c)] for _ in range(r)])


def rand_invertible(rng, n, bound=3, den=1):
    while True:
        m = rand_matrix(rng, n, bound=bound, den=den)
        if la.det(m) != 0:
            return m


def rand_antisymmetric(rng, n, bound=3):
    b = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = rand_fraction(rng, bound, 2)
            b[i][j], b[j][i] = v, -v
    return la.matrix(b)


def sympy_quadratic(obs):
    """Observable as a sympy expression, built from its matrix entries only."""
    z = sp.Matrix(Z)
    g = sp.Matrix([[sp.Rational(x.numerator, x.denominator) for x in row] for row in obs.gram])
    return sp.expand((z.T * g * z)[0])


def sympy_bracket(f, g, metric_matrix):
    """Termwise expansion of grad(f)^T W grad(g), W = [[0, g^-1], [-g^-1, 0]]."""
    gm = sp.Matrix([[sp.Rational(x.numerator, x.denominator) for x in row] for row in metric_matrix])
    gi = gm.inv()
    w = sp.zeros(4, 4)
    w[0:2, 2:4] = gi
    w[2:4, 0:2] = -gi
    return sp.expand(sum(sp.diff(f, Z[i]) * w[i, j] * sp.diff(g, Z[j]) for i in range(4) for j in range(4)))


def congruent(form, m):
    return BilinearForm(la.matmul(la.matmul(la.transpose(m), form.matrix), m))


def all_small_subspaces(n, max_span):
    vecs = [v for v in itertools.product((-1, 0, 1), repeat=2 * n) if any(v)]
    for k in range(1, max_span + 1):
        for combo in itertools.combinations(vecs, k):
            yield combo


def oracle_subspace_label(form, spanning):
    """Label from the definitions, with sympy doing the linear algebra."""
    s = sp.Matrix(form.matrix)
    w = sp.Matrix(spanning)
    wr = w.rank()
    perp = (w * s).nullspace()
    dim = len(form.matrix)
    perp_m = sp.Matrix.hstack(*perp).T if perp else sp.zeros(0, dim)
    pr = len(perp)
    both = sp.Matrix.vstack(w, perp_m).rank() if pr else wr
    w_in_perp = both == pr
    perp_in_w = both == wr
    if w_in_perp and perp_in_w:
        return "lagrangian"
    if w_in_perp:
        return "isotropic"
    if perp_in_w:
        return "coisotropic"
    if 0 < wr < dim and both == wr + pr:
        return "symplectic-like"
    return "none"


def random_member(rng, n):
    """Product of a few random elements from the exact block families."""
    g = GroupElement(la.identity(2 * n))
    for _ in range(rng.randint(1, 4)):
        kind = rng.choice(["diag", "antidiag", "upper", "lower"])
        if kind == "diag":
            g = g @ diag_family(rand_invertible(rng, n, bound=2))
        elif kind == "antidiag":
            g = g @ antidiag_family(rand_invertible(rng, n, bound=2))
        elif kind == "upper":
            g = g @ upper_shear(rand_antisymmetric(rng, n))
        else:
            g = g @ lower_shear(rand_antisymmetric(rng, n))
    return g


ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
