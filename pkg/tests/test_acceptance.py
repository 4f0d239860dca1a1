"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line; the lines are echoed in the terminal
summary so they survive output capturing.
"""
import math
import time
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

import conftest
from conftest import (
    P1,
    P2,
    X1,
    X2,
    all_small_subspaces,
    congruent,
    oracle_subspace_label,
    rand_invertible,
    rand_matrix,
    random_member,
    sympy_bracket,
    sympy_quadratic,
)
from splectic import linalg as la
from splectic.ap_group import ap1_generator_A, ap1_generator_B, check_block_conditions, is_ap_member
from splectic.exceptions import NotAnSSpaceError
from splectic.mechanics import Metric, OscillatorParams, PhasePoint, simulate, symplectic_form
from splectic.observables import (
    GEOMETRIES,
    check_identity,
    classify_algebra,
    identity_polynomial,
    jhf_components,
    literal_jhf_components,
    poisson_bracket,
    random_quadratic,
    structure_constants,
)
from splectic.sform import (
    BilinearForm,
    Subspace,
    classify_subspace,
    gram_matrix,
    is_admissible_basis,
    standard_sform,
    standardize,
)

METRICS = [Metric.euclidean(), Metric.hyperbolic(), Metric.sform()]


def verdict(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    conftest.ACCEPTANCE[number] = line
    print(line)
    assert ok, line


def rand_rational(rng, lo=1, hi=12):
    return Fraction(rng.randint(lo, hi), rng.randint(1, hi))


def rand_nonzero(rng):
    return Fraction(rng.choice([-1, 1]) * rng.randint(1, 50), rng.randint(1, 50))


# -- 1 ----------------------------------------------------------------------------------

def test_criterion_1_ap1_structure(rng):
    p, q, r, s = sp.symbols("p q r s")
    d = sp.Matrix([[p, q], [r, s]])
    sf = sp.Matrix([[0, 1], [1, 0]])
    sols = sp.solve(list(d.T * sf * d - sf), [p, q, r, s], dict=True)
    shapes = []
    for sol in sols:
        m = d.subs(sol)
        if m[0, 0] == 0 and m[1, 1] == 0 and sp.simplify(m[0, 1] * m[1, 0] - 1) == 0:
            shapes.append("A")
        elif m[0, 1] == 0 and m[1, 0] == 0 and sp.simplify(m[0, 0] * m[1, 1] - 1) == 0:
            shapes.append("B")
        else:
            shapes.append("?")
    params = [rand_nonzero(rng) for _ in range(1000)]
    dets = {(int(ap1_generator_A(x).det), int(ap1_generator_B(x).det)) for x in params}
    accepted = all(
        is_ap_member(ap1_generator_A(x).matrix, 1) and is_ap_member(ap1_generator_B(x).matrix, 1) for x in params
    )
    ok = sorted(set(shapes)) == ["A", "B"] and dets == {(-1, 1)} and accepted
    verdict(1, ok, f"solution families {sorted(shapes)}, det pairs {sorted(dets)}, 1000 parameters accepted={accepted}")


# -- 2 ----------------------------------------------------------------------------------

def test_criterion_2_block_equivalence(rng):
    members = mismatches = bad_det = 0
    for i in range(10_000):
        n = rng.randint(1, 3)
        if i % 2:
            d = random_member(rng, n).matrix
        else:
            d = rand_matrix(rng, 2 * n, bound=2, den=2)
        member = is_ap_member(d, n)
        if member != check_block_conditions(d, n).all:
            mismatches += 1
        if member:
            members += 1
            if la.det(d) ** 2 != 1:
                bad_det += 1
    ok = mismatches == 0 and bad_det == 0 and 4000 < members < 10_000
    verdict(2, ok, f"10000 matrices, {members} members, {mismatches} mismatches, {bad_det} members with det^2 != 1")


# -- 3 ----------------------------------------------------------------------------------

def test_criterion_3_subspace_taxonomy():
    form = standard_sform(1)
    total = wrong = 0
    for spanning in all_small_subspaces(1, 2):
        total += 1
        if classify_subspace(form, Subspace(spanning, 2)).value != oracle_subspace_label(form, spanning):
            wrong += 1
    b1 = classify_subspace(form, Subspace.span((1, 0))).value
    b2 = classify_subspace(form, Subspace.span((0, 1))).value
    ok = wrong == 0 and b1 == b2 == "lagrangian"
    verdict(3, ok, f"{total} spanning sets, {wrong} disagreements, Span(b1)={b1}, Span(b2)={b2}")


# -- 4 ----------------------------------------------------------------------------------

def test_criterion_4_standardization(rng):
    good = 0
    for i in range(100):
        n = 1 + i % 3
        a = congruent(standard_sform(n), rand_invertible(rng, 2 * n, den=2))
        basis = standardize(a)
        if gram_matrix(a, basis) == standard_sform(n).matrix and is_admissible_basis(a, basis):
            good += 1
    rejected = []
    for bad in ([[1, 0], [0, 1]], la.identity(4), [[1, 0], [0, 0]], [[0, 1, 0, 0], [1, 0, 0, 0], [0] * 4, [0] * 4]):
        try:
            standardize(BilinearForm(bad))
        except NotAnSSpaceError:
            rejected.append(True)
        else:
            rejected.append(False)
    ok = good == 100 and all(rejected)
    verdict(4, ok, f"{good}/100 congruences standardized exactly, rejections {rejected}")


# -- 5 ----------------------------------------------------------------------------------

def _sympy_identity(m, w):
    h0 = (P1**2 + P2**2) / (2 * m) + m * w**2 * (X1**2 + X2**2) / 2
    h1 = P1 * P2 / m + m * w**2 * X1 * X2
    h2 = (P2**2 - P1**2) / (2 * m) + m * w**2 * (X2**2 - X1**2) / 2
    h3 = w * (X1 * P2 - X2 * P1)
    return sp.expand(h0**2 - h1**2 - h2**2 - h3**2)


def test_criterion_5_identity(rng):
    symbolic = oracle = 0
    worst = 0.0
    for _ in range(20):
        m, w = rand_rational(rng), rand_rational(rng)
        rep = check_identity(OscillatorParams(m, w), samples=1000, seed=rng.randint(0, 2**31))
        symbolic += rep.symbolic_zero
        worst = max(worst, rep.max_relative_residual)
        oracle += _sympy_identity(sp.Rational(m.numerator, m.denominator), sp.Rational(w.numerator, w.denominator)) == 0
    literal = identity_polynomial(literal_jhf_components(OscillatorParams(Fraction(1), Fraction(1))))
    ok = symbolic == 20 and oracle == 20 and worst <= 1e-12 and not literal.is_zero()
    verdict(
        5, ok,
        f"symbolic zero {symbolic}/20, sympy oracle {oracle}/20, max relative residual {worst:.2e}; "
        f"unhalved potentials (m = w = 1) leave {literal}",
    )


# -- 6 ----------------------------------------------------------------------------------

def _invariants(params, states):
    mats = np.array([la.to_float(h.gram) for h in jhf_components(params)])
    return np.einsum("ni,kij,nj->kn", states, mats, states)


def _verlet_drift(params, pt, h):
    traj = simulate(params, Metric.euclidean(), pt, 100 / float(params.omega), h, integrator="verlet")
    vals = _invariants(params, traj.states)
    return np.max(np.abs(vals - vals[:, :1])) / vals[0, 0]


def test_criterion_6_conservation(rng):
    brackets_zero = True
    for geom in GEOMETRIES.values():
        for params in (OscillatorParams(Fraction(1), Fraction(1)), OscillatorParams(rand_rational(rng), rand_rational(rng))):
            h = jhf_components(params)
            hg = h[geom.hamiltonian]
            brackets_zero &= all(poisson_bracket(f, hg, geom.metric).is_zero() for f in h)

    worst = 0.0
    for _ in range(5):
        params = OscillatorParams(float(rand_rational(rng)), float(rand_rational(rng)))
        pt = PhasePoint((rng.uniform(-2, 2), rng.uniform(-2, 2)), (rng.uniform(-2, 2), rng.uniform(-2, 2)))
        for metric in METRICS:
            traj = simulate(params, metric, pt, 100 / params.omega, integrator="exact")
            vals = _invariants(params, traj.states)
            # H0 is positive definite and bounds |H1|, |H2|, |H3|
            worst = max(worst, np.max(np.abs(vals - vals[:, :1])) / vals[0, 0])

    params = OscillatorParams(1.0, 1.0)
    pt = PhasePoint((1.0, 0.5), (-0.3, 0.8))
    h = 1e-3 * 2 * math.pi
    d1, d2 = _verlet_drift(params, pt, h), _verlet_drift(params, pt, h / 2)
    c1, c2 = d1 / h**2, d2 / (h / 2) ** 2
    ok = brackets_zero and worst <= 1e-10 and c2 <= 1.05 * c1 and d2 < d1
    verdict(
        6, ok,
        f"exact brackets zero={brackets_zero}, exact-flow relative drift {worst:.2e}, "
        f"verlet drift {d1:.2e} (h) / {d2:.2e} (h/2), measured C = {c1:.4f}",
    )


# -- 7 ----------------------------------------------------------------------------------

def test_criterion_7_classification():
    got = {}
    jacobi = True
    for name in ("euclidean", "hyperbolic", "s"):
        geom = GEOMETRIES[name]
        h = jhf_components(OscillatorParams(Fraction(1), Fraction(1)))
        bs = structure_constants([h[i] for i in geom.triple], geom.metric)
        jacobi &= bs.jacobi_holds() and bs.antisymmetric()
        got[name] = classify_algebra(bs).value
    ok = jacobi and got == {"euclidean": "su2", "hyperbolic": "su11", "s": "su11"}
    verdict(7, ok, f"closed, jacobi={jacobi}, algebras {got}")


# -- 8 ----------------------------------------------------------------------------------

def test_criterion_8_metric_independence(rng):
    worst = 0.0
    for _ in range(10):
        params = OscillatorParams(rng.uniform(0.2, 5), rng.uniform(0.2, 5))
        pt = PhasePoint((rng.uniform(-3, 3), rng.uniform(-3, 3)), (rng.uniform(-3, 3), rng.uniform(-3, 3)))
        runs = [simulate(params, m, pt, params.period).states for m in METRICS]
        worst = max(worst, max(np.max(np.abs(r - runs[0])) for r in runs[1:]))
    verdict(8, worst <= 1e-12, f"max per-coordinate difference across metrics {worst:.2e}")


# -- 9 ----------------------------------------------------------------------------------

def test_criterion_9_bracket_engine(rng):
    failures = 0
    for metric in METRICS:
        pb = lambda u, v: poisson_bracket(u, v, metric)  # noqa: E731
        for _ in range(1000):
            f, g, h = (random_quadratic(rng) for _ in range(3))
            a, b = Fraction(rng.randint(-9, 9), rng.randint(1, 9)), Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            fg = pb(f, g)
            laws = (
                fg == -pb(g, f)
                and pb(f * a + g * b, h) == pb(f, h) * a + pb(g, h) * b
                and (pb(f, pb(g, h)) + pb(g, pb(h, f)) + pb(h, fg)).is_zero()
            )
            failures += not laws
    # independent symbolic oracle on a sample
    oracle_bad = 0
    for metric in METRICS:
        for _ in range(20):
            f, g = random_quadratic(rng), random_quadratic(rng)
            expected = sympy_bracket(sympy_quadratic(f), sympy_quadratic(g), metric.matrix)
            oracle_bad += sp.expand(sympy_quadratic(poisson_bracket(f, g, metric)) - expected) != 0
    worst = 0.0
    eps = 1e-5
    for metric in METRICS:
        w = la.to_float(symplectic_form(metric))
        for _ in range(200):
            f, g = random_quadratic(rng), random_quadratic(rng)
            z = np.array([rng.uniform(-1, 1) for _ in range(4)])
            grads = []
            for obs in (f, g):
                grads.append(np.array([(obs(z + eps * e) - obs(z - eps * e)) / (2 * eps) for e in np.eye(4)]))
            exact = poisson_bracket(f, g, metric)(z)
            worst = max(worst, abs(exact - grads[0] @ w @ grads[1]) / max(1.0, abs(exact)))
    ok = failures == 0 and oracle_bad == 0 and worst <= 1e-6
    verdict(
        9, ok,
        f"3000 triples, {failures} law violations, sympy oracle mismatches {oracle_bad}/60, "
        f"finite-difference error {worst:.2e}",
    )


@pytest.fixture(autouse=True)
def _started(request):
    number = int(request.node.name.split("_")[2])
    conftest.ACCEPTANCE.setdefault(number, f"criterion {number}: FAIL  (did not reach a verdict)")


@pytest.fixture(scope="module", autouse=True)
def _timer():
    start = time.perf_counter()
    yield
    print(f"acceptance suite wall time {time.perf_counter() - start:.1f}s")
