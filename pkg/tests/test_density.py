import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from inducibility import graphs, turan
from inducibility.core import Profile, multinomial, pi_factor, profiles_of
from inducibility.density import (
    SimplexPoint,
    density_polynomial,
    evaluate,
    exact_gradient,
    finite_approximation,
    format_poly,
    gradient,
    split_restriction,
)

F211, F311, T53 = Profile((2, 1, 1)), Profile((3, 1, 1)), Profile((2, 2, 1))


def rand_point(rng, m, zeros=True):
    w = [rng.randint(0 if zeros else 1, 25) for _ in range(m)]
    if not any(w):
        w[rng.randrange(m)] = 1
    return SimplexPoint([Fraction(x, sum(w)) for x in w])


def brute_density(profile, x):
    """Sum over all injections of parts into coordinates, divided by pi."""
    total = Fraction(0)
    for sigma in itertools.permutations(range(len(x)), profile.r):
        term = Fraction(multinomial(profile))
        for a, idx in zip(profile.parts, sigma):
            term *= x[idx] ** a
        total += term
    return total / pi_factor(profile)


# --- polynomial shape ------------------------------------------------------

def test_k211_four_parts():
    p = density_polynomial(F211, 4)
    assert len(p.terms) == 12 and {c for _, c in p.terms} == {12}
    assert (2, 1, 1, 0) in p.as_dict() and (0, 1, 1, 2) in p.as_dict()


def test_t53_three_parts():
    p = density_polynomial(T53, 3)
    assert p.as_dict() == {(2, 2, 1): 30, (2, 1, 2): 30, (1, 2, 2): 30}


def test_k311_three_parts():
    p = density_polynomial(F311, 3)
    assert p.as_dict() == {(3, 1, 1): 20, (1, 3, 1): 20, (1, 1, 3): 20}


def test_zero_polynomial_below_r():
    p = density_polynomial(F311, 2)
    assert p.is_zero() and evaluate(p, [Fraction(1, 2)] * 2) == 0
    assert np.all(gradient(p, [0.5, 0.5]) == 0)
    with pytest.raises(ValueError):
        density_polynomial(F311, 0)


@pytest.mark.parametrize("s", range(1, 7))
def test_monomial_count_and_coefficient_sum(s):
    for prof in profiles_of(s):
        for m in range(prof.r, 7):
            p = density_polynomial(prof, m)
            assert len(p.terms) * pi_factor(prof) == math.perm(m, prof.r)
            assert all(c == multinomial(prof) > 0 for _, c in p.terms)
            assert all(sum(e) == s for e, _ in p.terms)
            # symmetric closure: every permutation of an exponent vector is present
            d = p.as_dict()
            for e in d:
                for q in set(itertools.permutations(e)):
                    assert d[q] == d[e]


def test_format_poly_lines():
    lines = format_poly(density_polynomial(F211, 3)).splitlines()
    assert lines == ["12 1 1 2", "12 1 2 1", "12 2 1 1"]


# --- evaluation --------------------------------------------------------------

def test_evaluate_examples():
    eq4 = SimplexPoint.equipartition(4)
    assert evaluate(density_polynomial(F211, 4), eq4) == Fraction(9, 16)
    assert evaluate(density_polynomial(F311, 4), eq4) == Fraction(15, 64)
    for prof in (F211, F311, T53):
        assert evaluate(density_polynomial(prof, 4), [1, 0, 0, 0]) == 0


def test_evaluate_float_path_agrees():
    rng = random.Random(5)
    for _ in range(30):
        prof = rng.choice([F211, F311, T53, Profile((2, 2)), Profile((1, 1, 1, 1))])
        m = rng.randint(prof.r, 6)
        x = rand_point(rng, m)
        exact = evaluate(density_polynomial(prof, m), x)
        approx = evaluate(density_polynomial(prof, m), SimplexPoint([float(c) for c in x]))
        assert isinstance(exact, Fraction) and isinstance(approx, float)
        assert abs(float(exact) - approx) < 1e-13


def test_evaluate_against_injection_sum():
    rng = random.Random(6)
    for s in range(1, 7):
        for prof in profiles_of(s):
            m = rng.randint(prof.r, max(prof.r, 5))
            x = rand_point(rng, m)
            assert evaluate(density_polynomial(prof, m), x) == brute_density(prof, x.coords)


def test_symmetry_under_permutation():
    rng = random.Random(7)
    for _ in range(50):
        prof = rng.choice(list(profiles_of(rng.randint(2, 6), max_parts=4)))
        m = rng.randint(prof.r, 5)
        x = list(rand_point(rng, m))
        y = x[:]
        rng.shuffle(y)
        p = density_polynomial(prof, m)
        assert evaluate(p, x) == evaluate(p, y)


def test_zero_padding_embeds():
    rng = random.Random(8)
    for _ in range(30):
        prof = rng.choice([F211, F311, T53, Profile((3, 2))])
        m = rng.randint(prof.r, 5)
        x = list(rand_point(rng, m))
        assert evaluate(density_polynomial(prof, m), x) == evaluate(density_polynomial(prof, m + 1), x + [Fraction(0)])


def test_normalization_sums_to_one():
    rng = random.Random(9)
    for m in range(1, 6):
        for s in range(1, 7):
            polys = [density_polynomial(p, m) for p in profiles_of(s, max_parts=m)]
            for _ in range(20):
                x = rand_point(rng, m)
                assert sum(evaluate(p, x) for p in polys) == 1


def test_turan_consistency():
    for s in range(3, 11):
        for r in range(2, s):
            prof = graphs.turan_profile(s, r)
            for ell in range(r, 9):
                assert evaluate(density_polynomial(prof, ell), SimplexPoint.equipartition(ell)) == turan.g_value(s, r, ell)


def test_simplex_point_validation():
    with pytest.raises(ValueError):
        SimplexPoint([Fraction(1, 2), Fraction(1, 3)])
    with pytest.raises(ValueError):
        SimplexPoint([Fraction(3, 2), Fraction(-1, 2)])
    with pytest.raises(ValueError):
        SimplexPoint([0.5, 0.6])
    with pytest.raises(ValueError):
        SimplexPoint([1.1, -0.1])
    pt = SimplexPoint([0.5, 0.5 + 1e-14, -1e-16])
    assert pt.coords[2] == 0.0 and not pt.exact
    assert SimplexPoint.equipartition(2, 4).coords == (Fraction(1, 2),) * 2 + (Fraction(0),) * 2
    with pytest.raises(ValueError):
        evaluate(density_polynomial(F211, 4), [1, 0, 0])


# --- gradients ---------------------------------------------------------------

def test_gradient_at_equipartition_is_flat():
    g = exact_gradient(density_polynomial(F211, 4), SimplexPoint.equipartition(4))
    assert len(set(g)) == 1


def test_gradient_matches_exact_and_finite_differences():
    rng = random.Random(10)
    for _ in range(20):
        prof = rng.choice([F211, F311, T53])
        m = rng.randint(prof.r, 5)
        p = density_polynomial(prof, m)
        x = rand_point(rng, m, zeros=False)
        g = gradient(p, x)
        ge = exact_gradient(p, x)
        assert np.allclose(g, [float(v) for v in ge], rtol=1e-12, atol=1e-14)
        xa = x.as_array()
        h = 1e-6
        for i in range(m):
            e = np.zeros(m)
            e[i] = h
            fd = (p.value_at(xa + e) - p.value_at(xa - e)) / (2 * h)
            assert abs(fd - g[i]) < 1e-6


def test_hessian_symmetric_and_consistent():
    p = density_polynomial(T53, 4)
    x = np.array([0.4, 0.3, 0.2, 0.1])
    H = p.hessian_at(x)
    assert np.allclose(H, H.T)
    h = 1e-6
    for j in range(4):
        e = np.zeros(4)
        e[j] = h
        col = (p.grad_at(x + e) - p.grad_at(x - e)) / (2 * h)
        assert np.allclose(col, H[:, j], atol=1e-5)


def test_lipschitz_bound_dominates_gradient():
    rng = random.Random(11)
    for prof in (F211, F311, T53):
        p = density_polynomial(prof, 5)
        L = p.lipschitz_bound()
        for _ in range(20):
            g = p.grad_at(rand_point(rng, 5).as_array())
            assert np.max(np.abs(g)) <= L + 1e-12


# --- Q(a) restriction ----------------------------------------------------------

def test_restriction_t53_closed_form():
    x = SimplexPoint([Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)])
    Q = split_restriction(density_polynomial(T53, 3), x, 0, 1)
    S, x3 = x[0] + x[1], x[2]
    for a in (Fraction(0), Fraction(1, 5), Fraction(1, 2), Fraction(7, 9), Fraction(1)):
        expected = 30 * ((1 - a) ** 2 * a**2 * x3 * S**4 + a * (1 - a) * S**3 * x3**2)
        assert Q(a) == expected


def test_restriction_reflection_symmetric():
    rng = random.Random(12)
    for _ in range(50):
        prof = rng.choice([F211, F311, T53, Profile((2, 2)), Profile((3, 2, 1))])
        m = rng.randint(max(prof.r, 2), 5)
        x = rand_point(rng, m)
        i, j = rng.sample(range(m), 2)
        Q = split_restriction(density_polynomial(prof, m), x, i, j)
        assert tuple(Q.reflected()) == tuple(Q.coeffs)


def test_restriction_reproduces_point():
    rng = random.Random(13)
    for _ in range(30):
        prof = rng.choice([F211, F311, T53])
        m = rng.randint(prof.r, 5)
        x = rand_point(rng, m, zeros=False)
        i, j = rng.sample(range(m), 2)
        p = density_polynomial(prof, m)
        Q = split_restriction(p, x, i, j)
        assert Q(x[i] / (x[i] + x[j])) == evaluate(p, x)


def test_restriction_bad_indices():
    p = density_polynomial(F211, 3)
    with pytest.raises(IndexError):
        split_restriction(p, SimplexPoint.equipartition(3), 0, 0)
    with pytest.raises(IndexError):
        split_restriction(p, SimplexPoint.equipartition(3), 0, 3)


# --- finite approximations ---------------------------------------------------------

def test_finite_approximation_examples():
    v8 = finite_approximation(F211, SimplexPoint.equipartition(4), 8)
    assert abs(v8 - Fraction(9, 16)) < Fraction(15, 100)
    assert finite_approximation(Profile((1, 1)), SimplexPoint.equipartition(2), 4) == Fraction(2, 3)
    with pytest.raises(ValueError):
        finite_approximation(F211, SimplexPoint.equipartition(4), 6)


def test_finite_approximation_converges():
    target = Fraction(9, 16)
    errs = [abs(finite_approximation(F211, SimplexPoint.equipartition(4), n) - target) for n in (16, 24, 32)]
    assert errs[0] > errs[1] > errs[2]
    cases = [(F211, [Fraction(1, 4)] * 4), (F311, [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)]),
             (T53, [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 8)]),
             (Profile((2, 2)), [Fraction(1, 2)] * 2), (Profile((1, 1, 1)), [Fraction(1, 4)] * 4)]
    for prof, x in cases:
        exact = evaluate(density_polynomial(prof, len(x)), x)
        errs = [abs(finite_approximation(prof, x, n) - exact) for n in (8, 16, 32)]
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] * 32 < 10          # O(1/n)


@given(st.lists(st.integers(1, 3), min_size=1, max_size=3), st.lists(st.integers(1, 4), min_size=1, max_size=4))
@settings(max_examples=40, deadline=None)
def test_finite_approximation_is_exact_count(parts, sizes):
    prof = Profile(parts)
    n = sum(sizes)
    x = SimplexPoint([Fraction(b, n) for b in sizes])
    F, G = graphs.complete_multipartite(prof), graphs.complete_multipartite(sizes)
    assert finite_approximation(prof, x, n) == graphs.induced_density(F, G)
