import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from inducibility.core import (
    Profile,
    binomial,
    frac_str,
    generic_lower_bound,
    multinomial,
    pi_factor,
    profiles_of,
)


@pytest.mark.parametrize("n,k,expected", [(5, 2, 10), (4, 0, 1), (3, 5, 0), (0, 0, 1), (-1, 0, 0), (4, -1, 0)])
def test_binomial_values(n, k, expected):
    assert binomial(n, k) == expected


def test_pascal_rule_up_to_64():
    for n in range(1, 65):
        for k in range(1, n + 1):
            assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)


@pytest.mark.parametrize("parts,expected", [((2, 1, 1), 12), ((3, 1, 1), 20), ((1,), 1), ((2, 2), 6)])
def test_multinomial(parts, expected):
    assert multinomial(Profile(parts)) == expected


@pytest.mark.parametrize("parts,expected", [((5, 5, 5, 3, 3, 1), 12), ((2, 1, 1), 2), ((4, 3, 2), 1), ((1, 1, 1, 1), 24)])
def test_pi_factor(parts, expected):
    assert pi_factor(Profile(parts)) == expected


@pytest.mark.parametrize("r,expected", [(2, Fraction(1)), (3, Fraction(1, 4)), (4, Fraction(2, 21))])
def test_generic_lower_bound(r, expected):
    assert generic_lower_bound(r) == expected


@pytest.mark.parametrize("bad", [1, 0, -3])
def test_generic_lower_bound_rejects_small_r(bad):
    with pytest.raises(ValueError):
        generic_lower_bound(bad)


def test_profile_sorted_and_validated():
    p = Profile((1, 3, 1))
    assert p.parts == (3, 1, 1) and p.s == 5 and p.r == 3
    assert str(p) == "3,1,1"
    assert Profile.parse(" 1, 3,1") == p
    assert list(p) == [3, 1, 1] and len(p) == 3
    for bad in ((), (2, 0), (-1,)):
        with pytest.raises(ValueError):
            Profile(bad)
    with pytest.raises(ValueError):
        Profile.parse("3,x")


def test_turan_predicate():
    assert Profile((2, 2, 1)).is_turan()
    assert not Profile((3, 1)).is_turan()


def test_profiles_of_counts_partitions():
    # partition numbers p(1..8)
    assert [len(list(profiles_of(s))) for s in range(1, 9)] == [1, 2, 3, 5, 7, 11, 15, 22]
    assert {str(p) for p in profiles_of(4, max_parts=2)} == {"4", "3,1", "2,2"}
    assert list(profiles_of(0)) == []


def _injection_counts(profile: Profile, m: int):
    """Brute force: how many injections [r] -> [m] produce each exponent vector."""
    counts = {}
    for sigma in itertools.permutations(range(m), profile.r):
        e = [0] * m
        for a, idx in zip(profile.parts, sigma):
            e[idx] = a
        counts[tuple(e)] = counts.get(tuple(e), 0) + 1
    return counts


def test_injections_per_exponent_vector_equal_pi():
    # every exponent vector is hit by exactly pi(F) injections, so the 1/pi overcount cancels
    for s in range(1, 9):
        for prof in profiles_of(s):
            for m in range(prof.r, min(prof.r + 2, 7) + 1):
                counts = _injection_counts(prof, m)
                assert set(counts.values()) == {pi_factor(prof)}
                assert len(counts) * pi_factor(prof) == math.perm(m, prof.r)


@given(st.lists(st.integers(1, 6), min_size=1, max_size=5))
def test_multinomial_matches_factorials(parts):
    p = Profile(parts)
    expected = Fraction(math.factorial(p.s), math.prod(math.factorial(a) for a in parts))
    assert expected.denominator == 1 and multinomial(p) == expected.numerator


@given(st.integers(-10**30, 10**30), st.integers(1, 10**30))
def test_frac_str_lowest_terms(num, den):
    x = Fraction(num, den)
    n, d = frac_str(x).split("/")
    assert int(d) > 0 and math.gcd(int(n), int(d)) == 1
    assert Fraction(int(n), int(d)) == x
