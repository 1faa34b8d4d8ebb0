"""Exact scalars and the part-size profile of a complete multipartite graph.

Rationals are ``fractions.Fraction`` (always reduced, arbitrary precision);
integers are Python ints.  Nothing in the exact paths touches floats.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable


@dataclass(frozen=True)
class Profile:
    """Part sizes a_1 >= a_2 >= ... >= a_r >= 1 of K_{a_1,...,a_r}."""

    parts: tuple[int, ...]

    def __init__(self, parts: Iterable[int]):
        parts = tuple(sorted((int(a) for a in parts), reverse=True))
        if not parts:
            raise ValueError("a profile needs at least one part")
        if parts[-1] < 1:
            raise ValueError(f"part sizes must be positive, got {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> "Profile":
        """Parse ``"3,1,1"`` (any order, whitespace tolerated)."""
        try:
            sizes = [int(tok) for tok in text.replace(" ", "").split(",") if tok]
        except ValueError:
            raise ValueError(f"malformed profile {text!r}") from None
        return cls(sizes)

    @property
    def s(self) -> int:
        return sum(self.parts)

    @property
    def r(self) -> int:
        return len(self.parts)

    def is_turan(self) -> bool:
        return self.parts[0] - self.parts[-1] <= 1

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))

    def __iter__(self):
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)


def binomial(n: int, k: int) -> int:
    if k < 0 or n < 0:
        return 0
    return math.comb(n, k)


def multinomial(profile: Profile) -> int:
    """s! / (a_1! ... a_r!)."""
    out = math.factorial(profile.s)
    for a in profile.parts:
        out //= math.factorial(a)
    return out


def pi_factor(profile: Profile) -> int:
    """Product over sizes n of c(n)!, c(n) = number of parts of size n."""
    out = 1
    for c in Counter(profile.parts).values():
        out *= math.factorial(c)
    return out


def generic_lower_bound(r: int) -> Fraction:
    """r!/(r^r - r), the nested-blowup lower bound on i(F) for |V(F)| = r."""
    if r < 2:
        raise ValueError(f"generic lower bound needs r >= 2, got {r}")
    return Fraction(math.factorial(r), r**r - r)


def profiles_of(s: int, max_parts: int | None = None):
    """All profiles with s vertices (optionally at most max_parts parts), largest first."""
    limit = s if max_parts is None else max_parts

    def rec(remaining, cap, prefix):
        if remaining == 0:
            yield Profile(prefix)
            return
        if len(prefix) == limit:
            return
        for a in range(min(cap, remaining), 0, -1):
            yield from rec(remaining - a, a, prefix + [a])

    if s < 1:
        return
    yield from rec(s, s, [])


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"
