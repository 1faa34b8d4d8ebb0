"""Closed-form inducibility of Turan graphs T(s, r).

g(l) is the induced density of T(s, r) in the l-part equipartite graphon and
f(l) = g(l)/g(l-1).  For s > r the sequence g(l), l >= r, is unimodal, so the
optimal number of parts t is the last l with f(l) > 1.  All comparisons are
exact; near-threshold ratios such as 128/125 leave no room for rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from scipy.optimize import brentq

from .core import Profile, binomial, frac_str

INFINITE = "infinite"
SCAN_CAP = 10**7

TRIVIAL_ZERO = "trivial-zero"
ERDOS_ZYKOV = "erdos-zykov"
BIPARTITE = "brown-sidorenko-bipartite"
THEOREM = "theorem-turan"
BS_CONDITION = "bs-condition"
CONJECTURAL = "conjectural"
PROVEN = (BIPARTITE, THEOREM, BS_CONDITION)


def _check(s: int, r: int):
    if r < 2 or r > s:
        raise ValueError(f"T({s},{r}) needs 2 <= r <= s")


def g_value(s: int, r: int, ell: int) -> Fraction:
    """Density of T(s, r) in W[1/ell, ..., 1/ell]."""
    _check(s, r)
    if ell < r:
        raise ValueError(f"need ell >= r, got ell={ell}, r={r}")
    p, q = divmod(s, r)
    num = math.perm(ell, r) * math.factorial(s)
    den = (math.factorial(r - q) * math.factorial(q) * math.factorial(p) ** r
           * (p + 1) ** q * ell**s)
    return Fraction(num, den)


def f_ratio(s: int, r: int, ell: int) -> Fraction:
    """g(ell)/g(ell-1) = ell/(ell-r) * (1 - 1/ell)^s."""
    _check(s, r)
    if ell <= r:
        raise ValueError(f"ratio defined for ell > r, got ell={ell}")
    return Fraction(ell, ell - r) * Fraction(ell - 1, ell) ** s


def threshold_t(s: int, r: int):
    """Largest t >= r with f(t) > 1 (t = r when f(r+1) <= 1); INFINITE for s = r."""
    _check(s, r)
    if s == r:
        return INFINITE
    t = r
    while f_ratio(s, r, t + 1) > 1:
        t += 1
        if t > SCAN_CAP:
            raise RuntimeError(f"threshold scan for T({s},{r}) passed {SCAN_CAP}")
    return t


def bs_condition(s: int, r: int) -> bool:
    """(1 + 1/r)^s (1 - s/(floor(s/r)(r+1))) > 1."""
    _check(s, r)
    return Fraction(r + 1, r) ** s * (1 - Fraction(s, (s // r) * (r + 1))) > 1


@dataclass(frozen=True)
class TuranResult:
    s: int
    r: int
    k: int | None
    t: object                 # int or INFINITE
    ell: int | None           # parts of the attaining equipartition
    value: Fraction
    certificate: str
    attained: bool = True

    @property
    def proven(self) -> bool:
        return self.certificate != CONJECTURAL

    @property
    def graphon(self) -> tuple[Fraction, ...]:
        if not self.ell:
            return ()
        return (Fraction(1, self.ell),) * self.ell

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "r": self.r,
            "k": self.k,
            "t": self.t,
            "ell": self.ell,
            "value": frac_str(self.value),
            "value_float": float(self.value),
            "graphon": [frac_str(x) for x in self.graphon],
            "certificate": self.certificate,
            "proven": self.proven,
            "attained": self.attained,
        }


def inducibility_turan(s: int, r: int, k: int | None = None) -> TuranResult:
    """i_k(T(s, r)), or i(T(s, r)) when k is None, with the certificate that covers it."""
    _check(s, r)
    if k is not None and k <= r:
        return TuranResult(s, r, k, threshold_t(s, r), None, Fraction(0), TRIVIAL_ZERO)
    if s == r:
        if k is None:
            # complete graphs: the supremum 1 is approached but never attained
            return TuranResult(s, r, None, INFINITE, None, Fraction(1), ERDOS_ZYKOV, attained=False)
        return TuranResult(s, r, k, INFINITE, k - 1, g_value(s, r, k - 1), ERDOS_ZYKOV)
    if r == 2:
        cert, t = BIPARTITE, 2
    elif s <= 3 * r + 1:
        cert, t = THEOREM, threshold_t(s, r)
    elif bs_condition(s, r):
        cert, t = BS_CONDITION, r
    else:
        cert, t = CONJECTURAL, threshold_t(s, r)
    ell = t if k is None else min(k - 1, t)
    return TuranResult(s, r, k, t, ell, g_value(s, r, ell), cert)


def table14() -> list[TuranResult]:
    return [inducibility_turan(s, r) for s in range(3, 15) for r in range(2, s)]


CSV_HEADER = "s,r,t,numerator,denominator,certificate"


def table_csv(rows: list[TuranResult]) -> str:
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(f"{row.s},{row.r},{row.t},{row.value.numerator},{row.value.denominator},{row.certificate}")
    return "\n".join(lines) + "\n"


def inducibility_clique_union(clique_sizes) -> TuranResult:
    """Inducibility of a disjoint union of cliques, via i(F) = i(complement of F).

    The complement is K_{sizes}; it must be a Turan graph for a closed form.
    """
    sizes = Profile(clique_sizes)
    if not sizes.is_turan():
        raise ValueError(f"complement K_{{{sizes}}} is not a Turan graph; no closed form")
    s, r = sizes.s, sizes.r
    if r == 1:
        # complement is edgeless: a single clique has inducibility 1
        return TuranResult(s, 1, None, 1, 1, Fraction(1), ERDOS_ZYKOV)
    return inducibility_turan(s, r)


def bipartite_inducibility(a: int, b: int, tol: float = 1e-13) -> tuple[float, float]:
    """(alpha, i(K_{a,b})) with alpha <= 1/2 maximising x^a(1-x)^b + x^b(1-x)^a."""
    if a < 1 or b < 1 or a * b <= 1:
        raise ValueError(f"need a*b > 1, got a={a}, b={b}")

    def h(x):
        return x**a * (1 - x) ** b + x**b * (1 - x) ** a

    def dh(x):
        out = 0.0
        for p, q in ((a, b), (b, a)):
            if p:
                out += p * x ** (p - 1) * (1 - x) ** q
            if q:
                out -= q * x**p * (1 - x) ** (q - 1)
        return out

    # h is symmetric about 1/2; bracket sign changes of h' on a grid of [0, 1/2]
    grid = [0.5 * i / 4000 for i in range(4001)]
    vals = [dh(x) for x in grid]
    candidates = [0.0, 0.5]
    for x0, x1, d0, d1 in zip(grid, grid[1:], vals, vals[1:]):
        if d0 == 0.0:
            candidates.append(x0)
        elif d0 * d1 < 0:
            candidates.append(brentq(dh, x0, x1, xtol=tol, rtol=1e-15))
    alpha = max(candidates, key=lambda x: (h(x), -x))
    scale = binomial(a + b, a) / (2 if a == b else 1)
    return alpha, scale * h(alpha)
