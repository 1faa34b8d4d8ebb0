"""Induced density of K_{a_1..a_r} in the complete m-partite graphon W[x_1..x_m].

A sample of s points induces F exactly when, for some injection sigma of the
parts of F into the parts of W, part sigma(i) receives a_i points.  Grouping
injections by the exponent vector they produce, every vector whose nonzero
entries are a permutation of the profile carries coefficient s!/prod(a_i!):
the pi(F) injections realising it cancel the 1/pi(F) overcount.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Sequence

import numpy as np

from . import graphs
from .core import Profile, binomial, multinomial


def _distinct_arrangements(values: Sequence[int], m: int):
    """All length-m vectors whose nonzero entries are a rearrangement of values."""
    padded = sorted(list(values) + [0] * (m - len(values)), reverse=True)
    counts: dict[int, int] = {}
    for v in padded:
        counts[v] = counts.get(v, 0) + 1
    keys = sorted(counts, reverse=True)
    out = [0] * m

    def rec(pos):
        if pos == m:
            yield tuple(out)
            return
        for key in keys:
            if counts[key]:
                counts[key] -= 1
                out[pos] = key
                yield from rec(pos + 1)
                counts[key] += 1

    yield from rec(0)


@dataclass(frozen=True)
class DensityPolynomial:
    profile: Profile
    m: int
    terms: tuple[tuple[tuple[int, ...], int], ...]   # (exponents, coefficient), sorted

    @property
    def s(self) -> int:
        return self.profile.s

    def is_zero(self) -> bool:
        return not self.terms

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return dict(self.terms)

    @cached_property
    def _exps(self) -> np.ndarray:
        if not self.terms:
            return np.zeros((0, self.m), dtype=np.int64)
        return np.array([e for e, _ in self.terms], dtype=np.int64)

    @cached_property
    def _coeffs(self) -> np.ndarray:
        return np.array([float(c) for _, c in self.terms], dtype=float)

    def value_at(self, x: np.ndarray) -> float:
        if not self.terms:
            return 0.0
        return float(self._coeffs @ np.prod(x[None, :] ** self._exps, axis=1))

    def grad_at(self, x: np.ndarray) -> np.ndarray:
        if not self.terms:
            return np.zeros(self.m)
        E = self._exps
        powers = x[None, :] ** E
        out = np.empty(self.m)
        for i in range(self.m):
            col = E[:, i]
            mask = col > 0
            if not mask.any():
                out[i] = 0.0
                continue
            p = powers[mask].copy()
            p[:, i] = x[i] ** (col[mask] - 1)
            out[i] = float((self._coeffs[mask] * col[mask]) @ np.prod(p, axis=1))
        return out

    def hessian_at(self, x: np.ndarray) -> np.ndarray:
        m = self.m
        H = np.zeros((m, m))
        if not self.terms:
            return H
        E = self._exps
        c = self._coeffs
        for i in range(m):
            for j in range(i, m):
                if i == j:
                    factor = E[:, i] * (E[:, i] - 1)
                else:
                    factor = E[:, i] * E[:, j]
                mask = factor > 0
                if not mask.any():
                    continue
                sub = E[mask].copy()
                sub[:, i] -= 1
                sub[:, j] -= 1
                val = float((c[mask] * factor[mask]) @ np.prod(x[None, :] ** sub, axis=1))
                H[i, j] = H[j, i] = val
        return H

    def lipschitz_bound(self) -> float:
        """Upper bound on every |dP/dx_i| over the simplex."""
        if not self.terms:
            return 0.0
        return float(np.max(self._coeffs @ self._exps))


def density_polynomial(profile: Profile, m: int) -> DensityPolynomial:
    if m < 1:
        raise ValueError("need at least one graphon part")
    if m < profile.r:
        return DensityPolynomial(profile, m, ())
    coeff = multinomial(profile)
    terms = tuple((e, coeff) for e in sorted(_distinct_arrangements(profile.parts, m)))
    return DensityPolynomial(profile, m, terms)


class SimplexPoint:
    """A point of the simplex, either exact (Fractions summing to 1) or numeric."""

    __slots__ = ("coords", "exact")

    def __init__(self, coords, exact: bool | None = None):
        coords = list(coords)
        if exact is None:
            exact = all(isinstance(c, (int, Fraction)) for c in coords)
        if exact:
            coords = [Fraction(c) for c in coords]
            if any(c < 0 for c in coords):
                raise ValueError("simplex coordinates must be nonnegative")
            if sum(coords) != 1:
                raise ValueError(f"exact simplex point sums to {sum(coords)}, not 1")
        else:
            coords = [float(c) for c in coords]
            if any(c < -1e-15 for c in coords):
                raise ValueError("simplex coordinates must be nonnegative")
            coords = [max(c, 0.0) for c in coords]
            if abs(sum(coords) - 1.0) > 1e-12:
                raise ValueError(f"numeric simplex point sums to {sum(coords)!r}")
        self.coords = tuple(coords)
        self.exact = exact

    @classmethod
    def equipartition(cls, parts: int, m: int | None = None) -> "SimplexPoint":
        m = parts if m is None else m
        if not 1 <= parts <= m:
            raise ValueError("need 1 <= parts <= m")
        return cls([Fraction(1, parts)] * parts + [Fraction(0)] * (m - parts), exact=True)

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def as_array(self) -> np.ndarray:
        return np.array([float(c) for c in self.coords])

    def __repr__(self):
        kind = "exact" if self.exact else "numeric"
        return f"SimplexPoint({list(self.coords)!r}, {kind})"


def _as_point(point) -> SimplexPoint:
    return point if isinstance(point, SimplexPoint) else SimplexPoint(point)


def evaluate(poly: DensityPolynomial, point) -> Fraction | float:
    point = _as_point(point)
    if len(point) != poly.m:
        raise ValueError(f"point has dimension {len(point)}, polynomial has {poly.m} variables")
    if not point.exact:
        return poly.value_at(point.as_array())
    x = point.coords
    total = Fraction(0)
    for exps, c in poly.terms:
        term = Fraction(c)
        for xi, e in zip(x, exps):
            if e:
                term *= xi**e
                if not term:
                    break
        total += term
    return total


def gradient(poly: DensityPolynomial, point) -> np.ndarray:
    point = _as_point(point)
    if len(point) != poly.m:
        raise ValueError(f"point has dimension {len(point)}, polynomial has {poly.m} variables")
    return poly.grad_at(point.as_array())


def exact_gradient(poly: DensityPolynomial, point) -> list[Fraction]:
    point = _as_point(point)
    if not point.exact or len(point) != poly.m:
        raise ValueError("exact gradient needs an exact point of matching dimension")
    x = point.coords
    out = [Fraction(0)] * poly.m
    for exps, c in poly.terms:
        for i, ei in enumerate(exps):
            if not ei:
                continue
            term = Fraction(c * ei)
            for j, (xj, e) in enumerate(zip(x, exps)):
                k = e - 1 if j == i else e
                if k:
                    term *= xj**k
            out[i] += term
    return out


# --- univariate restriction along a pair of coordinates --------------------

@dataclass(frozen=True)
class UnivariateRestriction:
    """Q(a) = P(.., a*S at i, .., (1-a)*S at j, ..) with S = x_i + x_j."""

    coeffs: tuple      # ascending powers of a
    mass: object
    i: int
    j: int

    def __call__(self, a):
        out = 0
        for c in reversed(self.coeffs):
            out = out * a + c
        return out

    def reflected(self) -> tuple:
        """Coefficients of Q(1 - a)."""
        d = len(self.coeffs)
        out = [0] * d
        for k, c in enumerate(self.coeffs):
            # c * (1 - a)^k
            for t in range(k + 1):
                out[t] += c * comb(k, t) * (-1) ** t
        return tuple(out)


def restriction_coeffs(terms, x: Sequence, i: int, j: int):
    """Ascending coefficients of Q(a); generic over Fraction or float coordinates."""
    S = x[i] + x[j]
    grouped: dict[tuple[int, int], object] = {}
    for exps, c in terms:
        w = c
        for k, e in enumerate(exps):
            if e and k != i and k != j:
                w = w * x[k] ** e
                if not w:
                    break
        if not w:
            continue
        key = (exps[i], exps[j])
        grouped[key] = grouped.get(key, 0) + w * S ** (exps[i] + exps[j])
    degree = max((ei + ej for ei, ej in grouped), default=0)
    coeffs = [0] * (degree + 1)
    for (ei, ej), w in grouped.items():
        # a^ei (1-a)^ej
        for t in range(ej + 1):
            coeffs[ei + t] += w * comb(ej, t) * (-1) ** t
    return coeffs


def split_restriction(poly: DensityPolynomial, point, i: int, j: int) -> UnivariateRestriction:
    point = _as_point(point)
    if len(point) != poly.m:
        raise ValueError("dimension mismatch")
    if i == j or not (0 <= i < poly.m and 0 <= j < poly.m):
        raise IndexError(f"bad coordinate pair ({i}, {j}) for m={poly.m}")
    coeffs = restriction_coeffs(poly.terms, point.coords, i, j)
    if point.exact:
        coeffs = [Fraction(c) for c in coeffs]
    else:
        coeffs = [float(c) for c in coeffs]
    return UnivariateRestriction(tuple(coeffs), point[i] + point[j], i, j)


# --- finite graphs converging to W[x] ---------------------------------------

def finite_approximation(profile: Profile, point, n: int) -> Fraction:
    """Exact induced density of F in the complete multipartite graph with parts n*x_i."""
    point = _as_point(point)
    if not point.exact:
        raise ValueError("finite approximation needs an exact point")
    sizes = []
    for x in point:
        size = x * n
        if size.denominator != 1:
            raise ValueError(f"n*x = {size} is not an integer")
        sizes.append(int(size))
    G = graphs.complete_multipartite(sizes)
    F = graphs.complete_multipartite(profile)
    if F.n > G.n:
        return Fraction(0)
    return Fraction(graphs.count_induced(F, G), binomial(G.n, F.n))


def format_poly(poly: DensityPolynomial) -> str:
    """One ``coeff e1 .. em`` line per monomial, lexicographic in the exponents."""
    return "".join(f"{c} {' '.join(map(str, e))}\n" for e, c in poly.terms)
