"""Brute-force ground truth for i(F, n) and i_k(F, n).

``max_over_all_graphs`` walks every labeled graph on n vertices by its
upper-triangle bit encoding, vectorised over chunks of encodings with
numpy.  ``max_over_multipartite`` only looks at complete multipartite hosts
and counts copies combinatorially, which makes it an independent route to
the same numbers whenever the optimum is multipartite.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import Profile, binomial, frac_str, pi_factor
from .graphs import (
    CapacityError,
    Graph,
    complete_multipartite,
    format_graph,
    is_complete_multipartite,
    pair_order,
)

DEFAULT_CAP = 7
MULTIPARTITE_CAP = 40
CHUNK = 1 << 20


@dataclass
class OracleResult:
    density: Fraction
    witness: Graph
    examined: int
    constraint: str

    def to_dict(self) -> dict:
        return {
            "density": frac_str(self.density),
            "density_float": float(self.density),
            "witness": format_graph(self.witness),
            "witness_profile": str(p) if (p := is_complete_multipartite(self.witness)) else None,
            "examined": self.examined,
            "constraint": self.constraint,
        }


def _orbit_table(F: Graph) -> np.ndarray:
    """Boolean lookup over local codes of |V(F)|-vertex graphs: isomorphic to F?"""
    k = F.n
    pairs = pair_order(k)
    table = np.zeros(1 << len(pairs), dtype=bool)
    for perm in itertools.permutations(range(k)):
        code = 0
        for b, (i, j) in enumerate(pairs):
            if F.adjacent(perm[i], perm[j]):
                code |= 1 << b
        table[code] = True
    return table


def _describe(forbid_k):
    return "none" if forbid_k is None else f"K_{forbid_k}-free"


def max_over_all_graphs(F: Graph, n: int, forbid_k: int | None = None,
                        limit: int = DEFAULT_CAP) -> OracleResult:
    """Exact max of p(F, G) over labeled G on n vertices (optionally K_k-free).

    Ties resolve to the smallest encoding.
    """
    if n > limit:
        raise CapacityError(f"n={n} exceeds the exhaustive cap {limit}")
    if forbid_k is not None and forbid_k < 2:
        raise ValueError("forbid_k must be >= 2")
    k = F.n
    pairs = pair_order(n)
    bit = {p: b for b, p in enumerate(pairs)}
    total = 1 << len(pairs)
    if k > n:
        return OracleResult(Fraction(0), Graph.empty(n), total, _describe(forbid_k))

    table = _orbit_table(F)
    subsets = list(itertools.combinations(range(n), k))
    local = [[bit[(S[a], S[b])] for a, b in pair_order(k)] for S in subsets]
    cliques = []
    if forbid_k is not None and forbid_k <= n:
        for C in itertools.combinations(range(n), forbid_k):
            cliques.append(sum(1 << bit[p] for p in itertools.combinations(C, 2)))

    best_count, best_code = -1, None
    for start in range(0, total, CHUNK):
        enc = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
        ok = np.ones(len(enc), dtype=bool)
        for mask in cliques:
            ok &= (enc & mask) != mask
        counts = np.zeros(len(enc), dtype=np.int64)
        for bits in local:
            code = np.zeros(len(enc), dtype=np.int64)
            for pos, b in enumerate(bits):
                code |= ((enc >> b) & 1) << pos
            counts += table[code]
        counts[~ok] = -1
        idx = int(np.argmax(counts))
        if counts[idx] > best_count:
            best_count, best_code = int(counts[idx]), int(enc[idx])
    density = Fraction(best_count, binomial(n, k))
    return OracleResult(density, Graph.from_encoding(n, best_code), total, _describe(forbid_k))


def integer_partitions(n: int, max_parts: int):
    """Partitions of n into at most max_parts parts, lexicographically decreasing."""
    def rec(remaining, cap, prefix):
        if remaining == 0:
            yield tuple(prefix)
            return
        if len(prefix) == max_parts:
            return
        for a in range(min(cap, remaining), 0, -1):
            yield from rec(remaining - a, a, prefix + [a])
    yield from rec(n, n, [])


def count_in_multipartite(profile: Profile, host: tuple[int, ...]) -> int:
    """Induced copies of K_profile in the complete multipartite graph with parts ``host``.

    A copy picks, for each part of F, a distinct host part and a_i of its
    vertices; permutations of equal-size parts of F give the same vertex set.
    """
    total = 0
    for image in itertools.permutations(range(len(host)), profile.r):
        term = 1
        for a, idx in zip(profile.parts, image):
            term *= binomial(host[idx], a)
            if not term:
                break
        total += term
    return total // pi_factor(profile)


def max_over_multipartite(F: Graph, n: int, max_parts: int,
                          limit: int = MULTIPARTITE_CAP) -> OracleResult:
    if n > limit:
        raise CapacityError(f"n={n} exceeds the multipartite cap {limit}")
    if max_parts < 1:
        raise ValueError("max_parts must be >= 1")
    profile = is_complete_multipartite(F)
    denom = binomial(n, F.n)
    best, best_host, examined = -1, None, 0
    for host in integer_partitions(n, max_parts):
        examined += 1
        # only complete multipartite graphs sit inside complete multipartite hosts
        count = count_in_multipartite(profile, host) if profile and denom else 0
        if count > best:
            best, best_host = count, host
    density = Fraction(best, denom) if denom else Fraction(0)
    return OracleResult(density, complete_multipartite(best_host), examined,
                        f"complete multipartite, <= {max_parts} parts")
