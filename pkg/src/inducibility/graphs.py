"""Small labeled graphs stored as adjacency bitmasks.

Vertex ``v`` of a ``Graph`` has neighbourhood ``rows[v]``, an int whose bit
``u`` is set iff uv is an edge.  Everything here is exact and brute force;
vertex caps keep the enumerations at desk scale.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .core import Profile, binomial

MAX_VERTICES = 64
MAX_SYMMETRIZE = 14
MAX_ISO_PREDICATE = 10
MAX_COLORING = 16


class CapacityError(ValueError):
    """Input exceeds a documented size cap."""


@dataclass(frozen=True)
class Graph:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise ValueError("row count does not match n")
        if self.n > MAX_VERTICES:
            raise CapacityError(f"graphs are capped at {MAX_VERTICES} vertices")
        for v, row in enumerate(self.rows):
            if row >> v & 1:
                raise ValueError(f"self-loop at {v}")
            if row >> self.n:
                raise ValueError(f"vertex {v} has a neighbour outside range")
            for u in _bits(row):
                if not self.rows[u] >> v & 1:
                    raise ValueError(f"asymmetric adjacency between {u} and {v}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n > MAX_VERTICES:
            raise CapacityError(f"graphs are capped at {MAX_VERTICES} vertices")
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, tuple(full & ~(1 << v) for v in range(n)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def from_encoding(cls, n: int, code: int) -> "Graph":
        """Inverse of ``encoding``."""
        edges = [p for b, p in enumerate(pair_order(n)) if code >> b & 1]
        return cls.from_edges(n, edges)

    def encoding(self) -> int:
        """Upper-triangle bit code; pair (i, j), i < j, in lexicographic order."""
        return sum(1 << b for b, (i, j) in enumerate(pair_order(self.n)) if self.adjacent(i, j))

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in _bits(self.rows[u]) if u < v]

    def num_edges(self) -> int:
        return sum(bin(r).count("1") for r in self.rows) // 2

    def degrees(self) -> list[int]:
        return [bin(r).count("1") for r in self.rows]

    def induced(self, vertices: Sequence[int]) -> "Graph":
        index = {v: i for i, v in enumerate(vertices)}
        edges = [(index[u], index[v]) for u, v in itertools.combinations(vertices, 2) if self.adjacent(u, v)]
        return Graph.from_edges(len(vertices), edges)

    def __str__(self) -> str:
        return format_graph(self)


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@lru_cache(maxsize=None)
def pair_order(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(itertools.combinations(range(n), 2))


# --- file format -----------------------------------------------------------

def parse_graph(text: str) -> Graph:
    """First line ``n``, then ``u v`` per edge (0-indexed)."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty graph file")
    try:
        n = int(lines[0])
        edges = []
        for ln in lines[1:]:
            u, v = ln.split()
            edges.append((int(u), int(v)))
    except ValueError:
        raise ValueError("malformed graph file") from None
    return Graph.from_edges(n, edges)


def read_graph(path) -> Graph:
    with open(path) as fh:
        return parse_graph(fh.read())


def format_graph(G: Graph) -> str:
    out = [str(G.n)] + [f"{u} {v}" for u, v in G.edges()]
    return "\n".join(out) + "\n"


# --- constructions ---------------------------------------------------------

def complete_multipartite(profile: Profile | Sequence[int]) -> Graph:
    sizes = [a for a in profile if a > 0]
    n = sum(sizes)
    if n > MAX_VERTICES:
        raise CapacityError(f"{n} vertices exceeds cap {MAX_VERTICES}")
    full = (1 << n) - 1
    rows = []
    start = 0
    for a in sizes:
        block = ((1 << a) - 1) << start
        rows.extend([full & ~block] * a)
        start += a
    return Graph(n, tuple(rows))


def turan_profile(s: int, r: int) -> Profile:
    if r < 1 or r > s:
        raise ValueError(f"Turan graph T({s},{r}) needs 1 <= r <= s")
    p, q = divmod(s, r)
    return Profile([p + 1] * q + [p] * (r - q))


def complement(G: Graph) -> Graph:
    full = (1 << G.n) - 1
    return Graph(G.n, tuple(full & ~row & ~(1 << v) for v, row in enumerate(G.rows)))


def blowup(F: Graph, sizes: Sequence[int]) -> Graph:
    """Replace vertex v of F by an independent set of sizes[v] vertices."""
    if len(sizes) != F.n:
        raise ValueError("need one size per vertex")
    if any(t < 1 for t in sizes):
        raise ValueError("blowup sizes must be positive")
    n = sum(sizes)
    if n > MAX_VERTICES:
        raise CapacityError(f"{n} vertices exceeds cap {MAX_VERTICES}")
    offsets = list(itertools.accumulate(sizes, initial=0))
    blocks = [((1 << sizes[v]) - 1) << offsets[v] for v in range(F.n)]
    rows = []
    for v in range(F.n):
        row = 0
        for u in _bits(F.rows[v]):
            row |= blocks[u]
        rows.extend([row] * sizes[v])
    return Graph(n, tuple(rows))


def lexicographic_product(F: Graph, H: Graph) -> Graph:
    """F[H]: vertex (v, w) -> v * |H| + w."""
    n = F.n * H.n
    if n > MAX_VERTICES:
        raise CapacityError(f"{n} vertices exceeds cap {MAX_VERTICES}")
    block = (1 << H.n) - 1
    rows = []
    for v in range(F.n):
        outer = 0
        for u in _bits(F.rows[v]):
            outer |= block << (u * H.n)
        for w in range(H.n):
            rows.append(outer | (H.rows[w] << (v * H.n)))
    return Graph(n, tuple(rows))


def nested_blowup(F: Graph, depth: int) -> Graph:
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if F.n**depth > MAX_VERTICES:
        raise CapacityError(f"B_{depth} of a {F.n}-vertex graph exceeds {MAX_VERTICES} vertices")
    B = F
    for _ in range(depth - 1):
        B = lexicographic_product(F, B)
    return B


# --- isomorphism and counting ----------------------------------------------

def is_isomorphic(G: Graph, H: Graph) -> bool:
    """Backtracking over degree-compatible vertex maps."""
    if G.n != H.n or G.num_edges() != H.num_edges():
        return False
    dg, dh = G.degrees(), H.degrees()
    if sorted(dg) != sorted(dh):
        return False
    n = G.n
    # map G's vertices in order of decreasing degree
    order = sorted(range(n), key=lambda v: -dg[v])
    image = [-1] * n
    used = 0

    def extend(i):
        nonlocal used
        if i == n:
            return True
        v = order[i]
        for w in range(n):
            if used >> w & 1 or dh[w] != dg[v]:
                continue
            ok = True
            for j in range(i):
                u = order[j]
                if G.adjacent(u, v) != H.adjacent(image[u], w):
                    ok = False
                    break
            if ok:
                image[v] = w
                used |= 1 << w
                if extend(i + 1):
                    return True
                used &= ~(1 << w)
        image[v] = -1
        return False

    return extend(0)


def _local_code(G: Graph, verts: Sequence[int]) -> int:
    code = 0
    b = 0
    for i in range(len(verts)):
        row = G.rows[verts[i]]
        for j in range(i + 1, len(verts)):
            if row >> verts[j] & 1:
                code |= 1 << b
            b += 1
    return code


class _Matcher:
    """Memoised 'is this k-vertex local code isomorphic to a member of family'."""

    def __init__(self, family: Sequence[Graph]):
        self.family = list(family)
        self.k = self.family[0].n
        self.memo: dict[int, bool] = {}

    def __call__(self, code: int) -> bool:
        hit = self.memo.get(code)
        if hit is None:
            H = Graph.from_encoding(self.k, code)
            hit = any(is_isomorphic(H, F) for F in self.family)
            self.memo[code] = hit
        return hit


def _iter_copies(family: Sequence[Graph], G: Graph, matcher: _Matcher | None = None):
    """Yield every vertex subset of G inducing a member of family."""
    k = family[0].n
    if k > G.n:
        return
    matcher = matcher or _Matcher(family)
    n = G.n
    chosen: list[int] = []

    bit = _pair_bit_table(k)

    # the local code grows as vertices are appended in increasing order
    def rec(start, code):
        depth = len(chosen)
        if depth == k:
            if matcher(code):
                yield tuple(chosen)
            return
        for v in range(start, n - (k - depth) + 1):
            row = G.rows[v]
            extra = code
            for i, u in enumerate(chosen):
                if row >> u & 1:
                    extra |= 1 << bit[(i, depth)]
            chosen.append(v)
            yield from rec(v + 1, extra)
            chosen.pop()

    yield from rec(0, 0)


@lru_cache(maxsize=None)
def _pair_bit_table(k: int) -> dict[tuple[int, int], int]:
    return {p: b for b, p in enumerate(pair_order(k))}


def count_induced_family(family: Sequence[Graph], G: Graph) -> int:
    if not family:
        return 0
    if len({F.n for F in family}) != 1:
        raise ValueError("family members must share a vertex count")
    return sum(1 for _ in _iter_copies(family, G))


def count_induced(F: Graph, G: Graph) -> int:
    """Number of |V(F)|-subsets of V(G) inducing a copy of F."""
    return count_induced_family([F], G)


def induced_density(F: Graph, G: Graph) -> Fraction:
    total = binomial(G.n, F.n)
    if total == 0:
        return Fraction(0)
    return Fraction(count_induced(F, G), total)


def copies_per_vertex(family: Sequence[Graph], G: Graph) -> tuple[int, list[int]]:
    """Total induced family copies and, per vertex, the copies containing it."""
    per = [0] * G.n
    total = 0
    for verts in _iter_copies(family, G):
        total += 1
        for v in verts:
            per[v] += 1
    return total, per


# --- cliques and colouring ------------------------------------------------

def clique_number(G: Graph) -> int:
    best = 0

    def expand(size, cand):
        nonlocal best
        if not cand:
            best = max(best, size)
            return
        if size + bin(cand).count("1") <= best:
            return
        while cand:
            if size + bin(cand).count("1") <= best:
                return
            v = cand.bit_length() - 1
            cand &= ~(1 << v)
            expand(size + 1, cand & G.rows[v])

    expand(0, (1 << G.n) - 1)
    return best


def _colorable(G: Graph, k: int) -> bool:
    n = G.n
    order = sorted(range(n), key=lambda v: -bin(G.rows[v]).count("1"))
    color = [-1] * n

    def rec(i, used):
        if i == n:
            return True
        v = order[i]
        taken = {color[u] for u in _bits(G.rows[v]) if color[u] >= 0}
        # symmetry break: at most one fresh colour per step
        for c in range(min(used + 1, k)):
            if c not in taken:
                color[v] = c
                if rec(i + 1, max(used, c + 1)):
                    return True
        color[v] = -1
        return False

    return rec(0, 0)


def coloring_stats(G: Graph) -> tuple[int, int]:
    """(clique number, chromatic number), exact."""
    if G.n > MAX_COLORING:
        raise CapacityError(f"exact colouring capped at {MAX_COLORING} vertices")
    if G.n == 0:
        return 0, 0
    omega = clique_number(G)
    chi = omega
    while not _colorable(G, chi):
        chi += 1
    return omega, chi


# --- symmetrization ------------------------------------------------------

def symmetrize_step(G: Graph, u: int, v: int) -> Graph:
    """Replace u by a copy of v (u and v end up nonadjacent twins)."""
    if u == v or G.adjacent(u, v):
        raise ValueError(f"symmetrization needs distinct nonadjacent vertices, got {u}, {v}")
    nv = G.rows[v]
    rows = list(G.rows)
    bu = 1 << u
    for w in range(G.n):
        if w == u:
            continue
        if nv >> w & 1:
            rows[w] |= bu
        else:
            rows[w] &= ~bu
    rows[u] = nv
    return Graph(G.n, tuple(rows))


def twin_classes(G: Graph) -> list[list[int]]:
    classes: dict[int, list[int]] = {}
    for v in range(G.n):
        classes.setdefault(G.rows[v], []).append(v)
    return sorted(classes.values())


def is_complete_multipartite(G: Graph) -> Profile | None:
    if G.n == 0:
        return None
    classes = twin_classes(G)
    full = (1 << G.n) - 1
    for cls in classes:
        mask = sum(1 << v for v in cls)
        # a twin class is independent automatically; it must see everything else
        if G.rows[cls[0]] != full & ~mask:
            return None
    return Profile(len(c) for c in classes)


@dataclass
class SymmetrizationStep:
    source: int      # vertex whose neighbourhood is copied
    replaced: int    # vertex that becomes its twin
    before: int
    after: int
    kind: str        # "strict" or "absorb"


@dataclass
class SymmetrizationTrace:
    steps: list[SymmetrizationStep] = field(default_factory=list)
    final: Graph | None = None
    initial_count: int = 0
    final_count: int = 0


def symmetrize_to_multipartite(G: Graph, family: Sequence[Graph]) -> SymmetrizationTrace:
    """Zykov-symmetrize G until it is complete multipartite.

    Strict steps clone v onto u whenever u, v are nonadjacent and u lies in
    fewer family copies than v (lexicographic scan).  When none remain, a
    non-twin nonadjacent pair is resolved by moving a vertex from the smaller
    twin class into the larger one; the count cannot drop for a symmetrizable
    family, and sum of squared class sizes strictly grows, so this terminates.
    """
    if G.n > MAX_SYMMETRIZE:
        raise CapacityError(f"symmetrization capped at {MAX_SYMMETRIZE} vertices")
    family = list(family)
    matcher = _Matcher(family) if family and family[0].n <= G.n else None
    n = G.n

    def stats(H):
        if matcher is None:
            return 0, [0] * n
        per = [0] * n
        total = 0
        for verts in _iter_copies(family, H, matcher):
            total += 1
            for v in verts:
                per[v] += 1
        return total, per

    trace = SymmetrizationTrace()
    total, per = stats(G)
    trace.initial_count = total
    cap = max(n * n, 1)
    while True:
        if len(trace.steps) >= cap:
            raise RuntimeError(f"symmetrization did not terminate within {cap} steps")
        move = None
        for u, v in pair_order(n):
            if G.adjacent(u, v):
                continue
            if per[u] < per[v]:
                move = (v, u, "strict")
                break
            if per[v] < per[u]:
                move = (u, v, "strict")
                break
        if move is None:
            size = {}
            for cls in twin_classes(G):
                for v in cls:
                    size[v] = len(cls)
            for u, v in pair_order(n):
                if G.adjacent(u, v) or G.rows[u] == G.rows[v]:
                    continue
                # u is cloned onto the lower-index class when sizes tie
                move = (u, v, "absorb") if size[u] >= size[v] else (v, u, "absorb")
                break
        if move is None:
            break
        src, dst, kind = move
        G = symmetrize_step(G, dst, src)
        new_total, per = stats(G)
        trace.steps.append(SymmetrizationStep(src, dst, total, new_total, kind))
        total = new_total
    trace.final = G
    trace.final_count = total
    return trace


def is_symmetrizable_family(graphs: Sequence[Graph]) -> bool:
    return symmetrizable_witness(graphs) is None


def symmetrizable_witness(graphs: Sequence[Graph]):
    """None if the family is closed under symmetrization, else (member index, u, v)."""
    graphs = list(graphs)
    if not graphs:
        return None
    if len({g.n for g in graphs}) != 1:
        raise ValueError("family members must share a vertex count")
    if graphs[0].n > MAX_ISO_PREDICATE:
        raise CapacityError(f"isomorphism predicates capped at {MAX_ISO_PREDICATE} vertices")
    for idx, F in enumerate(graphs):
        for u, v in itertools.permutations(range(F.n), 2):
            if F.adjacent(u, v):
                continue
            H = symmetrize_step(F, u, v)
            if not any(is_isomorphic(H, M) for M in graphs):
                return idx, u, v
    return None


# --- structural predicates ----------------------------------------------

def homogeneous_partition(F: Graph, parts: Sequence[Sequence[int]]) -> bool:
    """True iff every pair of distinct parts is completely joined or fully non-adjacent."""
    masks = [sum(1 << v for v in p) for p in parts]
    for a, pa in enumerate(parts):
        for b in range(len(parts)):
            if a == b:
                continue
            seen = {F.rows[v] & masks[b] for v in pa}
            if seen - {0, masks[b]}:
                return False
    return True


def fuzzy_blowup_witness(F: Graph):
    """A partition into 2..n-1 homogeneous parts, or None when F is robust.

    Such a partition exists iff F has a module M with 2 <= |M| <= n-1
    (every vertex outside M sees all of M or none of it); M plus singletons
    is then a witness.
    """
    n = F.n
    if n > MAX_ISO_PREDICATE:
        raise CapacityError(f"robustness check capped at {MAX_ISO_PREDICATE} vertices")
    full = (1 << n) - 1
    for size in range(2, n):
        for M in itertools.combinations(range(n), size):
            mask = sum(1 << v for v in M)
            if all((F.rows[w] & mask) in (0, mask) for w in range(n) if not mask >> w & 1):
                rest = [[w] for w in range(n) if not mask >> w & 1]
                return [list(M)] + rest
    return None


def is_robust(F: Graph) -> bool:
    return fuzzy_blowup_witness(F) is None


def is_strongly_unbalanced(profile: Profile) -> bool:
    a = profile.parts
    return all((a[i] - a[j]) ** 2 > a[i] + a[j] for i, j in itertools.combinations(range(len(a)), 2))


def random_graph(n: int, p: float = 0.5, rng: random.Random | None = None) -> Graph:
    rng = rng or random.Random()
    return Graph.from_edges(n, [e for e in pair_order(n) if rng.random() < p])
