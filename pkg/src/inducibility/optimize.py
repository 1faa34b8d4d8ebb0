"""Global maximisation of induced-density polynomials over the simplex.

Each local run alternates three moves until none helps:

* projected gradient ascent with Armijo backtracking,
* a Newton solve of the first-order (KKT) system on the current support,
* pairwise line searches along Q(a): the mass x_i + x_j is re-split as
  (a, 1-a) and Q is maximised exactly on [0, 1].  This both balances two
  parts and, with a = 0 or 1, merges them; paired with an empty coordinate
  it splits a part.

Tiny coordinates (below ``merge_threshold``) are folded away.  The best
local run over a seeded multi-start wins.  Values are floats; exact values
are attached only when a rational structured candidate (equipartition, or
one distinguished part) reproduces the optimum and passes an exact
first-order check.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import comb

import numpy as np
from scipy.optimize import brentq

from .core import Profile, frac_str
from .density import (
    DensityPolynomial,
    SimplexPoint,
    density_polynomial,
    evaluate,
    exact_gradient,
)
from .graphs import is_strongly_unbalanced

log = logging.getLogger(__name__)

CERTIFY_TOL = 1e-9


@dataclass
class OptimizerConfig:
    restarts: int = 64
    max_iter: int = 5000
    grad_tol: float = 1e-12
    seed: int = 0
    merge_threshold: float = 1e-9
    threads: int = 1

    def __post_init__(self):
        for name in ("restarts", "max_iter", "grad_tol", "merge_threshold", "threads"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class Move:
    kind: str          # "merge" or "balance"
    before: float
    after: float
    mass: float        # mass folded away (merge) or re-split (balance)


@dataclass
class OptimizationReport:
    point: tuple[float, ...]
    value: float
    restarts: int
    iterations: int
    grad_norm: float
    stationary: bool
    exact_value: Fraction | None = None
    exact_point: tuple[Fraction, ...] | None = None
    moves: list[Move] = field(default_factory=list)

    @property
    def support(self) -> int:
        return sum(1 for x in self.point if x > 0)

    def to_dict(self) -> dict:
        out = {
            "value": self.value,
            "point": list(self.point),
            "parts_used": self.support,
            "restarts": self.restarts,
            "iterations": self.iterations,
            "grad_norm": self.grad_norm,
            "stationary": self.stationary,
            "certified": self.exact_value is not None,
        }
        if self.exact_value is not None:
            out["exact"] = frac_str(self.exact_value)
            out["num"] = str(self.exact_value.numerator)
            out["den"] = str(self.exact_value.denominator)
            out["exact_point"] = [frac_str(x) for x in self.exact_point]
        return out


class NonConvergenceError(RuntimeError):
    def __init__(self, report: OptimizationReport):
        super().__init__(f"no start reached stationarity (best residual {report.grad_norm:.3g})")
        self.report = report


# --- primitives -------------------------------------------------------------

def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-based)."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, len(v) + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def kkt_residual(g: np.ndarray, x: np.ndarray) -> float:
    """Spread of the gradient on the support plus any off-support excess."""
    on = x > 0
    lam = float(np.mean(g[on]))
    res = float(np.max(np.abs(g[on] - lam)))
    if (~on).any():
        res = max(res, float(np.max(g[~on] - lam)))
    return res


def _restriction_numeric(poly: DensityPolynomial, x: np.ndarray, i: int, j: int) -> np.ndarray:
    E = poly._exps
    P = x[None, :] ** E
    P[:, i] = 1.0
    P[:, j] = 1.0
    S = x[i] + x[j]
    w = poly._coeffs * np.prod(P, axis=1) * S ** (E[:, i] + E[:, j])
    s = poly.s
    W = np.zeros((s + 1, s + 1))
    np.add.at(W, (E[:, i], E[:, j]), w)
    coeffs = np.zeros(s + 1)
    for ei, ej in zip(*np.nonzero(W)):
        for t in range(ej + 1):
            coeffs[ei + t] += W[ei, ej] * comb(int(ej), t) * (-1) ** t
    return coeffs


def _best_split(coeffs: np.ndarray, a0: float) -> tuple[float, float, float]:
    """Maximise Q on [0, 1]; returns (a, Q(a), Q(a0))."""
    Q = np.polynomial.Polynomial(coeffs)
    dQ = Q.deriv()
    cands = [a0, 0.0, 0.5, 1.0]
    grid = np.linspace(0.0, 1.0, 65)
    d = dQ(grid)
    for k in range(64):
        if d[k] == 0.0:
            cands.append(float(grid[k]))
        elif d[k] * d[k + 1] < 0:
            cands.append(brentq(dQ, grid[k], grid[k + 1], xtol=1e-15))
    vals = Q(np.array(cands))
    best = int(np.argmax(vals))
    return cands[best], float(vals[best]), float(vals[0])


# --- local run ---------------------------------------------------------------

@dataclass
class _Local:
    x: np.ndarray
    value: float
    residual: float
    iterations: int
    moves: list[Move]


class _Runner:
    def __init__(self, poly: DensityPolynomial, config: OptimizerConfig):
        self.poly = poly
        self.cfg = config

    def f(self, x):
        return self.poly.value_at(x)

    def ascend(self, x, budget):
        poly = self.poly
        fx = self.f(x)
        g = poly.grad_at(x)
        eta = 0.1
        it = 0
        while it < budget:
            it += 1
            while True:
                y = project_simplex(x + eta * g)
                fy = self.f(y)
                if fy >= fx + 1e-4 * float(g @ (y - x)):
                    break
                eta *= 0.5
                if eta < 1e-18:
                    return x, it
            step = float(np.max(np.abs(y - x)))
            x, fx = y, fy
            g = poly.grad_at(x)
            eta = min(eta * 2.0, 1e3)
            if step < 1e-15 or kkt_residual(g, x) < 1e-8:
                break
        return x, it

    def merge(self, x, moves):
        small = (x > 0) & (x < self.cfg.merge_threshold)
        if not small.any():
            return x
        before = self.f(x)
        mass = float(x[small].sum())
        y = np.where(small, 0.0, x)
        y /= y.sum()
        moves.append(Move("merge", before, self.f(y), mass))
        return y

    def newton(self, x):
        """Newton on the KKT system restricted to the support of x."""
        poly = self.poly
        fx = self.f(x)
        for _ in range(60):
            g = poly.grad_at(x)
            if kkt_residual(g, x) <= self.cfg.grad_tol:
                break
            on = np.nonzero(x > 0)[0]
            q = len(on)
            lam = float(np.mean(g[on]))
            H = poly.hessian_at(x)[np.ix_(on, on)]
            K = np.zeros((q + 1, q + 1))
            K[:q, :q] = H
            K[:q, q] = -1.0
            K[q, :q] = 1.0
            rhs = np.concatenate([-(g[on] - lam), [0.0]])
            try:
                sol = np.linalg.solve(K, rhs)
            except np.linalg.LinAlgError:
                sol = np.linalg.lstsq(K, rhs, rcond=None)[0]
            y = x.copy()
            y[on] += sol[:q]
            if (y[on] <= 0).any():
                break
            y /= y.sum()
            fy = self.f(y)
            if fy < fx - 1e-14 * max(1.0, abs(fx)):
                break
            if np.array_equal(x, y):
                break
            x, fx = y, fy
        return x

    def balance(self, x, moves):
        """One sweep of pairwise Q(a) line searches; True if anything improved."""
        improved = False
        m = len(x)
        for i in range(m):
            for j in range(i + 1, m):
                S = x[i] + x[j]
                if S <= 0:
                    continue
                empty = np.nonzero(x == 0)[0]
                # empty slots are interchangeable; only the first is tried
                if (x[i] == 0 and i != empty[0]) or (x[j] == 0 and j != empty[0]):
                    continue
                coeffs = _restriction_numeric(self.poly, x, i, j)
                a0 = x[i] / S
                a, qa, q0 = _best_split(coeffs, a0)
                if qa > q0 + 1e-14 * max(1.0, abs(q0)):
                    before = self.f(x)
                    y = x.copy()
                    y[i], y[j] = a * S, (1.0 - a) * S
                    y = np.maximum(y, 0.0)
                    y /= y.sum()
                    after = self.f(y)
                    if after > before:
                        moves.append(Move("balance", before, after, float(S)))
                        x[:] = y
                        improved = True
        return improved

    def run(self, x0) -> _Local:
        x = project_simplex(np.asarray(x0, dtype=float))
        moves: list[Move] = []
        used = 0
        for _ in range(20):
            x, it = self.ascend(x, max(self.cfg.max_iter - used, 1))
            used += it
            x = self.merge(x, moves)
            x = self.newton(x)
            x = self.merge(x, moves)
            if not self.balance(x, moves):
                break
        g = self.poly.grad_at(x)
        return _Local(x, self.f(x), kkt_residual(g, x), used, moves)


def _better(a: _Local, b: _Local | None, tol: float) -> bool:
    if b is None:
        return True
    sa, sb = a.residual <= tol, b.residual <= tol
    if sa != sb:
        return sa
    if abs(a.value - b.value) > 1e-13 * max(1.0, abs(b.value)):
        return a.value > b.value
    return tuple(np.sort(a.x)[::-1]) > tuple(np.sort(b.x)[::-1])


def _starts(poly: DensityPolynomial, config: OptimizerConfig, extra=()):
    m, r = poly.m, poly.profile.r
    starts = [np.asarray(x, dtype=float) for x in extra]
    for ell in range(max(r, 1), m + 1):
        x = np.zeros(m)
        x[:ell] = 1.0 / ell
        starts.append(x)
    idx = 0
    while len(starts) < config.restarts:
        rng = np.random.default_rng([config.seed, idx])
        e = rng.exponential(size=m)
        starts.append(e / e.sum())
        idx += 1
    return starts


def maximize_on_simplex(poly: DensityPolynomial, config: OptimizerConfig | None = None,
                        extra_starts=()) -> OptimizationReport:
    config = config or OptimizerConfig()
    if poly.is_zero():
        raise ValueError("polynomial is identically zero (fewer parts than the target)")
    runner = _Runner(poly, config)
    starts = _starts(poly, config, extra_starts)
    if config.threads > 1:
        with ThreadPoolExecutor(config.threads) as pool:
            results = list(pool.map(runner.run, starts))
    else:
        results = [runner.run(x) for x in starts]
    best = None
    for res in results:
        if _better(res, best, config.grad_tol):
            best = res
    report = OptimizationReport(
        point=tuple(float(v) for v in np.sort(best.x)[::-1]),
        value=best.value,
        restarts=len(starts),
        iterations=sum(r.iterations for r in results),
        grad_norm=best.residual,
        stationary=best.residual <= config.grad_tol,
        moves=best.moves,
    )
    if not report.stationary:
        raise NonConvergenceError(report)
    return report


# --- exact certification ------------------------------------------------------

def exact_kkt(poly: DensityPolynomial, point: SimplexPoint) -> bool:
    """Exact first-order conditions: equal partials on the support, none larger off it."""
    g = exact_gradient(poly, point)
    on = [gi for gi, xi in zip(g, point) if xi > 0]
    lam = on[0]
    if any(gi != lam for gi in on):
        return False
    return all(gi <= lam for gi, xi in zip(g, point) if xi == 0)


def structured_candidates(profile: Profile, m: int, point=()) -> list[SimplexPoint]:
    """Equipartitions on r..m parts, plus (b, .., b, 1-(q-1)b) fitted to ``point``."""
    out = [SimplexPoint.equipartition(ell, m) for ell in range(profile.r, m + 1)]
    xs = sorted((x for x in point if x > 0), reverse=True)
    q = len(xs)
    if q >= 2:
        for lone in (0, q - 1):
            rest = xs[:lone] + xs[lone + 1:]
            if max(rest) - min(rest) > 1e-7:
                continue
            beta = Fraction(float(np.mean(rest))).limit_denominator(10**5)
            other = 1 - (q - 1) * beta
            if other <= 0 or abs(float(beta) - rest[0]) > 1e-9:
                continue
            coords = [beta] * (q - 1) + [other] + [Fraction(0)] * (m - q)
            out.append(SimplexPoint(sorted(coords, reverse=True), exact=True))
    return out


def _zero_report(m: int) -> OptimizationReport:
    pt = SimplexPoint.equipartition(m)
    return OptimizationReport(tuple(float(x) for x in pt), 0.0, 0, 0, 0.0, True,
                              Fraction(0), pt.coords)


def inducibility_partite(profile: Profile, k: int, config: OptimizerConfig | None = None,
                         extra_starts=()) -> OptimizationReport:
    """i_k(F): maximum of the density polynomial over the (k-2)-simplex."""
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    config = config or OptimizerConfig()
    m = k - 1
    poly = density_polynomial(profile, m)
    if poly.is_zero():
        return _zero_report(m)
    report = maximize_on_simplex(poly, config, extra_starts)
    certified = None
    for cand in structured_candidates(profile, m, report.point):
        val = evaluate(poly, cand)
        if float(val) > report.value + 1e-12:
            # a structured point beats the search; adopt it so the report dominates
            x = cand.as_array()
            report.point = tuple(sorted(x, reverse=True))
            report.value = float(val)
            report.grad_norm = kkt_residual(poly.grad_at(x), x)
        if abs(float(val) - report.value) <= CERTIFY_TOL and exact_kkt(poly, cand):
            if certified is None or val > certified[0]:
                certified = (val, cand)
    if certified is not None:
        report.exact_value = certified[0]
        report.exact_point = certified[1].coords
    return report


@dataclass
class LimitReport:
    profile: Profile
    values: list[tuple[int, float]]
    reports: list[OptimizationReport]
    stabilization: int | None
    warnings: list[str]

    def to_dict(self) -> dict:
        return {
            "profile": str(self.profile),
            "values": [{"m": m, "value": v, **({"exact": frac_str(rep.exact_value)}
                                               if rep.exact_value is not None else {})}
                       for (m, v), rep in zip(self.values, self.reports)],
            "stabilization": self.stabilization,
            "warnings": self.warnings,
        }


NOT_ATTAINED_WARNING = (
    "profile has two singleton parts: the supremum over m may not be attained "
    "by any finite number of parts"
)


def inducibility_limit(profile: Profile, m_max: int,
                       config: OptimizerConfig | None = None) -> LimitReport:
    """Optimum over m = r..m_max graphon parts, warm-starting each m from m-1."""
    if m_max < profile.r:
        raise ValueError(f"m_max must be >= r = {profile.r}")
    config = config or OptimizerConfig()
    values, reports = [], []
    prev = None
    for m in range(profile.r, m_max + 1):
        extra = [] if prev is None else [list(prev) + [0.0]]
        rep = inducibility_partite(profile, m + 1, config, extra)
        if reports and rep.value < values[-1][1]:
            # the padded previous optimum is feasible here; never report less
            log.info("optimum for m=%d fell below m=%d; keeping the embedded point", m, m - 1)
            last = reports[-1]
            rep = replace(last, point=last.point + (0.0,), moves=[],
                          exact_point=None if last.exact_point is None else last.exact_point + (Fraction(0),))
        values.append((m, rep.value))
        reports.append(rep)
        prev = rep.point
    stabilization = None
    for (m0, v0), (m1, v1) in zip(values, values[1:]):
        if v1 - v0 < 1e-10:
            stabilization = m0
            break
    warnings = []
    a = profile.parts
    if profile.r >= 2 and a[-2] == 1:
        warnings.append(NOT_ATTAINED_WARNING)
    return LimitReport(profile, values, reports, stabilization, warnings)


def check_distinct_parts(profile: Profile, k: int, separation: float = 1e-3,
                         config: OptimizerConfig | None = None) -> bool:
    """Are all nonzero parts of the optimal graphon pairwise separated by more than ``separation``?"""
    if not is_strongly_unbalanced(profile):
        raise ValueError(f"K_{{{profile}}} is not strongly unbalanced")
    if k <= profile.r:
        raise ValueError(f"need k > r = {profile.r}")
    rep = inducibility_partite(profile, k, config)
    xs = sorted(x for x in rep.point if x > 0)
    return all(b - a > separation for a, b in zip(xs, xs[1:]))
