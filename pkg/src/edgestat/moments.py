"""Moments of the induced edge count, from the distribution and in closed form.

Closed forms sum over ordered tuples of edges.  A tuple's expectation only
depends on how many vertices the union of its distinct edges covers, so tuples
are grouped by the shape of that union and weighted by the subgraph census.
Everything runs in exact rationals with p_t = (k)_t / (n)_t, the probability
that t fixed vertices all land in the random k-set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb

from .census import SHAPES, census, shapes_with_edges
from .distribution import DEFAULT_BUDGET, EdgeDistribution, exact_distribution
from .errors import EdgeStatError
from .graph import Graph


@dataclass(frozen=True)
class MomentSet:
    mu: Fraction
    central2: Fraction
    central3: Fraction
    central4: Fraction
    binom_moments: dict[int, Fraction] = field(default_factory=dict)  # r -> E[C(X, r)]

    def as_floats(self) -> dict:
        return {
            "mu": float(self.mu),
            "central2": float(self.central2),
            "central3": float(self.central3),
            "central4": float(self.central4),
            "binom_moments": {r: float(v) for r, v in self.binom_moments.items()},
        }

    def to_json(self) -> dict:
        return {
            "mu": fmt(self.mu),
            "central2": fmt(self.central2),
            "central3": fmt(self.central3),
            "central4": fmt(self.central4),
            "binom_moments": {str(r): fmt(v) for r, v in sorted(self.binom_moments.items())},
            "real": self.as_floats(),
        }


def fmt(x) -> str:
    """Rationals as 'p/q' strings (integers without denominator)."""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def distribution_moments(d: EdgeDistribution) -> MomentSet:
    total = d.total
    mu = Fraction(sum(l * c for l, c in enumerate(d.counts)), total)
    central = {}
    for q in (2, 3, 4):
        central[q] = sum((c * (l - mu) ** q for l, c in enumerate(d.counts) if c), Fraction(0)) / total
    binom = {
        r: Fraction(sum(c * comb(l, r) for l, c in enumerate(d.counts)), total)
        for r in range(1, 5)
    }
    return MomentSet(mu, central[2], central[3], central[4], binom)


# closed forms ------------------------------------------------------------------

def falling(x: int, t: int) -> int:
    out = 1
    for i in range(t):
        out *= x - i
    return out


def vertex_prob(n: int, k: int, t: int) -> Fraction:
    """P(t fixed vertices all lie in a uniform k-subset of n vertices)."""
    if t > n:
        return Fraction(0)
    return Fraction(falling(k, t), falling(n, t))


def _check_k(g: Graph, k: int) -> None:
    if not 1 <= k <= g.n:
        raise EdgeStatError(f"need 1 <= k <= n, got k={k}, n={g.n}")


def expected_edges(g: Graph, k: int) -> Fraction:
    _check_k(g, k)
    return g.m * Fraction(k * (k - 1), g.n * (g.n - 1)) if g.n > 1 else Fraction(0)


def binomial_moment_closed_form(g: Graph, k: int, r: int, cen=None) -> Fraction:
    """E[C(X, r)] as a sum over r-edge subgraphs of P(all their vertices in A)."""
    _check_k(g, k)
    if r not in (1, 2, 3, 4):
        raise EdgeStatError("closed-form binomial moments cover r = 1..4 only")
    cen = cen or census(g)
    return sum(
        (cen[name] * vertex_prob(g.n, k, _nverts(name)) for name in shapes_with_edges(r)),
        Fraction(0),
    )


def _nverts(name: str) -> int:
    return len({v for e in SHAPES[name] for v in e})


def tuple_count(name: str, q: int) -> int:
    """Ordered q-tuples of edges whose set of distinct edges is one fixed copy of the shape."""
    edges = SHAPES[name]
    j = len(edges)
    return sum(1 for phi in product(range(j), repeat=q) if len(set(phi)) == j)


@lru_cache(maxsize=None)
def _tuple_terms(name: str, q: int) -> tuple[tuple[int, int, int], ...]:
    """(subset size s, vertex count t, multiplicity) summed over surjective tuples.

    A tuple contributes sum over position subsets B of (-p2)^(q-|B|) * p_t(B),
    where repeated edges collapse since X_e^2 = X_e.
    """
    edges = SHAPES[name]
    j = len(edges)
    tally: dict[tuple[int, int], int] = {}
    for phi in product(range(j), repeat=q):
        if len(set(phi)) != j:
            continue
        for bits in range(1 << q):
            used = {phi[i] for i in range(q) if bits >> i & 1}
            verts = {v for e in used for v in edges[e]}
            key = (bin(bits).count("1"), len(verts))
            tally[key] = tally.get(key, 0) + 1
    return tuple((s, t, c) for (s, t), c in sorted(tally.items()))


def shape_weight(name: str, q: int, n: int, k: int) -> Fraction:
    p2 = vertex_prob(n, k, 2)
    return sum(
        (c * (-p2) ** (q - s) * vertex_prob(n, k, t) for s, t, c in _tuple_terms(name, q)),
        Fraction(0),
    )


def central_moment_closed_form(g: Graph, k: int, q: int, cen=None) -> Fraction:
    """E[(X - mu)^q] for q <= 4 from the subgraph census, no enumeration."""
    _check_k(g, k)
    if q not in (1, 2, 3, 4):
        raise EdgeStatError("closed-form central moments cover q = 1..4 only")
    cen = cen or census(g)
    total = Fraction(0)
    for name, edges in SHAPES.items():
        if len(edges) <= q and cen[name]:
            total += cen[name] * shape_weight(name, q, g.n, k)
    return total


def variance_closed_form(g: Graph, k: int, cen=None) -> Fraction:
    _check_k(g, k)
    cen = cen or census(g)
    n = g.n
    mu = expected_edges(g, k)
    second = (cen["K2"] * vertex_prob(n, k, 2)
              + 2 * cen["K1,2"] * vertex_prob(n, k, 3)
              + 2 * cen["2K2"] * vertex_prob(n, k, 4))
    return second - mu * mu


def fourth_central_closed_form(g: Graph, k: int, cen=None) -> Fraction:
    return central_moment_closed_form(g, k, 4, cen)


def closed_form_moments(g: Graph, k: int) -> MomentSet:
    cen = census(g)
    return MomentSet(
        expected_edges(g, k),
        variance_closed_form(g, k, cen),
        central_moment_closed_form(g, k, 3, cen),
        fourth_central_closed_form(g, k, cen),
        {r: binomial_moment_closed_form(g, k, r, cen) for r in range(1, 5)},
    )


# Poisson comparison ------------------------------------------------------------

def poisson_pmf(mu: float, l: int) -> float:
    if mu < 0:
        raise EdgeStatError("Poisson mean must be >= 0")
    if l < 0:
        return 0.0
    if mu == 0:
        return 1.0 if l == 0 else 0.0
    if l > 20:
        return math.exp(-mu + l * math.log(mu) - math.lgamma(l + 1))
    return math.exp(-mu) * mu**l / math.factorial(l)


@dataclass(frozen=True)
class CheckReport:
    quantity: str
    lhs: object
    rhs: object
    holds: bool
    slack: object
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "quantity": self.quantity,
            "lhs": fmt(self.lhs),
            "rhs": fmt(self.rhs),
            "holds": self.holds,
            "slack": fmt(self.slack),
        }
        if self.extra:
            out["extra"] = {k: fmt(v) if isinstance(v, (Fraction, int, float)) else v
                            for k, v in self.extra.items()}
        return out


@dataclass(frozen=True)
class BrunReport:
    r: int
    binomial_moment: Fraction
    poisson_moment: Fraction
    ratio: Fraction | None

    def to_json(self) -> dict:
        return {
            "quantity": f"E[C(X,{self.r})] / (mu^{self.r}/{self.r}!)",
            "lhs": fmt(self.binomial_moment),
            "rhs": fmt(self.poisson_moment),
            "ratio": fmt(self.ratio) if self.ratio is not None else None,
            "ratio_real": float(self.ratio) if self.ratio is not None else None,
        }


def brun_check(g: Graph, k: int, r: int) -> BrunReport:
    """Compare E[C(X, r)] with the Poisson binomial moment mu^r / r!."""
    if r not in (1, 2, 3, 4):
        raise EdgeStatError("r must be in 1..4")
    bm = binomial_moment_closed_form(g, k, r)
    mu = expected_edges(g, k)
    pm = mu**r / math.factorial(r)
    return BrunReport(r, bm, pm, bm / pm if pm else None)


@dataclass(frozen=True)
class AntiConcentrationReport:
    sigma2: Fraction
    central4: Fraction
    b: Fraction
    bound: float
    p_above: Fraction
    p_below: Fraction
    p_at: Fraction | None
    above_holds: bool
    below_holds: bool
    ceiling_holds: bool | None

    @property
    def holds(self) -> bool:
        return self.above_holds and self.below_holds

    def reports(self) -> list[CheckReport]:
        out = [
            CheckReport("P(X > mu) >= 2^(-4/3)/b", self.p_above, self.bound,
                        self.above_holds, float(self.p_above) - self.bound),
            CheckReport("P(X < mu) >= 2^(-4/3)/b", self.p_below, self.bound,
                        self.below_holds, float(self.p_below) - self.bound),
        ]
        if self.p_at is not None:
            out.append(CheckReport("P(X = l) <= 1 - 2^(-4/3)/b", self.p_at, 1 - self.bound,
                                   bool(self.ceiling_holds), 1 - self.bound - float(self.p_at)))
        return out

    def to_json(self) -> dict:
        return {
            "sigma2": fmt(self.sigma2),
            "central4": fmt(self.central4),
            "b": fmt(self.b),
            "bound": self.bound,
            "checks": [r.to_json() for r in self.reports()],
            "holds": self.holds,
        }


def _at_least_agk(prob: Fraction, b: Fraction) -> bool:
    # prob >= 2^(-4/3) / b  <=>  16 * (prob * b)^3 >= 1, exactly
    return 16 * (prob * b) ** 3 >= 1


def anti_concentration_check(d: EdgeDistribution, l: int | None = None) -> AntiConcentrationReport:
    """Fourth-moment anti-concentration: both tails of X - mu carry mass >= 2^(-4/3)/b."""
    ms = distribution_moments(d)
    sigma2 = ms.central2
    if sigma2 <= 0:
        raise EdgeStatError("anti-concentration needs positive variance; X is constant")
    b = ms.central4 / sigma2**2
    mu = ms.mu
    above = Fraction(sum(c for x, c in enumerate(d.counts) if x > mu), d.total)
    below = Fraction(sum(c for x, c in enumerate(d.counts) if x < mu), d.total)
    bound = 2.0 ** (-4.0 / 3.0) / float(b)
    p_at = ceiling = None
    if l is not None:
        p_at = d.probability_at(l)
        # P(X = l) <= 1 - 2^(-4/3)/b  <=>  (1 - P) >= 2^(-4/3)/b
        ceiling = _at_least_agk(1 - p_at, b)
    return AntiConcentrationReport(sigma2, ms.central4, b, bound, above, below, p_at,
                                   _at_least_agk(above, b), _at_least_agk(below, b), ceiling)


@dataclass(frozen=True)
class ShiftReport:
    k: int
    t: int
    p_prev: Fraction  # P(X_{k-1} = t)
    p_cur: Fraction  # P(X_k = t)
    lower: Fraction
    upper: Fraction

    @property
    def lower_holds(self) -> bool:
        return self.p_prev >= self.lower

    @property
    def upper_holds(self) -> bool:
        return self.p_prev <= self.upper

    @property
    def holds(self) -> bool:
        return self.lower_holds and self.upper_holds

    def reports(self) -> list[CheckReport]:
        return [
            CheckReport("P(X_{k-1}=t) >= (k-2t)/k * P(X_k=t)", self.p_prev, self.lower,
                        self.lower_holds, self.p_prev - self.lower),
            CheckReport("P(X_{k-1}=t) <= P(X_k=t) + (2t+2)/k", self.p_prev, self.upper,
                        self.upper_holds, self.upper - self.p_prev),
        ]

    def to_json(self) -> dict:
        return {"k": self.k, "t": self.t, "checks": [r.to_json() for r in self.reports()],
                "holds": self.holds}


def shift_inequality_check(g: Graph, k: int, t: int, budget: int = DEFAULT_BUDGET,
                           dists: tuple[EdgeDistribution, EdgeDistribution] | None = None
                           ) -> ShiftReport:
    """Compare P(X = t) for k-1 and k vertices against the one-vertex deletion bounds."""
    if not 2 <= k <= g.n:
        raise EdgeStatError(f"need 2 <= k <= n, got k={k}, n={g.n}")
    if not 0 <= t <= comb(k, 2):
        raise EdgeStatError(f"t={t} outside [0, {comb(k, 2)}]")
    prev, cur = dists or (exact_distribution(g, k - 1, budget), exact_distribution(g, k, budget))
    p_prev = prev.probability_at(t) if t <= prev.max_edges else Fraction(0)
    p_cur = cur.probability_at(t)
    return ShiftReport(k, t, p_prev, p_cur,
                       Fraction(k - 2 * t, k) * p_cur,
                       p_cur + Fraction(2 * t + 2, k))
