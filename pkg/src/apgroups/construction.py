"""Subgroups with no long progressions: the order/resultant toolkit.

A prime p admits an AP-free subgroup of order d when no t != 0 has
<1+t, ..., 1+rt> inside it.  The pieces here compute those generated orders,
the relation polynomials F = prod (1+sx)^u_s - prod (1+sx)^u_s whose common
roots mod p certify small orders, their resultants, prime-divisor densities
of p - 1, and ranks of multiplicative relations among 1 + sz.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import kernels
from .ap_census import count_normalized
from .errors import DomainError, ResourceError
from .field_core import (
    FieldContext,
    build_context,
    element_order,
    factorize,
    lcm_all,
    primes_upto,
    subgroup,
)
from .polynomials import IntPolynomial, coprime_basis, resultant

log = logging.getLogger(__name__)

__all__ = [
    "ApFreeRow",
    "ConstructionConfig",
    "MinOrdResult",
    "MultIndepResult",
    "PrimeDensityResult",
    "apfree_search",
    "bad_prime_certificate",
    "build_F",
    "find_relation",
    "min_ord_scan",
    "mult_independent_subset",
    "ord_tuple",
    "prime_density",
]

FACTOR_LIMIT = 1 << 63


# ---------------------------------------------------------------------------
# orders of <1+t, ..., 1+rt>
# ---------------------------------------------------------------------------

def ord_tuple(ctx: FieldContext, t: int, r: int) -> int | None:
    """Order of the group generated by 1+t, ..., 1+rt; None if some term is 0 mod p."""
    p = ctx.p
    if t % p == 0:
        raise DomainError("t must be nonzero mod p")
    if not 1 <= r < p:
        raise DomainError("need 1 <= r < p")
    terms = [(1 + s * t) % p for s in range(1, r + 1)]
    if 0 in terms:
        return None
    return lcm_all(element_order(ctx, y) for y in terms)


@dataclass(frozen=True)
class MinOrdResult:
    p: int
    r: int
    t_min: int | None
    ord_min: int | None
    invalid_count: int

    def is_bad(self, theta: float) -> bool:
        """ord_min <= p^theta."""
        return self.ord_min is not None and self.ord_min <= self.p**theta


def tuple_orders(ctx: FieldContext, r: int) -> np.ndarray:
    """ord <1+t, ..., 1+rt> for every t in [0, p); 0 marks t = 0 and invalid t."""
    if not 1 <= r < ctx.p:
        raise DomainError("need 1 <= r < p")
    g = kernels.tuple_log_gcd(ctx.dlog, ctx.p, r)
    out = np.zeros(ctx.p, dtype=np.int64)
    ok = g > 0
    out[ok] = ctx.n // g[ok]
    return out


def min_ord_scan(ctx: FieldContext, r: int) -> MinOrdResult:
    """Smallest generated order over valid t in [1, p-1], smallest t on ties."""
    orders = tuple_orders(ctx, r)
    valid = orders[1:] > 0
    invalid = int((~valid).sum())
    if not valid.any():
        return MinOrdResult(ctx.p, r, None, None, invalid)
    masked = np.where(valid, orders[1:], np.iinfo(np.int64).max)
    i = int(np.argmin(masked))
    return MinOrdResult(ctx.p, r, i + 1, int(masked[i]), invalid)


# ---------------------------------------------------------------------------
# relation polynomials and the resultant certificate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstructionConfig:
    r: int
    u: int
    r0: int | None = None

    def __post_init__(self):
        if self.r < 1:
            raise DomainError("r must be >= 1")
        if self.r0 is None:
            object.__setattr__(self, "r0", max(1, math.floor(math.log(self.r))))
        if not 1 <= self.r0 <= self.r:
            raise DomainError("need 1 <= r0 <= r")
        if self.u < 1:
            raise DomainError("u must be >= 1")

    @property
    def delta(self) -> Fraction:
        return Fraction(100, self.r0)

    @property
    def degree_bound(self) -> int:
        return self.r0 * self.u

    @property
    def height_bound(self) -> int:
        return self.r ** (2 * self.r0 * self.u)

    @property
    def family_size_bound(self) -> int:
        """r0 2^r0 C(r, r0) u^(r0+1), the cap on distinct irreducible factors."""
        return self.r0 * 2**self.r0 * math.comb(self.r, self.r0) * self.u ** (self.r0 + 1)

    @property
    def resultant_log_bound(self) -> float:
        """log |Res| < 2 (r0 u)^2 log r for two family members."""
        return 2 * (self.r0 * self.u) ** 2 * math.log(self.r)

    def to_dict(self) -> dict:
        return {"r": self.r, "r0": self.r0, "u": self.u, "delta": self.delta}


def _product(items: dict[int, int]) -> IntPolynomial:
    out = IntPolynomial.const(1)
    for s, e in items.items():
        out = out * IntPolynomial.linear(1, s) ** e
    return out


def build_F(E1: Iterable[int], E2: Iterable[int], u_exps: dict[int, int], cfg: ConstructionConfig) -> IntPolynomial:
    """prod_{s in E1} (1+sx)^u_s - prod_{s in E2} (1+sx)^u_s."""
    E1, E2 = set(E1), set(E2)
    if E1 & E2:
        raise DomainError("E1 and E2 must be disjoint")
    if not 0 < len(E1) + len(E2) <= cfg.r0:
        raise DomainError(f"need 0 < |E1|+|E2| <= r0={cfg.r0}")
    if any(not 1 <= s <= cfg.r for s in E1 | E2):
        raise DomainError(f"indices must lie in [1, {cfg.r}]")
    if set(u_exps) != E1 | E2 or any(not 1 <= e <= cfg.u for e in u_exps.values()):
        raise DomainError(f"need one exponent in [1, {cfg.u}] per index")
    F = _product({s: u_exps[s] for s in E1}) - _product({s: u_exps[s] for s in E2})
    if F.is_zero() or F.coeffs[0] != 0:
        raise ArithmeticError("x does not divide F")
    if F.degree > cfg.degree_bound:
        raise ArithmeticError("F breaks the degree bound")
    # the height bound r^(2 r0 u) needs r >= 2; for r = 1 it is 1
    if cfg.r >= 2 and F.height > cfg.height_bound:
        raise ArithmeticError("F breaks the height bound")
    return F


def iter_F(cfg: ConstructionConfig):
    """Every (E1, E2, exponents, F) with 0 < |E1|+|E2| <= r0, ordered pairs of sides."""
    idx = range(1, cfg.r + 1)
    for size in range(1, cfg.r0 + 1):
        for support in itertools.combinations(idx, size):
            for sides in itertools.product((0, 1), repeat=size):
                E1 = tuple(s for s, side in zip(support, sides) if side == 0)
                E2 = tuple(s for s, side in zip(support, sides) if side == 1)
                for exps in itertools.product(range(1, cfg.u + 1), repeat=size):
                    u_exps = dict(zip(support, exps))
                    yield E1, E2, u_exps, build_F(E1, E2, u_exps, cfg)


def _normalise(f: IntPolynomial) -> IntPolynomial:
    return f.strip_x().primitive()


@dataclass
class Certificate:
    config: ConstructionConfig
    poly_count: int
    max_height: int
    height_bound: int
    max_degree: int
    dedup_count: int
    family: list[IntPolynomial] = field(repr=False)
    resultants: list[int] = field(repr=False)
    Delta: list[int] = field(default_factory=list)
    dedup_zero_pairs: int = 0

    @property
    def resultant_count(self) -> int:
        return len(self.resultants)

    @property
    def all_nonzero(self) -> bool:
        return all(self.resultants)

    @property
    def max_log_resultant(self) -> float:
        return max((math.log(abs(v)) for v in self.resultants if v), default=0.0)

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "poly_count": self.poly_count,
            "max_height": self.max_height,
            "height_bound": self.height_bound,
            "resultant_count": self.resultant_count,
            "Delta": self.Delta,
            "all_nonzero": self.all_nonzero,
            "family_size": len(self.family),
            "family_size_bound": self.config.family_size_bound,
            "dedup_count": self.dedup_count,
            "dedup_zero_pairs": self.dedup_zero_pairs,
        }


def _small_prime_divisors(values: Sequence[int], budget: int) -> list[int]:
    primes = [int(q) for q in primes_upto(budget)]
    if not primes:
        return []
    primorial = math.prod(primes)
    found: set[int] = set()
    for v in values:
        g = math.gcd(v, primorial)
        if g > 1:
            found.update(q for q in primes if g % q == 0)
    return sorted(found)


def bad_prime_certificate(cfg: ConstructionConfig, prime_budget: int = 10**4, max_polys: int = 20_000) -> Certificate:
    """Enumerate the F family, refine it, and collect primes dividing pairwise resultants.

    After removing the factor x and the content, proportional polynomials
    are merged.  Distinct members can still share a factor (e.g. 2x+3
    divides both (1+x)(1+2x)-1 and (1+x)^2(1+2x)^2-1 after stripping x),
    so the family is refined to a gcd-free basis before taking resultants;
    every irreducible factor then lives in exactly one member.
    """
    raw = []
    for _, _, _, F in iter_F(cfg):
        raw.append(F)
        if len(raw) > max_polys:
            raise ResourceError(f"more than {max_polys} relation polynomials")
    stripped = {_normalise(F) for F in raw}
    dedup = sorted((f for f in stripped if f.degree > 0), key=lambda f: (f.degree, f.coeffs))
    zero_pairs = sum(1 for f, g in itertools.combinations(dedup, 2) if resultant(f, g) == 0)
    family = coprime_basis(dedup)
    res = [resultant(f, g) for f, g in itertools.combinations(family, 2)]
    if not all(res):
        bad = next((f, g) for (f, g), v in zip(itertools.combinations(family, 2), res) if v == 0)
        raise ArithmeticError(f"zero resultant in the refined family: {bad}")
    return Certificate(
        config=cfg,
        poly_count=len(raw),
        max_height=max(F.height for F in raw),
        height_bound=cfg.height_bound,
        max_degree=max(F.degree for F in raw),
        dedup_count=len(dedup),
        family=family,
        resultants=res,
        Delta=_small_prime_divisors(res, prime_budget),
        dedup_zero_pairs=zero_pairs,
    )


def find_relation(ctx: FieldContext, t: int, E: Sequence[int], u: int):
    """Exponents v in [-u, u]^E, not all 0, with prod (1+st)^v_s = 1 mod p.

    Returns (E1, E2, u_exps) describing an F with F(t) = 0 mod p, or None.
    Pigeonhole guarantees a hit when ord <1+st : s in E> < (u+1)^|E|.
    """
    p = ctx.p
    base = [(1 + s * t) % p for s in E]
    if 0 in base:
        return None
    for v in itertools.product(range(-u, u + 1), repeat=len(E)):
        if not any(v):
            continue
        acc = 1
        for y, e in zip(base, v):
            acc = acc * pow(y, e, p) % p
        if acc == 1:
            E1 = tuple(s for s, e in zip(E, v) if e > 0)
            E2 = tuple(s for s, e in zip(E, v) if e < 0)
            return E1, E2, {s: abs(e) for s, e in zip(E, v) if e}
    return None


# ---------------------------------------------------------------------------
# multiplicative independence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MultIndepResult:
    z: Fraction
    r: int
    subset: tuple[int, ...]
    values: tuple[Fraction, ...]
    rank: int
    excluded: tuple[int, ...] = ()


def _exponent_vector(q: Fraction) -> Counter:
    vec: Counter = Counter()
    for part, sign in ((abs(q.numerator), 1), (q.denominator, -1)):
        if part >= FACTOR_LIMIT:
            raise ResourceError(f"{part} exceeds the factoring budget 2^63")
        if part > 1:
            for prime in factorize(part):
                vec[prime] += sign
    return vec


def mult_independent_subset(z: Fraction | int | str, r: int) -> MultIndepResult:
    """Greedy maximal multiplicatively independent subset of {1 + s z : 1 <= s <= r}.

    Independence of nonzero rationals is linear independence of their prime
    exponent vectors over Q (signs are torsion and drop out).
    """
    z = Fraction(z)
    if z == 0:
        raise DomainError("z must be nonzero")
    if r < 1:
        raise DomainError("r must be >= 1")
    pivots: dict[int, dict[int, Fraction]] = {}
    chosen, values, excluded = [], [], []
    for s in range(1, r + 1):
        a = 1 + s * z
        if a == 0:
            log.warning("1 + %d z = 0; index excluded", s)
            excluded.append(s)
            continue
        vec = {q: Fraction(e) for q, e in _exponent_vector(a).items() if e}
        # reduce against the echelon basis; pivot = largest prime in the row
        while vec:
            lead = max(vec)
            row = pivots.get(lead)
            if row is None:
                break
            c = vec[lead] / row[lead]
            for q, e in row.items():
                val = vec.get(q, 0) - c * e
                if val:
                    vec[q] = val
                else:
                    vec.pop(q, None)
        if vec:
            pivots[max(vec)] = vec
            chosen.append(s)
            values.append(a)
    return MultIndepResult(z, r, tuple(chosen), tuple(values), len(chosen), tuple(excluded))


# ---------------------------------------------------------------------------
# prime divisors of p - 1 in a window
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrimeDensityResult:
    T: int
    eta: float
    interval: tuple[float, float]
    divisor_primes: tuple[int, ...]
    count: int

    @property
    def ratio_to_T_over_logT(self) -> float:
        return self.count / (self.T / math.log(self.T))

    @property
    def ratio_to_eta_T_over_logT(self) -> float:
        return self.count / (self.eta * self.T / math.log(self.T))

    def to_dict(self) -> dict:
        return {
            "T": self.T,
            "eta": self.eta,
            "interval": list(self.interval),
            "divisor_primes": list(self.divisor_primes),
            "count": self.count,
            "ratio_to_T_over_logT": self.ratio_to_T_over_logT,
            "ratio_to_eta_T_over_logT": self.ratio_to_eta_T_over_logT,
        }


def density_interval(T: int, eta: float) -> tuple[float, float]:
    return T ** (0.5 - eta), T ** (0.5 - eta / 2)


def prime_density(T: int, eta: float) -> PrimeDensityResult:
    """Number of primes p <= T with p - 1 divisible by a prime in [T^(1/2-eta), T^(1/2-eta/2)]."""
    if T < 10:
        raise DomainError("T must be >= 10")
    if not 0 < eta < 0.5:
        raise DomainError("eta must lie in (0, 1/2)")
    lo, hi = density_interval(T, eta)
    primes = primes_upto(T)
    qs = primes[(primes >= lo) & (primes <= hi)]
    is_prime = np.zeros(T + 1, dtype=np.bool_)
    is_prime[primes] = True
    hit = np.zeros(T + 1, dtype=np.bool_)
    # union over q of {p = 1 mod q}
    for q in qs:
        hit[1::q] = True
    count = int((hit & is_prime).sum())
    return PrimeDensityResult(T, eta, (lo, hi), tuple(int(q) for q in qs), count)


# ---------------------------------------------------------------------------
# AP-free subgroup search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ApFreeRow:
    p: int
    r: int
    largest_apfree_d: int
    exponent: float
    threshold_exponent: float
    divisors_tested: int
    ord_min: int | None
    t_min: int | None

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "r": self.r,
            "largest_apfree_d": self.largest_apfree_d,
            "exponent": self.exponent,
            "threshold_exponent": self.threshold_exponent,
            "divisors_tested": self.divisors_tested,
            "ord_min": self.ord_min,
            "t_min": self.t_min,
        }


APFREE_CSV_HEADER = (
    "p", "r", "largest_apfree_d", "exponent", "threshold_exponent", "divisors_tested", "ord_min", "t_min",
)


def positivity_threshold_exponent(p: int, r: int) -> float:
    """log_p of the d where (d/(p-1))^r (p-r) = r sqrt(p)."""
    d = (p - 1) * (r * math.sqrt(p) / (p - r)) ** (1 / r)
    return math.log(d) / math.log(p)


def _apfree_one(p: int, r: int, window) -> ApFreeRow:
    ctx = build_context(p)
    tested, best = 0, 0
    for d in reversed(ctx.divisors):
        if window is not None and not window(p, d):
            continue
        tested += 1
        if count_normalized(subgroup(ctx, d), r).ap_free:
            best = d
            break
    scan = min_ord_scan(ctx, r)
    return ApFreeRow(
        p=p,
        r=r,
        largest_apfree_d=best,
        exponent=math.log(best) / math.log(p) if best else float("nan"),
        threshold_exponent=positivity_threshold_exponent(p, r),
        divisors_tested=tested,
        ord_min=scan.ord_min,
        t_min=scan.t_min,
    )


def apfree_search(
    primes: Iterable[int],
    r: int,
    window: Callable[[int, int], bool] | None = None,
    threads: int = 1,
) -> list[ApFreeRow]:
    """Largest divisor d of p - 1 (within the window) whose subgroup has no (r+1)-term AP.

    ``largest_apfree_d`` is 0 when every tested divisor contains one.
    """
    primes = sorted(set(int(p) for p in primes if p >= 3 and p > r))
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(lambda q: _apfree_one(q, r, window), primes))
    return [_apfree_one(q, r, window) for q in primes]
