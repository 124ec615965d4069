"""Counting arithmetic progressions inside multiplicative subgroups.

Progressions are ordered pairs (a, b) with b != 0 and a, a+b, ..., a+rb all
in G.  Scaling by a^{-1} maps them to x = b/a with 1+x, ..., 1+rx in G, so
the total is d times the number of such nonzero x.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Iterable

from . import kernels
from .characters import iter_tuple_sums
from .errors import DomainError, NumericDriftError, ResourceError
from .field_core import Subgroup, build_context, subgroup

__all__ = [
    "CENSUS_CSV_HEADER",
    "CensusResult",
    "Prop2Report",
    "census_sweep",
    "count_brute",
    "count_normalized",
    "count_via_characters",
    "exponent_window",
    "proposition2_check",
]

CENSUS_CSV_HEADER = (
    "p", "d", "r", "N_all", "N_star", "total_aps", "main_term", "error_bound", "ap_free",
)

BRUTE_BUDGET = 2 * 10**8
CHARACTER_BUDGET = 10**8
ROUNDING_BAND = 0.01


@dataclass(frozen=True)
class CensusResult:
    p: int
    d: int
    r: int
    N_all: int
    N_star: int
    total_aps: int

    @property
    def main_term(self) -> float:
        # trivial tuple contributes p - r: the r roots x = -1/s are excluded
        return (self.d / (self.p - 1)) ** self.r * (self.p - self.r)

    @property
    def weil_error_bound(self) -> float:
        return self.r * math.sqrt(self.p)

    @property
    def ap_free(self) -> bool:
        return self.total_aps == 0

    def to_dict(self) -> dict:
        out = asdict(self)
        out["main_term"] = self.main_term
        out["error_bound"] = self.weil_error_bound
        out["ap_free"] = self.ap_free
        return out

    def csv_row(self) -> tuple:
        d = self.to_dict()
        return tuple(d[key] for key in CENSUS_CSV_HEADER)


def _check_r(G: Subgroup, r: int) -> None:
    if r < 1:
        raise DomainError("r must be >= 1")
    if r >= G.p:
        raise DomainError(f"r={r} >= p={G.p}: normalisation by a^-1 collapses")


def count_brute(G: Subgroup, r: int, budget: int = BRUTE_BUDGET) -> int:
    """Direct double loop over (a, b), b != 0."""
    if r < 1:
        raise DomainError("r must be >= 1")
    if G.p * G.d * r > budget:
        raise ResourceError(f"p*d*r = {G.p * G.d * r} exceeds the brute-force budget {budget}")
    return int(kernels.count_aps(G.membership, G.elements, G.p, r))


def count_normalized(G: Subgroup, r: int) -> CensusResult:
    """One O(r p) scan of x with 1+x, ..., 1+rx in G."""
    _check_r(G, r)
    n_all = int(kernels.progression_mask(G.membership, G.p, r).sum())
    # x = 0 always qualifies since 1 is in G
    n_star = n_all - 1
    return CensusResult(p=G.p, d=G.d, r=r, N_all=n_all, N_star=n_star, total_aps=G.d * n_star)


def count_via_characters(G: Subgroup, r: int, budget: int = CHARACTER_BUDGET) -> CensusResult:
    """N_all rebuilt from the character expansion of the indicator of G."""
    _check_r(G, r)
    if G.index**r > budget:
        raise ResourceError(f"{G.index}^{r} character tuples exceed the budget {budget}")
    total = 0j
    for _, block in iter_tuple_sums(G, r):
        total += block.sum()
    estimate = (G.d / G.ctx.n) ** r * total.real
    n_all = round(estimate)
    if abs(estimate - n_all) > ROUNDING_BAND or abs(total.imag) * (G.d / G.ctx.n) ** r > ROUNDING_BAND:
        raise NumericDriftError(f"character reconstruction {estimate} is not near an integer")
    return CensusResult(p=G.p, d=G.d, r=r, N_all=n_all, N_star=n_all - 1, total_aps=G.d * (n_all - 1))


@dataclass(frozen=True)
class Prop2Report:
    p: int
    d: int
    r: int
    N_all: int
    total_aps: int
    main_term: float
    error: float
    error_bound: float
    error_ok: bool
    threshold_met: bool
    positivity_ok: bool

    @property
    def passed(self) -> bool:
        return self.error_ok and self.positivity_ok

    def to_dict(self) -> dict:
        out = asdict(self)
        out["pass"] = self.passed
        return out


def proposition2_check(G: Subgroup, r: int, census: CensusResult | None = None) -> Prop2Report:
    """Main term plus Weil error against the exact count.

    The positivity claim is only tested when main term exceeds r sqrt(p).
    """
    c = census if census is not None else count_normalized(G, r)
    error = abs(c.N_all - c.main_term)
    threshold = c.main_term > c.weil_error_bound
    return Prop2Report(
        p=c.p,
        d=c.d,
        r=r,
        N_all=c.N_all,
        total_aps=c.total_aps,
        main_term=c.main_term,
        error=error,
        error_bound=c.weil_error_bound,
        error_ok=error <= c.weil_error_bound,
        threshold_met=threshold,
        positivity_ok=(not threshold) or c.total_aps > 0,
    )


def exponent_window(lo: float | None = None, hi: float | None = None) -> Callable[[int, int], bool]:
    """Predicate p^lo <= d <= p^hi (bounds optional)."""

    def accept(p: int, d: int) -> bool:
        ld = math.log(d) / math.log(p)
        eps = 1e-12
        return (lo is None or ld >= lo - eps) and (hi is None or ld <= hi + eps)

    return accept


def parse_window(expr: str | None) -> Callable[[int, int], bool] | None:
    """'0.5:0.8' -> exponent_window(0.5, 0.8); either side may be empty."""
    if not expr:
        return None
    lo, sep, hi = expr.partition(":")
    if not sep:
        raise DomainError(f"window must look like 'lo:hi', got {expr!r}")
    return exponent_window(float(lo) if lo.strip() else None, float(hi) if hi.strip() else None)


def _census_one_prime(p: int, r: int, window) -> list[CensusResult]:
    ctx = build_context(p)
    rows = []
    for d in ctx.divisors:
        if window is None or window(p, d):
            rows.append(count_normalized(subgroup(ctx, d), r))
    return rows


def census_sweep(
    primes: Iterable[int],
    r: int,
    window: Callable[[int, int], bool] | None = None,
    threads: int = 1,
) -> list[CensusResult]:
    """CensusResult rows for every prime and every divisor in the window, sorted by (p, d)."""
    primes = sorted(set(int(p) for p in primes if p >= 3 and p > r))
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            chunks = list(pool.map(lambda q: _census_one_prime(q, r, window), primes))
    else:
        chunks = [_census_one_prime(q, r, window) for q in primes]
    return [row for chunk in chunks for row in chunk]
