"""Prime-field substrate: primality, factoring, primitive roots, discrete logs."""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property, reduce

import numpy as np

from . import kernels
from .errors import DomainError, ResourceError

__all__ = [
    "FieldContext",
    "Subgroup",
    "build_context",
    "divisors",
    "element_order",
    "factorize",
    "is_prime",
    "primes_between",
    "primes_upto",
    "subgroup",
]

DEFAULT_TABLE_BUDGET = 1 << 25
MAX_ORDER_MODULUS = 1 << 62

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
# These bases make Miller-Rabin deterministic below 3.18e23, far past 2^64.
_MR_BASES = _SMALL_PRIMES
_RHO_SEED = 0x5EED


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _rho(n: int, rng: random.Random) -> int:
    """Brent's variant of Pollard rho; returns a nontrivial factor of composite n."""
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> list[int]:
    """Prime factors of n with multiplicity, ascending.

    Trial division by small primes, then Brent-rho with a fixed seed, so the
    output never depends on the run.
    """
    if n < 2:
        raise DomainError(f"factorize needs n >= 2, got {n}")
    out: list[int] = []
    for q in range(2, 1000):
        if q * q > n:
            break
        while n % q == 0:
            out.append(q)
            n //= q
    rng = random.Random(_RHO_SEED)
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out.append(m)
            continue
        f = _rho(m, rng)
        stack.extend((f, m // f))
    return sorted(out)


def divisors(n: int) -> list[int]:
    divs = [1]
    for q, e in sorted(Counter(factorize(n)).items()) if n > 1 else []:
        divs = [d * q**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def primes_upto(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=np.bool_)
    sieve[:2] = False
    for q in range(2, math.isqrt(n) + 1):
        if sieve[q]:
            sieve[q * q::q] = False
    return np.flatnonzero(sieve).astype(np.int64)


def primes_between(lo: int, hi: int) -> list[int]:
    return [int(q) for q in primes_upto(hi) if q >= lo]


def _order_from_factors(x: int, n: int, primes: list[int], p: int) -> int:
    order = n
    for q in primes:
        while order % q == 0 and pow(x, order // q, p) == 1:
            order //= q
    return order


@dataclass(frozen=True, eq=False)
class FieldContext:
    p: int
    factors_p_minus_1: tuple[int, ...]
    g: int
    dlog: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        """Order of the multiplicative group, p - 1."""
        return self.p - 1

    @cached_property
    def prime_factors(self) -> list[int]:
        return sorted(set(self.factors_p_minus_1))

    @cached_property
    def divisors(self) -> list[int]:
        return divisors(self.n)


def build_context(p: int, table_budget: int = DEFAULT_TABLE_BUDGET) -> FieldContext:
    """Field context with the smallest primitive root and a full dlog table."""
    if p < 3 or not is_prime(p):
        raise DomainError(f"{p} is not an odd prime")
    if p > table_budget:
        raise ResourceError(f"p={p} exceeds the dlog table budget {table_budget}")
    n = p - 1
    facs = factorize(n)
    primes = sorted(set(facs))
    g = 2
    while any(pow(g, n // q, p) == 1 for q in primes):
        g += 1
    dlog = kernels.dlog_table(p, g)
    dlog.setflags(write=False)
    return FieldContext(p=p, factors_p_minus_1=tuple(facs), g=g, dlog=dlog)


@dataclass(frozen=True, eq=False)
class Subgroup:
    """The unique subgroup of order d in F_p^*."""

    ctx: FieldContext
    d: int
    membership: np.ndarray = field(repr=False)

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def index(self) -> int:
        """(p - 1) / d, the number of characters trivial on the subgroup."""
        return self.ctx.n // self.d

    @cached_property
    def elements(self) -> np.ndarray:
        out = np.flatnonzero(self.membership).astype(np.int64)
        out.setflags(write=False)
        return out

    def __contains__(self, x: int) -> bool:
        return bool(self.membership[x % self.ctx.p])

    def __len__(self) -> int:
        return self.d


def subgroup(ctx: FieldContext, d: int) -> Subgroup:
    if d < 1 or ctx.n % d:
        raise DomainError(f"d={d} does not divide p-1={ctx.n}")
    member = ctx.dlog % (ctx.n // d) == 0
    member[0] = False
    member.setflags(write=False)
    return Subgroup(ctx=ctx, d=d, membership=member)


def element_order(ctx: FieldContext, x: int) -> int:
    x %= ctx.p
    if x == 0:
        raise DomainError("0 has no multiplicative order")
    return _order_from_factors(x, ctx.n, ctx.prime_factors, ctx.p)


def multiplicative_order(x: int, p: int) -> int:
    """Order of x mod a prime p without building a table (p < 2^62)."""
    if p >= MAX_ORDER_MODULUS:
        raise ResourceError("order computations are capped at p < 2^62")
    x %= p
    if x == 0:
        raise DomainError("0 has no multiplicative order")
    return _order_from_factors(x, p - 1, sorted(set(factorize(p - 1))) if p > 2 else [], p)


def lcm_all(values) -> int:
    return reduce(math.lcm, values, 1)
