"""Multiplicative characters of F_p^* and character sums along progressions.

A character is stored by its exponent ``e`` on the primitive root:
``chi(g^k) = exp(2*pi*i*e*k/(p-1))`` and ``chi(0) = 0`` for every character,
the trivial one included.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import DomainError
from .field_core import FieldContext, Subgroup

__all__ = [
    "CharTuple",
    "Character",
    "WeilReport",
    "characters_trivial_on",
    "indicator_expansion_check",
    "iter_tuple_sums",
    "progression_char_sum",
    "verify_weil",
]


@lru_cache(maxsize=16)
def _roots_of_unity(n: int) -> np.ndarray:
    out = np.exp(2j * np.pi * np.arange(n) / n)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Character:
    ctx: FieldContext
    e: int

    def __post_init__(self):
        object.__setattr__(self, "e", self.e % self.ctx.n)

    @property
    def is_trivial(self) -> bool:
        return self.e == 0

    def __eq__(self, other):
        return isinstance(other, Character) and other.ctx is self.ctx and other.e == self.e

    def __hash__(self):
        return hash((self.ctx.p, self.e))

    def __mul__(self, other: "Character") -> "Character":
        return Character(self.ctx, self.e + other.e)

    def __pow__(self, k: int) -> "Character":
        return Character(self.ctx, self.e * k)

    def __call__(self, x):
        """Evaluate at a residue or an integer array of residues."""
        ctx = self.ctx
        roots = _roots_of_unity(ctx.n)
        x = np.asarray(x, dtype=np.int64) % ctx.p
        logs = ctx.dlog[x]
        vals = roots[(self.e * logs) % ctx.n]
        vals = np.where(x == 0, 0j, vals)
        return vals[()] if vals.ndim == 0 else vals

    def is_trivial_on(self, G: Subgroup) -> bool:
        # G is generated by g^((p-1)/d), so chi is 1 on G iff d divides e
        return self.e % G.d == 0


@dataclass(frozen=True)
class CharTuple:
    chars: tuple[Character, ...]

    def __post_init__(self):
        if not self.chars:
            raise DomainError("a character tuple needs r >= 1 entries")
        p = self.chars[0].ctx.p
        if any(c.ctx.p != p for c in self.chars):
            raise DomainError("characters of a tuple must share one field")
        object.__setattr__(self, "chars", tuple(self.chars))

    @property
    def ctx(self) -> FieldContext:
        return self.chars[0].ctx

    @property
    def r(self) -> int:
        return len(self.chars)

    @property
    def nontrivial(self) -> tuple[int, ...]:
        """1-based positions s with chi_s nontrivial."""
        return tuple(s for s, c in enumerate(self.chars, start=1) if not c.is_trivial)

    @classmethod
    def from_exponents(cls, ctx: FieldContext, exps: Sequence[int]) -> "CharTuple":
        return cls(tuple(Character(ctx, e) for e in exps))


def characters_trivial_on(G: Subgroup) -> list[Character]:
    """The (p-1)/d characters that are 1 on G, trivial first."""
    return [Character(G.ctx, j * G.d) for j in range(G.index)]


def indicator_expansion_check(G: Subgroup, x: int) -> float:
    """|(d/(p-1)) * sum of chi(x) over chi trivial on G - 1_G(x)|."""
    total = sum(chi(x) for chi in characters_trivial_on(G))
    return float(abs(G.d / G.ctx.n * total - (1.0 if x % G.p in G else 0.0)))


def progression_char_sum(tup: CharTuple) -> complex:
    """Sum over x in F_p of chi_1(1+x) chi_2(1+2x) ... chi_r(1+rx)."""
    ctx = tup.ctx
    p, n = ctx.p, ctx.n
    x = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    alive = np.ones(p, dtype=np.bool_)
    for s, chi in enumerate(tup.chars, start=1):
        y = (1 + s * x) % p
        alive &= y != 0
        acc = (acc + chi.e * ctx.dlog[y]) % n
    return complex(_roots_of_unity(n)[acc[alive]].sum())


def _progression_logs(G: Subgroup, r: int) -> np.ndarray:
    """(r, M) array of dlog(1+sx) mod (p-1)/d over the M x with no zero term."""
    ctx = G.ctx
    p, k = ctx.p, G.index
    x = np.arange(p, dtype=np.int64)
    ys = [(1 + s * x) % p for s in range(1, r + 1)]
    alive = np.ones(p, dtype=np.bool_)
    for y in ys:
        alive &= y != 0
    return np.stack([ctx.dlog[y[alive]] % k for y in ys]) if r else np.zeros((0, 0), np.int64)


def iter_tuple_sums(G: Subgroup, r: int) -> Iterator[tuple[tuple[int, ...], np.ndarray]]:
    """All progression character sums for tuples of characters trivial on G.

    Character j (0 <= j < k, k = (p-1)/d) is chi = Y^(j*d).  Yields
    ``(tail, block)`` where ``tail`` fixes (j_3, ..., j_r) and ``block[j1, j2]``
    is the sum for (j1, j2, *tail); for r == 1 the block is 1-D and the tail
    empty.  Each block is an inverse DFT of a (weighted) histogram of the
    discrete logs, so memory stays at k^2 regardless of r.
    """
    if r < 1:
        raise DomainError("r must be >= 1")
    k = G.index
    logs = _progression_logs(G, r)
    roots = _roots_of_unity(k)
    head = min(r, 2)
    if head == 1:
        hist = np.bincount(logs[0], minlength=k).astype(np.complex128)
        yield (), np.fft.ifft(hist) * k
        return
    flat = logs[0] * k + logs[1]
    for tail in itertools.product(range(k), repeat=r - 2):
        if tail:
            phase = np.zeros(logs.shape[1], dtype=np.int64)
            for j, row in zip(tail, logs[2:]):
                phase = (phase + j * row) % k
            w = roots[phase]
            hist = np.bincount(flat, weights=w.real, minlength=k * k) + 1j * np.bincount(
                flat, weights=w.imag, minlength=k * k
            )
        else:
            hist = np.bincount(flat, minlength=k * k).astype(np.complex128)
        yield tail, np.fft.ifft2(hist.reshape(k, k)) * (k * k)


def _nontrivial_count(tail: tuple[int, ...], shape: tuple[int, ...]) -> np.ndarray:
    """|I| for every tuple in a block of iter_tuple_sums."""
    grids = np.indices(shape)
    return (grids != 0).sum(axis=0) + sum(1 for j in tail if j)


@dataclass
class WeilReport:
    p: int
    d: int
    r: int
    tuples_checked: int
    max_abs_sum: float
    worst_ratio: float
    passed: bool
    sampled: bool = False

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "d": self.d,
            "r": self.r,
            "tuples_checked": self.tuples_checked,
            "max_abs_sum": self.max_abs_sum,
            "worst_ratio": self.worst_ratio,
            "pass": self.passed,
        }


def verify_weil(G: Subgroup, r: int, cap: int | None = None, seed: int = 0) -> WeilReport:
    """Check |sum| <= |I| sqrt(p) over character tuples trivial on G.

    Exhaustive when the ((p-1)/d)^r - 1 nontrivial tuples fit under ``cap``
    (or ``cap`` is None); otherwise ``cap`` tuples are drawn with the seed.
    """
    if r < 1:
        raise DomainError("r must be >= 1")
    p, k = G.p, G.index
    sqrt_p = math.sqrt(p)
    n_tuples = k**r - 1
    max_abs = 0.0
    worst = 0.0
    if cap is None or n_tuples <= cap:
        for tail, block in iter_tuple_sums(G, r):
            size = _nontrivial_count(tail, block.shape)
            mag = np.abs(block)
            mask = size > 0
            if not mask.any():
                continue
            max_abs = max(max_abs, float(mag[mask].max()))
            worst = max(worst, float((mag[mask] / (size[mask] * sqrt_p)).max()))
        checked, sampled = n_tuples, False
    else:
        rng = np.random.default_rng(seed)
        checked = 0
        while checked < cap:
            exps = rng.integers(0, k, size=r)
            if not exps.any():
                continue
            tup = CharTuple.from_exponents(G.ctx, [int(j) * G.d for j in exps])
            mag = abs(progression_char_sum(tup))
            max_abs = max(max_abs, mag)
            worst = max(worst, mag / (len(tup.nontrivial) * sqrt_p))
            checked += 1
        sampled = True
    # 1e-9 slack absorbs float accumulation only
    return WeilReport(
        p=p,
        d=G.d,
        r=r,
        tuples_checked=checked,
        max_abs_sum=max_abs,
        worst_ratio=worst,
        passed=worst <= 1.0 + 1e-9,
        sampled=sampled,
    )
