"""Pseudo-randomness of the normalised subgroup indicator nu = ((p-1)/d) 1_G.

The transference theorem itself is not an algorithm and is not implemented
here.  This module measures its hypothesis (linear-forms averages of nu),
the classical correlation averages, and its conclusion (progression density
inside dense subsets A of G) on concrete fields.  All averages run over F_p
with wraparound mod p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .ap_census import count_normalized
from .errors import DomainError, ResourceError
from .field_core import Subgroup

__all__ = [
    "CorrelationResult",
    "ExperimentStats",
    "GTParameters",
    "LinearFormSystem",
    "LinearFormsResult",
    "NuWeight",
    "correlation_expectation",
    "count_aps_in_subset",
    "gt_parameters",
    "linear_forms_expectation",
    "linear_forms_bound",
    "random_system",
    "subset_ap_experiment",
]

EXHAUSTIVE_BUDGET = 3000**2 * 4
DEFAULT_Q0 = 8
STRATEGIES = ("uniform", "uniform_exact", "greedy_avoid", "interval")


@dataclass(frozen=True)
class GTParameters:
    r: int
    kappa: Fraction
    m0: int
    subgroup_exponent: Fraction

    def to_dict(self) -> dict:
        return {"kappa": self.kappa, "m0": self.m0, "exponent": self.subgroup_exponent}

    def min_subgroup_size(self, p: int) -> float:
        """|G| must exceed p^(1 - 1/(4 m0)) for the linear-forms estimate."""
        return p ** float(self.subgroup_exponent)


def gt_parameters(r: int) -> GTParameters:
    if not 1 <= r <= 30:
        raise DomainError("r must lie in [1, 30]")
    m0 = r * 2 ** (r - 1)
    return GTParameters(
        r=r,
        kappa=Fraction(1, r * 2 ** (r + 1)),
        m0=m0,
        subgroup_exponent=1 - Fraction(1, 4 * m0),
    )


@dataclass(frozen=True)
class NuWeight:
    G: Subgroup

    @property
    def scale(self) -> Fraction:
        return Fraction(self.G.ctx.n, self.G.d)

    def __call__(self, x):
        x = np.asarray(x, dtype=np.int64) % self.G.p
        return self.G.membership[x] * (self.G.ctx.n / self.G.d)

    def mean(self) -> Fraction:
        """E(nu | F_p); equals (p-1)/p for every subgroup."""
        return self.scale * self.G.d / self.G.p


def _collinear(u: Sequence[int], v: Sequence[int], mod: int | None = None) -> bool:
    t = len(u)
    for i in range(t):
        for j in range(i + 1, t):
            minor = u[i] * v[j] - u[j] * v[i]
            if (minor % mod if mod else minor) != 0:
                return False
    return True


@dataclass(frozen=True)
class LinearFormSystem:
    """Affine forms psi_i(x) = b_i + sum_j L[i][j] x_j."""

    L: tuple[tuple[int, ...], ...]
    b: tuple[int, ...]
    L_bound: int = 3

    def __post_init__(self):
        L = tuple(tuple(int(c) for c in row) for row in self.L)
        b = tuple(int(c) for c in self.b)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "b", b)
        if not L:
            raise DomainError("need at least one form")
        if len(b) != len(L):
            raise DomainError("one constant term per form")
        t = len(L[0])
        if t < 1 or any(len(row) != t for row in L):
            raise DomainError("coefficient rows must share a length t >= 1")
        for row in L:
            if not any(row):
                raise DomainError("zero coefficient row")
            if any(abs(c) > self.L_bound for c in row):
                raise DomainError(f"coefficient exceeds L_bound={self.L_bound}")
        for i in range(len(L)):
            for j in range(i + 1, len(L)):
                if _collinear(L[i], L[j]):
                    raise DomainError(f"rows {i} and {j} are collinear")

    @property
    def m(self) -> int:
        return len(self.L)

    @property
    def t(self) -> int:
        return len(self.L[0])

    def check_against(self, r: int) -> None:
        m0 = gt_parameters(r).m0
        if self.m > m0:
            raise DomainError(f"m={self.m} exceeds m0={m0} for r={r}")


def random_system(
    m: int,
    t: int,
    rng: np.random.Generator,
    L_bound: int = 3,
    p: int | None = None,
) -> LinearFormSystem:
    """Rejection-sample a valid system; constants uniform in [0, p) (0 when p is None)."""
    while True:
        L = rng.integers(-L_bound, L_bound + 1, size=(m, t))
        rows = [tuple(int(c) for c in row) for row in L]
        if any(not any(row) for row in rows):
            continue
        if any(_collinear(rows[i], rows[j]) for i in range(m) for j in range(i + 1, m)):
            continue
        b = rng.integers(0, p, size=m) if p else np.zeros(m, dtype=np.int64)
        return LinearFormSystem(L=tuple(rows), b=tuple(int(c) for c in b), L_bound=L_bound)


@dataclass(frozen=True)
class LinearFormsResult:
    value: float
    std_error: float
    deviation: float
    mode: str
    hits: int
    points: int


def linear_forms_bound(p: int, d: int, m: int) -> float:
    """4 ((p-1)/d)^m (m sqrt(p) + m^2) / p."""
    return 4 * ((p - 1) / d) ** m * (m * math.sqrt(p) + m * m) / p


def linear_forms_expectation(
    G: Subgroup,
    system: LinearFormSystem,
    mode: str = "exhaustive",
    samples: int = 100_000,
    seed: int = 0,
    budget: int = EXHAUSTIVE_BUDGET,
) -> LinearFormsResult:
    """E(nu(psi_1(x)) ... nu(psi_m(x)) | x in F_p^t)."""
    p = G.p
    for i in range(system.m):
        for j in range(i + 1, system.m):
            if _collinear(system.L[i], system.L[j], mod=p):
                raise DomainError(f"rows {i} and {j} become collinear mod {p}")
    L = np.array(system.L, dtype=np.int64)
    b = np.array(system.b, dtype=np.int64)
    scale_m = (G.ctx.n / G.d) ** system.m
    if mode == "exhaustive":
        points = p**system.t
        if points > budget:
            raise ResourceError(f"p^t = {points} exceeds the exhaustive budget {budget}")
        hits = int(kernels.linear_forms_count(G.membership, L, b, p))
        value = scale_m * hits / points
        return LinearFormsResult(value, 0.0, abs(value - 1), mode, hits, points)
    if mode == "montecarlo":
        if samples < 2:
            raise DomainError("Monte Carlo needs at least 2 samples")
        rng = np.random.default_rng(seed)
        x = rng.integers(0, p, size=(samples, system.t))
        vals = (x @ L.T + b) % p
        ok = G.membership[vals].all(axis=1)
        hits = int(ok.sum())
        frac = hits / samples
        value = scale_m * frac
        std = scale_m * math.sqrt(frac * (1 - frac) / (samples - 1))
        return LinearFormsResult(value, std, abs(value - 1), mode, hits, samples)
    raise DomainError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class CorrelationResult:
    value: float
    coincidence_profile: tuple[int, ...]
    distinct_shifts: int


def correlation_expectation(G: Subgroup, shifts: Sequence[int], q0: int = DEFAULT_Q0) -> CorrelationResult:
    """E(nu(x+h_1) ... nu(x+h_q) | x in F_p) with the shift multiplicities.

    Repeated shifts are what drive the tau(h_i - h_j) terms up; the profile
    lists multiplicities of each distinct shift, largest first.
    """
    q = len(shifts)
    if not 1 <= q <= q0:
        raise DomainError(f"need 1 <= q <= q0={q0} shifts, got {q}")
    p = G.p
    x = np.arange(p, dtype=np.int64)
    ok = np.ones(p, dtype=np.bool_)
    for h in shifts:
        ok &= G.membership[(x + h) % p]
    value = (G.ctx.n / G.d) ** q * int(ok.sum()) / p
    counts: dict[int, int] = {}
    for h in shifts:
        counts[h % p] = counts.get(h % p, 0) + 1
    profile = tuple(sorted(counts.values(), reverse=True))
    return CorrelationResult(value=value, coincidence_profile=profile, distinct_shifts=len(counts))


def count_aps_in_subset(member: np.ndarray, elems: np.ndarray, r: int) -> int:
    """Ordered (a, b), b != 0, with a, a+b, ..., a+rb all in the set."""
    return int(kernels.count_aps(member, np.asarray(elems, dtype=np.int64), member.shape[0], r))


def _completes_ap(member: np.ndarray, y: int, r: int) -> bool:
    """Would adding y close an (r+1)-term progression with current members?"""
    p = member.shape[0]
    b = np.arange(1, p, dtype=np.int64)
    for pos in range(r + 1):
        ok = np.ones(p - 1, dtype=np.bool_)
        for j in range(r + 1):
            if j != pos:
                ok &= member[(y + (j - pos) * b) % p]
        if ok.any():
            return True
    return False


def _greedy_apfree(G: Subgroup, r: int, rng: np.random.Generator) -> np.ndarray:
    order = rng.permutation(G.elements)
    member = np.zeros(G.p, dtype=np.bool_)
    for y in order:
        if not _completes_ap(member, int(y), r):
            member[y] = True
    return np.flatnonzero(member).astype(np.int64)


@dataclass
class ExperimentStats:
    p: int
    d: int
    r: int
    delta: float
    strategy: str
    trials: int
    seed: int
    raw_counts: list[int] = field(repr=False)
    norm_expectations: list[float] = field(repr=False)
    sizes: list[int] = field(repr=False)
    best_apfree_density: float | None = None
    best_apfree_witness: list[int] | None = field(default=None, repr=False)

    @property
    def min_raw(self) -> int:
        return min(self.raw_counts)

    @property
    def max_raw(self) -> int:
        return max(self.raw_counts)

    @property
    def mean_raw(self) -> float:
        return float(np.mean(self.raw_counts))

    @property
    def std_error_raw(self) -> float:
        if self.trials < 2:
            return 0.0
        return float(np.std(self.raw_counts, ddof=1) / math.sqrt(self.trials))

    @property
    def mean_norm_expectation(self) -> float:
        return float(np.mean(self.norm_expectations))

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "d": self.d,
            "r": self.r,
            "delta": self.delta,
            "strategy": self.strategy,
            "trials": self.trials,
            "seed": self.seed,
            "mean_norm_expectation": self.mean_norm_expectation,
            "min_raw": self.min_raw,
            "mean_raw": self.mean_raw,
            "max_raw": self.max_raw,
            "best_apfree_density": self.best_apfree_density,
        }


def subset_ap_experiment(
    G: Subgroup,
    delta: float,
    r: int,
    strategy: str = "uniform",
    trials: int = 100,
    seed: int = 0,
) -> ExperimentStats:
    """Progressions inside subsets A of G of density about delta.

    Strategies:
      uniform        each element of G kept independently with probability delta
      uniform_exact  a uniformly random subset of size ceil(delta d)
      interval       ceil(delta d) consecutive elements of G in residue order,
                     starting at a random position (cyclically)
      greedy_avoid   greedy (r+1)-AP-free set in random order, cut or padded
                     to ceil(delta d); the AP-free part is reported as witness

    The normalised expectation is E(f(x) f(x+t) ... f(x+rt) | x, t in F_p)
    with f = nu 1_A, so the t = 0 diagonal is included.
    """
    if strategy not in STRATEGIES:
        raise DomainError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    if not 0 < delta <= 1:
        raise DomainError("delta must lie in (0, 1]")
    if r < 1 or r >= G.p:
        raise DomainError("need 1 <= r < p")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    size = math.ceil(delta * G.d - 1e-12)
    if size < 1:
        raise DomainError("ceil(delta d) must be >= 1")
    p = G.p
    elems = G.elements
    scale = G.ctx.n / G.d
    raw, norm, sizes = [], [], []
    best_density, best_witness = None, None
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        if strategy == "uniform":
            A = elems[rng.random(G.d) < delta]
        elif strategy == "uniform_exact":
            A = np.sort(rng.choice(elems, size=size, replace=False))
        elif strategy == "interval":
            start = int(rng.integers(0, G.d))
            A = np.sort(np.roll(elems, -start)[:size])
        else:
            free = _greedy_apfree(G, r, rng)
            if best_density is None or len(free) / G.d > best_density:
                best_density, best_witness = len(free) / G.d, [int(v) for v in free]
            if len(free) >= size:
                A = free[:size]
            else:
                rest = rng.permutation(np.setdiff1d(elems, free))
                A = np.sort(np.concatenate([free, rest[: size - len(free)]]))
        member = np.zeros(p, dtype=np.bool_)
        member[A] = True
        count = count_aps_in_subset(member, A, r)
        raw.append(count)
        sizes.append(int(len(A)))
        norm.append(scale ** (r + 1) * (count + len(A)) / p**2)
    return ExperimentStats(
        p=p,
        d=G.d,
        r=r,
        delta=delta,
        strategy=strategy,
        trials=trials,
        seed=seed,
        raw_counts=raw,
        norm_expectations=norm,
        sizes=sizes,
        best_apfree_density=best_density,
        best_apfree_witness=best_witness,
    )


def census_total(G: Subgroup, r: int) -> int:
    return count_normalized(G, r).total_aps
