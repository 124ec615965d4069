"""Dense univariate polynomials over Z with exact (Python int) coefficients."""

from __future__ import annotations

import math
from functools import reduce
from typing import Iterable, Sequence

from .errors import DomainError

__all__ = ["IntPolynomial", "coprime_basis", "poly_gcd", "resultant", "resultant_mod"]


class IntPolynomial:
    """Coefficients low degree first; trailing zeros are stripped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[int, ...] = tuple(c)

    @classmethod
    def x(cls) -> "IntPolynomial":
        return cls((0, 1))

    @classmethod
    def const(cls, c: int) -> "IntPolynomial":
        return cls((c,))

    @classmethod
    def linear(cls, c0: int, c1: int) -> "IntPolynomial":
        return cls((c0, c1))

    # -- queries -----------------------------------------------------------
    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def height(self) -> int:
        return max((abs(c) for c in self.coeffs), default=0)

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def content(self) -> int:
        g = reduce(math.gcd, self.coeffs, 0)
        return g if self.lc >= 0 else -g

    def primitive(self) -> "IntPolynomial":
        """Divide by the content; leading coefficient made positive."""
        if self.is_zero():
            return self
        c = self.content()
        return IntPolynomial(v // c for v in self.coeffs)

    def x_valuation(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return 0

    def strip_x(self) -> "IntPolynomial":
        """Remove every factor of x."""
        return IntPolynomial(self.coeffs[self.x_valuation():])

    def __call__(self, x: int, mod: int | None = None) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
            if mod:
                acc %= mod
        return acc

    # -- arithmetic --------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = IntPolynomial.const(other)
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coef = str(c) if (abs(c) != 1 or i == 0) else ("-" if c < 0 else "")
            terms.append(f"{coef}{'*' if mono and coef not in ('', '-') else ''}{mono}")
        return " + ".join(terms).replace("+ -", "- ")

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(-c for c in self.coeffs)

    def __add__(self, other) -> "IntPolynomial":
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPolynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __sub__(self, other) -> "IntPolynomial":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "IntPolynomial":
        return _coerce(other) - self

    def __mul__(self, other) -> "IntPolynomial":
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "IntPolynomial":
        if k < 0:
            raise DomainError("negative power")
        out, base = IntPolynomial.const(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def pseudo_rem(self, other: "IntPolynomial") -> "IntPolynomial":
        """lc(other)^(deg self - deg other + 1) * self mod other."""
        if other.is_zero():
            raise ZeroDivisionError("pseudo-remainder by zero polynomial")
        r = list(self.coeffs)
        dv, lc = other.degree, other.lc
        if self.degree < dv:
            return IntPolynomial(r)
        for i in range(len(r) - 1, dv - 1, -1):
            c = r[i]
            r = [v * lc for v in r]
            if c:
                for j, b in enumerate(other.coeffs):
                    r[i - dv + j] -= c * b
            r.pop()
        return IntPolynomial(r)

    def exact_div(self, other: "IntPolynomial") -> "IntPolynomial":
        """Quotient in Z[x]; raises if other does not divide self."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        r = list(self.coeffs)
        dv, lc = other.degree, other.lc
        if len(r) - 1 < dv:
            if any(r):
                raise DomainError("not an exact division")
            return IntPolynomial()
        q = [0] * (len(r) - dv)
        for i in range(len(r) - 1, dv - 1, -1):
            c, rem = divmod(r[i], lc)
            if rem:
                raise DomainError("not an exact division")
            q[i - dv] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    r[i - dv + j] -= c * b
        if any(r[:dv]):
            raise DomainError("not an exact division")
        return IntPolynomial(q)

    def divide_const(self, c: int) -> "IntPolynomial":
        out = []
        for v in self.coeffs:
            q, rem = divmod(v, c)
            if rem:
                raise DomainError(f"{c} does not divide every coefficient")
            out.append(q)
        return IntPolynomial(out)


def _coerce(v) -> IntPolynomial:
    return v if isinstance(v, IntPolynomial) else IntPolynomial.const(int(v))


def resultant(f: IntPolynomial, g: IntPolynomial) -> int:
    """Res(f, g) = lc(f)^deg g * prod g(roots of f), via the subresultant PRS."""
    if f.is_zero() or g.is_zero():
        raise DomainError("resultant with the zero polynomial")
    A, B = f, g
    s = 1
    if A.degree < B.degree:
        A, B = B, A
        if A.degree % 2 and B.degree % 2:
            s = -1
    if B.degree == 0:
        return s * B.lc**A.degree
    a, b = A.content(), B.content()
    A, B = A.divide_const(a), B.divide_const(b)
    t = a**B.degree * b**A.degree
    gg, h = 1, 1
    while True:
        delta = A.degree - B.degree
        if A.degree % 2 and B.degree % 2:
            s = -s
        R = A.pseudo_rem(B)
        A = B
        if R.is_zero():
            return 0
        B = R.divide_const(gg * h**delta)
        gg = A.lc
        # h <- h^(1 - delta) g^delta, an exact division when delta > 1
        if delta == 1:
            h = gg
        elif delta > 1:
            num = gg**delta
            den = h ** (delta - 1)
            h, rem = divmod(num, den)
            if rem:
                raise ArithmeticError("non-exact subresultant step")
        if B.degree == 0:
            da = A.degree
            if da == 0:
                return s * t
            num = B.lc**da
            den = h ** (da - 1)
            hh, rem = divmod(num, den)
            if rem:
                raise ArithmeticError("non-exact subresultant step")
            return s * t * hh


def _mod_poly(c: Sequence[int], q: int) -> list[int]:
    out = [v % q for v in c]
    while out and out[-1] == 0:
        out.pop()
    return out


def resultant_mod(f: IntPolynomial, g: IntPolynomial, q: int) -> int:
    """Resultant of the reductions mod a prime q, by Euclid over F_q.

    Degrees are those of the reduced polynomials.
    """
    a, b = _mod_poly(f.coeffs, q), _mod_poly(g.coeffs, q)
    if not a or not b:
        return 0
    res = 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        if da == 0:
            return res * pow(a[0], db, q) % q
        if db == 0:
            return res * pow(b[0], da, q) % q
        if da < db:
            a, b = b, a
            if da % 2 and db % 2:
                res = -res % q
            da, db = db, da
        # Res(a, b) = (-1)^(da db) Res(b, a); Res(b, a) = lc(b)^(da - dr) Res(b, a mod b)
        rem = list(a)
        inv = pow(b[-1], q - 2, q)
        for i in range(da, db - 1, -1):
            c = rem[i] * inv % q
            if c:
                for j in range(db + 1):
                    rem[i - db + j] = (rem[i - db + j] - c * b[j]) % q
        rem = _mod_poly(rem[:db], q)
        if not rem:
            return 0
        dr = len(rem) - 1
        if da % 2 and db % 2:
            res = -res % q
        res = res * pow(b[-1], da - dr, q) % q
        a, b = b, rem


def poly_gcd(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    """Primitive gcd in Z[x] (positive leading coefficient), by primitive PRS."""
    if f.is_zero():
        return g.primitive()
    if g.is_zero():
        return f.primitive()
    c = math.gcd(f.content(), g.content())
    A, B = f.primitive(), g.primitive()
    if A.degree < B.degree:
        A, B = B, A
    while not B.is_zero():
        R = A.pseudo_rem(B)
        A, B = B, (R.primitive() if not R.is_zero() else R)
    if A.degree == 0:
        return IntPolynomial.const(abs(c) or 1)
    return A.primitive() * abs(c)


def coprime_basis(polys: Iterable[IntPolynomial]) -> list[IntPolynomial]:
    """Pairwise coprime primitive polynomials of positive degree generating the inputs.

    Every irreducible factor of every input divides exactly one basis member.
    Built only from gcds and exact divisions, no factorisation.
    """
    basis: list[IntPolynomial] = []
    pending = [p.primitive() for p in polys if not p.is_zero()]
    while pending:
        f = pending.pop()
        if f.degree <= 0:
            continue
        for i, b in enumerate(basis):
            g = poly_gcd(f, b)
            if g.degree > 0:
                del basis[i]
                pending.extend([g, b.exact_div(g).primitive(), f.exact_div(g).primitive()])
                break
        else:
            basis.append(f)
    return sorted(basis, key=lambda p: (p.degree, p.coeffs))
