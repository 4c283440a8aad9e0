"""Exact univariate polynomials and rational functions over the rationals.

Dense representation, Fraction coefficients.  This backs the growth-series
arithmetic, the formal (rational-function-valued) Hecke scalars, and the
Sturm-sequence real-root isolation used to locate radii of convergence.
Everything here is exact; no floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt, lcm

from .errors import PoleError

Fr = Fraction


def _strip(coeffs):
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(Fr(x) for x in c)


class Poly:
    """Immutable dense polynomial; ``c[i]`` is the coefficient of t^i."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        object.__setattr__(self, "c", _strip(coeffs))

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("Poly is immutable")

    @classmethod
    def const(cls, x) -> "Poly":
        return cls((Fr(x),))

    @classmethod
    def var(cls) -> "Poly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.c) - 1  # -1 for the zero polynomial

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.c == _strip((other,))
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __add__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        n = max(len(self.c), len(other.c))
        a = list(self.c) + [Fr(0)] * (n - len(self.c))
        for i, x in enumerate(other.c):
            a[i] += x
        return Poly(a)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(tuple(-x for x in self.c))

    def __sub__(self, other) -> "Poly":
        return self + (-other if isinstance(other, Poly) else -Fr(other))

    def __rsub__(self, other) -> "Poly":
        return Poly.const(other) + (-self)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly(tuple(x * other for x in self.c))
        if not (self and other):
            return Poly()
        out = [Fr(0)] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out, base = Poly.const(1), self
        while n:
            if n & 1:
                out = out * base
            base, n = base * base, n >> 1
        return out

    def __divmod__(self, other: "Poly"):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        dq = len(self.c) - len(other.c)
        if dq < 0:
            return Poly(), self
        quo = [Fr(0)] * (dq + 1)
        lead = other.c[-1]
        for k in range(dq, -1, -1):
            coef = rem[k + len(other.c) - 1] / lead
            quo[k] = coef
            if coef:
                for j, y in enumerate(other.c):
                    rem[k + j] -= coef * y
        return Poly(quo), Poly(rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __call__(self, x):
        """Horner evaluation; works for Fraction, float and RationalFunction."""
        out = 0
        for coef in reversed(self.c):
            out = out * x + coef
        return out

    def deriv(self) -> "Poly":
        return Poly(tuple(i * x for i, x in enumerate(self.c) if i))

    def reversed(self) -> "Poly":
        """Coefficients reversed: t^deg * p(1/t)."""
        return Poly(tuple(reversed(self.c)))

    def monic(self) -> "Poly":
        if not self:
            return self
        return Poly(tuple(x / self.c[-1] for x in self.c))

    def rat_content(self):
        """Split as c * primitive where primitive has coprime integer
        coefficients and positive leading coefficient."""
        if not self:
            return Fr(0), Poly()
        den = 1
        for x in self.c:
            den = lcm(den, x.denominator)
        ints = [int(x * den) for x in self.c]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if ints[-1] < 0:
            g = -g
        return Fr(g, den), Poly(tuple(Fr(v // g) for v in ints))

    def primitive(self) -> "Poly":
        return self.rat_content()[1]

    def __repr__(self):
        return f"Poly({self.as_string()})"

    def as_string(self, name: str = "t") -> str:
        if not self:
            return "0"
        parts = []
        for i, x in enumerate(self.c):
            if not x:
                continue
            if i == 0:
                term = str(x)
            else:
                mag = "" if abs(x) == 1 else f"{abs(x)}*"
                term = f"{mag}{name}" + (f"^{i}" if i > 1 else "")
                if x < 0:
                    term = "-" + term
            parts.append(term)
        s = parts[0]
        for term in parts[1:]:
            s += " - " + term[1:] if term.startswith("-") else " + " + term
        return s


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, a % b
    return a.monic() if a else a


# ---------------------------------------------------------------------------
# rational functions


class RationalFunction:
    """P(t)/Q(t) in lowest terms; integer coefficients, Q with positive leading coefficient."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = num if isinstance(num, Poly) else Poly.const(num)
        den = den if isinstance(den, Poly) else Poly.const(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            object.__setattr__(self, "num", Poly())
            object.__setattr__(self, "den", Poly.const(1))
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num // g, den // g
        cn, pn = num.rat_content()
        cd, pd = den.rat_content()
        f = cn / cd
        object.__setattr__(self, "num", pn * f.numerator)
        object.__setattr__(self, "den", pd * f.denominator)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def var(cls) -> "RationalFunction":
        """The rational function t (formal-variable scalar)."""
        return cls(Poly.var())

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        other = _promote(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __add__(self, other):
        other = _promote(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        other = _promote(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _promote(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _promote(other)
        if other is NotImplemented:
            return NotImplemented
        if not other:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _promote(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunction(self.den, self.num) ** (-n)
        return RationalFunction(self.num**n, self.den**n)

    def reciprocal(self) -> "RationalFunction":
        return RationalFunction(self.den, self.num)

    def __call__(self, x):
        """Evaluate at an exact point (or another rational function)."""
        dv = self.den(x)
        if isinstance(dv, (int, Fraction)) and dv == 0:
            raise PoleError(f"evaluation at a pole: {x}")
        return self.num(x) / dv

    def series(self, n: int) -> list[Fraction]:
        """First n+1 Taylor coefficients at t=0 (requires den(0) != 0)."""
        if not self.den.c or self.den.c[0] == 0:
            raise PoleError("series expansion at a pole of the denominator")
        d = self.den.c
        nm = self.num.c
        out = []
        for k in range(n + 1):
            acc = nm[k] if k < len(nm) else Fr(0)
            for j in range(1, min(k, len(d) - 1) + 1):
                acc -= d[j] * out[k - j]
            out.append(acc / d[0])
        return out

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __repr__(self):
        return f"RationalFunction({self.as_string()})"

    def as_string(self, name: str = "t") -> str:
        if self.den == 1:
            return f"({self.num.as_string(name)})"
        return f"({self.num.as_string(name)}) / ({self.den.as_string(name)})"


def _promote(x):
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, (int, Fraction)):
        return RationalFunction(Poly.const(x))
    if isinstance(x, Poly):
        return RationalFunction(x)
    return NotImplemented


def poly_at_inverse(p: Poly) -> RationalFunction:
    """p(1/t) as a rational function of t."""
    return RationalFunction(p.reversed(), Poly.var() ** p.degree)


# ---------------------------------------------------------------------------
# Sturm sequences and real-root isolation


def sturm_chain(p: Poly) -> list[Poly]:
    """Sturm chain of the square-free part of p."""
    g = poly_gcd(p, p.deriv())
    if g.degree > 0:
        p = p // g
    chain = [p, p.deriv()]
    while chain[-1]:
        chain.append(-(chain[-2] % chain[-1]))
    chain.pop()
    return chain


def _variations(values) -> int:
    signs = [1 if v > 0 else -1 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(chain: list[Poly], a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots in the half-open interval (a, b]."""
    va = _variations([q(a) for q in chain])
    vb = _variations([q(b) for q in chain])
    return va - vb


def cauchy_bound(p: Poly) -> Fraction:
    """All real roots lie in [-B, B]."""
    lead = abs(p.c[-1])
    return 1 + max(abs(x) for x in p.c) / lead


def rational_roots(p: Poly) -> list[Fraction]:
    """All rational roots, ascending (exact; via the rational-root test)."""
    p = p.primitive()
    if not p:
        raise ValueError("zero polynomial")
    # strip t^k
    k = 0
    while p.c[k] == 0:
        k += 1
    roots = set([Fr(0)] if k else [])
    q = Poly(p.c[k:])
    a0, an = int(q.c[0]), int(q.c[-1])

    def divisors(n):
        n = abs(n)
        out = []
        d = 1
        while d * d <= n:
            if n % d == 0:
                out += [d, n // d]
            d += 1
        return set(out)

    for num in divisors(a0):
        for den in divisors(an):
            for cand in (Fr(num, den), Fr(-num, den)):
                if q(cand) == 0:
                    roots.add(cand)
    return sorted(roots)


def isolate_smallest_positive_root(p: Poly, width: Fraction = Fr(1, 10**12)):
    """Isolating interval (lo, hi] of width <= ``width`` around the smallest
    positive real root of p, or None if p has no positive real root."""
    chain = sturm_chain(p)
    hi = cauchy_bound(p)
    lo = Fr(0)
    if count_roots(chain, lo, hi) == 0:
        return None
    # shrink to the first root: keep invariant count((0, lo]) == 0, count((lo, hi]) >= 1
    while hi - lo > width or count_roots(chain, lo, hi) > 1:
        mid = (lo + hi) / 2
        if count_roots(chain, lo, mid) >= 1:
            hi = mid
        else:
            lo = mid
    return lo, hi


def largest_root_interval(p: Poly, width: Fraction):
    """Isolating interval of the largest real root of p (assumed to exist)."""
    chain = sturm_chain(p)
    hi = cauchy_bound(p)
    lo = -hi
    total = count_roots(chain, lo, hi)
    if total == 0:
        raise ValueError("polynomial has no real roots")
    while hi - lo > width or count_roots(chain, lo, hi) > 1:
        mid = (lo + hi) / 2
        if count_roots(chain, mid, hi) >= 1:
            lo = mid
        else:
            hi = mid
    return lo, hi


def sqrt_bounds(n: int, bits: int) -> tuple[Fraction, Fraction]:
    """Rational enclosure of sqrt(n) with width 2^-bits."""
    s = isqrt(n << (2 * bits))
    return Fr(s, 1 << bits), Fr(s + 1, 1 << bits)
