"""Descent tests through the geometric reflection representation.

A generator s acts on the root space by v -> v - 2B(alpha_s, v) alpha_s with
B(alpha_s, alpha_t) = -cos(pi/m_st).  Right multiplication by s shortens w
exactly when w sends alpha_s to a negative root, so the whole word problem
reduces to sign decisions on root coordinates.

Two scalar types drive the same walk:

* ``QSqrt`` -- exact elements of Q(sqrt2, sqrt3, sqrt5), enough for every
  finite label in {2, 3, 4, 5, 6} (cos pi/5 = (1+sqrt5)/4).
* ``FInterval`` -- rational intervals for the remaining labels; signs are
  decided only when the interval is clear of zero, otherwise
  ``PrecisionError`` is raised instead of guessing.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import PrecisionError
from .exactpoly import Poly, largest_root_interval, sqrt_bounds

Fr = Fraction

# basis of Q(sqrt2, sqrt3, sqrt5): index by bitmask, bit0 ~ sqrt2, bit1 ~ sqrt3, bit2 ~ sqrt5
_PRIMES = (2, 3, 5)
_RADICAND = [1] * 8
for _m in range(8):
    r = 1
    for _b, _p in enumerate(_PRIMES):
        if _m >> _b & 1:
            r *= _p
    _RADICAND[_m] = r

# (i, j) -> (mask, integer factor) for sqrt(rad_i)*sqrt(rad_j)
_MULT = [[(0, 1)] * 8 for _ in range(8)]
for _i in range(8):
    for _j in range(8):
        common = 1
        for _b, _p in enumerate(_PRIMES):
            if (_i >> _b & 1) and (_j >> _b & 1):
                common *= _p
        _MULT[_i][_j] = (_i ^ _j, common)

_ZERO8 = (Fr(0),) * 8


class QSqrt:
    """Exact element of Q(sqrt2, sqrt3, sqrt5)."""

    __slots__ = ("c",)

    def __init__(self, coords=_ZERO8):
        self.c = coords

    @classmethod
    def of(cls, x) -> "QSqrt":
        return cls((Fr(x),) + _ZERO8[1:])

    @classmethod
    def radical(cls, mask: int, scale=1) -> "QSqrt":
        c = list(_ZERO8)
        c[mask] = Fr(scale)
        return cls(tuple(c))

    def __add__(self, o):
        return QSqrt(tuple(a + b for a, b in zip(self.c, o.c)))

    def __sub__(self, o):
        return QSqrt(tuple(a - b for a, b in zip(self.c, o.c)))

    def __neg__(self):
        return QSqrt(tuple(-a for a in self.c))

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            return QSqrt(tuple(a * o for a in self.c))
        out = list(_ZERO8)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    if b:
                        k, f = _MULT[i][j]
                        out[k] += a * b * f
        return QSqrt(tuple(out))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.c)

    def decided_sign(self):
        """-1/0/+1; never None for exact scalars."""
        return self.sign()

    def sign(self) -> int:
        if self.is_zero():
            return 0
        bits = 32
        while True:
            lo = hi = Fr(0)
            for m, a in enumerate(self.c):
                if not a:
                    continue
                if m == 0:
                    lo += a
                    hi += a
                    continue
                slo, shi = sqrt_bounds(_RADICAND[m], bits)
                if a > 0:
                    lo += a * slo
                    hi += a * shi
                else:
                    lo += a * shi
                    hi += a * slo
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2  # value is nonzero, so this terminates


class FInterval:
    """Closed rational interval; sign queries fail loudly when ambiguous."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        self.lo = Fr(lo)
        self.hi = Fr(lo if hi is None else hi)

    @classmethod
    def of(cls, x) -> "FInterval":
        return cls(Fr(x))

    def __add__(self, o):
        return FInterval(self.lo + o.lo, self.hi + o.hi)

    def __sub__(self, o):
        return FInterval(self.lo - o.hi, self.hi - o.lo)

    def __neg__(self):
        return FInterval(-self.hi, -self.lo)

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            o = FInterval(o)
        vals = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return FInterval(min(vals), max(vals))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.lo == 0 and self.hi == 0

    def decided_sign(self):
        """-1/0/+1 when the interval decides it, else None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def sign(self) -> int:
        s = self.decided_sign()
        if s is None:
            raise PrecisionError(
                f"sign of [{float(self.lo):.3e}, {float(self.hi):.3e}] is undecided; "
                "descent test inconclusive at the working precision"
            )
        return s


_EXACT_COS = {}  # m -> QSqrt value of cos(pi/m)


def _exact_cos(m: int) -> QSqrt:
    if m not in _EXACT_COS:
        half = Fr(1, 2)
        table = {
            2: QSqrt.of(0),
            3: QSqrt.of(half),
            4: QSqrt.radical(0b001, half),            # sqrt2 / 2
            5: QSqrt.of(Fr(1, 4)) + QSqrt.radical(0b100, Fr(1, 4)),  # (1+sqrt5)/4
            6: QSqrt.radical(0b010, half),            # sqrt3 / 2
        }
        _EXACT_COS[m] = table[m]
    return _EXACT_COS[m]


_INTERVAL_COS = {}  # m -> FInterval enclosure of cos(pi/m)
_COS_BITS = 128


def _interval_cos(m: int) -> FInterval:
    """Enclosure of cos(pi/m): 2cos(pi/m) is the largest root of the
    Chebyshev-type recurrence P_k = x P_{k-1} - P_{k-2}, P_0=1, P_1=x."""
    if m not in _INTERVAL_COS:
        # p after k steps is P_{k+1}, with roots 2cos(j pi/(k+2)); stop at P_{m-1}
        p0, p1 = Poly.const(1), Poly.var()
        for _ in range(m - 2):
            p0, p1 = p1, Poly.var() * p1 - p0
        lo, hi = largest_root_interval(p1, Fr(1, 1 << _COS_BITS))
        _INTERVAL_COS[m] = FInterval(lo / 2, hi / 2)
    return _INTERVAL_COS[m]


class ReflectionEngine:
    """Word problem via root walks; generic over the scalar type."""

    def __init__(self, matrix, exact: bool):
        self.rank = len(matrix)
        self.exact = exact
        if exact:
            one, zero = QSqrt.of(1), QSqrt.of(0)
            cos = _exact_cos
        else:
            one, zero = FInterval.of(1), FInterval.of(0)
            cos = _interval_cos
        self._zero = zero
        n = self.rank
        B = [[zero] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if i == j:
                    B[i][j] = one
                else:
                    m = matrix[i][j]
                    B[i][j] = -(one if m == 0 else cos(m) * 1)
        self.B = B
        self.alpha = []
        for i in range(n):
            v = [zero] * n
            v[i] = one
            self.alpha.append(tuple(v))

    def _reflect(self, s: int, v):
        coef = self._zero
        row = self.B[s]
        for j, x in enumerate(v):
            if not x.is_zero():
                coef = coef + row[j] * x
        w = list(v)
        w[s] = w[s] - (coef + coef)
        return tuple(w)

    def _is_negative(self, v) -> bool:
        # a root has all coordinates of one sign; any decided nonzero
        # coordinate settles it, exactly-zero coordinates are skipped
        for x in v:
            s = x.decided_sign()
            if s:
                return s < 0
        if all(x.decided_sign() == 0 for x in v):  # pragma: no cover
            raise PrecisionError("root vector is exactly zero")
        raise PrecisionError(
            "root sign undecided at the working precision; "
            "descent test inconclusive"
        )

    def mul_gen(self, word: tuple, s: int) -> tuple:
        """Reduced word for w*s given a reduced word for w (exchange walk)."""
        v = self.alpha[s]
        for idx in range(len(word) - 1, -1, -1):
            v2 = self._reflect(word[idx], v)
            if self._is_negative(v2):
                return word[:idx] + word[idx + 1 :]
            v = v2
        return word + (s,)

    def left_mul_gen(self, word: tuple, u: int) -> tuple:
        """Reduced word for u*w via the mirror of the right-multiplication walk."""
        return tuple(reversed(self.mul_gen(tuple(reversed(word)), u)))

    def right_descents(self, word: tuple) -> int:
        """Bitmask of s with d(ws) < d(w), i.e. w(alpha_s) negative."""
        mask = 0
        if not word:
            return mask
        for s in range(self.rank):
            v = self.alpha[s]
            for idx in range(len(word) - 1, -1, -1):
                v = self._reflect(word[idx], v)
            if self._is_negative(v):
                mask |= 1 << s
        return mask

    def left_descents(self, word: tuple) -> int:
        return self.right_descents(tuple(reversed(word)))

    def shortlex(self, reduced: tuple) -> tuple:
        """ShortLex-least reduced word of the element of a reduced word."""
        out = []
        cur = reduced
        while cur:
            ld = self.left_descents(cur)
            u = (ld & -ld).bit_length() - 1
            out.append(u)
            cur = self.left_mul_gen(cur, u)
        return tuple(out)

    def normal_form(self, word) -> tuple:
        red: tuple = ()
        for s in word:
            red = self.mul_gen(red, s)
        return self.shortlex(red)

    def normalize_after_mul(self, word: tuple) -> tuple:
        return self.shortlex(word)
