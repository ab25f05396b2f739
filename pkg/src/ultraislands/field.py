"""Exact arithmetic in K_M = Q(pi), pi**M = p, with the p-adic valuation.

Absolute values are normalized by |p| = 1/p, and every magnitude is kept in
additive form: a magnitude p**(-v) is stored as its valuation v.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Union


class FieldError(Exception):
    pass


class DivisionByZero(FieldError, ZeroDivisionError):
    pass


class NegativeValuation(FieldError, ValueError):
    pass


class InvalidPrime(FieldError, ValueError):
    pass


class FieldMismatch(FieldError, ValueError):
    pass


# -- extended reals used as valuations ---------------------------------------

@total_ordering
class _Extreme:
    """+infinity or -infinity, comparable against Fractions and ints."""

    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    def __eq__(self, other):
        return isinstance(other, _Extreme) and other.sign == self.sign

    def __hash__(self):
        return hash(("extreme", self.sign))

    def __lt__(self, other):
        if isinstance(other, _Extreme):
            return self.sign < other.sign
        return self.sign < 0

    def __gt__(self, other):
        if isinstance(other, _Extreme):
            return self.sign > other.sign
        return self.sign > 0

    def __le__(self, other):
        return self == other or self < other

    def __ge__(self, other):
        return self == other or self > other

    def __neg__(self):
        return NEG_INF if self.sign > 0 else INF

    def __add__(self, other):
        if isinstance(other, _Extreme) and other.sign != self.sign:
            raise ArithmeticError("inf - inf")
        return self

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if other == 0:
            raise ArithmeticError("0 * inf")
        return self if other > 0 else -self

    __rmul__ = __mul__

    def __repr__(self):
        return "INF" if self.sign > 0 else "NEG_INF"


INF = _Extreme(1)
NEG_INF = _Extreme(-1)

Val = Union[Fraction, _Extreme]


class _ProjectiveInfinity:
    """The point at infinity of P^1."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "oo"

    def __reduce__(self):
        return (_ProjectiveInfinity, ())


oo = _ProjectiveInfinity()


# -- rational helpers ---------------------------------------------------------

def vp(x: Fraction | int, p: int) -> Val:
    """p-adic valuation of a rational number."""
    x = Fraction(x)
    if x == 0:
        return INF
    num, den = x.numerator, x.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return Fraction(v)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def floor_frac(x: Fraction) -> int:
    return x.numerator // x.denominator


@dataclass(frozen=True)
class FieldConfig:
    p: int
    M: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise InvalidPrime(f"{self.p} is not prime")
        if self.M < 1:
            raise ValueError("ramification index must be >= 1")

    def __call__(self, x) -> "RamifiedScalar":
        return RamifiedScalar.coerce(self, x)

    @property
    def zero(self) -> "RamifiedScalar":
        return RamifiedScalar(self, (0,))

    @property
    def one(self) -> "RamifiedScalar":
        return RamifiedScalar(self, (1,))

    @property
    def pi(self) -> "RamifiedScalar":
        return self.pi_power(1)

    def pi_power(self, k: int) -> "RamifiedScalar":
        """pi**k for any integer k, using pi**M = p."""
        q, r = divmod(k, self.M)
        coeffs = [Fraction(0)] * self.M
        coeffs[r] = Fraction(self.p) ** q
        return RamifiedScalar(self, coeffs)

    def lift(self, c: int) -> "RamifiedScalar":
        """Embed a residue class 0..p-1."""
        return RamifiedScalar(self, (c % self.p,))

    def uniformizer_for(self, val: Fraction) -> "RamifiedScalar":
        """The power of pi with the given valuation (must lie in (1/M)Z)."""
        k = val * self.M
        if k.denominator != 1:
            raise ValueError(f"valuation {val} is not in (1/{self.M})Z")
        return self.pi_power(int(k))

    def in_value_group(self, val: Fraction) -> bool:
        return (Fraction(val) * self.M).denominator == 1


# -- polynomials over Q, used for inversion in Q[x]/(x^M - p) ----------------

def _qtrim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _qdivmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bi in enumerate(b):
            a[i + shift] -= c * bi
        _qtrim(a)
    return _qtrim(q), a


def _qmul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _qtrim(out)


def _qsub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _qtrim([Fraction(x) for x in out])


def _qinverse_mod(a: list, m: list) -> list:
    """Inverse of a modulo the irreducible m, by the extended Euclidean algorithm."""
    r0, r1 = list(m), list(a)
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, r = _qdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _qsub(s0, _qmul(q, s1))
    # r0 is a nonzero constant since m is irreducible and a != 0 mod m
    c = r0[0]
    _, rem = _qdivmod([x / c for x in s0], m)
    return rem


class RamifiedScalar:
    """Element sum(a_i * pi**i, i < M) of K_M with rational a_i."""

    __slots__ = ("field", "coeffs", "_val")

    def __init__(self, field: FieldConfig, coeffs: Iterable):
        cs = [Fraction(c) for c in coeffs]
        if len(cs) > field.M:
            raise ValueError("too many coefficients")
        cs += [Fraction(0)] * (field.M - len(cs))
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "_val", None)

    def __setattr__(self, name, value):
        raise AttributeError("RamifiedScalar is immutable")

    @classmethod
    def coerce(cls, field: FieldConfig, x) -> "RamifiedScalar":
        if isinstance(x, RamifiedScalar):
            if x.field != field:
                raise FieldMismatch(f"{x.field} vs {field}")
            return x
        if isinstance(x, (int, Fraction)):
            return cls(field, (x,))
        if isinstance(x, str):
            from .parsing import parse_scalar
            return parse_scalar(x, field)
        raise TypeError(f"cannot coerce {type(x).__name__} into K_M")

    def _other(self, y) -> "RamifiedScalar":
        return RamifiedScalar.coerce(self.field, y)

    # arithmetic
    def __add__(self, y):
        try:
            y = self._other(y)
        except TypeError:
            return NotImplemented
        return RamifiedScalar(self.field, [a + b for a, b in zip(self.coeffs, y.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return RamifiedScalar(self.field, [-a for a in self.coeffs])

    def __sub__(self, y):
        try:
            y = self._other(y)
        except TypeError:
            return NotImplemented
        return RamifiedScalar(self.field, [a - b for a, b in zip(self.coeffs, y.coeffs)])

    def __rsub__(self, y):
        return self._other(y) - self

    def __mul__(self, y):
        try:
            y = self._other(y)
        except TypeError:
            return NotImplemented
        M, p = self.field.M, self.field.p
        out = [Fraction(0)] * M
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(y.coeffs):
                if not b:
                    continue
                k = i + j
                if k >= M:
                    out[k - M] += a * b * p
                else:
                    out[k] += a * b
        return RamifiedScalar(self.field, out)

    __rmul__ = __mul__

    def inverse(self) -> "RamifiedScalar":
        if self.is_zero():
            raise DivisionByZero("inverse of zero in K_M")
        M = self.field.M
        nz = [i for i, a in enumerate(self.coeffs) if a]
        if nz == [0]:
            return RamifiedScalar(self.field, (1 / self.coeffs[0],))
        if len(nz) == 1:
            # monomial a * pi**i
            i = nz[0]
            return self.field.pi_power(-i) * RamifiedScalar(self.field, (1 / self.coeffs[i],))
        modulus = [Fraction(-self.field.p)] + [Fraction(0)] * (M - 1) + [Fraction(1)]
        inv = _qinverse_mod(_qtrim(list(self.coeffs)), modulus)
        return RamifiedScalar(self.field, inv)

    def __truediv__(self, y):
        try:
            y = self._other(y)
        except TypeError:
            return NotImplemented
        return self * y.inverse()

    def __rtruediv__(self, y):
        return self._other(y) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparisons
    def __eq__(self, y):
        if isinstance(y, (int, Fraction)):
            return self.coeffs == RamifiedScalar(self.field, (y,)).coeffs
        if isinstance(y, RamifiedScalar):
            return self.field == y.field and self.coeffs == y.coeffs
        return NotImplemented

    def __hash__(self):
        if all(c == 0 for c in self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.field, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    # valuation-theoretic data
    def valuation(self) -> Val:
        """v(x) = min(v_p(a_i) + i/M); exact since the terms have distinct valuations."""
        if self._val is None:
            p, M = self.field.p, self.field.M
            best: Val = INF
            for i, a in enumerate(self.coeffs):
                if a:
                    v = vp(a, p) + Fraction(i, M)
                    if v < best:
                        best = v
            object.__setattr__(self, "_val", best)
        return self._val

    def residue(self) -> int:
        """Image in F_p = O/m, as an integer 0..p-1."""
        v = self.valuation()
        if v < 0:
            raise NegativeValuation(f"{self} has valuation {v}")
        a0 = self.coeffs[0]
        p = self.field.p
        if a0 == 0 or vp(a0, p) > 0:
            return 0
        return a0.numerator * pow(a0.denominator, -1, p) % p

    def truncate(self, k: int) -> "RamifiedScalar":
        """Canonical representative of self modulo pi**k * O."""
        p, M = self.field.p, self.field.M
        out = []
        for i, a in enumerate(self.coeffs):
            e = ceil_frac(Fraction(k - i, M))  # need v_p(b_i) >= e for b_i pi^i in pi^k O
            w = vp(a, p)
            if w >= e:
                out.append(Fraction(0))
                continue
            unit = a / Fraction(p) ** int(w)
            modulus = p ** (e - int(w))
            u = unit.numerator * pow(unit.denominator, -1, modulus) % modulus
            out.append(Fraction(p) ** int(w) * u)
        return RamifiedScalar(self.field, out)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def __repr__(self):
        return f"RamifiedScalar({format_scalar(self)!r}, p={self.field.p}, M={self.field.M})"

    def __str__(self):
        return format_scalar(self)


def format_scalar(x: RamifiedScalar) -> str:
    terms = []
    for i, a in enumerate(x.coeffs):
        if not a:
            continue
        if i == 0:
            terms.append(str(a))
        elif i == 1:
            terms.append(f"{a}*pi")
        else:
            terms.append(f"{a}*pi^{i}")
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


# -- magnitudes ---------------------------------------------------------------

@total_ordering
class Magnitude:
    """A real number p**(-val); val = INF encodes 0 and val = NEG_INF encodes infinity."""

    __slots__ = ("val",)

    def __init__(self, val):
        if not isinstance(val, _Extreme):
            val = Fraction(val)
        object.__setattr__(self, "val", val)

    def __setattr__(self, name, value):
        raise AttributeError("Magnitude is immutable")

    @classmethod
    def zero(cls):
        return cls(INF)

    @classmethod
    def infinite(cls):
        return cls(NEG_INF)

    @classmethod
    def of(cls, x: RamifiedScalar) -> "Magnitude":
        return cls(x.valuation())

    @property
    def is_zero(self):
        return self.val == INF

    @property
    def is_infinite(self):
        return self.val == NEG_INF

    def __eq__(self, other):
        if not isinstance(other, Magnitude):
            return NotImplemented
        return self.val == other.val

    def __hash__(self):
        return hash(("mag", self.val))

    def __lt__(self, other):
        if not isinstance(other, Magnitude):
            return NotImplemented
        return self.val > other.val

    def __mul__(self, other):
        if not isinstance(other, Magnitude):
            return NotImplemented
        return Magnitude(self.val + other.val)

    def __truediv__(self, other):
        if not isinstance(other, Magnitude):
            return NotImplemented
        return Magnitude(self.val - other.val)

    def __pow__(self, n):
        if self.is_zero or self.is_infinite:
            return Magnitude(self.val * n)
        return Magnitude(self.val * Fraction(n))

    def exponent(self):
        """The rational q with self = p**(-q)."""
        return self.val

    def __repr__(self):
        if self.is_zero:
            return "Magnitude(0)"
        if self.is_infinite:
            return "Magnitude(inf)"
        return f"Magnitude(p^-({self.val}))"


# -- E_p and certified comparisons -------------------------------------------

def e_p_interval(p: int, terms: int) -> tuple[Fraction, Fraction]:
    """Rational enclosure [S_N, S_N + 2/((p-1) p^N)] of E_p = sum 1/(p^i - 1)."""
    if p < 3 or not is_prime(p):
        raise InvalidPrime(f"E_p is only used for primes p >= 3, got {p}")
    if terms < 1:
        raise ValueError("need at least one term")
    s = sum((Fraction(1, p ** i - 1) for i in range(1, terms + 1)), Fraction(0))
    return s, s + Fraction(2, (p - 1) * p ** terms)


@dataclass(frozen=True)
class LogThreshold:
    """The real number p**(-(a + b*E_p)); zero=True encodes the number 0."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)
    zero: bool = False

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @classmethod
    def of_magnitude(cls, m: Magnitude) -> "LogThreshold":
        if m.is_zero:
            return cls(zero=True)
        if m.is_infinite:
            raise ValueError("infinite threshold")
        return cls(m.val, 0)

    def __mul__(self, other):
        if isinstance(other, Magnitude):
            other = LogThreshold.of_magnitude(other)
        if self.zero or other.zero:
            return LogThreshold(zero=True)
        return LogThreshold(self.a + other.a, self.b + other.b)

    def __pow__(self, n):
        n = Fraction(n)
        if self.zero:
            return self
        return LogThreshold(self.a * n, self.b * n)

    def is_exact(self) -> bool:
        return self.zero or self.b == 0

    def as_magnitude(self) -> Magnitude:
        if self.zero:
            return Magnitude.zero()
        if self.b != 0:
            raise ValueError("threshold involves E_p and is not an exact magnitude")
        return Magnitude(self.a)


class Verdict(str, enum.Enum):
    LESS = "Less"
    GREATER_EQ = "GreaterEq"
    UNDECIDED = "Undecided"


def certified_sign(a: Fraction, b: Fraction, p: int, max_terms: int = 64):
    """Sign of a + b*E_p, or None if it cannot be certified within max_terms."""
    a, b = Fraction(a), Fraction(b)
    if b == 0:
        return (a > 0) - (a < 0)
    n = 1
    while True:
        lo, hi = e_p_interval(p, n)
        ends = (a + b * lo, a + b * hi)
        if min(ends) > 0:
            return 1
        if max(ends) < 0:
            return -1
        if n >= max_terms:
            return None
        n = min(2 * n, max_terms)


def threshold_compare(m: Magnitude, t: LogThreshold, p: int, max_terms: int = 64) -> Verdict:
    """Compare m against t; equality counts as GreaterEq."""
    if t.zero or m.is_infinite:
        return Verdict.GREATER_EQ
    if m.is_zero:
        return Verdict.LESS
    # m >= t  <=>  m.val <= a + b E_p
    sign = certified_sign(t.a - m.val, t.b, p, max_terms)
    if sign is None:
        return Verdict.UNDECIDED
    return Verdict.GREATER_EQ if sign >= 0 else Verdict.LESS


def threshold_min(t1: LogThreshold, t2: LogThreshold, p: int, max_terms: int = 64):
    """Smaller of two thresholds (the one with larger exponent), or None if undecided."""
    if t1.zero:
        return t1
    if t2.zero:
        return t2
    sign = certified_sign(t1.a - t2.a, t1.b - t2.b, p, max_terms)
    if sign is None:
        return None
    return t1 if sign >= 0 else t2


def threshold_max(t1: LogThreshold, t2: LogThreshold, p: int, max_terms: int = 64):
    if t1.zero:
        return t2
    if t2.zero:
        return t1
    sign = certified_sign(t1.a - t2.a, t1.b - t2.b, p, max_terms)
    if sign is None:
        return None
    return t2 if sign >= 0 else t1
