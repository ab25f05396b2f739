"""Polynomials and rational functions over K_M.

Root counts are counts in the algebraic closure, read off Newton polygons,
so they stay correct even though K_M itself is not algebraically closed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .field import INF, FieldConfig, FieldError, RamifiedScalar, Val, oo


class ZeroPolynomial(FieldError, ValueError):
    pass


class ZeroDenominator(FieldError, ZeroDivisionError):
    pass


class NonUnitContent(FieldError, ValueError):
    pass


class Poly:
    """Polynomial over K_M, coefficients lowest degree first, no trailing zeros."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldConfig, coeffs: Iterable = ()):
        cs = [RamifiedScalar.coerce(field, c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def z(cls, field: FieldConfig) -> "Poly":
        return cls(field, (0, 1))

    @classmethod
    def const(cls, field: FieldConfig, c) -> "Poly":
        return cls(field, (c,))

    @classmethod
    def from_roots(cls, field: FieldConfig, roots: Sequence) -> "Poly":
        out = cls.const(field, 1)
        for r in roots:
            out = out * cls(field, (-RamifiedScalar.coerce(field, r), 1))
        return out

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def lead(self) -> RamifiedScalar:
        return self.coeffs[-1]

    def coeff(self, i: int) -> RamifiedScalar:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.const(self.field, other)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, RamifiedScalar)):
            return self == Poly.const(self.field, other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.field, [self.coeff(i) + other.coeff(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return Poly(self.field)
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return Poly(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Poly.const(self.field, 1)
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c) -> "Poly":
        c = RamifiedScalar.coerce(self.field, c)
        return Poly(self.field, [a * c for a in self.coeffs])

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        inv_lead = other.lead().inverse()
        quot = [self.field.zero] * max(len(rem) - db, 1)
        while len(rem) - 1 >= db and rem:
            shift = len(rem) - 1 - db
            c = rem[-1] * inv_lead
            quot[shift] = c
            for i, b in enumerate(other.coeffs):
                rem[i + shift] = rem[i + shift] - c * b
            rem.pop()
            while rem and rem[-1].is_zero():
                rem.pop()
        return Poly(self.field, quot), Poly(self.field, rem)

    def __floordiv__(self, other):
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(self._coerce(other))[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.lead().inverse())

    def derivative(self) -> "Poly":
        return Poly(self.field, [c * i for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x) -> RamifiedScalar:
        x = RamifiedScalar.coerce(self.field, x)
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def order_at_zero(self) -> int:
        if self.is_zero():
            raise ZeroPolynomial("order of the zero polynomial")
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                return i
        raise AssertionError

    def compose(self, other: "Poly") -> "Poly":
        acc = Poly(self.field)
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def substitute_affine(self, a, b) -> "Poly":
        """Coefficients of f(a + b*w) in w."""
        b = RamifiedScalar.coerce(self.field, b)
        shifted = taylor_shift(self, a)
        out = []
        bk = self.field.one
        for c in shifted.coeffs:
            out.append(c * bk)
            bk = bk * b
        return Poly(self.field, out)

    def valuations(self) -> list[Val]:
        return [c.valuation() for c in self.coeffs]

    def content_valuation(self) -> Val:
        """min v(c_i), the valuation of the Gauss norm at nu(0,1)."""
        return min(self.valuations(), default=INF)

    def __repr__(self):
        from .parsing import format_poly
        return f"Poly({format_poly(self)!r})"

    def __str__(self):
        from .parsing import format_poly
        return format_poly(self)


def taylor_shift(f: Poly, a) -> Poly:
    """Coefficients of f(w + a) in w (repeated synthetic division)."""
    a = RamifiedScalar.coerce(f.field, a)
    if a.is_zero():
        return f
    cs = list(f.coeffs)
    n = len(cs)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            cs[j] = cs[j] + a * cs[j + 1]
    return Poly(f.field, cs)


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd over K_M (Euclid with exact arithmetic)."""
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


# -- Newton polygons ---------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    slope: Fraction
    length: int

    @property
    def root_valuation(self) -> Fraction:
        return -self.slope


def newton_polygon(f: Poly) -> list[Segment]:
    """Lower convex hull of the points (i, v(c_i)), as (slope, length) segments."""
    if f.is_zero():
        raise ZeroPolynomial("Newton polygon of zero")
    pts = [(i, c.valuation()) for i, c in enumerate(f.coeffs) if not c.is_zero()]
    hull: list = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop middle point if it lies on or above the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segs = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segs.append(Segment(Fraction(y2 - y1) / (x2 - x1), x2 - x1))
    return segs


def root_valuations(f: Poly) -> list[tuple[Val, int]]:
    """(valuation, multiplicity) of the roots of f in the algebraic closure."""
    out: list[tuple[Val, int]] = []
    k = f.order_at_zero()
    if k:
        out.append((INF, k))
    out.extend((s.root_valuation, s.length) for s in newton_polygon(f))
    return out


def root_distances(f: Poly, center) -> list[tuple[Val, int]]:
    """Valuations v(root - center), with multiplicities."""
    return root_valuations(taylor_shift(f, center))


def count_roots(f: Poly, center, log_radius, closed: bool = True) -> int:
    """Number of roots x (with multiplicity) with v(x - center) >= q, or > q if open."""
    if f.is_zero():
        raise ZeroPolynomial("root count of zero")
    q = Fraction(log_radius)
    total = 0
    for v, m in root_distances(f, center):
        if v > q or (closed and v == q):
            total += m
    return total


# -- rational functions -------------------------------------------------------

class RatFunc:
    """num/den over K_M with gcd(num, den) = 1 and den monic."""

    __slots__ = ("field", "num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, *, _normalized: bool = False):
        field = num.field
        if den is None:
            den = Poly.const(field, 1)
        if den.is_zero():
            raise ZeroDenominator("denominator is zero")
        if not _normalized:
            num, den = _normalize_pair(num, den)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def coerce(cls, field: FieldConfig, f) -> "RatFunc":
        if isinstance(f, RatFunc):
            return f
        if isinstance(f, Poly):
            return cls(f)
        if isinstance(f, str):
            from .parsing import parse_ratfunc
            return parse_ratfunc(f, field)
        return cls(Poly.const(field, f))

    @classmethod
    def z(cls, field: FieldConfig) -> "RatFunc":
        return cls(Poly.z(field))

    def _coerce(self, other) -> "RatFunc":
        return RatFunc.coerce(self.field, other)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (Poly, int, Fraction, RamifiedScalar)):
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        o = self._coerce(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.num.is_zero():
            raise ZeroDenominator("division by the zero function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return (1 / self) ** (-n)
        return RatFunc(self.num ** n, self.den ** n)

    def reciprocal(self) -> "RatFunc":
        return 1 / self

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    def __call__(self, x):
        """Value at a point of P^1; returns oo at poles."""
        if x is oo:
            dn, dd = self.num.degree, self.den.degree
            if dn > dd:
                return oo
            if dn < dd:
                return self.field.zero
            return self.num.lead() / self.den.lead()
        x = RamifiedScalar.coerce(self.field, x)
        d = self.den(x)
        if d.is_zero():
            return oo
        return self.num(x) / d

    def derivative(self) -> "RatFunc":
        return RatFunc(wronskian(self), self.den * self.den)

    def post_mobius(self, a, b, c, d) -> "RatFunc":
        """(a f + b) / (c f + d)."""
        F = self.field
        a, b, c, d = (RamifiedScalar.coerce(F, t) for t in (a, b, c, d))
        return RatFunc(self.num.scale(a) + self.den.scale(b), self.num.scale(c) + self.den.scale(d))

    def substitute_affine(self, a, b) -> "RatFunc":
        """f(a + b w) as a function of w."""
        return RatFunc(self.num.substitute_affine(a, b), self.den.substitute_affine(a, b))

    def precompose_mobius(self, a, b, c, d) -> "RatFunc":
        """f((a w + b)/(c w + d)) via homogeneous substitution."""
        F = self.field
        a, b, c, d = (RamifiedScalar.coerce(F, t) for t in (a, b, c, d))
        top = Poly(F, (b, a))
        bot = Poly(F, (d, c))
        n = self.degree

        def homog(poly: Poly) -> Poly:
            acc = Poly(F)
            for i, coeff in enumerate(poly.coeffs):
                acc = acc + (top ** i * bot ** (n - i)).scale(coeff)
            return acc

        return RatFunc(homog(self.num), homog(self.den))

    def __repr__(self):
        from .parsing import format_ratfunc
        return f"RatFunc({format_ratfunc(self)!r})"

    def __str__(self):
        from .parsing import format_ratfunc
        return format_ratfunc(self)


def _normalize_pair(g: Poly, h: Poly) -> tuple[Poly, Poly]:
    if g.is_zero():
        return g, Poly.const(g.field, 1)
    d = poly_gcd(g, h)
    if d.degree > 0:
        g, h = g // d, h // d
    inv = h.lead().inverse()
    return g.scale(inv), h.scale(inv)


def ratfunc_normalize(g: Poly, h: Poly) -> RatFunc:
    if h.is_zero():
        raise ZeroDenominator("denominator is zero")
    return RatFunc(g, h)


def wronskian(f: RatFunc) -> Poly:
    """g'h - h'g for the normalized pair f = g/h."""
    g, h = f.num, f.den
    return g.derivative() * h - h.derivative() * g


# -- reduction to the residue field -------------------------------------------

def _fp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] * inv % p
        q[shift] = c
        for i, bi in enumerate(b):
            a[i + shift] = (a[i + shift] - c * bi) % p
        _fp_trim(a)
    return _fp_trim(q), a


def fp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        a, b = b, _fp_divmod(a, b, p)[1]
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


@dataclass(frozen=True)
class ReducedFraction:
    """Reduction of a unit-content rational function to F_p(z)."""

    kind: str  # "nonconstant" | "constant" | "infinity"
    num: tuple[int, ...]
    den: tuple[int, ...]
    value: int | None = None


def reduce_poly(f: Poly) -> list[int]:
    return _fp_trim([c.residue() for c in f.coeffs])


def reduce_ratfunc(f: RatFunc) -> ReducedFraction:
    p = f.field.p
    if f.num.is_zero() or f.num.content_valuation() != 0 or f.den.content_valuation() != 0:
        raise NonUnitContent("numerator and denominator must both have unit content")
    gb, hb = reduce_poly(f.num), reduce_poly(f.den)
    d = fp_gcd(gb, hb, p)
    gb = _fp_divmod(gb, d, p)[0]
    hb = _fp_divmod(hb, d, p)[0]
    if len(gb) == 1 and len(hb) == 1:
        return ReducedFraction("constant", tuple(gb), tuple(hb), gb[0] * pow(hb[0], -1, p) % p)
    return ReducedFraction("nonconstant", tuple(gb), tuple(hb))


def projective_reduction(f: RatFunc) -> ReducedFraction:
    """Reduction of f at the Gauss point, scaling num and den by one common factor.

    Returns kind "constant" with value 0 when |f| < 1 generically and "infinity"
    when |f| > 1 generically.
    """
    F = f.field
    k = min(f.num.content_valuation(), f.den.content_valuation())
    u = F.uniformizer_for(k).inverse()
    gb, hb = reduce_poly(f.num.scale(u)), reduce_poly(f.den.scale(u))
    if not gb:
        return ReducedFraction("constant", (), tuple(hb), 0)
    if not hb:
        return ReducedFraction("infinity", tuple(gb), ())
    d = fp_gcd(gb, hb, F.p)
    gb = _fp_divmod(gb, d, F.p)[0]
    hb = _fp_divmod(hb, d, F.p)[0]
    if len(gb) == 1 and len(hb) == 1:
        return ReducedFraction("constant", tuple(gb), tuple(hb), gb[0] * pow(hb[0], -1, F.p) % F.p)
    return ReducedFraction("nonconstant", tuple(gb), tuple(hb))
