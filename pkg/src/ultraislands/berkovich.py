"""Points and disks of the Berkovich projective line, and the Mobius action."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .field import (
    INF,
    FieldConfig,
    FieldError,
    Magnitude,
    RamifiedScalar,
    oo,
)

ProjPoint = Union[RamifiedScalar, type(oo)]


class TypeMismatch(FieldError, TypeError):
    pass


class DegenerateTriple(FieldError, ValueError):
    pass


class UnrepresentableRadius(FieldError, ValueError):
    pass


def _val(x: ProjPoint):
    return x.valuation()


@dataclass(frozen=True)
class TypeI:
    point: ProjPoint


class TypeII:
    """nu(a, p^-q): the Gauss norm of the closed disk Dbar(a, p^-q).

    The center is stored truncated below the radius level, so structural
    equality is disk equality.
    """

    __slots__ = ("center", "log_radius", "field")

    def __init__(self, center: RamifiedScalar, log_radius):
        q = Fraction(log_radius)
        field = center.field
        if not field.in_value_group(q):
            raise UnrepresentableRadius(f"log-radius {q} is not in (1/{field.M})Z")
        object.__setattr__(self, "center", center.truncate(int(q * field.M)))
        object.__setattr__(self, "log_radius", q)
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("TypeII is immutable")

    @property
    def radius(self) -> Magnitude:
        return Magnitude(self.log_radius)

    def __eq__(self, other):
        if not isinstance(other, TypeII):
            return NotImplemented
        return self.log_radius == other.log_radius and self.center == other.center

    def __hash__(self):
        return hash((self.center, self.log_radius))

    def contains_point(self, x: ProjPoint) -> bool:
        """x lies in the closed disk Dbar(center, radius)."""
        return x is not oo and _val(x - self.center) >= self.log_radius

    def __repr__(self):
        return f"nu({self.center}, p^-({self.log_radius}))"


BerkPoint = Union[TypeI, TypeII]


# -- disks in P^1 ----------------------------------------------------------------

@dataclass(frozen=True)
class ProjDisk:
    """A disk of P^1: a disk in K, or (complement=True) the complement of one.

    `open` describes the set itself, so `comp Dbar(a, r)` has open=True.
    """

    center: RamifiedScalar
    log_radius: Fraction
    open: bool = True
    complement: bool = False

    def __post_init__(self):
        object.__setattr__(self, "log_radius", Fraction(self.log_radius))

    @property
    def field(self) -> FieldConfig:
        return self.center.field

    def __contains__(self, x) -> bool:
        if x is oo:
            return self.complement
        d = _val(RamifiedScalar.coerce(self.field, x) - self.center)
        q = self.log_radius
        if not self.complement:
            return d > q if self.open else d >= q
        return d < q if self.open else d <= q

    def boundary_point(self) -> TypeII:
        return TypeII(self.center, self.log_radius)

    def marked_point(self) -> ProjPoint:
        """A canonical point of the disk: its center, or oo for complements."""
        return oo if self.complement else self.center

    def complement_disk(self) -> "ProjDisk":
        return ProjDisk(self.center, self.log_radius, open=not self.open, complement=not self.complement)

    def __eq__(self, other):
        if not isinstance(other, ProjDisk):
            return NotImplemented
        return (
            self.log_radius == other.log_radius
            and self.open == other.open
            and self.complement == other.complement
            and _val(self.center - other.center) >= self.log_radius
        )

    def __hash__(self):
        return hash((self.log_radius, self.open, self.complement))

    def contains_disk(self, other: "ProjDisk") -> bool:
        """other is a subset of self."""
        if other.complement and not self.complement:
            return False
        if not other.complement and not self.complement:
            return _finite_disk_subset(other, self)
        if other.complement and self.complement:
            # P^1 \ X' inside P^1 \ X  <=>  X inside X'
            return _finite_disk_subset(self.complement_disk(), other.complement_disk())
        # finite disk inside a complement: disjoint from the complemented disk
        return _finite_disks_disjoint(other, self.complement_disk())

    def intersects(self, other: "ProjDisk") -> bool:
        # ultrametric: two disks of P^1 are nested, disjoint, or cover P^1
        if self.contains_disk(other) or other.contains_disk(self):
            return True
        return not (self.complement_disk().contains_disk(other))


def _finite_disk_subset(a: ProjDisk, b: ProjDisk) -> bool:
    """a inside b, both finite disks."""
    if a.center not in b:
        return False
    if a.log_radius > b.log_radius:
        return True
    if a.log_radius < b.log_radius:
        return False
    return b.open is False or a.open


def _finite_disks_disjoint(a: ProjDisk, b: ProjDisk) -> bool:
    return not (a.center in b or b.center in a)


def open_component(nu: TypeII, w: ProjPoint) -> ProjDisk:
    """The component of P^1 minus {nu} containing the type I point w."""
    if w is not oo and _val(w - nu.center) >= nu.log_radius:
        return ProjDisk(w, nu.log_radius, open=True)
    return ProjDisk(nu.center, nu.log_radius, open=True, complement=True)


# -- spherical geometry -----------------------------------------------------------

def _homog(P: ProjPoint, field: FieldConfig):
    if P is oo:
        return field.one, field.zero
    return RamifiedScalar.coerce(field, P), field.one


def spherical_distance(P: ProjPoint, Q: ProjPoint, field: FieldConfig | None = None) -> Magnitude:
    """|x1 y2 - x2 y1| / (max(|x1|,|y1|) max(|x2|,|y2|))."""
    if field is None:
        field = (P if P is not oo else Q).field
    x1, y1 = _homog(P, field)
    x2, y2 = _homog(Q, field)
    num = (x1 * y2 - x2 * y1).valuation()
    v1 = min(x1.valuation(), y1.valuation())
    v2 = min(x2.valuation(), y2.valuation())
    return Magnitude(num - v1 - v2)


def spherical_radius_val(center: RamifiedScalar, q: Fraction) -> Fraction:
    """Valuation of rho / max(1, rho^2, |a|^2) for nu(a, rho), rho = p^-q."""
    va = center.valuation()
    return q - min(Fraction(0), 2 * q, 2 * va if va != INF else Fraction(0))


def spherical_radius(nu: BerkPoint) -> Magnitude:
    if not isinstance(nu, TypeII):
        raise TypeMismatch("spherical radius is computed at type II points only")
    return Magnitude(spherical_radius_val(nu.center, nu.log_radius))


# -- Mobius transformations ----------------------------------------------------

class Mobius:
    """z -> (a z + b)/(c z + d), acting on homogeneous coordinates."""

    __slots__ = ("a", "b", "c", "d", "field")

    def __init__(self, a, b, c, d, field: FieldConfig | None = None):
        if field is None:
            field = next(t.field for t in (a, b, c, d) if isinstance(t, RamifiedScalar))
        a, b, c, d = (RamifiedScalar.coerce(field, t) for t in (a, b, c, d))
        if (a * d - b * c).is_zero():
            raise ValueError("singular Mobius matrix")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("Mobius is immutable")

    @classmethod
    def identity(cls, field: FieldConfig) -> "Mobius":
        return cls(1, 0, 0, 1, field)

    @classmethod
    def affine(cls, scale, shift, field: FieldConfig) -> "Mobius":
        return cls(scale, shift, 0, 1, field)

    @property
    def matrix(self):
        return ((self.a, self.b), (self.c, self.d))

    def det(self) -> RamifiedScalar:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "Mobius") -> "Mobius":
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return Mobius(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h, self.field)

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a, self.field)

    def __call__(self, P: ProjPoint) -> ProjPoint:
        x, y = _homog(P, self.field)
        nx = self.a * x + self.b * y
        ny = self.c * x + self.d * y
        if ny.is_zero():
            return oo
        return nx / ny

    def same_class(self, other: "Mobius") -> bool:
        """Equality in PGL(2): proportional matrices."""
        m1 = [self.a, self.b, self.c, self.d]
        m2 = [other.a, other.b, other.c, other.d]
        i = next(k for k, t in enumerate(m1) if not t.is_zero())
        if m2[i].is_zero():
            return False
        lam = m2[i] / m1[i]
        return all(lam * s == t for s, t in zip(m1, m2))

    def __repr__(self):
        return f"Mobius(({self.a}) z + ({self.b}))/(({self.c}) z + ({self.d}))"


def _triple_frame(P1, P2, P3, field) -> Mobius:
    """Matrix S with S(0) = P1, S(oo) = P2, S(1) = P3."""
    v1, v2, v3 = (_homog(P, field) for P in (P1, P2, P3))
    # solve lam*v2 + mu*v1 = v3
    det = v2[0] * v1[1] - v1[0] * v2[1]
    if det.is_zero():
        raise DegenerateTriple("points are not pairwise distinct")
    lam = (v3[0] * v1[1] - v1[0] * v3[1]) / det
    mu = (v2[0] * v3[1] - v3[0] * v2[1]) / det
    if lam.is_zero() or mu.is_zero():
        raise DegenerateTriple("points are not pairwise distinct")
    return Mobius(lam * v2[0], mu * v1[0], lam * v2[1], mu * v1[1], field)


def mobius_from_triples(P1, P2, P3, Q1, Q2, Q3, field: FieldConfig | None = None) -> Mobius:
    """The unique eta with eta(P_i) = Q_i."""
    if field is None:
        field = next(t.field for t in (P1, P2, P3, Q1, Q2, Q3) if t is not oo)
    SP = _triple_frame(P1, P2, P3, field)
    SQ = _triple_frame(Q1, Q2, Q3, field)
    return SQ @ SP.inverse()


def _push_affine(scale, shift, nu: TypeII) -> TypeII:
    return TypeII(scale * nu.center + shift, nu.log_radius + scale.valuation())


def _push_inversion(nu: TypeII) -> TypeII:
    va = nu.center.valuation()
    if va >= nu.log_radius:
        return TypeII(nu.field.zero, -nu.log_radius)
    return TypeII(nu.center.inverse(), nu.log_radius - 2 * va)


def mobius_push(eta: Mobius, nu: BerkPoint) -> BerkPoint:
    """eta_*(nu), via translations, scalings and z -> 1/z."""
    if isinstance(nu, TypeI):
        return TypeI(eta(nu.point))
    a, b, c, d = eta.a, eta.b, eta.c, eta.d
    if c.is_zero():
        return _push_affine(a / d, b / d, nu)
    one = eta.field.one
    step = _push_affine(one, d / c, nu)
    step = _push_inversion(step)
    step = _push_affine(-eta.det() / (c * c), eta.field.zero, step)
    return _push_affine(one, a / c, step)


def is_in_pgl2o(eta: Mobius) -> bool:
    """Some scalar multiple has integral entries and unit determinant."""
    entries = [eta.a, eta.b, eta.c, eta.d]
    k = min(t.valuation() for t in entries)
    # scaling by pi^(-kM) makes the entries integral with one unit entry;
    # the determinant then scales by pi^(-2kM)
    return eta.det().valuation() - 2 * k == 0


def mobius_image_disk(eta: Mobius, D: ProjDisk) -> ProjDisk:
    """Image of a disk of P^1 under eta."""
    target = mobius_push(eta, D.boundary_point())
    if D.open:
        return open_component(target, eta(D.marked_point()))
    # closed: complement of the image of the open complementary disk
    comp = D.complement_disk()
    return open_component(target, eta(comp.marked_point())).complement_disk()


# -- separation ---------------------------------------------------------------

OUTSIDE = "outside"
STRADDLES = "straddles"


def direction(nu: TypeII, x: RamifiedScalar) -> int:
    """Residue direction at nu of a point x in the closed disk of nu."""
    k = int(nu.log_radius * nu.field.M)
    return ((x - nu.center) * nu.field.pi_power(-k)).residue()


def component_label(nu: TypeII, item):
    """Component of P^1 minus {nu} containing item: "outside", ("inside", d), or "straddles"."""
    if not isinstance(nu, TypeII):
        raise TypeMismatch("separation needs a type II point")
    q = nu.log_radius
    if not isinstance(item, ProjDisk):
        if item is oo or _val(item - nu.center) < q:
            return OUTSIDE
        return ("inside", direction(nu, item))
    D = item
    closed_nu = ProjDisk(nu.center, q, open=False)
    if not D.complement:
        b = D.center
        if _val(b - nu.center) < q:
            return STRADDLES if nu.center in D else OUTSIDE
        if D.log_radius > q or (D.log_radius == q and D.open):
            return ("inside", direction(nu, b))
        return STRADDLES
    if D.complement_disk().contains_disk(closed_nu):
        return OUTSIDE
    return STRADDLES


def separation_labels(nu: TypeII, items) -> list:
    return [component_label(nu, it) for it in items]


def separates(nu: TypeII, items) -> bool:
    labels = separation_labels(nu, items)
    if STRADDLES in labels:
        return True
    return len(set(labels)) >= 2
