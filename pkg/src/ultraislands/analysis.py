"""Gauss norms, pushforwards, spherical derivatives, L, G, counts and profiles."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .algebra import (
    Poly,
    RatFunc,
    _fp_divmod,
    count_roots,
    fp_gcd,
    newton_polygon,
    reduce_poly,
    taylor_shift,
    wronskian,
)
from .berkovich import TypeI, TypeII, mobius_push, Mobius, spherical_radius_val
from .field import INF, FieldError, Magnitude, RamifiedScalar, oo


class ConstantFunction(FieldError, ValueError):
    pass


class ZeroFunction(FieldError, ValueError):
    pass


class InvalidAlpha(FieldError, ValueError):
    pass


class IterationCapExceeded(FieldError, RuntimeError):
    pass


RAM = "ram"


def _require_type_ii(nu):
    if not isinstance(nu, TypeII):
        raise TypeError("expected a type II point")


def _require_nonconstant(f: RatFunc):
    if f.is_constant():
        raise ConstantFunction("f is constant")


def poly_val_at(P: Poly, center, q) -> Fraction:
    """-log_p of the Gauss norm of P on Dbar(center, p^-q)."""
    if P.is_zero():
        return INF
    S = taylor_shift(P, center)
    q = Fraction(q)
    return min(c.valuation() + i * q for i, c in enumerate(S.coeffs) if not c.is_zero())


def ratfunc_val(f: RatFunc, nu: TypeII):
    return poly_val_at(f.num, nu.center, nu.log_radius) - poly_val_at(f.den, nu.center, nu.log_radius)


def gauss_norm(f, nu: TypeII) -> Magnitude:
    _require_type_ii(nu)
    if isinstance(f, Poly):
        return Magnitude(poly_val_at(f, nu.center, nu.log_radius))
    return Magnitude(ratfunc_val(f, nu))


# -- pushforward -------------------------------------------------------------

@dataclass(frozen=True)
class PushResult:
    image: TypeII
    descent_steps: int


def _gauss_val(f: RatFunc):
    return f.num.content_valuation() - f.den.content_valuation()


def _good_residue(P: Poly):
    """A residue 0..p-1 where the unit-content reduction of P does not vanish."""
    F = P.field
    u = F.uniformizer_for(P.content_valuation()).inverse()
    red = reduce_poly(P.scale(u))
    for w in range(F.p):
        acc = 0
        for c in reversed(red):
            acc = (acc * w + c) % F.p
        if acc:
            return w
    return None


def _push_gauss(F: RatFunc, cap: int):
    """Image (b, v(s)) of the Gauss point under F."""
    w0 = _good_residue(F.den)
    if w0 is not None:
        # |F(w0) - c| <= ||F - c|| for every c, so F(w0) lies in the image disk
        b = F(F.field(w0))
        return b, _gauss_val(F - b), 1
    w0 = _good_residue(F.num)
    if w0 is not None:
        G = F.reciprocal()
        b = G(G.field(w0))
        nu = TypeII(b, _gauss_val(G - b))
        img = mobius_push(Mobius(0, 1, 1, 0, F.field), nu)
        return img.center, img.log_radius, 1
    return _digit_descent(F, cap)


def _digit_descent(F: RatFunc, cap: int):
    K = F.field
    t = _gauss_val(F)
    U = K.uniformizer_for(t)
    G = F / U
    B = K.zero
    for step in range(1, cap + 1):
        g, h = G.num, G.den
        gb = reduce_poly(g.scale(K.uniformizer_for(g.content_valuation()).inverse()))
        hb = reduce_poly(h.scale(K.uniformizer_for(h.content_valuation()).inverse()))
        d = fp_gcd(gb, hb, K.p)
        gq, hq = _fp_divmod(gb, d, K.p)[0], _fp_divmod(hb, d, K.p)[0]
        if len(gq) > 1 or len(hq) > 1:
            return B, U.valuation(), step
        c_bar = gq[0] * pow(hq[0], -1, K.p) % K.p
        c = K.lift(c_bar)
        B = B + U * c
        G = G - c
        u = K.uniformizer_for(_gauss_val(G))
        U = U * u
        G = G / u
    raise IterationCapExceeded(f"pushforward did not settle within {cap} steps")


def pushforward(f: RatFunc, nu: TypeII, cap: int | None = None) -> PushResult:
    _require_type_ii(nu)
    _require_nonconstant(f)
    K = f.field
    cap = 64 * K.M if cap is None else cap
    k = int(nu.log_radius * K.M)
    F = f.substitute_affine(nu.center, K.pi_power(k))
    b, s, steps = _push_gauss(F, cap)
    return PushResult(TypeII(b, s), steps)


# -- spherical derivative, L and G --------------------------------------------

def _homog_pair(f: RatFunc, a):
    """(g, h, W) with f = g/h so that a is finite; a = oo is moved to 0."""
    if a is oo:
        f = f.precompose_mobius(0, 1, 1, 0)
        a = f.field.zero
    return f.num, f.den, wronskian(f), RamifiedScalar.coerce(f.field, a)


def spherical_derivative_point(f: RatFunc, a) -> Magnitude:
    """|W(a)| / max(|g(a)|, |h(a)|)^2, the homogeneous form of f^#(a)."""
    g, h, W, x = _homog_pair(f, a)
    top = W(x).valuation()
    bot = min(g(x).valuation(), h(x).valuation())
    return Magnitude(top - 2 * bot)


def _sph_nu_val(f: RatFunc, nu: TypeII):
    c, q = nu.center, nu.log_radius
    top = poly_val_at(wronskian(f), c, q)
    bot = min(poly_val_at(f.num, c, q), poly_val_at(f.den, c, q))
    return top - 2 * bot


def spherical_derivative_nu(f: RatFunc, nu: TypeII) -> Magnitude:
    _require_type_ii(nu)
    _require_nonconstant(f)
    return Magnitude(_sph_nu_val(f, nu))


def boundary_length_L(f: RatFunc, nu: TypeII) -> Magnitude:
    _require_type_ii(nu)
    _require_nonconstant(f)
    return Magnitude(spherical_radius_val(nu.center, nu.log_radius) + _sph_nu_val(f, nu))


def _check_alpha(f: RatFunc, alpha) -> RamifiedScalar:
    if alpha is oo:
        raise InvalidAlpha("alpha must be finite")
    alpha = RamifiedScalar.coerce(f.field, alpha)
    if alpha.is_zero() or alpha == f.field.one:
        raise InvalidAlpha("alpha must differ from 0 and 1")
    return alpha


def _g_polys(f: RatFunc, alpha):
    g, h = f.num, f.den
    return wronskian(f), [g, g - h.scale(alpha), g - h, h]


def g_value(f: RatFunc, alpha, nu: TypeII) -> Magnitude:
    """(r ||W||)^2 / (||g|| ||g - alpha h|| ||g - h|| ||h||)."""
    _require_type_ii(nu)
    _require_nonconstant(f)
    alpha = _check_alpha(f, alpha)
    W, den = _g_polys(f, alpha)
    c, q = nu.center, nu.log_radius
    val = 2 * spherical_radius_val(c, q) + 2 * poly_val_at(W, c, q)
    val -= sum(poly_val_at(P, c, q) for P in den)
    return Magnitude(val)


def counts(f: RatFunc, b, center, log_radius, closed: bool = True) -> int:
    """N_b on the disk of radius p^-q about center; b may be a scalar, oo or RAM."""
    _require_nonconstant(f)
    if b == RAM:
        P = wronskian(f)
    elif b is oo:
        P = f.den
    else:
        P = f.num - f.den.scale(RamifiedScalar.coerce(f.field, b))
    center = RamifiedScalar.coerce(f.field, center)
    return count_roots(P, center, Fraction(log_radius), closed)


# -- profiles ------------------------------------------------------------------

@dataclass(frozen=True)
class Piece:
    start: Fraction
    end: Fraction | None
    slope: int
    value: Fraction  # at start


@dataclass(frozen=True)
class Profile:
    """q -> -log_p of a norm along the ray nu(center, p^-q), piecewise linear."""

    center: RamifiedScalar
    q_lo: Fraction
    q_hi: Fraction | None
    pieces: tuple = dc_field(default_factory=tuple)

    @property
    def breakpoints(self) -> list[Fraction]:
        return [pc.start for pc in self.pieces[1:]]

    def piece_at(self, q) -> Piece:
        q = Fraction(q)
        for pc in self.pieces:
            if pc.end is None or q <= pc.end:
                return pc
        return self.pieces[-1]

    def value(self, q) -> Fraction:
        pc = self.piece_at(q)
        return pc.value + pc.slope * (Fraction(q) - pc.start)

    def to_dict(self) -> dict:
        from .field import format_scalar
        return {
            "center": format_scalar(self.center),
            "domain": [str(self.q_lo), None if self.q_hi is None else str(self.q_hi)],
            "breakpoints": [str(b) for b in self.breakpoints],
            "pieces": [
                {
                    "q_from": str(pc.start),
                    "q_to": None if pc.end is None else str(pc.end),
                    "slope": pc.slope,
                    "v_at_from": str(pc.value),
                }
                for pc in self.pieces
            ],
        }


def _root_breaks(P: Poly, center) -> list[Fraction]:
    if P.is_zero() or P.degree <= 0:
        return []
    S = taylor_shift(P, center)
    return [-seg.slope for seg in newton_polygon(S)]


def _build_profile(center, q_lo, q_hi, fn, breaks) -> Profile:
    q_lo = Fraction(q_lo)
    q_hi = None if q_hi is None else Fraction(q_hi)
    if q_hi is not None and q_hi <= q_lo:
        raise ValueError("need q_lo < q_hi")
    inner = sorted({b for b in breaks if b > q_lo and (q_hi is None or b < q_hi)})
    nodes = [q_lo] + inner
    ends = inner + [q_hi]
    raw = []
    for a, b in zip(nodes, ends):
        b_eval = a + 1 if b is None else b
        slope = (fn(b_eval) - fn(a)) / (b_eval - a)
        if slope.denominator != 1:
            raise ArithmeticError(f"non-integral slope {slope}")
        raw.append([a, b, int(slope), fn(a)])
    merged = [raw[0]]
    for pc in raw[1:]:
        if pc[2] == merged[-1][2]:
            merged[-1][1] = pc[1]
        else:
            merged.append(pc)
    return Profile(center, q_lo, q_hi, tuple(Piece(*pc) for pc in merged))


def norm_profile(f: RatFunc, center, q_lo, q_hi) -> Profile:
    if f.is_zero():
        raise ZeroFunction("profile of the zero function")
    center = RamifiedScalar.coerce(f.field, center)
    fn = lambda q: poly_val_at(f.num, center, q) - poly_val_at(f.den, center, q)
    breaks = _root_breaks(f.num, center) + _root_breaks(f.den, center)
    return _build_profile(center, q_lo, q_hi, fn, breaks)


def _radius_breaks(center: RamifiedScalar) -> list[Fraction]:
    va = center.valuation()
    return [Fraction(0)] + ([va] if va != INF else [])


def g_profile(f: RatFunc, alpha, center, q_lo, q_hi) -> Profile:
    _require_nonconstant(f)
    alpha = _check_alpha(f, alpha)
    center = RamifiedScalar.coerce(f.field, center)
    W, den = _g_polys(f, alpha)

    def fn(q):
        v = 2 * spherical_radius_val(center, q) + 2 * poly_val_at(W, center, q)
        return v - sum(poly_val_at(P, center, q) for P in den)

    breaks = _radius_breaks(center) + _root_breaks(W, center)
    for P in den:
        breaks += _root_breaks(P, center)
    return _build_profile(center, q_lo, q_hi, fn, breaks)


def preimages_on_ray(f: RatFunc, nu1: TypeII, seed, q_lo=None, q_hi=None) -> list[TypeII]:
    """All nu(seed, p^-q), q_lo <= q <= q_hi, with f_*(nu) = nu1 (None: unbounded)."""
    _require_type_ii(nu1)
    _require_nonconstant(f)
    K = f.field
    seed = RamifiedScalar.coerce(K, seed)
    P = f.num - f.den.scale(nu1.center)
    split = _root_breaks(P, seed) + _root_breaks(f.den, seed)
    lo_open = q_lo is None
    q_lo = min(split + [Fraction(0)]) - 1 if lo_open else Fraction(q_lo)
    q_hi = None if q_hi is None else Fraction(q_hi)
    cands = set(split)
    cands.add(q_lo)
    if q_hi is not None:
        cands.add(q_hi)
    # away from the split radii the reduction at nu(seed, q) is a monomial,
    # so a preimage there needs a sloped piece of ||f - a1||
    prof = norm_profile(f - nu1.center, seed, q_lo, q_hi)
    for i, pc in enumerate(prof.pieces):
        if pc.slope == 0:
            continue
        q = pc.start + (nu1.log_radius - pc.value) / pc.slope
        if (q >= pc.start or (lo_open and i == 0)) and (pc.end is None or q <= pc.end):
            cands.add(q)
    out = []
    for q in sorted(cands):
        if (not lo_open and q < q_lo) or (q_hi is not None and q > q_hi):
            continue
        if not K.in_value_group(q):
            continue
        nu = TypeII(seed, q)
        if pushforward(f, nu).image == nu1:
            out.append(nu)
    return out
