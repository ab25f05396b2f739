from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ultraislands.algebra import Poly, RatFunc
from ultraislands.analysis import (
    RAM,
    ConstantFunction,
    InvalidAlpha,
    IterationCapExceeded,
    ZeroFunction,
    boundary_length_L,
    counts,
    g_profile,
    g_value,
    gauss_norm,
    norm_profile,
    preimages_on_ray,
    pushforward,
    spherical_derivative_nu,
    spherical_derivative_point,
)
from ultraislands.berkovich import TypeII, mobius_push, spherical_radius
from ultraislands.field import Magnitude, RamifiedScalar, oo
from ultraislands.parsing import parse_ratfunc

from conftest import K3, K33, fields, lattice_q, polys, ratfuncs, scalars
from test_berkovich import integral, pgl2k, pgl2o, type2


def R(text, K=K3):
    return parse_ratfunc(text, K)


def nu(c, q, K=K3):
    return TypeII(RamifiedScalar.coerce(K, c), Fraction(q))


WARP = "((z^4 - 81)/z^3) * (((z-1)^3 - 81)/(z-1)^3) * (((z-2)^3 - 81)/(z-2)^3)"


def direct_poly_norm(P: Poly, c, q) -> Magnitude:
    """max |d_i| r^i from an independent binomial expansion about c."""
    from math import comb
    K = P.field
    n = len(P.coeffs)
    d = [K.zero] * n
    for i, a in enumerate(P.coeffs):
        for j in range(i + 1):
            d[j] = d[j] + a * comb(i, j) * c ** (i - j)
    vals = [x.valuation() + j * q for j, x in enumerate(d) if not x.is_zero()]
    return Magnitude(min(vals))


class TestGaussNorm:
    def test_examples(self):
        assert gauss_norm(R("z"), nu(0, 1)) == Magnitude(1)
        assert gauss_norm(R("z^2 + 3*z + 27"), nu(0, 1)) == Magnitude(2)
        assert gauss_norm(R("(z^4 - 81)/z^3"), nu(0, 0)) == Magnitude(0)

    @given(fields.flatmap(lambda F: st.tuples(polys(F), type2(F))))
    def test_matches_expansion(self, data):
        P, v = data
        assert gauss_norm(P, v) == direct_poly_norm(P, v.center, v.log_radius)

    @given(fields.flatmap(lambda F: st.tuples(ratfuncs(F, nonconstant=False), ratfuncs(F, nonconstant=False), type2(F))))
    def test_multiplicative_ultrametric(self, data):
        f, g, v = data
        assert gauss_norm(f * g, v) == gauss_norm(f, v) * gauss_norm(g, v)
        assert gauss_norm(f + g, v) <= max(gauss_norm(f, v), gauss_norm(g, v))


class TestPushforward:
    def test_square(self):
        assert pushforward(R("z^2"), nu(0, 1)).image == nu(0, 2)

    def test_shifted_square(self):
        # ||f - 3|| = ||z^2|| = 3^-2 on nu(0, 3^-1)
        assert pushforward(R("z^2 + 3"), nu(0, 1)).image == nu(3, 2)
        assert pushforward(R("z^2 + 3"), nu(0, 0)).image == nu(0, 0)

    def test_warp_fixes_gauss_point(self):
        f = R(WARP, K33)
        assert pushforward(f, nu(0, 0, K33)).image == nu(0, 0, K33)

    def test_constant(self):
        with pytest.raises(ConstantFunction):
            pushforward(R("5"), nu(0, 0))

    def test_digit_descent(self):
        # num and den both reduce to z^3 - z, which vanishes at every residue
        f = R("(z^3 - z + 3)/(z^3 - z + 9)")
        res = pushforward(f, nu(0, 0))
        assert res.descent_steps >= 1
        for c in (0, 1, 2, res.image.center):
            assert gauss_norm(f - c, nu(0, 0)) == max(res.image.radius, Magnitude.of(res.image.center - c))

    def test_iteration_cap(self):
        with pytest.raises(IterationCapExceeded):
            pushforward(R("(z^3 - z + 3)/(z^3 - z + 9)"), nu(0, 0), cap=0)

    @settings(max_examples=60)
    @given(
        fields.flatmap(
            lambda F: st.tuples(ratfuncs(F), type2(F), st.lists(scalars(F), min_size=10, max_size=10),
                                st.lists(st.tuples(st.integers(-6, 12), st.integers(1, 6)), min_size=10, max_size=10))
        )
    )
    def test_probe_identity(self, data):
        f, v, probes, offsets = data
        res = pushforward(f, v)
        b, s = res.image.center, res.image.radius
        F = f.field
        near = [b + F.pi_power(k) * u for k, u in offsets]
        for c in probes + near:
            assert gauss_norm(f - c, v) == max(s, Magnitude.of(b - c))


class TestSphericalDerivative:
    def test_point_examples(self):
        assert spherical_derivative_point(R("z/27"), K3(0)) == Magnitude(-3)
        assert spherical_derivative_point(R("1/z"), K3(Fraction(1, 3))) == Magnitude(2)
        # cross-check: 1/z is in PGL(2,O), so it matches the identity map
        assert spherical_derivative_point(R("z"), K3(Fraction(1, 3))) == Magnitude(2)
        assert spherical_derivative_point(R("z"), K3(0)) == Magnitude(0)

    def test_at_infinity(self):
        assert spherical_derivative_point(R("z"), oo) == Magnitude(0)
        assert spherical_derivative_point(R("z^2"), oo) == Magnitude.zero()

    def test_nu_examples(self):
        assert spherical_derivative_nu(R("z"), nu(0, 0)) == Magnitude(0)
        assert spherical_derivative_nu(R("z/27"), nu(0, 1)) == Magnitude(1)
        assert spherical_derivative_nu(R("z^2"), nu(0, 0)) == Magnitude(0)

    def test_constant(self):
        with pytest.raises(ConstantFunction):
            spherical_derivative_nu(R("5"), nu(0, 0))

    @given(fields.flatmap(lambda F: st.tuples(pgl2o(F), ratfuncs(F), scalars(F), type2(F))))
    def test_pgl2o_invariance(self, data):
        eta, f, a, v = data
        g = f.post_mobius(eta.a, eta.b, eta.c, eta.d)
        assert spherical_derivative_point(g, a) == spherical_derivative_point(f, a)
        assert spherical_derivative_nu(g, v) == spherical_derivative_nu(f, v)


class TestL:
    def test_examples(self):
        assert boundary_length_L(R("z"), nu(0, 0)) == Magnitude(0)
        assert boundary_length_L(R(WARP, K33), nu(0, 0, K33)) == Magnitude(0)
        assert boundary_length_L(R("z/27"), nu(0, 1)) == Magnitude(2)

    @settings(max_examples=100)
    @given(fields.flatmap(lambda F: st.tuples(pgl2k(F), ratfuncs(F), type2(F))))
    def test_distortion_invariance(self, data):
        eta, f, v = data
        g = f.post_mobius(eta.a, eta.b, eta.c, eta.d)
        img = pushforward(f, v).image
        lhs = boundary_length_L(f, v) / spherical_radius(img)
        rhs = boundary_length_L(g, v) / spherical_radius(mobius_push(eta, img))
        assert lhs == rhs


@st.composite
def admissible_alpha(draw, F):
    a = draw(integral(F))
    assume(not a.is_zero() and (a - 1).valuation() == 0)
    return a


class TestG:
    def test_examples(self):
        assert g_value(R("z"), 2, nu(0, 0)) == Magnitude(0)
        for q in (1, 2, 5):
            assert g_value(R("z"), 2, nu(0, q)) == Magnitude(q)

    def test_invalid_alpha(self):
        with pytest.raises(InvalidAlpha):
            g_value(R("z"), 1, nu(0, 0))
        with pytest.raises(InvalidAlpha):
            g_value(R("z"), 0, nu(0, 0))

    @settings(max_examples=200)
    @given(fields.flatmap(lambda F: st.tuples(ratfuncs(F), admissible_alpha(F), type2(F))))
    def test_bounds(self, data):
        f, alpha, v = data
        L = boundary_length_L(f, v)
        G = g_value(f, alpha, v)
        assert L ** 2 <= G <= Magnitude(0)


class TestCounts:
    def test_examples(self):
        assert counts(R("1/z^3"), oo, 0, 0) == 3
        assert counts(R("z^2"), RAM, 0, 0) == 1
        assert counts(R(WARP, K33), 0, 0, 1) == 4

    def test_constant(self):
        with pytest.raises(ConstantFunction):
            counts(R("5"), 0, 0, 0)


class TestProfiles:
    def test_two_roots(self):
        prof = norm_profile(R("z*(z - 3)"), 0, 0, None)
        assert prof.breakpoints == [1]
        assert [pc.slope for pc in prof.pieces] == [2, 1]

    def test_constant(self):
        prof = norm_profile(R("5"), 0, -3, 3)
        assert len(prof.pieces) == 1 and prof.pieces[0].slope == 0

    def test_reciprocal(self):
        prof = norm_profile(R("1/z"), 0, -3, 3)
        assert len(prof.pieces) == 1 and prof.pieces[0].slope == -1

    def test_zero(self):
        with pytest.raises(ZeroFunction):
            norm_profile(RatFunc(Poly(K3)), 0, 0, 1)

    def test_to_dict(self):
        d = norm_profile(R("z*(z - 3)"), 0, 0, None).to_dict()
        assert d["pieces"][0] == {"q_from": "0", "q_to": "1", "slope": 2, "v_at_from": "0"}
        assert d["pieces"][1]["q_to"] is None

    def test_g_slope_identity(self):
        prof = g_profile(R("z"), 2, 0, 0, None)
        assert [pc.slope for pc in prof.pieces] == [1]

    def test_g_slope_shifted_center(self):
        prof = g_profile(R("z"), 2, 1, 0, None)
        assert prof.piece_at(10).slope == 1

    @given(fields.flatmap(lambda F: st.tuples(ratfuncs(F), scalars(F), lattice_q(F, -3, 0))))
    def test_slope_is_zeros_minus_poles(self, data):
        f, c, lo = data
        prof = norm_profile(f, c, lo, None)
        for pc in prof.pieces:
            q = pc.start + 1 if pc.end is None else (pc.start + pc.end) / 2
            assert pc.slope == counts(f, 0, c, q) - counts(f, oo, c, q)
        # continuity
        for a, b in zip(prof.pieces, prof.pieces[1:]):
            assert a.value + a.slope * (b.start - a.start) == b.value

    @given(fields.flatmap(lambda F: st.tuples(ratfuncs(F), admissible_alpha(F), scalars(F), lattice_q(F, -3, 0))))
    def test_g_slope_formula(self, data):
        f, alpha, c, lo = data
        prof = g_profile(f, alpha, c, lo, None)
        for pc in prof.pieces:
            q = pc.start + 1 if pc.end is None else (pc.start + pc.end) / 2
            N = sum(counts(f, b, c, q) for b in (0, alpha, 1, oo))
            # the spherical radius term has slope 1 on small disks and -1 on large ones
            rs = 1 if q > min(0, c.valuation()) else -1
            assert pc.slope == 2 * rs + 2 * counts(f, RAM, c, q) - N

    @given(fields.flatmap(lambda F: st.tuples(polys(F, 1, 4), scalars(F))))
    def test_monotone_through_zero(self, data):
        P, c = data
        P = P - P(c)
        assume(not P.is_constant())
        prof = norm_profile(RatFunc(P), c, -3, None)
        assert all(pc.slope >= 1 for pc in prof.pieces)


class TestPreimagesOnRay:
    def test_linear(self):
        assert preimages_on_ray(R("z/27"), nu(0, -2), 0) == [nu(0, 1)]

    def test_square(self):
        assert preimages_on_ray(R("z^2"), nu(0, 2), 0) == [nu(0, 1)]

    def test_shifted_square(self):
        assert preimages_on_ray(R("z^2 + 3"), nu(3, 2), 0) == [nu(0, 1)]

    def test_bounded_range_excludes(self):
        assert preimages_on_ray(R("z/27"), nu(0, -2), 0, 2, 5) == []

    @settings(max_examples=40)
    @given(fields.flatmap(lambda F: st.tuples(ratfuncs(F, max_deg=2), scalars(F), lattice_q(F, -2, 2))))
    def test_finds_known_point(self, data):
        f, c, q = data
        target = pushforward(f, nu(c, q, f.field)).image
        found = preimages_on_ray(f, target, c, None, None)
        assert nu(c, q, f.field) in found
        for v in found:
            assert pushforward(f, v).image == target
