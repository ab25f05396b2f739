from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ultraislands.algebra import Poly, RatFunc, count_roots
from ultraislands.analysis import gauss_norm
from ultraislands.berkovich import ProjDisk, TypeII
from ultraislands.field import FieldConfig, Magnitude
from ultraislands.oracle import FactorizationMismatch, brute_force_roots, direction_samples, sample_norm_estimate
from ultraislands.parsing import parse_disk, parse_ratfunc

from conftest import K3, lattice_q, polys, scalars
from test_berkovich import type2

BIG = [FieldConfig(p, 1) for p in (5, 7, 11, 13)] + [FieldConfig(5, 2)]


def nu(c, q, K=K3):
    return TypeII(K(c), Fraction(q))


class TestSamples:
    def test_distinct_directions(self):
        v = nu(2, 1)
        pts = direction_samples(v, 10)
        assert len(pts) == 3
        dirs = {((x - v.center) / 3).residue() for x in pts}
        assert dirs == {0, 1, 2}

    def test_linear_factor(self):
        rep = sample_norm_estimate(parse_ratfunc("z - 1", K3), nu(0, 0), 3)
        # direction 1 holds the root; the other two give magnitude 1
        assert rep.samples == 3 and rep.agreement == Fraction(2, 3)
        assert rep.max_magnitude == Magnitude(0)

    def test_identity(self):
        # the first p - 1 samples lie on the sphere |x - a| = rho, where |x| is constant
        for c in (0, 5, Fraction(1, 9)):
            for q in (-2, 0, 3):
                assert sample_norm_estimate(parse_ratfunc("z", K3), nu(c, q), 2).agreement == 1

    def test_warp_factor(self):
        rep = sample_norm_estimate(parse_ratfunc("(z^4 - 81)/z^3", K3), nu(0, 0), 8)
        assert rep.max_magnitude == Magnitude(0) == rep.claimed

    def test_pole_direction_can_exceed(self):
        # the canonical center is 0, so the direction-1 sample is the pole itself
        rep = sample_norm_estimate(parse_ratfunc("1/(z - 1)", K3), nu(1, 0), 3)
        assert rep.max_magnitude.is_infinite
        assert rep.agreement == Fraction(2, 3)

    def test_needs_direction(self):
        with pytest.raises(ValueError):
            sample_norm_estimate(parse_ratfunc("z", K3), nu(0, 0), 0)

    @settings(max_examples=100)
    @given(st.sampled_from(BIG).flatmap(lambda F: st.tuples(polys(F, 1, 3), polys(F, 0, 2), type2(F))))
    def test_agreement_bound(self, data):
        g, h, v = data
        f = RatFunc(g, h)
        n = f.field.p
        rep = sample_norm_estimate(f, v, n)
        bad = f.num.degree + f.den.degree
        assert rep.agreement * n >= n - bad
        if f.den.degree == 0:
            assert rep.max_magnitude <= rep.claimed
            if n > bad:
                assert rep.max_magnitude == rep.claimed == gauss_norm(f, v)


@st.composite
def split_instances(draw, F):
    roots = draw(st.lists(scalars(F), min_size=1, max_size=5))
    lead = draw(scalars(F, nonzero=True))
    disk = ProjDisk(draw(scalars(F)), draw(lattice_q(F)), open=draw(st.booleans()))
    return roots, lead, disk


class TestBruteForce:
    def test_both_small_roots(self):
        f = Poly.from_roots(K3, [3, 9])
        assert brute_force_roots(f, [3, 9], parse_disk("Dbar(0, p^-1)", K3)) == 2

    def test_deeper_disk(self):
        f = Poly.from_roots(K3, [3, 9])
        assert brute_force_roots(f, [3, 9], parse_disk("Dbar(0, p^-2)", K3)) == 1

    def test_units_excluded(self):
        f = Poly.from_roots(K3, [1, 2])
        assert brute_force_roots(f, [1, 2], parse_disk("D(0, p^0)", K3)) == 0

    def test_mismatch(self):
        with pytest.raises(FactorizationMismatch):
            brute_force_roots(Poly.from_roots(K3, [1, 2]), [1, 3], parse_disk("D(0, p^0)", K3))

    @settings(max_examples=150)
    @given(st.sampled_from([K3, FieldConfig(3, 3), FieldConfig(5, 1), FieldConfig(2, 2)]).flatmap(split_instances))
    def test_matches_newton_polygon(self, data):
        roots, lead, D = data
        F = lead.field
        f = Poly.from_roots(F, roots).scale(lead)
        assert brute_force_roots(f, roots, D, lead) == count_roots(f, D.center, D.log_radius, closed=not D.open)
