"""Independent cross-checks: direct evaluation at sample points and counting supplied roots."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import Poly, RatFunc
from .analysis import gauss_norm
from .berkovich import ProjDisk, TypeII
from .field import FieldError, Magnitude, RamifiedScalar, oo


class FactorizationMismatch(FieldError, ValueError):
    pass


@dataclass(frozen=True)
class SampleReport:
    samples: int
    directions_requested: int
    max_magnitude: Magnitude
    agreement: Fraction
    claimed: Magnitude


def direction_samples(nu: TypeII, n: int) -> list[RamifiedScalar]:
    """One point in each of up to n residue directions of nu: 1, ..., p-1, then 0."""
    K = nu.field
    k = int(nu.log_radius * K.M)
    u = K.pi_power(k)
    reps = [u * K.lift(d) for d in range(1, K.p)] + [K.pi_power(k + 1)]
    return [nu.center + t for t in reps[:n]]


def sample_norm_estimate(f: RatFunc, nu: TypeII, directions: int) -> SampleReport:
    if directions < 1:
        raise ValueError("need at least one direction")
    claimed = gauss_norm(f, nu)
    pts = direction_samples(nu, directions)
    mags = []
    for x in pts:
        y = f(x)
        mags.append(Magnitude.infinite() if y is oo else Magnitude.of(y))
    hits = sum(1 for m in mags if m == claimed)
    return SampleReport(len(pts), directions, max(mags), Fraction(hits, len(pts)), claimed)


def brute_force_roots(f: Poly, roots, disk: ProjDisk, lead=None) -> int:
    """Count the supplied roots (with repetition) lying in disk, after checking the factorization."""
    K = f.field
    roots = [RamifiedScalar.coerce(K, r) for r in roots]
    lead = K.one if lead is None else RamifiedScalar.coerce(K, lead)
    if Poly.from_roots(K, roots).scale(lead) != f:
        raise FactorizationMismatch("supplied factors do not multiply back to f")
    return sum(1 for r in roots if r in disk)
