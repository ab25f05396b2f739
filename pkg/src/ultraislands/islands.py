"""Four-islands machinery: Ahlfors radius, constants, hypotheses, search, certificates."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .algebra import RatFunc, count_roots, root_distances
from .analysis import (
    ConstantFunction,
    boundary_length_L,
    poly_val_at,
    preimages_on_ray,
    spherical_derivative_point,
)
from .berkovich import (
    OUTSIDE,
    STRADDLES,
    Mobius,
    ProjDisk,
    TypeII,
    component_label,
    mobius_from_triples,
    mobius_image_disk,
    mobius_push,
    spherical_radius,
)
from .field import (
    INF,
    FieldConfig,
    FieldError,
    LogThreshold,
    Magnitude,
    RamifiedScalar,
    Verdict,
    oo,
    threshold_compare,
    threshold_max,
    threshold_min,
)


class OverlappingIslands(FieldError, ValueError):
    pass


class InvalidConfig(FieldError, ValueError):
    pass


class ThresholdUndecided(FieldError, ArithmeticError):
    pass


@dataclass(frozen=True)
class IslandConfig:
    islands: tuple
    nu1: TypeII
    field: FieldConfig

    def __post_init__(self):
        object.__setattr__(self, "islands", tuple(self.islands))
        if len(self.islands) != 4:
            raise InvalidConfig("exactly four islands are required")
        if not all(U.open for U in self.islands):
            raise InvalidConfig("islands must be open disks")
        for U, V in combinations(self.islands, 2):
            if U.intersects(V):
                raise OverlappingIslands(f"islands {U} and {V} intersect")

    @property
    def marked_points(self) -> list:
        return [U.marked_point() for U in self.islands]


# -- Ahlfors radius and constants ---------------------------------------------

def _check_disjoint(islands):
    for U, V in combinations(islands, 2):
        if U.intersects(V):
            raise OverlappingIslands(f"islands {U} and {V} intersect")


def ahlfors_radius(islands, points=None) -> Magnitude:
    """max_i r_i / min(1, |eta_i(a_l)|) with eta_i sending a_i, a_j, a_k to 0, oo, 1."""
    islands = list(islands)
    if len(islands) != 4:
        raise InvalidConfig("exactly four islands are required")
    _check_disjoint(islands)
    pts = list(points) if points is not None else [U.marked_point() for U in islands]
    for a, U in zip(pts, islands):
        if a not in U:
            raise InvalidConfig(f"chosen point {a} is not in {U}")
    field = islands[0].field
    best = None
    for i in range(4):
        j, k, l = [t for t in range(4) if t != i]
        eta = mobius_from_triples(pts[i], pts[j], pts[k], field.zero, oo, field.one, field)
        img = mobius_image_disk(eta, islands[i])
        if img.complement:
            raise InvalidConfig("normalized island contains infinity")
        r = Magnitude(img.log_radius)
        vl = eta(pts[l]).valuation()
        # min(1, |x|) has valuation max(0, v(x))
        s_i = r / Magnitude(max(Fraction(0), vl))
        if best is None or s_i > best:
            best = s_i
    return best


@dataclass(frozen=True)
class TheoremConstants:
    s: Magnitude
    mu: LogThreshold
    C1: Magnitude
    C2: LogThreshold
    mudisk_s: LogThreshold
    residue_char: int

    def to_dict(self) -> dict:
        return {
            "s": _mag_json(self.s),
            "mu": _thr_json(self.mu),
            "C1": _mag_json(self.C1),
            "C2": _thr_json(self.C2),
            "mudisk_s": _thr_json(self.mudisk_s),
            "residue_char": self.residue_char,
        }


def _mag_json(m: Magnitude) -> dict:
    if m.is_zero:
        return {"zero": True}
    return {"valuation": str(m.val)}


def _thr_json(t: LogThreshold) -> dict:
    """p^-(a + b E_p)."""
    if t.zero:
        return {"zero": True}
    return {"a": str(t.a), "b": str(t.b)}


def _decide(choice, what):
    if choice is None:
        raise ThresholdUndecided(f"could not certify {what} at the precision cap")
    return choice


def constants_for(s: Magnitude, r1: Magnitude, p: int, residue_char: int, precision: int = 64) -> TheoremConstants:
    """Constants from the Ahlfors radius s and the spherical radius r1 of nu1."""
    sigma = s.val
    rc = residue_char
    C1 = Magnitude(0) / r1
    if rc == 0:
        mu = LogThreshold(zero=True)
        mudisk = LogThreshold(0, 0)
    elif rc == 2:
        mu = LogThreshold(sigma / 2, 0)
        mudisk = mu ** 2
    else:
        t1 = LogThreshold(sigma * (p - 1) / (2 * p), 0)
        t2 = LogThreshold(sigma / 2, -1)
        mu = _decide(threshold_min(t1, t2, p, precision), "mu")
        m1 = LogThreshold(2 * mu.a, 2 * mu.b + 2)
        m2 = mu ** Fraction(2 * p, p - 1)
        mudisk = _decide(threshold_max(m1, m2, p, precision), "mudisk_s")
    C2 = mu * r1
    return TheoremConstants(s, mu, C1, C2, mudisk, rc)


def theorem_constants(cfg: IslandConfig, residue_char: int | None = None, precision: int = 64) -> TheoremConstants:
    p = cfg.field.p
    rc = p if residue_char is None else residue_char
    if rc not in (0, p):
        raise InvalidConfig(f"residue characteristic must be 0 or {p}")
    s = ahlfors_radius(cfg.islands)
    return constants_for(s, spherical_radius(cfg.nu1), p, rc, precision)


# -- hypotheses ---------------------------------------------------------------

_COMPONENTS_OUT = "outside"


def island_labels(cfg: IslandConfig) -> list:
    return [component_label(cfg.nu1, U) for U in cfg.islands]


def separation_ok(cfg: IslandConfig) -> bool:
    """No component of P^1 minus nu1 meets more than two islands."""
    labels = island_labels(cfg)
    comps = [OUTSIDE] + [("inside", d) for d in range(cfg.field.p)]
    for comp in comps:
        hits = sum(1 for lab in labels if lab == STRADDLES or lab == comp)
        if hits > 2:
            return False
    return True


@dataclass
class HypothesisReport:
    status: str
    separation: bool
    f_sharp: Magnitude | None = None
    C1: Magnitude | None = None
    hyp_a: bool | None = None
    hyp_b: bool | None = None
    witness: TypeII | None = None
    L: Magnitude | None = None
    C2: LogThreshold | None = None
    preimages: list = dc_field(default_factory=list)
    constants: TheoremConstants | None = None
    diagnostic: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "Passed"

    def to_dict(self) -> dict:
        from .parsing import format_berkpoint
        out = {
            "status": self.status,
            "separation": self.separation,
            "hypothesis_a": self.hyp_a,
            "hypothesis_b": self.hyp_b,
            "preimages": [format_berkpoint(nu) for nu in self.preimages],
        }
        if self.f_sharp is not None:
            out["f_sharp"] = _mag_json(self.f_sharp)
        if self.C1 is not None:
            out["C1"] = _mag_json(self.C1)
        if self.C2 is not None:
            out["C2"] = _thr_json(self.C2)
        if self.witness is not None:
            out["witness"] = format_berkpoint(self.witness)
            out["L"] = _mag_json(self.L)
        if self.constants is not None:
            out["constants"] = self.constants.to_dict()
        if self.diagnostic:
            out["diagnostic"] = self.diagnostic
        return out


def enumerate_preimages(f: RatFunc, nu1: TypeII, seeds) -> list[TypeII]:
    """f_*-preimages of nu1 on the full rays from each seed and from 0."""
    K = f.field
    found: list[TypeII] = []
    starts = [RamifiedScalar.coerce(K, s) for s in seeds] + [K.zero]
    for a in starts:
        for nu in preimages_on_ray(f, nu1, a, None, None):
            if nu not in found:
                found.append(nu)
    return found


def check_hypotheses(
    f: RatFunc,
    cfg: IslandConfig,
    seeds=(),
    residue_char: int | None = None,
    precision: int = 64,
) -> HypothesisReport:
    """Separation first, then (b), then (a); every field is filled when computable."""
    if f.is_constant():
        raise ConstantFunction("f is constant")
    p = cfg.field.p
    sep = separation_ok(cfg)
    rep = HypothesisReport(status="Passed", separation=sep)
    try:
        consts = theorem_constants(cfg, residue_char, precision)
    except ThresholdUndecided as exc:
        rep.status, rep.diagnostic = "Undecided", str(exc)
        return rep
    rep.constants, rep.C1, rep.C2 = consts, consts.C1, consts.C2
    rep.f_sharp = spherical_derivative_point(f, cfg.field.zero)
    rep.hyp_a = rep.f_sharp > consts.C1

    rep.preimages = enumerate_preimages(f, cfg.nu1, seeds)
    rep.hyp_b = True
    undecided = False
    for nu in rep.preimages:
        L = boundary_length_L(f, nu)
        verdict = threshold_compare(L, consts.C2, p, precision)
        if verdict is Verdict.UNDECIDED:
            undecided = True
            continue
        if verdict is Verdict.LESS:
            rep.hyp_b, rep.witness, rep.L = False, nu, L
            break
    if not sep:
        rep.status = "SeparationHypothesisFailed"
    elif rep.hyp_b is False:
        rep.status = "HypothesisBFailed"
    elif undecided:
        rep.status = "Undecided"
        rep.diagnostic = "an L >= C2 comparison could not be certified"
    elif not rep.hyp_a:
        rep.status = "HypothesisAFailed"
    return rep


# -- certificate verification ---------------------------------------------------

def _to_unit_disk(V: ProjDisk) -> Mobius:
    """A Mobius map sending the open disk V onto D(0,1)."""
    K = V.field
    k = V.log_radius * K.M
    if k.denominator != 1:
        raise InvalidConfig(f"disk radius p^-({V.log_radius}) is outside the value group")
    u = K.pi_power(int(k))
    if not V.complement:
        return Mobius(K.one, -V.center, K.zero, u, K)
    return Mobius(K.zero, u, K.one, -V.center, K)


def _compose(sigma: Mobius, f: RatFunc) -> RatFunc:
    return f.post_mobius(sigma.a, sigma.b, sigma.c, sigma.d)


def verify_one_to_one_onto(f: RatFunc, U: ProjDisk, V: ProjDisk) -> bool:
    """f maps the open disk U one-to-one onto the open disk V."""
    if not (U.open and V.open) or f.is_constant():
        return False
    K = f.field
    try:
        H = _compose(_to_unit_disk(V), f)
    except InvalidConfig:
        return False
    if U.complement:
        k = U.log_radius * K.M
        if k.denominator != 1:
            return False
        # w -> c + pi^k / w sends D(0,1) onto U
        H = H.precompose_mobius(U.center, K.pi_power(int(k)), K.one, K.zero)
        a, q = K.zero, Fraction(0)
    else:
        a, q = U.center, U.log_radius
    Ha = H(a)
    if Ha is oo or Ha.valuation() <= 0:
        return False
    if count_roots(H.den, a, q, closed=False) != 0:
        return False
    D = H.num - H.den.scale(Ha)
    if count_roots(D, a, q, closed=False) != 1:
        return False
    return poly_val_at(D, a, q) - poly_val_at(H.den, a, q) == 0


# -- search reports -------------------------------------------------------------

@dataclass
class IslandReport:
    status: str
    U: ProjDisk | None = None
    island_index: int | None = None
    hypotheses: HypothesisReport | None = None
    diagnostic: str = ""
    trace: list = dc_field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.status == "Found"

    def to_dict(self) -> dict:
        from .parsing import format_disk
        out: dict = {"status": self.status}
        if self.U is not None:
            out["U"] = format_disk(self.U)
            out["island_index"] = self.island_index
        if self.hypotheses is not None:
            out["hypotheses"] = self.hypotheses.to_dict()
        if self.diagnostic:
            out["diagnostic"] = self.diagnostic
        if self.trace:
            out["trace"] = self.trace
        return out


class _SearchStop(Exception):
    def __init__(self, status: str, diagnostic: str):
        super().__init__(diagnostic)
        self.status = status
        self.diagnostic = diagnostic


# -- the constructive search ------------------------------------------------------

_VALUES = ("0", "alpha", "1", "inf")


def _lattice_ceil(q: Fraction, M: int) -> Fraction:
    return Fraction(-((-q.numerator * M) // q.denominator), M)


class _Counts:
    """Root data of F, F - alpha, F - 1, 1/F and the Wronskian of F = g/h."""

    def __init__(self, F: RatFunc, alpha: RamifiedScalar):
        g, h = F.num, F.den
        self.F = F
        self.alpha = alpha
        self.polys = {"0": g, "alpha": g - h.scale(alpha), "1": g - h, "inf": h}
        from .algebra import wronskian
        self.W = wronskian(F)
        self._cache: dict = {}

    def dists(self, c):
        got = self._cache.get(c)
        if got is None:
            got = {name: (root_distances(P, c) if P.degree > 0 else []) for name, P in self.polys.items()}
            got["ram"] = root_distances(self.W, c) if self.W.degree > 0 else []
            self._cache[c] = got
        return got

    def count(self, c, q, name):
        return sum(m for v, m in self.dists(c)[name] if v >= q)

    def tot_ram(self, c, q):
        return sum(self.count(c, q, b) for b in _VALUES), self.count(c, q, "ram")

    def breaks(self, c):
        return sorted({v for lst in self.dists(c).values() for v, _ in lst if v != INF})

    def good(self, c, q) -> bool:
        tot, ram = self.tot_ram(c, q)
        return tot > 2 * ram

    def good_on(self, c, q_from, q_to) -> bool:
        """N_tot > 2 N_ram on closed disks about c for every radius in [q_from, q_to]."""
        pts = [q_from] + [b for b in self.breaks(c) if q_from < b and (q_to == INF or b < q_to)]
        if q_to != INF:
            pts.append(q_to)
        if not all(self.good(c, q) for q in pts):
            return False
        return q_to != INF or self.good(c, INF)

    def g_val(self, c, q) -> Fraction:
        from .berkovich import spherical_radius_val
        v = 2 * spherical_radius_val(c, q) + 2 * poly_val_at(self.W, c, q)
        return v - sum(poly_val_at(P, c, q) for P in self.polys.values())


@dataclass
class _Center:
    """A root y of F = value, known to lie in Dbar(c, level); level INF means y = c."""

    c: RamifiedScalar
    level: Fraction
    value: str


def _children(K, c, q):
    if not K.in_value_group(q):
        return [(c, _lattice_ceil(q, K.M))]
    u = K.pi_power(int(q * K.M))
    nq = q + Fraction(1, K.M)
    return [(c + u * K.lift(d), nq) for d in range(K.p)]


def _recenter(cnt: _Counts, c0, qR, node_cap: int = 4000) -> _Center:
    """A root y in Dbar(c0, qR) with N_tot(y, r) > 2 N_ram(y, r) for all radii up to qR."""
    K = cnt.F.field
    if not cnt.good(c0, qR):
        raise _SearchStop("NotFound", "recentering start disk fails the count condition")
    stack = [(c0, qR)]
    lost = False
    seen = 0
    while stack:
        c, q = stack.pop()
        seen += 1
        if seen > node_cap:
            raise _SearchStop("NotFound", "recentering tree exceeded its node cap")
        for b in _VALUES:
            if cnt.polys[b](c).is_zero() and cnt.good_on(c, q, INF):
                return _Center(c, INF, b)
        tot, ram = cnt.tot_ram(c, q)
        if tot == 1 and ram == 0:
            b = next(b for b in _VALUES if cnt.count(c, q, b))
            return _Center(c, q, b)
        kids = []
        kid_tot = 0
        for c2, q2 in _children(K, c, q):
            t2, _ = cnt.tot_ram(c2, q2)
            kid_tot += t2
            if t2 and cnt.good_on(c2, q, q2):
                kids.append((c2, q2))
        if kid_tot < tot:
            lost = True
        stack.extend(reversed(kids))
    if lost:
        raise _SearchStop(
            "ExtensionRequired",
            "a recentering root is not approximable by K_M digits; retry with a larger ramification index",
        )
    raise _SearchStop("NotFound", "no recentering root found")


def _refine(cnt: _Counts, y: _Center) -> _Center:
    """Pin the isolated root one lattice level deeper."""
    if y.level == INF:
        return y
    K = cnt.F.field
    P = cnt.polys[y.value]
    for c2, q2 in _children(K, y.c, y.level):
        if P(c2).is_zero():
            return _Center(c2, INF, y.value)
        if cnt.count(c2, q2, y.value):
            return _Center(c2, q2, y.value)
    raise _SearchStop(
        "ExtensionRequired",
        f"root of F = {y.value} near {y.c} leaves K_M at level {y.level}; retry with a larger ramification index",
    )


def _unit_threshold(H: RatFunc, x) -> Fraction:
    """Least q with H(D(x, p^-q)) inside D(0,1), assuming |H(x)| < 1."""
    poles = [v for v, _ in (root_distances(H.den, x) if H.den.degree > 0 else []) if v != INF]
    lo = max(poles) if poles else None
    from .analysis import norm_profile
    if lo is None:
        start = min([Fraction(0)] + [v for v, _ in root_distances(H.num, x) if v != INF]) - 1
    else:
        start = lo
    prof = norm_profile(H, x, start, None)
    for i, pc in enumerate(prof.pieces):
        if pc.value >= 0:
            if i == 0 and lo is None and pc.slope > 0:
                return pc.start - pc.value / pc.slope
            return pc.start
        end_val = None if pc.end is None else prof.value(pc.end)
        if pc.slope > 0 and (end_val is None or end_val >= 0):
            return pc.start - pc.value / pc.slope
    raise _SearchStop("NotFound", "image never enters the target disk")


def _component_sigma(nu: TypeII, w) -> Mobius:
    """Mobius map sending the component of P^1 minus {nu} containing w onto D(0,1)."""
    K = nu.field
    u = K.pi_power(int(nu.log_radius * K.M))
    if w is oo or (w - nu.center).valuation() < nu.log_radius:
        return Mobius(K.zero, u, K.one, -nu.center, K)
    return Mobius(K.one, -w, K.zero, u, K)


def _sep_threshold(F: RatFunc, nu: TypeII, x, w) -> Fraction:
    """Least q with nu not separating F(D(x, p^-q)); w is a point of that image."""
    return _unit_threshold(_compose(_component_sigma(nu, w), F), x)


def _pairing(cfg: IslandConfig, f0):
    """Order (i1, i2, i3, i4) with a1, a2, f(0) outside the components of a3 and a4."""
    from itertools import permutations
    labs = [component_label(cfg.nu1, a) for a in cfg.marked_points]
    lab0 = component_label(cfg.nu1, f0)
    for perm in permutations(range(4)):
        i1, i2, i3, i4 = perm
        far = {labs[i3], labs[i4]}
        if labs[i1] not in far and labs[i2] not in far and lab0 not in far:
            return perm
    return None


def _find_preimage(cnt: _Counts, nu1n: TypeII, y: _Center, q1: Fraction, depth: int = 24):
    """A disk Dbar(z, q2) inside Dbar(y, q1), q2 > q1, with F_* nu(z, q2) = nu1n."""
    K = cnt.F.field
    g, h = cnt.polys["0"], cnt.polys["inf"]
    P = g * h
    cells = [(y.c, q1)]
    for _ in range(depth):
        nxt = []
        for c, q in cells:
            for c2, q2 in _children(K, c, q):
                if count_roots(P, c2, q2) == 0:
                    continue
                hits = [nu for nu in preimages_on_ray(cnt.F, nu1n, c2, q1, q2) if nu.log_radius > q1]
                if hits:
                    return hits[0]
                nxt.append((c2, q2))
        if not nxt:
            break
        cells = nxt
    return None


def _max_g_radius(cnt: _Counts, z, q_out: Fraction, q_in: Fraction) -> Fraction:
    """Largest radius in [q_out, q_in] (in q-coordinates: smallest q) maximizing G on the ray at z."""
    from .analysis import g_profile
    prof = g_profile(cnt.F, cnt.alpha, z, q_out, q_in)
    pts = [q_out] + prof.breakpoints + [q_in]
    best = min(cnt.g_val(z, q) for q in pts)
    return min(q for q in pts if cnt.g_val(z, q) == best)


def _terminal(f, cnt, T, cfg, order, y: _Center, trace):
    idx = {"0": order[0], "alpha": order[1], "1": order[2], "inf": order[3]}[y.value]
    V = mobius_image_disk(T, cfg.islands[idx])
    H = _compose(_to_unit_disk(V), cnt.F)
    for _ in range(64):
        Hx = H(y.c)
        if Hx is not oo and Hx.valuation() > 0:
            break
        y = _refine(cnt, y)
    else:
        raise _SearchStop("NotFound", "could not place a center inside the target island")
    q_u = _unit_threshold(H, y.c)
    U = ProjDisk(y.c, q_u, open=True)
    trace.append({"step": "terminal", "center": str(y.c), "log_radius": str(q_u), "island": idx + 1})
    unit = ProjDisk(cfg.field.zero, Fraction(0), open=True)
    if not unit.contains_disk(U):
        raise _SearchStop("NotFound", "terminal disk is not inside D(0,1)")
    if not verify_one_to_one_onto(f, U, cfg.islands[idx]):
        raise _SearchStop("NotFound", "terminal disk failed one-to-one verification")
    return U, idx + 1


def _search(f: RatFunc, cfg: IslandConfig, consts: TheoremConstants, precision: int, max_steps: int, trace):
    K = cfg.field
    p = K.p
    order = _pairing(cfg, f(K.zero))
    if order is None:
        raise _SearchStop("SeparationHypothesisFailed", "no admissible pairing of the marked points")
    pts = cfg.marked_points
    a1, a2, a3, a4 = (pts[i] for i in order)
    T = mobius_from_triples(a1, a3, a4, K.zero, K.one, oo, K)
    F = _compose(T, f)
    alpha = T(a2)
    nu1n = mobius_push(T, cfg.nu1)
    cnt = _Counts(F, alpha)
    trace.append({"step": "normalize", "order": [i + 1 for i in order], "alpha": str(alpha),
                  "nu1": f"nu(0, p^-({nu1n.log_radius}))"})

    q0 = _sep_threshold(F, nu1n, K.zero, F(K.zero))
    trace.append({"step": "r0", "log_radius": str(q0)})
    if q0 <= 0:
        raise _SearchStop("NotFound", "nu1 never separates the image of D(0,1)")

    cands = [q0] + sorted((b for b in cnt.breaks(K.zero) if 0 < b < q0), reverse=True)
    qR = next((q for q in cands if cnt.good(K.zero, q)), None)
    if qR is None:
        raise _SearchStop("NotFound", "no radius in [r0, 1) with N_tot > 2 N_ram")
    trace.append({"step": "R", "log_radius": str(qR)})

    y = _recenter(cnt, K.zero, qR)
    mu2 = consts.mu ** 2
    for n in range(1, max_steps + 1):
        while True:
            w = {"0": K.zero, "alpha": alpha, "1": K.one, "inf": oo}[y.value]
            q1 = max(qR, _sep_threshold(F, nu1n, y.c, w))
            if y.level == INF or y.level > q1:
                break
            y = _refine(cnt, y)
        gv = Magnitude(cnt.g_val(y.c, q1))
        verdict = threshold_compare(gv, mu2, p, precision)
        trace.append({"step": n, "center": str(y.c), "root_of": y.value,
                      "R_prime": str(q1), "G_valuation": str(gv.val), "G_vs_mu2": verdict.value})
        if verdict is Verdict.UNDECIDED:
            raise _SearchStop("Undecided", "G against mu^2 could not be certified")
        if verdict is Verdict.GREATER_EQ:
            return _terminal(f, cnt, T, cfg, order, y, trace)
        pre = _find_preimage(cnt, nu1n, y, q1)
        if pre is None:
            raise _SearchStop("NotFound", f"no preimage disk of nu1 inside Dbar({y.c}, p^-({q1}))")
        qR = _max_g_radius(cnt, pre.center, q1, pre.log_radius)
        trace.append({"step": "descend", "preimage": f"nu({pre.center}, p^-({pre.log_radius}))",
                      "R_next": str(qR)})
        if qR <= q1:
            raise _SearchStop("NotFound", "G does not recover along the descent ray")
        y = _recenter(cnt, pre.center, qR)
    raise _SearchStop("NotFound", f"iteration cap {max_steps} reached")


def find_island(
    f: RatFunc,
    cfg: IslandConfig,
    seeds=(),
    audit: bool = False,
    residue_char: int | None = None,
    precision: int = 64,
    max_steps: int = 64,
) -> IslandReport:
    hyp = check_hypotheses(f, cfg, seeds, residue_char, precision)
    if not hyp.passed and not audit:
        return IslandReport(hyp.status, hypotheses=hyp, diagnostic=hyp.diagnostic)
    if hyp.constants is None:
        return IslandReport("Undecided", hypotheses=hyp, diagnostic=hyp.diagnostic)
    trace: list = []
    try:
        U, idx = _search(f, cfg, hyp.constants, precision, max_steps, trace)
    except _SearchStop as stop:
        return IslandReport(stop.status, hypotheses=hyp, diagnostic=stop.diagnostic, trace=trace)
    return IslandReport("Found", U=U, island_index=idx, hypotheses=hyp, trace=trace)


def find_island_global(
    f: RatFunc,
    cfg: IslandConfig,
    seeds=(),
    audit: bool = False,
    residue_char: int | None = None,
    precision: int = 64,
    max_start: int = 64,
) -> IslandReport:
    """Move a point with f^# > 0 to 0, rescale until f^#(0) > C1, then search."""
    if f.is_constant():
        raise ConstantFunction("f is constant")
    K = f.field
    try:
        consts = theorem_constants(cfg, residue_char, precision)
    except ThresholdUndecided as exc:
        return IslandReport("Undecided", diagnostic=str(exc))
    starts = [K.zero] + [RamifiedScalar.coerce(K, s) for s in seeds] + [K(n) for n in range(1, max_start)]
    x = next((s for s in starts if not spherical_derivative_point(f, s).is_zero), None)
    if x is None:
        return IslandReport("NotFound", diagnostic="no start point with nonzero spherical derivative")
    d = spherical_derivative_point(f, x)
    # |p^-j| = p^j; need p^j * f^#(x) > C1
    j = 0
    while not (d * Magnitude(-j) > consts.C1):
        j += 1
    lam = K.pi_power(-j * K.M)
    ft = f.substitute_affine(x, lam)
    tseeds = [(RamifiedScalar.coerce(K, s) - x) / lam for s in seeds]
    rep = find_island(ft, cfg, tseeds, audit, residue_char, precision)
    rep.trace.insert(0, {"step": "global", "x": str(x), "scale_valuation": str(-j)})
    if rep.found:
        U = rep.U
        rep.U = ProjDisk(x + lam * U.center, U.log_radius - j, open=True)
        if not verify_one_to_one_onto(f, rep.U, cfg.islands[rep.island_index - 1]):
            return IslandReport("NotFound", hypotheses=rep.hypotheses,
                                diagnostic="mapped certificate failed verification", trace=rep.trace)
    return rep
