"""Supercatalysis: auxiliary states that end up more entangled than they started.

Every search here is a heuristic proposal step followed by exact acceptance:
a candidate pair ``(P1, P2)`` only becomes a certificate after
:func:`catalysis.majorization.verify_supercatalysis` passes on exact inputs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from decimal import Context, Decimal
from fractions import Fraction
from typing import Iterable, Sequence

from . import lp
from .errors import DimensionMismatch, NotIncomparable, Unsupported, VerticesUnavailable
from .majorization import (
    Comparability,
    TransformReport,
    compare,
    majorizes,
    verify_supercatalysis,
)
from .opmp import (
    DEFAULT_CAP,
    Opmp,
    _check_cap,
    _dedupe,
    chi_of,
    down_set_form,
    down_sets,
    enumerate_opmps,
    params_of,
    product_forms,
    realizable_orderings,
    row_le,
    simplex_rows,
)
from .polyhedra import HalfspaceSystem, Row, Tag, feasibility, le, polyhedron
from .rational import (
    DEFAULT_MAX_PRECISION_BITS,
    DEFAULT_PRECISION_BITS,
    Cmp,
    EntropyInterval,
    Spectrum,
    _digits,
    _round_down,
    _round_up,
    entropy,
    pad_pair,
    separate,
    tensor,
)

EPSILON_FLOOR = Fraction(1, 2 ** 40)

Point = tuple[Fraction, ...]


# --------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class SupercatalysisCertificate:
    psi: Spectrum
    phi: Spectrum
    p_initial: Point
    p_final: Point
    delta: EntropyInterval
    report: TransformReport

    @property
    def chi(self) -> Spectrum:
        return chi_of(self.p_initial)

    @property
    def omega(self) -> Spectrum:
        return chi_of(self.p_final)

    def verify(self) -> bool:
        return verify_supercatalysis(self.psi, self.phi, self.chi, self.omega).valid


def make_certificate(psi: Spectrum, phi: Spectrum, p_initial: Sequence, p_final: Sequence,
                     max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> SupercatalysisCertificate | None:
    """Exact check of one candidate; ``None`` unless it is a genuine supercatalysis."""
    p1 = tuple(Fraction(x) for x in p_initial)
    p2 = tuple(Fraction(x) for x in p_final)
    if len(p1) != len(p2):
        raise DimensionMismatch("initial and final parameter vectors differ in length")
    chi, omega = chi_of(p1), chi_of(p2)
    a, b = pad_pair(psi, phi)
    report = majorizes(tensor(a, chi), tensor(b, omega))
    if not report.result:
        return None
    cmp, e_omega, e_chi = separate(omega, chi, max_precision_bits)
    if cmp is not Cmp.GREATER:
        return None
    return SupercatalysisCertificate(psi, phi, p1, p2, e_omega - e_chi, report)


def _better(a: SupercatalysisCertificate | None, b: SupercatalysisCertificate | None):
    """Larger certified gain wins; ties go to the lexicographically smaller pair."""
    if a is None:
        return b
    if b is None:
        return a
    if b.delta.lower != a.delta.lower:
        return b if b.delta.lower > a.delta.lower else a
    return b if (b.p_initial, b.p_final) < (a.p_initial, a.p_final) else a


# --------------------------------------------------------------------------
# entropy helpers on parameter vectors


def _float_entropy(point: Sequence[Fraction]) -> float:
    vals = [float(x) for x in point]
    vals.append(1.0 - sum(vals))
    return -sum(v * math.log(v) for v in vals if v > 0)


def _gradient(point: Sequence[Fraction]) -> list[float]:
    """Gradient of the entropy in the free parameters: ``ln(p_k / p_j)``."""
    q = float(1 - sum(point))
    out = []
    for x in point:
        p = float(x)
        if p > 0 and q > 0:
            out.append(math.log(q / p))
        elif p == 0 and q > 0:
            out.append(1e6)
        elif q == 0 and p > 0:
            out.append(-1e6)
        else:
            out.append(0.0)
    return out


def _golden(f, lo: float = 0.0, hi: float = 1.0, iters: int = 60) -> float:
    g = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return (a + b) / 2


def _snap(point: Point, system: HalfspaceSystem, limit: int = 10 ** 9) -> Point:
    snapped = tuple(x.limit_denominator(limit) for x in point)
    return snapped if system.holds(snapped) else point


def max_entropy_point(system: HalfspaceSystem, start: Point, iters: int = 40) -> Point:
    """Frank–Wolfe ascent of the (concave) entropy over a polytope.

    The linear subproblem is an exact LP; the step along the segment comes from
    a golden-section search and is rounded to a small-denominator rational, so
    every iterate stays exactly feasible.
    """
    A_ub, b_ub, A_eq, b_eq = system.lp_form()
    x = tuple(Fraction(v) for v in start)
    fx = _float_entropy(x)
    for _ in range(iters):
        g = _gradient(x)
        res = lp.maximize([Fraction(v).limit_denominator(10 ** 12) for v in g], A_ub, b_ub, A_eq, b_eq)
        if res.status != lp.OPTIMAL:
            break
        s = res.point
        direction = [b - a for a, b in zip(x, s)]
        if sum(gi * float(di) for gi, di in zip(g, direction)) <= 1e-15:
            break

        def along(t: float) -> float:
            return _float_entropy([float(a) + t * float(di) for a, di in zip(x, direction)])

        t = Fraction(_golden(along)).limit_denominator(10 ** 6)
        cand = _snap(tuple(a + t * di for a, di in zip(x, direction)), system)
        fc = _float_entropy(cand)
        if fc <= fx + 1e-16:
            break
        x, fx = cand, fc
    return x


def _ln_bounds(q: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    prec = _digits(bits)
    ctx = Context(prec=prec)
    v = Fraction(ctx.ln(ctx.divide(Decimal(q.numerator), Decimal(q.denominator))))
    pad = Fraction(1, 10 ** (prec - 3)) * (1 + abs(v))
    return v - pad, v + pad


def certified_max_entropy(system: HalfspaceSystem, start: Point,
                          bits: int = DEFAULT_PRECISION_BITS) -> tuple[Point, Fraction]:
    """A good point and a rigorous upper bound on the maximum entropy over the polytope.

    Concavity gives ``E(v) <= E(x) + grad E(x) · (v - x)``; the right side is
    maximized exactly by LP with the gradient replaced by its midpoint, and the
    gradient's enclosure radius times the bounding-box extent covers the rest.
    Falls back to ``ln(support)`` when the point sits on a face with a zero
    coefficient, where the gradient is unbounded.
    """
    x = max_entropy_point(system, start)
    chi = chi_of(x)
    if any(v == 0 for v in chi.values):
        poly = polyhedron(system)
        if poly.vertices is None:
            support = chi.dim
        else:
            support = max(len(chi_of(v).support()) for v in poly.vertices)
        return x, _ln_bounds(Fraction(support), bits)[1]
    q = chi.values[-1]
    mids, rads = [], []
    for p in x:
        lo, hi = _ln_bounds(q / p, bits)
        mids.append((lo + hi) / 2)
        rads.append((hi - lo) / 2)
    res = lp.maximize(mids, *system.lp_form())
    lin = res.value - sum(m * a for m, a in zip(mids, x))
    box = []
    for i in range(len(x)):
        e = [0] * len(x)
        e[i] = 1
        hi = lp.maximize(e, *system.lp_form()).value
        lo = lp.minimize(e, *system.lp_form()).value
        box.append(max(hi - x[i], x[i] - lo))
    slack = sum(r * w for r, w in zip(rads, box))
    return x, Fraction(entropy(chi, bits).upper) + lin + slack


# --------------------------------------------------------------------------
# strictness


class Strictness(enum.Enum):
    STRICT = "Strict"
    SEMI_STRICT = "SemiStrict"
    NEITHER = "NeitherAtPoint"


@dataclass(frozen=True)
class StrictnessProfile:
    classification: Strictness
    point: Point | None
    direction: Point | None = None
    epsilon: Fraction | None = None
    benign_indices: tuple[int, ...] = ()

    @property
    def p_final(self) -> Point | None:
        if self.direction is None:
            return None
        return tuple(p - self.epsilon * d for p, d in zip(self.point, self.direction))


def _target_prefix_forms(opmp: Opmp):
    fb = product_forms(opmp.phi, opmp.k)
    d = opmp.k - 1
    acc = (Fraction(0),) * (d + 1)
    out = {}
    for m in range(1, len(opmp.target_ordering)):
        f = fb[opmp.target_ordering.pairs[m - 1]]
        acc = tuple(a + b for a, b in zip(acc, f))
        out[m] = acc
    return out


def max_slack_point(opmp: Opmp) -> tuple[Point, Fraction] | None:
    """Point of the cell maximizing the smallest majorization slack (capped at 1)."""
    d = opmp.k - 1
    rows = [Row(r.coeffs + (Fraction(0),), r.rhs, r.relation, r.tag) for r in opmp.polyhedron.system.rows]
    downs = down_sets(opmp.psi.dim, opmp.k)
    for m, tf in _target_prefix_forms(opmp).items():
        for ds in downs[m]:
            r = row_le(down_set_form(opmp.psi, ds), tf, Tag("majorization", m))
            rows.append(Row(r.coeffs + (Fraction(1),), r.rhs, r.relation, r.tag))
    rows.append(le((Fraction(0),) * d + (Fraction(1),), 1))
    system = HalfspaceSystem(d + 1, tuple(_dedupe(rows)))
    res = lp.maximize((Fraction(0),) * d + (Fraction(1),), *system.lp_form())
    if res.status != lp.OPTIMAL:
        return None
    return res.point[:d], res.value


def _self_tight(opmp: Opmp, point: Point) -> tuple[int, ...]:
    a, b = pad_pair(opmp.psi, opmp.phi)
    chi = chi_of(point)
    return majorizes(tensor(a, chi), tensor(b, chi)).tight_indices


def _segment(p1: Point, q: Point, eps: Fraction) -> Point:
    return tuple(a + eps * (b - a) for a, b in zip(p1, q))


def _search_segments(opmp: Opmp, starts: Iterable[Point], goals: Iterable[Point], maximize: bool,
                     floor: Fraction = EPSILON_FLOOR):
    """Move from each start toward each goal, halving the step until it certifies.

    Returns ``(certificate, start, goal, eps)`` for the first hit, or the best
    hit when ``maximize`` is set.
    """
    best = None
    best_info = None
    goals = list(dict.fromkeys(goals))
    for p1 in dict.fromkeys(starts):
        for q in goals:
            if q == p1:
                continue
            eps = Fraction(1)
            hit = None
            while eps >= floor:
                cert = make_certificate(opmp.psi, opmp.phi, p1, _segment(p1, q, eps))
                if cert is not None:
                    hit = (cert, eps)
                    break
                eps /= 2
            if hit is None:
                continue
            cert, eps = hit
            if maximize and eps < 1:
                lo, hi = eps, min(Fraction(1), 2 * eps)
                for _ in range(12):
                    mid = (lo + hi) / 2
                    c = make_certificate(opmp.psi, opmp.phi, p1, _segment(p1, q, mid))
                    if c is None:
                        hi = mid
                        continue
                    lo = mid
                    if _better(cert, c) is c:
                        cert, eps = c, mid
            if not maximize:
                return cert, p1, q, eps
            chosen = _better(best, cert)
            if chosen is cert:
                best, best_info = cert, (cert, p1, q, eps)
    return best_info


def _candidate_points(opmp: Opmp) -> tuple[list[Point], list[Point]]:
    poly = opmp.polyhedron
    verts = list(poly.vertices or [])
    starts, goals = [], []
    slack = max_slack_point(opmp)
    if slack is not None and slack[1] > 0:
        starts.append(slack[0])
    starts += verts
    if poly.interior_point is not None:
        starts.append(poly.interior_point)
        goals.append(max_entropy_point(poly.system, poly.interior_point))
        goals.append(poly.interior_point)
    goals += verts
    return starts, goals


def classify_strictness(opmp: Opmp) -> StrictnessProfile:
    poly = opmp.polyhedron
    if not poly.feasible or poly.dim < 1:
        point = poly.interior_point if poly.feasible else None
        return StrictnessProfile(Strictness.NEITHER, point)
    slack = max_slack_point(opmp)
    if slack is not None and slack[1] > 0:
        p1 = slack[0]
        starts, goals = [p1], _candidate_points(opmp)[1]
        found = _search_segments(opmp, starts, goals, maximize=False)
        if found is None:
            return StrictnessProfile(Strictness.STRICT, p1)
        cert, _, q, eps = found
        direction = tuple(a - b for a, b in zip(p1, q))
        return StrictnessProfile(Strictness.STRICT, p1, direction, eps, ())
    starts, goals = _candidate_points(opmp)
    found = _search_segments(opmp, starts, goals, maximize=False)
    if found is None:
        return StrictnessProfile(Strictness.NEITHER, poly.interior_point)
    cert, p1, q, eps = found
    direction = tuple(a - b for a, b in zip(p1, q))
    return StrictnessProfile(Strictness.SEMI_STRICT, p1, direction, eps, _self_tight(opmp, p1))


def supercat_from_opmp(opmp: Opmp, maximize: bool = False) -> SupercatalysisCertificate | None:
    """Certificate obtained by moving inside one OPMP toward higher entropy."""
    if not opmp.polyhedron.feasible or opmp.polyhedron.dim < 1:
        return None
    if maximize:
        starts, goals = _candidate_points(opmp)
        found = _search_segments(opmp, starts, goals, maximize=True)
        return None if found is None else found[0]
    profile = classify_strictness(opmp)
    if profile.direction is None:
        return None
    return make_certificate(opmp.psi, opmp.phi, profile.point, profile.p_final)


# --------------------------------------------------------------------------
# bounds


def delta_upper_bound(opmp: Opmp) -> EntropyInterval:
    """Enclosure of ``max E - min E`` over the OPMP, bounding any gain found inside it."""
    poly = opmp.polyhedron
    if poly.vertices is None:
        raise VerticesUnavailable("vertex list needed for the entropy bound")
    bits = DEFAULT_PRECISION_BITS
    ents = [entropy(chi_of(v), bits) for v in poly.vertices]
    low = min(ents, key=lambda e: e.lower)
    if len(poly.vertices) == 1:
        return EntropyInterval(Decimal(0), Decimal(0), bits)
    if opmp.k == 2:
        # one parameter p >= 1/2: the entropy decreases in p, so the ends are the extremes
        high = max(ents, key=lambda e: e.upper)
        lo = max(Fraction(0), Fraction(high.lower) - Fraction(low.upper))
        return EntropyInterval(_round_down(lo, bits), _round_up(Fraction(high.upper) - Fraction(low.lower), bits),
                               bits)
    x, upper = certified_max_entropy(poly.system, poly.interior_point, bits)
    at_x = entropy(chi_of(x), bits)
    best_lower = max([Fraction(at_x.lower)] + [Fraction(e.lower) for e in ents])
    lo = max(Fraction(0), best_lower - Fraction(low.upper))
    return EntropyInterval(_round_down(lo, bits), _round_up(upper - Fraction(low.lower), bits), bits)


@dataclass(frozen=True)
class BoundAttainment:
    attained: bool
    report: TransformReport
    p_initial: Point
    p_final: Point


def check_bound_attainment(opmp: Opmp) -> BoundAttainment:
    """Can the whole interval be traversed, least entangled end to most entangled end?"""
    if opmp.k != 2:
        raise Unsupported("bound attainment is only decided for one-parameter OPMPs")
    pl, pu = opmp.interval()
    a, b = pad_pair(opmp.psi, opmp.phi)
    report = majorizes(tensor(a, chi_of((pu,))), tensor(b, chi_of((pl,))))
    return BoundAttainment(report.result, report, (pu,), (pl,))


# --------------------------------------------------------------------------
# global search


def _embed(form, side: int, d: int):
    coeffs = list(form[:d])
    pad = [Fraction(0)] * d
    full = pad + coeffs if side else coeffs + pad
    return tuple(full) + (form[d],)


def cross_system(psi: Spectrum, phi: Spectrum, k: int, tgt) -> HalfspaceSystem:
    """Joint region of ``(P1, P2)`` with ``psi ⊗ chi(P1) ≺ phi ⊗ chi(P2)``, target order fixed.

    Variables are ``P1`` followed by ``P2``.
    """
    psi, phi = pad_pair(psi, phi)
    d = k - 1
    rows = simplex_rows(k, 0, 2 * d) + simplex_rows(k, d, 2 * d)
    fb = product_forms(phi, k)
    for t in range(len(tgt) - 1):
        rows.append(row_le(_embed(fb[tgt.pairs[t + 1]], 1, d), _embed(fb[tgt.pairs[t]], 1, d),
                           Tag("ordering", t + 1, "target")))
    downs = down_sets(psi.dim, k)
    acc = (Fraction(0),) * (d + 1)
    for m in range(1, psi.dim * k):
        acc = tuple(a + b for a, b in zip(acc, fb[tgt.pairs[m - 1]]))
        rhs = _embed(acc, 1, d)
        for ds in downs[m]:
            rows.append(row_le(_embed(down_set_form(psi, ds), 0, d), rhs, Tag("majorization", m)))
    return HalfspaceSystem(2 * d, tuple(_dedupe(rows)))


def _slice(system: HalfspaceSystem, fixed: Point, side: int) -> HalfspaceSystem:
    """Restrict a joint system by fixing ``P1`` (side 0) or ``P2`` (side 1)."""
    d = system.ambient_dim // 2
    rows = []
    for r in system.rows:
        fixed_part = r.coeffs[d:] if side else r.coeffs[:d]
        free_part = r.coeffs[:d] if side else r.coeffs[d:]
        rhs = r.rhs - sum(c * x for c, x in zip(fixed_part, fixed))
        rows.append(Row(free_part, rhs, r.relation, r.tag))
    return HalfspaceSystem(d, tuple(_dedupe(rows)))


def _low_entropy_points(system: HalfspaceSystem) -> list[Point]:
    """Vertices when available, otherwise LP extremes along coordinate directions."""
    poly = polyhedron(system)
    if not poly.feasible:
        return []
    if poly.vertices is not None:
        return list(poly.vertices)
    d = system.ambient_dim
    pts = []
    for i in range(d):
        for sgn in (1, -1):
            e = [0] * d
            e[i] = sgn
            res = lp.maximize(e, *system.lp_form())
            if res.status == lp.OPTIMAL:
                pts.append(res.point)
    return list(dict.fromkeys(pts))


def _joint_starts(system: HalfspaceSystem) -> list[tuple[Point, Point]]:
    d = system.ambient_dim // 2
    poly = polyhedron(system)
    if not poly.feasible:
        return []
    if poly.vertices is not None:
        pts = list(poly.vertices)
    else:
        pts = _low_entropy_points(system)
    if poly.interior_point is not None:
        pts.append(poly.interior_point)
    return [(p[:d], p[d:]) for p in dict.fromkeys(pts)]


def _refine(psi, phi, system: HalfspaceSystem, p1: Point, p2: Point, rounds: int = 3):
    """Alternate: maximize E(P2) with P1 fixed, then pick the least entangled P1 vertex."""
    best = make_certificate(psi, phi, p1, p2)
    for _ in range(rounds):
        s2 = _slice(system, p1, 0)
        p2 = max_entropy_point(s2, p2)
        best = _better(best, make_certificate(psi, phi, p1, p2))
        s1 = _slice(system, p2, 1)
        cands = _low_entropy_points(s1)
        if not cands:
            break
        new_p1 = min(cands, key=lambda v: (_float_entropy(v), v))
        best = _better(best, make_certificate(psi, phi, new_p1, p2))
        if new_p1 == p1:
            break
        p1 = new_p1
    return best


def cross_search(psi: Spectrum, phi: Spectrum, k: int, maximize: bool = False, cap: int = DEFAULT_CAP,
                 refine_top: int = 2) -> SupercatalysisCertificate | None:
    """Search pairs ``(P1, P2)`` without requiring them to share an OPMP."""
    psi, phi = pad_pair(psi, phi)
    best = None
    for tgt in realizable_orderings(phi, k, cap):
        system = cross_system(psi, phi, k, tgt)
        if not feasibility(system).feasible:
            continue
        scored = []
        for p1, p2 in _joint_starts(system):
            cert = make_certificate(psi, phi, p1, p2)
            if cert is not None and not maximize:
                return cert
            best = _better(best, cert)
            scored.append((_float_entropy(p2) - _float_entropy(p1), p1, p2))
        scored.sort(key=lambda s: (-s[0], s[1], s[2]))
        for _, p1, p2 in scored[:refine_top]:
            cert = _refine(psi, phi, system, p1, p2)
            if cert is not None and not maximize:
                return cert
            best = _better(best, cert)
    return best


def find_supercatalyst(psi: Spectrum, phi: Spectrum, k: int, maximize: bool = False,
                       cap: int = DEFAULT_CAP, cross: bool = True) -> SupercatalysisCertificate | None:
    """Scan every OPMP, then the cross-OPMP search; every result is exactly verified."""
    if compare(psi, phi) is not Comparability.INCOMPARABLE:
        raise NotIncomparable("supercatalysis search needs an incomparable pair")
    a, _ = pad_pair(psi, phi)
    _check_cap(a.dim, k, cap)
    if k < 2:
        return None
    best = None
    for o in enumerate_opmps(psi, phi, k, cap):
        cert = supercat_from_opmp(o, maximize)
        if cert is not None and not maximize:
            return cert
        best = _better(best, cert)
    if cross:
        best = _better(best, cross_search(psi, phi, k, maximize, cap))
    return best


def find_supercatalyst_to(psi: Spectrum, phi: Spectrum, omega: Spectrum) -> SupercatalysisCertificate | None:
    """Best initial auxiliary state for a prescribed final one.

    With the final state fixed the target prefix sums are constants, so the
    admissible initial parameters form a polytope; the least entangled of its
    vertices gives the largest gain.
    """
    psi, phi = pad_pair(psi, phi)
    k = omega.dim
    d = k - 1
    target = tensor(phi, omega).values
    rows = simplex_rows(k)
    downs = down_sets(psi.dim, k)
    acc = Fraction(0)
    for m in range(1, psi.dim * k):
        acc += target[m - 1]
        const = (Fraction(0),) * d + (acc,)
        for ds in downs[m]:
            rows.append(row_le(down_set_form(psi, ds), const, Tag("majorization", m)))
    system = HalfspaceSystem(d, tuple(_dedupe(rows)))
    cands = _low_entropy_points(system)
    best = None
    for p1 in cands:
        best = _better(best, make_certificate(psi, phi, p1, params_of(omega)))
    return best
