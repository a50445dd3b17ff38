"""Exact halfspace systems over catalyst parameters and the polyhedra they cut out."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from . import lp
from .errors import DimensionMismatch, DimensionTooHigh, Unbounded

LE = "<="
EQ = "="

MAX_VERTEX_DIM = 4

Point = tuple[Fraction, ...]


@dataclass(frozen=True, order=True)
class Tag:
    """Where a row came from: ``ordering`` (side, position), ``majorization``
    (prefix length), ``simplex`` (bound index) or ``user``."""

    kind: str
    index: int = 0
    side: str = ""

    def __str__(self) -> str:
        if self.kind == "ordering":
            return f"Ordering({self.side}, {self.index})"
        if self.kind == "majorization":
            return f"Majorization({self.index})"
        if self.kind == "simplex":
            return f"Simplex({self.index})"
        return self.kind


USER = Tag("user")


def _dot(a: Sequence[Fraction], x: Sequence[Fraction]) -> Fraction:
    return sum((u * v for u, v in zip(a, x)), Fraction(0))


@dataclass(frozen=True)
class Row:
    coeffs: tuple[Fraction, ...]
    rhs: Fraction
    relation: str = LE
    tag: Tag = USER

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        object.__setattr__(self, "rhs", Fraction(self.rhs))
        if self.relation not in (LE, EQ):
            raise ValueError(f"unknown relation {self.relation!r}")

    def lhs(self, x: Sequence[Fraction]) -> Fraction:
        return _dot(self.coeffs, x)

    def slack(self, x: Sequence[Fraction]) -> Fraction:
        return self.rhs - self.lhs(x)

    def holds(self, x: Sequence[Fraction]) -> bool:
        s = self.slack(x)
        return s == 0 if self.relation == EQ else s >= 0

    def canonical(self):
        """Scale-free form used for deduplication; ``None`` for tautologies."""
        lead = next((c for c in self.coeffs if c), None)
        if lead is None:
            ok = self.rhs == 0 if self.relation == EQ else self.rhs >= 0
            return None if ok else ((), Fraction(-1), LE)
        scale = abs(lead) if self.relation == LE else lead
        return (tuple(c / scale for c in self.coeffs), self.rhs / scale, self.relation)


def le(coeffs, rhs, tag: Tag = USER) -> Row:
    return Row(tuple(coeffs), rhs, LE, tag)


def ge(coeffs, rhs, tag: Tag = USER) -> Row:
    return Row(tuple(-Fraction(c) for c in coeffs), -Fraction(rhs), LE, tag)


def eq(coeffs, rhs, tag: Tag = USER) -> Row:
    return Row(tuple(coeffs), rhs, EQ, tag)


@dataclass(frozen=True)
class HalfspaceSystem:
    ambient_dim: int
    rows: tuple[Row, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        for r in self.rows:
            if len(r.coeffs) != self.ambient_dim:
                raise DimensionMismatch(
                    f"row {r.tag} has {len(r.coeffs)} coefficients, expected {self.ambient_dim}")

    def holds(self, x: Sequence[Fraction]) -> bool:
        return all(r.holds(x) for r in self.rows)

    def canonical_key(self) -> frozenset:
        return frozenset(c for c in (r.canonical() for r in self.rows) if c is not None)

    def lp_form(self):
        A_ub, b_ub, A_eq, b_eq = [], [], [], []
        for r in self.rows:
            if r.relation == EQ:
                A_eq.append(r.coeffs)
                b_eq.append(r.rhs)
            else:
                A_ub.append(r.coeffs)
                b_ub.append(r.rhs)
        return A_ub, b_ub, A_eq, b_eq

    def deduplicated(self) -> "HalfspaceSystem":
        seen = set()
        keep = []
        for r in self.rows:
            c = r.canonical()
            if c is None or c in seen:
                continue
            seen.add(c)
            keep.append(r)
        return HalfspaceSystem(self.ambient_dim, tuple(keep))

    def __len__(self) -> int:
        return len(self.rows)


def intersect(a: HalfspaceSystem, b: HalfspaceSystem) -> HalfspaceSystem:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")
    return HalfspaceSystem(a.ambient_dim, a.rows + b.rows)


def maximize(system: HalfspaceSystem, objective: Sequence) -> lp.LPResult:
    if len(objective) != system.ambient_dim:
        raise DimensionMismatch("objective length differs from ambient dimension")
    return lp.maximize(objective, *system.lp_form())


def minimize(system: HalfspaceSystem, objective: Sequence) -> lp.LPResult:
    if len(objective) != system.ambient_dim:
        raise DimensionMismatch("objective length differs from ambient dimension")
    return lp.minimize(objective, *system.lp_form())


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    witness: Point | None


def feasibility(system: HalfspaceSystem) -> Feasibility:
    res = lp.maximize([0] * system.ambient_dim, *system.lp_form())
    if res.status == lp.INFEASIBLE:
        return Feasibility(False, None)
    return Feasibility(True, res.point)


# --------------------------------------------------------------------------
# linear algebra helpers


def rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    rows = [list(v) for v in vectors]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                f /= p
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def affine_rank(points: Sequence[Point]) -> int:
    if not points:
        return -1
    base = points[0]
    return rank([[a - b for a, b in zip(p, base)] for p in points[1:]])


# --------------------------------------------------------------------------
# polyhedron construction


@dataclass(frozen=True)
class Polyhedron:
    system: HalfspaceSystem
    feasible: bool
    dim: int
    vertices: tuple[Point, ...] | None = None
    interior_point: Point | None = None
    bounded: bool = True
    box: tuple[tuple[Fraction, Fraction], ...] | None = field(default=None, compare=False)

    @property
    def ambient_dim(self) -> int:
        return self.system.ambient_dim

    @classmethod
    def from_system(cls, system: HalfspaceSystem, max_vertex_dim: int = MAX_VERTEX_DIM) -> "Polyhedron":
        return polyhedron(system, max_vertex_dim)

    def interval(self) -> tuple[Fraction, Fraction]:
        """Endpoints for a one-parameter polytope."""
        if self.ambient_dim != 1 or not self.feasible or not self.bounded:
            raise ValueError("interval() needs a feasible bounded 1-D polyhedron")
        return self.box[0]


def bounding_box(system: HalfspaceSystem):
    """Per-coordinate ``(min, max)``; ``None`` when unbounded or infeasible."""
    d = system.ambient_dim
    A_ub, b_ub, A_eq, b_eq = system.lp_form()
    box = []
    for i in range(d):
        e = [0] * d
        e[i] = 1
        hi = lp.maximize(e, A_ub, b_ub, A_eq, b_eq)
        lo = lp.minimize(e, A_ub, b_ub, A_eq, b_eq)
        if hi.status != lp.OPTIMAL or lo.status != lp.OPTIMAL:
            return None
        box.append((lo.value, hi.value))
    return tuple(box)


def _le_rows(system: HalfspaceSystem):
    out = []
    for r in system.rows:
        out.append((r.coeffs, r.rhs))
        if r.relation == EQ:
            out.append((tuple(-c for c in r.coeffs), -r.rhs))
    return out


def _clip_vertices(system: HalfspaceSystem, box) -> list[Point]:
    """Vertex enumeration by incremental cutting (double description in V-form).

    Starts from the bounding box and intersects one halfspace at a time. Two
    vertices span an edge exactly when the constraints tight at both have rank
    ``d - 1``; each cut keeps the inside vertices and adds the crossing points
    of edges that straddle the new hyperplane.
    """
    d = system.ambient_dim
    processed: list[tuple[tuple[Fraction, ...], Fraction]] = []
    for i, (lo, hi) in enumerate(box):
        e = tuple(Fraction(int(j == i)) for j in range(d))
        processed.append((e, hi))
        processed.append((tuple(-x for x in e), -lo))
    verts = list(dict.fromkeys(product(*[(lo, hi) for lo, hi in box])))
    tight = {v: frozenset(i for i, (a, b) in enumerate(processed) if _dot(a, v) == b) for v in verts}
    rank_cache: dict[frozenset, int] = {}

    def edge(u, w) -> bool:
        common = tight[u] & tight[w]
        if len(common) < d - 1:
            return False
        if common not in rank_cache:
            rank_cache[common] = rank([processed[i][0] for i in common])
        return rank_cache[common] == d - 1

    for a, b in _le_rows(system):
        idx = len(processed)
        s = {v: _dot(a, v) - b for v in verts}
        outside = [v for v in verts if s[v] > 0]
        if not outside:
            processed.append((a, b))
            for v in verts:
                if s[v] == 0:
                    tight[v] = tight[v] | {idx}
            continue
        inside = [v for v in verts if s[v] <= 0]
        if not inside:
            return []
        fresh = []
        for u in inside:
            if s[u] == 0:
                continue
            for w in outside:
                if edge(u, w):
                    t = s[u] / (s[u] - s[w])
                    fresh.append(tuple(x + t * (y - x) for x, y in zip(u, w)))
        processed.append((a, b))
        for v in inside:
            if s[v] == 0:
                tight[v] = tight[v] | {idx}
        for p in fresh:
            if p not in tight:
                tight[p] = frozenset(i for i, (aa, bb) in enumerate(processed) if _dot(aa, p) == bb)
        verts = list(dict.fromkeys(inside + fresh))
        for v in outside:
            tight.pop(v, None)
    return sorted(verts)


def _implicit_equalities(system: HalfspaceSystem) -> list[int]:
    A_ub, b_ub, A_eq, b_eq = system.lp_form()
    out = []
    for i, (a, b) in enumerate(zip(A_ub, b_ub)):
        res = lp.maximize([-x for x in a], A_ub, b_ub, A_eq, b_eq)
        if res.status == lp.OPTIMAL and -res.value == b:
            out.append(i)
    return out


def _relative_interior(system: HalfspaceSystem, implicit: list[int]) -> Point | None:
    A_ub, b_ub, A_eq, b_eq = system.lp_form()
    d = system.ambient_dim
    loose_A, loose_b = [], []
    fixed_A, fixed_b = [list(r) + [0] for r in A_eq], list(b_eq)
    for i, (a, b) in enumerate(zip(A_ub, b_ub)):
        if i in implicit:
            fixed_A.append(list(a) + [0])
            fixed_b.append(b)
        else:
            loose_A.append(list(a) + [1])
            loose_b.append(b)
    loose_A.append([0] * d + [1])
    loose_b.append(Fraction(1))
    res = lp.maximize([0] * d + [1], loose_A, loose_b, fixed_A, fixed_b)
    if res.status != lp.OPTIMAL:
        return None
    return res.point[:d]


def polyhedron(system: HalfspaceSystem, max_vertex_dim: int = MAX_VERTEX_DIM) -> Polyhedron:
    """Decide feasibility and compute dimension, vertices and a relative interior point."""
    d = system.ambient_dim
    feas = feasibility(system)
    if not feas.feasible:
        return Polyhedron(system, False, -1, (), None, True, None)
    if d == 0:
        return Polyhedron(system, True, 0, ((),), (), True, ())
    box = bounding_box(system)
    if box is not None and d == 1:
        lo, hi = box[0]
        verts = ((lo,),) if lo == hi else ((lo,), (hi,))
        mid = ((lo + hi) / 2,)
        return Polyhedron(system, True, 0 if lo == hi else 1, verts, mid, True, box)
    if box is not None and d <= max_vertex_dim:
        verts = tuple(_clip_vertices(system, box))
        mid = tuple(sum(c) / len(verts) for c in zip(*verts))
        return Polyhedron(system, True, affine_rank(verts), verts, mid, True, box)
    implicit = _implicit_equalities(system)
    A_ub, _, A_eq, _ = system.lp_form()
    dim = d - rank(list(A_eq) + [A_ub[i] for i in implicit])
    return Polyhedron(system, True, dim, None, _relative_interior(system, implicit), box is not None, box)


def vertices(poly: Polyhedron) -> list[Point]:
    if poly.ambient_dim > MAX_VERTEX_DIM:
        raise DimensionTooHigh(f"vertex enumeration is limited to ambient dimension {MAX_VERTEX_DIM}")
    if not poly.bounded:
        raise Unbounded("polyhedron is unbounded")
    if not poly.feasible:
        return []
    if poly.vertices is None:
        box = poly.box or bounding_box(poly.system)
        return _clip_vertices(poly.system, box)
    return list(poly.vertices)


def contains(poly: Polyhedron | HalfspaceSystem, point: Sequence) -> bool:
    system = poly.system if isinstance(poly, Polyhedron) else poly
    if len(point) != system.ambient_dim:
        raise DimensionMismatch(f"point has {len(point)} coordinates, expected {system.ambient_dim}")
    return system.holds([Fraction(x) for x in point])
