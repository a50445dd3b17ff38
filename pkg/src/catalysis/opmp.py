"""Orderings of product spectra and order preserving majorization polyhedra.

A ``k``-dimensional auxiliary state is parameterized by its first ``k - 1``
coefficients ``P``; the last one is ``1 - sum(P)``. Every product coefficient
``alpha_i * chi_j(P)`` is then an affine form in ``P``, and so is every prefix
sum of a product spectrum once its ordering is fixed.

Two views of the catalytic set are provided:

* :func:`build_opmp` fixes a complete ordering of both product spectra, giving
  the finest (atomic) cells.
* :func:`enumerate_opmps` fixes only the target ordering and describes the
  source side by its top-``m`` subsets. The largest ``m`` coefficients of the
  source product always form a down-set of the index grid, so the source prefix
  sum is the maximum of a few affine forms and the majorization condition is a
  plain list of linear rows. Cells are then split only where the identity of a
  top-``m`` subset changes at a prefix whose row actually bounds the region;
  swaps that never touch a binding inequality do not split a cell.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from . import lp
from .errors import InvalidOrdering, NotIncomparable, TooLarge
from .majorization import Comparability, compare
from .polyhedra import (
    HalfspaceSystem,
    Polyhedron,
    Row,
    Tag,
    feasibility,
    le,
    polyhedron,
)
from .rational import EntropyInterval, Spectrum, entropy, pad_pair

DEFAULT_CAP = 16

Form = tuple[Fraction, ...]  # coefficients on P followed by the constant term
Point = tuple[Fraction, ...]
Cell = tuple[int, int]


# --------------------------------------------------------------------------
# parameterization


def chi_forms(k: int) -> list[Form]:
    """Affine forms of the auxiliary coefficients in the ``k - 1`` free parameters."""
    d = k - 1
    forms = []
    for j in range(d):
        forms.append(tuple(Fraction(int(t == j)) for t in range(d)) + (Fraction(0),))
    forms.append(tuple(Fraction(-1) for _ in range(d)) + (Fraction(1),))
    return forms


def evaluate(form: Form, point: Sequence[Fraction]) -> Fraction:
    return sum((c * x for c, x in zip(form, point)), form[-1])


def _scale(form: Form, a: Fraction) -> Form:
    return tuple(a * c for c in form)


def _add(a: Form, b: Form) -> Form:
    return tuple(x + y for x, y in zip(a, b))


def _zero(d: int) -> Form:
    return (Fraction(0),) * (d + 1)


def row_le(lhs: Form, rhs: Form, tag: Tag) -> Row:
    """Row for ``lhs(P) <= rhs(P)``."""
    d = len(lhs) - 1
    return le(tuple(lhs[t] - rhs[t] for t in range(d)), rhs[d] - lhs[d], tag)


def simplex_rows(k: int, offset: int = 0, width: int | None = None) -> list[Row]:
    """Ordered-simplex rows ``p1 >= ... >= pk >= 0`` over ``k - 1`` parameters.

    ``offset``/``width`` embed the parameters into a larger variable vector.
    """
    d = k - 1
    width = d if width is None else width
    rows = []

    def vec(entries: dict[int, int]) -> tuple[Fraction, ...]:
        return tuple(Fraction(entries.get(t - offset, 0)) if offset <= t < offset + d else Fraction(0)
                     for t in range(width))

    for j in range(d - 1):
        rows.append(le(vec({j + 1: 1, j: -1}), 0, Tag("simplex", j + 1)))
    if d >= 1:
        coeff = {t: -1 for t in range(d)}
        coeff[d - 1] = -2
        rows.append(le(vec(coeff), -1, Tag("simplex", d)))
        rows.append(le(vec({t: 1 for t in range(d)}), 1, Tag("simplex", k)))
    return rows


def chi_of(point: Sequence) -> Spectrum:
    """Auxiliary spectrum ``(p1, ..., p_{k-1}, 1 - sum P)`` for a parameter vector."""
    vals = tuple(Fraction(x) for x in point)
    return Spectrum(vals + (1 - sum(vals),))


def params_of(chi: Spectrum) -> Point:
    return tuple(chi.values[:-1])


def product_forms(alpha: Spectrum, k: int) -> dict[Cell, Form]:
    cf = chi_forms(k)
    return {(i, j): _scale(cf[j], a) for i, a in enumerate(alpha.values) for j in range(k)}


# --------------------------------------------------------------------------
# orderings


@dataclass(frozen=True)
class Ordering:
    """Positions of the product coefficients ``alpha_i * p_j``, largest first.

    ``pairs[t]`` is the 0-based grid cell ``(i, j)`` sitting at position ``t``.
    Valid orderings are linear extensions of the ``n x k`` grid poset.
    """

    n: int
    k: int
    pairs: tuple[Cell, ...]

    def __post_init__(self):
        pairs = tuple((int(i), int(j)) for i, j in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        expected = {(i, j) for i in range(self.n) for j in range(self.k)}
        if len(pairs) != len(expected) or set(pairs) != expected:
            raise InvalidOrdering(f"not a permutation of the {self.n}x{self.k} grid")
        pos = {c: t for t, c in enumerate(pairs)}
        for (i, j), t in pos.items():
            if i + 1 < self.n and pos[(i + 1, j)] < t:
                raise InvalidOrdering(f"({i + 1}, {j}) placed before ({i}, {j})")
            if j + 1 < self.k and pos[(i, j + 1)] < t:
                raise InvalidOrdering(f"({i}, {j + 1}) placed before ({i}, {j})")

    def __len__(self) -> int:
        return len(self.pairs)

    def position(self, i: int, j: int) -> int:
        return self.pairs.index((i, j))

    def prefix(self, m: int) -> frozenset:
        return frozenset(self.pairs[:m])

    def __str__(self) -> str:
        return " ".join(f"{i + 1}{j + 1}" for i, j in self.pairs)


def hook_length_count(n: int, k: int) -> int:
    """Number of standard Young tableaux of rectangular shape ``n x k``."""
    hooks = 1
    for i in range(n):
        for j in range(k):
            hooks *= (n - i) + (k - j) - 1
    return math.factorial(n * k) // hooks


def _check_cap(n: int, k: int, cap: int) -> None:
    if n * k > cap:
        raise TooLarge(f"n*k = {n * k} exceeds the cap of {cap}")


def _available(counts: list[int], k: int) -> list[Cell]:
    return [(i, c) for i, c in enumerate(counts) if c < k and (i == 0 or counts[i - 1] > c)]


def iter_orderings(n: int, k: int) -> Iterator[Ordering]:
    counts = [0] * n
    placed: list[Cell] = []

    def rec():
        if len(placed) == n * k:
            yield Ordering(n, k, tuple(placed))
            return
        for i, j in _available(counts, k):
            counts[i] += 1
            placed.append((i, j))
            yield from rec()
            placed.pop()
            counts[i] -= 1

    yield from rec()


def enumerate_orderings(n: int, k: int, cap: int = DEFAULT_CAP) -> list[Ordering]:
    """All linear extensions of the ``n x k`` grid poset."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    _check_cap(n, k, cap)
    return list(iter_orderings(n, k))


def realized_ordering(alpha: Spectrum, point: Sequence[Fraction]) -> Ordering:
    """Ordering of ``alpha ⊗ chi(P)``; ties go to the smaller grid index."""
    chi = chi_of(point)
    cells = [(i, j) for i in range(alpha.dim) for j in range(chi.dim)]
    cells.sort(key=lambda c: (-alpha[c[0]] * chi[c[1]], c))
    return Ordering(alpha.dim, chi.dim, tuple(cells))


def ordering_rows(alpha: Spectrum, order: Ordering, side: str) -> list[Row]:
    forms = product_forms(alpha, order.k)
    return [row_le(forms[order.pairs[t + 1]], forms[order.pairs[t]], Tag("ordering", t + 1, side))
            for t in range(len(order) - 1)]


def realizable_orderings(alpha: Spectrum, k: int, cap: int = DEFAULT_CAP) -> list[Ordering]:
    """Orderings of ``alpha ⊗ chi(P)`` attained at some point of the ordered simplex.

    Depth-first over linear extensions with an exact feasibility check at each
    node. Among available cells whose affine forms coincide only the first is
    branched on, so tie-degenerate duplicates are never produced.
    """
    n = alpha.dim
    _check_cap(n, k, cap)
    d = k - 1
    forms = product_forms(alpha, k)
    base = simplex_rows(k)
    counts = [0] * n
    placed: list[Cell] = []
    out: list[Ordering] = []

    def rec(rows: list[Row]):
        if len(placed) == n * k:
            out.append(Ordering(n, k, tuple(placed)))
            return
        avail = _available(counts, k)
        seen = set()
        for cell in avail:
            f = forms[cell]
            if f in seen:
                continue
            seen.add(f)
            extra = [row_le(forms[a], f, Tag("ordering", len(placed) + 1, "probe"))
                     for a in avail if a != cell]
            if placed:
                extra.append(row_le(f, forms[placed[-1]], Tag("ordering", len(placed), "source")))
            extra = [r for r in extra if r.canonical() is not None]
            new_rows = rows + extra
            if extra and not feasibility(HalfspaceSystem(d, tuple(new_rows))).feasible:
                continue
            counts[cell[0]] += 1
            placed.append(cell)
            rec(new_rows)
            placed.pop()
            counts[cell[0]] -= 1

    if feasibility(HalfspaceSystem(d, tuple(base))).feasible:
        rec(list(base))
    return out


# --------------------------------------------------------------------------
# down-sets: the possible top-m subsets of a product spectrum


@dataclass(frozen=True)
class DownSet:
    """Young-diagram subset of the grid, stored as column heights (non-increasing)."""

    heights: tuple[int, ...]

    @property
    def size(self) -> int:
        return sum(self.heights)

    def cells(self) -> frozenset:
        return frozenset((i, j) for j, h in enumerate(self.heights) for i in range(h))

    def contains(self, other: "DownSet") -> bool:
        return all(a >= b for a, b in zip(self.heights, other.heights))


def down_sets(n: int, k: int) -> dict[int, list[DownSet]]:
    by_size: dict[int, list[DownSet]] = {}

    def rec(prefix: list[int], bound: int):
        if len(prefix) == k:
            ds = DownSet(tuple(prefix))
            by_size.setdefault(ds.size, []).append(ds)
            return
        for h in range(bound, -1, -1):
            prefix.append(h)
            rec(prefix, h)
            prefix.pop()

    rec([], n)
    return by_size


def down_set_form(alpha: Spectrum, ds: DownSet) -> Form:
    cf = chi_forms(len(ds.heights))
    d = len(ds.heights) - 1
    prefix = [Fraction(0)]
    for a in alpha.values:
        prefix.append(prefix[-1] + a)
    total = _zero(d)
    for j, h in enumerate(ds.heights):
        if h:
            total = _add(total, _scale(cf[j], prefix[h]))
    return total


def top_down_set(alpha: Spectrum, point: Sequence[Fraction], m: int) -> DownSet:
    order = realized_ordering(alpha, point)
    heights = [0] * order.k
    for i, j in order.pairs[:m]:
        heights[j] += 1
    return DownSet(tuple(heights))


# --------------------------------------------------------------------------
# OPMP objects


@dataclass(frozen=True)
class Opmp:
    """A cell of the catalytic set of ``(psi, phi)`` at auxiliary dimension ``k``.

    ``fixed_prefixes`` maps each prefix length whose top subset is pinned
    inside the cell to that subset. Atomic cells pin every prefix.
    """

    psi: Spectrum
    phi: Spectrum
    k: int
    source_ordering: Ordering
    target_ordering: Ordering
    polyhedron: Polyhedron
    vertex_entropies: tuple[EntropyInterval, ...] | None = None
    fixed_prefixes: tuple[tuple[int, DownSet], ...] = field(default=())

    @property
    def dim(self) -> int:
        return self.polyhedron.dim

    @property
    def vertices(self):
        return self.polyhedron.vertices

    def interval(self) -> tuple[Fraction, Fraction]:
        return self.polyhedron.interval()

    def contains(self, point: Sequence) -> bool:
        return self.polyhedron.system.holds([Fraction(x) for x in point])

    def sample_catalyst(self) -> Spectrum:
        return chi_of(self.polyhedron.interior_point)


def _vertex_entropies(poly: Polyhedron) -> tuple[EntropyInterval, ...] | None:
    if poly.vertices is None:
        return None
    ents = [entropy(chi_of(v)) for v in poly.vertices]
    return tuple(sorted(ents, key=lambda e: e.lower, reverse=True))


def _padded(psi: Spectrum, phi: Spectrum) -> tuple[Spectrum, Spectrum]:
    return pad_pair(psi, phi)


def majorization_rows(psi: Spectrum, phi: Spectrum, src: Ordering, tgt: Ordering) -> list[Row]:
    fa = product_forms(psi, src.k)
    fb = product_forms(phi, tgt.k)
    d = src.k - 1
    rows = []
    sa = sb = _zero(d)
    for m in range(1, len(src)):
        sa = _add(sa, fa[src.pairs[m - 1]])
        sb = _add(sb, fb[tgt.pairs[m - 1]])
        rows.append(row_le(sa, sb, Tag("majorization", m)))
    return rows


def build_opmp(psi: Spectrum, phi: Spectrum, k: int, src: Ordering, tgt: Ordering) -> Opmp:
    """Atomic OPMP: both orderings fully fixed."""
    psi, phi = _padded(psi, phi)
    n = psi.dim
    for o in (src, tgt):
        if (o.n, o.k) != (n, k):
            raise InvalidOrdering(f"ordering is for a {o.n}x{o.k} grid, expected {n}x{k}")
    rows = (simplex_rows(k) + ordering_rows(psi, src, "source") + ordering_rows(phi, tgt, "target")
            + majorization_rows(psi, phi, src, tgt))
    poly = polyhedron(HalfspaceSystem(k - 1, tuple(rows)))
    fixed = tuple((m, _heights_of(src, m)) for m in range(1, n * k))
    return Opmp(psi, phi, k, src, tgt, poly, _vertex_entropies(poly), fixed)


def _heights_of(order: Ordering, m: int) -> DownSet:
    heights = [0] * order.k
    for _, j in order.pairs[:m]:
        heights[j] += 1
    return DownSet(tuple(heights))


# --------------------------------------------------------------------------
# coalesced enumeration


def _target_system(psi: Spectrum, phi: Spectrum, k: int, tgt: Ordering, downs) -> list[Row]:
    """Catalytic set restricted to one target ordering: simplex + target order + down-set rows."""
    d = k - 1
    fb = product_forms(phi, k)
    rows = simplex_rows(k) + ordering_rows(phi, tgt, "target")
    tb = _zero(d)
    for m in range(1, psi.dim * k):
        tb = _add(tb, fb[tgt.pairs[m - 1]])
        for ds in downs[m]:
            rows.append(row_le(down_set_form(psi, ds), tb, Tag("majorization", m)))
    return rows


def _dedupe(rows: list[Row]) -> list[Row]:
    seen = set()
    out = []
    for r in rows:
        c = r.canonical()
        if c is None or c in seen:
            continue
        seen.add(c)
        out.append(r)
    return out


def _relevant_prefixes(rows: list[Row], d: int) -> list[int]:
    """Prefix lengths owning at least one row that is not implied by the others."""
    relevant = set()
    for idx, r in enumerate(rows):
        if r.tag.kind != "majorization" or r.tag.index in relevant:
            continue
        others = HalfspaceSystem(d, tuple(rows[:idx] + rows[idx + 1:]))
        res = lp.maximize(r.coeffs, *others.lp_form())
        if res.status == lp.UNBOUNDED or (res.status == lp.OPTIMAL and res.value > r.rhs):
            relevant.add(r.tag.index)
    return sorted(relevant)


def _cells_for_target(args) -> list[tuple[Ordering, tuple, HalfspaceSystem]]:
    psi, phi, k, tgt = args
    d = k - 1
    downs = down_sets(psi.dim, k)
    base = _dedupe(_target_system(psi, phi, k, tgt, downs))
    if not feasibility(HalfspaceSystem(d, tuple(base))).feasible:
        return []
    relevant = _relevant_prefixes(base, d)
    forms = {ds: down_set_form(psi, ds) for size in downs.values() for ds in size}
    out = []

    def rec(level: int, rows: list[Row], chain: list[tuple[int, DownSet]]):
        if level == len(relevant):
            out.append((tgt, tuple(chain), HalfspaceSystem(d, tuple(rows))))
            return
        m = relevant[level]
        prev = chain[-1][1] if chain else None
        for ds in downs[m]:
            if prev is not None and not ds.contains(prev):
                continue
            extra = _dedupe([row_le(forms[o], forms[ds], Tag("ordering", m, "source"))
                             for o in downs[m] if o != ds])
            new_rows = rows + extra
            if extra and not feasibility(HalfspaceSystem(d, tuple(new_rows))).feasible:
                continue
            rec(level + 1, new_rows, chain + [(m, ds)])

    rec(0, base, [])
    return out


def _vertex_key(poly: Polyhedron):
    if poly.vertices is not None:
        return ("v", frozenset(poly.vertices))
    return ("h", poly.system.canonical_key())


def _covered(small: Polyhedron, big: Polyhedron) -> bool:
    if small.vertices is None:
        return False
    return all(big.system.holds(v) for v in small.vertices)


def enumerate_opmps(psi: Spectrum, phi: Spectrum, k: int, cap: int = DEFAULT_CAP,
                    coalesce: bool = True, workers: int = 1) -> list[Opmp]:
    """Non-empty OPMPs whose union is exactly the set of ``k``-dimensional catalysts.

    With ``coalesce=False`` every realizable pair of complete orderings is
    tried and atomic cells are returned. Results are deduplicated by vertex
    set (or canonical rows above the vertex-enumeration dimension), and
    lower-dimensional cells lying inside another cell are dropped.
    """
    psi, phi = _padded(psi, phi)
    n = psi.dim
    if k < 1:
        raise ValueError("k must be positive")
    _check_cap(n, k, cap)
    targets = realizable_orderings(phi, k, cap)
    if coalesce:
        jobs = [(psi, phi, k, t) for t in targets]
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=workers) as ex:
                parts = list(ex.map(_cells_for_target, jobs))
        else:
            parts = [_cells_for_target(j) for j in jobs]
        raw = []
        for part in parts:
            for tgt, chain, system in part:
                poly = polyhedron(system)
                if not poly.feasible:
                    continue
                src = realized_ordering(psi, poly.interior_point)
                raw.append(Opmp(psi, phi, k, src, tgt, poly, _vertex_entropies(poly), chain))
    else:
        sources = realizable_orderings(psi, k, cap)
        raw = []
        for s in sources:
            for t in targets:
                o = build_opmp(psi, phi, k, s, t)
                if o.polyhedron.feasible:
                    raw.append(o)
    return _merge(raw)


def _merge(raw: list[Opmp]) -> list[Opmp]:
    unique: dict = {}
    for o in raw:
        unique.setdefault(_vertex_key(o.polyhedron), o)
    cells = list(unique.values())
    kept = []
    for o in cells:
        if any(other is not o and other.dim > o.dim and _covered(o.polyhedron, other.polyhedron)
               for other in cells):
            continue
        kept.append(o)
    kept.sort(key=_sort_key)
    return kept


def _sort_key(o: Opmp):
    if o.vertices is not None:
        return (0, min(o.vertices), -o.dim)
    return (1, o.polyhedron.interior_point or (), -o.dim)


def in_union(opmps: Sequence[Opmp], point: Sequence) -> bool:
    return any(o.contains(point) for o in opmps)


@dataclass(frozen=True)
class Catalyzability:
    catalyzable: bool
    witness: Spectrum | None = None
    effective_dim: int | None = None

    @property
    def degenerate(self) -> bool:
        """Witness has trailing zeros, i.e. is really a smaller-dimensional state."""
        return self.witness is not None and self.effective_dim < self.witness.dim


def is_catalyzable(psi: Spectrum, phi: Spectrum, k: int, cap: int = DEFAULT_CAP) -> Catalyzability:
    """Does some ``k``-dimensional auxiliary state catalyze ``psi -> phi``?"""
    if compare(psi, phi) is not Comparability.INCOMPARABLE:
        raise NotIncomparable("catalysis is only meaningful for an incomparable pair")
    cells = enumerate_opmps(psi, phi, k, cap)
    if not cells:
        return Catalyzability(False)
    # widest cell first, so the witness is an interior (generic) catalyst
    w = max(cells, key=lambda o: o.dim).sample_catalyst()
    return Catalyzability(True, w, len(w.support()))
