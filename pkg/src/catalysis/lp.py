"""Exact rational linear programming.

Two-phase simplex in dictionary form with Bland's smallest-index rule, so it
terminates on degenerate problems. Variables are free; internally each is
split as ``x = x+ - x-``. The dictionary has one column per nonbasic variable
only, which keeps pivots cheap for the few-variable, many-row systems produced
by catalyst searches.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    point: tuple[Fraction, ...] | None = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


class _Dictionary:
    """``x_B[i] = rhs[i] - sum_j a[i][j] * x_N[j]``, objective ``z0 + sum_j obj[j] x_N[j]``."""

    def __init__(self, a, rhs, basic, nonbasic):
        self.a = a
        self.rhs = rhs
        self.basic = basic
        self.nonbasic = nonbasic
        self.obj = [_ZERO] * len(nonbasic)
        self.z0 = _ZERO

    def pivot(self, r: int, s: int) -> None:
        a, rhs, obj = self.a, self.rhs, self.obj
        row = a[r]
        piv = row[s]
        inv = 1 / piv
        new_row = [x * inv for x in row]
        new_row[s] = inv
        new_rhs = rhs[r] * inv
        for i, other in enumerate(a):
            if i == r:
                continue
            f = other[s]
            if not f:
                continue
            for j, x in enumerate(new_row):
                if x:
                    other[j] -= f * x
            other[s] = -f * inv
            rhs[i] -= f * new_rhs
        f = obj[s]
        if f:
            for j, x in enumerate(new_row):
                if x:
                    obj[j] -= f * x
            obj[s] = -f * inv
            self.z0 += f * new_rhs
        a[r] = new_row
        rhs[r] = new_rhs
        self.basic[r], self.nonbasic[s] = self.nonbasic[s], self.basic[r]

    def optimize(self) -> str:
        while True:
            s = None
            for j, c in enumerate(self.obj):
                if c > 0 and (s is None or self.nonbasic[j] < self.nonbasic[s]):
                    s = j
            if s is None:
                return OPTIMAL
            r = None
            best = None
            for i, row in enumerate(self.a):
                if row[s] > 0:
                    ratio = self.rhs[i] / row[s]
                    if best is None or ratio < best or (ratio == best and self.basic[i] < self.basic[r]):
                        r, best = i, ratio
            if r is None:
                return UNBOUNDED
            self.pivot(r, s)


def _as_fracs(seq) -> list[Fraction]:
    return [x if isinstance(x, Fraction) else Fraction(x) for x in seq]


def _interval_lp(c, A_ub, b_ub, A_eq, b_eq) -> LPResult:
    lo = hi = None
    for (a,), b in zip(A_ub, b_ub):
        if a > 0:
            v = b / a
            hi = v if hi is None or v < hi else hi
        elif a < 0:
            v = b / a
            lo = v if lo is None or v > lo else lo
        elif b < 0:
            return LPResult(INFEASIBLE)
    for (a,), b in zip(A_eq, b_eq):
        if a:
            v = b / a
            hi = v if hi is None or v < hi else hi
            lo = v if lo is None or v > lo else lo
        elif b:
            return LPResult(INFEASIBLE)
    if lo is not None and hi is not None and lo > hi:
        return LPResult(INFEASIBLE)
    (c0,) = c
    if c0 > 0:
        if hi is None:
            return LPResult(UNBOUNDED)
        x = hi
    elif c0 < 0:
        if lo is None:
            return LPResult(UNBOUNDED)
        x = lo
    else:
        x = lo if lo is not None else (hi if hi is not None else _ZERO)
    return LPResult(OPTIMAL, c0 * x, (x,))


def maximize(c: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
             A_eq: Sequence[Sequence] = (), b_eq: Sequence = ()) -> LPResult:
    """Maximize ``c·x`` subject to ``A_ub x <= b_ub`` and ``A_eq x = b_eq``, x free."""
    d = len(c)
    c = _as_fracs(c)
    A_ub = [_as_fracs(r) for r in A_ub]
    b_ub = _as_fracs(b_ub)
    A_eq = [_as_fracs(r) for r in A_eq]
    b_eq = _as_fracs(b_eq)
    if d == 0:
        if any(b < 0 for b in b_ub) or any(b != 0 for b in b_eq):
            return LPResult(INFEASIBLE)
        return LPResult(OPTIMAL, _ZERO, ())
    if d == 1:
        return _interval_lp(c, A_ub, b_ub, A_eq, b_eq)

    rows = A_ub + A_eq + [[-x for x in r] for r in A_eq]
    rhs = b_ub + b_eq + [-b for b in b_eq]
    m = len(rows)
    nv = 2 * d
    a = [list(r) + [-x for x in r] for r in rows]
    basic = list(range(nv, nv + m))
    nonbasic = list(range(nv))
    D = _Dictionary(a, list(rhs), basic, nonbasic)

    if m and min(rhs) < 0:
        aux = nv + m
        for row in D.a:
            row.append(Fraction(-1))
        D.nonbasic.append(aux)
        D.obj = [_ZERO] * nv + [Fraction(-1)]
        worst = min(range(m), key=lambda i: (D.rhs[i], D.basic[i]))
        D.pivot(worst, len(D.nonbasic) - 1)
        D.optimize()
        if D.z0 < 0:
            return LPResult(INFEASIBLE)
        if aux in D.basic:
            r = D.basic.index(aux)
            s = next((j for j, x in enumerate(D.a[r]) if x), None)
            if s is None:
                # aux is identically zero on this row: the row is redundant
                del D.a[r], D.rhs[r], D.basic[r]
            else:
                D.pivot(r, s)
        s = D.nonbasic.index(aux)
        for row in D.a:
            del row[s]
        del D.nonbasic[s]

    cost = c + [-x for x in c]
    pos = {v: i for i, v in enumerate(D.basic)}
    D.z0 = sum((cost[v] * D.rhs[pos[v]] for v in D.basic if v < nv), _ZERO)
    obj = []
    for j, v in enumerate(D.nonbasic):
        cj = cost[v] if v < nv else _ZERO
        for i, bv in enumerate(D.basic):
            if bv < nv and cost[bv]:
                cj -= cost[bv] * D.a[i][j]
        obj.append(cj)
    D.obj = obj
    status = D.optimize()
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    vals = [_ZERO] * nv
    for i, v in enumerate(D.basic):
        if v < nv:
            vals[v] = D.rhs[i]
    x = tuple(vals[i] - vals[i + d] for i in range(d))
    return LPResult(OPTIMAL, D.z0, x)


def minimize(c: Sequence, A_ub=(), b_ub=(), A_eq=(), b_eq=()) -> LPResult:
    res = maximize([-Fraction(x) for x in c], A_ub, b_ub, A_eq, b_eq)
    if res.status != OPTIMAL:
        return res
    return LPResult(OPTIMAL, -res.value, res.point)
