"""Brute-force grid scans used to cross-check the polyhedral machinery.

Grid points have denominator ``r`` and are exact, so a hit is a proof at that
point. Everything is scaled to integers before sorting, which keeps the inner
loops cheap.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from typing import Iterator

from .errors import IndistinguishableEntropy, TooLarge
from .rational import Cmp, Spectrum, entropy, entropy_compare, pad_pair
from .opmp import chi_of

DEFAULT_WORK_CAP = 10 ** 8

Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class GridSpec:
    k: int
    resolution: int

    def __post_init__(self):
        if self.k < 1 or self.resolution < 1:
            raise ValueError("k and resolution must be positive")

    def integer_points(self) -> Iterator[tuple[int, ...]]:
        """Non-increasing ``k``-tuples of non-negative integers summing to ``r``."""
        k, r = self.k, self.resolution

        def rec(prefix: list[int], remaining: int, bound: int):
            slots = k - len(prefix)
            if slots == 1:
                if remaining <= bound:
                    yield tuple(prefix) + (remaining,)
                return
            lo = -(-remaining // slots)
            for v in range(min(bound, remaining), lo - 1, -1):
                prefix.append(v)
                yield from rec(prefix, remaining - v, v)
                prefix.pop()

        yield from rec([], r, r)

    def points(self) -> list[Point]:
        r = self.resolution
        return [tuple(Fraction(v, r) for v in c[:-1]) for c in self.integer_points()]

    def size(self) -> int:
        return sum(1 for _ in self.integer_points())


def _scaled(psi: Spectrum, phi: Spectrum) -> tuple[list[int], list[int]]:
    lcm = 1
    for v in psi.values + phi.values:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    return [int(v * lcm) for v in psi.values], [int(v * lcm) for v in phi.values]


def _prefixes(a: list[int], c: tuple[int, ...]) -> list[int]:
    return list(accumulate(sorted((x * y for x in a for y in c), reverse=True)))


def _check_work(work: int, cap: int) -> None:
    if work > cap:
        raise TooLarge(f"scan needs about {work} operations, cap is {cap}")


def scan_catalysts(psi: Spectrum, phi: Spectrum, grid: GridSpec,
                   work_cap: int = DEFAULT_WORK_CAP) -> list[Point]:
    """Grid points ``P`` with ``psi ⊗ chi(P) ≺ phi ⊗ chi(P)``."""
    psi, phi = pad_pair(psi, phi)
    pts = list(grid.integer_points())
    _check_work(len(pts) * psi.dim * grid.k, work_cap)
    a, b = _scaled(psi, phi)
    r = grid.resolution
    out = []
    for c in pts:
        sa, sb = _prefixes(a, c), _prefixes(b, c)
        if all(x <= y for x, y in zip(sa, sb)):
            out.append(tuple(Fraction(v, r) for v in c[:-1]))
    return out


def _pairs_chunk(args) -> list[tuple[int, int]]:
    lo, hi, src, tgt, first_a, first_b, order = args
    hits = []
    for i in range(lo, hi):
        s = src[i]
        for j in order[i]:
            if first_a[i] > first_b[j]:
                continue
            t = tgt[j]
            if all(x <= y for x, y in zip(s, t)):
                hits.append((i, j))
    return hits


def scan_supercatalysts(psi: Spectrum, phi: Spectrum, grid: GridSpec,
                        work_cap: int = DEFAULT_WORK_CAP, workers: int = 1) -> list[tuple[Point, Point]]:
    """Grid pairs ``(P1, P2)`` with ``psi ⊗ chi(P1) ≺ phi ⊗ chi(P2)`` and ``E(chi(P2)) > E(chi(P1))``.

    Pairs failing the first prefix inequality ``alpha_1 p_1 <= beta_1 q_1``
    are discarded before the full comparison.
    """
    psi, phi = pad_pair(psi, phi)
    pts = list(grid.integer_points())
    npts = len(pts)
    _check_work(npts * npts * psi.dim * grid.k, work_cap)
    a, b = _scaled(psi, phi)
    r = grid.resolution
    src = [_prefixes(a, c) for c in pts]
    tgt = [_prefixes(b, c) for c in pts]
    first_a = [a[0] * c[0] for c in pts]
    first_b = [b[0] * c[0] for c in pts]
    spectra = [chi_of(tuple(Fraction(v, r) for v in c[:-1])) for c in pts]
    ents = [entropy(s) for s in spectra]

    def more_entangled(j: int, i: int) -> bool:
        if ents[j].lower > ents[i].upper:
            return True
        if ents[j].upper < ents[i].lower or i == j:
            return False
        res = entropy_compare(spectra[j], spectra[i])
        if res is Cmp.INDISTINGUISHABLE:
            raise IndistinguishableEntropy(f"grid points {spectra[i]} and {spectra[j]}")
        return res is Cmp.GREATER

    order = [[j for j in range(npts) if more_entangled(j, i)] for i in range(npts)]
    chunk = max(1, npts // max(1, workers))
    jobs = [(lo, min(npts, lo + chunk), src, tgt, first_a, first_b, order) for lo in range(0, npts, chunk)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_pairs_chunk, jobs))
    else:
        parts = [_pairs_chunk(j) for j in jobs]
    to_point = [tuple(Fraction(v, r) for v in c[:-1]) for c in pts]
    return [(to_point[i], to_point[j]) for part in parts for i, j in part]
