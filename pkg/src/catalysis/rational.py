"""Exact Schmidt spectra, tensor products and certified entanglement entropy.

Scalars are :class:`fractions.Fraction` throughout. Entropy is irrational, so it
is only ever returned as a certified :class:`EntropyInterval` whose Decimal
endpoints bracket the true value.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import NegativeEntry, NotNormalized

DEFAULT_PRECISION_BITS = 128
DEFAULT_MAX_PRECISION_BITS = 1024


def parse_rational(value) -> Fraction:
    """Convert ``value`` to an exact Fraction.

    Strings may be decimals (``"0.36"``), fractions (``"10/19"``) or integers.
    Floats are read through their shortest repr, so ``0.36`` becomes ``9/25``
    rather than its binary expansion.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational string")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse {value!r} as an exact rational") from exc
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


@dataclass(frozen=True)
class Spectrum:
    """Descending probability vector of Schmidt coefficients.

    Use :func:`make_spectrum` to build one from unsorted input.
    """

    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(parse_rational(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise NotNormalized("spectrum must have at least one entry")
        for v in vals:
            if v < 0:
                raise NegativeEntry(f"negative Schmidt coefficient {v}")
        if sum(vals) != 1:
            raise NotNormalized(f"entries sum to {sum(vals)}, not 1")
        if any(vals[i] < vals[i + 1] for i in range(len(vals) - 1)):
            raise ValueError("Spectrum values must be sorted descending; use make_spectrum")

    @property
    def dim(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def pad_to(self, n: int) -> "Spectrum":
        """Append exact zeros up to length ``n``."""
        if n < self.dim:
            raise ValueError(f"cannot pad a {self.dim}-dim spectrum down to {n}")
        if n == self.dim:
            return self
        return Spectrum(self.values + (Fraction(0),) * (n - self.dim))

    def support(self) -> tuple[Fraction, ...]:
        return tuple(v for v in self.values if v)

    def is_uniform(self) -> bool:
        return all(v == self.values[0] for v in self.values)

    def __str__(self) -> str:
        return "(" + ", ".join(str(v) for v in self.values) + ")"


def make_spectrum(values: Iterable) -> Spectrum:
    """Canonicalize a list of rationals into a descending :class:`Spectrum`."""
    vals = [parse_rational(v) for v in values]
    if not vals:
        raise NotNormalized("spectrum must have at least one entry")
    for v in vals:
        if v < 0:
            raise NegativeEntry(f"negative Schmidt coefficient {v}")
    total = sum(vals)
    if total != 1:
        raise NotNormalized(f"entries sum to {total}, not 1")
    return Spectrum(tuple(sorted(vals, reverse=True)))


def uniform(n: int) -> Spectrum:
    return Spectrum((Fraction(1, n),) * n)


def tensor(a: Spectrum, b: Spectrum) -> Spectrum:
    """Spectrum of the product state: all pairwise products, sorted."""
    return Spectrum(tuple(sorted((x * y for x in a.values for y in b.values), reverse=True)))


def pad_pair(a: Spectrum, b: Spectrum) -> tuple[Spectrum, Spectrum]:
    n = max(a.dim, b.dim)
    return a.pad_to(n), b.pad_to(n)


# --------------------------------------------------------------------------
# certified entropy


@dataclass(frozen=True)
class EntropyInterval:
    """Closed interval ``[lower, upper]`` (nats) certified to contain a value."""

    lower: Decimal
    upper: Decimal
    precision_bits: int

    @property
    def width(self) -> Decimal:
        return _ctx(self.precision_bits, ROUND_CEILING).subtract(self.upper, self.lower)

    @property
    def midpoint(self) -> Decimal:
        ctx = _ctx(self.precision_bits)
        return ctx.divide(ctx.add(self.lower, self.upper), 2)

    def contains(self, x) -> bool:
        q = x if isinstance(x, Fraction) else Fraction(Decimal(str(x)) if isinstance(x, float) else x)
        return Fraction(self.lower) <= q <= Fraction(self.upper)

    def __sub__(self, other: "EntropyInterval") -> "EntropyInterval":
        bits = min(self.precision_bits, other.precision_bits)
        lo = Fraction(self.lower) - Fraction(other.upper)
        hi = Fraction(self.upper) - Fraction(other.lower)
        return EntropyInterval(_round_down(lo, bits), _round_up(hi, bits), bits)

    def __add__(self, other: "EntropyInterval") -> "EntropyInterval":
        bits = min(self.precision_bits, other.precision_bits)
        lo = Fraction(self.lower) + Fraction(other.lower)
        hi = Fraction(self.upper) + Fraction(other.upper)
        return EntropyInterval(_round_down(lo, bits), _round_up(hi, bits), bits)

    def __float__(self) -> float:
        return float(self.midpoint)

    def to_bits(self) -> "EntropyInterval":
        """Same enclosure in bits (log base 2); display only."""
        ln2_lo, ln2_hi = _ln2_bounds(self.precision_bits)
        lo = Fraction(self.lower) / ln2_hi if self.lower >= 0 else Fraction(self.lower) / ln2_lo
        hi = Fraction(self.upper) / ln2_lo if self.upper >= 0 else Fraction(self.upper) / ln2_hi
        return EntropyInterval(_round_down(lo, self.precision_bits), _round_up(hi, self.precision_bits),
                               self.precision_bits)

    def __str__(self) -> str:
        return f"[{_short(self.lower)}, {_short(self.upper)}]"


def _digits(bits: int) -> int:
    return math.ceil(bits * math.log10(2)) + 3


def _ctx(bits: int, rounding=None) -> Context:
    if rounding is None:
        return Context(prec=_digits(bits) + 5)
    return Context(prec=_digits(bits) + 5, rounding=rounding)


def _round_down(q: Fraction, bits: int) -> Decimal:
    return _ctx(bits, ROUND_FLOOR).divide(Decimal(q.numerator), Decimal(q.denominator))


def _round_up(q: Fraction, bits: int) -> Decimal:
    return _ctx(bits, ROUND_CEILING).divide(Decimal(q.numerator), Decimal(q.denominator))


def _short(d: Decimal, places: int = 12) -> str:
    return f"{d:.{places}f}"


@lru_cache(maxsize=64)
def _ln2_bounds(bits: int) -> tuple[Fraction, Fraction]:
    prec = _digits(bits)
    ln2 = Context(prec=prec).ln(Decimal(2))
    pad = Fraction(1, 10 ** (prec - 1))
    return Fraction(ln2) - pad, Fraction(ln2) + pad


@lru_cache(maxsize=65536)
def _term_bounds(x: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Enclosure of ``-x ln x``.

    Each Decimal operation is correctly rounded to ``prec`` digits, so the
    accumulated error is below ``3 * 10**(1 - prec) / 2``; the pad of
    ``10**(2 - prec)`` covers it with room to spare.
    """
    if x == 0 or x == 1:
        return Fraction(0), Fraction(0)
    prec = _digits(bits)
    ctx = Context(prec=prec)
    xd = ctx.divide(Decimal(x.numerator), Decimal(x.denominator))
    term = -Fraction(ctx.multiply(xd, ctx.ln(xd)))
    pad = Fraction(1, 10 ** (prec - 2))
    return max(Fraction(0), term - pad), term + pad


def entropy(s: Spectrum | Sequence, precision_bits: int = DEFAULT_PRECISION_BITS) -> EntropyInterval:
    """Certified enclosure of the entropy of entanglement ``-sum s_i ln s_i``.

    The interval width is at most ``2**(1 - precision_bits) * n``.
    """
    if precision_bits < 16:
        raise ValueError("precision_bits must be at least 16")
    values = s.values if isinstance(s, Spectrum) else tuple(parse_rational(v) for v in s)
    lo = Fraction(0)
    hi = Fraction(0)
    for x in values:
        a, b = _term_bounds(x, precision_bits)
        lo += a
        hi += b
    return EntropyInterval(_round_down(lo, precision_bits), _round_up(hi, precision_bits), precision_bits)


class Cmp(enum.Enum):
    LESS = "Less"
    GREATER = "Greater"
    EQUAL = "Equal"
    INDISTINGUISHABLE = "Indistinguishable"


def same_multiset(a: Spectrum, b: Spectrum) -> bool:
    """Equal as multisets once zero entries are ignored (zeros carry no entropy)."""
    return a.support() == b.support()


def separate(a: Spectrum, b: Spectrum, max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS,
             start_bits: int = DEFAULT_PRECISION_BITS):
    """Refine precision until the entropy intervals of ``a`` and ``b`` separate.

    Returns ``(Cmp, interval_a, interval_b)`` at the last precision tried.
    """
    bits = min(start_bits, max_precision_bits)
    if same_multiset(a, b):
        ea = entropy(a, bits)
        return Cmp.EQUAL, ea, ea
    while True:
        ea, eb = entropy(a, bits), entropy(b, bits)
        if ea.lower > eb.upper:
            return Cmp.GREATER, ea, eb
        if ea.upper < eb.lower:
            return Cmp.LESS, ea, eb
        if bits >= max_precision_bits:
            return Cmp.INDISTINGUISHABLE, ea, eb
        bits = min(2 * bits, max_precision_bits)


def entropy_compare(a: Spectrum, b: Spectrum, max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> Cmp:
    """Compare ``E(a)`` with ``E(b)``; ``GREATER`` means ``a`` is more entangled."""
    return separate(a, b, max_precision_bits)[0]
