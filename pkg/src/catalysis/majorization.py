"""Nielsen's majorization criterion and certificate checks built on it."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate

from .errors import DimensionMismatch, IndistinguishableEntropy
from .rational import (
    DEFAULT_MAX_PRECISION_BITS,
    Cmp,
    Spectrum,
    entropy_compare,
    pad_pair,
    tensor,
)


@dataclass(frozen=True)
class TransformReport:
    """Prefix-sum trace of a majorization query ``source ≺ target``.

    Indices ``m`` are 1-based prefix lengths, matching the usual statement of
    the criterion for ``m = 1..n-1``.
    """

    result: bool
    prefix_sums_source: tuple[Fraction, ...]
    prefix_sums_target: tuple[Fraction, ...]
    failing_index: int | None
    tight_indices: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.prefix_sums_source)

    def slack(self, m: int) -> Fraction:
        return self.prefix_sums_target[m - 1] - self.prefix_sums_source[m - 1]


class Comparability(enum.Enum):
    SOURCE_TO_TARGET = "SourceToTarget"
    TARGET_TO_SOURCE = "TargetToSource"
    EQUIVALENT = "Equivalent"
    INCOMPARABLE = "Incomparable"


def majorizes(source: Spectrum, target: Spectrum) -> TransformReport:
    """Decide ``source ≺ target``, i.e. whether ``source -> target`` under LOCC.

    Both spectra must have the same length; pad explicitly with
    :meth:`Spectrum.pad_to` when comparing different dimensions.
    """
    if source.dim != target.dim:
        raise DimensionMismatch(f"dimensions differ: {source.dim} vs {target.dim}")
    ps = tuple(accumulate(source.values))
    pt = tuple(accumulate(target.values))
    failing = None
    tight = []
    for m in range(1, source.dim):
        a, b = ps[m - 1], pt[m - 1]
        if a > b and failing is None:
            failing = m
        elif a == b:
            tight.append(m)
    return TransformReport(failing is None, ps, pt, failing, tuple(tight))


def compare(a: Spectrum, b: Spectrum) -> Comparability:
    a, b = pad_pair(a, b)
    if a.values == b.values:
        return Comparability.EQUIVALENT
    if majorizes(a, b).result:
        return Comparability.SOURCE_TO_TARGET
    if majorizes(b, a).result:
        return Comparability.TARGET_TO_SOURCE
    return Comparability.INCOMPARABLE


def _product_pair(psi: Spectrum, chi: Spectrum, phi: Spectrum, omega: Spectrum):
    psi, phi = pad_pair(psi, phi)
    return tensor(psi, chi), tensor(phi, omega)


def verify_catalysis(psi: Spectrum, phi: Spectrum, chi: Spectrum) -> TransformReport:
    """Check ``psi ⊗ chi -> phi ⊗ chi``; cost is one sort of ``n*k`` products."""
    return majorizes(*_product_pair(psi, chi, phi, chi))


@dataclass(frozen=True)
class SupercatalysisCheck:
    valid: bool
    report: TransformReport
    entropy_gain_sign: Cmp

    @property
    def reason(self) -> str:
        if self.valid:
            return "ok"
        if not self.report.result:
            return f"majorization fails at prefix m={self.report.failing_index}"
        return "entropy gain not strict"


def verify_supercatalysis(psi: Spectrum, phi: Spectrum, chi: Spectrum, omega: Spectrum,
                          max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> SupercatalysisCheck:
    """Check ``psi ⊗ chi -> phi ⊗ omega`` together with ``E(omega) > E(chi)``."""
    if chi.dim != omega.dim:
        raise DimensionMismatch(f"auxiliary dimensions differ: {chi.dim} vs {omega.dim}")
    report = majorizes(*_product_pair(psi, chi, phi, omega))
    gain = entropy_compare(omega, chi, max_precision_bits)
    if gain is Cmp.INDISTINGUISHABLE and report.result:
        raise IndistinguishableEntropy(
            f"E(omega) and E(chi) not separated at {max_precision_bits} bits")
    return SupercatalysisCheck(report.result and gain is Cmp.GREATER, report, gain)


@dataclass(frozen=True)
class NoGo:
    forbids_2x2: bool
    forbids_3x3: bool
    reason: str = ""


def nogo_check(psi: Spectrum, phi: Spectrum) -> NoGo:
    """Extreme-coefficient obstructions to supercatalysis with small auxiliaries."""
    if psi.dim != phi.dim:
        raise DimensionMismatch(f"dimensions differ: {psi.dim} vs {phi.dim}")
    first = psi[0] == phi[0]
    last = psi[-1] == phi[-1]
    reason = " and ".join(r for r, hit in (("α1 = β1", first), ("αn = βn", last)) if hit)
    return NoGo(first or last, first and last, reason)


@dataclass(frozen=True)
class CatalystInheritance:
    omega_to_chi: bool
    both_catalysts: tuple[bool, bool] | None


def check_proposition1(psi: Spectrum, phi: Spectrum, chi: Spectrum, omega: Spectrum) -> CatalystInheritance:
    """If ``omega -> chi``, both auxiliary states must also be plain catalysts."""
    if chi.dim != omega.dim:
        raise DimensionMismatch(f"auxiliary dimensions differ: {chi.dim} vs {omega.dim}")
    if psi.dim != phi.dim:
        raise DimensionMismatch(f"dimensions differ: {psi.dim} vs {phi.dim}")
    down = majorizes(omega, chi).result
    if not down:
        return CatalystInheritance(False, None)
    return CatalystInheritance(True, (verify_catalysis(psi, phi, chi).result,
                                     verify_catalysis(psi, phi, omega).result))
