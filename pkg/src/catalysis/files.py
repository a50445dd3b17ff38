"""JSON file formats: state pairs and supercatalysis certificates.

Rationals are always JSON strings ("0.36" or "10/19"); JSON numbers are
rejected so that nothing passes through binary floating point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import CatalysisError
from .rational import Spectrum, make_spectrum, parse_rational


class FileFormatError(CatalysisError, ValueError):
    """Malformed input file; the message names the offending line or field."""


def fmt(q: Fraction) -> str:
    return str(q)


def _load(source: str | Path, text: str | None = None) -> dict:
    if text is None:
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise FileFormatError(f"{source}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise FileFormatError(f"{source}: top level must be a JSON object")
    return data


def _spectrum(data: dict, key: str, source) -> Spectrum:
    if key not in data:
        raise FileFormatError(f"{source}: missing field '{key}'")
    raw = data[key]
    if not isinstance(raw, list) or not raw:
        raise FileFormatError(f"{source}: field '{key}' must be a non-empty list of rational strings")
    vals = []
    for i, v in enumerate(raw):
        if not isinstance(v, str):
            raise FileFormatError(f"{source}: {key}[{i}] must be a string such as \"0.36\" or \"10/19\", "
                                  f"got {json.dumps(v)}")
        try:
            vals.append(parse_rational(v))
        except ValueError as exc:
            raise FileFormatError(f"{source}: {key}[{i}]: {exc}") from exc
    try:
        return make_spectrum(vals)
    except ValueError as exc:
        raise FileFormatError(f"{source}: field '{key}': {exc}") from exc


@dataclass(frozen=True)
class StatePair:
    psi: Spectrum
    phi: Spectrum
    labels: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        out = {"psi": [fmt(v) for v in self.psi], "phi": [fmt(v) for v in self.phi]}
        if self.labels:
            out["labels"] = dict(self.labels)
        return out

    @classmethod
    def from_json(cls, data: dict, source="<pair>") -> "StatePair":
        labels = data.get("labels") or {}
        if not isinstance(labels, dict):
            raise FileFormatError(f"{source}: field 'labels' must be an object")
        return cls(_spectrum(data, "psi", source), _spectrum(data, "phi", source), labels)

    @classmethod
    def load(cls, path: str | Path) -> "StatePair":
        return cls.from_json(_load(path), path)

    @classmethod
    def loads(cls, text: str) -> "StatePair":
        return cls.from_json(_load("<string>", text))


@dataclass(frozen=True)
class CertificateFile:
    psi: Spectrum
    phi: Spectrum
    chi: Spectrum
    omega: Spectrum
    delta_lower: str | None = None
    delta_upper: str | None = None

    def to_json(self) -> dict:
        out = {key: [fmt(v) for v in getattr(self, key)] for key in ("psi", "phi", "chi", "omega")}
        if self.delta_lower is not None:
            out["delta"] = {"lower": self.delta_lower, "upper": self.delta_upper, "units": "nats"}
        return out

    @classmethod
    def from_json(cls, data: dict, source="<certificate>") -> "CertificateFile":
        spectra = {key: _spectrum(data, key, source) for key in ("psi", "phi", "chi", "omega")}
        lower = upper = None
        if "delta" in data:
            delta = data["delta"]
            if not isinstance(delta, dict) or not all(isinstance(delta.get(k), str) for k in ("lower", "upper")):
                raise FileFormatError(f"{source}: field 'delta' must hold string 'lower' and 'upper'")
            lower, upper = delta["lower"], delta["upper"]
        return cls(**spectra, delta_lower=lower, delta_upper=upper)

    @classmethod
    def load(cls, path: str | Path) -> "CertificateFile":
        return cls.from_json(_load(path), path)

    @classmethod
    def loads(cls, text: str) -> "CertificateFile":
        return cls.from_json(_load("<string>", text))


def dumps(obj) -> str:
    return json.dumps(obj.to_json() if hasattr(obj, "to_json") else obj, indent=2, ensure_ascii=False)
