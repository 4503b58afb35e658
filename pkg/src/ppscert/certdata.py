"""Shipped data records: class polynomials and the asserted-order ledger.

Both files are line oriented, tab separated, with # comments. Polynomial
coefficients are decimal, low degree first, space separated inside one field.
The data directory can be overridden with the PPSCERT_DATA environment
variable or an explicit path argument.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ppscert.ntheory import IntPolynomial, is_prime, poly_from_text, poly_to_text

__all__ = [
    "IMAG_QUADRATIC",
    "REAL_QUADRATIC",
    "QUARTIC_CM",
    "DATA_ENV_VAR",
    "LedgerError",
    "ClassPolyRecord",
    "LedgerEntry",
    "AssumptionLedger",
    "load_class_polys",
    "load_order_ledger",
    "find_poly",
]

IMAG_QUADRATIC = "IMAG_QUADRATIC"
REAL_QUADRATIC = "REAL_QUADRATIC"
QUARTIC_CM = "QUARTIC_CM"
_FIELD_KINDS = (IMAG_QUADRATIC, REAL_QUADRATIC, QUARTIC_CM)

DATA_ENV_VAR = "PPSCERT_DATA"


class LedgerError(ValueError):
    """An assumption-ledger entry is malformed or inconsistent with the lattice."""


@dataclass(frozen=True)
class ClassPolyRecord:
    """A class polynomial attached to a prime p, with its provenance string."""

    label: str
    p: int
    field_kind: str
    polynomial: IntPolynomial
    provenance: str

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"record {self.label}: p must be prime")
        if self.field_kind not in _FIELD_KINDS:
            raise ValueError(f"record {self.label}: unknown field kind {self.field_kind!r}")
        if self.polynomial.degree < 1:
            raise ValueError(f"record {self.label}: polynomial must be nonconstant")

    def to_fields(self) -> dict:
        return {
            "label": self.label,
            "p": self.p,
            "field_kind": self.field_kind,
            "coefficients": poly_to_text(self.polynomial),
            "provenance": self.provenance,
        }

    @classmethod
    def from_fields(cls, fields: dict) -> "ClassPolyRecord":
        return cls(
            label=str(fields["label"]),
            p=int(fields["p"]),
            field_kind=str(fields["field_kind"]),
            polynomial=poly_from_text(str(fields["coefficients"])),
            provenance=str(fields["provenance"]),
        )


@dataclass(frozen=True)
class LedgerEntry:
    """Asserted additive order of x_1 for one (p, f) pair."""

    p: int
    f: int
    order: int
    provenance: str

    def __post_init__(self) -> None:
        if self.order < 1 or self.order % 2 == 0:
            raise LedgerError(f"ledger entry ({self.p},{self.f}): order must be odd and positive")
        if not self.provenance.strip():
            raise LedgerError(f"ledger entry ({self.p},{self.f}): provenance is required")


@dataclass(frozen=True)
class AssumptionLedger:
    """Lookup of asserted orders by (p, f)."""

    entries: tuple[LedgerEntry, ...] = ()

    def get(self, p: int, f: int) -> LedgerEntry | None:
        for entry in self.entries:
            if entry.p == p and entry.f == f:
                return entry
        return None

    @classmethod
    def empty(cls) -> "AssumptionLedger":
        return cls(entries=())


def _iter_data_lines(text: str):
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield line.split("\t")


def _read_data_file(name: str, source: str | os.PathLike | None) -> str:
    if source is not None:
        return Path(source).read_text(encoding="utf-8")
    env_dir = os.environ.get(DATA_ENV_VAR)
    if env_dir:
        return (Path(env_dir) / name).read_text(encoding="utf-8")
    return (resources.files("ppscert") / "data" / name).read_text(encoding="utf-8")


def load_class_polys(source: str | os.PathLike | None = None) -> dict[str, ClassPolyRecord]:
    """Label-indexed class polynomial records from the shipped or given file."""
    text = _read_data_file("class_polys.tsv", source)
    out: dict[str, ClassPolyRecord] = {}
    for fields in _iter_data_lines(text):
        if len(fields) != 5:
            raise ValueError("class polynomial rows need 5 tab-separated fields")
        record = ClassPolyRecord(
            label=fields[0],
            p=int(fields[1]),
            field_kind=fields[2],
            polynomial=poly_from_text(fields[3]),
            provenance=fields[4],
        )
        if record.label in out:
            raise ValueError(f"duplicate polynomial label {record.label}")
        out[record.label] = record
    return out


def load_order_ledger(source: str | os.PathLike | None = None) -> AssumptionLedger:
    """Asserted-order ledger from the shipped or given file."""
    text = _read_data_file("order_ledger.tsv", source)
    entries = []
    seen = set()
    for fields in _iter_data_lines(text):
        if len(fields) != 4:
            raise LedgerError("ledger rows need 4 tab-separated fields")
        entry = LedgerEntry(p=int(fields[0]), f=int(fields[1]), order=int(fields[2]), provenance=fields[3])
        if (entry.p, entry.f) in seen:
            raise LedgerError(f"duplicate ledger entry for ({entry.p},{entry.f})")
        seen.add((entry.p, entry.f))
        entries.append(entry)
    return AssumptionLedger(entries=tuple(entries))


def find_poly(polys: dict[str, ClassPolyRecord], p: int, field_kind: str) -> ClassPolyRecord | None:
    """The unique record for (p, field_kind), or None."""
    hits = [r for r in polys.values() if r.p == p and r.field_kind == field_kind]
    if len(hits) > 1:
        raise ValueError(f"multiple {field_kind} records for p={p}")
    return hits[0] if hits else None
