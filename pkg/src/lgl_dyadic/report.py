"""Machine-readable property reports and their CSV / JSON encodings.

Floats are written as the shortest decimal string that reads back to the
same double (Python's ``repr``), in both formats, so a value parsed from
the CSV is bit-identical to the one parsed from the JSON.  The column
layout and the JSON schema are described in ``docs/formats.md``.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import DomainError

SCHEMA_NAME = "lgl_dyadic.property_report"
SCHEMA_VERSION = 1

PROPERTIES = (
    "quasi_uniform",
    "mq",
    "str",
    "displacement",
    "equivalence",
    "graded",
    "nested",
    "stretch_closed",
    "convexity_condition",
    "length_bounds",
    "angle_bounds",
    "limit_gap",
    "cardinality",
    "monotone",
    "interlacing",
)
VERDICTS = ("holds", "fails", "reported")

CSV_LEAD = ("property", "subject", "degree", "degree2", "alpha", "verdict")
CSV_TAIL = ("witness", "runtime_ms")


def _plain(value):
    """Convert numpy scalars, tuples and arrays to JSON-native values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


@dataclass
class PropertyReport:
    """Verdict of one property check for one degree (or degree pair).

    ``subject`` says which grid family was checked (``lgl``, ``cgl``,
    ``standalone``, ``nested``, ...).  A report with verdict ``fails`` must
    carry a witness; serialization refuses it otherwise.
    """

    property: str
    degree: int | tuple[int, int]
    verdict: str
    alpha: float | None = None
    realized_constants: dict[str, float] = field(default_factory=dict)
    witness: dict[str, Any] | None = None
    runtime_ms: int = 0
    subject: str = ""

    def __post_init__(self):
        if self.property not in PROPERTIES:
            raise DomainError(f"unknown property {self.property!r}")
        if self.verdict not in VERDICTS:
            raise DomainError(f"unknown verdict {self.verdict!r}")
        if isinstance(self.degree, (list, tuple)):
            self.degree = (int(self.degree[0]), int(self.degree[1]))
        else:
            self.degree = int(self.degree)
        if self.alpha is not None:
            self.alpha = float(self.alpha)
        self.realized_constants = {str(k): _plain(v) for k, v in self.realized_constants.items()}
        if self.witness is not None:
            self.witness = _plain(self.witness)
        self.runtime_ms = int(self.runtime_ms)

    def validate(self):
        if self.verdict == "fails" and not self.witness:
            raise DomainError(f"{self.property} report for degree {self.degree} fails without a witness")
        for k, v in self.realized_constants.items():
            if isinstance(v, float) and not math.isfinite(v):
                raise DomainError(f"non-finite realized constant {k}={v}")

    @property
    def sort_key(self):
        d = self.degree if isinstance(self.degree, tuple) else (self.degree, -1)
        return (self.property, self.subject, -1.0 if self.alpha is None else self.alpha, d)

    def to_dict(self) -> dict:
        self.validate()
        return {
            "property": self.property,
            "subject": self.subject,
            "degree": list(self.degree) if isinstance(self.degree, tuple) else self.degree,
            "alpha": self.alpha,
            "verdict": self.verdict,
            "realized_constants": dict(self.realized_constants),
            "witness": self.witness,
            "runtime_ms": self.runtime_ms,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PropertyReport":
        return cls(
            property=data["property"],
            subject=data.get("subject", ""),
            degree=data["degree"],
            alpha=data.get("alpha"),
            verdict=data["verdict"],
            realized_constants=data.get("realized_constants", {}),
            witness=data.get("witness"),
            runtime_ms=data.get("runtime_ms", 0),
        )


def format_value(value) -> str:
    """CSV cell text: empty for None, ``repr`` for floats."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def constant_columns(reports) -> list[str]:
    names = set()
    for r in reports:
        names.update(r.realized_constants)
    return sorted(names)


def to_csv(reports, constants: list[str] | None = None) -> str:
    """One header row and one row per report; all reports must share a property."""
    reports = list(reports)
    kinds = {r.property for r in reports}
    if len(kinds) > 1:
        raise DomainError(f"a CSV file holds one property kind, got {sorted(kinds)}")
    for r in reports:
        r.validate()
    cols = constants if constants is not None else constant_columns(reports)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([*CSV_LEAD, *cols, *CSV_TAIL])
    for r in reports:
        if isinstance(r.degree, tuple):
            d1, d2 = r.degree
        else:
            d1, d2 = r.degree, None
        witness = "" if r.witness is None else json.dumps(r.witness, sort_keys=True, separators=(",", ":"))
        row = [r.property, r.subject, d1, d2, r.alpha, r.verdict]
        row += [r.realized_constants.get(c) for c in cols]
        row += [witness, r.runtime_ms]
        w.writerow([format_value(v) for v in row])
    return buf.getvalue()


def to_json(reports) -> str:
    """Versioned JSON document holding all reports."""
    doc = {
        "schema": SCHEMA_NAME,
        "schema_version": SCHEMA_VERSION,
        "reports": [r.to_dict() for r in reports],
    }
    return json.dumps(doc, indent=1, sort_keys=True, allow_nan=False) + "\n"


def from_json(text: str) -> list[PropertyReport]:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA_NAME:
        raise DomainError(f"not a property report document: {doc.get('schema')!r}")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise DomainError(f"unsupported schema version {doc.get('schema_version')!r}")
    return [PropertyReport.from_dict(d) for d in doc["reports"]]
