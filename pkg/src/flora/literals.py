"""Typed literal values: lexical parsing and canonical forms.

Attribute triples carry literal objects whose lexical form may be quoted,
language-tagged or datatype-tagged.  Parsing strips the decoration and sorts
every literal into one of three types: date, number or string.  Detection
order matters: a form that looks like an ISO date is a date even though it
would also survive float(); anything that is neither is a string.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from datetime import date

STRING = "string"
DATE = "date"
NUMBER = "number"

# "..."@lang or "..."^^<datatype> or "..."^^prefix:name
_QUOTED = re.compile(
    r'^"(?P<body>.*)"(?:@[A-Za-z][A-Za-z0-9-]*|\^\^<[^<>]*>|\^\^\S+)?$', re.DOTALL
)

_NUMBER = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")

_DATE = re.compile(
    r"^(?P<y>\d{4})-(?P<m>\d{2})-(?P<d>\d{2})"
    r"(?:[T ](?P<hh>\d{2}):(?P<mm>\d{2})(?::(?P<ss>\d{2})(?:\.\d+)?)?"
    r"(?:Z|[+-]\d{2}:?\d{2})?)?$"
)


@dataclass(frozen=True)
class LiteralValue:
    """A parsed literal.

    ``raw`` is the lexical form after stripping quotes and tags, ``canonical``
    is the interning key shared by all lexically different but equal values
    ("1.750" and "1.75" intern to the same number).
    """

    type: str
    raw: str
    canonical: str
    number: float | None = None
    date_key: tuple | None = None

    def key(self) -> tuple[str, str]:
        return (self.type, self.canonical)


def strip_decoration(field: str) -> str:
    """Remove surrounding quotes and any language or datatype tag."""
    m = _QUOTED.match(field)
    return m.group("body") if m else field


def parse_literal(field: str) -> LiteralValue:
    """Parse one attribute-triple object field into a typed literal."""
    raw = strip_decoration(field.strip())
    m = _DATE.match(raw)
    if m:
        y, mo, d = int(m.group("y")), int(m.group("m")), int(m.group("d"))
        try:
            date(y, mo, d)
        except ValueError:
            return LiteralValue(STRING, raw, raw)
        if m.group("hh") is not None:
            hh, mm = int(m.group("hh")), int(m.group("mm"))
            ss = int(m.group("ss") or 0)
            if hh > 23 or mm > 59 or ss > 60:
                return LiteralValue(STRING, raw, raw)
            key = (y, mo, d, (hh, mm, ss))
            canon = f"{y:04d}-{mo:02d}-{d:02d}T{hh:02d}:{mm:02d}:{ss:02d}"
        else:
            key = (y, mo, d, None)
            canon = f"{y:04d}-{mo:02d}-{d:02d}"
        return LiteralValue(DATE, raw, canon, date_key=key)
    if _NUMBER.match(raw):
        value = float(raw)
        if math.isfinite(value):
            return LiteralValue(NUMBER, raw, repr(value), number=value)
    return LiteralValue(STRING, raw, raw)
