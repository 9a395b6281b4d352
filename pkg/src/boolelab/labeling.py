"""Labeling schemes: which observation descriptors count as one logical variable."""

from __future__ import annotations

from enum import Enum
from typing import Collection

from .core import Expression

LogicalVariableId = str


class LabelingScheme(str, Enum):
    SETTING_ONLY = "setting-only"
    SETTING_STATION = "setting-station"
    SETTING_STATION_PARITY = "setting-station-parity"
    SETTING_STATION_TIME = "setting-station-time"
    FULLY_DISTINCT = "fully-distinct"

    @classmethod
    def parse(cls, value: "str | LabelingScheme") -> "LabelingScheme":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        for scheme in cls:
            if key in (scheme.value, scheme.name.lower().replace("_", "-"), scheme.value.replace("-", "")):
                return scheme
        raise ValueError(f"unknown labeling scheme {value!r}; choose from {[s.value for s in cls]}")

    def __str__(self):
        return self.value


#: coarse to fine
REFINEMENT_ORDER = tuple(LabelingScheme)


def label(
    setting: str,
    station: str,
    time: int,
    slot_serial: int,
    scheme: LabelingScheme | str,
    *,
    settings: Collection[str] | None = None,
    stations: Collection[str] | None = None,
) -> LogicalVariableId:
    """Canonical key of the logical variable an observation maps to.

    ``settings``/``stations``, when given, are the experiment's declared ids
    and unknown ids are rejected.
    """
    scheme = LabelingScheme.parse(scheme)
    if settings is not None and setting not in settings:
        raise KeyError(f"unknown setting {setting!r}")
    if stations is not None and station not in stations:
        raise KeyError(f"unknown station {station!r}")
    if time < 0:
        raise ValueError("time index must be nonnegative")
    parts = [setting]
    if scheme is not LabelingScheme.SETTING_ONLY:
        parts.append(station)
    if scheme is LabelingScheme.SETTING_STATION_PARITY:
        parts.append("odd" if time % 2 else "even")
    elif scheme in (LabelingScheme.SETTING_STATION_TIME, LabelingScheme.FULLY_DISTINCT):
        parts.append(f"t{time}")
    if scheme is LabelingScheme.FULLY_DISTINCT:
        parts.append(f"s{slot_serial}")
    return "/".join(parts)


def slot_labels(expr: Expression, scheme: LabelingScheme | str) -> list[list[LogicalVariableId]]:
    """Variable id of every (term, slot) of a bare expression."""
    scheme = LabelingScheme.parse(scheme)
    out = []
    serial = 0
    for ti, term in enumerate(expr.terms):
        row = []
        for slot in term.slots:
            row.append(label(slot.setting, slot.station, expr.term_date(ti), serial, scheme))
            serial += 1
        out.append(row)
    return out


def variables(expr: Expression, scheme: LabelingScheme | str) -> list[LogicalVariableId]:
    """Distinct variables of ``expr`` in sorted key order."""
    return sorted({v for row in slot_labels(expr, scheme) for v in row})


def distinct_variable_count(expr: Expression, scheme: LabelingScheme | str) -> int:
    return len(variables(expr, scheme))
