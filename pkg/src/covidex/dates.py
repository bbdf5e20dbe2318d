"""Calendar dates with possibly-unknown month/day components.

Scholarly metadata often carries only a year or a year-month.  Unknown
components are stored as 0 and sort before any known value, so records
order totally by (year, month, day).
"""

import re
from dataclasses import dataclass

from .errors import UnparseableDate

_MONTH_ABBREV = {
    "jan": 1, "feb": 2, "mar": 3, "apr": 4, "may": 5, "jun": 6,
    "jul": 7, "aug": 8, "sep": 9, "oct": 10, "nov": 11, "dec": 12,
}

_YMD_RE = re.compile(r"^(\d{4})(?:-(\d{2})(?:-(\d{2}))?)?$")
_Y_MON_D_RE = re.compile(r"^(\d{4})\s+([A-Za-z]{3})\s+(\d{1,2})$")


@dataclass(frozen=True, order=True)
class CanonicalDate:
    """A date whose month and/or day may be unknown (stored as 0)."""

    year: int
    month: int = 0
    day: int = 0

    def __post_init__(self):
        if not (0 <= self.month <= 12):
            raise ValueError(f"month out of range: {self.month}")
        if not (0 <= self.day <= 31):
            raise ValueError(f"day out of range: {self.day}")
        if self.day > 0 and self.month == 0:
            raise ValueError("day given without month")

    def key(self) -> tuple[int, int, int]:
        return (self.year, self.month, self.day)

    def render(self) -> str:
        if self.month == 0:
            return f"{self.year:04d}"
        if self.day == 0:
            return f"{self.year:04d}-{self.month:02d}"
        return f"{self.year:04d}-{self.month:02d}-{self.day:02d}"


def normalize_date(raw: str) -> CanonicalDate:
    """Parse ``YYYY``, ``YYYY-MM``, ``YYYY-MM-DD`` or ``YYYY Mon DD``.

    Missing components are set to 0.  Raises UnparseableDate for
    anything else (including out-of-range month/day).
    """
    s = raw.strip()
    m = _YMD_RE.match(s)
    if m:
        year = int(m.group(1))
        month = int(m.group(2)) if m.group(2) else 0
        day = int(m.group(3)) if m.group(3) else 0
    else:
        m = _Y_MON_D_RE.match(s)
        if not m:
            raise UnparseableDate(f"unrecognized date: {raw!r}")
        year = int(m.group(1))
        month = _MONTH_ABBREV.get(m.group(2).lower(), 0)
        if month == 0:
            raise UnparseableDate(f"unknown month name in: {raw!r}")
        day = int(m.group(3))
    if month > 12 or day > 31 or (day > 0 and month == 0):
        raise UnparseableDate(f"out-of-range components in: {raw!r}")
    try:
        return CanonicalDate(year, month, day)
    except ValueError as exc:
        raise UnparseableDate(str(exc)) from exc
