"""Daily infection counters served from ingested snapshots.

No interpolation: state-wise queries return the latest snapshot at or
before the requested date (a right-continuous step function).
"""

from dataclasses import dataclass

from .dates import CanonicalDate
from .errors import NoDataBefore
from .records import StatsSnapshot


@dataclass(frozen=True)
class StatsSeries:
    snapshots: tuple[StatsSnapshot, ...]  # strictly increasing dates

    def __post_init__(self):
        keys = [s.snapshot_date.key() for s in self.snapshots]
        if any(a >= b for a, b in zip(keys, keys[1:])):
            raise ValueError("snapshots must be strictly date-increasing")


def national_series(series: StatsSeries) -> list[tuple[CanonicalDate, int, int, int, int]]:
    """(date, total, active, deaths, recovered) rows in date order."""
    return [
        (s.snapshot_date, s.total_cases, s.active_cases, s.deaths, s.recovered)
        for s in series.snapshots
    ]


def snapshot_at(series: StatsSeries, date: CanonicalDate) -> StatsSnapshot:
    """Latest snapshot with date <= the query date; NoDataBefore otherwise."""
    best = None
    for s in series.snapshots:
        if s.snapshot_date.key() <= date.key():
            best = s
        else:
            break
    if best is None:
        raise NoDataBefore(date.render())
    return best


def statewise_active(series: StatsSeries, date: CanonicalDate) -> dict[str, int]:
    return dict(snapshot_at(series, date).per_state)
