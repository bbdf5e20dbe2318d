import pytest
from hypothesis import given, strategies as st

from covidex.dates import CanonicalDate, normalize_date
from covidex.errors import UnparseableDate


def test_full_date():
    assert normalize_date("2020-03-14") == CanonicalDate(2020, 3, 14)


def test_year_only():
    assert normalize_date("1991") == CanonicalDate(1991, 0, 0)


def test_year_month():
    assert normalize_date("2020-04") == CanonicalDate(2020, 4, 0)


def test_month_name_form():
    assert normalize_date("2020 Mar 14") == CanonicalDate(2020, 3, 14)
    assert normalize_date("2020 mar 4") == CanonicalDate(2020, 3, 4)


@pytest.mark.parametrize("raw", ["14/03/2020", "March 2020", "2020-13-01", "2020-01-32", "", "soon"])
def test_rejects_other_formats(raw):
    with pytest.raises(UnparseableDate):
        normalize_date(raw)


def test_day_without_month_rejected():
    with pytest.raises(ValueError):
        CanonicalDate(2020, 0, 5)


def test_unknown_sorts_before_known():
    assert CanonicalDate(2020, 0, 0) < CanonicalDate(2020, 1, 1)
    assert CanonicalDate(2020, 3, 0) < CanonicalDate(2020, 3, 1)
    assert CanonicalDate(2019, 12, 31) < CanonicalDate(2020, 0, 0)


@given(
    year=st.integers(1900, 2100),
    month=st.integers(0, 12),
    day=st.integers(0, 31),
)
def test_render_reparses_to_same_date(year, month, day):
    if day > 0 and month == 0:
        day = 0
    date = CanonicalDate(year, month, day)
    assert normalize_date(date.render()) == date
