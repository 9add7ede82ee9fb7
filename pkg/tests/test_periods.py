from datetime import date

import pytest

from macronet import Month, Quarter, quarter_range


def test_quarter_parse_and_str():
    q = Quarter.parse("2017Q2")
    assert (q.year, q.index) == (2017, 2)
    assert str(q) == "2017Q2"


@pytest.mark.parametrize("bad", ["2017", "2017Q5", "2017-Q1", "17Q1", "2017q2"])
def test_quarter_parse_rejects(bad):
    with pytest.raises(ValueError):
        Quarter.parse(bad)


def test_quarter_index_validated():
    with pytest.raises(ValueError):
        Quarter(2017, 0)


def test_quarter_order():
    assert Quarter(2014, 4) < Quarter(2015, 1) < Quarter(2015, 2)


def test_quarter_next_prev_inverse():
    q = Quarter(2003, 1)
    for _ in range(60):
        assert q.next().prev() == q
        q = q.next()


def test_quarter_of_date_and_end_date():
    assert Quarter.of_date(date(2014, 10, 20)) == Quarter(2014, 4)
    assert Quarter(2014, 3).end_date() == date(2014, 9, 30)
    assert Quarter(2014, 4).end_date() == date(2014, 12, 31)


def test_quarter_range_inclusive():
    qs = quarter_range(Quarter(2003, 1), Quarter(2017, 2))
    assert len(qs) == 58
    assert qs[0] == Quarter(2003, 1)
    assert qs[-1] == Quarter(2017, 2)
    assert quarter_range(Quarter(2014, 3), Quarter(2014, 3)) == [Quarter(2014, 3)]
    with pytest.raises(ValueError):
        quarter_range(Quarter(2015, 1), Quarter(2014, 4))


def test_month_parse_quarter_and_flags():
    m = Month.parse("2015-02")
    assert m.quarter() == Quarter(2015, 1)
    assert not m.is_quarter_end
    assert Month(2015, 6).is_quarter_end
    assert str(Month(2015, 6)) == "2015-06"
    assert Quarter(2015, 2).last_month() == Month(2015, 6)


@pytest.mark.parametrize("bad", ["2015-13", "2015/01", "2015-1", "201501"])
def test_month_parse_rejects(bad):
    with pytest.raises(ValueError):
        Month.parse(bad)
