from datetime import date

import pytest

from pricedisp.panel import (
    PANEL_HEADER,
    PanelFormatError,
    PriceObservation,
    read_panel_csv,
    sort_panel,
    write_panel_csv,
)


def make_obs(**overrides):
    base = dict(
        stay_date=date(2017, 11, 7),
        booking_date=date(2017, 11, 1),
        hotel_id="hotel_0001",
        room_type="Double",
        website_id="site_03",
        price=129.5,
        page_number=1,
        num_reviews=240,
        star_rating=4,
        review_rating=8.3,
    )
    base.update(overrides)
    return PriceObservation(**base)


class TestObservationInvariants:
    def test_booking_after_stay_rejected(self):
        with pytest.raises(ValueError):
            make_obs(booking_date=date(2017, 11, 8))

    def test_booking_on_stay_date_allowed(self):
        obs = make_obs(booking_date=date(2017, 11, 7))
        assert obs.lead_time_days == 0

    def test_nonpositive_price_rejected(self):
        with pytest.raises(ValueError):
            make_obs(price=0.0)
        with pytest.raises(ValueError):
            make_obs(price=-5.0)

    def test_room_type_restricted(self):
        with pytest.raises(ValueError):
            make_obs(room_type="Suite")

    def test_covariate_ranges(self):
        with pytest.raises(ValueError):
            make_obs(page_number=0)
        with pytest.raises(ValueError):
            make_obs(star_rating=6)
        with pytest.raises(ValueError):
            make_obs(review_rating=0.5)
        with pytest.raises(ValueError):
            make_obs(num_reviews=-1)


class TestCsvRoundTrip:
    def test_header_only_file(self, tmp_path):
        path = tmp_path / "panel.csv"
        write_panel_csv([], path)
        assert path.read_text().strip() == ",".join(PANEL_HEADER)
        assert read_panel_csv(path) == []

    def test_single_row(self, tmp_path):
        path = tmp_path / "panel.csv"
        obs = make_obs(price=123.456789012345)
        write_panel_csv([obs], path)
        assert read_panel_csv(path) == [obs]

    def test_full_precision_preserved(self, tmp_path):
        path = tmp_path / "panel.csv"
        obs = make_obs(price=1.0 / 3.0 * 219.0)
        write_panel_csv([obs], path)
        assert read_panel_csv(path)[0].price == obs.price

    def test_sort_panel_is_canonical(self):
        a = make_obs(website_id="site_09")
        b = make_obs(website_id="site_01")
        assert sort_panel([a, b]) == [b, a]


class TestCsvValidation:
    def test_header_mismatch(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n")
        with pytest.raises(PanelFormatError, match="header mismatch"):
            read_panel_csv(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(PanelFormatError, match="empty file"):
            read_panel_csv(path)

    def test_bad_row_reports_row_number(self, tmp_path):
        path = tmp_path / "panel.csv"
        write_panel_csv([make_obs()], path)
        with open(path, "a") as fh:
            fh.write("2017-11-07,not-a-date,h,Double,w,10.0,1,0,3,8.0\n")
        with pytest.raises(PanelFormatError, match=":3:"):
            read_panel_csv(path)

    def test_booking_after_stay_row_rejected(self, tmp_path):
        path = tmp_path / "panel.csv"
        header = ",".join(PANEL_HEADER)
        path.write_text(
            header + "\n2017-11-07,2017-11-09,h,Double,w,10.0,1,0,3,8.0\n"
        )
        with pytest.raises(PanelFormatError, match="booking date"):
            read_panel_csv(path)

    def test_duplicate_key_rejected(self, tmp_path):
        path = tmp_path / "panel.csv"
        write_panel_csv([make_obs(price=10.0), make_obs(price=20.0)], path)
        with pytest.raises(PanelFormatError, match="duplicate"):
            read_panel_csv(path)

    def test_wrong_column_count(self, tmp_path):
        path = tmp_path / "panel.csv"
        path.write_text(",".join(PANEL_HEADER) + "\n1,2,3\n")
        with pytest.raises(PanelFormatError, match="columns"):
            read_panel_csv(path)
