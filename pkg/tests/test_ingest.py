import numpy as np
import pytest

from locmom import IngestError, RawRecords, aggregate, load_csv


def write_csv(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestRawRecords:
    def test_non_monotonic_rejected(self):
        with pytest.raises(IngestError):
            RawRecords(timestamps=[0.0, 2.0, 1.0], channels={"a": [1.0, 2.0, 3.0]})

    def test_channel_length_checked(self):
        with pytest.raises(IngestError, match="'a'"):
            RawRecords(timestamps=[0.0, 1.0], channels={"a": [1.0]})


class TestLoadCsv:
    def test_well_formed_rows_in_order(self, tmp_path):
        path = write_csv(tmp_path, "time,a\n0,1.0\n5,2.0\n10,3.0\n")
        rec = load_csv(path, "time", ["a"])
        assert np.array_equal(rec.timestamps, [0.0, 5.0, 10.0])
        assert np.array_equal(rec.channels["a"], [1.0, 2.0, 3.0])

    def test_shuffled_rows_are_sorted(self, tmp_path):
        path = write_csv(tmp_path, "time,a\n10,3.0\n0,1.0\n5,2.0\n")
        rec = load_csv(path, "time", ["a"])
        assert np.array_equal(rec.timestamps, [0.0, 5.0, 10.0])
        assert np.array_equal(rec.channels["a"], [1.0, 2.0, 3.0])

    def test_missing_column_names_it(self, tmp_path):
        path = write_csv(tmp_path, "time,a\n0,1.0\n")
        with pytest.raises(IngestError, match="'wind'"):
            load_csv(path, "time", ["wind"])

    def test_unparseable_value_reports_line(self, tmp_path):
        path = write_csv(tmp_path, "time,a\n0,1.0\n5,oops\n10,3.0\n")
        with pytest.raises(IngestError, match="line 3"):
            load_csv(path, "time", ["a"])

    def test_unparseable_timestamp_reports_line(self, tmp_path):
        path = write_csv(tmp_path, "time,a\n1970-01-01 00:00:00,1.0\nnever,2.0\n")
        with pytest.raises(IngestError, match="line 3"):
            load_csv(path, "time", ["a"])

    def test_empty_cells_become_missing(self, tmp_path):
        path = write_csv(tmp_path, "time,a\n0,1.0\n5,\n10,3.0\n")
        rec = load_csv(path, "time", ["a"])
        assert np.isnan(rec.channels["a"][1])

    def test_duplicate_timestamps_merged_by_averaging(self, tmp_path):
        path = write_csv(tmp_path, "time,a\n0,1.0\n5,2.0\n5,4.0\n")
        rec = load_csv(path, "time", ["a"])
        assert np.array_equal(rec.timestamps, [0.0, 5.0])
        assert rec.channels["a"][1] == pytest.approx(3.0)

    def test_datetime_strings_parse_to_epoch_seconds(self, tmp_path):
        path = write_csv(
            tmp_path,
            "time,a\n1970-01-01 00:00:00,1.0\n1970-01-01 00:01:00,2.0\n",
        )
        rec = load_csv(path, "time", ["a"])
        assert np.array_equal(rec.timestamps, [0.0, 60.0])

    def test_missing_file(self, tmp_path):
        with pytest.raises(IngestError, match="not found"):
            load_csv(tmp_path / "nope.csv", "time", ["a"])


class TestAggregate:
    def test_in_window_mean(self):
        rec = RawRecords(timestamps=[0.0, 5.0], channels={"a": [1.0, 3.0]})
        out = aggregate(rec, 10.0)["a"]
        assert len(out) == 1
        assert out.values[0] == 2.0
        assert not out.missing[0]
        assert out.dt == 10.0

    def test_gap_marks_window_missing(self):
        rec = RawRecords(timestamps=[0.0, 25.0], channels={"a": [1.0, 5.0]})
        out = aggregate(rec, 10.0)["a"]
        assert len(out) == 3
        assert np.array_equal(out.missing, [False, True, False])
        assert out.values[0] == 1.0
        assert out.values[2] == 5.0

    def test_single_record(self):
        rec = RawRecords(timestamps=[42.0], channels={"a": [7.0]})
        out = aggregate(rec, 10.0)["a"]
        assert len(out) == 1
        assert out.values[0] == 7.0
        assert not out.missing.any()

    def test_identity_on_uniform_data(self):
        t = np.arange(20) * 10.0
        vals = np.sin(t)
        rec = RawRecords(timestamps=t, channels={"a": vals})
        out = aggregate(rec, 10.0)["a"]
        assert np.array_equal(out.values, vals)

    def test_count_conservation(self):
        rng = np.random.default_rng(0)
        t = np.cumsum(rng.uniform(1.0, 9.0, size=200))
        rec = RawRecords(timestamps=t, channels={"a": np.ones(200)})
        out = aggregate(rec, 10.0)["a"]
        # every record lands in exactly one window of all-ones values
        assert np.all(out.values[~out.missing] == 1.0)
        idx = np.floor((t - np.floor(t[0] / 10.0) * 10.0) / 10.0).astype(int)
        assert out.n_valid == np.unique(idx).size

    def test_window_anchored_at_floored_start(self):
        rec = RawRecords(timestamps=[13.0, 17.0], channels={"a": [1.0, 3.0]})
        out = aggregate(rec, 10.0)["a"]
        # both samples fall in [10, 20)
        assert len(out) == 1
        assert out.values[0] == 2.0

    def test_nan_channel_value_leaves_window_missing(self):
        rec = RawRecords(timestamps=[0.0, 5.0], channels={"a": [np.nan, np.nan]})
        out = aggregate(rec, 10.0)["a"]
        assert out.missing[0]

    def test_bad_window_rejected(self):
        rec = RawRecords(timestamps=[0.0], channels={"a": [1.0]})
        with pytest.raises(IngestError):
            aggregate(rec, 0.0)
