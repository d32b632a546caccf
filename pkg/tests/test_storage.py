import math

import pytest

from flightline.errors import ValidationError
from flightline.geodesy import GeoPoint
from flightline.storage import (
    ReplayClock,
    TrajectoryLog,
    format_track_point,
    parse_track_point,
    query_log,
    read_log,
    replay,
    snapshot_lines,
)
from flightline.tracker import AssetId, AssetKind, Source, TrackPoint

P1 = AssetId(AssetKind.PERSON, "P1")
AC = AssetId(AssetKind.AIRCRAFT, "AC-203")


def point(ts=1_700_000_000_000, asset=P1, lat=39.0458, lon=-74.35, alt=12.3,
          source=Source.GPS_LORA, quality=87.0) -> TrackPoint:
    return TrackPoint(asset, GeoPoint(lat, lon, alt), source, ts, quality)


class TestRecordGrammar:
    def test_format_example(self):
        line = format_track_point(point())
        assert line == (
            "ts=1700000000000 kind=person id=P1 lat=39.0458000 lon=-74.3500000 "
            "alt=12.3 source=gps_lora quality=87.000"
        )

    def test_parse_is_inverse_on_serialized_values(self):
        p = point()
        assert parse_track_point(format_track_point(p)) == p

    def test_empty_quality(self):
        p = point(quality=None)
        line = format_track_point(p)
        assert line.endswith("quality=")
        assert parse_track_point(line) == p

    @pytest.mark.parametrize(
        "lat,lon,alt",
        [(-90.0, -180.0, -431.0), (90.0, 180.0, 8848.9), (0.0000001, -0.0000001, -0.1)],
    )
    def test_extreme_values_round_trip(self, lat, lon, alt):
        p = point(lat=lat, lon=lon, alt=alt, source=Source.FIDUCIAL, quality=0.412)
        line = format_track_point(p)
        assert format_track_point(parse_track_point(line)) == line

    def test_reserialization_is_byte_stable_for_arbitrary_floats(self):
        # full-precision positions quantize once, then stay fixed
        p = point(lat=39.04581234567, lon=-74.35009876543, alt=3.14159, quality=1.23456)
        line1 = format_track_point(p)
        line2 = format_track_point(parse_track_point(line1))
        assert line1 == line2

    @pytest.mark.parametrize(
        "line",
        [
            "",
            "ts=abc kind=person id=P1 lat=0 lon=0 alt=0 source=gps_lora quality=",
            "kind=person ts=1 id=P1 lat=0.0 lon=0.0 alt=0.0 source=gps_lora quality=",  # order
            "ts=1 kind=person id=P1 lat=0.0 lon=0.0 alt=0.0 source=teleport quality=",
            "ts=1 kind=person id=P1 lat=0.0 lon=0.0 alt=0.0 source=gps_lora",  # missing field
        ],
    )
    def test_malformed_lines_rejected(self, line):
        with pytest.raises(ValidationError):
            parse_track_point(line)


class TestAppendRead:
    def test_append_then_read_back(self, tmp_path):
        log_path = tmp_path / "t.log"
        with TrajectoryLog(log_path) as log:
            log.append(point())
        records, skipped = read_log(log_path)
        assert skipped == 0
        assert records == [point()]

    def test_1000_appends_in_order(self, tmp_path):
        log_path = tmp_path / "t.log"
        with TrajectoryLog(log_path) as log:
            for i in range(1000):
                log.append(point(ts=1_700_000_000_000 + i))
        records, _ = read_log(log_path)
        assert len(records) == 1000
        assert [p.timestamp_ms for p in records] == sorted(p.timestamp_ms for p in records)

    def test_truncated_final_line_recovers_rest(self, tmp_path):
        log_path = tmp_path / "t.log"
        with TrajectoryLog(log_path) as log:
            for i in range(1000):
                log.append(point(ts=1_700_000_000_000 + i))
        raw = log_path.read_bytes()
        log_path.write_bytes(raw[:-17])  # chop mid final record
        records, skipped = read_log(log_path)
        assert len(records) == 999
        assert skipped == 1

    def test_flush_after_every_record(self, tmp_path):
        log_path = tmp_path / "t.log"
        log = TrajectoryLog(log_path)
        log.append(point())
        # visible to an independent reader before close
        records, _ = read_log(log_path)
        assert len(records) == 1
        log.close()


class TestQuery:
    def fill(self, tmp_path):
        log_path = tmp_path / "t.log"
        with TrajectoryLog(log_path) as log:
            for i in range(10):
                log.append(point(ts=1_000 + i, asset=P1))
                log.append(point(ts=1_000 + i, asset=AC, source=Source.FIDUCIAL, quality=0.2))
        return log_path

    def test_empty_range(self, tmp_path):
        path = self.fill(tmp_path)
        assert query_log(path, from_ts=5_000, to_ts=6_000) == []

    def test_full_range_is_entire_log(self, tmp_path):
        path = self.fill(tmp_path)
        assert len(query_log(path)) == 20

    def test_asset_filter(self, tmp_path):
        path = self.fill(tmp_path)
        only = query_log(path, asset=AC)
        assert len(only) == 10 and all(p.asset == AC for p in only)

    def test_inclusive_bounds(self, tmp_path):
        path = self.fill(tmp_path)
        assert len(query_log(path, from_ts=1_002, to_ts=1_004)) == 6

    def test_invalid_range(self, tmp_path):
        path = self.fill(tmp_path)
        with pytest.raises(ValidationError):
            query_log(path, from_ts=10, to_ts=5)


class TestReplay:
    def write(self, tmp_path, times_s=(0, 10, 20)):
        log_path = tmp_path / "t.log"
        with TrajectoryLog(log_path) as log:
            for t in times_s:
                log.append(point(ts=t * 1000))
        return log_path

    def test_rate_2_emits_at_half_offsets(self, tmp_path):
        path = self.write(tmp_path, (0, 10, 20))
        fake_now = [0.0]
        sleeps: list[float] = []

        def now() -> float:
            return fake_now[0]

        def sleep(s: float) -> None:
            sleeps.append(s)
            fake_now[0] += s

        emitted_at: list[float] = []
        clock = ReplayClock(0, 20_000, rate=2.0)
        summary = replay(path, clock, lambda p: emitted_at.append(fake_now[0]), now_fn=now, sleep_fn=sleep)
        assert summary.emitted == 3
        assert emitted_at == pytest.approx([0.0, 5.0, 10.0], abs=0.05)

    def test_batch_mode_equals_query(self, tmp_path):
        path = self.write(tmp_path, (0, 10, 20, 30))
        clock = ReplayClock(5_000, 25_000, rate=math.inf)
        got: list[TrackPoint] = []
        replay(path, clock, got.append)
        assert got == query_log(path, from_ts=5_000, to_ts=25_000)

    def test_two_replays_identical(self, tmp_path):
        path = self.write(tmp_path, (0, 5, 10, 15))
        clock = ReplayClock(0, 15_000, rate=math.inf)
        a: list[TrackPoint] = []
        b: list[TrackPoint] = []
        replay(path, clock, a.append)
        replay(path, clock, b.append)
        assert a == b and len(a) == 4

    def test_clock_validation(self):
        with pytest.raises(ValidationError):
            ReplayClock(10, 5)
        with pytest.raises(ValidationError):
            ReplayClock(0, 10, rate=0.0)
        with pytest.raises(ValidationError):
            ReplayClock(0, 10, rate=-1.0)


def test_snapshot_lines_concatenates_records():
    pts = [point(ts=1), point(ts=2, asset=AC)]
    assert snapshot_lines(pts) == format_track_point(pts[0]) + "\n" + format_track_point(pts[1]) + "\n"
