
import pytest

from flightline.errors import ValidationError
from flightline.service.scenario import parse_scenario
from flightline.service.sim import SimulationSummary, simulate
from flightline.service.config import load_camera_rigs
from flightline.tracker import AssetKind, Source

from simutil import (
    aircraft_section,
    build_pipeline,
    camera_defs_text,
    fleet_scenario,
    gateway_section,
    geo_of_enu,
)


def run(tmp_path, scenario_text, n_devices, tags=None, cameras_text=None, log_name="track.log"):
    scenario = parse_scenario(scenario_text)
    tracker, server, log = build_pipeline(tmp_path, n_devices, tags, log_name=log_name)
    cameras = None
    if cameras_text is not None:
        cams_path = tmp_path / "cams.txt"
        cams_path.write_text(cameras_text)
        cameras = load_camera_rigs(cams_path)
        for rig in cameras:
            tracker.register_camera(rig)
    summary = simulate(scenario, tracker, server, cameras)
    log.close()
    return summary, tracker


def test_single_clean_gateway_no_duplicates(tmp_path):
    summary, tracker = run(tmp_path, fleet_scenario(3, duration_s=60), 3)
    # 7 fixes per device (t = 0, 10, ..., 60)
    assert summary.uplinks_tx == 21
    assert summary.sent == 21 and summary.forwarded == 21 and summary.dropped == 0
    assert summary.duplicates == 0 and summary.decode_failures == 0
    assert summary.new_fix == 21 and summary.fixes_committed == 21
    assert len(tracker.snapshot()) == 3


def test_conservation_with_lossy_multi_gateway(tmp_path):
    gws = "\n".join(
        [
            gateway_section(1, geo_of_enu(0, 0, 8), loss=0.3, seed=101),
            gateway_section(2, geo_of_enu(50, 100, 8), loss=0.3, seed=202),
        ]
    )
    summary, _ = run(tmp_path, fleet_scenario(5, duration_s=120, gateways=gws), 5)
    assert summary.sent == summary.uplinks_tx * 2
    assert summary.sent == summary.forwarded + summary.dropped
    assert summary.forwarded == summary.new_fix + summary.duplicates + summary.decode_failures
    assert summary.dropped > 0 and summary.duplicates > 0
    # dedup exactness: one new fix per transmission that at least one gateway heard
    assert summary.new_fix <= summary.uplinks_tx
    assert summary.new_fix + summary.duplicates == summary.forwarded


def test_every_heard_transmission_yields_exactly_one_fix(tmp_path):
    # two clean gateways in range: every uplink arrives twice, commits once
    gws = "\n".join(
        [
            gateway_section(1, geo_of_enu(0, 0, 8)),
            gateway_section(2, geo_of_enu(100, 0, 8)),
        ]
    )
    summary, _ = run(tmp_path, fleet_scenario(4, duration_s=60, gateways=gws), 4)
    assert summary.new_fix == summary.uplinks_tx
    assert summary.duplicates == summary.uplinks_tx


def test_out_of_range_gateway_drops_everything(tmp_path):
    gws = gateway_section(1, geo_of_enu(50_000, 0, 8), range_m=1000.0)
    summary, tracker = run(tmp_path, fleet_scenario(2, duration_s=30, gateways=gws), 2)
    assert summary.forwarded == 0 and summary.dropped == summary.sent
    assert tracker.snapshot() == []


def test_same_seeds_byte_identical_logs(tmp_path):
    text = fleet_scenario(
        4,
        duration_s=120,
        gateways="\n".join(
            [
                gateway_section(1, geo_of_enu(0, 0, 8), loss=0.25, seed=7),
                gateway_section(2, geo_of_enu(40, 60, 8), loss=0.25, seed=8),
            ]
        ),
    )
    run(tmp_path, text, 4, log_name="a.log")
    run(tmp_path, text, 4, log_name="b.log")
    assert (tmp_path / "a.log").read_bytes() == (tmp_path / "b.log").read_bytes()
    assert (tmp_path / "a.log").stat().st_size > 0


def test_different_seeds_change_loss_pattern(tmp_path):
    def text(seed):
        return fleet_scenario(
            4,
            duration_s=120,
            gateways=gateway_section(1, geo_of_enu(0, 0, 8), loss=0.5, seed=seed),
        )

    s1, _ = run(tmp_path, text(1), 4, log_name="a.log")
    s2, _ = run(tmp_path, text(2), 4, log_name="b.log")
    assert (s1.dropped, s1.forwarded) != (s2.dropped, s2.forwarded) or (
        (tmp_path / "a.log").read_bytes() != (tmp_path / "b.log").read_bytes()
    )


def test_aircraft_sightings_commit(tmp_path):
    # aircraft taxis 25 m north of a camera that faces north from the origin
    ac = aircraft_section(
        7,
        geo_of_enu(-10, 25, 4.0),
        waypoints=[(geo_of_enu(10, 25, 4.0), 60.0)],
    )
    text = fleet_scenario(1, duration_s=60, frame_interval_s=2, extra=ac)
    summary, tracker = run(
        tmp_path, text, 1, tags={7: "AC-203"}, cameras_text=camera_defs_text(0, 0, 4.0, yaw=0)
    )
    assert summary.sightings_generated > 0
    assert summary.sightings_committed > 0
    snap = tracker.snapshot()
    aircraft = [p for p in snap if p.asset.kind is AssetKind.AIRCRAFT]
    assert len(aircraft) == 1
    assert aircraft[0].source is Source.FIDUCIAL
    assert aircraft[0].quality is not None


def test_aircraft_beyond_detection_range_not_seen(tmp_path):
    # 0.5 m tag beyond 31.4 m max detection distance for the 70 deg 4K camera
    ac = aircraft_section(7, geo_of_enu(0, 80, 4.0))
    text = fleet_scenario(1, duration_s=20, frame_interval_s=2, extra=ac)
    summary, _ = run(
        tmp_path, text, 1, tags={7: "AC-203"}, cameras_text=camera_defs_text(0, 0, 4.0, yaw=0)
    )
    assert summary.sightings_generated == 0


def test_sightings_deterministic_too(tmp_path):
    ac = aircraft_section(7, geo_of_enu(-5, 20, 4.0), waypoints=[(geo_of_enu(5, 20, 4.0), 40.0)])
    text = fleet_scenario(2, duration_s=40, frame_interval_s=1, extra=ac)
    for name in ("a.log", "b.log"):
        run(tmp_path, text, 2, tags={7: "AC-203"}, cameras_text=camera_defs_text(0, 0, 4.0, yaw=0), log_name=name)
    assert (tmp_path / "a.log").read_bytes() == (tmp_path / "b.log").read_bytes()


def test_duty_cycle_defers_aggressive_schedule(tmp_path):
    # SF12 fixes every 2 s: ~1.5 s airtime per 23-byte uplink blows the 1% budget fast
    text = fleet_scenario(1, duration_s=600, fix_interval_s=2.0)
    text = text.replace("spreading_factor=7", "spreading_factor=12")
    summary, _ = run(tmp_path, text, 1)
    assert summary.deferred_by_duty_cycle > 0
    assert summary.sent == summary.forwarded + summary.dropped


def test_conservation_violation_detected():
    s = SimulationSummary(sent=5, forwarded=3, dropped=1)
    with pytest.raises(ValidationError):
        s.verify_conservation()


def test_pacing_calls_sleep(tmp_path):
    fake_now = [0.0]
    naps: list[float] = []

    def now():
        return fake_now[0]

    def sleep(s):
        naps.append(s)
        fake_now[0] += s

    scenario = parse_scenario(fleet_scenario(1, duration_s=10))
    tracker, server, log = build_pipeline(tmp_path, 1)
    simulate(scenario, tracker, server, speed=2.0, now_fn=now, sleep_fn=sleep)
    log.close()
    # 10 simulated seconds at 2x must take ~5 wall seconds
    assert sum(naps) == pytest.approx(5.0, abs=0.5)
