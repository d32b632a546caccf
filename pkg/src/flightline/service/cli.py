"""Command-line entry points: serve, simulate, plan-cameras, replay."""

from __future__ import annotations

import argparse
import math
import sys

from ..errors import FlightlineError
from ..fiducial.distance import DEFAULT_BITS_PER_WIDTH, DEFAULT_PIXELS_PER_BIT, DistanceQuery, max_detection_distance
from ..geodesy import FrameOrigin
from ..lorawan.network import NetworkServer
from ..storage import ReplayClock, TrajectoryLog
from ..tracker import BindingTable, Tracker, load_bindings
from .app import Service, headless_replay
from .config import load_camera_rigs, load_config
from .scenario import load_scenario
from .sim import simulate


def _cmd_serve(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    service = Service(config)
    print(f"listening: gateway udp {config.gateway_listen}, api {config.api_listen}", flush=True)
    service.start()
    print(f"api: http://{service.api_address[0]}:{service.api_address[1]}", flush=True)
    service.run_until_interrupt()
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    scenario = load_scenario(args.scenario)
    bindings = load_bindings(config.bindings_path) if config.bindings_path else BindingTable()
    cameras = list(load_camera_rigs(config.cameras_path)) if config.cameras_path else []
    with TrajectoryLog(config.log_path) as log:
        tracker = Tracker(FrameOrigin(config.origin), bindings, sink=log.append)
        for rig in cameras:
            tracker.register_camera(rig)
        summary = simulate(
            scenario,
            tracker,
            NetworkServer(),
            cameras,
            speed=args.speed if args.speed is not None else math.inf,
        )
    print(summary.as_lines())
    return 0


def _cmd_plan_cameras(args: argparse.Namespace) -> int:
    rigs = load_camera_rigs(args.cameras)
    sizes = [float(s) for s in args.tag_sizes.split(",") if s.strip()]
    rows = []
    for rig in rigs:
        for t in sizes:
            try:
                q = DistanceQuery(
                    t=t,
                    b=args.bits_per_width,
                    f=rig.intrinsics.hfov_rad,
                    p=args.pixels_per_bit,
                    r=rig.intrinsics.resolution_h,
                )
                rows.append((rig.camera_id, t, f"{max_detection_distance(q):.3f}", ""))
            except FlightlineError as exc:
                rows.append((rig.camera_id, t, "", str(exc)))
    if args.records:
        for camera_id, t, dist, err in rows:
            if err:
                print(f"camera={camera_id} tag_size_m={t:.3f} error={err!r}")
            else:
                print(
                    f"camera={camera_id} tag_size_m={t:.3f} b={args.bits_per_width} "
                    f"p={args.pixels_per_bit:g} max_distance_m={dist}"
                )
    else:
        print(f"{'camera':<16} {'tag_m':>7} {'b':>3} {'p':>4} {'max_distance_m':>15}")
        for camera_id, t, dist, err in rows:
            shown = dist if dist else f"error: {err}"
            print(f"{camera_id:<16} {t:>7.3f} {args.bits_per_width:>3} {args.pixels_per_bit:>4g} {shown:>15}")
    return 0


def _cmd_replay(args: argparse.Namespace) -> int:
    rate = math.inf if args.rate.lower() in ("inf", "batch") else float(args.rate)
    clock = ReplayClock(start_ts=args.from_ts, end_ts=args.to_ts, rate=rate)
    emitted = headless_replay(args.log, clock, args.out)
    print(f"emitted={emitted} out={args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flightline", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the tracking service")
    p.add_argument("--config", required=True)
    p.set_defaults(fn=_cmd_serve)

    p = sub.add_parser("simulate", help="run a scenario headless and print the summary")
    p.add_argument("--scenario", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--speed", type=float, default=None, help="sim-time multiplier; omit for as-fast-as-possible")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("plan-cameras", help="tabulate max detection distance per camera and tag size")
    p.add_argument("--cameras", required=True)
    p.add_argument("--tag-sizes", required=True, help="comma-separated metres, e.g. 0.25,0.5,1.0")
    p.add_argument("--bits-per-width", type=int, default=DEFAULT_BITS_PER_WIDTH)
    p.add_argument("--pixels-per-bit", type=float, default=DEFAULT_PIXELS_PER_BIT)
    p.add_argument("--records", action="store_true", help="emit machine-readable key=value lines")
    p.set_defaults(fn=_cmd_plan_cameras)

    p = sub.add_parser("replay", help="headless replay of a log range into a sink file")
    p.add_argument("--log", required=True)
    p.add_argument("--from", dest="from_ts", type=int, required=True)
    p.add_argument("--to", dest="to_ts", type=int, required=True)
    p.add_argument("--rate", default="inf", help="playback rate; 'inf' for batch")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except FlightlineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
