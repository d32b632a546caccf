#!/usr/bin/env python3
"""How far away can a camera still decode a tag of a given size?

The planning rule is purely geometric: a detector needs p pixels per bit
cell, a tag spans b cells, so the whole tag must subtend at least b*p
pixels of the r-pixel-wide image. Working that back through the horizontal
FOV gives

    distance = t / (2 * tan(b * f * p / (2 * r)))

This script sweeps tag sizes and camera configurations the way you would
when deciding what to print and where to mount cameras.
"""

import math

from flightline.fiducial.distance import DistanceQuery, max_detection_distance

UHD_70 = dict(f=math.radians(70.0), r=3840)  # wide 4K, like a flightline overview camera
FHD_70 = dict(f=math.radians(70.0), r=1920)  # same lens, HD sensor
UHD_35 = dict(f=math.radians(35.0), r=3840)  # tighter lens doubles the reach

print("Reference query: 0.5 m tag, 10 bits across, 70 deg FOV, 5 px/bit, 3840 px")
q = DistanceQuery(t=0.5, b=10, f=1.2217, p=5, r=3840)
print(f"  -> {max_detection_distance(q):.2f} m\n")

print(f"{'tag size':>9} | {'4K/70deg':>9} | {'HD/70deg':>9} | {'4K/35deg':>9}")
print("-" * 47)
for t in (0.25, 0.5, 1.0, 2.0):
    row = [
        max_detection_distance(DistanceQuery(t=t, b=10, p=5, **cam))
        for cam in (UHD_70, FHD_70, UHD_35)
    ]
    print(f"{t:>8.2f} m | {row[0]:>7.1f} m | {row[1]:>7.1f} m | {row[2]:>7.1f} m")

print()
print("Doubling the tag size exactly doubles the range (t is a pure linear factor):")
for t in (0.25, 0.5, 1.0):
    d = max_detection_distance(DistanceQuery(t=t, b=10, p=5, **UHD_70))
    d2 = max_detection_distance(DistanceQuery(t=2 * t, b=10, p=5, **UHD_70))
    print(f"  t={t:<5} d={d:>7.3f} m   t={2*t:<5} d={d2:>7.3f} m   ratio={d2/d}")

print()
print("A fussier detector (more pixels per bit) shrinks the range:")
for p in (3, 5, 8):
    d = max_detection_distance(DistanceQuery(t=0.5, b=10, p=p, **UHD_70))
    print(f"  p={p}: {d:.2f} m")
