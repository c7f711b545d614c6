#!/usr/bin/env python3
"""Deterministically generates cases/desk6.case (20 buses, 45 lines, 6 units,
T=24). Rerunning reproduces the committed file byte for byte."""

import random

rng = random.Random(20260810)

N = 20
T = 24

# ring keeps the graph connected; chords make the 45-line mesh
lines = [(i, (i + 1) % N) for i in range(N)]
chords = set()
while len(chords) < 25:
    a = rng.randrange(N)
    b = rng.randrange(N)
    if a == b:
        continue
    key = (min(a, b), max(a, b))
    ring = {(min(u, v), max(u, v)) for u, v in lines}
    if key in ring or key in chords:
        continue
    chords.add(key)
lines += sorted(chords)

profile = [0.65, 0.60, 0.58, 0.57, 0.60, 0.68, 0.78, 0.88, 0.93, 0.95, 0.96, 0.95,
           0.93, 0.92, 0.93, 0.95, 0.98, 1.00, 0.99, 0.95, 0.88, 0.80, 0.72, 0.67]
peak_total = 480.0
weights = [0.5 + rng.random() for _ in range(N)]
wsum = sum(weights)
peaks = [peak_total * w / wsum for w in weights]

gens = [
    ("g1", 1, 120, 45, 0.008, 18.0),
    ("g2", 4, 90, 35, 0.015, 24.0),
    ("g3", 7, 150, 55, 0.005, 14.0),
    ("g4", 11, 80, 30, 0.020, 30.0),
    ("g5", 15, 100, 40, 0.012, 22.0),
    ("g6", 18, 110, 40, 0.010, 20.0),
]

wind = [(5, 40.0, 15.0), (12, 35.0, 12.0), (17, 25.0, 10.0)]

out = []
out.append("# Synthetic 20-bus desk system: 6 thermal units, 45 lines, hourly horizon of 24.")
out.append("# Generated by tools/gen_desk6.py (seeded); do not edit by hand.")
out.append("[meta]")
out.append(f"horizon {T}")
out.append("reference_bus b1")
out.append("[buses]")
for i in range(N):
    demand = ",".join(f"{peaks[i] * profile[t]:.6g}" for t in range(T))
    out.append(f"b{i + 1} -0.6 0.6 1500 1500 {demand}")
out.append("[generators]")
for gid, bus, pmax, ramp, cq, cl in gens:
    out.append(f"{gid} b{bus} 0 {pmax} {ramp} {ramp} {cq} {cl} 0")
out.append("[lines]")
for u, v in lines:
    x = round(0.05 + 0.25 * rng.random(), 4)
    cap = 150 if abs(u - v) in (1, N - 1) else rng.choice([100, 110, 120])
    out.append(f"b{u + 1} b{v + 1} {x} {cap}")
out.append("[renewables]")
for bus, mean, std in wind:
    out.append(f"b{bus} {mean:g} {std:g}")

with open("cases/desk6.case", "w") as f:
    f.write("\n".join(out) + "\n")
print(f"wrote cases/desk6.case: {N} buses, {len(lines)} lines, {len(gens)} generators")
