#!/usr/bin/env python3
"""Generate the bundled appliance power-trace sample.

Writes one whitespace-separated `unix_timestamp watts` file per appliance
channel, sampled every 6 seconds across one day of activity.  Each channel
carries a plausible usage pattern plus seeded measurement noise, short
sensor dropouts that a gap-tolerant segmenter should bridge, and one pause
long enough that it should split an occurrence in two.  Deterministic for
a fixed seed.
"""

from __future__ import annotations

import argparse
import random
from datetime import datetime, timezone
from pathlib import Path

DAY_START = int(datetime(2024, 3, 4, 6, 0, tzinfo=timezone.utc).timestamp())
DAY_END = int(datetime(2024, 3, 4, 22, 0, tzinfo=timezone.utc).timestamp())
SAMPLE_PERIOD = 6

# (start minute from 06:00, end minute, nominal watts) per on-interval
CHANNEL_PLANS = {
    "microwave": [
        (90, 96, 1250.0),    # breakfast heating
        (375, 382, 1250.0),  # lunch heating
        (785, 791, 1250.0),  # dinner heating
    ],
    "washing_machine": [
        (240, 270, 1900.0),  # wash phase, with a short dropout forced inside
        (276, 310, 900.0),   # rinse + spin after a pause long enough to split
    ],
    "tv": [
        (660, 685, 85.0),    # late-afternoon session
        (810, 945, 85.0),    # evening session
    ],
}

# sample offsets (in periods) within each on-interval forced to ~0 W;
# runs of <= 2 emulate dropouts, the longer run emulates a real pause
DROPOUTS = {
    "microwave": {(90, 96): [25, 26]},
    "washing_machine": {(240, 270): [150, 151]},
    "tv": {(810, 945): [400]},
}


def build_lines(channel: str, seed: int) -> list[str]:
    # string seeding hashes the bytes, stable across processes unlike hash()
    rng = random.Random(f"{seed}:{channel}")
    intervals = CHANNEL_PLANS[channel]
    dropout_map = DROPOUTS.get(channel, {})
    lines = []
    for ts in range(DAY_START, DAY_END, SAMPLE_PERIOD):
        minute = (ts - DAY_START) / 60.0
        watts = rng.uniform(0.0, 2.5)  # standby floor
        for start_min, end_min, nominal in intervals:
            if start_min <= minute < end_min:
                offset = int((ts - (DAY_START + start_min * 60)) / SAMPLE_PERIOD)
                if offset in dropout_map.get((start_min, end_min), []):
                    watts = rng.uniform(0.0, 1.0)
                else:
                    watts = nominal * rng.uniform(0.9, 1.1)
                break
        lines.append(f"{ts} {watts:.1f}")
    return lines


# ---------------------------------------------------------------------------


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="data/ukdale", help="output directory")
    parser.add_argument("--seed", type=int, default=11, help="noise seed")
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for channel in sorted(CHANNEL_PLANS):
        lines = build_lines(channel, args.seed)
        path = out_dir / f"{channel}.dat"
        path.write_text("\n".join(lines) + "\n")
        print(f"wrote {len(lines)} samples to {path}")


if __name__ == "__main__":
    main()
