"""Exponent-bound curve for the embedded BSC(0.1).

Prints the capacity and critical rate, then a table of lower/upper bounds
over a rate grid; above the critical rate the two coincide and give the
reliability function.
"""

import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from cqexp import ChannelAnalysis, load_channel

CHANNEL_FILE = pathlib.Path(__file__).resolve().parent.parent / "channels" / "bsc01.json"
GRID_POINTS = 12


def main() -> None:
    channel = load_channel(CHANNEL_FILE)
    session = ChannelAnalysis(channel)
    cap = session.capacity().value
    rc = session.critical_rate()
    print(f"capacity      : {cap:.6f} bits/use")
    print(f"critical rate : {rc:.6f} bits/use")
    print()
    print(f"{'rate':>8} {'lower':>10} {'upper':>10} {'exact':>6} {'alpha*':>8}")
    rates = np.linspace(0.05 * cap, 0.98 * cap, GRID_POINTS)
    curve = session.curve(rates)
    for row in curve.rows:
        print(
            f"{row.rate:8.4f} {row.lower:10.6f} {row.upper:10.6f} "
            f"{'yes' if row.equal else 'no':>6} {row.alpha_lower:8.4f}"
        )


if __name__ == "__main__":
    main()
