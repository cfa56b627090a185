"""Constant-composition information climbing toward I_alpha(N).

Uses the two-pure-state channel {|0>, |+>}: for each blocklength the best
type class (over blocklengths up to n) is reported together with its
per-use information and the gap to the optimized channel quantity.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from cqexp import best_type_up_to, load_channel, renyi_mi_channel

CHANNEL_FILE = pathlib.Path(__file__).resolve().parent.parent / "channels" / "pure_pair.json"
ALPHA = 0.5
N_MAX = 6


def main() -> None:
    channel = load_channel(CHANNEL_FILE)
    target = renyi_mi_channel(channel, ALPHA).value
    print(f"I_alpha(N) at alpha={ALPHA}: {target:.6f} bits/use")
    print()
    print(f"{'n':>3} {'best type':>12} {'value/use':>10} {'gap':>10}")
    for n, t, value in best_type_up_to(channel, N_MAX, ALPHA):
        counts = "(" + ",".join(str(c) for c in t.counts) + ")"
        print(f"{n:3d} {counts:>12} {value:10.6f} {target - value:10.6f}")


if __name__ == "__main__":
    main()
