"""Certified dimension for reference mean fidelities, with the thresholds on either side."""
import argparse

from pixent.witness import TargetState, certify_dimension, schmidt_threshold

TWO_WF_ROWS = [(0.982, 3), (0.975, 5), (0.964, 7), (0.939, 11), (0.941, 13), (0.943, 17), (0.944, 19)]
LARGE_D_ROWS = [(0.93, 19), (0.92, 23), (0.90, 29), (0.92, 31), (0.84, 37), (0.73, 51), (0.56, 97)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--full", action="store_true", help="also list every threshold B_r for each d")
    args = ap.parse_args()
    for title, rows in (("small d", TWO_WF_ROWS), ("large d", LARGE_D_ROWS)):
        print(f"\n{title}\n{'d':>4} {'F':>6} {'d_ent':>6} {'B_(d_ent-1)':>12} {'B_(d_ent)':>10}")
        for f, d in rows:
            t = TargetState.maximally_entangled(d)
            r = certify_dimension(f, t)
            print(f"{d:4d} {f:6.3f} {r:6d} {schmidt_threshold(t, r - 1):12.4f} {schmidt_threshold(t, r):10.4f}")
            if args.full:
                print("     " + " ".join(f"{schmidt_threshold(t, k):.3f}" for k in range(1, d)))


if __name__ == "__main__":
    main()
