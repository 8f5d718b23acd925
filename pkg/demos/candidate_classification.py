"""Which pairs (p, q) can open an expansion of x?  Classification table,
the guaranteed-realizable cutoff, and an index push-down round trip.

Run:  python3 demos/candidate_classification.py [--x "(sqrt5-1)/2"] [--pmax 12]
"""

import argparse

from propcf import (
    GOLDEN,
    convergents,
    cutoff_margin_survey,
    expand,
    lift_index_search,
    parse_exact,
    push_down_index,
    sweep_rows,
    to_text,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--x", default="(sqrt5-1)/2",
                        help="irrational in (0,1) to classify against")
    parser.add_argument("--pmax", type=int, default=12,
                        help="classify numerators 1..pmax (default 12)")
    args = parser.parse_args()
    x = parse_exact(args.x)

    print(f"Candidate pairs of x = {to_text(x)}")
    print("=" * 60)
    print(f"{'p':>4} {'q':>5} {'parity':>7} {'realizable':>11}"
          f" {'witness':>14} {'cutoff':>24}")
    for row in sweep_rows(x, to_text(x), args.pmax):
        print(f"{row['p']:>4} {row['q']:>5} {row['parity']:>7}"
              f" {str(row['realizable']).lower():>11}"
              f" {row['witness']:>14} {row['cutoff']:>24}")
    print("\nEvery odd-side pair is realizable outright; the even side")
    print("depends on the divisors of p, and the cutoff column shows when")
    print("the fractional part of qx alone already settles it.")

    print("\nHow sharp is the cutoff?")
    print("=" * 60)
    survey = cutoff_margin_survey(x, 200)
    print(f"{'u-bin':>12} {'realizable':>11} {'unrealizable':>13}"
          f" {'above-cutoff':>13}")
    for row in survey:
        span = f"[{row['bin_low']:.1f},{row['bin_high']:.1f})"
        print(f"{span:>12} {row['realizable']:>11} {row['unrealizable']:>13}"
              f" {str(row['above_cutoff']).lower():>13}")
    print("\nBelow the cutoff every pair is realizable; above it both")
    print("outcomes occur, so the threshold cannot be pushed further on")
    print("this evidence.")

    print("\nPush an index down, then search the way back up")
    print("=" * 60)
    e = expand(GOLDEN, [1] * 8)
    cv = convergents(e)
    pushed = push_down_index(GOLDEN, e, 1)
    merged = pushed.quotients[-1]
    print(f"  all-ones expansion of {to_text(GOLDEN)}: q = "
          f"{[cv.q(n) for n in range(1, 9)]}")
    print(f"  merging indices 1..3 gives the single pair {merged} with "
          f"q(1) = {convergents(pushed).q(1)} = old q(3) = {cv.q(3)}")
    found = lift_index_search(merged.a, merged.b, pushed.tail)
    print(f"  searching all splittings of {merged} recovers "
          f"{len(found.solutions)} solution(s): {found.solutions}")
    print("  -- the original all-ones triple is back, uniquely.")


if __name__ == "__main__":
    main()
