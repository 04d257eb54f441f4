"""Print, for each (d1, d2), which d3 admit a state and of which kind.

Legend: C correlated only, U uncorrelated only, B both, . none.
"""

import sys

from rangedim.constructions import classify_triple


def symbol(d1, d2, d3):
    c = classify_triple(d1, d2, d3)
    if c.correlated_exists and c.uncorrelated_exists:
        return "B"
    if c.uncorrelated_exists:
        return "U"
    if c.exists:
        return "C"
    return "."


def main(n=6):
    print(__doc__.strip().splitlines()[-1])
    print("d1 d2 | d3 = " + " ".join(f"{d:>2}" for d in range(1, n * n + 1)))
    for d1 in range(1, n + 1):
        for d2 in range(1, n + 1):
            row = " ".join(f"{symbol(d1, d2, d3):>2}" for d3 in range(1, n * n + 1))
            print(f"{d1:>2} {d2:>2} |      {row}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 6)
