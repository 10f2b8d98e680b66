"""Primes ell for which 2*ell is supersingular for p, plus the exact-rank constructions.

    python scripts/prime_table.py
"""

from kummer_lfun.lfun import exact_rank_construction, find_ell

ROWS = [(3, 140), (5, 50), (7, 30)]


def main() -> None:
    for p, bound in ROWS:
        print(f"{p} | {', '.join(map(str, find_ell(p, bound)))}")
    print()
    for R in (1, 3, 5, 7):
        c = exact_rank_construction(3, R)
        print(f"R={R}: {c}")


if __name__ == "__main__":
    main()
