"""Print L(T), degree and rank of E_d over F_q(t) for a range of d.

    python scripts/rank_table.py --q 3 --d-max 12
"""

import argparse
import logging

from kummer_lfun.errors import BudgetExceeded
from kummer_lfun.lfun import expected_degree, l_polynomial
from kummer_lfun.orbits import is_supersingular


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=3)
    ap.add_argument("--d-max", type=int, default=12)
    ap.add_argument("--budget", type=int, default=None)
    args = ap.parse_args()
    logging.basicConfig(level=logging.WARNING)

    print(f"{'d':>3} {'dp':>3} {'deg':>4} {'rank':>4} ss  L(T)")
    for d in range(1, args.d_max + 1):
        kwargs = {} if args.budget is None else {"budget": args.budget}
        try:
            lp = l_polynomial(args.q, d, **kwargs)
        except BudgetExceeded as exc:
            print(f"{d:>3}  over budget: {exc}")
            continue
        assert lp.degree == expected_degree(args.q, d)
        ss = "y" if is_supersingular(args.q, 2 * lp.d_prime) else "n"
        print(f"{d:>3} {lp.d_prime:>3} {lp.degree:>4} {lp.rank:>4} {ss:>2}  {lp}")


if __name__ == "__main__":
    main()
