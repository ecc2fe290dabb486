"""How tight are the characterizing constants? A small experiment.

For random weight vectors, compare the best lower bound on the weak and strong
operator norms (testing family plus randomized ascent) with the A_p-vector
constant and with the two-sided strong bounds [S] <= ||M|| <= [S][RH]^{1/p} prod p_i'.

    python scripts/norm_vs_constants.py --instances 20 --seed 3 --csv out/norms.csv
"""

import argparse
import csv
import sys

from dyadlab.dyadic_model import DyadicModel
from dyadlab.exponents import conjugate_product
from dyadlab.norm_search import STRONG, WEAK, NormSpec, SearchBudget, estimate_norm
from dyadlab.sampling import make_rng, random_exponents, random_weight_vector
from dyadlab.weight_constants import ap_product_constant, rh_constant, sp_testing_constant

FIELDS = ["instance", "n", "K", "head", "A_p", "weak_lower", "weak_ratio",
          "S", "strong_lower", "strong_upper", "strong_lower_over_S"]


def one_instance(i: int, seed: int, budget: SearchBudget) -> dict:
    rng = make_rng(seed, i)
    n = 1 + i % 2
    m = DyadicModel(n, 5 if n == 1 else 3)
    seq = random_exponents(rng, int(rng.integers(1, 4)), with_tail=bool(i % 3 == 0))
    W = random_weight_vector(rng, m, seq)
    ap = float(ap_product_constant(m, W).value)
    weak = float(estimate_norm(m, NormSpec(WEAK, W), budget, seed).lower_bound)
    s = float(sp_testing_constant(m, W).value)
    rh = float(rh_constant(m, W).value)
    prod = conjugate_product(seq)
    strong = float(estimate_norm(m, NormSpec(STRONG, W), budget, seed).lower_bound)
    upper = s * rh ** float(seq.inv_p) * (prod.value + prod.remainder_bound)
    return {"instance": i, "n": n, "K": m.K, "head": " ".join(str(q) for q in seq.head),
            "A_p": ap, "weak_lower": weak, "weak_ratio": weak / ap,
            "S": s, "strong_lower": strong, "strong_upper": upper, "strong_lower_over_S": strong / s}


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--instances", type=int, default=12)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--restarts", type=int, default=4)
    parser.add_argument("--sweeps", type=int, default=20)
    parser.add_argument("--csv")
    args = parser.parse_args()
    budget = SearchBudget(restarts=args.restarts, sweeps=args.sweeps)
    rows = [one_instance(i, args.seed, budget) for i in range(args.instances)]
    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    writer = csv.DictWriter(out, FIELDS)
    writer.writeheader()
    for row in rows:
        writer.writerow({k: f"{v:.6g}" if isinstance(v, float) else v for k, v in row.items()})
    if args.csv:
        out.close()
    # weak norm equals A_p; the strong norm sits in [S, upper]
    print(f"max |weak/A_p - 1| = {max(abs(r['weak_ratio'] - 1) for r in rows):.2e}", file=sys.stderr)
