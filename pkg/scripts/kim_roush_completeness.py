"""Compare the Kim-Roush construction and the inverse-existence test with brute
force on a random sample of M_n."""
import argparse
import random

from multiperm.monoid import monoid_table
from multiperm.regular import brute_inverses, has_inverse_in_Mn, kim_roush_inverses


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("-n", type=int, default=4)
    ap.add_argument("--samples", type=int, default=3000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    t = monoid_table(args.n)
    els = t.elements
    sample = els if args.samples >= len(els) else random.Random(args.seed).sample(els, args.samples)
    regular = incomplete = test_wrong = 0
    for a in sample:
        brute = brute_inverses(a, t)
        kr = kim_roush_inverses(a)
        assert kr <= brute, a
        regular += bool(brute)
        if kr != brute:
            incomplete += 1
        if bool(has_inverse_in_Mn(a)) != bool(brute):
            test_wrong += 1
            if test_wrong <= 5:
                print(f"  test disagrees on {a}: brute finds {len(brute)} inverses, e.g. {min(brute)}")
    print(f"n={args.n} sampled={len(sample)} regular={regular}")
    print(f"kim-roush missed inverses on {incomplete} elements")
    print(f"inverse-existence test disagreed with brute force on {test_wrong} elements")


if __name__ == "__main__":
    main()
