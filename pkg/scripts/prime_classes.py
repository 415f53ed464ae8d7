"""List prime classes of M_n under two-sided permutation equivalence, with the
D-class of each and a check by the naive factorisation search."""
import argparse

from multiperm.green import classify
from multiperm.monoid import is_prime, monoid_table, prime_elements
from multiperm.relcore import parse

LISTED = {4: ["234|12|13|14", "14|12|23|34"], 3: ["12|23|13"]}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("-n", type=int, default=4)
    ap.add_argument("--naive", action="store_true", help="recheck representatives naively (slow at n=4)")
    args = ap.parse_args()
    t = monoid_table(args.n)
    gc = classify(t)
    classes = prime_elements(args.n)
    print(f"n={args.n}: {len(classes)} prime classes")
    for c in classes:
        d = gc.class_of("D", c.representative)
        d_size = sum(1 for e in t if gc.class_of("D", e) == d)
        listed = [m for m in LISTED.get(args.n, []) if parse(m) in c.members]
        extra = f"  contains listed {', '.join(listed)}" if listed else "  not among the listed"
        print(f"  {c.representative}: {len(c.members)} elements, D-class size {d_size}{extra}")
        if args.naive:
            print(f"    naive check: {is_prime(c.representative, method='naive')}")


if __name__ == "__main__":
    main()
