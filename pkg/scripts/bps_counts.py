"""Count blurred permutation subgroups and compare with self-inverse DSMs."""
import argparse

from multiperm.dsm import all_bps, dsm_inverse, enumerate_lattice, is_bps


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=4)
    args = ap.parse_args()
    for n in range(1, args.max_n + 1):
        bps = all_bps(n)
        line = f"n={n}: {len(bps)} distinct BPSs"
        if n <= 3:
            lat = enumerate_lattice(n)
            self_inv = [d for d in lat.dsms if dsm_inverse(d) == d]
            assert all(is_bps(d) is not None for d in self_inv)
            line += f", {len(self_inv)} self-inverse DSMs out of {len(lat)}"
        print(line)
        for M in sorted(bps, key=len):
            st = is_bps(M)
            if n <= 3:
                cycles = " ".join(sorted(g.cycles() for g in st.group))
                print(f"    {st.partition}  [{cycles}]  {M.label()}")


if __name__ == "__main__":
    main()
