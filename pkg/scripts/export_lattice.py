"""Write the lattice of DSMs on [n] as DOT and JSON."""
import argparse
from pathlib import Path

from multiperm.dsm import enumerate_lattice


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("-n", type=int, default=3)
    ap.add_argument("--out", default="out")
    ap.add_argument("--label", choices=["generators", "count"], default="generators")
    args = ap.parse_args()
    lat = enumerate_lattice(args.n)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"lattice-n{args.n}.dot").write_text(lat.to_dot(label=args.label))
    (out / f"lattice-n{args.n}.json").write_text(lat.to_json())
    groups = sum(d.is_group() for d in lat.dsms)
    print(f"{len(lat)} DSMs, {groups} groups, {len(lat.hasse)} covering pairs -> {out}/")


if __name__ == "__main__":
    main()
