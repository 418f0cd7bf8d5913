"""Degrees, codegrees, duality and regular numbers for catalog groups."""

import argparse
import sys

from reflmf.cli import CATALOG, Pipeline


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("groups", nargs="*", default=list(CATALOG))
    args = ap.parse_args(argv)
    print(f"{'group':10s} {'|W|':>5s} {'degrees':16s} {'codegrees':16s} dual  regular (k <= 2d)")
    for spec in args.groups:
        P = Pipeline(spec)
        dd = P.degree_data
        reg = [k for k, r in P.regularity.items() if r["criterion"]]
        print(f"{spec:10s} {P.group.order:5d} {str(list(dd.degrees)):16s} {str(list(dd.codegrees)):16s} "
              f"{'yes' if P.duality else 'no ':4s}  {reg}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
