"""Hilbert series of Omega^1, Der and T^1 (direct computation) for duality groups."""

import argparse
import sys

from reflmf import series as se
from reflmf.cli import Pipeline

DEFAULT = ["A1", "A2", "A3", "B2", "I2(5)", "G(3,1,2)", "Cyclic(5)"]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("groups", nargs="*", default=DEFAULT)
    args = ap.parse_args(argv)
    for spec in args.groups:
        P = Pipeline(spec)
        if not P.duality:
            print(f"{spec}: not a duality group, skipped")
            continue
        C, MF = P.ca, P.mf
        om = se.module_series_direct(C, MF, "omega")
        aq = se.aq_series(C, MF)
        print(f"{spec}")
        print(f"  Omega  {om.render()}")
        print(f"  Der    {aq.h0.render()}")
        print(f"  T1     {aq.h1.render()}   (Tjurina number {aq.tjurina_number})")
        print(f"  flag   {se.flag_homotopy_polynomial(C).series.render()}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
