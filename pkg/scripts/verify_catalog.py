"""Run `verify` over the whole catalog and write a timing/status table.

    python3 scripts/verify_catalog.py --csv results/verify.csv
"""

import argparse
import csv
import sys
import time

from reflmf.cli import CATALOG, Pipeline, report_verify


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("groups", nargs="*", default=list(CATALOG))
    ap.add_argument("--csv", help="also write the table here")
    args = ap.parse_args(argv)

    rows = []
    total = time.perf_counter()
    for spec in args.groups:
        t0 = time.perf_counter()
        rep, ok = report_verify(Pipeline(spec))
        dt = time.perf_counter() - t0
        counts = {s: sum(c["status"] == s for c in rep["checks"]) for s in ("pass", "fail", "skip", "info")}
        rows.append({"group": spec, "passed": ok, "seconds": f"{dt:.1f}", **counts})
        print(f"{spec:10s} {'ok' if ok else 'FAILED':6s} {dt:7.1f}s  "
              f"pass={counts['pass']} skip={counts['skip']} info={counts['info']} fail={counts['fail']}", flush=True)
    elapsed = time.perf_counter() - total
    print(f"total {elapsed:.1f}s over {len(rows)} groups")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    return 0 if all(r["passed"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
