"""Census over every regular triangulation, not just orbit representatives.

Checks that type, theta category counts and bitangent data are constant on
S3 orbits (they must be: the symmetries act on the curve by lattice maps).

    python3 scripts/census_all.py --jobs 1 --out /tmp/census_all
"""

import argparse
import sys
from collections import defaultdict

from tropquartic.census import RunConfig, run_census, summarize, summary_table, work_units


def main(argv=None) -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default=None)
    ap.add_argument("--limit", type=int, default=None)
    args = ap.parse_args(argv)
    config = RunConfig(scope="all", checks="fast", jobs=args.jobs, out=args.out, limit=args.limit,
                       rr_samples=0)
    records = []
    by_orbit = defaultdict(set)
    for r in run_census(config, work_units(config)):
        records.append(r)
        if r.regular:
            by_orbit[r.orbit_id].add((r.combinatorial_type, r.bitangent_classes))
    s = summarize(records, config)
    sys.stdout.write(summary_table(s))
    mixed = sorted(k for k, v in by_orbit.items() if len(v) > 1)
    print(f"orbits with non-constant type or class count: {len(mixed)} {mixed[:10]}")
    if args.out:
        with open(f"{args.out}.jsonl", "w") as f:
            f.writelines(r.dumps() + "\n" for r in records)
    return 2 if s.violations or mixed else 0


if __name__ == "__main__":
    sys.exit(main())
