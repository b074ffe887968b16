"""List curves carrying infinite bitangent families.

For each of the first ``--count`` orbit representatives with a family, print
the family segment, its direction and the tangency profile.

    python3 scripts/find_families.py --count 5
"""

import argparse

from tropquartic.bitangent import bitangent_classes
from tropquartic.lattice import (NonRegularTriangulation, enumerate_unimodular_triangulations,
                                 regular_heights, s3_orbits)
from tropquartic.metricgraph import classify_type
from tropquartic.tropcurve import dual_curve, skeleton


def main(argv=None) -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=5)
    args = ap.parse_args(argv)
    found = 0
    for k, o in enumerate(s3_orbits(enumerate_unimodular_triangulations(4))):
        t = o.representative
        try:
            h = regular_heights(t)
        except NonRegularTriangulation:
            continue
        c = dual_curve(t, h)
        fams = [b for b in bitangent_classes(c) if b.is_family]
        if not fams:
            continue
        print(f"orbit {k} ({classify_type(skeleton(c).graph).value})")
        for b in fams:
            f = b.representative.family
            length = "unbounded" if f.length is None else str(f.length)
            print(f"  theta {b.theta.index} {b.theta.category.value:<8} start "
                  f"({f.start[0]}, {f.start[1]}) direction {f.direction} length {length} "
                  f"profile {b.representative.profile}")
        found += 1
        if found == args.count:
            break


if __name__ == "__main__":
    main()
