"""Theta category counts on the four skeleton types under random edge lengths.

Shows how often each (Rigid, Flexible, Tandem) triple occurs and whether a
chip sits on a vertex, which separates length ties from generic behaviour.

    python3 scripts/category_regimes.py --samples 200 --seed 1
"""

import argparse
import random
from collections import Counter

from tropquartic.metricgraph import (honeycomb_graph, mickey_mouse_graph, one_bridge_graph,
                                     two_bridge_graph)
from tropquartic.theta import all_theta_characteristics, category_counts

GRAPHS = {"Honeycomb": honeycomb_graph, "MickeyMouse": mickey_mouse_graph,
          "OneBridge": one_bridge_graph, "TwoBridge": two_bridge_graph}


def main(argv=None) -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-length", type=int, default=30)
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)
    for name, make in GRAPHS.items():
        tally = Counter()
        for _ in range(args.samples):
            lengths = tuple(rng.randint(1, args.max_length) for _ in range(6))
            thetas = all_theta_characteristics(make(lengths))
            tally[(category_counts(thetas), any(t.on_vertex for t in thetas))] += 1
        for (counts, on_vertex), n in sorted(tally.items(), key=lambda x: -x[1]):
            tag = "vertex chip" if on_vertex else "generic"
            print(f"{name:<12} {'/'.join(map(str, counts))}  {tag:<11} {n}")


if __name__ == "__main__":
    main()
