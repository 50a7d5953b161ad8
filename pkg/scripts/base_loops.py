"""Enumerate the feedback loops implied by a from,to edge list.

    python scripts/base_loops.py fixtures/table8_base_edges.csv
"""

import argparse
import csv
import time

from greydematel import CausalGraph, enumerate_loops


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("edges", help="CSV with from,to columns")
    args = ap.parse_args()
    with open(args.edges, newline="") as fh:
        pairs = [(row["from"], row["to"]) for row in csv.DictReader(fh)]
    graph = CausalGraph.from_pairs(pairs)
    t0 = time.perf_counter()
    loops = enumerate_loops(graph)
    ms = (time.perf_counter() - t0) * 1e3
    print(f"{len(graph.nodes)} nodes, {len(graph.edges)} edges, {len(loops)} loops ({ms:.2f} ms)")
    for k, loop in enumerate(loops, 1):
        print(f"L{k:<3} len={len(loop)}  {' -> '.join(loop + loop[:1])}")


if __name__ == "__main__":
    main()
