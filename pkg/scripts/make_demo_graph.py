"""Generate a small two-hub benchmark instance.

Two hub nodes each feed six leaves with probability --hub-p, plus a few
weak cross edges. With the default 0.9 the pair {0, 8} dominates every
other 2-seed set; around 0.76 the sampling loop's first check sits on a
knife edge, which is the interesting regime for the bias probe.
"""

import argparse

from rismax.graph import Graph, save_graph


def two_hub_graph(hub_p, noise_p):
    edges = [(0, v, hub_p) for v in (1, 2, 3, 4, 5, 6)]
    edges += [(8, v, hub_p) for v in (9, 10, 11, 12, 13, 14)]
    edges += [(u, v, noise_p)
              for u, v in ((1, 2), (3, 4), (9, 10), (11, 12), (5, 13), (6, 14))]
    return Graph.from_edges(16, edges)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", help="output edge-list path")
    parser.add_argument("--hub-p", type=float, default=0.9)
    parser.add_argument("--noise-p", type=float, default=0.15)
    args = parser.parse_args()
    g = two_hub_graph(args.hub_p, args.noise_p)
    save_graph(g, args.out)
    print(f"wrote {args.out} (n={g.n}, m={g.m}, model=explicit)")


if __name__ == "__main__":
    main()
