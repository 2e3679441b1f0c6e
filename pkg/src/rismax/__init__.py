"""Influence maximization via reverse-reachable set sampling, with the two
corrected stopping-time variants and exact small-instance oracles."""

from .graph import Graph, GraphFormatError, load_graph, save_graph
from .imm import ImmOutput, ImmParams, SamplingTrace, gamma_search, lambda_prime, lambda_star, run, sampling
from .mc import SpreadEstimate, estimate_spread, simulate_once
from .oracle import OracleSizeError, exact_max_coverage, exact_opt, exact_sigma, rr_intersection_probabilities
from .rng import derive_seed, stream
from .rr import RRPrefix, RRSequence, RRSet, coverage_fraction, sample_rr
from .select import SeedResult, node_selection

__all__ = [
    "Graph",
    "GraphFormatError",
    "ImmOutput",
    "ImmParams",
    "OracleSizeError",
    "RRPrefix",
    "RRSequence",
    "RRSet",
    "SamplingTrace",
    "SeedResult",
    "SpreadEstimate",
    "coverage_fraction",
    "derive_seed",
    "estimate_spread",
    "exact_max_coverage",
    "exact_opt",
    "exact_sigma",
    "gamma_search",
    "lambda_prime",
    "lambda_star",
    "load_graph",
    "node_selection",
    "rr_intersection_probabilities",
    "run",
    "sampling",
    "sample_rr",
    "save_graph",
    "simulate_once",
    "stream",
]
