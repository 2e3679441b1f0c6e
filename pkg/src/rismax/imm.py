"""Sampling-phase constants, the stopping-time Sampling procedure, and the
three end-to-end variants: imm (original), w1 (regenerate the RR sequence
for the final selection), w2 (gamma-inflated confidence exponent).

All logarithms in the constants are natural logs; the loop bound and the
ln(log2 n) term are the only base-2 quantities.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .graph import Graph
from .rng import check_seed, derive_seed
from .rr import RRPrefix, RRSequence, coverage_fraction
from .select import SeedResult, node_selection

VARIANTS = ("imm", "w1", "w2")

GAMMA_PRECISION = 1e-3
_W1_REGEN_LABEL = "w1-regen"


def eps_prime(eps: float) -> float:
    """Relaxed accuracy used inside the sampling loop."""
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must be in (0, 1), got {eps}")
    return math.sqrt(2.0) * eps


def _ln_binom(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _check_nk(n: int, k: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not (1 <= k <= n):
        raise ValueError(f"k must be in [1, n={n}], got {k}")


def lambda_star(n: int, k: int, eps: float, ell: float) -> float:
    """Final-phase constant sizing the stopping time theta = lambda*/LB."""
    _check_nk(n, k)
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must be in (0, 1), got {eps}")
    if ell <= 0.0:
        raise ValueError(f"ell must be > 0, got {ell}")
    log_n = math.log(n)
    frac = 1.0 - 1.0 / math.e
    alpha = frac * math.sqrt(ell * log_n + math.log(2.0))
    beta = math.sqrt(frac * (_ln_binom(n, k) + ell * log_n + math.log(2.0)))
    return 2.0 * n * (alpha + beta) ** 2 / (eps * eps)


def lambda_prime(n: int, k: int, eps_p: float, ell: float) -> float:
    """Per-iteration constant: theta_i = ceil(lambda' / x_i)."""
    _check_nk(n, k)
    if n < 4:
        raise ValueError(f"lambda' needs n >= 4 (ln log2 n term), got n={n}")
    if eps_p <= 0.0:
        raise ValueError(f"eps' must be > 0, got {eps_p}")
    if ell <= 0.0:
        raise ValueError(f"ell must be > 0, got {ell}")
    inner = _ln_binom(n, k) + ell * math.log(n) + math.log(math.log2(n))
    return (2.0 + 2.0 * eps_p / 3.0) * inner * n / (eps_p * eps_p)


def adjust_ell(ell: float, n: int, variant: str, gamma: float = 0.0) -> float:
    """Effective confidence exponent: + ln2/ln n for the union bound over
    the two phases, + gamma for w2. n=1 is degenerate (n^ell == 1 for any
    ell) and is returned unchanged."""
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    if n == 1:
        return ell
    adjusted = ell + math.log(2.0) / math.log(n)
    if variant == "w2":
        adjusted += gamma
    return adjusted


def gamma_condition(n: int, k: int, eps: float, ell: float, gamma: float) -> bool:
    """ceil(lambda*(ell + gamma)) <= n^gamma."""
    if gamma < 0.0:
        return False
    return math.ceil(lambda_star(n, k, eps, ell + gamma)) <= float(n) ** gamma


def conservative_gamma(n: int) -> float:
    """Closed-form exponent that always satisfies the search condition when
    1/eps <= n and k + ell + gamma + 1 <= n."""
    if n < 2:
        raise ValueError(f"conservative gamma needs n >= 2, got {n}")
    return 4.0 + math.log(8.0 * math.log(n)) / math.log(n)


def gamma_search(
    n: int, k: int, eps: float, ell: float, precision: float = GAMMA_PRECISION
) -> float:
    """Smallest gamma (to `precision`) with ceil(lambda*(ell+gamma)) <= n^gamma.

    Binary search between 0 and a verified-feasible upper end; the result is
    re-verified on both sides since the condition's monotonicity is only
    heuristic.
    """
    if n < 2:
        raise ValueError(f"gamma search needs n >= 2, got {n}")
    hi = conservative_gamma(n) + 1.0
    doublings = 0
    while not gamma_condition(n, k, eps, ell, hi):
        hi *= 2.0
        doublings += 1
        if doublings > 60:
            raise RuntimeError(
                f"no feasible gamma found up to {hi:g} for "
                f"(n={n}, k={k}, eps={eps}, ell={ell})"
            )
    lo = 0.0  # condition always fails at 0: lambda* > 1 = n^0
    while hi - lo > precision:
        mid = (lo + hi) / 2.0
        if gamma_condition(n, k, eps, ell, mid):
            hi = mid
        else:
            lo = mid
    if not gamma_condition(n, k, eps, ell, hi):
        raise RuntimeError(f"gamma search postcondition failed at gamma={hi}")
    if gamma_condition(n, k, eps, ell, hi - precision):
        raise RuntimeError(
            f"gamma condition is non-monotone near gamma={hi}; refusing result"
        )
    return hi


@dataclass(frozen=True)
class ImmParams:
    """Instance parameters plus every derived constant, fixed per variant."""

    n: int
    k: int
    eps: float
    ell: float
    variant: str
    gamma: float
    ell_eff: float
    eps_p: float
    lam_prime: float | None  # None when n < 4 (the sampling loop is empty)
    lam_star: float

    @staticmethod
    def for_variant(n: int, k: int, eps: float, ell: float, variant: str) -> "ImmParams":
        _check_nk(n, k)
        if ell <= 0.0:
            raise ValueError(f"ell must be > 0, got {ell}")
        if variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
        gamma = gamma_search(n, k, eps, ell) if variant == "w2" else 0.0
        ell_eff = adjust_ell(ell, n, variant, gamma)
        eps_p = eps_prime(eps)
        lam_prime = lambda_prime(n, k, eps_p, ell_eff) if n >= 4 else None
        lam_star = lambda_star(n, k, eps, ell_eff)
        params = ImmParams(
            n=n, k=k, eps=eps, ell=ell, variant=variant, gamma=gamma,
            ell_eff=ell_eff, eps_p=eps_p, lam_prime=lam_prime, lam_star=lam_star,
        )
        if variant == "w2" and not gamma_condition(n, k, eps, ell, gamma):
            raise RuntimeError(f"w2 params violate the gamma condition: {params}")
        return params


@dataclass(frozen=True)
class SamplingIteration:
    i: int
    x_i: float
    theta_i: int
    f_value: float
    passed: bool


@dataclass(frozen=True)
class SamplingTrace:
    iterations: tuple[SamplingIteration, ...]
    lb: float
    theta_tilde: int
    rr_sets_generated: int


def sampling(g: Graph, params: ImmParams, seq: RRSequence):
    """Estimate a lower bound on OPT by iterative halving and derive the
    stopping time. Returns (LB, theta_tilde, trace).

    Iteration i checks whether the greedy coverage estimate at theta_i =
    ceil(lambda'/x_i) RR sets clears (1+eps')*x_i; on success LB is
    certified and the loop breaks. A completed loop certifies only LB=1.
    """
    if g.n != params.n:
        raise ValueError(f"params built for n={params.n} but graph has n={g.n}")
    n = g.n
    lb = 1.0
    iterations = []
    i_max = int(math.floor(math.log2(n))) - 1 if n >= 2 else 0
    for i in range(1, i_max + 1):
        x_i = n / 2.0**i
        theta_i = math.ceil(params.lam_prime / x_i)
        prefix = seq.prefix(theta_i)
        result = node_selection(prefix, params.k)
        f_value = result.coverage
        passed = n * f_value >= (1.0 + params.eps_p) * x_i
        iterations.append(SamplingIteration(i, x_i, theta_i, f_value, passed))
        if passed:
            lb = n * f_value / (1.0 + params.eps_p)
            break
    theta_tilde = math.ceil(params.lam_star / lb)
    trace = SamplingTrace(
        iterations=tuple(iterations),
        lb=lb,
        theta_tilde=theta_tilde,
        rr_sets_generated=len(seq),
    )
    return lb, theta_tilde, trace


@dataclass(frozen=True)
class ImmOutput:
    """One end-to-end run: selected seeds plus the sampling record behind them."""

    seed_result: SeedResult
    trace: SamplingTrace
    variant: str
    params: ImmParams
    master_seed: int
    theta_tilde: int
    lb: float
    final_prefix: RRPrefix = field(repr=False)
    rr_sets_sampling: int
    rr_sets_final: int
    total_rr_sets: int
    time_sampling_ms: float
    time_select_ms: float
    time_total_ms: float


def run(g: Graph, params: ImmParams, variant: str, master_seed: int) -> ImmOutput:
    """Full pipeline for one variant.

    imm/w2 feed NodeSelection the first theta_tilde sets of the sampling
    sequence itself; w1 regenerates an independent sequence (derived seed)
    once theta_tilde is fixed, so the final selection never sees the sets
    that determined the stopping time.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    if variant != params.variant:
        raise ValueError(f"params were built for variant={params.variant!r}")
    check_seed(master_seed)
    t0 = time.perf_counter()
    seq = RRSequence(g, master_seed)
    lb, theta_tilde, trace = sampling(g, params, seq)
    t1 = time.perf_counter()
    if variant == "w1":
        regen_seq = RRSequence(g, derive_seed(master_seed, _W1_REGEN_LABEL))
        final_prefix = regen_seq.prefix(theta_tilde)
        rr_final = len(regen_seq)
    else:
        already = len(seq)
        final_prefix = seq.prefix(theta_tilde)
        rr_final = max(0, len(seq) - already)
    t2 = time.perf_counter()
    result = node_selection(final_prefix, params.k)
    t3 = time.perf_counter()
    rr_sampling = trace.rr_sets_generated
    total = len(seq) + (rr_final if variant == "w1" else 0)
    return ImmOutput(
        seed_result=result,
        trace=trace,
        variant=variant,
        params=params,
        master_seed=master_seed,
        theta_tilde=theta_tilde,
        lb=lb,
        final_prefix=final_prefix,
        rr_sets_sampling=rr_sampling,
        rr_sets_final=rr_final,
        total_rr_sets=total,
        time_sampling_ms=(t1 - t0) * 1e3,
        time_select_ms=(t3 - t2) * 1e3,
        time_total_ms=(t3 - t0) * 1e3,
    )
