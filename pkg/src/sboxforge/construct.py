"""Construction of strong bijective S-boxes from non-bijective power maps.

Pipeline: pick a power map x^d with good (du, nl) but a small image, lift it
to alpha*x^d + beta*x^(2^i) (adding a linearized monomial changes neither du
nor nl but enlarges the image), then repair the remaining surplus preimages
onto the unused output values while tracking the damage to both metrics.
Repair is deterministic: a greedy pass that minimizes the resulting max DDT
entry (Walsh peak as tiebreaker), optionally followed by a seeded hill climb
over assignment swaps.

`coefficient_search` runs the repair over every coefficient pair
(alpha != 0, any beta) and ranks the outcomes.  Candidate evaluations are
independent; the search can fan out over processes (capped by the
SBOX_FORGE_THREADS environment variable) without changing any result.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from multiprocessing import get_context

import numpy as np

from .boolfn import VectorialFunction
from .gf2n import FieldSpec
from . import metrics
from .powermap import power_table

DEFAULT_ANNEAL_BUDGET = 10_000
WALSH_REFRESH_INTERVAL = 8
THREADS_ENV_VAR = "SBOX_FORGE_THREADS"

_RANKING_DTYPE = np.dtype(
    [
        ("alpha", np.int32),
        ("beta", np.int32),
        ("du", np.int32),
        ("nl", np.int32),
        ("image_size", np.int32),
        ("degenerate", np.bool_),
    ]
)


@dataclass(frozen=True)
class BinomialParams:
    """Coefficients of alpha * x^d + beta * x^(2^i) over a fixed field."""

    alpha: int
    beta: int
    d: int
    i: int
    spec: FieldSpec

    def __post_init__(self) -> None:
        self.spec.validate_element(self.alpha)
        self.spec.validate_element(self.beta)
        if self.alpha == 0:
            raise ValueError("alpha = 0 collapses the binomial to a linear map")
        if not 0 <= self.i < self.spec.n:
            raise ValueError(f"i must be in [0, {self.spec.n}), got {self.i}")
        if not 1 <= self.d <= self.spec.order - 2:
            raise ValueError(f"d must be in [1, {self.spec.order - 2}], got {self.d}")

    @property
    def degenerate(self) -> bool:
        """True when beta = 0, i.e. the plain power map alpha * x^d."""
        return self.beta == 0


@dataclass(frozen=True)
class RepairOutcome:
    """A bijective S-box obtained by reassigning surplus preimages.

    The S-box agrees with the repair's base table everywhere except the
    inputs in `reassignments` (triples of input, old output, new output,
    ascending in input); the new outputs are exactly the values the base
    image missed, each used once.
    """

    sbox: VectorialFunction
    params: BinomialParams | None
    reassignments: tuple[tuple[int, int, int], ...]
    du: int
    nl: int
    strategy: str
    seed: int

    @property
    def strategy_id(self) -> str:
        return f"{self.strategy}:{self.seed}"


@dataclass(eq=False)
class SearchResult:
    """Ranked outcome of an exhaustive coefficient search.

    `ranking` covers every evaluated pair as a compact record array sorted
    by (du, -nl, alpha, beta); `outcomes` materializes RepairOutcome objects
    for the leading entries (all of them when the search was run with
    keep=None).
    """

    d: int
    i: int
    spec: FieldSpec
    strategy: str
    seed: int
    anneal_budget: int
    ranking: np.ndarray
    outcomes: list[RepairOutcome] = field(default_factory=list)

    @property
    def best(self) -> RepairOutcome:
        return self.outcomes[0]

    @property
    def candidates(self) -> int:
        return len(self.ranking)

    def meets(self, du_max: int, nl_min: int) -> bool:
        top = self.ranking[0]
        return int(top["du"]) <= du_max and int(top["nl"]) >= nl_min

    def optimum_pairs(self) -> list[tuple[int, int]]:
        """Coefficient pairs tied at the best (du, nl)."""
        top = self.ranking[0]
        tied = self.ranking[
            (self.ranking["du"] == top["du"]) & (self.ranking["nl"] == top["nl"])
        ]
        return [(int(r["alpha"]), int(r["beta"])) for r in tied]

    def binomial_image_sizes(self) -> set[int]:
        """Distinct base-image sizes over the non-degenerate pairs."""
        rows = self.ranking[~self.ranking["degenerate"]]
        return {int(v) for v in set(rows["image_size"].tolist())}


def _binomial_array(alpha: int, beta: int, d: int, i: int, spec: FieldSpec) -> np.ndarray:
    order = spec.order
    m = order - 1
    xs = np.arange(1, order)
    lx = spec.log[xs]
    out = np.zeros(order, dtype=np.int64)
    acc = np.zeros(order - 1, dtype=np.int64)
    if alpha != 0:
        acc ^= spec.alog[(int(spec.log[alpha]) + lx * d) % m]
    if beta != 0:
        acc ^= spec.alog[(int(spec.log[beta]) + lx * (1 << i)) % m]
    out[1:] = acc
    return out


def binomial_table(p: BinomialParams) -> VectorialFunction:
    """Lookup table x -> alpha * x^d + beta * x^(2^i) (XOR of field products)."""
    arr = _binomial_array(p.alpha, p.beta, p.d, p.i, p.spec)
    return VectorialFunction(p.spec.n, p.spec.n, tuple(int(v) for v in arr))


def check_binomial_invariance(p: BinomialParams) -> tuple[int, int, int, int]:
    """(du, nl) of the base power map x^d next to (du, nl) of the binomial.

    With alpha, beta != 0 the pairs must agree: the binomial differs from
    x^d by an invertible scaling and a linearized term, and both operations
    leave du and nl unchanged.
    """
    base = power_table(p.d, p.spec)
    lifted = binomial_table(p)
    return (
        metrics.differential_uniformity(base),
        metrics.nonlinearity(base),
        metrics.differential_uniformity(lifted),
        metrics.nonlinearity(lifted),
    )


def _fibre_arrays(table: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(surplus preimages ascending, missing output values ascending)."""
    size = table.shape[0]
    _, first_idx = np.unique(table, return_index=True)
    present = np.zeros(size, dtype=bool)
    present[table] = True
    canonical = np.zeros(size, dtype=bool)
    canonical[first_idx] = True
    excess = np.nonzero(~canonical)[0].astype(np.int64)
    missing = np.nonzero(~present)[0].astype(np.int64)
    return excess, missing


def _proposals(seed: int, n_excess: int, budget: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, n_excess, size=(2, budget), dtype=np.int64)


def _run_repair(
    table: np.ndarray,
    strategy: str,
    seed: int,
    anneal_budget: int,
    refresh_every: int,
    proposals: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, int, int]:
    """Repair a raw table; returns (repaired, excess, chosen, du, nl)."""
    from . import _kernels

    excess, missing = _fibre_arrays(table)
    repaired = table.copy()
    chosen, du, nl = _kernels.greedy_repair(
        repaired, excess, missing, _kernels.SIGN, refresh_every
    )
    assert len(set(chosen.tolist())) == len(chosen), "greedy reused an output value"
    assert set(chosen.tolist()) == set(missing.tolist()), "greedy missed an output value"
    if strategy == "anneal" and excess.shape[0] >= 2 and anneal_budget > 0:
        if proposals is None:
            proposals = _proposals(seed, excess.shape[0], anneal_budget)
        du, nl, _ = _kernels.hill_climb(
            repaired, excess, chosen, proposals[0], proposals[1], _kernels.SIGN
        )
    return repaired, excess, chosen, du, nl


def repair(
    base: VectorialFunction,
    strategy: str = "greedy",
    seed: int = 0,
    *,
    anneal_budget: int = DEFAULT_ANNEAL_BUDGET,
    refresh_every: int = WALSH_REFRESH_INTERVAL,
    params: BinomialParams | None = None,
) -> RepairOutcome:
    """Turn a non-bijective (n, n) function into a permutation.

    Strategies: "greedy" is fully deterministic; "anneal" starts from the
    greedy result and hill-climbs over swaps of two reassigned outputs with
    a seeded proposal stream (accepting only strict (du, -nl) improvements).
    Identical arguments always produce an identical outcome.
    """
    if base.n != base.m:
        raise ValueError(f"repair needs n = m, got n={base.n}, m={base.m}")
    if strategy not in ("greedy", "anneal"):
        raise ValueError(f"unknown strategy {strategy!r}")
    table = np.asarray(base.table, dtype=np.int64)
    excess, _ = _fibre_arrays(table)
    if excess.shape[0] == 0:
        raise ValueError("input is already bijective; nothing to repair")
    repaired, _, _, du, nl = _run_repair(
        table, strategy, seed, anneal_budget, refresh_every
    )
    reass = tuple(
        (int(x), int(table[x]), int(repaired[x]))
        for x in range(table.shape[0])
        if table[x] != repaired[x]
    )
    sbox = VectorialFunction(base.n, base.m, tuple(int(v) for v in repaired))
    return RepairOutcome(
        sbox=sbox,
        params=params,
        reassignments=reass,
        du=int(du),
        nl=int(nl),
        strategy=strategy,
        seed=seed,
    )


def _eval_alpha_range(args) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate all (alpha, beta) pairs for a contiguous alpha range.

    Returns (ranking records, repaired tables) in (alpha, beta) order.
    Module-level so it can cross a process boundary.
    """
    (n, poly, d, i, alpha_lo, alpha_hi, strategy, seed, anneal_budget, refresh) = args
    spec = FieldSpec(n, poly)
    order = spec.order
    count = (alpha_hi - alpha_lo) * order
    records = np.zeros(count, dtype=_RANKING_DTYPE)
    tables = np.empty((count, order), dtype=np.int16)
    # candidates with the same surplus count share one proposal stream, so
    # the seeded RNG is consulted once per distinct count
    proposals_cache: dict[int, np.ndarray] = {}
    row = 0
    for alpha in range(alpha_lo, alpha_hi):
        for beta in range(order):
            base = _binomial_array(alpha, beta, d, i, spec)
            excess, _ = _fibre_arrays(base)
            image_size = order - excess.shape[0]
            if excess.shape[0] == 0:
                vf = VectorialFunction(n, n, tuple(int(v) for v in base))
                du = metrics.differential_uniformity(vf)
                nl = metrics.nonlinearity(vf)
                repaired = base
            else:
                proposals = None
                if strategy == "anneal" and anneal_budget > 0:
                    key = excess.shape[0]
                    if key not in proposals_cache:
                        proposals_cache[key] = _proposals(seed, key, anneal_budget)
                    proposals = proposals_cache[key]
                repaired, _, _, du, nl = _run_repair(
                    base, strategy, seed, anneal_budget, refresh, proposals
                )
            records[row] = (alpha, beta, du, nl, image_size, beta == 0)
            tables[row] = repaired
            row += 1
    return records, tables


def _resolve_workers(workers: int | None) -> int:
    if workers is not None:
        if workers < 1:
            raise ValueError("workers must be >= 1")
        return workers
    avail = os.cpu_count() or 1
    env = os.environ.get(THREADS_ENV_VAR)
    if env:
        try:
            avail = min(avail, max(1, int(env)))
        except ValueError:
            raise ValueError(f"{THREADS_ENV_VAR} must be an integer, got {env!r}")
    return avail


def coefficient_search(
    d: int,
    i: int,
    spec: FieldSpec,
    strategy: str = "greedy",
    seed: int = 0,
    *,
    anneal_budget: int = DEFAULT_ANNEAL_BUDGET,
    keep: int | None = None,
    workers: int | None = None,
    refresh_every: int = WALSH_REFRESH_INTERVAL,
) -> SearchResult:
    """Repair every binomial alpha * x^d + beta * x^(2^i) and rank the results.

    alpha runs over the nonzero field elements, beta over the whole field
    (beta = 0 entries are flagged degenerate).  Ranking is by
    (du, -nl, alpha, beta).  `keep` limits how many leading outcomes are
    materialized as RepairOutcome objects (None keeps all of them); the
    compact ranking always covers every pair.  Results depend only on the
    arguments, never on the worker count.
    """
    if strategy not in ("greedy", "anneal"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if spec.n > 8:
        raise ValueError("coefficient search covers n <= 8")
    n = spec.n
    order = spec.order
    n_workers = _resolve_workers(workers)

    def chunk_args(lo: int, hi: int):
        return (n, spec.poly, d, i, lo, hi, strategy, seed, anneal_budget, refresh_every)

    if n_workers == 1:
        parts = [_eval_alpha_range(chunk_args(1, order))]
    else:
        from . import _kernels

        _kernels.warmup()  # compile before forking so children share the cache
        bounds = np.linspace(1, order, 2 * n_workers + 1, dtype=int)
        jobs = [chunk_args(int(lo), int(hi)) for lo, hi in zip(bounds, bounds[1:]) if lo < hi]
        with get_context("fork").Pool(n_workers) as pool:
            parts = pool.map(_eval_alpha_range, jobs)

    records = np.concatenate([p[0] for p in parts])
    tables = np.concatenate([p[1] for p in parts])
    rank_order = np.lexsort(
        (records["beta"], records["alpha"], -records["nl"], records["du"])
    )
    records = records[rank_order]
    tables = tables[rank_order]

    limit = len(records) if keep is None else min(keep, len(records))
    outcomes = []
    for row in range(limit):
        rec = records[row]
        alpha, beta = int(rec["alpha"]), int(rec["beta"])
        params = BinomialParams(alpha, beta, d, i, spec)
        base = _binomial_array(alpha, beta, d, i, spec)
        final = tables[row]
        reass = tuple(
            (int(x), int(base[x]), int(final[x]))
            for x in range(order)
            if base[x] != final[x]
        )
        outcomes.append(
            RepairOutcome(
                sbox=VectorialFunction(n, n, tuple(int(v) for v in final)),
                params=params,
                reassignments=reass,
                du=int(rec["du"]),
                nl=int(rec["nl"]),
                strategy=strategy,
                seed=seed,
            )
        )
    return SearchResult(
        d=d,
        i=i,
        spec=spec,
        strategy=strategy,
        seed=seed,
        anneal_budget=anneal_budget if strategy == "anneal" else 0,
        ranking=records,
        outcomes=outcomes,
    )
