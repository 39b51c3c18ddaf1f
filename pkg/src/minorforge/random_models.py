"""Seeded random graph samplers, exact and falsifying checkers for the two
pseudo-random properties, and the evaluable probability-bound formulas."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import BudgetExceededError
from .graphs import BipartiteGraph, Graph, bits, edges_between, mask_of

DEFAULT_NODE_BUDGET = 2_000_000

VERDICT_HOLDS = "holds"
VERDICT_FAILS = "fails"
VERDICT_INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class PropertyPParams:
    """Fraction of the host order bounding set counts/sizes, and the edge threshold."""

    delta: Fraction
    s: int

    def __post_init__(self):
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie strictly between 0 and 1")
        if self.s < 1:
            raise ValueError("edge threshold s must be positive")


@dataclass(frozen=True)
class PropertyQParams:
    """Linear-size fraction delta and the edge-density constant D."""

    delta: Fraction
    D: Fraction

    def __post_init__(self):
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie strictly between 0 and 1")
        if self.D <= 1:
            raise ValueError("D must exceed 1")


@dataclass
class PropertyReport:
    verdict: str
    witness: dict | None = None
    nodes_explored: int = 0
    trials: int = 0
    seed: int | None = None
    flags: list[str] = field(default_factory=list)

    def holds(self) -> bool:
        return self.verdict == VERDICT_HOLDS


# ---------------------------------------------------------------------------
# samplers


def sample_bipartite(m: int, n: int, p, seed: int) -> BipartiteGraph:
    """Bipartite graph on parts of sizes m and n; each cross pair is an edge
    independently with probability p under the seeded generator."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    rng = random.Random(seed)
    rows = []
    for _ in range(m):
        row = 0
        for b in range(n):
            if rng.random() < p:
                row |= 1 << b
        rows.append(row)
    return BipartiteGraph(m, n, tuple(rows))


def _all_pairs(n: int) -> list[tuple[int, int]]:
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


def sample_gnm_uniform(n: int, m: int, seed: int) -> Graph:
    """Uniform n-vertex graph with exactly m edges (one-shot edge sample)."""
    pairs = _all_pairs(n)
    if not 0 <= m <= len(pairs):
        raise ValueError(f"m must lie in 0..{len(pairs)}")
    rng = random.Random(seed)
    return Graph.from_edges(n, rng.sample(pairs, m))


def sample_gnm_sequential(n: int, m: int, seed: int) -> Graph:
    """Uniform n-vertex graph with m edges, built by repeatedly adding a
    uniformly random absent edge; distributionally identical to the
    one-shot sampler."""
    pairs = _all_pairs(n)
    if not 0 <= m <= len(pairs):
        raise ValueError(f"m must lie in 0..{len(pairs)}")
    rng = random.Random(seed)
    chosen = []
    for _ in range(m):
        idx = rng.randrange(len(pairs))
        chosen.append(pairs.pop(idx))
    return Graph.from_edges(n, chosen)


# ---------------------------------------------------------------------------
# property Q


def _q_threshold(D, n: int) -> int:
    return math.ceil(float(D) * n * math.log(n)) if n >= 2 else 0


def check_property_Q(
    H: Graph,
    params: PropertyQParams,
    mode: str = "exact",
    *,
    pairs: str = "minimal",
    budget: int = 10_000,
    seed: int | None = None,
) -> PropertyReport:
    """Do all disjoint vertex sets of linear size span enough edges?

    Exact mode enumerates disjoint pairs A, B and returns ``holds`` or a
    ``fails`` witness; with ``pairs="minimal"`` only |A| = |B| =
    ceil(delta*n) is checked, which is exact because enlarging either set
    never removes edges. ``pairs="full"`` enumerates every admissible pair.
    Falsify mode samples random pairs under a budget and can only return
    ``fails`` or ``inconclusive``.
    """
    n = H.n
    r = math.ceil(params.delta * n)
    threshold = _q_threshold(params.D, n)
    if mode == "exact":
        nodes = 0
        sizes = [(r, r)] if pairs == "minimal" else [
            (sa, sb) for sa in range(r, n + 1) for sb in range(r, n + 1 - sa)
        ]
        for sa, sb in sizes:
            if sa + sb > n or sa < 1 or sb < 1:
                continue
            for combo_a in combinations(range(n), sa):
                A = mask_of(combo_a)
                rest = [v for v in range(n) if not A >> v & 1]
                for combo_b in combinations(rest, sb):
                    B = mask_of(combo_b)
                    nodes += 1
                    if edges_between(H, A, B) < threshold:
                        return PropertyReport(
                            VERDICT_FAILS,
                            witness={"A": list(combo_a), "B": list(combo_b),
                                     "edges": edges_between(H, A, B),
                                     "threshold": threshold},
                            nodes_explored=nodes,
                        )
        return PropertyReport(VERDICT_HOLDS, nodes_explored=nodes)
    if mode == "falsify":
        if seed is None:
            raise ValueError("falsify mode needs a seed")
        rng = random.Random(seed)
        if 2 * r > n or r < 1:
            return PropertyReport(VERDICT_INCONCLUSIVE, trials=0, seed=seed)
        for trial in range(budget):
            sample = rng.sample(range(n), 2 * r)
            combo_a, combo_b = sorted(sample[:r]), sorted(sample[r:])
            A, B = mask_of(combo_a), mask_of(combo_b)
            e = edges_between(H, A, B)
            if e < threshold:
                return PropertyReport(
                    VERDICT_FAILS,
                    witness={"A": combo_a, "B": combo_b, "edges": e,
                             "threshold": threshold},
                    trials=trial + 1,
                    seed=seed,
                )
        return PropertyReport(VERDICT_INCONCLUSIVE, trials=budget, seed=seed)
    raise ValueError(f"unknown mode {mode!r}")


def property_q_witness_violates(H: Graph, params: PropertyQParams, witness: dict) -> bool:
    """Straight-line recheck that a fails-witness genuinely violates the property."""
    A, B = mask_of(witness["A"]), mask_of(witness["B"])
    if A & B:
        return False
    n = H.n
    r = math.ceil(params.delta * n)
    if A.bit_count() < r or B.bit_count() < r:
        return False
    return edges_between(H, A, B) < _q_threshold(params.D, n)


# ---------------------------------------------------------------------------
# property P


def _admissible_edge_pairs(H: Graph, xs: tuple[int, ...], ys: tuple[int, ...]):
    return [
        (i, j)
        for i, x in enumerate(xs)
        for j, y in enumerate(ys)
        if H.has_edge(x, y)
    ]


def check_property_P(
    G: BipartiteGraph,
    H: Graph,
    params: PropertyPParams,
    mode: str = "exact",
    *,
    k_l_range: str = "full",
    node_budget: int = DEFAULT_NODE_BUDGET,
    budget: int = 10_000,
    seed: int | None = None,
) -> PropertyReport:
    """Exhaustive or sampling check of the joined-pair property.

    The property asks: for every admissible choice of distinct host-pattern
    vertices x_1..x_k, y_1..y_l (k, l >= ceil(delta*n), at least s pattern
    edges between them) and of disjoint sets X_i in A and Y_j in B of size
    at most 1/delta, some pattern edge x_i y_j has all of X_i x Y_j present
    in G. Exact mode proves ``holds`` or returns a violating witness;
    ``k_l_range="minimal"`` restricts to k = l = ceil(delta*n), a reduction
    whose soundness the exact mode does not assume (callers can compare the
    two). Falsify mode samples candidate witnesses and can only return
    ``fails`` or ``inconclusive``. Node budget exhaustion in exact mode is
    an error, not a verdict.
    """
    n = H.n
    r = math.ceil(params.delta * n)
    cap = math.floor(1 / params.delta)
    if mode == "falsify":
        return _falsify_property_P(G, H, params, budget, seed)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")

    nodes = 0

    def spend(amount: int = 1) -> None:
        nonlocal nodes
        nodes += amount
        if nodes > node_budget:
            raise BudgetExceededError(
                f"property P exact enumeration exceeded {node_budget} nodes"
            )

    if k_l_range == "minimal":
        kl_pairs = [(r, r)] if 2 * r <= n and r >= 1 else []
    elif k_l_range == "full":
        kl_pairs = [
            (k, l) for k in range(max(r, 1), n + 1) for l in range(max(r, 1), n + 1 - k)
        ]
    else:
        raise ValueError(f"unknown k_l_range {k_l_range!r}")

    for k, l in kl_pairs:
        for xs in combinations(range(n), k):
            x_mask = mask_of(xs)
            rest = [v for v in range(n) if not x_mask >> v & 1]
            for ys in combinations(rest, l):
                spend()
                if edges_between(H, x_mask, mask_of(ys)) < params.s:
                    continue
                edge_pairs = _admissible_edge_pairs(H, xs, ys)
                witness_sets = _violating_family(G, k, l, edge_pairs, cap, spend)
                if witness_sets is not None:
                    X_sets, Y_sets = witness_sets
                    return PropertyReport(
                        VERDICT_FAILS,
                        witness={"k": k, "l": l, "xs": list(xs), "ys": list(ys),
                                 "X": [sorted(bits(s)) for s in X_sets],
                                 "Y": [sorted(bits(s)) for s in Y_sets]},
                        nodes_explored=nodes,
                    )
    return PropertyReport(VERDICT_HOLDS, nodes_explored=nodes)


def _violating_family(G: BipartiteGraph, k: int, l: int, edge_pairs, cap: int, spend):
    """Disjoint set families making every pattern edge miss a cross pair, or None.

    Positions never touched by a pattern edge stay empty: they cannot break
    a violation and shrinking a set only helps the remaining constraints.
    """
    if not edge_pairs:
        # vacuous: with no pattern edge among the chosen vertices there is
        # nothing to join, so empty families violate the exists-clause
        return [0] * k, [0] * l
    x_positions = sorted({i for i, _ in edge_pairs})
    y_positions = sorted({j for _, j in edge_pairs})
    a_all = (1 << G.a_size) - 1
    b_all = (1 << G.b_size) - 1
    X_sets = [0] * k
    Y_sets = [0] * l

    y_constraints: dict[int, list[int]] = {j: [] for j in y_positions}

    def nonempty_submasks(avail: int, limit: int):
        out = []
        s = avail
        while s:
            if s.bit_count() <= limit:
                out.append(s)
            s = (s - 1) & avail
        out.reverse()
        return out

    def assign_y(pos_idx: int, avail_b: int) -> bool:
        if pos_idx == len(y_positions):
            return True
        j = y_positions[pos_idx]
        # Y_j must leave every incident pattern edge missing a cross pair:
        # for each constraining X_i it needs a vertex not fully joined to X_i
        full_masks = y_constraints[j]
        for Y in nonempty_submasks(avail_b, cap):
            spend()
            ok = all(Y & ~full for full in full_masks)
            if ok:
                Y_sets[j] = Y
                if assign_y(pos_idx + 1, avail_b & ~Y):
                    return True
                Y_sets[j] = 0
        return False

    def assign_x(pos_idx: int, avail_a: int) -> bool:
        if pos_idx == len(x_positions):
            for j in y_positions:
                y_constraints[j] = []
            viable = True
            for i, j in edge_pairs:
                common = b_all
                for a in bits(X_sets[i]):
                    common &= G.rows[a]
                y_constraints[j].append(common)
                if not b_all & ~common:
                    viable = False  # every B-vertex fully joined to X_i
                    break
            if not viable:
                return False
            return assign_y(0, b_all)
        i = x_positions[pos_idx]
        for X in nonempty_submasks(avail_a, cap):
            spend()
            X_sets[i] = X
            if assign_x(pos_idx + 1, avail_a & ~X):
                return True
            X_sets[i] = 0
        return False

    if assign_x(0, a_all):
        return X_sets, Y_sets
    return None


def _falsify_property_P(G, H, params, budget, seed):
    if seed is None:
        raise ValueError("falsify mode needs a seed")
    rng = random.Random(seed)
    n = H.n
    r = math.ceil(params.delta * n)
    cap = math.floor(1 / params.delta)
    if 2 * r > n or r < 1:
        return PropertyReport(VERDICT_INCONCLUSIVE, trials=0, seed=seed)
    for trial in range(budget):
        sample = rng.sample(range(n), 2 * r)
        xs, ys = tuple(sorted(sample[:r])), tuple(sorted(sample[r:]))
        if edges_between(H, mask_of(xs), mask_of(ys)) < params.s:
            continue
        edge_pairs = _admissible_edge_pairs(H, xs, ys)
        X_sets, ok_x = _random_disjoint_sets(rng, G.a_size, r, cap,
                                             {i for i, _ in edge_pairs})
        Y_sets, ok_y = _random_disjoint_sets(rng, G.b_size, r, cap,
                                             {j for _, j in edge_pairs})
        if not (ok_x and ok_y):
            continue
        witness = {"k": r, "l": r, "xs": list(xs), "ys": list(ys),
                   "X": [sorted(bits(s)) for s in X_sets],
                   "Y": [sorted(bits(s)) for s in Y_sets]}
        if property_p_witness_violates(G, H, params, witness):
            return PropertyReport(VERDICT_FAILS, witness=witness,
                                  trials=trial + 1, seed=seed)
    return PropertyReport(VERDICT_INCONCLUSIVE, trials=budget, seed=seed)


def _random_disjoint_sets(rng, universe: int, count: int, cap: int, needed):
    pool = list(range(universe))
    rng.shuffle(pool)
    sets = [0] * count
    for idx in range(count):
        if idx not in needed:
            continue
        size = rng.randint(1, cap)
        if len(pool) < size:
            return sets, False
        sets[idx] = mask_of(pool.pop() for _ in range(size))
    return sets, True


def property_p_witness_violates(
    G: BipartiteGraph, H: Graph, params: PropertyPParams, witness: dict
) -> bool:
    """Straight-line recheck of a fails-witness against the raw definition."""
    n = H.n
    r = math.ceil(params.delta * n)
    cap = math.floor(1 / params.delta)
    xs, ys = witness["xs"], witness["ys"]
    k, l = witness["k"], witness["l"]
    if len(xs) != k or len(ys) != l or k < r or l < r:
        return False
    if len(set(xs) | set(ys)) != k + l:
        return False
    X_sets = [mask_of(vs) for vs in witness["X"]]
    Y_sets = [mask_of(vs) for vs in witness["Y"]]
    if len(X_sets) != k or len(Y_sets) != l:
        return False
    seen = 0
    for X in X_sets:
        if X & seen or X.bit_count() > cap:
            return False
        seen |= X
    seen = 0
    for Y in Y_sets:
        if Y & seen or Y.bit_count() > cap:
            return False
        seen |= Y
    if edges_between(H, mask_of(xs), mask_of(ys)) < params.s:
        return False
    for i in range(k):
        for j in range(l):
            if not H.has_edge(xs[i], ys[j]):
                continue
            if not X_sets[i] or not Y_sets[j]:
                return False  # empty side: the edge is vacuously fully joined
            if all(G.rows[a] & Y_sets[j] == Y_sets[j] for a in bits(X_sets[i])):
                return False  # this pattern edge is fully joined
    return True


# ---------------------------------------------------------------------------
# bound formulas and constants


def chernoff_upper(mu, delta) -> float:
    """exp(-delta^2 mu / 3): upper-tail bound at (1+delta) times the mean."""
    if mu <= 0:
        raise ValueError("mu must be positive")
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    return math.exp(-float(Fraction(delta) ** 2 * Fraction(mu)) / 3)


def chernoff_lower(mu, delta) -> float:
    """exp(-delta^2 mu / 2): lower-tail bound at (1-delta) times the mean."""
    if mu <= 0:
        raise ValueError("mu must be positive")
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    return math.exp(-float(Fraction(delta) ** 2 * Fraction(mu)) / 2)


def _inv_delta_sq(delta: Fraction) -> Fraction:
    return 1 / (Fraction(delta) ** 2)


def constant_D(delta, p) -> Fraction | float:
    """Smallest nice constant strictly above 4 p^(-1/delta^2): a fixed 1% margin.

    Exact rational when 1/delta^2 is an integer, float otherwise.
    """
    delta, p = Fraction(delta), Fraction(p)
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    if not 0 < p < 1:
        raise ValueError("p must lie strictly between 0 and 1")
    exponent = _inv_delta_sq(delta)
    if exponent.denominator == 1:
        return Fraction(101, 100) * 4 * p ** (-exponent.numerator)
    return 1.01 * 4 * float(p) ** (-float(exponent))


def constant_C(delta, p) -> Fraction | float:
    """D^2 / delta^2 for the derived D; exact in rationals when D is."""
    delta = Fraction(delta)
    D = constant_D(delta, p)
    if isinstance(D, Fraction):
        return D * D / (delta * delta)
    return D * D / float(delta * delta)


def q_n_bound(delta, p, D, n: int) -> float:
    """1 - exp((4 - p^(1/delta^2) D) n log n), clamped into [0, 1]."""
    if n < 2:
        raise ValueError("n must be at least 2")
    delta, p = Fraction(delta), Fraction(p)
    exponent = (4 - float(p) ** float(_inv_delta_sq(delta)) * float(D)) * n * math.log(n)
    if exponent > 700:  # exp overflow: bound degenerates to 0
        return 0.0
    return min(1.0, max(0.0, 1.0 - math.exp(exponent)))


def propQ_failure_bound(D, n: int) -> float:
    """3^n exp(-((D-1)^2 / 2) n log n), clamped into [0, 1]."""
    if n < 2:
        raise ValueError("n must be at least 2")
    log_value = n * math.log(3) - (float(D) - 1) ** 2 / 2 * n * math.log(n)
    if log_value > 0:
        return 1.0
    return math.exp(log_value)


def m_of(n: int, C) -> tuple[int, bool]:
    """ceil(C n log n) clamped at n(n-1)/2; the flag reports clamping.

    Works for astronomically large rational C by comparing in log space.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    C = Fraction(C)
    if C <= 0:
        raise ValueError("C must be positive")
    limit = n * (n - 1) // 2
    log_m = (
        math.log(C.numerator) - math.log(C.denominator)
        + math.log(n) + math.log(math.log(n))
    )
    if log_m > math.log(limit) + 1:
        return limit, True
    m = math.ceil(float(C) * n * math.log(n))
    if m > limit:
        return limit, True
    return m, False
