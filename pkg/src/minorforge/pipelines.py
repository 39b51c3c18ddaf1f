"""Desk-scale end-to-end reenactments of the three lower-bound pipelines,
the Mader connectivity-search check, and certified-line replay.

Every certified line in a report pairs a claim with a replay spec; the
registry at the bottom re-derives claims from their stored inputs.
"""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction
from itertools import combinations

from .coloring import list_chromatic_number
from .constructions import (
    PastingSpec,
    TwoCliquePartition,
    build_thm_conn_gadget,
    build_thm_random_gadget,
    check_pasting_lower_bound,
    k_fold_pasting,
)
from .errors import check_size
from .graphs import (
    Graph,
    add_isolated_vertices,
    color_by_degeneracy,
    complete_graph,
    degeneracy,
    induced_subgraph,
    is_clique,
    mask_of,
    vertex_connectivity,
)
from .graphio import parse_graph6, to_graph6
from .minors import contains_minor
from .random_models import PropertyQParams, check_property_Q, constant_C, constant_D, m_of, sample_gnm_uniform
from .reports import ExperimentConfig, RunReport

PIPELINE_CONN_MAX_ORDER = 12
PIPELINE_RANDOM_MAX_ORDER = 10
PIPELINE_ISOLATED_MAX_ORDER = 9
MADER_MAX_ORDER = 9
PASTING_CLOSURE_COPIES = 2


def _require_seed(seed) -> int:
    if seed is None:
        raise ValueError("randomized pipelines require a seed")
    return int(seed)


def pipeline_conn(H: Graph, epsilon: Fraction, cfg: ExperimentConfig | None = None) -> RunReport:
    """Connectivity-driven lower-bound pipeline on one graph instance.

    Computes the connectivity, takes the trivial branch when it is below
    epsilon*n, and otherwise builds the two-clique gadget, re-verifies its
    three defining properties exactly, and certifies the factored pasting
    bound. The asymptotic target (1-epsilon)(v+kappa) is reported alongside
    but never certified.
    """
    cfg = cfg or ExperimentConfig()
    epsilon = Fraction(epsilon)
    start = time.perf_counter()
    check_size(H.n, PIPELINE_CONN_MAX_ORDER, "graph order for pipeline_conn")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie strictly between 0 and 1")
    n = H.n
    report = RunReport(
        pipeline="conn",
        params={"epsilon": epsilon, "graph": to_graph6(H)},
        seed=cfg.seed,
        n=n,
    )
    kappa = vertex_connectivity(H)
    report.add_step("connectivity", "computed", {"kappa": kappa})
    report.certify(
        f"vertex connectivity is {kappa}",
        "vertex_connectivity",
        {"graph": to_graph6(H)},
        kappa,
        exhaustive=True,
    )
    target = float((1 - epsilon) * (n + kappa))
    report.target_bound = target
    report.notes.append("asymptotic target (not certified); certified lines hold at this instance")

    if Fraction(kappa) < epsilon * n:
        report.add_step(
            "trivial-branch",
            "taken",
            {"reason": "kappa below epsilon*n", "bound": n - 1},
        )
        report.certified_bound = n - 1
        complete_small = complete_graph(n - 1)
        report.certify(
            f"the complete graph on {n - 1} vertices has no minor of the input",
            "minor_free",
            {"host": to_graph6(complete_small), "pattern": to_graph6(H)},
            True,
            exhaustive=True,
        )
        if n - 1 <= 8:
            chi_l = list_chromatic_number(complete_small)
            report.certify(
                f"list chromatic number of the complete graph on {n - 1} vertices is {chi_l}",
                "list_chromatic_number",
                {"graph": to_graph6(complete_small)},
                chi_l,
                exhaustive=True,
            )
        else:
            report.notes.append(
                "trivial-branch chromatic value exceeds the exact-solver guard; not certified"
            )
        report.runtime_ms = (time.perf_counter() - start) * 1000
        return report

    if epsilon >= Fraction(1, 2):
        raise ValueError(
            "epsilon must be below 1/2 when the connectivity branch applies"
        )
    seed = _require_seed(cfg.seed)
    result = build_thm_conn_gadget(H, epsilon, seed, cfg.attempts, kappa=kappa)
    report.add_step(
        "gadget",
        "found" if result.found else "not-found",
        {"attempts": result.attempts_used, "rejections": len(result.rejections)},
    )
    if not result.found:
        report.verdict = "gadget-not-found"
        report.notes.append("rejection sampling exhausted its attempt budget; outcome reported, not raised")
        report.runtime_ms = (time.perf_counter() - start) * 1000
        return report
    F, part = result.graph, result.partition
    g6F = to_graph6(F)
    a_count, b_count = part.a_mask.bit_count(), part.b_mask.bit_count()
    expect_a = math.floor((1 - 2 * epsilon) * kappa)
    expect_b = math.floor((1 - 2 * epsilon) * n)
    report.add_step(
        "gadget-shape",
        "verified" if (a_count, b_count) == (expect_a, expect_b) else "mismatch",
        {"a": a_count, "b": b_count, "slack": part.slack},
    )
    report.certify(
        f"gadget part A of size {a_count} induces a clique",
        "is_clique",
        {"graph": g6F, "vertices": part.a_vertices()},
        True,
        exhaustive=True,
    )
    report.certify(
        f"gadget part B of size {b_count} induces a clique",
        "is_clique",
        {"graph": g6F, "vertices": part.b_vertices()},
        True,
        exhaustive=True,
    )
    nonnb_bound = math.floor(epsilon * n)
    report.certify(
        f"every B-vertex has at most {nonnb_bound} non-neighbors in the gadget",
        "b_nonneighbors_at_most",
        {"graph": g6F, "b": part.b_vertices(), "bound": nonnb_bound},
        True,
        exhaustive=True,
    )
    report.certify(
        "the gadget has no minor of the input graph",
        "minor_free",
        {"host": g6F, "pattern": to_graph6(H)},
        True,
        exhaustive=True,
    )
    glue_ok = a_count < kappa
    report.add_step(
        "glue-precondition",
        "holds" if glue_ok else "violated",
        {"attachment_clique": a_count, "kappa": kappa},
    )
    bound_check = check_pasting_lower_bound(part)
    report.add_step(
        "pasting-bound",
        "certified" if bound_check.certified else "counterexample",
        {"bound": bound_check.bound, "copies": bound_check.copies,
         "colorings_checked": bound_check.colorings_checked},
    )
    if bound_check.certified:
        report.certified_bound = bound_check.bound
        report.certify(
            f"the {bound_check.copies}-fold pasting at A needs at least {bound_check.bound} colors "
            "in some list assignment",
            "pasting_bound_certified",
            {"graph": g6F, "a": part.a_vertices(), "b": part.b_vertices(), "slack": part.slack},
            True,
            exhaustive=True,
        )
    else:
        report.verdict = "bound-not-certified"
    report.runtime_ms = (time.perf_counter() - start) * 1000
    return report


def _delta_from_epsilon(epsilon: Fraction) -> Fraction:
    """Largest multiple of 1/100 with 7*delta < epsilon."""
    k = (100 * epsilon - 1) // 7  # largest k with 7k/100 < epsilon
    k = int(k)
    while Fraction(7 * (k + 1), 100) < epsilon:
        k += 1
    if k < 1:
        raise ValueError("epsilon is too small for the 1/100 grid of delta values")
    return Fraction(k, 100)


def pipeline_random(
    n: int, epsilon: Fraction, overrides: dict | None = None, cfg: ExperimentConfig | None = None
) -> RunReport:
    """Sparse pseudo-random lower-bound pipeline at one instance size.

    Derives the parameter chain (delta on a 1/100 grid, edge probability,
    density constants, edge count with clamping), samples the pattern
    graph, checks its edge-spread property exactly, builds the gadget, and
    certifies: no induced-pattern minors at the binding sizes, pasting
    closure at a small materialized pasting, and the factored pasting
    bound against the (2-epsilon)n target.
    """
    cfg = cfg or ExperimentConfig()
    overrides = overrides or {}
    start = time.perf_counter()
    if n < 2:
        raise ValueError("n must be at least 2 (log n degenerates below)")
    check_size(n, PIPELINE_RANDOM_MAX_ORDER, "instance size for pipeline_random")
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 2:
        raise ValueError("epsilon must lie in (0, 2)")
    seed = _require_seed(cfg.seed)

    delta = Fraction(overrides.get("delta", _delta_from_epsilon(epsilon)))
    p = Fraction(overrides.get("p", delta / 2))
    D = overrides.get("D")
    D = Fraction(D) if D is not None else Fraction(constant_D(delta, p))
    C = overrides.get("C")
    C = Fraction(C) if C is not None else Fraction(constant_C(delta, p))
    m, clamped = m_of(n, C)

    report = RunReport(
        pipeline="random",
        params={"n": n, "epsilon": epsilon, "delta": delta, "p": p, "D": D, "C": C, "m": m},
        seed=seed,
        n=n,
    )
    report.target_bound = float((2 - epsilon) * n)
    report.notes.append("asymptotic target (not certified); certified lines hold at this instance")
    report.add_step("parameters", "derived", {"delta": str(delta), "p": str(p), "m": m, "clamped": clamped})
    if clamped:
        report.notes.append(
            "edge count ceil(C n log n) exceeds the complete graph; clamped — "
            "asymptotic regime unreachable at this size"
        )

    H = sample_gnm_uniform(n, m, seed)
    g6H = to_graph6(H)
    report.add_step("sample-pattern", "sampled", {"graph": g6H, "edges": H.edge_count()})

    q_report = check_property_Q(H, PropertyQParams(delta, D), mode="exact")
    report.add_step("property-q", q_report.verdict, {"witness": q_report.witness})
    report.certify(
        f"edge-spread property verdict on the sampled pattern is {q_report.verdict!r}",
        "property_q_verdict",
        {"graph": g6H, "delta": delta, "D": D},
        q_report.verdict,
        exhaustive=True,
        witness=q_report.witness,
    )

    result = build_thm_random_gadget(H, delta, p, seed + 1, cfg.attempts)
    report.add_step(
        "gadget",
        "found" if result.found else "not-found",
        {"attempts": result.attempts_used, "rejections": len(result.rejections)},
    )
    if not result.found:
        report.verdict = "gadget-not-found"
        report.notes.append("rejection sampling exhausted its attempt budget; outcome reported, not raised")
        report.runtime_ms = (time.perf_counter() - start) * 1000
        return report

    F, part = result.graph, result.partition
    g6F = to_graph6(F)
    u_min = math.ceil((1 - delta) * n)
    sweep_ok = True
    for size in range(u_min, n + 1):
        for combo in combinations(range(n), size):
            pattern = induced_subgraph(H, mask_of(combo))
            if contains_minor(F, pattern) is not None:
                sweep_ok = False
                break
        if not sweep_ok:
            break
    report.add_step("induced-minor-sweep", "verified" if sweep_ok else "violated", {"u_min": u_min})
    if sweep_ok:
        report.certify(
            f"the gadget has no minor of any induced pattern subgraph on >= {u_min} vertices",
            "minor_free_all_induced",
            {"host": g6F, "pattern": g6H, "min_size": u_min},
            True,
            exhaustive=True,
        )

    closure_spec = PastingSpec(F, part.a_mask, PASTING_CLOSURE_COPIES)
    pasted = k_fold_pasting(closure_spec)
    closure_free = contains_minor(pasted, H) is None
    report.add_step(
        "pasting-closure",
        "verified" if closure_free else "violated",
        {"copies": PASTING_CLOSURE_COPIES, "pasted_order": pasted.n},
    )
    report.certify(
        f"the {PASTING_CLOSURE_COPIES}-fold pasting of the gadget at A has no pattern minor",
        "pasting_minor_free",
        {"graph": g6F, "attach": part.a_vertices(), "copies": PASTING_CLOSURE_COPIES, "pattern": g6H},
        closure_free,
        exhaustive=True,
    )

    bound_check = check_pasting_lower_bound(part)
    report.add_step(
        "pasting-bound",
        "certified" if bound_check.certified else "counterexample",
        {"bound": bound_check.bound, "copies": bound_check.copies},
    )
    if bound_check.certified:
        report.certified_bound = bound_check.bound
        report.certify(
            f"the {bound_check.copies}-fold pasting at A needs at least {bound_check.bound} colors "
            "in some list assignment",
            "pasting_bound_certified",
            {"graph": g6F, "a": part.a_vertices(), "b": part.b_vertices(), "slack": part.slack},
            True,
            exhaustive=True,
        )
    else:
        report.verdict = "bound-not-certified"
    report.runtime_ms = (time.perf_counter() - start) * 1000
    return report


def pipeline_isolated(F: Graph, k: int, cfg: ExperimentConfig | None = None) -> RunReport:
    """Isolated-vertex padding pipeline: sampled degeneracy evidence.

    Pads the graph with k isolated vertices, samples random graphs, keeps
    the ones with no padded-pattern minor, and checks each is
    (v(H)-2)-degenerate and greedily colorable from lists of size v(H)-1.
    The threshold k0 uses the max of the two defining quantities (the
    paper-facing min is inconsistent with its own use) and a provable lower
    bound for the minor-forcing degree, so desk-scale runs always sit below
    k0: violations are recorded as exploratory, not as refutations.
    """
    cfg = cfg or ExperimentConfig()
    start = time.perf_counter()
    if k < 0:
        raise ValueError("k must be nonnegative")
    check_size(F.n + k, PIPELINE_ISOLATED_MAX_ORDER, "padded order for pipeline_isolated")
    seed = _require_seed(cfg.seed)
    H = add_isolated_vertices(F, k)
    vH = H.n
    d_lower = max(F.n - 1, 0)
    k0 = max(d_lower + 1, 9 * F.n**3)
    report = RunReport(
        pipeline="isolated",
        params={"graph": to_graph6(F), "k": k,
                "sample_count": cfg.sample_count,
                "sample_max_vertices": min(cfg.sample_max_vertices, 8),
                "edge_prob": cfg.edge_prob},
        seed=seed,
        n=vH,
    )
    report.notes.append(
        "k0 uses the max of the two defining quantities; the source text's min is "
        "inconsistent with its own use and is flagged, not guessed"
    )
    report.notes.append(
        f"k0 >= {k0} uses a provable lower bound {d_lower} for the minor-forcing degree; "
        "the true threshold may be larger"
    )
    if k < k0:
        report.notes.append(
            f"k={k} is below k0={k0}: no guarantee applies; violations would be exploratory"
        )
    report.add_step("pad", "built", {"padded_order": vH, "k0": k0})

    max_n = min(cfg.sample_max_vertices, 8)
    rng = random.Random(seed)
    minor_free = 0
    degenerate_ok = 0
    coloring_ok = 0
    violations = []
    for i in range(cfg.sample_count):
        n_i = rng.randint(1, max_n)
        edges = [(u, v) for u in range(n_i) for v in range(u + 1, n_i) if rng.random() < cfg.edge_prob]
        sample = Graph.from_edges(n_i, edges)
        if contains_minor(sample, H) is not None:
            continue
        minor_free += 1
        d, _ = degeneracy(sample)
        if d <= vH - 2:
            degenerate_ok += 1
        else:
            violations.append({"index": i, "graph": to_graph6(sample), "degeneracy": d})
            continue
        universe = range(2 * (vH - 1))
        lists = [rng.sample(universe, vH - 1) for _ in range(sample.n)]
        try:
            color_by_degeneracy(sample, lists)
            coloring_ok += 1
        except (ValueError, RuntimeError):
            violations.append({"index": i, "graph": to_graph6(sample), "coloring": "failed"})
    verdict = "all-degenerate" if not violations else "violations-found"
    report.add_step(
        "sampling",
        verdict,
        {"samples": cfg.sample_count, "minor_free": minor_free,
         "degenerate_ok": degenerate_ok, "coloring_ok": coloring_ok,
         "violations": violations},
    )
    if violations:
        report.verdict = "exploratory-violations" if k < k0 else "violations-found"
        report.notes.append(f"violations: {len(violations)} (flagged prominently)")
    report.certify(
        f"all {minor_free} padded-pattern-minor-free samples are {vH - 2}-degenerate "
        f"and colorable from random lists of size {vH - 1}",
        "isolated_sampling_summary",
        {"graph": to_graph6(F), "k": k, "count": cfg.sample_count,
         "max_n": max_n, "edge_prob": cfg.edge_prob, "seed": seed},
        {"minor_free": minor_free, "degenerate_ok": degenerate_ok, "coloring_ok": coloring_ok},
        witness={"violations": violations},
    )
    complete_small = complete_graph(vH - 1)
    chi_l = list_chromatic_number(complete_small)
    report.certified_bound = chi_l
    report.certify(
        f"list chromatic number of the complete graph on {vH - 1} vertices is {chi_l}",
        "list_chromatic_number",
        {"graph": to_graph6(complete_small)},
        chi_l,
        exhaustive=True,
    )
    report.certify(
        f"the complete graph on {vH - 1} vertices has no padded-pattern minor",
        "minor_free",
        {"host": to_graph6(complete_small), "pattern": to_graph6(H)},
        True,
        exhaustive=True,
    )
    report.target_bound = float(vH - 1)
    report.runtime_ms = (time.perf_counter() - start) * 1000
    return report


def mader_step_check(H: Graph, cfg: ExperimentConfig | None = None) -> RunReport:
    """Average-degree to connected-subgraph check over all induced subgraphs."""
    start = time.perf_counter()
    check_size(H.n, MADER_MAX_ORDER, "graph order for mader_step_check")
    if H.n == 0:
        raise ValueError("the check needs at least one vertex")
    avg_degree = Fraction(2 * H.edge_count(), H.n)
    target = math.ceil(avg_degree / 4)
    best = _best_induced_connectivity(H)
    report = RunReport(
        pipeline="mader",
        params={"graph": to_graph6(H)},
        seed=None,
        n=H.n,
    )
    report.add_step(
        "search",
        "pass" if best >= target else "fail",
        {"avg_degree": float(avg_degree), "target": target, "best_connectivity": best},
    )
    report.certified_bound = best
    report.target_bound = float(target)
    report.verdict = "pass" if best >= target else "fail"
    report.certify(
        f"the best vertex connectivity over induced subgraphs is {best}",
        "best_induced_connectivity",
        {"graph": to_graph6(H)},
        best,
        exhaustive=True,
    )
    report.runtime_ms = (time.perf_counter() - start) * 1000
    return report


def _best_induced_connectivity(H: Graph) -> int:
    best = 0
    for S in range(1, 1 << H.n):
        sub = induced_subgraph(H, S)
        if sub.n >= 1:
            best = max(best, vertex_connectivity(sub))
    return best


# ---------------------------------------------------------------------------
# replay


def _op_vertex_connectivity(args):
    return vertex_connectivity(parse_graph6(args["graph"]))


def _op_minor_free(args):
    return contains_minor(parse_graph6(args["host"]), parse_graph6(args["pattern"])) is None


def _op_is_clique(args):
    return is_clique(parse_graph6(args["graph"]), mask_of(args["vertices"]))


def _op_b_nonneighbors_at_most(args):
    G = parse_graph6(args["graph"])
    bound = args["bound"]
    return all(G.n - 1 - G.degree(b) <= bound for b in args["b"])


def _op_pasting_bound_certified(args):
    G = parse_graph6(args["graph"])
    part = TwoCliquePartition(G, mask_of(args["a"]), mask_of(args["b"]), args["slack"])
    return check_pasting_lower_bound(part).certified


def _op_list_chromatic_number(args):
    return list_chromatic_number(parse_graph6(args["graph"]))


def _op_property_q_verdict(args):
    params = PropertyQParams(Fraction(args["delta"]), Fraction(args["D"]))
    return check_property_Q(parse_graph6(args["graph"]), params, mode="exact").verdict


def _op_minor_free_all_induced(args):
    host = parse_graph6(args["host"])
    pattern = parse_graph6(args["pattern"])
    for size in range(args["min_size"], pattern.n + 1):
        for combo in combinations(range(pattern.n), size):
            if contains_minor(host, induced_subgraph(pattern, mask_of(combo))) is not None:
                return False
    return True


def _op_pasting_minor_free(args):
    F = parse_graph6(args["graph"])
    spec = PastingSpec(F, mask_of(args["attach"]), args["copies"])
    return contains_minor(k_fold_pasting(spec), parse_graph6(args["pattern"])) is None


def _op_isolated_sampling_summary(args):
    cfg = ExperimentConfig(
        seed=args["seed"],
        sample_count=args["count"],
        sample_max_vertices=args["max_n"],
        edge_prob=args["edge_prob"],
    )
    report = pipeline_isolated(parse_graph6(args["graph"]), args["k"], cfg)
    sampling = next(s for s in report.steps if s.name == "sampling")
    return {
        "minor_free": sampling.detail["minor_free"],
        "degenerate_ok": sampling.detail["degenerate_ok"],
        "coloring_ok": sampling.detail["coloring_ok"],
    }


def _op_best_induced_connectivity(args):
    return _best_induced_connectivity(parse_graph6(args["graph"]))


REPLAY_OPS = {
    "vertex_connectivity": _op_vertex_connectivity,
    "minor_free": _op_minor_free,
    "is_clique": _op_is_clique,
    "b_nonneighbors_at_most": _op_b_nonneighbors_at_most,
    "pasting_bound_certified": _op_pasting_bound_certified,
    "list_chromatic_number": _op_list_chromatic_number,
    "property_q_verdict": _op_property_q_verdict,
    "minor_free_all_induced": _op_minor_free_all_induced,
    "pasting_minor_free": _op_pasting_minor_free,
    "isolated_sampling_summary": _op_isolated_sampling_summary,
    "best_induced_connectivity": _op_best_induced_connectivity,
}


def replay_report(report_dict: dict) -> list[dict]:
    """Re-run every certified line; each result records claim and agreement."""
    from .reports import jsonable

    results = []
    for entry in report_dict.get("certified", []):
        spec = entry["replay"]
        op = REPLAY_OPS.get(spec["op"])
        if op is None:
            results.append({"claim": entry["claim"], "ok": False, "error": f"unknown op {spec['op']}"})
            continue
        got = jsonable(op(spec["args"]))
        results.append({"claim": entry["claim"], "ok": got == spec["expect"], "got": got})
    return results


def run_pipeline(cfg: ExperimentConfig) -> RunReport:
    """Dispatch a configured pipeline run."""
    from .graphio import load_graph_text
    from pathlib import Path

    def load(graph_field: str) -> Graph:
        if graph_field and Path(graph_field).exists():
            return load_graph_text(Path(graph_field).read_text())
        return load_graph_text(graph_field)

    params = dict(cfg.params)
    if cfg.pipeline == "conn":
        return pipeline_conn(load(cfg.graph), Fraction(str(params["epsilon"])), cfg)
    if cfg.pipeline == "random":
        n = int(params.pop("n"))
        epsilon = Fraction(str(params.pop("epsilon")))
        overrides = {k: Fraction(str(v)) for k, v in params.items() if k in {"delta", "p", "D", "C"}}
        return pipeline_random(n, epsilon, overrides, cfg)
    if cfg.pipeline == "isolated":
        return pipeline_isolated(load(cfg.graph), int(params["k"]), cfg)
    if cfg.pipeline == "mader":
        return mader_step_check(load(cfg.graph), cfg)
    raise ValueError(f"unknown pipeline {cfg.pipeline!r}")
