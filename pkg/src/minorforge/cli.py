"""The forge command line: samplers, exact checks, bounds, pastings, and
pipeline runs emitting JSON reports plus CSV summaries."""

from __future__ import annotations

import functools
import json
import sys
from fractions import Fraction
from pathlib import Path

import click

from .coloring import ListAssignment, is_l_colorable, list_chromatic_number, verify_choosability_witness
from .constructions import (
    PastingSpec,
    TwoCliquePartition,
    check_pasting_lower_bound,
    k_fold_pasting,
)
from .errors import BudgetExceededError, SizeGuardError
from .graphio import load_graph_text, to_graph6
from .graphs import Graph, mask_of
from .minors import contains_minor, hadwiger_number, verify_model
from .pipelines import (
    mader_step_check,
    pipeline_conn,
    pipeline_isolated,
    pipeline_random,
    replay_report,
)
from .random_models import (
    PropertyPParams,
    PropertyQParams,
    check_property_P,
    check_property_Q,
    chernoff_lower,
    chernoff_upper,
    constant_C,
    constant_D,
    m_of,
    propQ_failure_bound,
    q_n_bound,
    sample_bipartite,
    sample_gnm_sequential,
    sample_gnm_uniform,
)
from .reports import ExperimentConfig, jsonable, load_report_dict, write_run_dir


def _load_graph(value: str) -> Graph:
    path = Path(value)
    if path.exists():
        return load_graph_text(path.read_text())
    return load_graph_text(value)


def _emit(payload) -> None:
    click.echo(json.dumps(jsonable(payload), sort_keys=True, indent=2))


def _vertex_list(text: str) -> list[int]:
    if not text.strip():
        return []
    return [int(part) for part in text.split(",")]


def forge_errors(fn):
    """Convert domain errors into clean nonzero exits."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (SizeGuardError, BudgetExceededError, ValueError, RuntimeError, OSError) as exc:
            raise click.ClickException(str(exc)) from exc

    return wrapper


@click.group()
def main():
    """Exact desk-scale toolkit for minor-free gadgets and list-coloring bounds."""


# ---------------------------------------------------------------------------
# sampling


@main.group()
def sample():
    """Seeded random graph samplers."""


@sample.command("gnm")
@click.option("-n", type=int, required=True, help="Vertex count")
@click.option("-m", type=int, required=True, help="Edge count")
@click.option("--seed", type=int, required=True, help="Generator seed (mandatory)")
@click.option("--algo", type=click.Choice(["uniform", "sequential"]), default="uniform", show_default=True)
@forge_errors
def sample_gnm_cmd(n, m, seed, algo):
    """Uniform n-vertex graph with exactly m edges."""
    sampler = sample_gnm_sequential if algo == "sequential" else sample_gnm_uniform
    G = sampler(n, m, seed)
    _emit({"graph6": to_graph6(G), "n": G.n, "edges": G.edge_count(), "seed": seed, "algo": algo})


@sample.command("bipartite")
@click.option("-m", type=int, required=True, help="Size of part A")
@click.option("-n", type=int, required=True, help="Size of part B")
@click.option("-p", type=float, required=True, help="Cross-edge probability")
@click.option("--seed", type=int, required=True, help="Generator seed (mandatory)")
@forge_errors
def sample_bipartite_cmd(m, n, p, seed):
    """Bipartite graph with independent cross edges."""
    B = sample_bipartite(m, n, p, seed)
    _emit({
        "a_size": B.a_size,
        "b_size": B.b_size,
        "rows": [sorted(b for b in range(B.b_size) if B.has_edge(a, b)) for a in range(B.a_size)],
        "edges": B.edge_count(),
        "seed": seed,
    })


# ---------------------------------------------------------------------------
# exact checks


@main.command("check-minor")
@click.option("--host", required=True, help="Host graph (graph6, edge list, or path)")
@click.option("--pattern", required=True, help="Pattern graph (graph6, edge list, or path)")
@click.option("--hadwiger", is_flag=True, help="Also report the largest complete minor order")
@forge_errors
def check_minor_cmd(host, pattern, hadwiger):
    """Exact minor containment with a verified branch-set witness."""
    G, H = _load_graph(host), _load_graph(pattern)
    model = contains_minor(G, H)
    payload = {"contains": model is not None}
    if model is not None:
        payload["model"] = json.loads(model.to_json())
        payload["model_verified"] = verify_model(G, H, model)
    if hadwiger:
        payload["hadwiger_number"] = hadwiger_number(G)
    _emit(payload)


@main.command("check-choosability")
@click.option("--graph", required=True, help="Graph (graph6, edge list, or path)")
@click.option("--lists", "lists_path", default=None, help="ListAssignment JSON file")
@click.option("-k", type=int, default=None, help="Claimed choosability level to certify against")
@click.option("--exact-chi-l", is_flag=True, help="Compute the exact list chromatic number")
@forge_errors
def check_choosability_cmd(graph, lists_path, k, exact_chi_l):
    """List-colorability of one instance, or the exact list chromatic number."""
    G = _load_graph(graph)
    payload = {}
    if lists_path is not None:
        L = ListAssignment.from_json(Path(lists_path).read_text())
        coloring = is_l_colorable(G, L)
        payload["colorable"] = coloring is not None
        if coloring is not None:
            payload["coloring"] = list(coloring)
        if k is not None:
            payload["witness_certifies_k_plus_1"] = verify_choosability_witness(G, L, k)
            payload["k"] = k
    if exact_chi_l:
        payload["list_chromatic_number"] = list_chromatic_number(G)
    if not payload:
        raise click.UsageError("nothing to do: pass --lists and/or --exact-chi-l")
    _emit(payload)


@main.group("check-property")
def check_property():
    """Exact or falsifying pseudo-random property checks."""


@check_property.command("q")
@click.option("--graph", required=True, help="Graph to check")
@click.option("--delta", required=True, help="Linear-size fraction (rational, e.g. 1/2)")
@click.option("-D", "-d", "--density", "D", required=True, help="Edge-density constant D > 1")
@click.option("--pairs", type=click.Choice(["minimal", "full"]), default="minimal", show_default=True)
@click.option("--mode", type=click.Choice(["exact", "falsify"]), default="exact", show_default=True)
@click.option("--budget", type=int, default=10000, show_default=True)
@click.option("--seed", type=int, default=None, help="Seed (mandatory for falsify mode)")
@forge_errors
def check_property_q_cmd(graph, delta, D, pairs, mode, budget, seed):
    """Edge spread between all pairs of linear-size disjoint vertex sets."""
    if mode == "falsify" and seed is None:
        raise click.UsageError("falsify mode requires --seed")
    H = _load_graph(graph)
    params = PropertyQParams(Fraction(delta), Fraction(D))
    report = check_property_Q(H, params, mode, pairs=pairs, budget=budget, seed=seed)
    _emit({
        "verdict": report.verdict,
        "witness": report.witness,
        "nodes_explored": report.nodes_explored,
        "trials": report.trials,
    })


@check_property.command("p")
@click.option("--graph", required=True, help="Pattern graph H")
@click.option("--bipartite", "bip_path", required=True,
              help="Bipartite host as JSON {a_size, b_size, edges: [[a,b],...]} or a path")
@click.option("--delta", required=True, help="Fraction delta (rational)")
@click.option("-s", type=int, required=True, help="Pattern edge threshold")
@click.option("--mode", type=click.Choice(["exact", "falsify"]), default="exact", show_default=True)
@click.option("--k-l-range", type=click.Choice(["full", "minimal"]), default="full", show_default=True)
@click.option("--budget", type=int, default=10000, show_default=True)
@click.option("--node-budget", type=int, default=2_000_000, show_default=True)
@click.option("--seed", type=int, default=None, help="Seed (mandatory for falsify mode)")
@forge_errors
def check_property_p_cmd(graph, bip_path, delta, s, mode, k_l_range, budget, node_budget, seed):
    """Joined-pair property of a bipartite host against a pattern graph."""
    if mode == "falsify" and seed is None:
        raise click.UsageError("falsify mode requires --seed")
    H = _load_graph(graph)
    text = Path(bip_path).read_text() if Path(bip_path).exists() else bip_path
    spec = json.loads(text)
    from .graphs import BipartiteGraph

    B = BipartiteGraph.from_edges(spec["a_size"], spec["b_size"],
                                  [tuple(e) for e in spec["edges"]])
    params = PropertyPParams(Fraction(delta), s)
    report = check_property_P(B, H, params, mode, k_l_range=k_l_range,
                              node_budget=node_budget, budget=budget, seed=seed)
    _emit({
        "verdict": report.verdict,
        "witness": report.witness,
        "nodes_explored": report.nodes_explored,
        "trials": report.trials,
    })


# ---------------------------------------------------------------------------
# bounds


@main.group()
def bounds():
    """Evaluable probability bounds and constants."""


@bounds.command("chernoff")
@click.option("--mu", required=True, help="Mean of the binomial variable")
@click.option("--delta", required=True, help="Relative deviation in (0, 1]")
@forge_errors
def bounds_chernoff_cmd(mu, delta):
    """Upper and lower tail bounds at relative deviation delta."""
    mu_v, delta_v = Fraction(mu), Fraction(delta)
    _emit({
        "upper_tail": chernoff_upper(mu_v, delta_v),
        "lower_tail": chernoff_lower(mu_v, delta_v),
        "bound": chernoff_upper(mu_v, delta_v),
    })


@bounds.command("constants")
@click.option("--delta", required=True, help="Fraction delta (rational)")
@click.option("-p", required=True, help="Edge probability (rational)")
@click.option("-n", type=int, default=None, help="Optional instance size for m and the failure bounds")
@forge_errors
def bounds_constants_cmd(delta, p, n):
    """Derived constants D and C, plus size-dependent bounds when n is given."""
    delta_v, p_v = Fraction(delta), Fraction(p)
    D = constant_D(delta_v, p_v)
    C = constant_C(delta_v, p_v)
    payload = {"D": D, "C": C}
    if n is not None:
        m, clamped = m_of(n, C)
        payload.update({
            "m": m,
            "m_clamped": clamped,
            "q_n_bound": q_n_bound(delta_v, p_v, D, n),
            "property_q_failure_bound": propQ_failure_bound(D, n),
        })
    _emit(payload)


# ---------------------------------------------------------------------------
# pasting


@main.command("pasting")
@click.option("--graph", required=True, help="Base graph F")
@click.option("--attach", required=True, help='Attachment vertices, e.g. "0,1"')
@click.option("-K", "-k", "--copies", "copies", type=int, required=True, help="Number of copies")
@forge_errors
def pasting_cmd(graph, attach, copies):
    """Materialize the K-fold pasting of a graph at an attachment set."""
    F = _load_graph(graph)
    spec = PastingSpec(F, mask_of(_vertex_list(attach)), copies)
    pasted = k_fold_pasting(spec)
    _emit({
        "graph6": to_graph6(pasted),
        "n": pasted.n,
        "edges": pasted.edge_count(),
        "copies": copies,
    })


@main.command("verify-pasting-bound")
@click.option("--graph", required=True, help="Two-clique gadget F")
@click.option("--part-a", required=True, help='Clique A vertices, e.g. "0,1"')
@click.option("--part-b", required=True, help='Clique B vertices, e.g. "2,3,4"')
@click.option("-d", "--slack", "slack", type=int, required=True,
              help="Allowed missing A-neighbors per B-vertex")
@forge_errors
def verify_pasting_bound_cmd(graph, part_a, part_b, slack):
    """Certify the pasting lower bound without materializing the pasting."""
    F = _load_graph(graph)
    part = TwoCliquePartition(F, mask_of(_vertex_list(part_a)), mask_of(_vertex_list(part_b)), slack)
    check = check_pasting_lower_bound(part)
    _emit({
        "certified": check.certified,
        "bound": check.bound,
        "copies": check.copies,
        "colorings_checked": check.colorings_checked,
        "counterexample": check.counterexample,
    })


# ---------------------------------------------------------------------------
# pipelines


def _finish_pipeline(report, out):
    payload = report.to_dict()
    if out is not None:
        write_run_dir(report, out)
        payload["output_dir"] = str(out)
    _emit(payload)


@main.group()
def pipeline():
    """End-to-end desk-scale pipeline runs."""


@pipeline.command("conn")
@click.option("--graph", default=None, help="Graph H (required unless --config provides it)")
@click.option("--epsilon", default=None, help="Rational epsilon in (0, 1)")
@click.option("--seed", type=int, default=None, help="Seed (mandatory unless --config provides it)")
@click.option("--attempts", type=int, default=200, show_default=True)
@click.option("--config", "config_path", default=None, help="Experiment config file (JSON or INI)")
@click.option("--out", default=None, help="Run directory for report.json and summary.csv")
@forge_errors
def pipeline_conn_cmd(graph, epsilon, seed, attempts, config_path, out):
    """Connectivity-driven bound pipeline."""
    cfg = ExperimentConfig.from_file(config_path) if config_path else ExperimentConfig()
    cfg.pipeline = "conn"
    if graph:
        cfg.graph = graph
    if seed is not None:
        cfg.seed = seed
    cfg.attempts = attempts
    if epsilon is not None:
        cfg.params["epsilon"] = epsilon
    if cfg.graph is None or "epsilon" not in cfg.params:
        raise click.UsageError("pipeline conn needs --graph and --epsilon (or a config providing them)")
    if cfg.seed is None:
        raise click.UsageError("pipeline conn is randomized and requires --seed")
    report = pipeline_conn(_load_graph(cfg.graph), Fraction(str(cfg.params["epsilon"])), cfg)
    _finish_pipeline(report, out or cfg.output_dir)


@pipeline.command("random")
@click.option("-n", type=int, default=None, help="Instance size")
@click.option("--epsilon", default=None, help="Rational epsilon in (0, 2)")
@click.option("--delta", default=None, help="Override the derived delta")
@click.option("-p", default=None, help="Override the edge probability")
@click.option("-D", "--density", "D", default=None, help="Override the constant D")
@click.option("--seed", type=int, default=None, help="Seed (mandatory)")
@click.option("--attempts", type=int, default=200, show_default=True)
@click.option("--config", "config_path", default=None, help="Experiment config file (JSON or INI)")
@click.option("--out", default=None, help="Run directory")
@forge_errors
def pipeline_random_cmd(n, epsilon, delta, p, D, seed, attempts, config_path, out):
    """Sparse pseudo-random bound pipeline."""
    cfg = ExperimentConfig.from_file(config_path) if config_path else ExperimentConfig()
    cfg.pipeline = "random"
    if seed is not None:
        cfg.seed = seed
    cfg.attempts = attempts
    params = dict(cfg.params)
    if n is not None:
        params["n"] = n
    if epsilon is not None:
        params["epsilon"] = epsilon
    for key, value in (("delta", delta), ("p", p), ("D", D)):
        if value is not None:
            params[key] = value
    if "n" not in params or "epsilon" not in params:
        raise click.UsageError("pipeline random needs -n and --epsilon (or a config providing them)")
    if cfg.seed is None:
        raise click.UsageError("pipeline random is randomized and requires --seed")
    overrides = {k: Fraction(str(params[k])) for k in ("delta", "p", "D", "C") if k in params}
    report = pipeline_random(int(params["n"]), Fraction(str(params["epsilon"])), overrides, cfg)
    _finish_pipeline(report, out or cfg.output_dir)


@pipeline.command("isolated")
@click.option("--graph", default=None, help="Base graph F")
@click.option("-k", type=int, default=None, help="Number of isolated vertices to add")
@click.option("--seed", type=int, default=None, help="Seed (mandatory)")
@click.option("--samples", type=int, default=300, show_default=True)
@click.option("--max-n", type=int, default=8, show_default=True)
@click.option("--edge-prob", type=float, default=0.5, show_default=True)
@click.option("--config", "config_path", default=None, help="Experiment config file (JSON or INI)")
@click.option("--out", default=None, help="Run directory")
@forge_errors
def pipeline_isolated_cmd(graph, k, seed, samples, max_n, edge_prob, config_path, out):
    """Isolated-vertex padding pipeline."""
    cfg = ExperimentConfig.from_file(config_path) if config_path else ExperimentConfig()
    cfg.pipeline = "isolated"
    if graph:
        cfg.graph = graph
    if seed is not None:
        cfg.seed = seed
    cfg.sample_count = samples
    cfg.sample_max_vertices = max_n
    cfg.edge_prob = edge_prob
    if k is not None:
        cfg.params["k"] = k
    if cfg.graph is None or "k" not in cfg.params:
        raise click.UsageError("pipeline isolated needs --graph and -k (or a config providing them)")
    if cfg.seed is None:
        raise click.UsageError("pipeline isolated is randomized and requires --seed")
    report = pipeline_isolated(_load_graph(cfg.graph), int(cfg.params["k"]), cfg)
    _finish_pipeline(report, out or cfg.output_dir)


@pipeline.command("mader")
@click.option("--graph", required=True, help="Graph H")
@click.option("--out", default=None, help="Run directory")
@forge_errors
def pipeline_mader_cmd(graph, out):
    """Average-degree to connected-subgraph search check (deterministic)."""
    report = mader_step_check(_load_graph(graph))
    _finish_pipeline(report, out)


@main.command("replay")
@click.option("--report", "report_path", required=True, help="report.json of a finished run")
@forge_errors
def replay_cmd(report_path):
    """Re-derive every certified line of a saved report."""
    data = load_report_dict(report_path)
    results = replay_report(data)
    ok = all(r["ok"] for r in results)
    _emit({"all_reproduced": ok, "lines": results})
    if not ok:
        sys.exit(1)


if __name__ == "__main__":
    main()
