"""Minor-model certificates, exact containment search with two independent
algorithms, clique sums, and model surgery through a gluing clique."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .errors import check_size
from .graphs import (
    Graph,
    VertexSet,
    bit_list,
    bits,
    complete_graph,
    induced_subgraph,
    is_clique,
    is_connected_subset,
    mask_of,
)

CONTRACTION_ORACLE_MAX_ORDER = 9
HADWIGER_MAX_ORDER = 12
MINOR_SUPPORT_MAX_ORDER = 10


@dataclass
class MinorModel:
    """Branch sets of a minor model: pattern vertex -> host vertex mask."""

    branch_sets: dict[int, VertexSet]

    def to_json(self) -> str:
        return json.dumps(
            {str(h): bit_list(mask) for h, mask in sorted(self.branch_sets.items())}
        )

    @classmethod
    def from_json(cls, text: str) -> "MinorModel":
        data = json.loads(text)
        return cls({int(h): mask_of(vs) for h, vs in data.items()})

    def support(self) -> VertexSet:
        s = 0
        for mask in self.branch_sets.values():
            s |= mask
        return s


def check_model(host: Graph, pattern: Graph, model: MinorModel) -> str | None:
    """None if the model is valid, else a reason naming the failed invariant."""
    sets = model.branch_sets
    for h in range(pattern.n):
        if h not in sets:
            return f"missing: no branch set for pattern vertex {h}"
    for h in sets:
        if not 0 <= h < pattern.n:
            return f"range: branch set for nonexistent pattern vertex {h}"
    host_mask = host.vertex_mask()
    seen = 0
    for h, mask in sorted(sets.items()):
        if mask & ~host_mask:
            return f"range: branch set of {h} references vertices outside the host"
        if not mask:
            return f"nonempty: branch set of {h} is empty"
        if mask & seen:
            return f"disjoint: branch set of {h} overlaps an earlier one"
        seen |= mask
    for h, mask in sorted(sets.items()):
        if not is_connected_subset(host, mask):
            return f"connectivity: branch set of {h} is disconnected in the host"
    for h1, h2 in pattern.edges():
        z1, z2 = sets[h1], sets[h2]
        if not any(host.adj[v] & z2 for v in bits(z1)):
            return f"edge: no host edge between branch sets of {h1} and {h2}"
    return None


def verify_model(host: Graph, pattern: Graph, model: MinorModel) -> bool:
    return check_model(host, pattern, model) is None


def _twin_classes(pattern: Graph) -> list[int]:
    """Class representative per vertex; vertices in one class are interchangeable.

    Non-adjacent vertices with equal open neighborhoods and adjacent vertices
    with equal closed neighborhoods are twins; permuting a twin class is an
    automorphism. The two kinds never mix on a vertex, so using whichever
    applies is sound.
    """
    rep = list(range(pattern.n))
    open_groups: dict[int, list[int]] = {}
    for v in range(pattern.n):
        open_groups.setdefault(pattern.adj[v], []).append(v)
    grouped = set()
    for members in open_groups.values():
        if len(members) > 1:
            for v in members:
                rep[v] = members[0]
                grouped.add(v)
    closed_groups: dict[int, list[int]] = {}
    for v in range(pattern.n):
        if v not in grouped:
            closed_groups.setdefault(pattern.adj[v] | 1 << v, []).append(v)
    for members in closed_groups.values():
        if len(members) > 1:
            for v in members:
                rep[v] = members[0]
    return rep


def contains_minor(host: Graph, pattern: Graph) -> MinorModel | None:
    """A valid minor model of the pattern in the host, or None.

    Backtracking over branch sets: pattern vertices by descending degree,
    candidate branch sets by ascending mask value. Prunes on remaining
    host-vertex budget, on the host edge budget (a model needs one host edge
    per pattern edge plus a spanning tree inside every branch set), and on
    pattern edges that no remaining host vertex can still realize. Twin
    pattern vertices are searched with increasing branch-set minima, which
    skips permuted duplicates. The first model found is returned, so the
    witness is deterministic.
    """
    if pattern.n == 0:
        return MinorModel({})
    if host.n < pattern.n or host.edge_count() < pattern.edge_count():
        return None

    twin = _twin_classes(pattern)
    order = sorted(range(pattern.n), key=lambda v: (-pattern.degree(v), twin[v], v))
    same_class_as_prev = [False] + [
        twin[order[i]] == twin[order[i - 1]] for i in range(1, len(order))
    ]
    host_e = host.edge_count()
    pattern_e = pattern.edge_count()
    # pattern adjacency restated in search positions
    pos_of = {v: i for i, v in enumerate(order)}
    earlier_nbrs = [
        [pos_of[u] for u in bits(pattern.adj[order[i]]) if pos_of[u] < i]
        for i in range(pattern.n)
    ]
    last_nbr_pos = [
        max((pos_of[u] for u in bits(pattern.adj[order[i]])), default=-1)
        for i in range(pattern.n)
    ]

    assigned: list[VertexSet] = []
    reach: list[VertexSet] = []  # host neighborhoods of each assigned branch set

    def submasks_asc(m: int) -> list[int]:
        out = []
        s = m
        while s:
            out.append(s)
            s = (s - 1) & m
        out.reverse()
        return out

    def search(depth: int, avail: VertexSet, tree_edges: int) -> dict[int, VertexSet] | None:
        if depth == pattern.n:
            return {order[i]: assigned[i] for i in range(pattern.n)}
        remaining = pattern.n - depth - 1
        max_size = avail.bit_count() - remaining
        if max_size < 1:
            return None
        prev_min = (assigned[-1] & -assigned[-1]) if same_class_as_prev[depth] else 0
        for Z in submasks_asc(avail):
            if Z.bit_count() > max_size:
                continue
            if (Z & -Z) <= prev_min and prev_min:
                continue
            if host_e < pattern_e + tree_edges + Z.bit_count() - 1:
                continue
            if not all(reach[j] & Z for j in earlier_nbrs[depth]):
                continue
            if not is_connected_subset(host, Z):
                continue
            nxt_avail = avail & ~Z
            nb = 0
            for v in bits(Z):
                nb |= host.adj[v]
            nb &= ~Z
            # every pattern edge into positions beyond this one must stay realizable
            viable = not (last_nbr_pos[depth] > depth and not nb & nxt_avail)
            if viable:
                for j in range(depth):
                    if last_nbr_pos[j] > depth and not reach[j] & nxt_avail:
                        viable = False
                        break
            if not viable:
                continue
            assigned.append(Z)
            reach.append(nb)
            got = search(depth + 1, nxt_avail, tree_edges + Z.bit_count() - 1)
            assigned.pop()
            reach.pop()
            if got is not None:
                return got
        return None

    sets = search(0, host.vertex_mask(), 0)
    return MinorModel(sets) if sets is not None else None


# ---------------------------------------------------------------------------
# independent oracle: delete/contract recursion


def _delete_vertex(n: int, adj: tuple[int, ...], v: int) -> tuple[int, tuple[int, ...]]:
    keep = [u for u in range(n) if u != v]
    index = {u: i for i, u in enumerate(keep)}
    rows = []
    for u in keep:
        row = 0
        m = adj[u]
        for w in bits(m):
            if w != v:
                row |= 1 << index[w]
        rows.append(row)
    return n - 1, tuple(rows)


def _contract_edge(n: int, adj: tuple[int, ...], u: int, v: int) -> tuple[int, tuple[int, ...]]:
    # merge v into u, then drop v
    merged = list(adj)
    merged[u] = (adj[u] | adj[v]) & ~(1 << u) & ~(1 << v)
    for w in bits(adj[v]):
        if w != u:
            merged[w] |= 1 << u
    keep = [w for w in range(n) if w != v]
    index = {w: i for i, w in enumerate(keep)}
    rows = []
    for w in keep:
        row = 0
        for x in bits(merged[w]):
            if x != v:
                row |= 1 << index[x]
        rows.append(row)
    return n - 1, tuple(rows)


def _refine_key(n: int, adj: tuple[int, ...]) -> tuple:
    # iso-invariant relabeling by iterated degree refinement; not canonical,
    # but identical labeled graphs always collide, which is all memo needs
    color = [adj[v].bit_count() for v in range(n)]
    for _ in range(3):
        color = [
            (color[v], tuple(sorted(color[u] for u in bits(adj[v])))) for v in range(n)
        ]
    perm = sorted(range(n), key=lambda v: (color[v], v))
    index = {v: i for i, v in enumerate(perm)}
    rows = []
    for v in perm:
        row = 0
        for u in bits(adj[v]):
            row |= 1 << index[u]
        rows.append(row)
    return (n, tuple(rows))


def _spanning_subgraph_iso(pn: int, padj: tuple[int, ...], hn: int, hadj: tuple[int, ...]) -> bool:
    """Is there a bijection of pattern onto host mapping edges into edges?"""
    order = sorted(range(pn), key=lambda v: -padj[v].bit_count())
    image = [-1] * pn
    used = [False] * hn

    def place(i: int) -> bool:
        if i == pn:
            return True
        p = order[i]
        pdeg = padj[p].bit_count()
        for h in range(hn):
            if used[h] or hadj[h].bit_count() < pdeg:
                continue
            ok = True
            for q in bits(padj[p]):
                img = image[q]
                if img >= 0 and not hadj[h] >> img & 1:
                    ok = False
                    break
            if ok:
                image[p] = h
                used[h] = True
                if place(i + 1):
                    return True
                used[h] = False
                image[p] = -1
        return False

    return place(0)


def _subgraph_iso(host: Graph, pattern: Graph) -> bool:
    """Is the pattern isomorphic to a (not necessarily induced) subgraph?"""
    order = sorted(range(pattern.n), key=lambda v: -pattern.degree(v))
    image = [-1] * pattern.n
    used = [False] * host.n

    def place(i: int) -> bool:
        if i == pattern.n:
            return True
        p = order[i]
        pdeg = pattern.degree(p)
        for h in range(host.n):
            if used[h] or host.degree(h) < pdeg:
                continue
            ok = True
            for q in bits(pattern.adj[p]):
                img = image[q]
                if img >= 0 and not host.has_edge(h, img):
                    ok = False
                    break
            if ok:
                image[p] = h
                used[h] = True
                if place(i + 1):
                    return True
                used[h] = False
                image[p] = -1
        return False

    return place(0)


def contains_minor_contraction_oracle(
    host: Graph, pattern: Graph, *, max_host_order: int = CONTRACTION_ORACLE_MAX_ORDER
) -> bool:
    """Independent containment oracle: recursion over vertex deletion and
    edge contraction with memoization on refined relabelings.

    Only feasible for small hosts; the default guard admits 9 vertices.
    """
    check_size(host.n, max_host_order, "host order for the contraction oracle")
    pn, padj = pattern.n, pattern.adj
    pe = pattern.edge_count()
    memo: dict[tuple, bool] = {}

    def rec(n: int, adj: tuple[int, ...], e: int) -> bool:
        if pn == 0:
            return True
        if n < pn or e < pe:
            return False
        if n == pn:
            return _spanning_subgraph_iso(pn, padj, n, adj)
        key = _refine_key(n, adj)
        if key in memo:
            return memo[key]
        result = False
        for v in range(n):
            dn, dadj = _delete_vertex(n, adj, v)
            de = sum(r.bit_count() for r in dadj) // 2
            if rec(dn, dadj, de):
                result = True
                break
        if not result:
            for u in range(n):
                for v in bits(adj[u] >> (u + 1) << (u + 1)):
                    cn, cadj = _contract_edge(n, adj, u, v)
                    ce = sum(r.bit_count() for r in cadj) // 2
                    if rec(cn, cadj, ce):
                        result = True
                        break
                if result:
                    break
        memo[key] = result
        return result

    if _subgraph_iso(host, pattern):  # cheap sufficient case
        return True
    return rec(host.n, host.adj, host.edge_count())


def hadwiger_number(G: Graph, *, max_order: int = HADWIGER_MAX_ORDER) -> int:
    """Largest t such that G has a complete minor on t vertices."""
    check_size(G.n, max_order, "graph order for hadwiger_number")
    t = 0
    while t < G.n and contains_minor(G, complete_graph(t + 1)) is not None:
        t += 1
    return t


# ---------------------------------------------------------------------------
# clique sums


@dataclass(frozen=True)
class CliqueSumSpec:
    """Two graphs and an injective identification of a clique of g1 with one of g2."""

    g1: Graph
    g2: Graph
    ident: tuple[tuple[int, int], ...]  # (vertex of g1, vertex of g2) pairs

    @classmethod
    def from_mapping(cls, g1: Graph, g2: Graph, ident: dict[int, int]) -> "CliqueSumSpec":
        return cls(g1, g2, tuple(sorted(ident.items())))

    def validate(self) -> None:
        sources = [a for a, _ in self.ident]
        targets = [b for _, b in self.ident]
        if len(set(sources)) != len(sources) or len(set(targets)) != len(targets):
            raise ValueError("identification must be injective")
        if any(not 0 <= a < self.g1.n for a in sources):
            raise ValueError("identification references vertices outside g1")
        if any(not 0 <= b < self.g2.n for b in targets):
            raise ValueError("identification references vertices outside g2")
        if not is_clique(self.g1, mask_of(sources)):
            raise ValueError("identified set is not a clique in g1")
        if not is_clique(self.g2, mask_of(targets)):
            raise ValueError("identified set is not a clique in g2")

    def g2_vertex_map(self) -> dict[int, int]:
        """Map of g2 vertices into the union graph produced by clique_sum."""
        to_g1 = {b: a for a, b in self.ident}
        mapped = {}
        fresh = self.g1.n
        for w in range(self.g2.n):
            if w in to_g1:
                mapped[w] = to_g1[w]
            else:
                mapped[w] = fresh
                fresh += 1
        return mapped


def clique_sum(spec: CliqueSumSpec) -> Graph:
    """Union of g1 and g2 overlapping exactly in the identified clique.

    Layout: g1 keeps its labels 0..v(g1)-1; unidentified g2 vertices follow
    in ascending g2 order.
    """
    spec.validate()
    n = spec.g1.n + spec.g2.n - len(spec.ident)
    rows = list(spec.g1.adj) + [0] * (spec.g2.n - len(spec.ident))
    g2_map = spec.g2_vertex_map()
    for u, v in spec.g2.edges():
        mu, mv = g2_map[u], g2_map[v]
        rows[mu] |= 1 << mv
        rows[mv] |= 1 << mu
    return Graph(n, tuple(rows))


def restrict_model_through_clique(
    host_union: Graph, C: VertexSet, side: VertexSet, model: MinorModel
) -> MinorModel:
    """Project a minor model of a clique-sum onto one side.

    ``side`` must contain the gluing clique C. Pattern vertices whose branch
    sets avoid ``side`` are dropped; every kept branch set becomes its
    intersection with ``side``, which stays connected because any excursion
    through the far side can be shortcut inside the clique C.
    """
    if C & ~side:
        raise ValueError("side must contain the gluing clique")
    if not is_clique(host_union, C):
        raise ValueError("C does not induce a clique in the union graph")
    far = host_union.vertex_mask() & ~side
    for v in bits(far & ~C):
        if host_union.adj[v] & side & ~C:
            raise ValueError(
                f"vertex {v} of the far side has neighbors beyond the clique; "
                "the host is not a clique sum along C"
            )
    restricted = {}
    for h, mask in model.branch_sets.items():
        inter = mask & side
        if not inter:
            continue
        if mask & far and not mask & C:
            raise ValueError(
                f"branch set of pattern vertex {h} crosses to the far side "
                "without meeting the clique"
            )
        restricted[h] = inter
    return MinorModel(restricted)


def find_minimum_minor_support(
    G: Graph, F: Graph, *, max_order: int = MINOR_SUPPORT_MAX_ORDER
) -> VertexSet | None:
    """Minimum-cardinality X with an F-minor inside G[X], or None.

    Increasing-size subset sweep; within one size, subsets are tried in
    lexicographic vertex order, so the witness is deterministic.
    """
    check_size(G.n, max_order, "graph order for find_minimum_minor_support")
    if F.n == 0:
        return 0
    for size in range(F.n, G.n + 1):
        for combo in combinations(range(G.n), size):
            X = mask_of(combo)
            if contains_minor(induced_subgraph(G, X), F) is not None:
                return X
    return None
