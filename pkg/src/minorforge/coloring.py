"""Exact list-colorability and choosability decisions with certificates.

Colors are small nonnegative integers. A coloring is a plain tuple of
per-vertex colors; properness is a checkable predicate, not a structural
guarantee.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import check_size
from .graphs import (
    Graph,
    bit_list,
    bits,
    degeneracy,
    induced_subgraph,
    is_connected_subset,
)

Coloring = tuple[int, ...]

LIST_CHROMATIC_MAX_ORDER = 8
LIST_CHROMATIC_MAX_K = 9


@dataclass(frozen=True)
class ListAssignment:
    """Per-vertex finite color sets."""

    lists: tuple[frozenset[int], ...]

    @classmethod
    def from_lists(cls, lists) -> "ListAssignment":
        return cls(tuple(frozenset(colors) for colors in lists))

    @classmethod
    def uniform(cls, n: int, colors) -> "ListAssignment":
        shared = frozenset(colors)
        return cls((shared,) * n)

    def __len__(self) -> int:
        return len(self.lists)

    def min_size(self) -> int:
        return min((len(s) for s in self.lists), default=0)

    def to_json(self) -> str:
        return json.dumps({"lists": [sorted(s) for s in self.lists]})

    @classmethod
    def from_json(cls, text: str) -> "ListAssignment":
        data = json.loads(text)
        return cls.from_lists(data["lists"])


def is_proper_coloring(G: Graph, coloring) -> bool:
    """No edge is monochromatic."""
    for u, v in G.edges():
        if coloring[u] == coloring[v]:
            return False
    return True


def respects_lists(L: ListAssignment, coloring) -> bool:
    return all(c in s for c, s in zip(coloring, L.lists))


def _solve_list_coloring(n: int, adj: tuple[int, ...], list_masks: list[int]) -> list[int] | None:
    """Backtracking on bitmask color lists; colors are bit positions.

    Vertex choice is fewest-remaining-colors with lowest index as the tie
    break; colors are tried in ascending order, removing each choice from
    uncolored neighbors.
    """
    remaining = list(list_masks)
    color = [-1] * n

    def solve(uncolored: int) -> bool:
        if not uncolored:
            return True
        best, best_size = -1, None
        for v in bits(uncolored):
            size = remaining[v].bit_count()
            if size == 0:
                return False
            if best_size is None or size < best_size:
                best, best_size = v, size
        v = best
        avail = remaining[v]
        for c in bits(avail):
            cbit = 1 << c
            color[v] = c
            touched = 0
            dead = False
            for u in bits(adj[v] & uncolored):
                if u != v and remaining[u] & cbit:
                    remaining[u] ^= cbit
                    touched |= 1 << u
                    if not remaining[u]:
                        dead = True
            if not dead and solve(uncolored ^ (1 << v)):
                return True
            for u in bits(touched):
                remaining[u] |= cbit
            color[v] = -1
        return False

    if solve((1 << n) - 1):
        return color
    return None


def is_l_colorable(G: Graph, L: ListAssignment) -> Coloring | None:
    """A proper coloring with c(v) in L(v), or None.

    Exact backtracking choosing next the vertex with fewest remaining
    feasible colors, with color-set propagation to neighbors.
    """
    if len(L.lists) != G.n:
        raise ValueError("need one color list per vertex")
    palette = sorted(set().union(*L.lists)) if G.n else []
    index = {c: i for i, c in enumerate(palette)}
    masks = [sum(1 << index[c] for c in s) for s in L.lists]
    solved = _solve_list_coloring(G.n, G.adj, masks)
    if solved is None:
        return None
    return tuple(palette[i] for i in solved)


def verify_choosability_witness(G: Graph, L: ListAssignment, k: int) -> bool:
    """True iff every list has >= k colors and G is not L-colorable.

    A true result certifies that the list chromatic number is at least k+1.
    """
    if len(L.lists) != G.n:
        raise ValueError("need one color list per vertex")
    if any(len(s) < k for s in L.lists):
        return False
    return is_l_colorable(G, L) is None


def _alon_tarsi_certifies(H: Graph, k: int) -> bool:
    """True when the graph polynomial of H has a nonzero coefficient on a
    monomial with every degree below k, which certifies k-choosability.

    Expands prod (x_u - x_v) over the edges, discarding monomials as soon
    as a degree reaches k. An empty expansion is merely inconclusive.
    """
    if H.edge_count() > H.n * (k - 1):
        return False
    coeffs: dict[tuple[int, ...], int] = {(0,) * H.n: 1}
    for u, v in H.edges():
        nxt: dict[tuple[int, ...], int] = {}
        for degs, c in coeffs.items():
            if degs[u] < k - 1:
                bumped = degs[:u] + (degs[u] + 1,) + degs[u + 1 :]
                nxt[bumped] = nxt.get(bumped, 0) + c
            if degs[v] < k - 1:
                bumped = degs[:v] + (degs[v] + 1,) + degs[v + 1 :]
                nxt[bumped] = nxt.get(bumped, 0) - c
        coeffs = {t: c for t, c in nxt.items() if c}
        if not coeffs:
            return False
    return True


def _induced_structure(H: Graph, P: int, cache: dict) -> tuple[list[int], list[int]]:
    got = cache.get(P)
    if got is None:
        verts = bit_list(P)
        index = {v: i for i, v in enumerate(verts)}
        adj = []
        for v in verts:
            row = 0
            for u in bits(H.adj[v] & P):
                row |= 1 << index[u]
            adj.append(row)
        got = (verts, adj)
        cache[P] = got
    return got


def _solve_on_subset(H: Graph, P: int, masks: list[int], cache: dict | None = None) -> bool:
    """Is the induced subproblem on P colorable from the given list masks?"""
    verts, adj = _induced_structure(H, P, cache if cache is not None else {})
    return _solve_list_coloring(len(verts), tuple(adj), [masks[v] for v in verts]) is not None


def _capped_uncolorable_supports(H: Graph, k: int) -> list[int] | None:
    """Support multiset (with multiplicity) of an uncolorable k-assignment
    covering all of H, or None.

    Assignments are enumerated up to color renaming as non-increasing
    sequences of supports (the set of vertices whose list holds a color).
    The caller sweeps induced subgraphs in ascending order, so every proper
    induced subgraph is already known k-choosable here; that justifies the
    exact reductions below on a minimal witness:

    - A support never isolates one of its vertices: a color absent from a
      member's neighborhood could color that member, which then deletes.
    - A support never repeats chi(H[S]) times: that many copies color S
      internally (one copy per color class) and the untouched remainder is
      a choosable proper subgraph. Supports inducing no edge never occur.
    - Two colors with disjoint supports merge into one (recoloring the
      merged class splits back into the original two), so all supports
      pairwise intersect; counting intersecting pairs through vertices
      gives at most n*k(k-1)/2, which caps the number of color instances
      and, with sizes non-increasing, lower-bounds every prefix's sizes
      against the remaining coverage.
    - A branch dies once the positive-coverage part is colorable from its
      current lists: later colors are fresh instances, so they cannot
      clash with the fixed choices, and the untouched vertices form a
      choosable proper subgraph however the adversary fills them.
    """
    n = H.n
    full = (1 << n) - 1
    supports = []
    caps = []
    for m in range(1, full + 1):
        # a color unseen in some member's neighborhood could color that
        # member and delete it, so supports never isolate a vertex
        if m.bit_count() >= 2 and all(H.adj[v] & m for v in bits(m)):
            cap = chromatic_number(induced_subgraph(H, m)) - 1
            if cap >= 1:
                supports.append(m)
                caps.append(cap)
    order = sorted(range(len(supports)), key=lambda i: (-supports[i].bit_count(), -supports[i]))
    supports = [supports[i] for i in order]
    caps = [caps[i] for i in order]
    last_idx = [max((i for i, S in enumerate(supports) if S >> v & 1), default=-1) for v in range(n)]
    pair_budget = n * k * (k - 1) // 2
    max_colors = 1
    while (max_colors + 1) * max_colors // 2 <= pair_budget:
        max_colors += 1
    cov = [0] * n
    chosen: list[int] = []
    masks = [0] * n  # current lists, bit i = color instance i
    structure_cache: dict = {}
    pairs_of = [d * (d - 1) // 2 for d in range(k + 1)]

    def dfs(idx: int, mult_here: int, need: int) -> bool:
        covered = 0
        open_mask = 0
        hosted = 0
        for v in range(n):
            c = cov[v]
            if c > 0:
                covered |= 1 << v
                hosted += pairs_of[c]
            if c < k:
                open_mask |= 1 << v
        # every pair of chosen supports shares a vertex, and a vertex of
        # coverage c hosts at most C(c, 2) such pairs
        d = len(chosen)
        if d * (d - 1) // 2 > hosted:
            return False
        if covered and _solve_on_subset(H, covered, masks, structure_cache):
            return False
        if not open_mask:
            return True
        if d >= max_colors:
            return False
        for v in bits(open_mask):
            if last_idx[v] < idx:
                return False
        for C in chosen:
            if not C & open_mask:
                # a sealed-off support can never meet future ones
                return False
        cbit = 1 << d
        slots = max_colors - d
        for i in range(idx, len(supports)):
            S = supports[i]
            if S & ~open_mask:
                continue
            if need > slots * S.bit_count():  # future supports are no larger
                break
            used = mult_here if i == idx else 0
            if used >= caps[i]:
                continue
            if any(not S & C for C in chosen):
                continue
            chosen.append(S)
            for v in bits(S):
                cov[v] += 1
                masks[v] |= cbit
            if dfs(i, used + 1, need - S.bit_count()):
                return True
            for v in bits(S):
                cov[v] -= 1
                masks[v] &= ~cbit
            chosen.pop()
        return False

    if dfs(0, 0, n * k):
        return chosen
    return None


def find_uncolorable_assignment(
    G: Graph, k: int, *, use_shortcuts: bool = True
) -> ListAssignment | None:
    """An uncolorable assignment with all lists of size exactly k, or None.

    Sweeps connected induced subgraphs of minimum degree >= k in ascending
    (order, mask) order: a minimal uncolorable assignment lives on such a
    subgraph, because a vertex with fewer than k colored neighbors can
    always be colored last. A witness found on a subgraph is lifted to G by
    giving every outside vertex k fresh private colors. Assignments use at
    most k*v(G) colors overall and are enumerated up to color renaming.

    With ``use_shortcuts`` a subgraph is skipped when its degeneracy is
    below k (greedy coloring always succeeds there) or when the polynomial
    certificate of ``_alon_tarsi_certifies`` proves it k-choosable; both
    are sound, so the result is exact either way.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    for T in sorted(range(1, 1 << G.n), key=lambda m: (m.bit_count(), m)):
        degs_ok = all((G.adj[v] & T).bit_count() >= k for v in bits(T))
        if not degs_ok or not is_connected_subset(G, T):
            continue
        sub = induced_subgraph(G, T)
        if use_shortcuts and (
            degeneracy(sub)[0] + 1 <= k or _alon_tarsi_certifies(sub, k)
        ):
            continue
        supports = _capped_uncolorable_supports(sub, k)
        if supports is None:
            continue
        verts = bit_list(T)
        lists: list[set[int]] = [set() for _ in range(G.n)]
        for i, S in enumerate(supports):
            for v in bits(S):
                lists[verts[v]].add(i)
        fresh = len(supports)
        for v in range(G.n):
            if not T >> v & 1:
                lists[v] = set(range(fresh, fresh + k))
                fresh += k
        return ListAssignment.from_lists(lists)
    return None


def is_k_choosable(G: Graph, k: int, *, use_shortcuts: bool = True) -> bool:
    return find_uncolorable_assignment(G, k, use_shortcuts=use_shortcuts) is None


def list_chromatic_number(
    G: Graph, *, use_shortcuts: bool = True, max_k: int = LIST_CHROMATIC_MAX_K
) -> int:
    """Exact list chromatic number by exhaustive assignment enumeration."""
    check_size(G.n, LIST_CHROMATIC_MAX_ORDER, "graph order for list_chromatic_number")
    if G.n == 0 or G.edge_count() == 0:
        return min(1, G.n)
    for k in range(1, max_k + 1):
        if is_k_choosable(G, k, use_shortcuts=use_shortcuts):
            return k
    raise RuntimeError(f"list chromatic number exceeds the internal bound {max_k}")


def chromatic_number(G: Graph) -> int:
    """Chromatic number, decided with the list solver on identical lists."""
    if G.n == 0:
        return 0
    if G.edge_count() == 0:
        return 1
    for k in range(1, G.n + 1):
        if is_l_colorable(G, ListAssignment.uniform(G.n, range(k))) is not None:
            return k
    raise AssertionError("unreachable: n colors always suffice")
