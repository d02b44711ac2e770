"""Structural classification of queries: acyclicity, leaves, chains,
exact treewidth.  These gate which fast relevance path applies.

All notions are computed over *terms* (variables and constants alike): a
constant shared by two atoms links them exactly as a variable would, which
keeps "acyclic iff treewidth <= 1" true on binary signatures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import CQ, Atom, CapExceeded, Term, ValidationError
from .sjw import is_self_join_free

DEFAULT_TW_CAP = 12


def is_acyclic(q: CQ) -> bool:
    """GYO reduction of the term hypergraph empties it iff q is acyclic."""
    edges = {frozenset(a.args) for a in q.atoms}
    changed = True
    while changed:
        changed = False
        # drop hyperedges properly contained in another hyperedge
        drop = {e for e in edges if any(e < o for o in edges)}
        if drop:
            edges -= drop
            changed = True
        # strip vertices that occur in exactly one hyperedge
        count: dict[Term, int] = {}
        for e in edges:
            for v in e:
                count[v] = count.get(v, 0) + 1
        new_edges = set()
        for e in edges:
            e2 = frozenset(v for v in e if count[v] > 1)
            if e2 != e:
                changed = True
            if e2:
                new_edges.add(e2)
        edges = new_edges
    return not edges


def underlying_graph(q: CQ) -> tuple[set[Term], set[frozenset[Term]]]:
    """Vertices and simple undirected edges {t, t'}; loops contribute no edge."""
    vertices = set(q.terms())
    edges = set()
    for a in q.atoms:
        for i in range(a.arity):
            for j in range(i + 1, a.arity):
                if a.args[i] != a.args[j]:
                    edges.add(frozenset({a.args[i], a.args[j]}))
    return vertices, edges


def _components(q: CQ) -> list[list[Atom]]:
    """Atoms grouped by term connectivity (constants connect too)."""
    atoms = sorted(q.atoms)
    parent = list(range(len(atoms)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    by_term: dict[Term, int] = {}
    for i, a in enumerate(atoms):
        for t in a.args:
            if t in by_term:
                ri, rj = find(i), find(by_term[t])
                if ri != rj:
                    parent[ri] = rj
            else:
                by_term[t] = i
    groups: dict[int, list[Atom]] = {}
    for i, a in enumerate(atoms):
        groups.setdefault(find(i), []).append(a)
    return [groups[r] for r in sorted(groups)]


def is_connected(q: CQ) -> bool:
    return len(_components(q)) <= 1


def leaf_count(q: CQ) -> int:
    """Number of degree-1 vertices of the underlying tree.

    Requires an acyclic, connected query over a binary signature.
    """
    if any(a.arity != 2 for a in q.atoms):
        raise ValidationError("leaf_count requires a binary signature")
    if not is_acyclic(q):
        raise ValidationError("leaf_count requires an acyclic query")
    if not is_connected(q):
        raise ValidationError("leaf_count requires a connected query")
    vertices, edges = underlying_graph(q)
    deg = {v: 0 for v in vertices}
    for e in edges:
        for v in e:
            deg[v] += 1
    return sum(1 for v in vertices if deg[v] == 1)


def is_chain(q: CQ) -> bool:
    """Exactly R(x1,x2), R(x2,x3), ..., R(xn,xn+1) with distinct variables."""
    atoms = sorted(q.atoms)
    if not atoms:
        return False
    rels = {a.relation for a in atoms}
    if len(rels) != 1 or any(a.arity != 2 for a in atoms):
        return False
    if any(not t.is_var for a in atoms for t in a.args):
        return False
    n = len(atoms)
    if len(q.variables()) != n + 1:
        return False
    out: dict[Term, Term] = {}
    indeg: dict[Term, int] = {}
    for a in atoms:
        x, y = a.args
        if x in out:
            return False  # out-degree 2
        out[x] = y
        indeg[y] = indeg.get(y, 0) + 1
        if indeg[y] > 1:
            return False
    starts = [v for v in q.variables() if v not in indeg]
    if len(starts) != 1:
        return False
    # walk the unique path and make sure it covers every atom
    cur, steps = starts[0], 0
    while cur in out:
        cur = out[cur]
        steps += 1
    return steps == n


def treewidth_exact(q: CQ, cap: int = DEFAULT_TW_CAP) -> int:
    """Exact treewidth of the primal graph over terms, by dynamic
    programming over elimination orders (Held-Karp style)."""
    vertices = sorted(q.terms())
    n = len(vertices)
    if len(q.variables()) > cap or n > cap + 4:
        raise CapExceeded(
            f"treewidth computation over {n} terms exceeds the cap of {cap}"
        )
    if n == 0:
        return 0
    idx = {v: i for i, v in enumerate(vertices)}
    adj = [0] * n
    for a in q.atoms:
        for i in range(a.arity):
            for j in range(a.arity):
                u, w = idx[a.args[i]], idx[a.args[j]]
                if u != w:
                    adj[u] |= 1 << w

    def q_cost(s: int, v: int) -> int:
        # vertices outside s + {v} reachable from v through s
        comp = 1 << v
        frontier = comp
        inside = s | (1 << v)
        while frontier:
            nxt = 0
            f = frontier
            while f:
                b = f & -f
                nxt |= adj[b.bit_length() - 1]
                f ^= b
            frontier = nxt & inside & ~comp
            comp |= frontier
        reach = 0
        c = comp
        while c:
            b = c & -c
            reach |= adj[b.bit_length() - 1]
            c ^= b
        return bin(reach & ~inside).count("1")

    full = (1 << n) - 1
    tw = {0: -1}
    # subsets in increasing popcount order
    by_size: list[list[int]] = [[] for _ in range(n + 1)]
    for s in range(1, full + 1):
        by_size[bin(s).count("1")].append(s)
    for size in range(1, n + 1):
        for s in by_size[size]:
            best = n
            rest = s
            while rest:
                b = rest & -rest
                v = b.bit_length() - 1
                rest ^= b
                prev = s ^ b
                cand = max(tw[prev], q_cost(prev, v))
                if cand < best:
                    best = cand
            tw[s] = best
    return tw[full]


@dataclass(frozen=True)
class StructureReport:
    acyclic: bool
    connected: bool
    leaf_count: Optional[int]  # None when not applicable
    is_chain: bool
    treewidth: Optional[int]  # None when the size cap was exceeded
    self_join_free: bool
    component_leaf_counts: tuple[Optional[int], ...] = ()
    component_chains: tuple[bool, ...] = ()

    def describe(self) -> str:
        parts = [
            f"acyclic: {self.acyclic}",
            f"connected: {self.connected}",
            f"leaf_count: {self.leaf_count if self.leaf_count is not None else 'n/a'}",
            f"is_chain: {self.is_chain}",
            f"treewidth: {self.treewidth if self.treewidth is not None else 'exceeds cap'}",
            f"self_join_free: {self.self_join_free}",
        ]
        if len(self.component_chains) > 1:
            parts.append(
                "component_leaf_counts: "
                + ", ".join("n/a" if c is None else str(c) for c in self.component_leaf_counts)
            )
            parts.append(
                "component_chains: " + ", ".join(str(c) for c in self.component_chains)
            )
        return "\n".join(parts)


def classify(q: CQ, tw_cap: int = DEFAULT_TW_CAP) -> StructureReport:
    acyclic = is_acyclic(q)
    comps = _components(q)
    connected = len(comps) <= 1
    try:
        tw: Optional[int] = treewidth_exact(q, tw_cap)
    except CapExceeded:
        tw = None

    def comp_report(atoms: list[Atom]) -> tuple[Optional[int], bool]:
        sub = CQ(frozenset(atoms))
        try:
            lc: Optional[int] = leaf_count(sub)
        except ValidationError:
            lc = None
        return lc, is_chain(sub)

    per = [comp_report(c) for c in comps]
    if connected and per:
        lc, chain = per[0]
    else:
        lc, chain = None, False
    return StructureReport(
        acyclic=acyclic,
        connected=connected,
        leaf_count=lc,
        is_chain=chain,
        treewidth=tw,
        self_join_free=is_self_join_free(q),
        component_leaf_counts=tuple(p[0] for p in per),
        component_chains=tuple(p[1] for p in per),
    )
