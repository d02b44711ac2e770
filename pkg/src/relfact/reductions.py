"""Constructors and verifiers for the hardness gadgets and inter-problem
translations: query evaluation to relevance, SAT to atomic-query relevance
(concept conjunction), reachability to EL relevance, Hamiltonian path to
chain-CQ relevance, self-join removal via fresh subroles, and the
digraph/prime-cycle encodings of relevance as the minimal-homomorphism
problem DMH.

The SAT and EL gadgets use ontology features beyond DL-Lite_R (concept
conjunction, qualified existentials), so each ships with its own small
closure evaluator used by the brute-force verifiers; the dllite module is
deliberately not involved there.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable

from .core import (
    Atom,
    CQ,
    CapExceeded,
    Database,
    ParseError,
    Term,
    ValidationError,
    fresh_name,
)
from .dllite.canonical import OMQ
from .dllite.tbox import Axiom, Concept, Role, tbox
from .homomorphism import enumerate_images, satisfies
from .supports import relevant_bruteforce

HornRule = tuple[frozenset[str], str]


# ---------------------------------------------------------------------------
# Digraphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Digraph:
    """A finite directed graph without loops or isolated vertices."""

    vertices: frozenset[str]
    edges: frozenset[tuple[str, str]]

    def __post_init__(self):
        for u, v in self.edges:
            if u == v:
                raise ValidationError(f"loop at {u} not allowed")
            if u not in self.vertices or v not in self.vertices:
                raise ValidationError(f"edge ({u}, {v}) leaves the vertex set")
        touched = {x for e in self.edges for x in e}
        isolated = self.vertices - touched
        if isolated:
            raise ValidationError(f"isolated vertices: {sorted(isolated)}")

    def serialize(self) -> str:
        return "\n".join(f"{u} -> {v}" for u, v in sorted(self.edges))

    def __len__(self) -> int:
        return len(self.vertices)


def digraph(edges: Iterable[tuple[str, str]]) -> Digraph:
    es = frozenset((str(u), str(v)) for u, v in edges)
    return Digraph(frozenset(x for e in es for x in e), es)


def parse_digraph(text: str) -> Digraph:
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split("->")
        if len(parts) != 2:
            raise ParseError("expected 'u -> v'", lineno, 1)
        u, v = parts[0].strip(), parts[1].strip()
        if not u.isidentifier() or not v.isidentifier():
            raise ParseError(f"bad vertex name in {line!r}", lineno, 1)
        edges.append((u, v))
    return digraph(edges)


# ---------------------------------------------------------------------------
# CNF formulas (DIMACS subset)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CnfFormula:
    nvars: int
    clauses: tuple[frozenset[int], ...]

    def __post_init__(self):
        for c in self.clauses:
            for lit in c:
                if lit == 0 or abs(lit) > self.nvars:
                    raise ValidationError(f"literal {lit} out of range")

    def serialize(self) -> str:
        lines = [f"p cnf {self.nvars} {len(self.clauses)}"]
        for c in self.clauses:
            lines.append(" ".join(str(l) for l in sorted(c, key=abs)) + " 0")
        return "\n".join(lines)


def parse_dimacs(text: str) -> CnfFormula:
    nvars = None
    clauses = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[:2] != ["p", "cnf"]:
                raise ParseError("expected 'p cnf <vars> <clauses>'", lineno, 1)
            nvars = int(parts[2])
            continue
        if nvars is None:
            raise ParseError("clause before 'p cnf' header", lineno, 1)
        lits = [int(tok) for tok in line.split()]
        if not lits or lits[-1] != 0:
            raise ParseError("clause must end with 0", lineno, 1)
        clauses.append(frozenset(lits[:-1]))
    if nvars is None:
        raise ParseError("missing 'p cnf' header", 1, 1)
    return CnfFormula(nvars, tuple(clauses))


def cnf_satisfiable(phi: CnfFormula) -> bool:
    """Exhaustive assignment sweep."""
    for bits in range(2 ** phi.nvars):
        assign = {i + 1: bool(bits >> i & 1) for i in range(phi.nvars)}
        if all(
            any(assign[abs(l)] == (l > 0) for l in c) for c in phi.clauses
        ):
            return True
    return not phi.clauses if phi.nvars == 0 else False


# ---------------------------------------------------------------------------
# Evaluation -> relevance
# ---------------------------------------------------------------------------

def eval_to_relevance(q: CQ, d: Database) -> tuple[CQ, Database, Atom]:
    """Attach a fresh marker atom: the marker fact is relevant to the
    extended query iff D satisfies q."""
    used = {a.relation for a in q.atoms} | {f.relation for f in d.facts}
    rel = fresh_name("Probe", used)
    var = Term(fresh_name("?probe", {t.name for t in q.variables()}))
    const = Term(fresh_name("probe", {t.name for t in d.constants()}))
    fact = Atom(rel, (const,))
    q2 = CQ(q.atoms | {Atom(rel, (var,))}, q.diseqs)
    return q2, Database(d.facts | {fact}), fact


# ---------------------------------------------------------------------------
# SAT -> atomic-query relevance (concept conjunction)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SatGadget:
    """Relevance instance over a propositional-Horn 'TBox': rules are
    (body concept names -> head concept name), all about the constant d."""

    rules: tuple[HornRule, ...]
    query: Atom
    abox: Database
    fact: Atom


def sat_to_aq_relevance(phi: CnfFormula) -> SatGadget:
    d = Term("d")
    n = phi.nvars
    rules: list[HornRule] = []
    for i in range(1, n + 1):
        rules.append((frozenset({f"P{i}", f"N{i}"}), "A"))
    for j, clause in enumerate(phi.clauses, start=1):
        for lit in clause:
            name = f"P{lit}" if lit > 0 else f"N{-lit}"
            rules.append((frozenset({name}), f"C{j}"))
    rules.append(
        (frozenset({"X"} | {f"C{j}" for j in range(1, len(phi.clauses) + 1)}), "A")
    )
    facts = {Atom("X", (d,))}
    for i in range(1, n + 1):
        facts.add(Atom(f"P{i}", (d,)))
        facts.add(Atom(f"N{i}", (d,)))
    return SatGadget(tuple(rules), Atom("A", (d,)), Database(frozenset(facts)), Atom("X", (d,)))


def horn_closure(names: frozenset[str], rules: Iterable[HornRule]) -> frozenset[str]:
    closed = set(names)
    changed = True
    while changed:
        changed = False
        for body, head in rules:
            if head not in closed and body <= closed:
                closed.add(head)
                changed = True
    return frozenset(closed)


def sat_gadget_relevant(g: SatGadget) -> bool:
    """Brute-force relevance of g.fact under the Horn closure semantics."""

    def entails(s: frozenset[Atom]) -> bool:
        return g.query.relation in horn_closure(
            frozenset(f.relation for f in s), g.rules
        )

    return _subset_relevant(g.abox, g.fact, entails)


def _subset_relevant(a: Database, f: Atom, entails: Callable[[frozenset[Atom]], bool]) -> bool:
    if len(a.facts) > 16:
        raise CapExceeded("subset sweep limited to 16 facts")
    facts = sorted(a.facts)
    sats: list[frozenset[Atom]] = []
    for r in range(len(facts) + 1):
        for combo in combinations(facts, r):
            s = frozenset(combo)
            if entails(s):
                sats.append(s)
    minimal = [s for s in sats if not any(t < s for t in sats)]
    return any(f in s for s in minimal)


# ---------------------------------------------------------------------------
# Reachability -> EL relevance
# ---------------------------------------------------------------------------

EL_AXIOM = "ex R.A sub A"


@dataclass(frozen=True)
class ElGadget:
    axiom: str
    query: Atom
    abox: Database
    fact: Atom


def reach_to_el_relevance(g: Digraph, s: str, t: str, edge: tuple[str, str]) -> ElGadget:
    """The edge fact is relevant to ({exists R.A sub A}, A(s)) over the graph
    ABox plus A(t) iff the edge lies on a simple path from s to t."""
    if edge not in g.edges:
        raise ValidationError(f"edge {edge} not in the graph")
    if s not in g.vertices or t not in g.vertices:
        raise ValidationError("s and t must be vertices")
    facts = {Atom("R", (Term(u), Term(v))) for u, v in g.edges}
    facts.add(Atom("A", (Term(t),)))
    return ElGadget(
        EL_AXIOM,
        Atom("A", (Term(s),)),
        Database(frozenset(facts)),
        Atom("R", (Term(edge[0]), Term(edge[1]))),
    )


def el_entails(facts: frozenset[Atom], query: Atom) -> bool:
    """Forward chaining for the single axiom exists R.A sub A: A propagates
    backwards along R-edges."""
    has_a = {f.args[0] for f in facts if f.relation == "A"}
    edges = [(f.args[0], f.args[1]) for f in facts if f.relation == "R"]
    changed = True
    while changed:
        changed = False
        for u, v in edges:
            if v in has_a and u not in has_a:
                has_a.add(u)
                changed = True
    return query.args[0] in has_a


def el_gadget_relevant(g: ElGadget) -> bool:
    return _subset_relevant(g.abox, g.fact, lambda s: el_entails(s, g.query))


# ---------------------------------------------------------------------------
# Hamiltonian path -> chain-CQ relevance
# ---------------------------------------------------------------------------

def hampath_to_chain_relevance(g: Digraph, s: str, t: str) -> tuple[CQ, Database, Atom]:
    """R(s', s) is relevant to the (n+1)-atom chain CQ over the padded edge
    database iff g has a Hamiltonian path from s to t."""
    if s not in g.vertices or t not in g.vertices:
        raise ValidationError("s and t must be vertices")
    if s == t:
        raise ValidationError("degenerate instance: s = t")
    n = len(g.vertices)
    used = set(g.vertices)
    s2 = fresh_name(f"{s}_in", used)
    t2 = fresh_name(f"{t}_out", used | {s2})
    facts = {Atom("R", (Term(u), Term(v))) for u, v in g.edges}
    fact = Atom("R", (Term(s2), Term(s)))
    facts.add(fact)
    facts.add(Atom("R", (Term(t), Term(t2))))
    chain = [
        Atom("R", (Term(f"?x{i}"), Term(f"?x{i + 1}"))) for i in range(n + 1)
    ]
    return CQ(frozenset(chain), frozenset()), Database(frozenset(facts)), fact


# ---------------------------------------------------------------------------
# Self-join removal
# ---------------------------------------------------------------------------

def remove_selfjoins(q: CQ, d: Database) -> tuple[OMQ, Database]:
    """Rename each atom occurrence to a fresh name made entailed by the
    original via the TBox, so the rewritten query is self-join free and has
    the same minimal supports over d and its subsets."""
    if q.diseqs:
        raise ValidationError("self-join removal expects a plain CQ")
    for a in list(q.atoms) + list(d.facts):
        if a.arity > 2:
            raise ValidationError(f"binary signature required, got {a}")
    used = {a.relation for a in q.atoms} | {f.relation for f in d.facts}
    axioms = []
    new_atoms = []
    counters: dict[str, int] = {}
    for a in sorted(q.atoms):
        counters[a.relation] = counters.get(a.relation, 0) + 1
        fresh = fresh_name(f"{a.relation}_{counters[a.relation]}", used)
        used.add(fresh)
        new_atoms.append(Atom(fresh, a.args))
        if a.arity == 2:
            axioms.append(Axiom(Role(a.relation), Role(fresh)))
        else:
            axioms.append(Axiom(Concept(a.relation), Concept(fresh)))
    return OMQ(tbox(axioms), CQ(frozenset(new_atoms), frozenset())), d


# ---------------------------------------------------------------------------
# CQ / database <-> digraph translations
# ---------------------------------------------------------------------------

def _single_binary_relation(q: CQ, d: Database) -> str:
    rels = {a.relation for a in q.atoms} | {f.relation for f in d.facts}
    if len(rels) != 1:
        raise ValidationError(f"expected a single relation, got {sorted(rels)}")
    (rel,) = rels
    arities = {a.arity for a in q.atoms} | {f.arity for f in d.facts}
    if arities != {2}:
        raise ValidationError("expected a binary relation")
    return rel


def cq_to_digraph(q: CQ) -> Digraph:
    if q.constants() or q.diseqs:
        raise ValidationError("digraph translation expects a constant-free CQ")
    return digraph(
        (a.args[0].name[1:], a.args[1].name[1:]) for a in q.atoms
    )


def db_to_digraph(d: Database) -> Digraph:
    return digraph((f.args[0].name, f.args[1].name) for f in d.facts)


def digraph_to_cq(g: Digraph) -> CQ:
    atoms = {Atom("R", (Term(f"?{u}"), Term(f"?{v}"))) for u, v in g.edges}
    return CQ(frozenset(atoms), frozenset())


def digraph_to_db(g: Digraph) -> Database:
    return Database(frozenset(Atom("R", (Term(u), Term(v))) for u, v in g.edges))


def cq_db_to_digraphs(q: CQ, d: Database, f: Atom) -> tuple[Digraph, Digraph, tuple[str, str]]:
    """Direct translation for a single binary relation (relevance <-> DMH)."""
    _single_binary_relation(q, d)
    if f not in d.facts:
        raise ValidationError(f"fact {f} is not in the database")
    return cq_to_digraph(q), db_to_digraph(d), (f.args[0].name, f.args[1].name)


def digraphs_to_cq_db(g: Digraph, g2: Digraph, e: tuple[str, str]) -> tuple[CQ, Database, Atom]:
    if e not in g2.edges:
        raise ValidationError(f"edge {e} not in the target graph")
    return digraph_to_cq(g), digraph_to_db(g2), Atom("R", (Term(e[0]), Term(e[1])))


def dmh_bruteforce(g: Digraph, g2: Digraph, e: tuple[str, str], cap: int = 4096) -> bool:
    """Is e in some inclusion-minimal G-homomorphic image on G2?  Image =
    edge set of some homomorphism; no isolated vertices, so edge sets
    determine images."""
    if e not in g2.edges:
        raise ValidationError(f"edge {e} not in the target graph")
    if len(g.edges) > cap or len(g2.edges) > cap:
        raise CapExceeded("graphs too large for image enumeration")
    q = digraph_to_cq(g)
    target = digraph_to_db(g2)
    images = enumerate_images(q, target)
    minimal = [s for s in images if not any(t < s for t in images)]
    fact = Atom("R", (Term(e[0]), Term(e[1])))
    return any(fact in s for s in minimal)


# ---------------------------------------------------------------------------
# Database -> digraph prime-cycle gadget
# ---------------------------------------------------------------------------

def first_primes(k: int) -> list[int]:
    out = []
    cand = 2
    while len(out) < k:
        if all(cand % p for p in out):
            out.append(cand)
        cand += 1
    return out


def _add_cycle(edges: set, base: str, length: int, tag: str) -> None:
    ring = [base] + [f"{tag}:{i}" for i in range(1, length)]
    for a, b in zip(ring, ring[1:] + [base]):
        edges.add((a, b))


def _add_path(edges: set, start: str, end: str, length: int, tag: str) -> None:
    chain = [start] + [f"{tag}:{i}" for i in range(1, length)] + [end]
    for a, b in zip(chain, chain[1:]):
        edges.add((a, b))


def _gadget_graph(
    atoms: Iterable[Atom], rel_index: dict[str, int], primes: list[int]
) -> tuple[Digraph, dict[Atom, tuple[str, str]]]:
    n = len(rel_index)
    edges: set[tuple[str, str]] = set()
    cycle_edges: dict[Atom, tuple[str, str]] = {}
    anchors = {t.name.lstrip("?") for a in atoms for t in a.args}
    for v in sorted(anchors):
        _add_cycle(edges, v, primes[n], f"anc1:{v}")
        _add_cycle(edges, v, primes[n + 1], f"anc2:{v}")
    for a in sorted(atoms):
        c, d = (t.name.lstrip("?") for t in a.args)
        tag = f"{a.relation}:{c}:{d}"
        w = f"{tag}:w"
        p = primes[rel_index[a.relation]]
        _add_path(edges, c, w, primes[n + 1], f"{tag}:in")
        _add_cycle(edges, w, p, f"{tag}:cyc")
        _add_path(edges, w, d, primes[n + 1], f"{tag}:out")
        cycle_edges[a] = (w, f"{tag}:cyc:1")
    return digraph(edges), cycle_edges


def db_to_digraph_gadget(q: CQ, d: Database, f: Atom) -> tuple[Digraph, Digraph, tuple[str, str]]:
    """Encode a multi-relation binary instance over a single edge relation:
    anchors carry two long prime cycles, and each fact/atom R_i(c, d)
    becomes path - C_{p_i} cycle - path between the anchors.  The chosen
    edge sits on f's cycle; DMH on the output equals relevance of f."""
    if q.constants() or q.diseqs:
        raise ValidationError("gadget expects a constant-free plain CQ")
    for a in list(q.atoms) + list(d.facts):
        if a.arity != 2:
            raise ValidationError(f"binary signature required, got {a}")
    if f not in d.facts:
        raise ValidationError(f"fact {f} is not in the database")
    rels = sorted({a.relation for a in q.atoms} | {x.relation for x in d.facts})
    rel_index = {r: i for i, r in enumerate(rels)}
    primes = first_primes(len(rels) + 2)
    gq, _ = _gadget_graph(sorted(q.atoms), rel_index, primes)
    gd, cycle_edges = _gadget_graph(sorted(d.facts), rel_index, primes)
    return gq, gd, cycle_edges[f]


# ---------------------------------------------------------------------------
# Verification helpers shared by the CLI and tests
# ---------------------------------------------------------------------------

def verify_eval_gadget(q: CQ, d: Database) -> bool:
    """Check D |= q iff the probe fact is relevant (brute force)."""
    q2, d2, fact = eval_to_relevance(q, d)
    return satisfies(d.facts, q) == relevant_bruteforce(q2, d2, fact)


def verify_hampath_gadget(g: Digraph, s: str, t: str) -> bool:
    q, d, fact = hampath_to_chain_relevance(g, s, t)
    return relevant_bruteforce(q, d, fact) == has_ham_path(g, s, t)


def has_ham_path(g: Digraph, s: str, t: str) -> bool:
    """Hamiltonian s-t path existence by trying all vertex orders."""
    from itertools import permutations

    middle = sorted(g.vertices - {s, t})
    if s == t:
        return len(g.vertices) == 1
    for perm in permutations(middle):
        walk = [s, *perm, t]
        if all((a, b) in g.edges for a, b in zip(walk, walk[1:])):
            return True
    return False
