"""
Hardness gadgets, checked end to end
====================================

Why is fact relevance hard?  The constructions below transplant classic
hard problems into relevance questions -- and, in the other direction,
compile relevance into plain graph reachability-style problems.  Each
gadget here is built, solved, and verified against an independent
brute-force oracle.
"""

from relfact.core import parse_cq, parse_database
from relfact.dllite import evaluate_omq
from relfact.reductions import (
    CnfFormula,
    cnf_satisfiable,
    db_to_digraph_gadget,
    digraph,
    digraphs_to_cq_db,
    dmh_bruteforce,
    eval_to_relevance,
    hampath_to_chain_relevance,
    has_ham_path,
    remove_selfjoins,
    sat_gadget_relevant,
    sat_to_aq_relevance,
)
from relfact.sjw import self_join_width
from relfact.supports import relevant_bruteforce

# --- 1. query evaluation embeds into relevance ---------------------------
# Add one fresh probe atom to the query and one fresh probe fact: the fact
# is relevant exactly when the original query was satisfied.
q = parse_cq("R(?x, ?y), R(?y, ?z)")
d = parse_database("R(a, b)\nR(b, c)")
q2, d2, probe = eval_to_relevance(q, d)
print("probe fact:", probe)
print("evaluation True <-> probe relevant:",
      relevant_bruteforce(q2, d2, probe))

# --- 2. SAT as relevance of a single fact --------------------------------
# For a CNF over x1..xn, Horn rules make A derivable either from both
# truth values of some variable (a wasted variable) or from X plus one
# literal per clause.  X(d) is then relevant iff no smaller support
# derives A first -- iff the formula is satisfiable.
phi = CnfFormula(2, (frozenset({1, 2}), frozenset({-1, -2})))
g = sat_to_aq_relevance(phi)
print("\nCNF:", phi.serialize().replace("\n", " | "))
print("gadget ABox:", ", ".join(str(f) for f in sorted(g.abox.facts)))
print("satisfiable:", cnf_satisfiable(phi),
      "| X(d) relevant:", sat_gadget_relevant(g))

unsat = CnfFormula(1, (frozenset({1}), frozenset({-1})))
print("unsat variant:", cnf_satisfiable(unsat),
      "| X(d) relevant:", sat_gadget_relevant(sat_to_aq_relevance(unsat)))

# --- 3. Hamiltonian path as relevance to a chain query -------------------
# Pad the graph with s' -> s and t -> t', ask the (n+1)-atom chain query,
# and probe the padding fact: minimal supports that use it are exactly
# the simple s-t paths through all vertices.
grid = digraph({("a", "b"), ("b", "c"), ("c", "d"), ("b", "d"), ("d", "a")})
for s, t in (("a", "d"), ("d", "a")):
    qc, dc, fc = hampath_to_chain_relevance(grid, s, t)
    print(f"\nham path {s} -> {t}: search={has_ham_path(grid, s, t)}"
          f" | gadget={relevant_bruteforce(qc, dc, fc)}"
          f" (chain of {len(qc.atoms)} atoms, {len(dc.facts)} facts)")

# --- 4. compiling self-joins away with an ontology -----------------------
# Each repeated relation gets fresh per-occurrence names plus inclusions
# original sub fresh_i; the rewritten query is self-join free, and
# relevance verdicts are preserved under the ontology.
omq, d4 = remove_selfjoins(q, parse_database("R(a, b)\nR(b, c)\nR(d, d)"))
print("\nrewritten query:", omq.query.serialize())
print("axioms:", "; ".join(omq.tbox.serialize().splitlines()))
print("self-join width after rewrite:", self_join_width(omq.query))
print("still entailed:", evaluate_omq(d4, omq))

# --- 5. relevance over a single binary relation as a pure graph problem --
# Constant-free single-relation CQs are just loop-free digraphs; relevance
# of an edge asks for a minimal homomorphic image using it ("dmh").
gq = digraph({("u", "v"), ("v", "u")})            # a 2-cycle pattern
gd = digraph({("a", "b"), ("b", "a"), ("c", "a")})
for edge in (("a", "b"), ("c", "a")):
    q5, d5, f5 = digraphs_to_cq_db(gq, gd, edge)
    print(f"2-cycle pattern, edge {edge}:",
          "dmh =", dmh_bruteforce(gq, gd, edge),
          "| relevance =", relevant_bruteforce(q5, d5, f5))

# --- 6. the general compilation: prime-length cycles as relation tags ----
# Arbitrary (query, database, fact) triples over binary signatures compile
# into the single-relation picture: every term grows two anchor cycles,
# every fact becomes a path-cycle-path widget whose cycle length encodes
# its relation by a distinct prime.
qg = parse_cq("R1(?x, ?y), R2(?y, ?x)")
dg = parse_database("R1(a, b), R2(b, a), R1(b, b)")
f = sorted(dg.facts)[0]
g_q, g_d, e_f = db_to_digraph_gadget(qg, dg, f)
print(f"\nprime-cycle gadget: query graph {len(g_q)} vertices /"
      f" {len(g_q.edges)} edges, data graph {len(g_d)} vertices /"
      f" {len(g_d.edges)} edges")
print(f"fact {f} -> edge {e_f}")
print("gadget verdict:", dmh_bruteforce(g_q, g_d, e_f, cap=20000),
      "| direct verdict:", relevant_bruteforce(qg, dg, f))
