"""Gadget constructors checked against the independent brute-force oracles."""

import random
from itertools import combinations, product

import pytest

from relfact.core import (
    CapExceeded,
    ParseError,
    ValidationError,
    atom,
    cq,
    database,
    parse_cq,
    parse_database,
)
from relfact.dllite import interaction_width, relevance_omq
from relfact.homomorphism import satisfies
from relfact.reductions import (
    CnfFormula,
    Digraph,
    cnf_satisfiable,
    cq_db_to_digraphs,
    cq_to_digraph,
    db_to_digraph,
    db_to_digraph_gadget,
    digraph,
    digraph_to_cq,
    digraph_to_db,
    digraphs_to_cq_db,
    dmh_bruteforce,
    el_entails,
    el_gadget_relevant,
    eval_to_relevance,
    first_primes,
    hampath_to_chain_relevance,
    horn_closure,
    parse_digraph,
    parse_dimacs,
    reach_to_el_relevance,
    remove_selfjoins,
    sat_gadget_relevant,
    sat_to_aq_relevance,
    verify_eval_gadget,
    verify_hampath_gadget,
)
from relfact.sjw import self_join_width
from relfact.supports import relevant_bruteforce

from .oracles import oracle_ham_path, oracle_on_simple_path, oracle_sat


# ---------------------------------------------------------------------------
# Digraph type and text format
# ---------------------------------------------------------------------------

def test_parse_digraph_roundtrip():
    g = parse_digraph("a -> b\nb -> c  # back row\n\n# comment\nc -> a\n")
    assert g.edges == {("a", "b"), ("b", "c"), ("c", "a")}
    assert g.vertices == {"a", "b", "c"}
    assert parse_digraph(g.serialize()) == g


def test_parse_digraph_rejects_malformed():
    with pytest.raises(ParseError):
        parse_digraph("a b")
    with pytest.raises(ParseError):
        parse_digraph("a -> b -> c")


def test_digraph_invariants():
    with pytest.raises(ValidationError):
        digraph([("a", "a")])
    with pytest.raises(ValidationError):
        Digraph(frozenset({"a", "b", "lonely"}), frozenset({("a", "b")}))
    with pytest.raises(ValidationError):
        Digraph(frozenset({"a"}), frozenset({("a", "b")}))


# ---------------------------------------------------------------------------
# DIMACS subset
# ---------------------------------------------------------------------------

def test_parse_dimacs_roundtrip():
    phi = parse_dimacs("c toy\np cnf 3 2\n1 -2 0\n-1 3 0\n")
    assert phi.nvars == 3
    assert set(phi.clauses) == {frozenset({1, -2}), frozenset({-1, 3})}
    assert parse_dimacs(phi.serialize()) == phi


def test_parse_dimacs_rejects_malformed():
    with pytest.raises(ParseError):
        parse_dimacs("1 2 0")
    with pytest.raises(ParseError):
        parse_dimacs("p cnf 2 1\n1 2")
    with pytest.raises(ValidationError):
        CnfFormula(1, (frozenset({2}),))


def test_cnf_satisfiable_matches_oracle():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randint(1, 4)
        clauses = tuple(
            frozenset(
                rng.choice([-1, 1]) * rng.randint(1, n)
                for _ in range(rng.randint(1, 3))
            )
            for _ in range(rng.randint(0, 4))
        )
        phi = CnfFormula(n, clauses)
        assert cnf_satisfiable(phi) == oracle_sat(n, [list(c) for c in clauses])


# ---------------------------------------------------------------------------
# Evaluation -> relevance
# ---------------------------------------------------------------------------

def test_eval_to_relevance_positive_and_negative():
    q = parse_cq("R(?x, ?y), R(?y, ?z)")
    yes = parse_database("R(a, b), R(b, c)")
    no = parse_database("R(a, b)")
    for d, expected in ((yes, True), (no, False)):
        q2, d2, fact = eval_to_relevance(q, d)
        assert fact in d2.facts and fact not in d.facts
        assert relevant_bruteforce(q2, d2, fact) is expected


def test_eval_to_relevance_empty_query():
    q2, d2, fact = eval_to_relevance(cq([]), database([atom("R", "a", "b")]))
    assert len(q2.atoms) == 1
    assert relevant_bruteforce(q2, d2, fact)


def test_eval_to_relevance_avoids_name_clashes():
    q = parse_cq("Probe(?probe)")
    d = parse_database("Probe(probe)")
    q2, d2, fact = eval_to_relevance(q, d)
    assert fact.relation != "Probe"
    assert fact.args[0].name != "probe"
    assert relevant_bruteforce(q2, d2, fact)


def test_eval_gadget_randomized():
    rng = random.Random(11)
    consts = ["a", "b", "c"]
    for _ in range(40):
        d = database(
            atom("R", rng.choice(consts), rng.choice(consts))
            for _ in range(rng.randint(1, 5))
        )
        q = cq(
            atom("R", rng.choice(["?x", "?y", "?z", "a"]), rng.choice(["?x", "?y", "?z"]))
            for _ in range(rng.randint(1, 3))
        )
        assert verify_eval_gadget(q, d)


# ---------------------------------------------------------------------------
# SAT -> atomic-query relevance
# ---------------------------------------------------------------------------

def test_sat_gadget_shape():
    phi = parse_dimacs("p cnf 2 2\n1 2 0\n-1 0\n")
    g = sat_to_aq_relevance(phi)
    assert g.fact == atom("X", "d")
    assert g.query == atom("A", "d")
    assert len(g.abox.facts) == 2 * phi.nvars + 1
    # n contradiction rules, one per clause literal, one collecting rule
    assert len(g.rules) == phi.nvars + 3 + 1


def test_horn_closure():
    rules = ((frozenset({"X", "C1"}), "A"), (frozenset({"P1"}), "C1"))
    assert "A" in horn_closure(frozenset({"X", "P1"}), rules)
    assert "A" not in horn_closure(frozenset({"X"}), rules)


def test_sat_gadget_known_instances():
    sat = parse_dimacs("p cnf 2 2\n1 2 0\n-2 0\n")
    unsat = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n")
    assert sat_gadget_relevant(sat_to_aq_relevance(sat))
    assert not sat_gadget_relevant(sat_to_aq_relevance(unsat))


def test_sat_gadget_matches_oracle_randomized():
    rng = random.Random(3)
    for _ in range(25):
        n = rng.randint(1, 3)
        clauses = tuple(
            frozenset(
                rng.choice([-1, 1]) * rng.randint(1, n)
                for _ in range(rng.randint(1, 2))
            )
            for _ in range(rng.randint(1, 3))
        )
        phi = CnfFormula(n, clauses)
        verdict = sat_gadget_relevant(sat_to_aq_relevance(phi))
        assert verdict == oracle_sat(n, [list(c) for c in clauses])


# ---------------------------------------------------------------------------
# Reachability -> EL relevance
# ---------------------------------------------------------------------------

def test_el_entails():
    facts = frozenset({atom("R", "s", "a"), atom("R", "a", "t"), atom("A", "t")})
    assert el_entails(facts, atom("A", "s"))
    assert not el_entails(facts - {atom("R", "s", "a")}, atom("A", "s"))


def test_el_gadget_edge_on_and_off_path():
    g = digraph([("s", "a"), ("a", "t"), ("a", "b")])
    on = reach_to_el_relevance(g, "s", "t", ("s", "a"))
    off = reach_to_el_relevance(g, "s", "t", ("a", "b"))
    assert el_gadget_relevant(on)
    assert not el_gadget_relevant(off)
    assert on.query == atom("A", "s") and atom("A", "t") in on.abox.facts


def test_el_gadget_source_equals_target():
    g = digraph([("s", "a"), ("a", "s")])
    inst = reach_to_el_relevance(g, "s", "s", ("s", "a"))
    assert not el_gadget_relevant(inst)


def test_el_gadget_matches_simple_path_oracle():
    graphs = [
        digraph([("s", "a"), ("a", "t"), ("s", "b"), ("b", "t"), ("t", "s")]),
        digraph([("s", "a"), ("a", "b"), ("b", "t"), ("a", "t"), ("b", "a")]),
        digraph([("s", "t"), ("t", "a"), ("a", "t")]),
    ]
    for g in graphs:
        for e in sorted(g.edges):
            verdict = el_gadget_relevant(reach_to_el_relevance(g, "s", "t", e))
            assert verdict == oracle_on_simple_path(set(g.edges), "s", "t", e), (g, e)


def test_el_gadget_validation():
    g = digraph([("s", "t")])
    with pytest.raises(ValidationError):
        reach_to_el_relevance(g, "s", "t", ("t", "s"))
    with pytest.raises(ValidationError):
        reach_to_el_relevance(g, "s", "u", ("s", "t"))


# ---------------------------------------------------------------------------
# Hamiltonian path -> chain-CQ relevance
# ---------------------------------------------------------------------------

def test_hampath_instance_shape():
    g = digraph([("u", "v"), ("v", "w")])
    q, d, fact = hampath_to_chain_relevance(g, "u", "w")
    assert len(q.atoms) == len(g.vertices) + 1
    assert len(d.facts) == len(g.edges) + 2
    assert fact in d.facts
    assert fact.args[1].name == "u"


def test_hampath_known_instances():
    path = digraph([("u", "v"), ("v", "w")])
    q, d, fact = hampath_to_chain_relevance(path, "u", "w")
    assert relevant_bruteforce(q, d, fact)

    detour = digraph([("u", "v"), ("u", "w"), ("v", "w")])
    q, d, fact = hampath_to_chain_relevance(detour, "w", "v")
    assert not relevant_bruteforce(q, d, fact)


def test_hampath_rejects_degenerate():
    g = digraph([("u", "v")])
    with pytest.raises(ValidationError):
        hampath_to_chain_relevance(g, "u", "u")
    with pytest.raises(ValidationError):
        hampath_to_chain_relevance(g, "u", "z")


def test_hampath_fresh_endpoints_avoid_vertex_names():
    g = digraph([("u", "u_in"), ("u_in", "v")])
    q, d, fact = hampath_to_chain_relevance(g, "u", "v")
    pads = {f for f in d.facts if {t.name for t in f.args} - g.vertices}
    assert len(pads) == 2


def test_hampath_gadget_exhaustive_three_vertices():
    verts = ["u", "v", "w"]
    pairs = [(a, b) for a in verts for b in verts if a != b]
    for bits in range(2 ** len(pairs)):
        edges = {p for i, p in enumerate(pairs) if bits >> i & 1}
        if not edges:
            continue
        g = digraph(edges)
        for s, t in (("u", "w"), ("v", "u")):
            if s not in g.vertices or t not in g.vertices:
                continue
            assert verify_hampath_gadget(g, s, t), (edges, s, t)
            q, d, fact = hampath_to_chain_relevance(g, s, t)
            expected = oracle_ham_path(sorted(g.vertices), set(edges), s, t)
            assert relevant_bruteforce(q, d, fact) == expected


# ---------------------------------------------------------------------------
# Self-join removal
# ---------------------------------------------------------------------------

def test_remove_selfjoins_shape():
    q = parse_cq("R(?x, ?y), R(?y, ?z), A(?z)")
    d = parse_database("R(a, b), R(b, c), A(c)")
    omq, d2 = remove_selfjoins(q, d)
    assert d2 == d
    assert self_join_width(q) > 0
    assert self_join_width(omq.query) == 0
    rels = sorted(a.relation for a in omq.query.atoms)
    assert rels == ["A_1", "R_1", "R_2"]
    assert len(omq.tbox.axioms) == 3
    assert interaction_width(omq) > 0


def test_remove_selfjoins_preserves_verdicts():
    q = parse_cq("R(?x, ?y), R(?y, ?z)")
    d = parse_database("R(a, b), R(b, c), R(d, d), R(d, e)")
    omq, d2 = remove_selfjoins(q, d)
    for f in sorted(d.facts):
        assert bool(relevance_omq(f, omq, d2)) == relevant_bruteforce(q, d, f), f


def test_remove_selfjoins_unary_and_errors():
    q = cq([atom("A", "?x"), atom("A", "?y"), atom("R", "?x", "?y")])
    d = parse_database("A(a), A(b), R(a, b)")
    omq, _ = remove_selfjoins(q, d)
    assert self_join_width(omq.query) == 0
    for f in sorted(d.facts):
        assert bool(relevance_omq(f, omq, d)) == relevant_bruteforce(q, d, f), f
    with pytest.raises(ValidationError):
        remove_selfjoins(cq([atom("T", "?x", "?y", "?z")]), database([]))


def test_remove_selfjoins_randomized():
    rng = random.Random(5)
    consts = ["a", "b", "c"]
    terms = ["?x", "?y", "?z"]
    for _ in range(20):
        q = cq(
            atom("R", rng.choice(terms), rng.choice(terms))
            for _ in range(rng.randint(1, 3))
        )
        d = database(
            atom("R", rng.choice(consts), rng.choice(consts))
            for _ in range(rng.randint(1, 4))
        )
        omq, _ = remove_selfjoins(q, d)
        assert self_join_width(omq.query) == 0
        for f in sorted(d.facts):
            assert bool(relevance_omq(f, omq, d)) == relevant_bruteforce(q, d, f)


# ---------------------------------------------------------------------------
# CQ / digraph round trip and DMH
# ---------------------------------------------------------------------------

def test_digraph_roundtrip_identity():
    g = digraph([("a", "b"), ("b", "c"), ("c", "a"), ("a", "c")])
    assert cq_to_digraph(digraph_to_cq(g)) == g
    assert db_to_digraph(digraph_to_db(g)) == g

    q = parse_cq("R(?x, ?y), R(?y, ?z)")
    assert digraph_to_cq(cq_to_digraph(q)).atoms == q.atoms
    d = parse_database("R(a, b), R(b, a)")
    assert digraph_to_db(db_to_digraph(d)) == d


def test_digraph_translation_rejects_bad_inputs():
    with pytest.raises(ValidationError):
        cq_to_digraph(parse_cq("R(?x, a)"))
    with pytest.raises(ValidationError):
        cq_to_digraph(parse_cq("R(?x, ?x)"))
    with pytest.raises(ValidationError):
        cq_db_to_digraphs(
            parse_cq("R(?x, ?y)"), parse_database("S(a, b)"), atom("S", "a", "b")
        )
    with pytest.raises(ValidationError):
        cq_db_to_digraphs(
            parse_cq("R(?x, ?y)"), parse_database("R(a, b)"), atom("R", "b", "a")
        )


def test_dmh_bruteforce_examples():
    path = digraph([("a", "b"), ("b", "c")])
    edge = digraph([("x", "y")])
    assert dmh_bruteforce(edge, path, ("a", "b"))
    assert dmh_bruteforce(edge, path, ("b", "c"))

    two_cycle_plus_tail = digraph([("a", "b"), ("b", "a"), ("c", "a")])
    c2 = digraph([("x", "y"), ("y", "x")])
    assert dmh_bruteforce(c2, two_cycle_plus_tail, ("a", "b"))
    assert not dmh_bruteforce(c2, two_cycle_plus_tail, ("c", "a"))

    with pytest.raises(ValidationError):
        dmh_bruteforce(edge, path, ("c", "a"))


def test_dmh_matches_relevance_on_translations():
    rng = random.Random(13)
    consts = ["a", "b", "c", "d"]
    for _ in range(30):
        d = database(
            atom("R", *rng.sample(consts, 2)) for _ in range(rng.randint(1, 5))
        )
        q = cq(
            atom("R", f"?x{i}", f"?x{i + 1}") for i in range(rng.randint(1, 3))
        )
        for f in sorted(d.facts):
            gq, gd, e = cq_db_to_digraphs(q, d, f)
            q2, d2, f2 = digraphs_to_cq_db(gq, gd, e)
            assert relevant_bruteforce(q2, d2, f2) == relevant_bruteforce(q, d, f)
            assert dmh_bruteforce(gq, gd, e) == relevant_bruteforce(q, d, f)


# ---------------------------------------------------------------------------
# Prime-cycle gadget
# ---------------------------------------------------------------------------

def test_first_primes():
    assert first_primes(5) == [2, 3, 5, 7, 11]
    assert first_primes(0) == []


GADGET_Q = parse_cq("R1(?x, ?y), R2(?y, ?x)")
GADGET_D = parse_database("R1(a, b), R2(b, a), R1(b, b)")


def test_gadget_structure_two_relations():
    gq, gd, e = db_to_digraph_gadget(GADGET_Q, GADGET_D, atom("R1", "a", "b"))
    assert e in gd.edges
    # at n = 2 the connector paths have length p_4 = 7
    assert first_primes(4) == [2, 3, 5, 7]
    for g, n_anchors, n_gadgets in ((gq, 2, 2), (gd, 2, 3)):
        # anchors plus two attached cycles each, plus per-fact path/cycle/path
        assert any(v.endswith(":w") for v in g.vertices)
        anchors = {v for v in g.vertices if ":" not in v}
        assert len(anchors) == n_anchors
        assert sum(1 for v in g.vertices if v.endswith(":w")) == n_gadgets


def test_gadget_anchors_lie_on_both_long_cycles():
    import networkx as nx

    gq, gd, _ = db_to_digraph_gadget(GADGET_Q, GADGET_D, atom("R1", "a", "b"))
    for g in (gq, gd):
        nxg = nx.DiGraph(sorted(g.edges))
        on5, on7 = set(), set()
        for cycle in nx.simple_cycles(nxg):
            if len(cycle) == 5:
                on5.update(cycle)
            elif len(cycle) == 7:
                on7.update(cycle)
        anchors = {v for v in g.vertices if ":" not in v}
        assert on5 & on7 == anchors


def test_gadget_identical_on_isomorphic_inputs():
    d = parse_database("R1(x, y), R2(y, x)")
    q = parse_cq("R1(?x, ?y), R2(?y, ?x)")
    gq, gd, _ = db_to_digraph_gadget(q, d, atom("R1", "x", "y"))
    assert gq == gd


def test_gadget_verdict_preserved_tiny():
    q = parse_cq("R1(?x, ?y)")
    d = parse_database("R1(a, b), R2(b, a)")
    for f, expected in ((atom("R1", "a", "b"), True), (atom("R2", "b", "a"), False)):
        assert relevant_bruteforce(q, d, f) is expected
        gq, gd, e = db_to_digraph_gadget(q, d, f)
        assert dmh_bruteforce(gq, gd, e, cap=10_000) is expected


def test_gadget_validation():
    with pytest.raises(ValidationError):
        db_to_digraph_gadget(parse_cq("R(a, ?x)"), GADGET_D, atom("R1", "a", "b"))
    with pytest.raises(ValidationError):
        db_to_digraph_gadget(GADGET_Q, GADGET_D, atom("R1", "z", "z"))
    with pytest.raises(ValidationError):
        db_to_digraph_gadget(cq([atom("A", "?x")]), GADGET_D, atom("R1", "a", "b"))
