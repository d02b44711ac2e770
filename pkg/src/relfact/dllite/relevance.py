"""Deciding whether an ABox fact is relevant to an OMQ.

A fact in a consistent KB is relevant only if it is potentially relevant
(entails, on its own, some query atom).  When the single entailed atom does
not interact with anything, relevance reduces to one evaluation of the query
without that atom (type i).  Otherwise the fact works through the interacting
atoms, and relevance is witnessed by a small fact set S (at most one fact per
interacting atom) together with a homomorphism of the interacting atoms into
the canonical model of (S, T) that pins the frontier variables to ABox
constants, extends over the rest of the query, and is not already available
over a proper subset of S (type ii).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from ..core import CQ, Atom, Database, Term, ValidationError, CapExceeded, fresh_name
from ..homomorphism import iter_homs
from .canonical import (
    OMQ,
    anonymous_depth,
    canonical_model,
    evaluate_omq,
    require_consistent,
)
from .interaction import frontier_vars, int_atoms, interaction_width, potentially_relevant, probe_depth

DEFAULT_MAX_IW = 5

#: how relevance_omq settled the answer, for reporting
BRANCH_NOT_POTENTIAL = "omq-not-potentially-relevant"
BRANCH_TYPE_I = "omq-type-i"
BRANCH_TYPE_II = "omq-type-ii"


@dataclass(frozen=True)
class RelevanceResult:
    relevant: bool
    branch: str

    def __bool__(self) -> bool:
        return self.relevant


def _used_relation_names(a: Database, omq: OMQ) -> set[str]:
    names = {f.relation for f in a.facts}
    names |= {atm.relation for atm in omq.query.atoms}
    names |= omq.tbox.concept_names() | omq.tbox.role_names()
    return names


def _pin(
    assignment: dict[Term, Term], a: Database, atoms: set[Atom], omq: OMQ
) -> tuple[Database, CQ]:
    """Instantiate variables to constants with fresh marker concepts: the
    query gains Pin_c(x) and the ABox gains Pin_c(c), keeping the query a
    pure CQ (no constants are substituted into existing atoms)."""
    used = _used_relation_names(a, omq)
    facts = set(a.facts)
    q_atoms = set(atoms)
    markers: dict[Term, str] = {}
    for x, c in sorted(assignment.items()):
        if c not in markers:
            markers[c] = fresh_name(f"Pin_{c.name}", used)
            used.add(markers[c])
            facts.add(Atom(markers[c], (c,)))
        q_atoms.add(Atom(markers[c], (x,)))
    return Database(frozenset(facts)), CQ(frozenset(q_atoms), frozenset())


def potential_atoms(f: Atom, omq: OMQ) -> frozenset[Atom]:
    """The query atoms f is potentially relevant to."""
    return frozenset(
        a for a in omq.query.atoms if potentially_relevant(f, a, omq.tbox)
    )


def relevance_type_i(f: Atom, omq: OMQ, a: Database, alpha: Optional[Atom] = None) -> bool:
    """Relevance when f is potentially relevant to exactly one atom alpha
    outside int_atoms: f is relevant iff (A, T) entails q without alpha,
    with the variables alpha shares with the rest pinned to the constants
    the single-fact homomorphisms agree on.  If some shared variable is
    only ever matched anonymously, no minimal support can use f."""
    t = omq.tbox
    if alpha is None:
        pr = potential_atoms(f, omq)
        if len(pr) != 1:
            raise ValidationError(f"type-i requires exactly one entailed atom, got {len(pr)}")
        (alpha,) = pr
    if alpha in int_atoms(omq):
        raise ValidationError("type-i applies to non-interacting atoms only")
    model = canonical_model(Database(frozenset({f})), t, probe_depth(t))
    homs = list(iter_homs(CQ(frozenset({alpha}), frozenset()), model.atoms))
    assert homs, "f must be potentially relevant to alpha"
    rest = omq.query.atoms - {alpha}
    shared = alpha.variables() & {x for b in rest for x in b.variables()}
    fact_consts = set(f.args)
    assignment: dict[Term, Term] = {}
    for x in sorted(shared):
        values = {h[x] for h in homs}
        anchored = values & fact_consts
        # a non-interacting atom cannot be matched both at a constant of f
        # and elsewhere, so the homomorphisms agree about x
        assert not anchored or len(values) == 1, "self-interaction leaked past int_atoms"
        if not anchored:
            return False
        assignment[x] = next(iter(anchored))
    a2, q2 = _pin(assignment, a, set(rest), omq)
    return evaluate_omq(a2, OMQ(t, q2))


def relevance_type_ii(f: Atom, omq: OMQ, a: Database) -> bool:
    """Relevance when f is potentially relevant to interacting atoms.

    Searches fact sets S containing f of size at most the interaction width
    and homomorphisms h of int_atoms into the canonical model of (S, T)
    such that (1) frontier variables land on ABox constants, (2) the rest of
    the query, with frontier variables pinned to their h-values, is entailed
    by (A, T), and (3) no proper subset of S admits a homomorphism of
    int_atoms agreeing with h on the frontier."""
    t = omq.tbox
    ia = int_atoms(omq)
    if not ia:
        raise ValidationError("type-ii requires interacting atoms")
    k = len(ia)
    fv = sorted(frontier_vars(omq))
    int_cq = CQ(frozenset(ia), frozenset())
    rest = omq.query.atoms - ia
    depth = anonymous_depth(t, len(ia))
    abox_consts = {x for fact in a.facts for x in fact.args}

    def hom_frontiers(s: frozenset[Atom], frozen=None):
        model = canonical_model(Database(s), t, depth)
        seen = set()
        for h in iter_homs(int_cq, model.atoms, frozen=frozen):
            key = tuple(h[x] for x in fv)
            if key not in seen:
                seen.add(key)
                yield dict(zip(fv, key))

    others = sorted(a.facts - {f})
    for extra in range(min(k, len(a.facts)) ):
        for rest_facts in combinations(others, extra):
            s = frozenset({f, *rest_facts})
            for sigma in hom_frontiers(s):
                if any(c not in abox_consts for c in sigma.values()):
                    continue
                smaller = any(
                    next(iter(hom_frontiers(frozenset(sub), frozen=sigma)), None)
                    is not None
                    for size in range(len(s))
                    for sub in combinations(sorted(s), size)
                )
                if smaller:
                    continue
                a2, q2 = _pin(sigma, a, set(rest), omq)
                if evaluate_omq(a2, OMQ(t, q2)):
                    return True
    return False


def relevance_omq(
    f: Atom, omq: OMQ, a: Database, max_width: int = DEFAULT_MAX_IW
) -> RelevanceResult:
    """Decide relevance of f to the OMQ w.r.t. the ABox.

    Raises InconsistentKB if (A, T) is inconsistent, ValidationError if f is
    not an ABox fact, and CapExceeded if the interaction width exceeds
    max_width."""
    require_consistent(a, omq.tbox)
    if f not in a.facts:
        raise ValidationError(f"fact {f} is not in the ABox")
    width = interaction_width(omq)
    if width > max_width:
        raise CapExceeded(
            f"interaction width {width} exceeds the cap {max_width}"
        )
    pr = potential_atoms(f, omq)
    if not pr:
        return RelevanceResult(False, BRANCH_NOT_POTENTIAL)
    ia = int_atoms(omq)
    if len(pr) == 1 and not (pr & ia):
        (alpha,) = pr
        return RelevanceResult(
            relevance_type_i(f, omq, a, alpha), BRANCH_TYPE_I
        )
    # facts entailing two atoms witness their interaction, so the only
    # other possibility is that everything f entails interacts
    assert pr <= ia, "potential atoms escape int_atoms"
    return RelevanceResult(relevance_type_ii(f, omq, a), BRANCH_TYPE_II)
