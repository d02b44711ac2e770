"""Interacting query atoms and the interaction width of an OMQ.

Whether a single fact can entail a query atom depends only on the fact's
isomorphism type over the query's constants, so the existential "there is a
fact f" in the interaction definitions is decided by enumerating candidate
shapes: A(u) / R(u,v) / R(u,u) with fresh constants, plus the variants that
reuse the query's own constants.  Shapes inconsistent with the TBox are
skipped (they admit no model, so they never witness interaction in a
consistent ABox).
"""

from __future__ import annotations

from functools import lru_cache

from ..core import CQ, Atom, Database, Term, ValidationError, fresh_name
from ..homomorphism import iter_homs
from .canonical import OMQ, canonical_model
from .tbox import TBox, is_consistent


def probe_depth(t: TBox) -> int:
    """Canonical-model depth for single-atom checks (potential relevance,
    interaction): an atom spans at most one role step beyond the fold-up."""
    return 2 * len(t.axioms) + 2


def potentially_relevant(f: Atom, a: Atom, t: TBox) -> bool:
    """Whether ({f}, T) entails the atom read as a Boolean CQ."""
    model = canonical_model(Database(frozenset({f})), t, probe_depth(t))
    query = CQ(frozenset({a}), frozenset())
    return next(iter_homs(query, model.atoms), None) is not None


def _shape_signature(atoms: tuple[Atom, ...], t: TBox) -> tuple[set, set]:
    unary = {a.relation for a in atoms if a.arity == 1} | t.concept_names()
    binary = {a.relation for a in atoms if a.arity == 2} | t.role_names()
    return unary, binary


def _shapes(atoms: tuple[Atom, ...], t: TBox) -> tuple[Atom, ...]:
    unary, binary = _shape_signature(atoms, t)
    consts = sorted({x for a in atoms for x in a.args if not x.is_var})
    used = {c.name for c in consts}
    u = Term(fresh_name("u", used))
    v = Term(fresh_name("v", used | {u.name}))
    out = []
    for name in sorted(unary):
        for x in [u] + consts:
            out.append(Atom(name, (x,)))
    pairs = [(u, v), (u, u)]
    for c in consts:
        pairs += [(c, u), (u, c), (c, c)]
    pairs += [(c, d) for c in consts for d in consts if c != d]
    for name in sorted(binary):
        for x, y in pairs:
            out.append(Atom(name, (x, y)))
    return tuple(
        f for f in out if is_consistent(Database(frozenset({f})), t)
    )


def _entailed_atoms(shape: Atom, atoms: tuple[Atom, ...], t: TBox) -> list[Atom]:
    return [a for a in atoms if potentially_relevant(shape, a, t)]


def _self_interacting_via(shape: Atom, a: Atom, t: TBox) -> bool:
    if not a.variables():
        return False
    model = canonical_model(Database(frozenset({shape})), t, probe_depth(t))
    values: dict[Term, set[Term]] = {x: set() for x in a.variables()}
    for h in iter_homs(CQ(frozenset({a}), frozenset()), model.atoms):
        for x, val in h.items():
            values[x].add(val)
    shape_consts = set(shape.args)
    return any(
        len(vals) >= 2 and vals & shape_consts for vals in values.values()
    )


def interacting(a: Atom, b: Atom, t: TBox) -> bool:
    """Whether distinct atoms a, b interact: some single fact entails both."""
    if a == b:
        raise ValidationError("pair interaction is between distinct atoms")
    for shape in _shapes((a, b), t):
        if potentially_relevant(shape, a, t) and potentially_relevant(shape, b, t):
            return True
    return False


def self_interacting(a: Atom, t: TBox) -> bool:
    """Whether a interacts with itself: some fact f admits homomorphisms
    h1, h2 of a into the canonical model of ({f}, T) with h1(x) a constant
    of f and h2(x) different, for some variable x."""
    return any(_self_interacting_via(shape, a, t) for shape in _shapes((a,), t))


@lru_cache(maxsize=2048)
def int_atoms(omq: OMQ) -> frozenset[Atom]:
    """The atoms of the query that pair-interact or self-interact."""
    atoms = tuple(sorted(omq.query.atoms))
    t = omq.tbox
    out: set[Atom] = set()
    for shape in _shapes(atoms, t):
        hits = _entailed_atoms(shape, atoms, t)
        if len(hits) >= 2:
            out.update(hits)
        for a in hits:
            if a not in out and _self_interacting_via(shape, a, t):
                out.add(a)
    return frozenset(out)


def interaction_width(omq: OMQ) -> int:
    return len(int_atoms(omq))


def frontier_vars(omq: OMQ) -> frozenset[Term]:
    """Variables shared between the interacting atoms and the rest of q."""
    ia = int_atoms(omq)
    rest = omq.query.atoms - ia
    inner = {x for a in ia for x in a.variables()}
    outer = {x for a in rest for x in a.variables()}
    return frozenset(inner & outer)
