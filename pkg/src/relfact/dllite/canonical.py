"""Canonical models for DL-Lite_R knowledge bases and certain-answer
evaluation of ontology-mediated queries.

The model keeps the ABox constants and grows anonymous witnesses only for
existential constraints that no ABox constant already satisfies (and, below
an anonymous element, only when the parent edge does not serve).  Homomorphic
equivalence to the unrestricted chase makes this enough for certain answers.
Anonymous elements are words ``c·P1·…·Pn``; the construction truncates at a
configurable depth and records whether anything was cut off.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from ..core import Atom, CQ, Database, InconsistentKB, Term, ValidationError
from ..homomorphism import satisfies
from .tbox import (
    Concept,
    Exists,
    Role,
    TBox,
    consistency_conflict,
    realized_concepts,
    realized_roles,
    saturate,
    validate_abox,
)


@dataclass(frozen=True, order=True, slots=True)
class CanonicalElement:
    """An ABox constant (empty path) or the anonymous word base·P1·…·Pn."""

    base: Term
    path: tuple[Role, ...] = ()

    @property
    def is_constant(self) -> bool:
        return not self.path

    @property
    def tail(self) -> Role:
        return self.path[-1]

    @property
    def depth(self) -> int:
        return len(self.path)

    def child(self, p: Role) -> "CanonicalElement":
        return CanonicalElement(self.base, self.path + (p,))

    def parent(self) -> "CanonicalElement":
        return CanonicalElement(self.base, self.path[:-1])

    def term(self) -> Term:
        if not self.path:
            return self.base
        return Term("·".join([self.base.name] + [str(p) for p in self.path]))

    def __str__(self) -> str:
        return self.term().name


@dataclass(frozen=True)
class CanonicalModel:
    abox: Database
    tbox: TBox
    depth: int
    elements: tuple[CanonicalElement, ...]
    atoms: frozenset[Atom]
    truncated: bool

    def constants(self) -> frozenset[Term]:
        return frozenset(e.term() for e in self.elements if e.is_constant)

    def as_database(self) -> Database:
        return Database(self.atoms)

    def __contains__(self, atom: Atom) -> bool:
        return atom in self.atoms


@lru_cache(maxsize=4096)
def canonical_model(a: Database, t: TBox, depth: int) -> CanonicalModel:
    """The canonical model of (a, t), anonymous part cut at ``depth``."""
    if depth < 0:
        raise ValidationError("canonical model depth must be >= 0")
    validate_abox(a)
    sat = saturate(t)

    entailed: dict[Term, set] = {}
    for c, b, _ in realized_concepts(a):
        entailed.setdefault(c, set()).update(sat.sub_c(b))
    pair_roles: dict[tuple[Term, Term], set[Role]] = {}
    for pair, p, _ in realized_roles(a):
        pair_roles.setdefault(pair, set()).update(sat.sub_r(p))
    witnessed: dict[Term, set[Role]] = {}
    for (c, _), roles in pair_roles.items():
        witnessed.setdefault(c, set()).update(roles)

    constants = sorted({f.args[i] for f in a.facts for i in range(f.arity)})
    elements = [CanonicalElement(c) for c in constants]
    atoms: set[Atom] = set()
    truncated = False

    queue = list(elements)
    while queue:
        e = queue.pop(0)
        if e.is_constant:
            concepts = entailed.get(e.base, set())
            served = witnessed.get(e.base, set())
        else:
            concepts = sat.sub_c(Exists(e.tail.inv()))
            served = {e.tail.inv()}
        for b in sorted(c for c in concepts if isinstance(c, Concept)):
            atoms.add(Atom(b.name, (e.term(),)))
        needs = sorted(
            c.role
            for c in concepts
            if isinstance(c, Exists) and c.role not in served
        )
        for p in needs:
            if e.depth >= depth:
                truncated = True
                continue
            child = e.child(p)
            elements.append(child)
            queue.append(child)
            for s in sorted(sat.sub_r(p)):
                if s.inverse:
                    atoms.add(Atom(s.name, (child.term(), e.term())))
                else:
                    atoms.add(Atom(s.name, (e.term(), child.term())))

    for (c, d), roles in pair_roles.items():
        for s in roles:
            if not s.inverse:
                atoms.add(Atom(s.name, (c, d)))

    return CanonicalModel(
        abox=a,
        tbox=t,
        depth=depth,
        elements=tuple(elements),
        atoms=frozenset(atoms),
        truncated=truncated,
    )


def require_consistent(a: Database, t: TBox) -> None:
    conflict = consistency_conflict(a, t)
    if conflict is not None:
        raise InconsistentKB(conflict)


@dataclass(frozen=True)
class OMQ:
    """An ontology-mediated query: a DL-Lite_R TBox paired with a Boolean CQ
    over unary (concept) and binary (role) relation names."""

    tbox: TBox
    query: CQ

    def __post_init__(self):
        if self.query.diseqs:
            raise ValidationError("OMQ queries are plain CQs, without !=")
        for a in self.query.atoms:
            if a.arity == 1 and a.relation in self.tbox.role_names():
                raise ValidationError(f"{a.relation} is a role, used as concept")
            if a.arity == 2 and a.relation in self.tbox.concept_names():
                raise ValidationError(f"{a.relation} is a concept, used as role")
            if a.arity not in (1, 2):
                raise ValidationError(f"OMQ atoms must be unary or binary: {a}")


def anonymous_depth(t: TBox, span: int) -> int:
    """Anonymous-part depth sufficient to find any query image spanning
    ``span`` role steps.  The subtree below an anonymous element depends only
    on its tail role, and each strictly deeper first occurrence of a tail
    consumes a distinct edge of the inclusion graph, so every subtree shape
    already occurs at depth <= 2|T|; a deeper image folds up and then
    descends at most ``span`` further."""
    return 2 * len(t.axioms) + span


def evaluation_depth(t: TBox, q: CQ) -> int:
    """Depth sufficient for certain-answer evaluation of q."""
    return anonymous_depth(t, q.natoms)


def evaluate_omq(a: Database, omq: OMQ, depth: Optional[int] = None) -> bool:
    """Certain-answer evaluation of the Boolean OMQ over the ABox."""
    require_consistent(a, omq.tbox)
    if depth is None:
        depth = evaluation_depth(omq.tbox, omq.query)
    model = canonical_model(a, omq.tbox, depth)
    return satisfies(model.atoms, omq.query)
