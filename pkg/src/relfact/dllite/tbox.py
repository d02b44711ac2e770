"""DL-Lite_R TBoxes: axioms, parsing, saturation, KB consistency.

Axiom grammar (one per line, ``#`` comments allowed)::

    A sub B          concept inclusion
    A sub not B      concept disjointness
    ex R sub A       existential restriction on the left
    A sub ex R-      inverse role under the existential
    R sub S          role inclusion
    R sub not S-     role disjointness

A trailing ``-`` inverts a role.  Names after ``ex`` or carrying ``-`` are
roles; for a bare ``X sub Y`` line the kind is inferred from the rest of
the TBox (and the optional ``roles=`` / ``concepts=`` hints), defaulting to
a concept inclusion when nothing disambiguates.

ABoxes are plain Databases whose unary facts are concept assertions and
binary facts role assertions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Optional, Union

from ..core import Atom, Database, ParseError, ValidationError


@dataclass(frozen=True, order=True, slots=True)
class Role:
    """A role name, possibly inverted (R or R-)."""

    name: str
    inverse: bool = False

    def inv(self) -> "Role":
        return Role(self.name, not self.inverse)

    def __str__(self) -> str:
        return self.name + ("-" if self.inverse else "")


@dataclass(frozen=True, order=True, slots=True)
class Concept:
    """An atomic concept name."""

    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True, slots=True)
class Exists:
    """The basic concept 'exists P' for a (possibly inverted) role P."""

    role: Role

    def __str__(self) -> str:
        return f"ex {self.role}"


BasicConcept = Union[Concept, Exists]


@dataclass(frozen=True, order=True, slots=True)
class Axiom:
    """lhs sub rhs, or lhs sub not rhs.  Both sides are concepts, or both
    are roles; the left-hand side is never negated."""

    lhs: Union[BasicConcept, Role]
    rhs: Union[BasicConcept, Role]
    negated: bool = False

    def __post_init__(self):
        lhs_role = isinstance(self.lhs, Role)
        rhs_role = isinstance(self.rhs, Role)
        if lhs_role != rhs_role:
            raise ValidationError(f"axiom mixes a role and a concept: {self}")

    @property
    def is_role_axiom(self) -> bool:
        return isinstance(self.lhs, Role)

    def __str__(self) -> str:
        neg = "not " if self.negated else ""
        return f"{self.lhs} sub {neg}{self.rhs}"


@dataclass(frozen=True)
class TBox:
    axioms: frozenset[Axiom]

    def __iter__(self):
        return iter(sorted(self.axioms, key=str))

    def __len__(self) -> int:
        return len(self.axioms)

    def role_names(self) -> set[str]:
        names = set()
        for ax in self.axioms:
            for side in (ax.lhs, ax.rhs):
                if isinstance(side, Role):
                    names.add(side.name)
                elif isinstance(side, Exists):
                    names.add(side.role.name)
        return names

    def concept_names(self) -> set[str]:
        return {
            side.name
            for ax in self.axioms
            for side in (ax.lhs, ax.rhs)
            if isinstance(side, Concept)
        }

    def serialize(self) -> str:
        return "\n".join(str(ax) for ax in self)

    def __str__(self) -> str:
        return self.serialize()


EMPTY_TBOX = TBox(frozenset())


def tbox(axioms: Iterable[Axiom]) -> TBox:
    t = TBox(frozenset(axioms))
    if t.role_names() & t.concept_names():
        clash = sorted(t.role_names() & t.concept_names())
        raise ValidationError(f"names used both as role and concept: {clash}")
    return t


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def _split_lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line.split()))
    return out


def _parse_side(tokens: list[str], lineno: int):
    """Returns ('ex', Role) | ('role', Role) | ('name', str)."""
    if tokens and tokens[0] == "ex":
        if len(tokens) != 2:
            raise ParseError("expected a role after 'ex'", lineno, 1)
        return ("ex", _parse_role(tokens[1], lineno))
    if len(tokens) != 1:
        raise ParseError(f"malformed axiom side: {' '.join(tokens)}", lineno, 1)
    tok = tokens[0]
    if tok.endswith("-"):
        return ("role", _parse_role(tok, lineno))
    if not tok.isidentifier():
        raise ParseError(f"bad name {tok!r}", lineno, 1)
    return ("name", tok)


def _parse_role(tok: str, lineno: int) -> Role:
    inverse = tok.endswith("-")
    name = tok[:-1] if inverse else tok
    if not name.isidentifier():
        raise ParseError(f"bad role name {tok!r}", lineno, 1)
    return Role(name, inverse)


def parse_tbox(
    text: str,
    roles: Iterable[str] = (),
    concepts: Iterable[str] = (),
) -> TBox:
    """Parse the axiom text; ``roles``/``concepts`` seed the kind inference
    for names that the text itself leaves ambiguous."""
    lines = _split_lines(text)
    sides = []
    for lineno, tokens in lines:
        if "sub" not in tokens:
            raise ParseError("axiom must contain 'sub'", lineno, 1)
        i = tokens.index("sub")
        lhs, rhs = tokens[:i], tokens[i + 1:]
        negated = bool(rhs) and rhs[0] == "not"
        if negated:
            rhs = rhs[1:]
        sides.append((lineno, _parse_side(lhs, lineno), _parse_side(rhs, lineno), negated))

    # infer the kind of bare names: roles spread through mixed axioms
    kind: dict[str, str] = {}
    for r in roles:
        kind[r] = "role"
    for c in concepts:
        kind[c] = "concept"

    def mark(name: str, k: str, lineno: int):
        if kind.get(name, k) != k:
            raise ParseError(f"name {name} used both as role and concept", lineno, 1)
        kind[name] = k

    for lineno, lhs, rhs, _ in sides:
        for side in (lhs, rhs):
            if side[0] in ("ex", "role"):
                mark(side[1].name, "role", lineno)
    changed = True
    while changed:
        changed = False
        for lineno, lhs, rhs, _ in sides:
            # an 'ex' side makes the axiom a concept inclusion: its bare
            # partner is a concept; a 'role' side makes the partner a role
            for a, b in ((0, 1), (1, 0)):
                sa, sb = (lhs, rhs)[a], (lhs, rhs)[b]
                if sb[0] != "name":
                    continue
                want = None
                if sa[0] == "ex":
                    want = "concept"
                elif sa[0] == "role":
                    want = "role"
                elif sa[0] == "name" and kind.get(sa[1]):
                    want = kind[sa[1]]
                if want and kind.get(sb[1]) != want:
                    mark(sb[1], want, lineno)
                    changed = True

    axioms = []
    for lineno, lhs, rhs, negated in sides:
        def build(side):
            if side[0] == "ex":
                return Exists(side[1])
            if side[0] == "role":
                return side[1]
            name = side[1]
            if kind.get(name, "concept") == "role":
                return Role(name)
            return Concept(name)

        l, r = build(lhs), build(rhs)
        # a bare name next to a role side is a role; align the kinds
        if isinstance(l, Role) != isinstance(r, Role):
            if isinstance(l, Concept) and kind.get(l.name) is None:
                l = Role(l.name)
            elif isinstance(r, Concept) and kind.get(r.name) is None:
                r = Role(r.name)
        try:
            axioms.append(Axiom(l, r, negated))
        except ValidationError as e:
            raise ParseError(str(e), lineno, 1) from None
    return tbox(axioms)


# ---------------------------------------------------------------------------
# Saturation
# ---------------------------------------------------------------------------

class Saturation:
    """Reflexive-transitive closures of the positive inclusions (with role
    inverses), the negative base pairs, and the unsatisfiable concepts/roles
    derived from them by fixpoint."""

    def __init__(self, t: TBox):
        self.tbox = t
        roles = {Role(n, inv) for n in t.role_names() for inv in (False, True)}
        concepts: set[BasicConcept] = {Concept(n) for n in t.concept_names()}
        concepts |= {Exists(p) for p in roles}

        # role closure: P sub S propagates to P- sub S-
        radj: dict[Role, set[Role]] = {p: {p} for p in roles}
        for ax in t.axioms:
            if ax.is_role_axiom and not ax.negated:
                radj.setdefault(ax.lhs, {ax.lhs}).add(ax.rhs)
                radj.setdefault(ax.lhs.inv(), {ax.lhs.inv()}).add(ax.rhs.inv())
        self.role_sub = {p: self._closure(p, radj) for p in radj}

        # concept closure: axioms plus ex P sub ex S per role subsumption
        cadj: dict[BasicConcept, set[BasicConcept]] = {c: {c} for c in concepts}
        for ax in t.axioms:
            if not ax.is_role_axiom and not ax.negated:
                cadj.setdefault(ax.lhs, {ax.lhs}).add(ax.rhs)
        for p, subs in self.role_sub.items():
            for s in subs:
                cadj.setdefault(Exists(p), {Exists(p)}).add(Exists(s))
        self.conc_sub = {c: self._closure(c, cadj) for c in cadj}

        # negative base pairs (role pairs closed under inverse)
        self.neg_conc: set[tuple[BasicConcept, BasicConcept]] = set()
        self.neg_role: set[tuple[Role, Role]] = set()
        for ax in t.axioms:
            if not ax.negated:
                continue
            if ax.is_role_axiom:
                self.neg_role.add((ax.lhs, ax.rhs))
                self.neg_role.add((ax.lhs.inv(), ax.rhs.inv()))
            else:
                self.neg_conc.add((ax.lhs, ax.rhs))

        self._compute_unsat(roles, concepts)

    @staticmethod
    def _closure(start, adj) -> frozenset:
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return frozenset(seen)

    def sub_c(self, b: BasicConcept) -> frozenset:
        """All C with T |= B sub C (positive closure, includes B)."""
        return self.conc_sub.get(b, frozenset({b}))

    def sub_r(self, p: Role) -> frozenset:
        return self.role_sub.get(p, frozenset({p}))

    def entails_concept(self, b: BasicConcept, c: BasicConcept) -> bool:
        return c in self.sub_c(b)

    def entails_role(self, p: Role, s: Role) -> bool:
        return s in self.sub_r(p)

    def disjoint_concepts(self, b: BasicConcept, c: BasicConcept) -> bool:
        sb, sc = self.sub_c(b), self.sub_c(c)
        return any(
            (x in sb and y in sc) or (x in sc and y in sb) for x, y in self.neg_conc
        )

    def disjoint_roles(self, p: Role, s: Role) -> bool:
        sp, ss = self.sub_r(p), self.sub_r(s)
        return any(
            (x in sp and y in ss) or (x in ss and y in sp) for x, y in self.neg_role
        )

    def _compute_unsat(self, roles, concepts):
        unsat_c: set[BasicConcept] = set()
        unsat_r: set[Role] = set()
        changed = True
        while changed:
            changed = False
            for b in concepts:
                if b in unsat_c:
                    continue
                if self.disjoint_concepts(b, b) or any(
                    c in unsat_c for c in self.sub_c(b)
                ):
                    unsat_c.add(b)
                    changed = True
            for p in roles:
                if p in unsat_r:
                    continue
                if (
                    self.disjoint_roles(p, p)
                    or any(s in unsat_r for s in self.sub_r(p))
                    or Exists(p) in unsat_c
                    or Exists(p.inv()) in unsat_c
                    or p.inv() in unsat_r
                ):
                    unsat_r.add(p)
                    changed = True
            # an unsatisfiable role empties its existential concepts
            for p in list(unsat_r):
                for e in (Exists(p), Exists(p.inv())):
                    if e not in unsat_c:
                        unsat_c.add(e)
                        changed = True
        self.unsat_concepts = frozenset(unsat_c)
        self.unsat_roles = frozenset(unsat_r)

    def concept_unsat(self, b: BasicConcept) -> bool:
        return b in self.unsat_concepts or any(
            c in self.unsat_concepts for c in self.sub_c(b)
        )

    def role_unsat(self, p: Role) -> bool:
        return p in self.unsat_roles


@lru_cache(maxsize=512)
def saturate(t: TBox) -> Saturation:
    return Saturation(t)


# ---------------------------------------------------------------------------
# ABox realization and consistency
# ---------------------------------------------------------------------------

def validate_abox(a: Database) -> None:
    for f in a.facts:
        if f.arity not in (1, 2):
            raise ValidationError(
                f"ABox facts must be unary or binary, got {f}"
            )


def realized_concepts(a: Database):
    """Yield (constant, basic concept, witnessing fact) for the ABox."""
    for f in sorted(a.facts):
        if f.arity == 1:
            yield f.args[0], Concept(f.relation), f
        else:
            yield f.args[0], Exists(Role(f.relation)), f
            yield f.args[1], Exists(Role(f.relation, True)), f


def realized_roles(a: Database):
    """Yield ((c1, c2), signed role, witnessing fact)."""
    for f in sorted(a.facts):
        if f.arity == 2:
            yield (f.args[0], f.args[1]), Role(f.relation), f
            yield (f.args[1], f.args[0]), Role(f.relation, True), f


def consistency_conflict(a: Database, t: TBox) -> Optional[tuple[Atom, ...]]:
    """A minimal conflict set (size <= 2), or None if (A, T) is consistent.

    Violations located in the anonymous part of the canonical model always
    propagate down to an unsatisfiable basic concept or role realized at a
    constant, so checking realized memberships suffices.
    """
    validate_abox(a)
    sat = saturate(t)
    by_const: dict = {}
    for c, b, f in realized_concepts(a):
        if sat.concept_unsat(b):
            return (f,)
        by_const.setdefault(c, []).append((b, f))
    for _, items in sorted(by_const.items()):
        for (b1, f1), (b2, f2) in combinations(items, 2):
            if sat.disjoint_concepts(b1, b2):
                return tuple(sorted({f1, f2}))
    by_pair: dict = {}
    for pair, p, f in realized_roles(a):
        if sat.role_unsat(p):
            return (f,)
        by_pair.setdefault(pair, []).append((p, f))
    for _, items in sorted(by_pair.items()):
        for (p1, f1), (p2, f2) in combinations(items, 2):
            if sat.disjoint_roles(p1, p2):
                return tuple(sorted({f1, f2}))
    return None


def is_consistent(a: Database, t: TBox) -> bool:
    return consistency_conflict(a, t) is None
