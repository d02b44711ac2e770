"""Core data model: terms, atoms, conjunctive queries, databases.

Text formats
------------

Queries are comma-separated atoms, with optional inequality atoms::

    R(?x, ?y), R(?y, c), ?x != ?y   # trailing comments allowed

Databases are one ground fact per line::

    R(a, b)
    # blank lines and comments are fine
    S(b)

Identifiers match ``[A-Za-z_][A-Za-z0-9_]*``; a term is a variable iff it
starts with ``?``.  Whitespace is insignificant.  ``serialize_cq`` /
``serialize_database`` emit a canonical form (atoms sorted), and parsing a
serialized object yields an equal object.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator


class RelfactError(Exception):
    """Base class for errors raised by this package."""


class ParseError(RelfactError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class ValidationError(RelfactError):
    """A structurally well-formed object violates a semantic constraint."""


class CapExceeded(RelfactError):
    """A configurable resource cap (width, size) was exceeded."""


class InconsistentKB(RelfactError):
    """The ABox contradicts the TBox; carries a minimal conflict set."""

    def __init__(self, conflict):
        self.conflict = tuple(conflict)
        shown = ", ".join(str(f) for f in self.conflict)
        super().__init__(f"inconsistent knowledge base (conflict: {shown})")


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True, order=True, slots=True)
class Term:
    """A variable (name starts with ``?``) or a constant."""

    name: str

    @property
    def is_var(self) -> bool:
        return self.name.startswith("?")

    def __str__(self) -> str:
        return self.name


def var(name: str) -> Term:
    return Term(name if name.startswith("?") else "?" + name)


def const(name: str) -> Term:
    if name.startswith("?"):
        raise ValueError(f"constant name may not start with '?': {name}")
    return Term(name)


@dataclass(frozen=True, order=True, slots=True)
class Atom:
    """A relational atom R(t1, ..., tk).  Facts are ground atoms."""

    relation: str
    args: tuple[Term, ...]

    def __str__(self) -> str:
        return f"{self.relation}({', '.join(t.name for t in self.args)})"

    @property
    def arity(self) -> int:
        return len(self.args)

    def variables(self) -> set[Term]:
        return {t for t in self.args if t.is_var}

    def is_ground(self) -> bool:
        return not any(t.is_var for t in self.args)


# A fact is just a ground atom; the alias documents intent in signatures.
Fact = Atom


def atom(relation: str, *names: str) -> Atom:
    """Convenience constructor: ``atom("R", "?x", "b")``."""
    return Atom(relation, tuple(Term(n) for n in names))


def _diseq_key(pair: frozenset[Term]) -> tuple[str, str]:
    a, b = sorted(pair)
    return (a.name, b.name)


@dataclass(frozen=True)
class CQ:
    """A Boolean conjunctive query, optionally with inequality atoms.

    ``diseqs`` holds unordered term pairs {t, t'} meaning t != t' must hold
    under every homomorphism.
    """

    atoms: frozenset[Atom]
    diseqs: frozenset[frozenset[Term]] = frozenset()

    def variables(self) -> set[Term]:
        return {t for a in self.atoms for t in a.args if t.is_var}

    def constants(self) -> set[Term]:
        out = {t for a in self.atoms for t in a.args if not t.is_var}
        for pair in self.diseqs:
            out.update(t for t in pair if not t.is_var)
        return out

    def terms(self) -> set[Term]:
        return {t for a in self.atoms for t in a.args}

    def signature(self) -> dict[str, int]:
        return signature_of(self.atoms)

    @property
    def natoms(self) -> int:
        return len(self.atoms)

    def serialize(self) -> str:
        return serialize_cq(self)

    def __str__(self) -> str:
        return self.serialize()


@dataclass(frozen=True)
class Database:
    """A finite set of ground facts."""

    facts: frozenset[Atom]

    def constants(self) -> set[Term]:
        return {t for f in self.facts for t in f.args}

    def signature(self) -> dict[str, int]:
        return signature_of(self.facts)

    def __contains__(self, fact: Atom) -> bool:
        return fact in self.facts

    def __len__(self) -> int:
        return len(self.facts)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.facts)

    def serialize(self) -> str:
        return serialize_database(self)

    def __str__(self) -> str:
        return self.serialize()


def cq(atoms: Iterable[Atom], diseqs: Iterable[tuple[Term, Term]] = ()) -> CQ:
    """Build a CQ from atoms and (t, t') inequality pairs, then validate."""
    q = CQ(frozenset(atoms), frozenset(frozenset(p) for p in diseqs))
    validate_cq(q)
    return q


def database(facts: Iterable[Atom]) -> Database:
    d = Database(frozenset(facts))
    validate_database(d)
    return d


def signature_of(atoms: Iterable[Atom]) -> dict[str, int]:
    """Relation -> arity map; raises ValidationError on arity conflicts."""
    sig: dict[str, int] = {}
    for a in atoms:
        seen = sig.get(a.relation)
        if seen is None:
            sig[a.relation] = a.arity
        elif seen != a.arity:
            raise ValidationError(
                f"relation {a.relation} used with arities {seen} and {a.arity}"
            )
    return sig


def validate_cq(q: CQ) -> None:
    signature_of(q.atoms)
    qvars = q.variables()
    for pair in q.diseqs:
        if len(pair) != 2:
            raise ValidationError(f"inequality atom relates a term to itself: {set(pair)}")
        for t in pair:
            if t.is_var and t not in qvars:
                raise ValidationError(
                    f"variable {t} occurs only in an inequality atom"
                )


def validate_database(d: Database) -> None:
    signature_of(d.facts)
    for f in d.facts:
        if not f.is_ground():
            raise ValidationError(f"database fact contains a variable: {f}")


def merged_signature(*objs: CQ | Database) -> dict[str, int]:
    """Joint signature of queries/databases; raises on arity conflicts."""
    all_atoms: list[Atom] = []
    for o in objs:
        all_atoms.extend(o.atoms if isinstance(o, CQ) else o.facts)
    return signature_of(all_atoms)


# ---------------------------------------------------------------------------
# Serialization (canonical: sorted atoms, sorted inequality pairs)
# ---------------------------------------------------------------------------

def serialize_atom(a: Atom) -> str:
    return str(a)


def serialize_cq(q: CQ) -> str:
    parts = [str(a) for a in sorted(q.atoms)]
    parts += [f"{x} != {y}" for x, y in sorted(map(_diseq_key, q.diseqs))]
    return ", ".join(parts)


def serialize_database(d: Database) -> str:
    return "\n".join(str(f) for f in sorted(d.facts))


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>\#[^\n]*)
      | (?P<var>\?[A-Za-z_][A-Za-z0-9_]*)
      | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<neq>!=)
      | (?P<lpar>\()
      | (?P<rpar>\))
      | (?P<comma>,)
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    tokens = []
    line, linestart = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - linestart + 1)
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            tokens.append((kind, value, line, pos - linestart + 1))
        line += value.count("\n")
        if "\n" in value:
            linestart = pos + value.rindex("\n") + 1
        pos = m.end()
    tokens.append(("eof", "", line, len(text) - linestart + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int, int]:
        return self.tokens[self.i]

    def next(self) -> tuple[str, str, int, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> tuple[str, str, int, int]:
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {what}, got {tok[1]!r}", tok[2], tok[3])
        return tok

    def parse_term(self) -> Term:
        tok = self.next()
        if tok[0] in ("var", "name"):
            return Term(tok[1])
        raise ParseError(f"expected a term, got {tok[1]!r}", tok[2], tok[3])

    def parse_item(self) -> Atom | tuple[Term, Term]:
        """One atom, or one inequality ``t != t'``."""
        kind, value, line, col = self.peek()
        if kind == "var":
            # must be an inequality: '?x != t'
            left = self.parse_term()
            self.expect("neq", "'!='")
            right = self.parse_term()
            return (left, right)
        if kind != "name":
            raise ParseError(f"expected an atom, got {value!r}", line, col)
        self.next()
        nxt = self.peek()
        if nxt[0] == "neq":  # 'c != t'
            self.next()
            right = self.parse_term()
            return (Term(value), right)
        self.expect("lpar", "'('")
        args = [self.parse_term()]
        while self.peek()[0] == "comma":
            self.next()
            args.append(self.parse_term())
        self.expect("rpar", "')'")
        return Atom(value, tuple(args))


def parse_cq(text: str) -> CQ:
    """Parse a query; raises ParseError / ValidationError.

    The empty text (modulo comments) is the empty query, which is trivially
    true on every database.
    """
    p = _Parser(text)
    atoms: list[Atom] = []
    diseqs: list[tuple[Term, Term]] = []
    if p.peek()[0] != "eof":
        while True:
            item = p.parse_item()
            if isinstance(item, Atom):
                atoms.append(item)
            else:
                t1, t2 = item
                if t1 == t2:
                    tok = p.tokens[p.i - 1]
                    raise ParseError(f"inequality relates {t1} to itself", tok[2], tok[3])
                diseqs.append(item)
            if p.peek()[0] != "comma":
                break
            p.next()
    p.expect("eof", "end of query")
    return cq(atoms, diseqs)


def parse_database(text: str) -> Database:
    """Parse a database: one fact per line (comments / blank lines allowed)."""
    facts: list[Atom] = []
    p = _Parser(text)
    while p.peek()[0] != "eof":
        item = p.parse_item()
        tok = p.tokens[p.i - 1]
        if not isinstance(item, Atom):
            raise ParseError("inequality atoms are not allowed in a database", tok[2], tok[3])
        if not item.is_ground():
            raise ParseError(f"fact contains a variable: {item}", tok[2], tok[3])
        facts.append(item)
        # facts may also be comma-separated; both separators are accepted
        if p.peek()[0] == "comma":
            p.next()
    return database(facts)


def parse_fact(text: str) -> Atom:
    """Parse a single ground atom such as ``R(a, b)``."""
    p = _Parser(text)
    item = p.parse_item()
    tok = p.tokens[max(p.i - 1, 0)]
    if not isinstance(item, Atom):
        raise ParseError("expected a fact, got an inequality", tok[2], tok[3])
    if not item.is_ground():
        raise ParseError(f"fact contains a variable: {item}", tok[2], tok[3])
    p.expect("eof", "end of fact")
    return item


def fresh_name(base: str, used: Iterable[str]) -> str:
    """A name not in ``used``, derived from ``base``."""
    taken = set(used)
    if base not in taken:
        return base
    i = 2
    while f"{base}_{i}" in taken:
        i += 1
    return f"{base}_{i}"
