"""Self-join width and the fast relevance algorithm for bounded width.

Two atoms are *mergeable* if some pair of homomorphisms sends them to the
same fact; equivalently they share relation and arity and the graph linking
their arguments position by position has no two distinct constants in a
connected component.  Merge(q) collects the variables at positions where
two mergeable atoms disagree, and the self-join width of q is |Merge(q)|.

For each equivalence relation E over Merge(q) and the constants of q (with
no two distinct constants equated), q_E collapses each class to a single
term and q_E^!= additionally forbids, through inequality atoms, every
identification not sanctioned by E.  The *nice* equivalence relations are
those whose collapse is a core and which are hom-maximal among their
equivalents; their q_E^!=-images are exactly the minimal supports of q.
Relevance of a fact f then reduces to evaluating, for each nice E and each
atom of q_E consistent with f, the query obtained by grounding that atom
to f throughout q_E^!=.

Only plain CQs are supported here: with inequality atoms in the *input*
query, relevance stays hard even at width 0.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterable, Optional

from .core import CQ, Atom, CapExceeded, Database, Term, ValidationError
from .homomorphism import apply_hom, is_core, satisfies

DEFAULT_MAX_WIDTH = 5

Equiv = frozenset[frozenset[Term]]


def mergeable(a: Atom, b: Atom) -> bool:
    """Can a and b be sent to the same fact by two homomorphisms?"""
    if a.relation != b.relation or a.arity != b.arity:
        return False
    parent: dict[Term, Term] = {}

    def find(x: Term) -> Term:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t1, t2 in zip(a.args, b.args):
        r1, r2 = find(t1), find(t2)
        if r1 != r2:
            parent[r1] = r2
    classes: dict[Term, set[Term]] = {}
    for t in set(a.args) | set(b.args):
        classes.setdefault(find(t), set()).add(t)
    for cls in classes.values():
        if len({t for t in cls if not t.is_var}) > 1:
            return False
    return True


@lru_cache(maxsize=4096)
def merge_vars(q: CQ) -> frozenset[Term]:
    """Merge(q): variables at disagreeing positions of mergeable atom pairs."""
    out: set[Term] = set()
    atoms = sorted(q.atoms)
    for i, a in enumerate(atoms):
        for b in atoms[i + 1:]:
            if not mergeable(a, b):
                continue
            for t1, t2 in zip(a.args, b.args):
                if t1 != t2:
                    if t1.is_var:
                        out.add(t1)
                    if t2.is_var:
                        out.add(t2)
    return frozenset(out)


def self_join_width(q: CQ) -> int:
    return len(merge_vars(q))


def is_self_join_free(q: CQ) -> bool:
    rels = [a.relation for a in q.atoms]
    return len(rels) == len(set(rels))


def _set_partitions(items: list) -> Iterable[list[list]]:
    """All partitions of items into nonempty blocks (restricted growth)."""
    if not items:
        yield []
        return

    def rec(i: int, blocks: list[list]):
        if i == len(items):
            yield [list(b) for b in blocks]
            return
        x = items[i]
        for b in blocks:
            b.append(x)
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([x])
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(0, [])


def equivs(q: CQ) -> list[Equiv]:
    """All equivalence relations over Merge(q) and const(q) in which no two
    distinct constants are identified."""
    mv = sorted(merge_vars(q))
    consts = sorted(q.constants())
    out: list[Equiv] = []
    for blocks in _set_partitions(mv):
        # each block absorbs at most one constant; distinct blocks get
        # distinct constants; unassigned constants stay singleton classes
        choices = [(None, *consts) for _ in blocks]
        for pick in product(*choices) if blocks else [()]:
            used = [c for c in pick if c is not None]
            if len(used) != len(set(used)):
                continue
            classes = []
            for b, c in zip(blocks, pick):
                classes.append(frozenset(b) | ({c} if c is not None else set()))
            for c in consts:
                if c not in used:
                    classes.append(frozenset({c}))
            out.append(frozenset(classes))
    return sorted(out, key=lambda e: sorted(sorted(t.name for t in cls) for cls in e))


def _representatives(e: Equiv) -> dict[Term, Term]:
    rep: dict[Term, Term] = {}
    for cls in e:
        cs = sorted(t for t in cls if not t.is_var)
        head = cs[0] if cs else min(cls)
        for t in cls:
            rep[t] = head
    return rep


def collapse(q: CQ, e: Equiv) -> CQ:
    """q_E: identify terms according to E and deduplicate atoms."""
    rep = _representatives(e)
    return CQ(frozenset(apply_hom(rep, a) for a in q.atoms))


def collapse_neq(q: CQ, e: Equiv) -> CQ:
    """q_E^!=: q_E plus t != t' for each non-equated pair involving Merge."""
    rep = _representatives(e)
    mv = sorted(merge_vars(q))
    others = sorted(set(mv) | q.constants())
    diseqs = set()
    for t in mv:
        for t2 in others:
            if t != t2 and rep[t] != rep[t2]:
                diseqs.add(frozenset({rep[t], rep[t2]}))
    base = collapse(q, e)
    return CQ(base.atoms, frozenset(diseqs))


@lru_cache(maxsize=4096)
def nice_equivs(q: CQ) -> tuple[Equiv, ...]:
    """The E in Equivs whose q_E^!=-images are exactly the minimal supports:
    q_E is a core, and q_E^!= is hom-maximal among the q_E'^!= below it."""
    es = equivs(q)
    neqs = {e: collapse_neq(q, e) for e in es}

    def hom(src: CQ, dst: CQ) -> bool:
        # homomorphism src -> dst: atoms into atoms, src inequalities kept apart
        return satisfies(dst.atoms, src)

    nice = []
    for e in es:
        if not is_core(collapse(q, e)):
            continue
        qe = neqs[e]
        if all(hom(qe, neqs[e2]) for e2 in es if hom(neqs[e2], qe)):
            nice.append(e)
    return tuple(nice)


@lru_cache(maxsize=4096)
def _nice_plans(q: CQ) -> tuple[tuple[CQ, tuple[Atom, ...]], ...]:
    """Per nice E: q_E^!= with its atoms presorted, shared across calls."""
    out = []
    for e in nice_equivs(q):
        qneq = collapse_neq(q, e)
        out.append((qneq, tuple(sorted(qneq.atoms))))
    return tuple(out)


def _consistent(t: Atom, f: Atom) -> bool:
    """Atom of q_E is consistent with fact f: constants match and repeated
    terms occur at positions where f repeats constants."""
    if t.relation != f.relation or t.arity != f.arity:
        return False
    for ti, ci in zip(t.args, f.args):
        if not ti.is_var and ti != ci:
            return False
    for i in range(t.arity):
        for j in range(i + 1, t.arity):
            if t.args[i] == t.args[j] and f.args[i] != f.args[j]:
                return False
    return True


def relevant_sjw(
    q: CQ,
    d: Database,
    f: Atom,
    max_width: int = DEFAULT_MAX_WIDTH,
) -> bool:
    """Is f in some minimal support of q in d, via the nice-equivalence
    characterization?  Requires a plain CQ of self-join width <= max_width."""
    if q.diseqs:
        raise ValidationError(
            "the self-join-width algorithm handles plain CQs only "
            "(no inequality atoms)"
        )
    w = self_join_width(q)
    if w > max_width:
        raise CapExceeded(f"self-join width {w} exceeds the cap of {max_width}")
    if f not in d.facts:
        return False
    for qneq, atoms in _nice_plans(q):
        for t in atoms:
            if not _consistent(t, f):
                continue
            sigma = {ti: ci for ti, ci in zip(t.args, f.args) if ti.is_var}
            qhat = CQ(
                frozenset(apply_hom(sigma, a) for a in qneq.atoms),
                frozenset(
                    frozenset(sigma.get(x, x) for x in pair) for pair in qneq.diseqs
                ),
            )
            if satisfies(d, qhat):
                return True
    return False


def minimal_supports_sjw(
    q: CQ,
    d: Database,
    max_width: int = DEFAULT_MAX_WIDTH,
) -> set[frozenset[Atom]]:
    """All minimal supports, as the union of the q_E^!=-image sets over the
    nice equivalence relations (used to cross-check the characterization)."""
    from .homomorphism import enumerate_images

    if q.diseqs:
        raise ValidationError(
            "the self-join-width algorithm handles plain CQs only "
            "(no inequality atoms)"
        )
    w = self_join_width(q)
    if w > max_width:
        raise CapExceeded(f"self-join width {w} exceeds the cap of {max_width}")
    out: set[frozenset[Atom]] = set()
    for qneq, _ in _nice_plans(q):
        out |= enumerate_images(qneq, d)
    return out
