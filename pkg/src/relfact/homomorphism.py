"""Homomorphisms between conjunctive queries and sets of atoms.

A homomorphism h maps the variables of the source query to terms of the
target, fixes constants, sends every source atom into the target set, and
gives distinct values to the two sides of every source inequality atom
(inequality atoms of the *target* play no role).

The solver backtracks over query atoms, always expanding the atom with the
fewest compatible target atoms under the current partial assignment, and
splits the query into connected components first (variables are connected
when they share a relational atom or an inequality).  Iteration order is
deterministic throughout.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Iterator, Mapping, Optional

from .core import CQ, Atom, Database, Term, ValidationError


Hom = dict[Term, Term]


def _target_atoms(target) -> frozenset[Atom]:
    if isinstance(target, Database):
        return target.facts
    if isinstance(target, CQ):
        return target.atoms
    return frozenset(target)


def apply_hom(h: Mapping[Term, Term], a: Atom) -> Atom:
    return Atom(a.relation, tuple(h.get(t, t) for t in a.args))


def hom_image(h: Mapping[Term, Term], atoms: Iterable[Atom]) -> frozenset[Atom]:
    return frozenset(apply_hom(h, a) for a in atoms)


class _Component:
    """One connected piece of a query: its atoms, diseqs and variables."""

    __slots__ = ("atoms", "diseqs", "variables")

    def __init__(self, atoms: list[Atom], diseqs: list[tuple[Term, Term]]):
        self.atoms = atoms
        self.diseqs = diseqs
        self.variables = sorted({t for a in atoms for t in a.args if t.is_var})


def split_components(q: CQ) -> tuple[list[Atom], list[tuple[Term, Term]], list[_Component]]:
    """Ground atoms, ground inequality pairs, and variable-connected components."""
    parent: dict[Term, Term] = {}

    def find(x: Term) -> Term:
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    def union(x: Term, y: Term) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for a in q.atoms:
        avars = [t for t in a.args if t.is_var]
        for t in avars:
            parent.setdefault(t, t)
        for t in avars[1:]:
            union(avars[0], t)
    # a collapsed pair {t} means t != t: unsatisfiable, modelled as a ground
    # violation so every caller rejects uniformly
    if any(len(p) == 1 for p in q.diseqs):
        t = next(iter(next(p for p in q.diseqs if len(p) == 1)))
        return [], [(t, t)], []
    diseq_pairs = [tuple(sorted(p)) for p in q.diseqs]
    for t1, t2 in diseq_pairs:
        if t1.is_var and t2.is_var:
            union(t1, t2)

    ground_atoms = [a for a in sorted(q.atoms) if not any(t.is_var for t in a.args)]
    ground_diseqs = [(t1, t2) for t1, t2 in sorted(diseq_pairs) if not t1.is_var and not t2.is_var]

    comp_atoms: dict[Term, list[Atom]] = {}
    comp_diseqs: dict[Term, list[tuple[Term, Term]]] = {}
    for a in sorted(q.atoms):
        avars = [t for t in a.args if t.is_var]
        if avars:
            comp_atoms.setdefault(find(avars[0]), []).append(a)
    for t1, t2 in sorted(diseq_pairs):
        v = t1 if t1.is_var else t2
        if v.is_var:
            comp_diseqs.setdefault(find(v), []).append((t1, t2))

    roots = sorted(set(comp_atoms) | set(comp_diseqs))
    comps = [_Component(comp_atoms.get(r, []), comp_diseqs.get(r, [])) for r in roots]
    return ground_atoms, ground_diseqs, comps


def _solve(
    comp: _Component,
    by_rel: dict[str, list[Atom]],
    assign: Hom,
) -> Iterator[Hom]:
    """Yield all total assignments of comp's variables extending ``assign``."""
    todo = [a for a in comp.atoms]

    def diseqs_ok(h: Hom) -> bool:
        for t1, t2 in comp.diseqs:
            v1 = h.get(t1, t1) if t1.is_var else t1
            v2 = h.get(t2, t2) if t2.is_var else t2
            if (not t1.is_var or t1 in h) and (not t2.is_var or t2 in h) and v1 == v2:
                return False
        return True

    def matches(a: Atom, h: Hom) -> list[Atom]:
        out = []
        for t in by_rel.get(a.relation, ()):
            if len(t.args) != len(a.args):
                continue
            local: Hom = {}
            ok = True
            for qt, tt in zip(a.args, t.args):
                if qt.is_var:
                    got = h.get(qt) or local.get(qt)
                    if got is None:
                        local[qt] = tt
                    elif got != tt:
                        ok = False
                        break
                elif qt != tt:
                    ok = False
                    break
            if ok:
                out.append(t)
        return out

    # variables that occur in no relational atom of the component can only
    # come from frozen pre-assignments; they are already in ``assign``
    def rec(remaining: list[Atom], h: Hom) -> Iterator[Hom]:
        if not remaining:
            if diseqs_ok(h):
                yield dict(h)
            return
        # most-constrained atom first
        scored = sorted(
            ((len(matches(a, h)), i, a) for i, a in enumerate(remaining)),
            key=lambda x: (x[0], str(x[2])),
        )
        n, _, best = scored[0]
        if n == 0:
            return
        rest = [a for a in remaining if a is not best]
        for t in matches(best, h):
            h2 = dict(h)
            for qt, tt in zip(best.args, t.args):
                if qt.is_var:
                    h2[qt] = tt
            if diseqs_ok(h2):
                yield from rec(rest, h2)

    yield from rec(todo, dict(assign))


def iter_homs(q: CQ, target, frozen: Optional[Mapping[Term, Term]] = None) -> Iterator[Hom]:
    """All homomorphisms from q into the target atoms, extending ``frozen``.

    ``frozen`` pins some of q's variables to target terms; mappings for
    terms that are not variables of q are ignored.
    """
    atoms = _target_atoms(target)
    by_rel: dict[str, list[Atom]] = {}
    for a in sorted(atoms):
        by_rel.setdefault(a.relation, []).append(a)

    ground_atoms, ground_diseqs, comps = split_components(q)
    if any(a not in atoms for a in ground_atoms):
        return
    for t1, t2 in ground_diseqs:
        if t1 == t2:
            return

    qvars = q.variables()
    base: Hom = {}
    if frozen:
        for v, val in frozen.items():
            if v.is_var and v in qvars:
                base[v] = val

    per_comp: list[list[Hom]] = []
    for comp in comps:
        sols = list(_solve(comp, by_rel, {v: base[v] for v in comp.variables if v in base}))
        if not sols:
            return
        per_comp.append(sols)

    for pieces in product(*per_comp):
        h: Hom = dict(base)
        for piece in pieces:
            h.update(piece)
        yield h


def find_hom(q: CQ, target, frozen: Optional[Mapping[Term, Term]] = None) -> Optional[Hom]:
    for h in iter_homs(q, target, frozen):
        return h
    return None


def satisfies(target, q: CQ, frozen: Optional[Mapping[Term, Term]] = None) -> bool:
    """target |= q (existence of a homomorphism)."""
    return find_hom(q, target, frozen) is not None


def enumerate_images(q: CQ, target, frozen: Optional[Mapping[Term, Term]] = None) -> set[frozenset[Atom]]:
    """Distinct homomorphic images h(q) (sets of target atoms), deduplicated
    per connected component before combining."""
    atoms = _target_atoms(target)
    by_rel: dict[str, list[Atom]] = {}
    for a in sorted(atoms):
        by_rel.setdefault(a.relation, []).append(a)

    ground_atoms, ground_diseqs, comps = split_components(q)
    if any(a not in atoms for a in ground_atoms):
        return set()
    for t1, t2 in ground_diseqs:
        if t1 == t2:
            return set()

    qvars = q.variables()
    base: Hom = {}
    if frozen:
        for v, val in frozen.items():
            if v.is_var and v in qvars:
                base[v] = val

    ground_img = frozenset(ground_atoms)
    images: set[frozenset[Atom]] = {ground_img}
    for comp in comps:
        comp_imgs: set[frozenset[Atom]] = set()
        for h in _solve(comp, by_rel, {v: base[v] for v in comp.variables if v in base}):
            comp_imgs.add(hom_image(h, comp.atoms))
        if not comp_imgs:
            return set()
        images = {img | ci for img in images for ci in comp_imgs}
    return images


def cq_entails(q: CQ, q2: CQ) -> bool:
    """q entails q2: some homomorphism of q2 into q's atoms (respecting the
    inequality atoms of q2, while those of q impose nothing here)."""
    return satisfies(q.atoms, q2)


def _mterms(q: CQ) -> set[Term]:
    return q.terms() | q.constants()


def is_core(q: CQ) -> bool:
    """Every endomorphism of q is injective on its terms."""
    consts = {c: c for c in q.constants()}
    n_terms = len(_mterms(q))
    for h in iter_homs(q, q.atoms):
        full = dict(h)
        full.update(consts)
        if len(set(full.values())) != n_terms:
            return False
    return True


def core_of(q: CQ) -> CQ:
    """A core of q, computed by repeated retraction (deterministic)."""
    cur = q
    while True:
        consts = {c: c for c in cur.constants()}
        n_terms = len(_mterms(cur))
        retract = None
        for h in iter_homs(cur, cur.atoms):
            full = dict(h)
            full.update(consts)
            if len(set(full.values())) != n_terms:
                retract = h
                break
        if retract is None:
            return cur
        new_atoms = frozenset(apply_hom(retract, a) for a in cur.atoms)
        new_diseqs = []
        for pair in cur.diseqs:
            t1, t2 = tuple(pair)
            i1 = retract.get(t1, t1)
            i2 = retract.get(t2, t2)
            if i1 == i2:
                raise ValidationError("retraction collapses an inequality atom")
            new_diseqs.append((i1, i2))
        cur = CQ(new_atoms, frozenset(frozenset(p) for p in new_diseqs))
