"""Supports, minimal supports, and brute-force relevance.

A *support* of q in D is any S subseteq D with S |= q; it is *minimal* if no
proper subset is a support.  A fact is *relevant* iff it lies in some
minimal support.

For plain CQ semantics the supports inside a set are exactly the supersets
of homomorphic images, so minimal supports coincide with inclusion-minimal
images and everything can be computed from the image set.  For an opaque
(but monotone) satisfaction oracle — e.g. certain answers over an ontology —
we fall back to a cardinality-ordered sweep of the subset lattice.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Iterable, Optional

from .core import CQ, Atom, CapExceeded, Database
from .homomorphism import enumerate_images, satisfies

# a monotone subset oracle: S |-> (S |= query)
Oracle = Callable[[frozenset[Atom]], bool]

DEFAULT_MAX_FACTS = 20


def is_support(q: CQ, s: Iterable[Atom]) -> bool:
    return satisfies(frozenset(s), q)


def is_minimal_support(q: CQ, s: Iterable[Atom], oracle: Optional[Oracle] = None) -> bool:
    """S is a support and no fact can be dropped."""
    s = frozenset(s)
    sat = oracle if oracle is not None else (lambda t: satisfies(t, q))
    if not sat(s):
        return False
    return all(not sat(s - {f}) for f in s)


def _minimal_images(q: CQ, d: Database) -> set[frozenset[Atom]]:
    images = enumerate_images(q, d)
    return {i for i in images if not any(j < i for j in images)}


def minimal_supports(
    q: Optional[CQ],
    d: Database,
    oracle: Optional[Oracle] = None,
    max_facts: int = DEFAULT_MAX_FACTS,
) -> set[frozenset[Atom]]:
    """All minimal supports of q in d.

    With ``oracle`` given, q is ignored and the oracle's monotone semantics
    is used; the sweep visits subsets by increasing cardinality, skipping
    supersets of already-found supports, so each reported set is minimal.
    """
    if oracle is None:
        assert q is not None
        return _minimal_images(q, d)
    facts = sorted(d.facts)
    if len(facts) > max_facts:
        raise CapExceeded(
            f"subset sweep over {len(facts)} facts exceeds the cap of {max_facts}"
        )
    found: list[frozenset[Atom]] = []
    if oracle(frozenset()):
        return {frozenset()}
    for r in range(1, len(facts) + 1):
        for combo in combinations(facts, r):
            s = frozenset(combo)
            if any(m <= s for m in found):
                continue
            if oracle(s):
                found.append(s)
    return set(found)


def relevant_facts(
    q: Optional[CQ],
    d: Database,
    oracle: Optional[Oracle] = None,
    max_facts: int = DEFAULT_MAX_FACTS,
) -> set[Atom]:
    """The union of all minimal supports."""
    out: set[Atom] = set()
    for s in minimal_supports(q, d, oracle, max_facts):
        out |= s
    return out


def _unify_atom_with_fact(a: Atom, f: Atom) -> Optional[dict]:
    """Most general assignment sending atom a to fact f, or None."""
    if a.relation != f.relation or a.arity != f.arity:
        return None
    sigma: dict = {}
    for qt, ft in zip(a.args, f.args):
        if qt.is_var:
            if sigma.setdefault(qt, ft) != ft:
                return None
        elif qt != ft:
            return None
    return sigma


def relevant_bruteforce(q: CQ, d: Database, f: Atom) -> bool:
    """Is f in some minimal support of q in d?  (Plain CQ semantics.)

    Anchored enumeration: every image containing f sends some query atom to
    f, so it suffices to enumerate images extending each unifier of a query
    atom with f, and test inclusion-minimality of each candidate by looking
    for an image of q strictly inside it.
    """
    if f not in d.facts:
        return False
    seen: set[frozenset[Atom]] = set()
    for a in sorted(q.atoms):
        sigma = _unify_atom_with_fact(a, f)
        if sigma is None:
            continue
        for img in enumerate_images(q, d, frozen=sigma):
            if f not in img or img in seen:
                continue
            seen.add(img)
            inner = enumerate_images(q, img)
            if not any(j < img for j in inner):
                return True
    return False


def relevant_oracle(
    d: Database,
    f: Atom,
    oracle: Oracle,
    max_facts: int = DEFAULT_MAX_FACTS,
) -> bool:
    """Relevance under an opaque monotone oracle, via the subset sweep."""
    if f not in d.facts:
        return False
    return any(f in s for s in minimal_supports(None, d, oracle, max_facts))
