"""
Facts, queries, and minimal supports
====================================

A Boolean conjunctive query holds on a database when some homomorphism maps
its atoms into the facts.  A *minimal support* is an inclusion-minimal set of
facts that already makes the query true, and a fact is *relevant* when it
belongs to at least one minimal support.  This walk-through builds the
four-fact example used throughout the test suite and inspects it.
"""

from relfact.core import atom, parse_cq, parse_database
from relfact.homomorphism import enumerate_images, find_hom, satisfies
from relfact.supports import (
    is_minimal_support,
    minimal_supports,
    relevant_bruteforce,
    relevant_facts,
)

# Two hops of the same relation: R(?x, ?y), R(?y, ?z).  Variables start
# with '?', everything else is a constant.
q = parse_cq("R(?x, ?y), R(?y, ?z)")

# f1..f4: a path a->b->c, a loop at d, and a dangling edge d->e.
d = parse_database("R(a, b)\nR(b, c)\nR(d, d)\nR(d, e)")
f1, f2, f3, f4 = sorted(d.facts)
print("query:   ", q.serialize())
print("database:", ", ".join(str(f) for f in sorted(d.facts)))

# The query is satisfied: one witnessing homomorphism...
print("\nsatisfied:", satisfies(d, q))
print("witness:  ", {str(k): str(v) for k, v in find_hom(q, d).items()})

# ...but there are several homomorphic images, and not all of them are
# minimal: the loop R(d, d) satisfies both atoms on its own, so any image
# that strictly contains it is wasteful.
print("\nall homomorphic images:")
for image in sorted(enumerate_images(q, d), key=sorted):
    print("  ", {str(f) for f in image})

print("\nminimal supports:")
for sup in sorted(minimal_supports(q, d), key=sorted):
    print("  ", {str(f) for f in sup})

# is_minimal_support separates the two notions: {f3, f4} entails the query
# but is not minimal because {f3} already does.
print("\n{f3} minimal support:    ", is_minimal_support(q, {f3}))
print("{f3, f4} minimal support:", is_minimal_support(q, {f3, f4}))

# Fact relevance: f1, f2, f3 each appear in some minimal support, f4 in none.
# Removing an irrelevant fact can never change any best explanation.
for f in (f1, f2, f3, f4):
    print(f"relevant({f}):", relevant_bruteforce(q, d, f))
print("\nall relevant facts:", {str(f) for f in relevant_facts(q, d)})

# Constants in the query must be matched exactly, so anchoring the first
# hop at d leaves only the loop as a support.
q_at_d = parse_cq("R(d, ?y), R(?y, ?z)")
print("\nanchored at d:", [
    {str(f) for f in s} for s in minimal_supports(q_at_d, d)
])

# Inequalities make the picture finer: with ?x != ?z the loop alone no
# longer qualifies (it collapses x and z), but it stays relevant paired
# with the dangling edge d -> e.
q_neq = parse_cq("R(?x, ?y), R(?y, ?z), ?x != ?z")
print("with ?x != ?z:", [
    {str(f) for f in s} for s in minimal_supports(q_neq, d)
])
print("R(d, d) still relevant:", relevant_bruteforce(q_neq, d, atom("R", "d", "d")))
