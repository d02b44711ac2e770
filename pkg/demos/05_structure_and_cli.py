"""
Structural classification and the command-line interface
========================================================

Relevance complexity tracks query shape: acyclicity, number of leaves,
treewidth, self-join width, interaction width.  classify() reports them
all, and the `relfact` CLI wraps every capability behind subcommands with
stable exit codes and an optional JSON report.
"""

import json
import tempfile
from pathlib import Path

from relfact.cli import main
from relfact.core import atom, cq, parse_cq
from relfact.sjw import self_join_width
from relfact.structure import classify

# Chains are the friendly case: acyclic, two leaves, treewidth 1.
chain = cq([atom("R", f"?x{i}", f"?x{i + 1}") for i in range(4)])
rep = classify(chain)
print("chain:", rep.describe())

# The triangle is cyclic with treewidth 2; a star has many leaves.
print("triangle:", classify(parse_cq("R(?x, ?y), R(?y, ?z), R(?z, ?x)")).describe())
print("star:    ", classify(parse_cq("R(?c, ?a), R(?c, ?b), R(?c, ?d)")).describe())
print("chain self-join width:", self_join_width(chain))

# --- the CLI on the same objects ------------------------------------------
# main() takes an argv list and returns the exit code: 0 = answered,
# 2 = bad input, 3 = inconsistent knowledge base, 4 = a cap was exceeded.
tmp = Path(tempfile.mkdtemp(prefix="relfact-demo-"))
(tmp / "q.txt").write_text("R(?x, ?y), R(?y, ?z)\n")
(tmp / "d.txt").write_text("R(a, b)\nR(b, c)\nR(d, d)\nR(d, e)\n")
(tmp / "t.txt").write_text("Rp sub R\nRp sub R-\n")
(tmp / "a.txt").write_text("Rp(c, d)\nR(d, d)\nA(d)\n")
(tmp / "oq.txt").write_text("R(?x, ?y), R(?y, ?z), A(?z)\n")

print("\n$ relfact relevance --query q.txt --data d.txt --fact 'R(d, e)'")
code = main(["relevance", "--query", str(tmp / "q.txt"),
             "--data", str(tmp / "d.txt"), "--fact", "R(d, e)"])
print("exit code:", code)

print("\n$ relfact supports --query q.txt --data d.txt")
main(["supports", "--query", str(tmp / "q.txt"), "--data", str(tmp / "d.txt")])

print("\n$ relfact relevance ... --tbox t.txt --fact 'Rp(c, d)' --witness --json")
main(["relevance", "--query", str(tmp / "oq.txt"), "--data", str(tmp / "a.txt"),
      "--tbox", str(tmp / "t.txt"), "--fact", "Rp(c, d)", "--witness", "--json"])

print("\n$ relfact classify --query oq.txt --tbox t.txt ...")
main(["classify", "--query", str(tmp / "oq.txt"), "--data", str(tmp / "a.txt"),
      "--tbox", str(tmp / "t.txt")])

# Gadget emission also lives on the CLI; --verify reruns the oracle.
dimacs = tmp / "phi.cnf"
dimacs.write_text("p cnf 2 2\n1 2 0\n-1 -2 0\n")
out = tmp / "gadget"
print("\n$ relfact reduce --gadget sat --in phi.cnf --out gadget/ --verify")
main(["reduce", "--gadget", "sat", "--in", str(dimacs),
      "--out", str(out), "--verify"])
print("emitted:", sorted(p.name for p in out.iterdir()))

# Exit codes are load-bearing: a fact outside the database is an input
# error (2), and a KB contradiction reports 3 instead of a verdict.
code = main(["relevance", "--query", str(tmp / "q.txt"),
             "--data", str(tmp / "d.txt"), "--fact", "R(z, z)"])
print("\nfact not in data -> exit", code)
(tmp / "bad.txt").write_text("A sub not B\n")
(tmp / "ab.txt").write_text("A(a)\nB(a)\n")
(tmp / "cq.txt").write_text("A(?x)\n")
code = main(["relevance", "--query", str(tmp / "cq.txt"),
             "--data", str(tmp / "ab.txt"), "--tbox", str(tmp / "bad.txt"),
             "--fact", "A(a)"])
print("inconsistent KB -> exit", code)

# The JSON report is schema-stable; downstream tools can parse it back.
import contextlib
import io

buf = io.StringIO()
with contextlib.redirect_stdout(buf):
    main(["supports", "--query", str(tmp / "q.txt"),
          "--data", str(tmp / "d.txt"), "--json"])
report = json.loads(buf.getvalue())
print("\nparsed JSON report keys:", sorted(report))
print("supports from JSON:", report["supports"])
