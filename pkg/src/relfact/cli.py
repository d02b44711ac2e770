"""Command-line front end: relevance decisions, minimal-support listings,
query evaluation, structural classification, and gadget emission.

Exit codes: 0 = command ran and printed its verdict; 2 = parse/input error;
3 = inconsistent knowledge base; 4 = a size cap was exceeded (rerun with
--engine bruteforce or a larger cap).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Optional

from .core import (
    Atom,
    CQ,
    CapExceeded,
    Database,
    InconsistentKB,
    ParseError,
    ValidationError,
    parse_cq,
    parse_database,
)
from .dllite import (
    EMPTY_TBOX,
    OMQ,
    TBox,
    evaluate_omq,
    interaction_width,
    parse_tbox,
    relevance_omq,
    require_consistent,
)
from .homomorphism import satisfies
from .reductions import (
    cq_to_digraph,
    db_to_digraph,
    digraph_to_cq,
    digraph_to_db,
    eval_to_relevance,
    hampath_to_chain_relevance,
    has_ham_path,
    parse_digraph,
    parse_dimacs,
    cnf_satisfiable,
    remove_selfjoins,
    sat_gadget_relevant,
    sat_to_aq_relevance,
)
from .sjw import minimal_supports_sjw, relevant_sjw, self_join_width
from .structure import classify
from .supports import (
    DEFAULT_MAX_FACTS,
    is_minimal_support,
    minimal_supports,
    relevant_bruteforce,
)

DEFAULT_MAX_SJW = 6
DEFAULT_MAX_IW = 5


@dataclass
class RunReport:
    """Machine-readable result of one CLI invocation."""

    command: str
    verdict: object
    algorithm: Optional[str] = None
    timing_ms: float = 0.0
    witness: Optional[list[str]] = None
    supports: Optional[list[list[str]]] = None
    structure: Optional[dict] = None

    def to_json(self) -> str:
        data = {k: v for k, v in asdict(self).items() if v is not None}
        return json.dumps(data, indent=2, sort_keys=True)

    def lines(self) -> list[str]:
        out = [str(self.verdict)]
        if self.algorithm:
            out.append(f"algorithm: {self.algorithm}")
        out.append(f"time: {self.timing_ms:.1f} ms")
        if self.witness is not None:
            out.append("witness: " + ", ".join(self.witness))
        if self.supports is not None:
            out[0] = f"{len(self.supports)} minimal support(s)"
            out += [", ".join(s) for s in self.supports]
        if self.structure is not None:
            out = [f"{k}: {v}" for k, v in self.structure.items()]
            out.append(f"time: {self.timing_ms:.1f} ms")
        return out


def _emit(report: RunReport, as_json: bool) -> None:
    if as_json:
        print(report.to_json())
    else:
        print("\n".join(report.lines()))


# ---------------------------------------------------------------------------
# Input loading
# ---------------------------------------------------------------------------

def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load(args) -> tuple[CQ, Database, Optional[TBox]]:
    q = parse_cq(_read(args.query))
    d = parse_database(_read(args.data))
    t = None
    if getattr(args, "tbox", None):
        # arities from the instance disambiguate bare names in the TBox text
        atoms = list(q.atoms) + list(d.facts)
        roles = {a.relation for a in atoms if a.arity == 2}
        concepts = {a.relation for a in atoms if a.arity == 1}
        t = parse_tbox(_read(args.tbox), roles=roles, concepts=concepts)
    return q, d, t


def _parse_fact(text: str) -> Atom:
    d = parse_database(text)
    if len(d.facts) != 1:
        raise ValidationError(f"expected exactly one fact, got {text!r}")
    (f,) = d.facts
    return f


def _sorted_supports(sups) -> list[frozenset[Atom]]:
    return sorted(sups, key=lambda s: (len(s), sorted(str(a) for a in s)))


def _support_strs(s) -> list[str]:
    return [str(a) for a in sorted(s)]


# ---------------------------------------------------------------------------
# Relevance engines
# ---------------------------------------------------------------------------

def _omq_oracle(omq: OMQ, a: Database) -> Callable[[frozenset[Atom]], bool]:
    require_consistent(a, omq.tbox)
    return lambda s: evaluate_omq(Database(frozenset(s)), omq)


def _pick_engine(q: CQ, t: Optional[TBox], args) -> str:
    if args.engine != "auto":
        return args.engine
    if t is not None:
        return "omq" if interaction_width(OMQ(t, q)) <= args.max_iw else "bruteforce"
    if not q.diseqs and self_join_width(q) <= args.max_sjw:
        return "sjw"
    return "bruteforce"


def _decide(q: CQ, d: Database, t: Optional[TBox], f: Atom, args) -> tuple[bool, str]:
    engine = _pick_engine(q, t, args)
    if engine == "sjw":
        if t is not None:
            raise ValidationError("--engine sjw does not support a TBox")
        return relevant_sjw(q, d, f, max_width=args.max_sjw), "sjw"
    if engine == "omq":
        result = relevance_omq(f, OMQ(t or EMPTY_TBOX, q), d, max_width=args.max_iw)
        return bool(result), result.branch
    # brute force; the |D| cap applies only when the engine was auto-picked
    if args.engine == "auto" and len(d.facts) > args.max_facts:
        raise CapExceeded(
            f"|D| = {len(d.facts)} exceeds the brute-force cap "
            f"{args.max_facts}; pass --engine bruteforce to override"
        )
    if t is None:
        return relevant_bruteforce(q, d, f), "bruteforce"
    sups = minimal_supports(
        None, d, oracle=_omq_oracle(OMQ(t, q), d), max_facts=len(d.facts)
    )
    return any(f in s for s in sups), "bruteforce"


def _all_supports(q: CQ, d: Database, t: Optional[TBox], args) -> list[frozenset[Atom]]:
    if t is not None:
        sups = minimal_supports(
            None, d, oracle=_omq_oracle(OMQ(t, q), d), max_facts=args.max_facts
        )
    elif not q.diseqs and self_join_width(q) <= args.max_sjw:
        sups = minimal_supports_sjw(q, d, max_width=args.max_sjw)
    else:
        sups = minimal_supports(q, d)
    return _sorted_supports(sups)


def _witness(q: CQ, d: Database, t: Optional[TBox], f: Atom, args) -> Optional[list[str]]:
    for s in _all_supports(q, d, t, args):
        if f in s:
            oracle = _omq_oracle(OMQ(t, q), d) if t is not None else None
            assert is_minimal_support(q, s, oracle=oracle)
            return _support_strs(s)
    return None


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_relevance(args) -> int:
    q, d, t = _load(args)
    f = _parse_fact(args.fact)
    if f not in d.facts:
        raise ValidationError(f"fact {f} is not in the data")
    start = time.perf_counter()
    verdict, algorithm = _decide(q, d, t, f, args)
    witness = _witness(q, d, t, f, args) if args.witness and verdict else None
    ms = (time.perf_counter() - start) * 1000
    report = RunReport(
        "relevance",
        "relevant" if verdict else "irrelevant",
        algorithm=algorithm,
        timing_ms=ms,
        witness=witness,
    )
    _emit(report, args.json)
    return 0


def cmd_supports(args) -> int:
    q, d, t = _load(args)
    start = time.perf_counter()
    sups = _all_supports(q, d, t, args)
    ms = (time.perf_counter() - start) * 1000
    report = RunReport(
        "supports",
        len(sups),
        timing_ms=ms,
        supports=[_support_strs(s) for s in sups],
    )
    _emit(report, args.json)
    return 0


def cmd_evaluate(args) -> int:
    q, d, t = _load(args)
    start = time.perf_counter()
    if t is None:
        verdict = satisfies(d, q)
    else:
        verdict = evaluate_omq(d, OMQ(t, q), depth=args.depth)
    ms = (time.perf_counter() - start) * 1000
    _emit(RunReport("evaluate", str(verdict).lower(), timing_ms=ms), args.json)
    return 0


def cmd_classify(args) -> int:
    q, d, t = _load(args)
    start = time.perf_counter()
    rep = classify(q)
    info = {
        "acyclic": rep.acyclic,
        "connected": rep.connected,
        "leaf_count": rep.leaf_count,
        "is_chain": rep.is_chain,
        "treewidth": rep.treewidth,
        "self_join_free": rep.self_join_free,
        "self_join_width": self_join_width(q),
    }
    try:
        info["interaction_width"] = interaction_width(OMQ(t or EMPTY_TBOX, q))
    except ValidationError:
        info["interaction_width"] = None
    ms = (time.perf_counter() - start) * 1000
    _emit(
        RunReport("classify", "classified", timing_ms=ms, structure=info), args.json
    )
    return 0


# ---------------------------------------------------------------------------
# Gadget emission
# ---------------------------------------------------------------------------

def _write(out: Path, name: str, text: str, files: list[str]) -> None:
    path = out / name
    path.write_text(text + "\n", encoding="utf-8")
    files.append(str(path))


def _verdict_word(flag: bool) -> str:
    return "relevant" if flag else "irrelevant"


def cmd_reduce(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files: list[str] = []
    verify: Optional[dict] = None

    if args.gadget == "sat":
        phi = parse_dimacs(_read(args.infile))
        g = sat_to_aq_relevance(phi)
        rules = "\n".join(
            " & ".join(sorted(body)) + f" -> {head}" for body, head in g.rules
        )
        _write(out, "rules.txt", rules, files)
        _write(out, "abox.txt", g.abox.serialize(), files)
        _write(out, "query.txt", str(g.query), files)
        _write(out, "fact.txt", str(g.fact), files)
        if args.verify:
            rel, sat = sat_gadget_relevant(g), cnf_satisfiable(phi)
            verify = {"relevant": rel, "sat": sat, "agree": rel == sat}
            print(
                f"verify: {_verdict_word(rel)}, sat: {str(sat).lower()}, "
                f"{'agree' if rel == sat else 'DISAGREE'}"
            )
    elif args.gadget == "hampath":
        g = parse_digraph(_read(args.infile))
        if not args.source or not args.target:
            raise ValidationError("--gadget hampath needs --source and --target")
        q, d, fact = hampath_to_chain_relevance(g, args.source, args.target)
        _write(out, "query.txt", q.serialize(), files)
        _write(out, "data.txt", d.serialize(), files)
        _write(out, "fact.txt", str(fact), files)
        if args.verify:
            rel = relevant_bruteforce(q, d, fact)
            ham = has_ham_path(g, args.source, args.target)
            verify = {"relevant": rel, "hampath": ham, "agree": rel == ham}
            print(
                f"verify: {_verdict_word(rel)}, hampath: {str(ham).lower()}, "
                f"{'agree' if rel == ham else 'DISAGREE'}"
            )
    elif args.gadget == "selfjoin":
        if not args.data:
            raise ValidationError("--gadget selfjoin needs --data")
        q = parse_cq(_read(args.infile))
        d = parse_database(_read(args.data))
        omq, d2 = remove_selfjoins(q, d)
        _write(out, "query.txt", omq.query.serialize(), files)
        _write(out, "tbox.txt", omq.tbox.serialize(), files)
        _write(out, "data.txt", d2.serialize(), files)
        if args.verify:
            agree = all(
                bool(relevance_omq(f, omq, d2)) == relevant_bruteforce(q, d, f)
                for f in sorted(d.facts)
            )
            verify = {"agree": agree, "checked": len(d.facts)}
            print(
                f"verify: {len(d.facts)}/{len(d.facts)} verdicts checked, "
                f"{'agree' if agree else 'DISAGREE'}"
            )
    elif args.gadget == "digraph":
        g = parse_digraph(_read(args.infile))
        q, d = digraph_to_cq(g), digraph_to_db(g)
        _write(out, "query.txt", q.serialize(), files)
        _write(out, "data.txt", d.serialize(), files)
        if args.verify:
            agree = cq_to_digraph(q) == g and db_to_digraph(d) == g
            verify = {"agree": agree}
            print(
                "verify: round-trip edge sets "
                f"{'identical, agree' if agree else 'differ, DISAGREE'}"
            )
    elif args.gadget == "eval":
        if not args.data:
            raise ValidationError("--gadget eval needs --data")
        q = parse_cq(_read(args.infile))
        d = parse_database(_read(args.data))
        q2, d2, fact = eval_to_relevance(q, d)
        _write(out, "query.txt", q2.serialize(), files)
        _write(out, "data.txt", d2.serialize(), files)
        _write(out, "fact.txt", str(fact), files)
        if args.verify:
            sat_, rel = satisfies(d, q), relevant_bruteforce(q2, d2, fact)
            verify = {"satisfied": sat_, "relevant": rel, "agree": sat_ == rel}
            print(
                f"verify: {_verdict_word(rel)}, satisfied: {str(sat_).lower()}, "
                f"{'agree' if sat_ == rel else 'DISAGREE'}"
            )

    if args.json:
        print(json.dumps(
            {"command": "reduce", "gadget": args.gadget, "files": files,
             "verify": verify},
            indent=2, sort_keys=True,
        ))
    else:
        for path in files:
            print(f"wrote {path}")
    return 0 if verify is None or verify.get("agree", True) else 1


# ---------------------------------------------------------------------------
# Argument parsing and entry point
# ---------------------------------------------------------------------------

def _add_instance_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--query", required=True, help="query file")
    p.add_argument("--data", required=True, help="database / ABox file")
    p.add_argument("--tbox", help="TBox file (switches to OMQ semantics)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--max-facts", type=int, default=DEFAULT_MAX_FACTS,
                   help="brute-force database size cap")
    p.add_argument("--max-sjw", type=int, default=DEFAULT_MAX_SJW,
                   help="self-join width cap")
    p.add_argument("--max-iw", type=int, default=DEFAULT_MAX_IW,
                   help="interaction width cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relfact",
        description="Decide whether facts are relevant to (ontology-mediated) "
        "conjunctive queries, and emit the associated hardness gadgets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("relevance", help="is the fact in some minimal support?")
    _add_instance_flags(p)
    p.add_argument("--fact", required=True, help='fact, e.g. "R(a, b)"')
    p.add_argument("--engine", choices=["auto", "bruteforce", "sjw", "omq"],
                   default="auto")
    p.add_argument("--witness", action="store_true",
                   help="print a minimal support containing the fact")
    p.set_defaults(func=cmd_relevance)

    p = sub.add_parser("supports", help="list all minimal supports")
    _add_instance_flags(p)
    p.set_defaults(func=cmd_supports)

    p = sub.add_parser("evaluate", help="does the data satisfy the query?")
    _add_instance_flags(p)
    p.add_argument("--depth", type=int, default=None,
                   help="canonical-model depth override (OMQ only)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("classify", help="structural measures of the query")
    _add_instance_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("reduce", help="emit a hardness-gadget instance")
    p.add_argument("--gadget", required=True,
                   choices=["sat", "hampath", "selfjoin", "digraph", "eval"])
    p.add_argument("--in", dest="infile", required=True, help="input file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--data", help="database file (selfjoin / eval gadgets)")
    p.add_argument("--source", help="source vertex (hampath gadget)")
    p.add_argument("--target", help="target vertex (hampath gadget)")
    p.add_argument("--verify", action="store_true",
                   help="run the matching brute-force oracle")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_reduce)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InconsistentKB as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
