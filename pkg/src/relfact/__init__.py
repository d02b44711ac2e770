"""relfact: decide whether a database fact is relevant to a query.

A fact is *relevant* to a (Boolean, possibly ontology-mediated) conjunctive
query on a database if it belongs to at least one minimal support — an
inclusion-minimal subset of the database that satisfies the query.
"""

from .core import (
    Atom,
    CQ,
    CapExceeded,
    Database,
    Fact,
    InconsistentKB,
    ParseError,
    RelfactError,
    Term,
    ValidationError,
    atom,
    const,
    cq,
    database,
    parse_cq,
    parse_database,
    parse_fact,
    var,
)

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "CQ",
    "CapExceeded",
    "Database",
    "Fact",
    "InconsistentKB",
    "ParseError",
    "RelfactError",
    "Term",
    "ValidationError",
    "atom",
    "const",
    "cq",
    "database",
    "parse_cq",
    "parse_database",
    "parse_fact",
    "var",
]
