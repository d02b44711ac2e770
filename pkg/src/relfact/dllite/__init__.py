"""DL-Lite_R ontology-mediated querying: TBoxes, canonical models, and
relevance of ABox facts under bounded interaction width."""

from .tbox import (
    EMPTY_TBOX,
    Axiom,
    BasicConcept,
    Concept,
    Exists,
    Role,
    TBox,
    consistency_conflict,
    is_consistent,
    parse_tbox,
    realized_concepts,
    realized_roles,
    saturate,
    tbox,
    validate_abox,
)
from .canonical import (
    OMQ,
    CanonicalElement,
    CanonicalModel,
    anonymous_depth,
    canonical_model,
    evaluate_omq,
    evaluation_depth,
    require_consistent,
)
from .interaction import (
    frontier_vars,
    int_atoms,
    interacting,
    interaction_width,
    potentially_relevant,
    probe_depth,
    self_interacting,
)
from .relevance import (
    BRANCH_NOT_POTENTIAL,
    BRANCH_TYPE_I,
    BRANCH_TYPE_II,
    DEFAULT_MAX_IW,
    RelevanceResult,
    potential_atoms,
    relevance_omq,
    relevance_type_i,
    relevance_type_ii,
)

__all__ = [
    "EMPTY_TBOX",
    "Axiom",
    "BasicConcept",
    "Concept",
    "Exists",
    "Role",
    "TBox",
    "consistency_conflict",
    "is_consistent",
    "parse_tbox",
    "realized_concepts",
    "realized_roles",
    "saturate",
    "tbox",
    "validate_abox",
    "OMQ",
    "CanonicalElement",
    "CanonicalModel",
    "anonymous_depth",
    "canonical_model",
    "evaluate_omq",
    "evaluation_depth",
    "require_consistent",
    "frontier_vars",
    "int_atoms",
    "interacting",
    "interaction_width",
    "potentially_relevant",
    "probe_depth",
    "self_interacting",
    "BRANCH_NOT_POTENTIAL",
    "BRANCH_TYPE_I",
    "BRANCH_TYPE_II",
    "DEFAULT_MAX_IW",
    "RelevanceResult",
    "potential_atoms",
    "relevance_omq",
    "relevance_type_i",
    "relevance_type_ii",
]
