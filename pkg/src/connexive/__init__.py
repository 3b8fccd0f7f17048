"""Proof kernel, decision procedure, and proof transformations for the
connexive logic C and its extensions C3, MC, and CN."""

from .bridge import nd_to_sc, normalize, sc_to_nd
from .checking import CheckReport, InvalidProof
from .embedding import EmbedReport, embed_check, embed_check_cn, translate_f, translate_sequent
from .formula import (
    And,
    Formula,
    Imp,
    Neg,
    Or,
    ParseError,
    Var,
    parse,
    show,
)
from .natded import (
    Derivation,
    MaxOccurrence,
    NdRule,
    NdSystem,
    assumption,
    check_derivation,
    derivation_from_json,
    derivation_to_json,
    is_normal,
    maximum_formulas,
)
from .prover import (
    ProveResult,
    ResourceExceeded,
    SearchConfig,
    Verdict,
    decide,
    eliminate_cut,
    separation_matrix,
)
from .reduction import (
    NormalizationResult,
    ReductionKind,
    classify,
    normalize_by_reduction,
    permute_general,
    reduce_step,
)
from .sequent import (
    Calculus,
    Rule,
    Sequent,
    SequentProof,
    check_proof,
    identity_proof,
    parse_sequent,
    proof_from_json,
    proof_to_json,
    seq,
    weaken_proof,
)

__all__ = [
    "And",
    "Calculus",
    "CheckReport",
    "Derivation",
    "EmbedReport",
    "Formula",
    "Imp",
    "InvalidProof",
    "MaxOccurrence",
    "NdRule",
    "NdSystem",
    "Neg",
    "NormalizationResult",
    "Or",
    "ParseError",
    "ProveResult",
    "ReductionKind",
    "ResourceExceeded",
    "Rule",
    "SearchConfig",
    "Sequent",
    "SequentProof",
    "Var",
    "Verdict",
    "assumption",
    "check_derivation",
    "check_proof",
    "classify",
    "decide",
    "derivation_from_json",
    "derivation_to_json",
    "eliminate_cut",
    "embed_check",
    "embed_check_cn",
    "identity_proof",
    "is_normal",
    "maximum_formulas",
    "nd_to_sc",
    "normalize",
    "normalize_by_reduction",
    "parse",
    "parse_sequent",
    "permute_general",
    "proof_from_json",
    "proof_to_json",
    "reduce_step",
    "sc_to_nd",
    "separation_matrix",
    "seq",
    "show",
    "translate_f",
    "translate_sequent",
    "weaken_proof",
]
