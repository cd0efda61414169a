"""Exact ping-pong certification for the symplectic hypergeometric cases.

The pipeline: a catalog row fixes integral generators (U, T, R = T*U, the
form J and the mirror involution B); the power structure of R singles out
a unipotent power; cone frames M, N are built from the nilpotent
logarithms; an exact sign analysis certifies or refutes the ping-pong
conditions; verdicts are cross-checked by word sampling and an integer
point oracle.
"""

__version__ = "0.1.0"

from .linalg import (
    Mat,
    MatPoly,
    Poly,
    charpoly,
    cyclotomic,
    nilpotent_exp,
    nilpotent_log,
    rat_str,
)
from .catalog import (
    CaseSpec,
    GroupGens,
    PowerStructure,
    SplittingDescriptor,
    build_generators,
    builtin_catalog,
    case_by_id,
    charpoly_from_params,
    detect_power_structure,
    explore_case,
    load_case_file,
    verify_structure,
)
from .cones import (
    ConePair,
    SignPattern,
    build_cones,
    classify_sign,
    matpoly_sign_over_branch,
)
from .certify import (
    ConditionCheck,
    PingPongCertificate,
    Verdict,
    residue_set,
    splitting_from_structure,
    verify_case,
)
from .words import (
    DetRng,
    Word,
    eval_word,
    order_of_R,
    parse_word,
    sample_reduced_words,
    search_relations,
    verify_relation,
)
from .pointcheck import brute_force_check
from .report import run_case, run_catalog, report_json, report_text

__all__ = [
    "Mat",
    "MatPoly",
    "Poly",
    "charpoly",
    "cyclotomic",
    "nilpotent_exp",
    "nilpotent_log",
    "rat_str",
    "CaseSpec",
    "GroupGens",
    "PowerStructure",
    "SplittingDescriptor",
    "build_generators",
    "builtin_catalog",
    "case_by_id",
    "charpoly_from_params",
    "detect_power_structure",
    "explore_case",
    "load_case_file",
    "verify_structure",
    "ConePair",
    "SignPattern",
    "build_cones",
    "classify_sign",
    "matpoly_sign_over_branch",
    "ConditionCheck",
    "PingPongCertificate",
    "Verdict",
    "residue_set",
    "splitting_from_structure",
    "verify_case",
    "DetRng",
    "Word",
    "eval_word",
    "order_of_R",
    "parse_word",
    "sample_reduced_words",
    "search_relations",
    "verify_relation",
    "brute_force_check",
    "run_case",
    "run_catalog",
    "report_json",
    "report_text",
    "__version__",
]
