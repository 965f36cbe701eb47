"""Toolkit for synchronizing automata and their transition monoids."""

__version__ = "0.1.0"

from .core import (
    Dfa,
    StateSet,
    Transformation,
    Word,
    apply_letter,
    apply_word,
    compose,
    dump_dfa,
    format_dfa_text,
    load_dfa,
    loads_dfa,
    word_transformation,
)
from .families import FamilySpec, build_family, cb, cerny, f, rystsov, v
from .monoid import (
    PermutationGroup,
    generates_symmetric_group,
    has_full_transition_monoid,
    is_two_transitive,
    monoid_closure_size,
)
from .pairgraph import (
    CertificateCheck,
    DiameterResult,
    PairCertificate,
    PairDigraph,
    build_pair_digraph,
    diameter,
    extremal_pair_word,
    pair_certificate,
    pair_distance,
    verify_certificate,
)
from .search import (
    SearchConfig,
    SearchMode,
    SearchRecord,
    canonical_form,
    load_records,
    max_reset_threshold_exhaustive,
    random_pair_diameter_experiment,
    random_rt_experiment,
    summarize_results,
)
from .sync import (
    NOT_SYNCHRONIZING,
    CbRound,
    ExtensionStratification,
    Method,
    PotentialBound,
    ResetResult,
    build_extension_stratification,
    cb_reset_word,
    cb_round_trace,
    extension_reset_word,
    is_synchronizing,
    pairchase_reset_word,
    potential_lower_bound,
    reset_threshold_exact,
)

__all__ = [
    "Dfa",
    "StateSet",
    "Transformation",
    "Word",
    "apply_letter",
    "apply_word",
    "compose",
    "dump_dfa",
    "format_dfa_text",
    "load_dfa",
    "loads_dfa",
    "word_transformation",
    "FamilySpec",
    "build_family",
    "cb",
    "cerny",
    "f",
    "rystsov",
    "v",
    "PermutationGroup",
    "generates_symmetric_group",
    "has_full_transition_monoid",
    "is_two_transitive",
    "monoid_closure_size",
    "CertificateCheck",
    "DiameterResult",
    "PairCertificate",
    "PairDigraph",
    "build_pair_digraph",
    "diameter",
    "extremal_pair_word",
    "pair_certificate",
    "pair_distance",
    "verify_certificate",
    "SearchConfig",
    "SearchMode",
    "SearchRecord",
    "canonical_form",
    "load_records",
    "max_reset_threshold_exhaustive",
    "random_pair_diameter_experiment",
    "random_rt_experiment",
    "summarize_results",
    "NOT_SYNCHRONIZING",
    "CbRound",
    "ExtensionStratification",
    "Method",
    "PotentialBound",
    "ResetResult",
    "build_extension_stratification",
    "cb_reset_word",
    "cb_round_trace",
    "extension_reset_word",
    "is_synchronizing",
    "pairchase_reset_word",
    "potential_lower_bound",
    "reset_threshold_exact",
    "__version__",
]
