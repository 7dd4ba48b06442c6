"""Exact analysis of product-free subsets of the free semigroup."""

from .words import Alphabet, Word, concat, is_prefix, is_suffix, layer_words, rank, unrank
from .sets import (
    Dfa,
    LayerCount,
    LayeredSet,
    dfa_complement,
    dfa_concat,
    dfa_difference,
    dfa_intersect,
    dfa_is_empty,
    dfa_layer_count,
    dfa_length_slice,
    dfa_truncate,
    dfa_union,
    explicit_from_words,
    minkowski_product,
    prefix_excluded,
)
from .density import (
    DensityProfile,
    ball_density,
    detect_period,
    profile,
    refined_density,
    upper_asymptotic,
    upper_banach,
)
from .productfree import WitnessTriple, check_explicit, check_regular, pairwise_inequality
from .proofkit import (
    LSequence,
    PHI,
    Surd,
    exceeds_phi,
    extract_lsequence,
    phi_level_set,
    chained_inequality_check,
    simple_bound_estimate,
    window_bound_certificate,
)
from .constructions import (
    asymmetric_triple,
    counting_pathology,
    greedy_random_productfree,
    odd_occurrence,
)
from .search import (
    SearchResult,
    exhaustive_max_productfree,
    max_productfree,
    upper_bound,
)

__version__ = "0.1.0"
