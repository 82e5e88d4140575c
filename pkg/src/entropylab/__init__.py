"""Entropy as a set function on finite subsets of acting groups.

Measure-theoretic (Shannon) and topological entropy evaluated as functions
F -> H(F) on finite subsets of an acting group, with exact checkers for the
subadditivity property hierarchy (monotonicity, subadditivity, Shearer's
inequality, strong subadditivity and its conditional equivalents), k-cover
machinery, desk-scale infimum-rule reports, a projection counting bound, and
a counterexample search harness, all on concrete symbolic systems.
"""

__version__ = "0.1.0"

from .covers import (
    KCover,
    ShearerReport,
    coverage_count,
    enumerate_kcovers,
    is_splitting,
    shearer_check,
    shifted_cover,
)
from .descriptions import (
    PRESETS,
    SystemDescription,
    from_dict,
    load_description,
    preset,
)
from .entropy import (
    CoverSpec,
    EntropyFunction,
    conditional_value,
    htop,
    min_subcover,
    normalized,
    refined_cover_elements,
)
from .errors import (
    BudgetExceededError,
    EntropyLabError,
    GroupError,
    ResourceLimitError,
    ValidationError,
)
from .groups import (
    CayleyTableGroup,
    CyclicGroup,
    FiniteSubset,
    FreeGroup,
    ZPowerGroup,
    empty_subset,
    enumerate_subsets,
    folner,
    inverse_set,
    product_set,
    translate,
)
from .measures import (
    BernoulliMeasure,
    ExplicitFiniteMeasure,
    MarkovMeasure,
    Observable,
    cell_distribution,
    entropy_of_partition,
    pattern_prob,
    shannon_entropy,
)
from .properties import (
    PROPERTIES,
    InfimumReport,
    PropertyReport,
    check_property,
    counting_lemma_check,
    counting_lemma_fuzz,
    folner_profile,
    implication_consistency,
    infimum_estimate,
    infimum_rule_report,
    reverify_violation,
    tuples_as_patterns,
)
from .search import search_counterexample
from .symbolic import (
    Alphabet,
    ExplicitFiniteSubshift,
    FullShift,
    Pattern,
    ZSft,
    count_language,
    language,
    project,
)
