"""Arithmetic progressions in multiplicative subgroups of prime fields."""

__version__ = "0.1.0"

from .errors import DomainError, NumericDriftError, ResourceError  # noqa: E402
from .field_core import (  # noqa: E402
    FieldContext,
    Subgroup,
    build_context,
    element_order,
    factorize,
    is_prime,
    subgroup,
)
from .characters import (  # noqa: E402
    CharTuple,
    Character,
    characters_trivial_on,
    indicator_expansion_check,
    progression_char_sum,
    verify_weil,
)
from .ap_census import (  # noqa: E402
    CensusResult,
    census_sweep,
    count_brute,
    count_normalized,
    count_via_characters,
    proposition2_check,
)
from .pseudorandom import (  # noqa: E402
    LinearFormSystem,
    correlation_expectation,
    gt_parameters,
    linear_forms_expectation,
    subset_ap_experiment,
)
from .polynomials import IntPolynomial, resultant  # noqa: E402
from .construction import (  # noqa: E402
    ConstructionConfig,
    apfree_search,
    bad_prime_certificate,
    build_F,
    min_ord_scan,
    mult_independent_subset,
    ord_tuple,
    prime_density,
)
