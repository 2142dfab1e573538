"""Exact slope and instability invariants for truncated symmetric powers,
Frobenius pushforwards and sheaves of locally exact/closed forms in
characteristic p."""

from .errors import (
    FrobstabError,
    HypothesisError,
    InvariantError,
    NotNormalizedError,
    RankMismatchError,
    SlopeOrderError,
    ValidationError,
    ZeroSheafError,
)
from .forms import (
    FormsTable,
    bound_bn_subsheaf,
    check_zi_instability,
    forms_closed,
    forms_recurrence,
    z1_hn,
)
from .frobenius import (
    SheafStats,
    VarietyContext,
    bound_langer_gap,
    bound_pushforward_caseI,
    bound_pushforward_caseII,
    bound_sun,
    bound_tensor,
    canonical_filtration_ranks,
    deg_pushforward_forms,
    mu_pushforward,
    pushforward_stats,
    stability_advisor,
)
from .hn import HNPolygon, SlopeProfile, dominates, normalize, polygon_of, profile_stats
from .rational import (
    Rational,
    alt_weighted_binomial_sum,
    binomial,
    bounded_compositions,
    format_rational,
    parse_rational,
)
from .truncated import (
    TruncatedDecomposition,
    bound_instab_tl,
    bound_tl2,
    dvec,
    instability_tl_exact,
    rank_tl,
    rank_tl_oracle,
    tl_decomposition,
    tl_extremes,
)

__version__ = "0.1.0"
