"""Exact arithmetic for matrix loop groups, their Cartan strata, and bundles
on the projective line presented by gluing data at marked points."""

from . import errors
from .cartan import (
    CartanFactorization,
    CoarseStratum,
    Cocharacter,
    ParabolicType,
    coarse_stratum,
    parabolic_type,
    smith_normal_form,
    stratum,
)
from .factorization import (
    ElementaryFactor,
    Factorization,
    extend_point,
    factor_elementary,
    lift_factorization,
    reduce_datum,
    reduce_factorization,
    reduce_loop,
)
from .loops import (
    LoopMatrix,
    elementary_loop,
    is_positive,
    mat_inverse,
    mat_mul,
    monomial_loop,
    pole_bound,
    random_loop,
    random_positive,
    transpose_inverse,
)
from .p1bundles import (
    MarkedPoint,
    ModificationDatum,
    SplittingType,
    all_strata_zero,
    expand_at,
    h0,
    is_isomorphic,
    is_trivial,
    modify,
    splitting_type,
    strata_of,
)
from .rings import QQ, ArtinianRing, PrimeField, RationalField
from .series import (
    DEFAULT_PRECISION,
    LaurentSeries,
    PowerSeries,
    RationalFunction,
    expand_shift,
)

__all__ = [
    "QQ",
    "ArtinianRing",
    "CartanFactorization",
    "CoarseStratum",
    "Cocharacter",
    "DEFAULT_PRECISION",
    "ElementaryFactor",
    "Factorization",
    "LaurentSeries",
    "LoopMatrix",
    "MarkedPoint",
    "ModificationDatum",
    "ParabolicType",
    "PowerSeries",
    "PrimeField",
    "RationalField",
    "RationalFunction",
    "SplittingType",
    "all_strata_zero",
    "coarse_stratum",
    "elementary_loop",
    "errors",
    "expand_at",
    "expand_shift",
    "extend_point",
    "factor_elementary",
    "h0",
    "is_isomorphic",
    "is_positive",
    "is_trivial",
    "lift_factorization",
    "mat_inverse",
    "mat_mul",
    "modify",
    "monomial_loop",
    "parabolic_type",
    "pole_bound",
    "random_loop",
    "random_positive",
    "reduce_datum",
    "reduce_factorization",
    "reduce_loop",
    "smith_normal_form",
    "splitting_type",
    "strata_of",
    "stratum",
    "transpose_inverse",
]
