"""Verification toolkit for the asymptotic series of int_0^1 (x^n + (1-x)^n)^(1/n) dx."""

__version__ = "0.1.0"

from .coefficients import amzv_form, closed_form, conjecture1_combo, reduce_to_zeta
from .expr import (
    ExprSum,
    InvNSeries,
    TermExpr,
    integrate_exprsum,
    integrate_term,
    louchard_integrand_series,
)
from .hp import Precision, integrate_finite, integrate_semi_infinite, log2_value, zeta_value
from .louchard import I_direct, asymptotic_partial_sum, remainder_diagnostic
from .mzv import (
    AmzvCombination,
    AmzvIndex,
    ZetaMonomial,
    ZetaPolynomial,
    amzv_eval_lemma,
    amzv_nested_sum,
    verify_reduction,
    zagier_check,
)
from .relations import conjecture1_crosscheck, conjecture2_test, find_integer_relation, zeta_monomial_basis

__all__ = [
    "AmzvCombination",
    "AmzvIndex",
    "ExprSum",
    "I_direct",
    "InvNSeries",
    "Precision",
    "TermExpr",
    "ZetaMonomial",
    "ZetaPolynomial",
    "amzv_eval_lemma",
    "amzv_form",
    "amzv_nested_sum",
    "asymptotic_partial_sum",
    "closed_form",
    "conjecture1_combo",
    "conjecture1_crosscheck",
    "conjecture2_test",
    "find_integer_relation",
    "integrate_exprsum",
    "integrate_finite",
    "integrate_semi_infinite",
    "integrate_term",
    "log2_value",
    "louchard_integrand_series",
    "reduce_to_zeta",
    "remainder_diagnostic",
    "verify_reduction",
    "zagier_check",
    "zeta_monomial_basis",
    "zeta_value",
]
