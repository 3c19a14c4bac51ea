"""Analytics package: проверки, классификация, спектр, поля Эйлера, построение по начальным данным"""

from analytics.tangent_algebra import (
    associativity_residuals,
    is_associative,
    r_invariants,
    is_f_manifold_closed_form,
    classify_at,
    generic_type,
    normalize,
    tau,
)
from analytics.spectrum import SpectrumIdeal, SpectrumFrame, f_condition_bracket, gh_bracket_residuals
from analytics.euler import lie_residual, symmetry_residual, euler_residual_ok, regular_at, euler_constraint_check
from analytics.pde import InitialData, PdeSolution, solve, normalize_gh
from analytics.sweep import CatalogSweepAnalyzer

__all__ = [
    'associativity_residuals',
    'is_associative',
    'r_invariants',
    'is_f_manifold_closed_form',
    'classify_at',
    'generic_type',
    'normalize',
    'tau',
    'SpectrumIdeal',
    'SpectrumFrame',
    'f_condition_bracket',
    'gh_bracket_residuals',
    'lie_residual',
    'symmetry_residual',
    'euler_residual_ok',
    'regular_at',
    'euler_constraint_check',
    'InitialData',
    'PdeSolution',
    'solve',
    'normalize_gh',
    'CatalogSweepAnalyzer',
]
