"""Priority-driven parameter selection for levelled CKKS."""

from .advisor import Advice, InfeasibleError, advise
from .budgets import BudgetTable, Parametrization, default_budgets, load_budgets, validate
from .circuit import load_circuit, to_profile
from .coefficients import Priorities, coefficients

__all__ = [
    "Advice",
    "BudgetTable",
    "InfeasibleError",
    "Parametrization",
    "Priorities",
    "advise",
    "coefficients",
    "default_budgets",
    "load_budgets",
    "load_circuit",
    "to_profile",
    "validate",
]
__version__ = "0.1.0"
