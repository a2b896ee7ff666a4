"""End-to-end advice: priorities and circuit in, parametrization out."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .budgets import BudgetTable, Parametrization, ValidationReport, default_budgets, validate
from .circuit import CircuitIR, CircuitProfile, to_profile
from .coefficients import Priorities, looseness_coefficients, scale_coefficients
from .model import (
    DEFAULT_EPSILON,
    ChoiceCost,
    GlobalParams,
    MilpModel,
    build_model,
    choice_cost,
    extract,
    global_params,
)
from .solver import LinearProgram, Solution, solve


class InfeasibleError(RuntimeError):
    """No parametrization satisfies the standard for these priorities."""

    def __init__(self, detail: str = ""):
        msg = "no secure parametrization under these priorities"
        super().__init__(msg + (f" ({detail})" if detail else ""))


@dataclass
class Advice:
    params: Parametrization
    model: MilpModel
    solution: Solution
    report: ValidationReport
    k_logN: float
    k_logQ: float


def prepare(
    priorities: Priorities,
    circuit: CircuitIR | CircuitProfile,
    budgets: BudgetTable | None = None,
    epsilon: float = DEFAULT_EPSILON,
) -> MilpModel:
    budgets = budgets or default_budgets()
    profile = to_profile(circuit)
    lo = scale_coefficients(priorities, profile.min_depth)
    hi = scale_coefficients(priorities, profile.max_depth)
    k_logN, k_logQ = looseness_coefficients(priorities)
    gp: GlobalParams = global_params((lo[0], hi[0]), (lo[1], hi[1]), k_logQ)
    costs: ChoiceCost = choice_cost(profile, budgets, k_logN, epsilon)
    return build_model(profile, costs, gp, budgets, k_logQ)


def _preference(key) -> tuple:
    logN, lam, t = key
    return (-lam, t == "classical", logN)


def _break_ties(model: MilpModel, sol: Solution) -> Solution:
    """Among choices reaching the same optimum, prefer the stronger security."""
    cpi = model.costs.c_pi
    names = [f"b_choice[{k[0]},{k[1]},{k[2]}]" for k in model.keys]
    cur = next(i for i, nm in enumerate(names) if sol.x[model.var(nm)] > 0.5)
    tied = [i for i in range(len(names)) if abs(cpi[i] - cpi[cur]) <= 1e-12]
    lp = model.lp
    for i in sorted(tied, key=lambda i: _preference(model.keys[i])):
        if i == cur:
            break
        lo = lp.lo.copy()
        lo[model.var(names[i])] = 1.0
        alt = solve(LinearProgram(lp.c, lp.A, lp.senses, lp.b, lo, lp.hi, lp.integer, lp.priority))
        if alt.optimal and alt.objective <= sol.objective + 1e-9:
            return alt
    return sol


def _refine(model: MilpModel, x: np.ndarray) -> np.ndarray:
    """Pin the binaries of an optimum and pick its moduli deterministically.

    Among assignments with the same objective, prefer the largest precision,
    then the largest chain (reward regime) or the smallest (penalize).
    """
    lp = model.lp
    lo, hi = lp.lo.copy(), lp.hi.copy()
    binary = lp.integer & (lp.lo == 0) & (lp.hi == 1)
    lo[binary] = hi[binary] = np.round(x[binary])
    zs = [model.var(f"z_logq[{i}]") for i in range(model.max_depth + 1)]
    c = np.zeros(lp.n)
    c[model.var("z_p")] = -float(60 * (len(zs) + 1))
    c[zs] = -1.0 if model.reward else 1.0
    sub = LinearProgram(c, lp.A, lp.senses, lp.b, lo, hi, lp.integer, lp.priority)
    sol = solve(sub)
    return sol.x if sol.optimal else x


def advise(
    priorities: Priorities,
    circuit: CircuitIR | CircuitProfile,
    budgets: BudgetTable | None = None,
    epsilon: float = DEFAULT_EPSILON,
) -> Advice:
    budgets = budgets or default_budgets()
    profile = to_profile(circuit)
    model = prepare(priorities, profile, budgets, epsilon)
    sol = solve(model.lp)
    if not sol.optimal:
        raise InfeasibleError(sol.status)
    sol = _break_ties(model, sol)
    x = _refine(model, sol.x)
    params = extract(x, model)
    report = validate(params, profile, budgets)
    k_logN, k_logQ = looseness_coefficients(priorities)
    return Advice(params, model, replace(sol, x=x), report, k_logN, k_logQ)
