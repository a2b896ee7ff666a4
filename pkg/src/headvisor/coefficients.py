"""The four fuzzy coefficient chains feeding the parametrization model.

Scale module: an initial FIP over (precision, efficiency) produces an
estimate, and a final FIP over (estimate, multiplication depth) trims it.
This runs twice, for the real-part precision ``k_real`` and for the modulus
bit length ``k_dec``. Looseness module: ``k_logN`` from (security,
performance) and ``k_logQ`` from (precision, efficiency).

Efficiency is ``max(performance, security)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fuzzy import FIP, LinguisticVariable, RuleMatrix

INF = math.inf


def _five(name, begin, step):
    """Five evenly spaced levels starting at ``begin`` with peak spacing ``step``."""
    peaks = [begin + k * step for k in range(5)]
    ivs = [(-INF, peaks[0], peaks[1])]
    ivs += [(peaks[k - 1], peaks[k], peaks[k + 1]) for k in range(1, 4)]
    ivs.append((peaks[3], peaks[4], INF))
    return LinguisticVariable.from_intervals(name, ivs)


PRECISION = _five("precision", 0.0, 2.5)
PERFORMANCE = _five("performance", 0.0, 2.5)
SECURITY = _five("security", 0.0, 2.5)
EFFICIENCY = _five("efficiency", 0.0, 2.5)
DEPTH = _five("depth", 0.0, 7.0)
K_REAL = _five("k_real", 0.0, 7.5)
K_DEC = _five("k_dec", 12.0, 12.0)
K_LOGN = _five("k_logN", 0.0, 0.25)
K_LOGQ = _five("k_logQ", 0.0, 0.25)

INITIAL_SCALE_RULES = RuleMatrix.parse(
    "M L L VL VL / M M L L VL / H M M L L / VH H M M L / VH VH H M M"
)
FINAL_DEC_RULES = RuleMatrix.parse(
    "VL VL VL VL VL / L L L L L / M M M L L / H H M M L / VH H H M M"
)
FINAL_REAL_RULES = RuleMatrix.parse(
    "L L L VL VL / M L L L VL / M M M L L / H H M M L / VH H H M M"
)
K_LOGN_RULES = RuleMatrix.from_offset(+1, -1)  # rows security, cols performance
K_LOGQ_RULES = RuleMatrix.from_offset(-1, +1)  # rows precision, cols efficiency

INITIAL_REAL = FIP("initial-real", PRECISION, EFFICIENCY, K_REAL, INITIAL_SCALE_RULES)
INITIAL_DEC = FIP("initial-dec", PRECISION, EFFICIENCY, K_DEC, INITIAL_SCALE_RULES)
FINAL_REAL = FIP("final-real", K_REAL, DEPTH, K_REAL, FINAL_REAL_RULES)
FINAL_DEC = FIP("final-dec", K_DEC, DEPTH, K_DEC, FINAL_DEC_RULES)
KLOGN_FIP = FIP("k-logN", SECURITY, PERFORMANCE, K_LOGN, K_LOGN_RULES)
KLOGQ_FIP = FIP("k-logQ", PRECISION, EFFICIENCY, K_LOGQ, K_LOGQ_RULES)

FIPS = {
    f.name: f
    for f in (INITIAL_REAL, INITIAL_DEC, FINAL_REAL, FINAL_DEC, KLOGN_FIP, KLOGQ_FIP)
}


@dataclass(frozen=True)
class Priorities:
    precision: float
    performance: float
    security: float

    def __post_init__(self):
        for name in ("precision", "performance", "security"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and 0.0 <= v <= 10.0):
                raise ValueError(f"{name} priority must be a number in [0, 10], got {v!r}")

    @property
    def efficiency(self) -> float:
        return max(self.performance, self.security)

    @classmethod
    def parse(cls, text: str) -> Priorities:
        parts = text.split(",")
        if len(parts) != 3:
            raise ValueError("priorities must be 'precision,performance,security'")
        try:
            vals = [float(p) for p in parts]
        except ValueError:
            raise ValueError(f"priorities must be numbers, got {text!r}") from None
        return cls(*vals)


@dataclass(frozen=True)
class CoefficientSet:
    k_real: float
    k_dec: float
    k_logN: float
    k_logQ: float


def scale_coefficients(p: Priorities, depth: float) -> tuple[float, float]:
    """Return ``(k_real, k_dec)`` after both initial and final FIPs."""
    eff = p.efficiency
    d = DEPTH.clamp(depth)
    k_real = FINAL_REAL(INITIAL_REAL(p.precision, eff), d)
    k_dec = FINAL_DEC(INITIAL_DEC(p.precision, eff), d)
    return k_real, k_dec


def looseness_coefficients(p: Priorities) -> tuple[float, float]:
    """Return ``(k_logN, k_logQ)``."""
    return KLOGN_FIP(p.security, p.performance), KLOGQ_FIP(p.precision, p.efficiency)


def coefficients(p: Priorities, depth: float) -> CoefficientSet:
    k_real, k_dec = scale_coefficients(p, depth)
    k_logN, k_logQ = looseness_coefficients(p)
    return CoefficientSet(k_real, k_dec, k_logN, k_logQ)


def surface_grid(fip_id: str, resolution: int) -> list[tuple[float, float, float]]:
    """Sample a FIP on a uniform ``resolution x resolution`` grid, row-major in x."""
    try:
        fip = FIPS[fip_id]
    except KeyError:
        raise KeyError(
            f"unknown FIP {fip_id!r}; valid ids: {', '.join(FIPS)}"
        ) from None
    if not isinstance(resolution, int) or resolution < 2:
        raise ValueError("resolution must be an integer >= 2")
    xs = np.linspace(*fip.x.domain, resolution)
    ys = np.linspace(*fip.y.domain, resolution)
    return [(float(x), float(y), fip(x, y)) for x in xs for y in ys]
