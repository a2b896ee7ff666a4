"""Mamdani fuzzy inference over five-level linguistic variables.

Triangular and shoulder membership functions, 5x5 rule matrices, clipping
implication and exact (piecewise-analytic) centroid defuzzification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Sequence

import numpy as np

from . import _accel


class Level(IntEnum):
    VL = 0
    L = 1
    M = 2
    H = 3
    VH = 4

    @property
    def label(self) -> str:
        return LEVEL_LABELS[self]


LEVEL_LABELS = ("very-low", "low", "medium", "high", "very-high")


class FuzzyError(ValueError):
    pass


class EmptyConsequentError(FuzzyError):
    """No rule fired; indicates a rule matrix that fails to cover its inputs."""


@dataclass(frozen=True)
class MembershipFunction:
    kind: str  # "left-shoulder" | "triangle" | "right-shoulder"
    begin: float
    peak: float
    end: float

    def __post_init__(self):
        if self.kind not in ("left-shoulder", "triangle", "right-shoulder"):
            raise FuzzyError(f"unknown membership kind {self.kind!r}")
        if not (self.begin <= self.peak <= self.end):
            raise FuzzyError(
                f"breakpoints must satisfy begin <= peak <= end, got "
                f"({self.begin}, {self.peak}, {self.end})"
            )
        if not math.isfinite(self.peak):
            raise FuzzyError("peak must be finite")
        if self.kind == "triangle" and not (
            math.isfinite(self.begin) and math.isfinite(self.end)
        ):
            raise FuzzyError("triangle breakpoints must be finite")

    @classmethod
    def from_interval(cls, begin: float, peak: float, end: float) -> MembershipFunction:
        """Build from a ``[begin, peak, end]`` triple; infinite ends become shoulders."""
        if begin == -math.inf:
            return cls("left-shoulder", begin, peak, end)
        if end == math.inf:
            return cls("right-shoulder", begin, peak, end)
        return cls("triangle", begin, peak, end)

    def __call__(self, x: float) -> float:
        if self.kind == "left-shoulder" and x <= self.peak:
            return 1.0
        if self.kind == "right-shoulder" and x >= self.peak:
            return 1.0
        if x < self.peak:
            if x <= self.begin:
                return 0.0
            return (x - self.begin) / (self.peak - self.begin)
        if x == self.peak:
            return 1.0
        if x >= self.end:
            return 0.0
        return (self.end - x) / (self.end - self.peak)

    @property
    def kernel_breakpoints(self) -> tuple[float, float, float]:
        b = -math.inf if self.kind == "left-shoulder" else self.begin
        e = math.inf if self.kind == "right-shoulder" else self.end
        return b, self.peak, e


@dataclass(frozen=True)
class LinguisticVariable:
    name: str
    levels: tuple[MembershipFunction, ...]
    domain: tuple[float, float] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if len(self.levels) != 5:
            raise FuzzyError(f"{self.name}: exactly five levels required")
        peaks = [mf.peak for mf in self.levels]
        if any(b < a for a, b in zip(peaks, peaks[1:])):
            raise FuzzyError(f"{self.name}: level peaks must ascend")
        if self.domain is None:
            finite = [
                v
                for mf in self.levels
                for v in (mf.begin, mf.peak, mf.end)
                if math.isfinite(v)
            ]
            object.__setattr__(self, "domain", (min(finite), max(finite)))
        lo, hi = self.domain
        if not lo < hi:
            raise FuzzyError(f"{self.name}: empty domain {self.domain}")
        # Supports must cover the domain without gaps.
        reach = lo
        for mf in sorted(self.levels, key=lambda m: m.peak):
            left = -math.inf if mf.kind == "left-shoulder" else mf.begin
            if left > reach:
                raise FuzzyError(f"{self.name}: supports leave a gap at {reach}")
            reach = max(reach, math.inf if mf.kind == "right-shoulder" else mf.end)
        if reach < hi:
            raise FuzzyError(f"{self.name}: supports stop at {reach} < {hi}")
        arr = np.array([mf.kernel_breakpoints for mf in self.levels], dtype=float)
        object.__setattr__(self, "_bp", arr)

    @classmethod
    def from_intervals(cls, name: str, intervals: Sequence[Sequence[float]]):
        return cls(name, tuple(MembershipFunction.from_interval(*iv) for iv in intervals))

    def clamp(self, x: float) -> float:
        lo, hi = self.domain
        return min(max(float(x), lo), hi)


def fuzzify(value: float, variable: LinguisticVariable) -> tuple[float, ...]:
    x = variable.clamp(value)
    return tuple(mf(x) for mf in variable.levels)


@dataclass(frozen=True)
class RuleMatrix:
    """5x5 consequent labels; rows index the first antecedent, columns the second."""

    cells: tuple[tuple[Level, ...], ...]

    def __post_init__(self):
        if len(self.cells) != 5 or any(len(r) != 5 for r in self.cells):
            raise FuzzyError("rule matrix must be 5x5")
        object.__setattr__(
            self, "cells", tuple(tuple(Level(c) for c in r) for r in self.cells)
        )

    @classmethod
    def parse(cls, text: str) -> RuleMatrix:
        """Parse ``"M L L VL VL / M M L L VL / ..."`` (rows separated by ``/``)."""
        rows = [r.split() for r in text.split("/")]
        return cls(tuple(tuple(Level[c] for c in r) for r in rows))

    @classmethod
    def from_offset(cls, sign_row: int, sign_col: int) -> RuleMatrix:
        """Cell ``(i, j)`` = level ``clamp(2 + sign_row*i + sign_col*j, 0, 4)``."""
        return cls(
            tuple(
                tuple(Level(min(max(2 + sign_row * i + sign_col * j, 0), 4)) for j in range(5))
                for i in range(5)
            )
        )


@dataclass(frozen=True)
class FuzzySet:
    variable: LinguisticVariable
    activations: tuple[float, ...]

    def membership(self, x: float) -> float:
        return max(min(a, mf(x)) for a, mf in zip(self.activations, self.variable.levels))


def infer(
    rules: RuleMatrix,
    a: Sequence[float],
    b: Sequence[float],
    output: LinguisticVariable,
) -> FuzzySet:
    """Fire every cell with strength ``a_i * b_j``; labels accumulate by bounded sum.

    Product AND with bounded-sum aggregation keeps the defuzzified output
    monotone along any axis on which the rule matrix is monotone; min/max
    does not (two adjacent rows sharing a label make ``max`` dip at their
    crossover).
    """
    if len(a) != 5 or len(b) != 5:
        raise FuzzyError("membership vectors must have five degrees")
    act = [0.0] * 5
    for i, ai in enumerate(a):
        if ai <= 0.0:
            continue
        row = rules.cells[i]
        for j, bj in enumerate(b):
            if bj > 0.0:
                act[row[j]] += ai * bj
    return FuzzySet(output, tuple(min(w, 1.0) for w in act))


def defuzzify_centroid(fset: FuzzySet) -> float:
    act = np.asarray(fset.activations, dtype=float)
    if not np.any(act > 0.0):
        raise EmptyConsequentError(f"{fset.variable.name}: empty consequent")
    bp = fset.variable._bp  # type: ignore[attr-defined]
    lo, hi = fset.variable.domain
    area, moment = _accel.clipped_centroid(
        np.ascontiguousarray(bp[:, 0]),
        np.ascontiguousarray(bp[:, 1]),
        np.ascontiguousarray(bp[:, 2]),
        act,
        float(lo),
        float(hi),
    )
    if area <= 0.0:
        raise EmptyConsequentError(f"{fset.variable.name}: consequent has zero area")
    return moment / area


@dataclass(frozen=True)
class FIP:
    """One fuzzy inference process: two antecedents, one consequent."""

    name: str
    x: LinguisticVariable
    y: LinguisticVariable
    out: LinguisticVariable
    rules: RuleMatrix

    def infer(self, x: float, y: float) -> FuzzySet:
        return infer(self.rules, fuzzify(x, self.x), fuzzify(y, self.y), self.out)

    def evaluate(self, x: float, y: float) -> float:
        return defuzzify_centroid(self.infer(x, y))

    __call__ = evaluate


def evaluate(fip: FIP, inputs: tuple[float, float]) -> float:
    return fip.evaluate(*inputs)
