"""Construction of the parametrization MILP and extraction of its answer.

Variables: one binary per standard choice ``(logN, lambda, type)``; integer
bit lengths ``z_logq[0..D]`` for the moduli chain (index 0 is the special
prime, mirrored at the last index of the chosen depth); binaries ``b_set``
(modulus ``i`` is used) and ``b_thr`` (modulus ``i`` lies above the
extended lower threshold); the integer precision ``z_p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .budgets import MAX_MODULUS_BITS, SIGMA, BudgetTable, Parametrization, _mode
from .circuit import CANDIDATE_LOGN, CircuitProfile
from .solver import INT_TOL, LinearProgram

BIG_M = MAX_MODULUS_BITS
DEFAULT_EPSILON = 0.05
METRICS = ("lambda", "N", "add", "mul", "rot", "T", "vmax")

P_RANGE = (1, 30)
Q_RANGE = (12, MAX_MODULUS_BITS)
# The special prime holds an interior modulus plus the precision bits, so the
# two share one 60-bit word. The model splits it in proportion to the k_real
# and k_dec domain maxima (30 : 60); constant caps keep both monotone.
P_CAP = 20
Q_CAP = MAX_MODULUS_BITS - P_CAP


class ModelError(RuntimeError):
    pass


class InternalConsistencyError(ModelError):
    """A solver assignment violates the model it claims to solve."""


def round_half_up(v: float) -> int:
    return int(math.floor(v + 0.5))


@dataclass(frozen=True)
class GlobalParams:
    p_min: int
    p_max: int
    q_lo: int
    q_hi: int
    q_lo_ext: int
    q_hi_ext: int


def global_params(
    k_real: tuple[float, float],
    k_dec: tuple[float, float],
    k_logQ: float,
) -> GlobalParams:
    """Integer bounds from the scale coefficients at the two depth extremes.

    ``k_real``/``k_dec`` are the evaluations at (min depth, max depth); the
    interval is ordered by value since the final FIP lowers outputs with depth.
    """
    p_lo, p_hi = sorted(min(max(round_half_up(v), P_RANGE[0]), P_RANGE[1]) for v in k_real)
    q_lo, q_hi = sorted(min(max(round_half_up(v), Q_RANGE[0]), Q_RANGE[1]) for v in k_dec)
    lo_ext = min(round_half_up(q_lo * (1.0 + k_logQ)), MAX_MODULUS_BITS)
    hi_ext = min(round_half_up(q_hi * (1.0 + k_logQ)), MAX_MODULUS_BITS)
    return GlobalParams(p_lo, p_hi, q_lo, q_hi, lo_ext, hi_ext)


@dataclass
class ChoiceCost:
    """Per-choice raw and normalized metrics and the aggregate ``c_pi``."""

    keys: list[tuple[int, int, str]]
    raw: dict[str, np.ndarray]
    norm: dict[str, np.ndarray]
    c_pi: np.ndarray
    epsilon: float

    def row(self, key) -> dict:
        i = self.keys.index(key)
        out = {f"raw_{m}": float(self.raw[m][i]) for m in METRICS}
        out.update({f"norm_{m}": float(self.norm[m][i]) for m in METRICS})
        out["c_pi"] = float(self.c_pi[i])
        return out


def _minmax(v: np.ndarray) -> np.ndarray | None:
    lo, hi = float(v.min()), float(v.max())
    if hi - lo <= 1e-12 * max(1.0, abs(hi)):
        return None
    return (v - lo) / (hi - lo)


def op_unit_costs(logN: int, depth: int) -> tuple[float, float]:
    """Relative cost of one (add, mul-or-rotate) at ring degree ``2**logN``.

    Additions touch ``N`` coefficients in each of ``depth + 1`` RNS limbs;
    multiplications and rotations pay ``N logN`` NTT work per limb plus a
    key switch that grows with the limb count.
    """
    n = float(1 << logN)
    limbs = depth + 1
    return n * limbs, n * logN * limbs * limbs


def lever(strength: float, k_logN: float) -> float:
    """Cost of a choice whose security strength is ``strength`` in [0, 1].

    ``k_logN = 0`` charges strength (performance first), ``k_logN = 1``
    charges its absence (security first), 0.5 is indifferent.
    """
    return (1.0 - k_logN) * strength + (1.0 - strength) * k_logN


def choice_cost(
    profile: CircuitProfile,
    budgets: BudgetTable,
    k_logN: float,
    epsilon: float = DEFAULT_EPSILON,
) -> ChoiceCost:
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    keys = BudgetTable.keys()
    lam_min, lam_max = 128, 256
    n_min, n_max = 1 << CANDIDATE_LOGN[0], 1 << CANDIDATE_LOGN[-1]
    ratio = np.array([budgets[k] / budgets[k[0], k[1], "quantum"] for k in keys])
    r_max = float(ratio.max())
    raw = {m: np.zeros(len(keys)) for m in METRICS}
    for i, (logN, lam, t) in enumerate(keys):
        e = profile[logN]
        a = ((1 << logN) - n_min) / (n_max - n_min)
        strength_lam = (lam - lam_min) / (lam_max - lam_min)
        # quantum budgets are the tighter ones; 1 = quantum, 0 = loosest classical
        strength_t = 1.0 - (ratio[i] - 1.0) / (r_max - 1.0) if r_max > 1.0 else 1.0
        raw["lambda"][i] = lever(strength_lam, k_logN)
        raw["N"][i] = lever(a, k_logN)
        raw["T"][i] = lever(strength_t, k_logN)
        ca, cm = op_unit_costs(logN, e.depth)
        raw["add"][i] = e.n_add * ca
        raw["mul"][i] = e.n_mul * cm
        raw["rot"][i] = e.n_rot * cm
        raw["vmax"][i] = e.split
    norm = {}
    prod = np.ones(len(keys))
    for m in METRICS:
        v = _minmax(raw[m])
        nv = np.full(len(keys), epsilon) if v is None else epsilon + (1.0 - epsilon) * v
        norm[m] = nv
        prod *= nv
    c = _minmax(prod)
    c_pi = np.zeros(len(keys)) if c is None else c
    return ChoiceCost(keys, raw, norm, c_pi, epsilon)


@dataclass
class MilpModel:
    lp: LinearProgram
    names: list[str]
    index: dict[str, int]
    keys: list[tuple[int, int, str]]
    depth: dict[int, int]
    max_depth: int
    gp: GlobalParams
    reward: bool
    families: dict[str, list[int]] = field(default_factory=dict)
    row_names: list[str] = field(default_factory=list)
    costs: ChoiceCost | None = None
    budgets: BudgetTable | None = None

    def var(self, name: str) -> int:
        return self.index[name]

    @property
    def n_vars(self) -> int:
        return len(self.names)


def _choice_name(key) -> str:
    return f"b_choice[{key[0]},{key[1]},{key[2]}]"


def build_model(
    profile: CircuitProfile,
    costs: ChoiceCost,
    gp: GlobalParams,
    budgets: BudgetTable,
    k_logQ: float,
) -> MilpModel:
    keys = costs.keys
    depth = {n: profile[n].depth for n in CANDIDATE_LOGN}
    M = max(depth.values())
    reward = k_logQ <= 0.5

    names: list[str] = [_choice_name(k) for k in keys]
    names += [f"z_logq[{i}]" for i in range(M + 1)]
    names += [f"b_set[{i}]" for i in range(1, M + 1)]
    names += [f"b_thr[{i}]" for i in range(1, M + 1)]
    names.append("z_p")
    index = {nm: i for i, nm in enumerate(names)}
    nv = len(names)
    bc = [index[_choice_name(k)] for k in keys]
    z = [index[f"z_logq[{i}]"] for i in range(M + 1)]
    bs = {i: index[f"b_set[{i}]"] for i in range(1, M + 1)}
    bt = {i: index[f"b_thr[{i}]"] for i in range(1, M + 1)}
    zp = index["z_p"]

    lo = np.zeros(nv)
    hi = np.ones(nv)
    integer = np.ones(nv, dtype=bool)
    # (1) ranges
    for j in z:
        hi[j] = MAX_MODULUS_BITS
    p_min, p_max = min(gp.p_min, P_CAP), min(gp.p_max, P_CAP)
    q_lo, q_hi_ext = min(gp.q_lo, Q_CAP), min(gp.q_hi_ext, Q_CAP)
    q_lo_ext = min(gp.q_lo_ext, Q_CAP)
    lo[zp], hi[zp] = p_min, p_max

    rows: list[np.ndarray] = []
    senses: list[str] = []
    rhs: list[float] = []
    row_names: list[str] = []
    families: dict[str, list[int]] = {}

    def add(fam, name, coefs, sense, b):
        r = np.zeros(nv)
        for j, v in coefs:
            r[j] += v
        families.setdefault(fam, []).append(len(rows))
        rows.append(r)
        senses.append(sense)
        rhs.append(float(b))
        row_names.append(name)

    # (2) one choice
    add("choose-one", "sum b_choice = 1", [(j, 1.0) for j in bc], "=", 1)
    # (3) budget
    add(
        "budget",
        "sum z_logq <= sum b_choice*B",
        [(j, 1.0) for j in z] + [(j, -float(budgets[k])) for j, k in zip(bc, keys)],
        "<=",
        0,
    )
    # (4) enough moduli
    add(
        "rescaling",
        "sum b_set = sum b_choice*depth",
        [(bs[i], 1.0) for i in bs] + [(j, -float(depth[k[0]])) for j, k in zip(bc, keys)],
        "=",
        0,
    )

    def chosen_at_depth(d):
        return [j for j, k in zip(bc, keys) if depth[k[0]] == d]

    # (5) precision spacing for interior moduli; exempt the mirrored last one
    for i in range(1, M):
        exempt = chosen_at_depth(i)
        add(
            "precision",
            f"z_logq[{i}] + z_p <= z_logq[0] unless depth = {i}",
            [(z[i], 1.0), (zp, 1.0), (z[0], -1.0)] + [(j, -BIG_M) for j in exempt],
            "<=",
            0,
        )
    add("precision", "z_p + 1 <= z_logq[0]", [(zp, 1.0), (z[0], -1.0)], "<=", -1)
    # (6) precise encryption: mirrored last modulus
    for d in sorted(set(depth.values())):
        sel = chosen_at_depth(d)
        add(
            "encryption",
            f"z_logq[{d}] - z_logq[0] <= M(1 - b_choice[depth={d}])",
            [(z[d], 1.0), (z[0], -1.0)] + [(j, BIG_M) for j in sel],
            "<=",
            BIG_M,
        )
        add(
            "encryption",
            f"z_logq[0] - z_logq[{d}] <= M(1 - b_choice[depth={d}])",
            [(z[0], 1.0), (z[d], -1.0)] + [(j, BIG_M) for j in sel],
            "<=",
            BIG_M,
        )
    # (7) pairing z_logq[i] with b_set[i]
    for i in range(1, M + 1):
        add("pairing", f"z_logq[{i}] >= b_set[{i}]*q_lo", [(z[i], 1.0), (bs[i], -float(q_lo))], ">=", 0)
        coefs = [(z[i], 1.0), (bs[i], -float(q_hi_ext))]
        if q_hi_ext < MAX_MODULUS_BITS:
            # the mirrored special prime may use the full modulus width
            coefs += [(j, -float(MAX_MODULUS_BITS - q_hi_ext)) for j in chosen_at_depth(i)]
        add("pairing", f"z_logq[{i}] <= b_set[{i}]*q_hi_ext", coefs, "<=", 0)
    # (8) threshold linking
    for i in range(1, M + 1):
        if reward:
            add("threshold", f"z_logq[{i}] >= b_thr[{i}]*q_lo_ext",
                [(z[i], 1.0), (bt[i], -float(q_lo_ext))], ">=", 0)
        else:
            add("threshold", f"z_logq[{i}] <= q_lo_ext + b_thr[{i}]*(60 - q_lo_ext)",
                [(z[i], 1.0), (bt[i], -float(MAX_MODULUS_BITS - q_lo_ext))], "<=",
                q_lo_ext)
    # (9) prefix ordering
    for i in range(1, M):
        add("ordering", f"b_set[{i}] >= b_set[{i + 1}]", [(bs[i], 1.0), (bs[i + 1], -1.0)], ">=", 0)

    c = np.zeros(nv)
    for j, v in zip(bc, costs.c_pi):
        c[j] = v
    w = 1.0 / M
    s = -1.0 if reward else 1.0
    for i in range(1, M + 1):
        c[bs[i]] = w
        c[bt[i]] = s * w

    # settle the standard choice first, then the chain shape, then bit lengths
    prio = np.zeros(nv)
    prio[bc] = 2.0
    prio[list(bs.values()) + list(bt.values())] = 1.0
    lp = LinearProgram(c, np.array(rows), senses, np.array(rhs), lo, hi, integer, prio)
    return MilpModel(lp, names, index, keys, depth, M, gp, reward, families, row_names,
                     costs, budgets)


def extract(x: np.ndarray, model: MilpModel) -> Parametrization:
    """Turn a feasible assignment into a parametrization."""
    x = np.asarray(x, dtype=float)
    viol = model.lp.violation(x)
    ints = model.lp.integer
    frac = float(np.max(np.abs(x[ints] - np.round(x[ints])), initial=0.0))
    if viol > INT_TOL or frac > INT_TOL:
        raise InternalConsistencyError(
            f"assignment violates the model (constraint {viol:.3g}, integrality {frac:.3g})"
        )
    xi = np.round(x).astype(int)
    chosen = [k for k in model.keys if xi[model.var(_choice_name(k))] == 1]
    if len(chosen) != 1:
        raise InternalConsistencyError(f"{len(chosen)} choices selected")
    logN, lam, t = chosen[0]
    d = model.depth[logN]
    chain = tuple(int(xi[model.var(f"z_logq[{i}]")]) for i in range(d + 1))
    p = int(xi[model.var("z_p")])
    interior = chain[1:-1]
    scale = _mode(interior) if interior else chain[0] - p
    return Parametrization(logN, lam, t, chain, scale, p, SIGMA)


def explain(model: MilpModel) -> str:
    """Plain-text dump of the model, stable across runs."""
    lp = model.lp
    out = []
    gp = model.gp
    out.append("# global parameters")
    out.append(
        f"p in [{gp.p_min}, {gp.p_max}]  q in [{gp.q_lo}, {gp.q_hi}]  "
        f"q_ext in [{gp.q_lo_ext}, {gp.q_hi_ext}]  regime={'reward' if model.reward else 'penalize'}"
    )
    out.append(f"depth by logN: {dict(sorted(model.depth.items()))}  max_depth={model.max_depth}")
    out.append("")
    out.append("# variables")
    for j, nm in enumerate(model.names):
        kind = "binary" if lp.integer[j] and lp.lo[j] == 0 and lp.hi[j] == 1 else "integer"
        out.append(f"{nm:<28} {kind:<8} [{lp.lo[j]:g}, {lp.hi[j]:g}]  cost {lp.c[j]:+.6f}")
    out.append("")
    out.append("# constraints")
    for r, (nm, s, b) in enumerate(zip(model.row_names, lp.senses, lp.b)):
        terms = " ".join(
            f"{lp.A[r, j]:+g}*{model.names[j]}" for j in np.nonzero(lp.A[r])[0]
        )
        out.append(f"[{nm}] {terms} {s} {b:g}")
    if model.costs is not None:
        out.append("")
        out.append("# choice costs (normalized metrics, c_pi)")
        cc = model.costs
        out.append("logN lambda type       " + " ".join(f"{m:>7}" for m in METRICS) + "    c_pi")
        for i, k in enumerate(cc.keys):
            vals = " ".join(f"{cc.norm[m][i]:7.4f}" for m in METRICS)
            out.append(f"{k[0]:>4} {k[1]:>6} {k[2]:<10} {vals} {cc.c_pi[i]:7.4f}")
    return "\n".join(out)
