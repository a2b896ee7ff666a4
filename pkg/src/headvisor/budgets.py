"""Security-standard moduli budgets and the parametrization compliance check."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

from .circuit import CANDIDATE_LOGN, CircuitProfile

LAMBDAS = (128, 192, 256)
SEC_TYPES = ("classical", "quantum")
SIGMA = 3.2
MAX_MODULUS_BITS = 60


class BudgetError(ValueError):
    pass


def _parse_key(key: str) -> tuple[int, int, str]:
    try:
        n, lam, t = key.split(",")
        return int(n), int(lam), t.strip()
    except ValueError:
        raise BudgetError(f"budget key {key!r} is not 'logN,lambda,type'") from None


class BudgetTable:
    """Map ``(logN, lambda, type) -> max total moduli bits``."""

    def __init__(self, table: dict[tuple[int, int, str], int]):
        self._t = dict(table)
        self._check()

    def _check(self):
        for (n, lam, t), v in self._t.items():
            if n not in CANDIDATE_LOGN or lam not in LAMBDAS or t not in SEC_TYPES:
                raise BudgetError(f"unsupported budget key ({n},{lam},{t})")
            if not isinstance(v, int) or isinstance(v, bool) or v <= 0:
                raise BudgetError(f"budget ({n},{lam},{t}) must be a positive integer")
        missing = [k for k in self.keys() if k not in self._t]
        if missing:
            raise BudgetError(f"budget table missing {missing[0]}")
        for lam in LAMBDAS:
            for t in SEC_TYPES:
                col = [self._t[n, lam, t] for n in CANDIDATE_LOGN]
                if any(b <= a for a, b in zip(col, col[1:])):
                    raise BudgetError(f"budgets must increase with logN ({lam},{t})")
        for n in CANDIDATE_LOGN:
            for t in SEC_TYPES:
                row = [self._t[n, lam, t] for lam in LAMBDAS]
                if any(b >= a for a, b in zip(row, row[1:])):
                    raise BudgetError(f"budgets must decrease with lambda ({n},{t})")
            for lam in LAMBDAS:
                if self._t[n, lam, "quantum"] > self._t[n, lam, "classical"]:
                    raise BudgetError(f"quantum budget exceeds classical at ({n},{lam})")

    @staticmethod
    def keys() -> list[tuple[int, int, str]]:
        """All supported choices in canonical order (logN, lambda, type)."""
        return [(n, lam, t) for n in CANDIDATE_LOGN for lam in LAMBDAS for t in SEC_TYPES]

    def __getitem__(self, key: tuple[int, int, str]) -> int:
        return self._t[key]

    def budget(self, logN: int, lam: int, sec_type: str) -> int:
        try:
            return self._t[logN, lam, sec_type]
        except KeyError:
            raise BudgetError(f"no budget for ({logN}, {lam}, {sec_type})") from None

    @property
    def max_budget(self) -> int:
        return max(self._t.values())

    @classmethod
    def from_json_map(cls, doc: dict, base: BudgetTable | None = None) -> BudgetTable:
        if not isinstance(doc, dict):
            raise BudgetError("budget file must be a JSON object")
        table = dict(base._t) if base is not None else {}
        for k, v in doc.items():
            table[_parse_key(k)] = v
        return cls(table)


def default_budgets() -> BudgetTable:
    text = resources.files("headvisor").joinpath("data/hestd_budgets.json").read_text("utf-8")
    return BudgetTable.from_json_map(json.loads(text))


def load_budgets(path: str | Path | None = None) -> BudgetTable:
    """Shipped table, optionally overridden entry-by-entry from a JSON file."""
    base = default_budgets()
    if path is None:
        return base
    try:
        doc = json.loads(Path(path).read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise BudgetError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return BudgetTable.from_json_map(doc, base)


@dataclass(frozen=True)
class Parametrization:
    log_n: int
    lambda_: int
    sec_type: str
    chain: tuple[int, ...]
    scale: int
    p: int
    sigma: float = SIGMA

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lambda_")
        d["chain"] = list(self.chain)
        return {k: d[k] for k in ("log_n", "lambda", "sec_type", "chain", "scale", "p", "sigma")}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @property
    def log_q(self) -> int:
        return sum(self.chain)

    @classmethod
    def from_dict(cls, d: dict) -> Parametrization:
        keys = {"log_n", "lambda", "sec_type", "chain", "scale", "p", "sigma"}
        if not isinstance(d, dict):
            raise BudgetError("parametrization must be a JSON object")
        if set(d) != keys:
            missing = sorted(keys - set(d))
            extra = sorted(set(d) - keys)
            raise BudgetError(f"parametrization fields: missing {missing}, unexpected {extra}")
        ints = ("log_n", "lambda", "scale", "p")
        for k in ints:
            if not isinstance(d[k], int) or isinstance(d[k], bool):
                raise BudgetError(f"{k} must be an integer")
        if not isinstance(d["chain"], list) or not all(
            isinstance(c, int) and not isinstance(c, bool) for c in d["chain"]
        ):
            raise BudgetError("chain must be a list of integers")
        if not isinstance(d["sec_type"], str):
            raise BudgetError("sec_type must be a string")
        if not isinstance(d["sigma"], (int, float)):
            raise BudgetError("sigma must be a number")
        return cls(
            d["log_n"], d["lambda"], d["sec_type"], tuple(d["chain"]), d["scale"], d["p"],
            float(d["sigma"]),
        )


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


@dataclass
class ValidationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def render(self) -> str:
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}" for c in self.checks]
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def validate(
    params: Parametrization,
    profile: CircuitProfile,
    budgets: BudgetTable | None = None,
) -> ValidationReport:
    """Check a parametrization against the standard and the circuit; never raises."""
    budgets = budgets or default_budgets()
    rep = ValidationReport()
    add = rep.checks.append
    chain = list(params.chain)
    total = sum(chain)

    key = (params.log_n, params.lambda_, params.sec_type)
    try:
        bound = budgets.budget(*key)
    except BudgetError:
        add(Check("choice", False, f"{key} is not a standard (logN, lambda, type)"))
        bound = None
    else:
        add(Check("choice", True, f"{key}"))
    if bound is not None:
        ok = total <= bound
        add(Check("budget", ok, f"sum(chain)={total} {'<=' if ok else '>'} {bound}"
                  + ("" if ok else " (budget exceeded)")))

    try:
        entry = profile[params.log_n]
    except KeyError:
        entry = None
    if entry is None:
        add(Check("chain length", False, f"no circuit profile for logN={params.log_n}"))
        add(Check("slot fit", False, f"no circuit profile for logN={params.log_n}"))
    else:
        ok = len(chain) == entry.depth + 1
        add(Check("chain length", ok, f"len(chain)={len(chain)}, depth+1={entry.depth + 1}"))
        slots = 1 << (params.log_n - 1)
        ok = slots * entry.split >= entry.max_vec
        add(Check("slot fit", ok,
                  f"{slots} slots x {entry.split} ciphertexts vs |v|max={entry.max_vec}"))

    ok = all(1 <= c <= MAX_MODULUS_BITS for c in chain) and len(chain) >= 2
    add(Check("modulus range", ok, f"every modulus in [1, {MAX_MODULUS_BITS}] bits"
              + ("" if len(chain) >= 2 else "; chain needs at least two moduli")))

    ok = len(chain) >= 2 and chain[0] == chain[-1]
    add(Check("precise encryption", ok,
              "first and last moduli equal" if ok else f"ends differ: {chain[:1]} vs {chain[-1:]}"))

    bad = [i for i in range(1, len(chain) - 1) if chain[i] + params.p > chain[0]]
    if len(chain) == 2:
        bad = [] if params.p < chain[0] else [0]
    ok = not bad and params.p >= 1
    add(Check("precision spacing", ok,
              f"q_i + p <= q_0 for interior moduli (p={params.p})"
              + ("" if ok else f"; violated at {bad}")))

    interior = chain[1:-1]
    expect = _mode(interior) if interior else (chain[0] - params.p if chain else None)
    ok = params.scale == expect
    add(Check("scale", ok, f"scale={params.scale}, expected {expect}"))

    ok = params.sigma == SIGMA
    add(Check("sigma", ok, f"sigma={params.sigma}"))
    return rep


def _mode(values) -> int:
    counts: dict[int, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return max(counts, key=lambda v: (counts[v], v))
