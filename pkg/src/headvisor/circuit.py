"""Circuit descriptors and per-ring-degree static analysis.

A circuit is a straight-line list of layers acting on packed ciphertexts.
Each layer may carry ``count`` independent instances: they add to the
operation totals but not to the multiplicative depth. Depth and operation
counts depend on the ring degree through slot capacity (vectors longer than
``N/2`` are split across ciphertexts) and through ``aggregate``, whose cost
is ``logN`` sequential multiplications.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

CANDIDATE_LOGN = (11, 12, 13, 14, 15)

OP_PARAMS = {
    "add": (),
    "mul": (),
    "mul-plain": (),
    "rotate": (),
    "aggregate": ("length",),
    "diag-matmul": ("rows", "cols"),
}


class CircuitError(ValueError):
    pass


@dataclass(frozen=True)
class Op:
    kind: str
    count: int = 1
    length: int | None = None
    rows: int | None = None
    cols: int | None = None

    def __post_init__(self):
        if self.kind not in OP_PARAMS:
            raise CircuitError(f"unknown op {self.kind!r}")
        if not _posint(self.count):
            raise CircuitError(f"{self.kind}: count must be a positive integer")
        for name in OP_PARAMS[self.kind]:
            if not _posint(getattr(self, name)):
                raise CircuitError(f"{self.kind}: {name} must be a positive integer")


@dataclass(frozen=True)
class CircuitIR:
    ops: tuple[Op, ...]
    vec_len: int

    def __post_init__(self):
        if not self.ops:
            raise CircuitError("empty circuit")
        if not _posint(self.vec_len):
            raise CircuitError("vec_len must be a positive integer")


@dataclass(frozen=True)
class ProfileEntry:
    logN: int
    depth: int
    n_add: int
    n_mul: int
    n_rot: int
    split: int
    max_vec: int


@dataclass(frozen=True)
class CircuitProfile:
    entries: tuple[ProfileEntry, ...]

    def __post_init__(self):
        got = sorted(e.logN for e in self.entries)
        if got != list(CANDIDATE_LOGN):
            raise CircuitError(
                f"profile must cover logN {list(CANDIDATE_LOGN)} exactly once, got {got}"
            )
        object.__setattr__(
            self, "entries", tuple(sorted(self.entries, key=lambda e: e.logN))
        )

    def __getitem__(self, logN: int) -> ProfileEntry:
        for e in self.entries:
            if e.logN == logN:
                return e
        raise KeyError(logN)

    @property
    def min_depth(self) -> int:
        return min(e.depth for e in self.entries)

    @property
    def max_depth(self) -> int:
        return max(e.depth for e in self.entries)

    @property
    def max_vec(self) -> int:
        return self.entries[0].max_vec


def _posint(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool) and v >= 1


def split_factor(max_vec: int, logN: int) -> int:
    return -(-max_vec // (1 << (logN - 1)))


def analyze(circuit: CircuitIR, logN: int) -> ProfileEntry:
    if logN not in CANDIDATE_LOGN:
        raise CircuitError(f"logN must be one of {CANDIDATE_LOGN}, got {logN}")
    if not circuit.ops:
        raise CircuitError("empty circuit")
    depth = n_add = n_mul = n_rot = 0
    for op in circuit.ops:
        c = op.count
        if op.kind == "add":
            n_add += c
        elif op.kind in ("mul", "mul-plain"):
            depth += 1
            n_mul += c
        elif op.kind == "rotate":
            n_rot += c
        elif op.kind == "aggregate":
            # logN rotate-multiply-add steps
            depth += logN
            n_mul += c * logN
            n_rot += c * logN
            n_add += c * logN
        elif op.kind == "diag-matmul":
            depth += 1
            n_mul += c * op.cols
            n_rot += c * (op.cols - 1)
            n_add += c * (op.cols - 1)
    split = split_factor(circuit.vec_len, logN)
    if split > 1:
        depth += math.ceil(math.log2(split))
    return ProfileEntry(
        logN=logN,
        depth=max(depth, 1),
        n_add=n_add * split,
        n_mul=n_mul * split,
        n_rot=n_rot * split,
        split=split,
        max_vec=circuit.vec_len,
    )


def profile_all(circuit: CircuitIR) -> CircuitProfile:
    return CircuitProfile(tuple(analyze(circuit, n) for n in CANDIDATE_LOGN))


def _reject_unknown(obj: dict, allowed, where: str):
    extra = sorted(set(obj) - set(allowed))
    if extra:
        raise CircuitError(f"{where}: unknown field(s) {', '.join(extra)}")


def _require_int(obj: dict, key: str, where: str, minimum: int) -> int:
    if key not in obj:
        raise CircuitError(f"{where}: missing field '{key}'")
    v = obj[key]
    if not (isinstance(v, int) and not isinstance(v, bool)) or v < minimum:
        raise CircuitError(f"{where}.{key}: expected integer >= {minimum}, got {v!r}")
    return v


def parse_circuit(doc: dict) -> CircuitIR | CircuitProfile:
    """Build a circuit (or a direct per-N profile) from a decoded document."""
    if not isinstance(doc, dict):
        raise CircuitError("document root must be an object")
    if "profile" in doc:
        _reject_unknown(doc, ("profile", "max_vec"), "root")
        max_vec = _require_int(doc, "max_vec", "root", 1)
        prof = doc["profile"]
        if not isinstance(prof, dict):
            raise CircuitError("profile: expected an object keyed by logN")
        entries = []
        for key, body in prof.items():
            where = f"profile.{key}"
            try:
                logN = int(key)
            except ValueError:
                raise CircuitError(f"{where}: key must be an integer logN") from None
            if logN not in CANDIDATE_LOGN:
                raise CircuitError(f"{where}: logN must be one of {CANDIDATE_LOGN}")
            if not isinstance(body, dict):
                raise CircuitError(f"{where}: expected an object")
            _reject_unknown(body, ("depth", "add", "mul", "rot"), where)
            entries.append(
                ProfileEntry(
                    logN=logN,
                    depth=_require_int(body, "depth", where, 1),
                    n_add=_require_int(body, "add", where, 0),
                    n_mul=_require_int(body, "mul", where, 0),
                    n_rot=_require_int(body, "rot", where, 0),
                    split=split_factor(max_vec, logN),
                    max_vec=max_vec,
                )
            )
        return CircuitProfile(tuple(entries))
    if "ops" in doc:
        _reject_unknown(doc, ("ops", "vec_len"), "root")
        ops_doc = doc["ops"]
        if not isinstance(ops_doc, list) or not ops_doc:
            raise CircuitError("ops: expected a non-empty list")
        ops = []
        for i, od in enumerate(ops_doc):
            where = f"ops[{i}]"
            if not isinstance(od, dict) or "op" not in od:
                raise CircuitError(f"{where}: expected an object with an 'op' field")
            kind = od["op"]
            if kind not in OP_PARAMS:
                raise CircuitError(f"{where}: unknown op {kind!r}")
            params = OP_PARAMS[kind]
            _reject_unknown(od, ("op", "count") + params, where)
            kw = {p: _require_int(od, p, where, 1) for p in params}
            if "count" in od:
                kw["count"] = _require_int(od, "count", where, 1)
            ops.append(Op(kind, **kw))
        vec_len = _require_int(doc, "vec_len", "root", 1)
        return CircuitIR(tuple(ops), vec_len)
    raise CircuitError("document must contain either 'ops' or 'profile'")


def load_circuit(text: str) -> CircuitIR | CircuitProfile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_circuit(doc)


def to_profile(obj: CircuitIR | CircuitProfile) -> CircuitProfile:
    return obj if isinstance(obj, CircuitProfile) else profile_all(obj)
