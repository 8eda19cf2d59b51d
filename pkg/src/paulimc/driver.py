"""Equivalence decision: 2n weighted counts over A = V-dagger U.

Two circuits agree up to global phase exactly when conjugation by
A = V^dag U fixes every X_j and Z_j, and each of those 2n conditions is one
weighted model count that must equal 1.  Checks run on a small thread pool
with cooperative cancellation: the first count != 1 settles the verdict, so
outstanding checks with higher indices are told to stop.  Lower-indexed
checks are left to finish, which pins the reported witness to the lowest
failing check no matter how the pool interleaves — verdicts must not
depend on scheduling.

A timeout never converts into a verdict: if any count hits its resource
limit and no completed count disproved equivalence, the result is Unknown.
"""

from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .circuits import Circuit, adjoint, concat, lower
from .counting import (
    CountCancelledError,
    ResourceLimitError,
    count,
)
from .encoder import EncodedCircuit, PauliTerm, assemble_check, encode_circuit
from .weights import as_float, serialize_exact, value_is_one

EQUIVALENT = "equivalent"
NOT_EQUIVALENT = "not_equivalent"
UNKNOWN = "unknown"

DEFAULT_EPSILON = 1e-9


class QubitCountMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class CheckConfig:
    """Knobs for one equivalence run.

    epsilon is the float-mode tolerance for "count equals 1"; exact mode
    compares ring elements structurally and ignores it.  The default is
    set well above the engine's double-rounding noise (~1e-13 on desk-size
    circuits) and well below the ~5e-9 coefficient dent that a 1e-4 phase
    error leaves on a diagonal check — see the README for the arithmetic.
    """

    epsilon: float = DEFAULT_EPSILON
    count_timeout: float = 300.0
    jobs: int = 16

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        if self.count_timeout <= 0:
            raise ValueError("count_timeout must be positive")


@dataclass(frozen=True)
class Witness:
    pauli: str  # "X" or "Z"
    qubit: int
    value: object  # the offending count (float or ExactWeight)


@dataclass
class CheckRecord:
    pauli: str
    qubit: int
    status: str  # "one" | "mismatch" | "timeout" | "cancelled"
    value: object | None
    seconds: float
    decisions: int = 0

    def to_dict(self) -> dict:
        val = self.value
        out = {
            "pauli": self.pauli,
            "qubit": self.qubit,
            "status": self.status,
            "seconds": round(self.seconds, 6),
            "decisions": self.decisions,
        }
        if val is None:
            out["value"] = None
        elif isinstance(val, float):
            out["value"] = val
        else:
            out["value"] = serialize_exact(val)
            out["value_float"] = as_float(val)
        return out


@dataclass
class Verdict:
    status: str
    witness: Witness | None
    checks: list[CheckRecord]
    mode: str
    elapsed: float

    def to_dict(self) -> dict:
        out = {
            "status": self.status,
            "mode": self.mode,
            "elapsed": round(self.elapsed, 6),
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.witness is None:
            out["witness"] = None
        else:
            val = self.witness.value
            out["witness"] = {
                "pauli": self.witness.pauli,
                "qubit": self.witness.qubit,
                "value": val if isinstance(val, float) else serialize_exact(val),
            }
        return out


def check_order(n: int) -> list[tuple[str, int]]:
    """X1, Z1, X2, Z2, ...: an error localized on any one qubit is met
    after at most two checks on that qubit."""
    order = []
    for j in range(1, n + 1):
        order.append(("X", j))
        order.append(("Z", j))
    return order


def _run_one(enc: EncodedCircuit, pauli: str, qubit: int, cfg, cancel):
    p = PauliTerm.single(enc.num_qubits, qubit, pauli)
    formula = assemble_check(enc, p)
    t0 = time.perf_counter()
    try:
        res = count(formula, timeout=cfg.count_timeout, cancel=cancel)
    except ResourceLimitError:
        return CheckRecord(pauli, qubit, "timeout", None,
                           time.perf_counter() - t0)
    except CountCancelledError:
        return CheckRecord(pauli, qubit, "cancelled", None,
                           time.perf_counter() - t0)
    elapsed = time.perf_counter() - t0
    ok = value_is_one(res.value, cfg.epsilon)
    return CheckRecord(pauli, qubit, "one" if ok else "mismatch",
                       res.value, elapsed, res.stats.decisions)


def check_identity(a: Circuit, config: CheckConfig | None = None) -> Verdict:
    """Decide whether a circuit's unitary is the identity up to phase."""
    cfg = config or CheckConfig()
    t0 = time.perf_counter()
    native = lower(a)
    enc = encode_circuit(native)
    order = check_order(a.num_qubits)
    records: list[CheckRecord | None] = [None] * len(order)
    cancels = [threading.Event() for _ in order]
    lowest_fail: int | None = None
    lock = threading.Lock()

    def task(i: int) -> None:
        nonlocal lowest_fail
        pauli, qubit = order[i]
        rec = _run_one(enc, pauli, qubit, cfg, cancels[i])
        records[i] = rec
        if rec.status == "mismatch":
            with lock:
                if lowest_fail is None or i < lowest_fail:
                    lowest_fail = i
                    for j in range(i + 1, len(order)):
                        cancels[j].set()

    workers = min(cfg.jobs, len(order)) or 1
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(task, i) for i in range(len(order))]
        for fut in futures:
            fut.result()  # surface task exceptions
    checks = [rec for rec in records if rec is not None]
    elapsed = time.perf_counter() - t0
    if lowest_fail is not None:
        bad = records[lowest_fail]
        witness = Witness(bad.pauli, bad.qubit, bad.value)
        return Verdict(NOT_EQUIVALENT, witness, checks, enc.mode, elapsed)
    if any(rec.status in ("timeout", "cancelled") for rec in checks):
        return Verdict(UNKNOWN, None, checks, enc.mode, elapsed)
    return Verdict(EQUIVALENT, None, checks, enc.mode, elapsed)


def check_equivalence(
    u: Circuit, v: Circuit, config: CheckConfig | None = None
) -> Verdict:
    """Decide u == v up to global phase via the identity reduction."""
    if u.num_qubits != v.num_qubits:
        raise QubitCountMismatchError(
            f"{u.num_qubits}-qubit circuit vs {v.num_qubits}-qubit circuit"
        )
    a = concat(lower(u), adjoint(lower(v)))
    return check_identity(a, config)
