"""Exact weighted model counting with negative and irrational weights.

count() is a DPLL-style counter: unit propagation, connected-component
decomposition of the residual formula, and caching of component counts.
It works on any WeightedCnf; on the layered formulas the encoder produces,
the component cache is what turns the exponential branch tree over T/h
variables into a sweep over distinct reachable Pauli states.

The count is over *all* declared variables: a variable that drops out of
the residual without being assigned contributes the factor
W(v) + W(not v) (which is 2 for an unweighted variable, per the semantics
of counting over the full assignment space).  brute_count() enumerates
assignments directly and exists so the clever counter has something dumb
to be checked against.

Pure-literal elimination is deliberately absent: with negative and
fractional weights, discarding one phase of a variable changes the count.
"""

from __future__ import annotations

import math
import time
from array import array
from dataclasses import dataclass
from hashlib import blake2b

import numpy as np

from .cnf import WeightedCnf
from .weights import EXACT, ExactWeight

MAX_BRUTE_VARS = 24
DEFAULT_TIMEOUT = 300.0
DEFAULT_CACHE_CAP = 400_000  # component-count entries, cleared when exceeded
SPLIT_SCAN_CAP = 1024  # only look for components in residuals this small
FRUITLESS_SPLIT_LIMIT = 4  # single-component scans before giving up on splits


class ResourceLimitError(RuntimeError):
    """Timeout or memory budget exceeded; never a silently wrong count."""


class CountCancelledError(RuntimeError):
    """Cooperative cancellation (another check already found a witness)."""


class TooManyVariablesError(ValueError):
    pass


@dataclass
class CountStats:
    decisions: int = 0
    propagations: int = 0
    seconds: float = 0.0
    cache_hits: int = 0
    cache_stores: int = 0


@dataclass
class CountResult:
    value: object  # float or ExactWeight, matching the formula's mode
    stats: CountStats


def _normalize(f: WeightedCnf) -> tuple[list[tuple[int, ...]], bool]:
    """Sort/dedup literals per clause, drop tautologies and repeated
    clauses.  Returns (clauses, saw_empty_clause)."""
    seen = set()
    out = []
    empty = False
    for clause in f.clauses:
        lits = tuple(sorted(set(clause)))
        if not lits:
            empty = True
            continue
        taut = False
        for lit in lits:
            if -lit in clause:
                taut = True
                break
        if taut or lits in seen:
            continue
        seen.add(lits)
        out.append(lits)
    return out, empty


class _Solver:
    def __init__(self, f: WeightedCnf, deadline, cancel, cache_cap):
        self.deadline = deadline
        self.cancel = cancel
        self.cache_cap = cache_cap
        self.stats = CountStats()
        self.exact = f.mode == EXACT
        if self.exact:
            self.one = ExactWeight.from_int(1)
            self.zero = ExactWeight.from_int(0)
        else:
            self.one = 1.0
            self.zero = 0.0
        self.clauses, self.saw_empty = _normalize(f)
        nv = f.num_vars
        occ_lists: list[list[int]] = [[] for _ in range(nv + 1)]
        for cid, clause in enumerate(self.clauses):
            for lit in clause:
                occ_lists[abs(lit)].append(cid)
        self.occ = [tuple(ids) for ids in occ_lists]
        one = self.one
        self.wpos = [one] * (nv + 1)
        self.wneg = [one] * (nv + 1)
        for lit, w in f.weights.items():
            if lit > 0:
                self.wpos[lit] = w
            else:
                self.wneg[-lit] = w
        self.free_factor = [
            self.wpos[v] + self.wneg[v] for v in range(nv + 1)
        ]
        self.cache: dict[bytes, object] = {}
        # consecutive component scans that found a single component; after
        # FRUITLESS_SPLIT_LIMIT of those, stop scanning mid-tree (the
        # circuit encodings are connected by construction through the
        # per-step sign chain, so their scans can never succeed)
        self.fruitless_splits = 0

    def w_of(self, lit: int):
        return self.wpos[lit] if lit > 0 else self.wneg[-lit]

    def _is_zero(self, w) -> bool:
        return w.is_zero() if self.exact else w == 0.0

    def run(self):
        if self.saw_empty:
            return self.zero
        # Residual state: `mask` flags active clause ids (bytearray: C-speed
        # membership, memcpy copies, and its bytes feed the cache key
        # directly), `forms` holds shortened clauses for modified active
        # ids only, `occn[v]` counts active clauses containing unassigned v
        # (array('i'): memcpy copies; a zero-copy numpy view serves the
        # branch-variable scan).
        mask = bytearray(b"\x01") * len(self.clauses)
        forms: dict[int, tuple[int, ...]] = {}
        nv = len(self.wpos) - 1
        occn = array("i", bytes(4 * (nv + 1)))
        for clause in self.clauses:
            for lit in clause:
                occn[abs(lit)] += 1
        # variables declared but absent from every clause are free
        outside = self.one
        for v in range(1, nv + 1):
            if occn[v] == 0:
                outside = outside * self.free_factor[v]
        # seed propagation with the formula's unit clauses
        pending: dict[int, int] = {}
        queue: list[int] = []
        wprod = self.one
        for cid in range(len(self.clauses)):
            clause = self.clauses[cid]
            if len(clause) != 1:
                continue
            lit = clause[0]
            v = abs(lit)
            prev = pending.get(v)
            if prev is None:
                w = self.w_of(lit)
                if self._is_zero(w):
                    return self.zero
                pending[v] = lit
                wprod = wprod * w
                queue.append(lit)
            elif prev != lit:
                return self.zero
        wprod = self._propagate(mask, forms, occn, pending, queue, wprod)
        if wprod is None:
            return self.zero
        return outside * wprod * self._solve_components(
            mask, forms, occn, None
        )

    def _check_budget(self):
        if self.cancel is not None and self.cancel.is_set():
            raise CountCancelledError("count cancelled")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ResourceLimitError("weighted count timed out")

    def _propagate(self, mask, forms, occn, pending, queue, wprod):
        """Assign queued literals, shrinking the residual in place.
        Returns the accumulated weight product (assignments plus variables
        freed along the way), or None when a branch dies — by conflict or
        by a forced zero-weight assignment, which contributes nothing
        either way."""
        clauses = self.clauses
        occ = self.occ
        free_factor = self.free_factor
        forms_get = forms.get
        forms_pop = forms.pop
        pending_get = pending.get
        wpos = self.wpos
        wneg = self.wneg
        exact = self.exact
        props = 0
        qi = 0
        while qi < len(queue):
            lit = queue[qi]
            qi += 1
            props += 1
            v = lit if lit > 0 else -lit
            occn[v] = 0
            for cid in occ[v]:
                if not mask[cid]:
                    continue
                form = forms_get(cid)
                if form is None:
                    form = clauses[cid]
                if lit in form:
                    mask[cid] = 0
                    forms_pop(cid, None)
                    for u in form:
                        uv = u if u > 0 else -u
                        if uv == v:
                            continue
                        c = occn[uv]
                        if c == 0:  # already assigned or freed
                            continue
                        if c == 1:
                            occn[uv] = 0
                            if uv not in pending:
                                wprod = wprod * free_factor[uv]
                        else:
                            occn[uv] = c - 1
                    continue
                if -lit not in form:
                    continue
                newform = tuple([x for x in form if x != -lit])
                if not newform:
                    self.stats.propagations += props
                    return None
                if len(newform) == 1:
                    l2 = newform[0]
                    v2 = l2 if l2 > 0 else -l2
                    prev = pending_get(v2)
                    if prev is None:
                        w2 = wpos[l2] if l2 > 0 else wneg[-l2]
                        if w2.is_zero() if exact else w2 == 0.0:
                            self.stats.propagations += props
                            return None
                        pending[v2] = l2
                        wprod = wprod * w2
                        queue.append(l2)
                    elif prev != l2:
                        self.stats.propagations += props
                        return None
                forms[cid] = newform
        self.stats.propagations += props
        return wprod

    def _solve_components(self, mask, forms, occn, last_split):
        """last_split is the residual size at the most recent component
        scan on this path (None at the root, which always scans once).
        The scan walks every literal occurrence in the residual, and on
        the layered circuit formulas a large residual is connected by
        construction — every step's sign clauses chain to the next — so
        scans are restricted to small residuals (where components really
        do appear as the timeline resolves) and re-attempted only after
        the residual halves."""
        n_active = mask.count(1)
        if n_active == 0:
            return self.one
        if last_split is not None and (
            self.fruitless_splits >= FRUITLESS_SPLIT_LIMIT
            or n_active > SPLIT_SCAN_CAP
            or n_active > 0.5 * last_split
        ):
            return self._cached_solve(mask, forms, occn, last_split)
        comps = self._split(mask, forms)
        if len(comps) == 1:
            self.fruitless_splits += 1
            return self._cached_solve(mask, forms, occn, n_active)
        self.fruitless_splits = 0
        nv = len(self.wpos) - 1
        total = self.one
        for comp in comps:
            sub_mask = bytearray(len(mask))
            sub_forms = {}
            sub_occn = array("i", bytes(4 * (nv + 1)))
            for cid in comp:
                sub_mask[cid] = 1
                form = forms.get(cid)
                if form is not None:
                    sub_forms[cid] = form
                else:
                    form = self.clauses[cid]
                for lit in form:
                    sub_occn[abs(lit)] += 1
            total = total * self._cached_solve(
                sub_mask, sub_forms, sub_occn, len(comp)
            )
        return total

    def _split(self, mask, forms):
        """Partition active clauses into connected components (shared
        variables = edges).  Deterministic: seeds in ascending clause id,
        result ordered by first (lowest) clause id.  Works on an index
        built from the residual itself, so the cost is linear in the
        residual's literals — the static occurrence lists can be much
        longer (a Toffoli input appears in every clause of its gate)."""
        clauses = self.clauses
        residual: list[tuple[int, tuple[int, ...]]] = []
        var_cids: dict[int, list[int]] = {}
        for cid in range(len(mask)):
            if not mask[cid]:
                continue
            form = forms.get(cid)
            if form is None:
                form = clauses[cid]
            residual.append((cid, form))
            for lit in form:
                v = abs(lit)
                bucket = var_cids.get(v)
                if bucket is None:
                    var_cids[v] = [cid]
                else:
                    bucket.append(cid)
        comp_of: dict[int, int] = {}
        comps: list[list[int]] = []
        seen_vars: set[int] = set()
        forms_of = dict(residual)
        for seed, _ in residual:
            if seed in comp_of:
                continue
            idx = len(comps)
            members: list[int] = []
            stack = [seed]
            comp_of[seed] = idx
            while stack:
                cid = stack.pop()
                members.append(cid)
                for lit in forms_of[cid]:
                    v = abs(lit)
                    if v in seen_vars:
                        continue
                    seen_vars.add(v)
                    for nb in var_cids[v]:
                        if nb not in comp_of:
                            comp_of[nb] = idx
                            stack.append(nb)
            members.sort()
            comps.append(members)
        return comps

    def _cached_solve(self, mask, forms, occn, last_split):
        # The mask bytes identify the active set; the (small) dict of
        # shortened forms identifies every modification.  Together they
        # pin the residual formula exactly.
        flat = array("q")
        for cid in sorted(forms):
            flat.append(cid)
            form = forms[cid]
            flat.append(len(form))
            flat.extend(form)
        key = blake2b(bytes(mask) + flat.tobytes(), digest_size=16).digest()
        cached = self.cache.get(key)
        if cached is not None:
            self.stats.cache_hits += 1
            return cached
        value = self._solve_node(mask, forms, occn, last_split)
        if len(self.cache) >= self.cache_cap:
            # dropping everything keeps behaviour deterministic and can
            # only cost time, never correctness
            self.cache.clear()
        self.cache[key] = value
        self.stats.cache_stores += 1
        return value

    def _solve_node(self, mask, forms, occn, last_split):
        self._check_budget()
        # Branch on the lowest unassigned variable.  Variable ids are
        # allocated in formula-construction order, which for the circuit
        # encodings follows the gate timeline: propagation then pins a
        # complete time frame before the next decision, so residuals that
        # agree on the frame are identical and collapse in the cache.
        occ_view = np.frombuffer(occn, dtype=np.int32)
        best_v = int((occ_view > 0).argmax())
        self.stats.decisions += 1
        total = None
        for lit in (best_v, -best_v):
            w = self.w_of(lit)
            if self._is_zero(w):
                continue
            mask2 = bytearray(mask)
            forms2 = dict(forms)
            occn2 = array("i", occn)
            wprod = self._propagate(
                mask2, forms2, occn2, {best_v: lit}, [lit], w
            )
            if wprod is None:
                continue
            val = wprod * self._solve_components(
                mask2, forms2, occn2, last_split
            )
            total = val if total is None else total + val
        return self.zero if total is None else total


def count(
    f: WeightedCnf,
    *,
    timeout: float | None = DEFAULT_TIMEOUT,
    cancel=None,
    cache_cap: int = DEFAULT_CACHE_CAP,
) -> CountResult:
    """Exact weighted model count of f over all its declared variables.

    `timeout` is wall-clock seconds (None disables); `cancel` is an object
    with is_set() checked between decisions, letting a driver abandon
    counts whose outcome no longer matters.
    """
    f.validate()
    deadline = None if timeout is None else time.monotonic() + timeout
    solver = _Solver(f, deadline, cancel, cache_cap)
    t0 = time.perf_counter()
    value = solver.run()
    solver.stats.seconds = time.perf_counter() - t0
    return CountResult(value=value, stats=solver.stats)


def brute_count(f: WeightedCnf):
    """Enumerate all 2^num_vars assignments.  Independent of count(); the
    point is to have no shared machinery with the thing it validates."""
    f.validate()
    nv = f.num_vars
    if nv > MAX_BRUTE_VARS:
        raise TooManyVariablesError(
            f"{nv} variables is past the brute-force cap of {MAX_BRUTE_VARS}"
        )
    size = 1 << nv
    sat = np.ones(size, dtype=bool)
    idx = np.arange(size, dtype=np.uint32)
    for clause in f.clauses:
        cmask = np.zeros(size, dtype=bool)
        for lit in clause:
            bit = (idx >> (abs(lit) - 1)) & 1
            cmask |= bit.astype(bool) if lit > 0 else ~bit.astype(bool)
        sat &= cmask
    weighted_vars = sorted(
        {abs(lit) for lit in f.weights}
    )
    exact = f.mode == EXACT
    one = ExactWeight.from_int(1) if exact else 1.0
    if not weighted_vars:
        n_models = int(np.count_nonzero(sat))
        if exact:
            return ExactWeight.from_int(n_models)
        return float(n_models)
    # group assignments by the weighted variables' bit pattern; everything
    # else contributes multiplicity only
    group = np.zeros(size, dtype=np.int64)
    for pos, v in enumerate(weighted_vars):
        group |= (((idx >> (v - 1)) & 1) != 0).astype(np.int64) << pos
    n_groups = 1 << len(weighted_vars)
    counts = np.bincount(group[sat], minlength=n_groups)
    if exact:
        total = ExactWeight.from_int(0)
        for g in range(n_groups):
            c = int(counts[g])
            if c == 0:
                continue
            w = one
            for pos, v in enumerate(weighted_vars):
                lit = v if (g >> pos) & 1 else -v
                w = w * f.weight_of(lit)
            total = total + w * ExactWeight.from_int(c)
        return total
    terms = []
    for g in range(n_groups):
        c = int(counts[g])
        if c == 0:
            continue
        w = 1.0
        for pos, v in enumerate(weighted_vars):
            lit = v if (g >> pos) & 1 else -v
            w *= float(f.weight_of(lit))
        terms.append(w * c)
    return math.fsum(terms)
