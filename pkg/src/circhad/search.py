"""Exhaustive searches for circulant Hadamard first rows and Barker sequences.

Circulant Hadamard rows are enumerated at fixed weight (``2h^2 + h`` entries
equal to +1, the other weight class being the negations) with pruning on
partial periodic autocorrelations.  Barker sequences are enumerated with the
first entry fixed to +1 and pruning on partial aperiodic autocorrelations,
filling positions alternately from both ends so that long lags are settled
early.

The enumeration tree is cut at a fixed shard depth into contiguous blocks
of prefixes.  Shards are independent, so they can run in worker processes;
results are merged in shard order, which makes reports independent of the
worker count.  Long runs can checkpoint after every completed shard.
"""

from __future__ import annotations

import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernel
from .hadamard import is_hadamard, sign_vector

log = logging.getLogger(__name__)

__all__ = [
    "AutocorrelationSpectrum",
    "FilterVerdict",
    "SearchOptions",
    "SearchReport",
    "SearchError",
    "PartialResultError",
    "CHECKPOINT_MAGIC",
    "CERTIFICATE_SCHEMA",
    "pacf",
    "apacf",
    "theoretical_filter",
    "canonical_form",
    "barker_canonical_form",
    "hadamard_orbit",
    "barker_orbit",
    "decimation_classes",
    "is_barker",
    "search_circulant_hadamard",
    "search_barker",
    "naive_circulant_hadamard",
    "naive_barker",
    "pruned_rows",
    "load_checkpoint",
]

CHECKPOINT_MAGIC = "CHSEARCH1"
HADAMARD, BARKER = "circulant-hadamard", "barker"
MAX_ORDER = 64


class SearchError(ValueError):
    pass


class PartialResultError(RuntimeError):
    """Raised when a resource limit stops a search; ``state`` can resume it."""

    def __init__(self, message, state):
        super().__init__(message)
        self.state = state


# ---------------------------------------------------------------------------
# correlations


@dataclass(frozen=True)
class AutocorrelationSpectrum:
    kind: str
    values: tuple

    def __getitem__(self, k):
        return self.values[k]

    def __len__(self):
        return len(self.values)

    def sidelobes(self):
        return self.values[1:]


def pacf(row) -> AutocorrelationSpectrum:
    """Periodic autocorrelation, lags ``0..n-1``."""
    r = sign_vector(row)
    n = len(r)
    return AutocorrelationSpectrum(
        "periodic", tuple(sum(r[i] * r[(i + k) % n] for i in range(n)) for k in range(n))
    )


def apacf(row) -> AutocorrelationSpectrum:
    """Aperiodic autocorrelation, lags ``0..n-1``."""
    r = sign_vector(row)
    n = len(r)
    return AutocorrelationSpectrum(
        "aperiodic", tuple(sum(r[i] * r[i + k] for i in range(n - k)) for k in range(n))
    )


def is_barker(row) -> bool:
    return all(abs(c) <= 1 for c in apacf(row).sidelobes())


# ---------------------------------------------------------------------------
# theory filter


@dataclass(frozen=True)
class FilterVerdict:
    order: int
    status: str  # excluded-shape | excluded-parity | candidate
    reason: str
    h: Optional[int] = None

    def as_dict(self):
        return {"order": self.order, "status": self.status, "reason": self.reason, "h": self.h}


def theoretical_filter(n: int) -> FilterVerdict:
    """Classify an order ``n >= 4`` before any enumeration.

    A circulant Hadamard matrix of order ``n >= 4`` is regular, so ``n = 4h^2``,
    and ``h`` must be odd.
    """
    if not isinstance(n, int) or n < 4:
        raise SearchError(f"theoretical_filter covers orders >= 4, got {n!r}")
    h = math.isqrt(n // 4)
    if n % 4 or 4 * h * h != n:
        return FilterVerdict(n, "excluded-shape", f"{n} is not of the form 4h^2")
    if h % 2 == 0:
        return FilterVerdict(n, "excluded-parity", f"{n} = 4*{h}^2 with h = {h} even", h)
    return FilterVerdict(n, "candidate", f"{n} = 4*{h}^2 with h = {h} odd", h)


# ---------------------------------------------------------------------------
# symmetry groups


def hadamard_orbit(row) -> set:
    """Orbit under cyclic shifts and global negation."""
    r = sign_vector(row)
    n = len(r)
    out = set()
    for s in range(n):
        shifted = r[s:] + r[:s]
        out.add(shifted)
        out.add(tuple(-x for x in shifted))
    return out


def canonical_form(row) -> tuple:
    """Lexicographically least element of the shift/negation orbit (-1 < +1)."""
    return min(hadamard_orbit(row))


def barker_orbit(row) -> set:
    """Orbit under the 8-element Barker group: reversal combined with sign flips ``x_i -> ±(-1)^(ki) x_i``."""
    r = sign_vector(row)
    out = set()
    for a in (r, r[::-1]):
        alt = tuple(x if i % 2 == 0 else -x for i, x in enumerate(a))
        for b in (a, alt):
            out.add(b)
            out.add(tuple(-x for x in b))
    return out


def barker_canonical_form(row) -> tuple:
    return min(barker_orbit(row))


def decimation_classes(rows: Iterable[Sequence[int]]) -> list:
    """Group rows further under decimations ``i -> u*i mod n`` for units ``u``.

    Secondary grouping only; search counts use shifts and negation.
    """
    classes = {}
    for r in rows:
        r = sign_vector(r)
        n = len(r)
        keys = [canonical_form(tuple(r[(u * i) % n] for i in range(n)))
                for u in range(1, n + 1) if math.gcd(u, n) == 1]
        classes.setdefault(min(keys), set()).add(canonical_form(r))
    return [sorted(v) for _, v in sorted(classes.items())]


# ---------------------------------------------------------------------------
# reports


@dataclass
class SearchOptions:
    worker_count: int = 1
    node_budget: Optional[int] = None
    confirm_excluded_orders: bool = False
    emit_progress_every: Optional[int] = None
    checkpoint_path: Optional[str] = None
    checkpoint_every: int = 10_000_000
    shard_depth: Optional[int] = None


@dataclass
class SearchReport:
    order: int
    mode: str
    survivors: list
    raw_count: int
    nodes_visited: int = 0
    pruned_by_weight: int = 0
    pruned_by_partial_pacf: int = 0
    duration: float = 0.0  # milliseconds
    filter_verdict: Optional[FilterVerdict] = None
    confirmed: bool = False
    shards: int = 0

    @property
    def equivalence_group(self) -> str:
        if self.mode == HADAMARD:
            return "cyclic-shift x negation"
        return "negation x reversal x alternating-flip"

    @property
    def counters(self) -> dict:
        return {
            "nodes_visited": self.nodes_visited,
            "pruned_by_weight": self.pruned_by_weight,
            "pruned_by_partial_pacf": self.pruned_by_partial_pacf,
        }

    def certificate(self, include_duration: bool = True) -> dict:
        cert = {
            "order": self.order,
            "mode": self.mode,
            "survivors": [list(r) for r in self.survivors],
            "raw_count": self.raw_count,
            "counters": self.counters,
            "equivalence_group": self.equivalence_group,
        }
        if self.filter_verdict is not None:
            cert["filter_verdict"] = self.filter_verdict.as_dict()
            cert["confirmed_empirically"] = self.confirmed
        if include_duration:
            cert["duration_ms"] = round(self.duration, 3)
        return cert

    def to_json(self, include_duration: bool = True, indent=None) -> str:
        return json.dumps(self.certificate(include_duration), indent=indent, sort_keys=True)


CERTIFICATE_SCHEMA = {
    "type": "object",
    "required": ["order", "mode", "survivors", "raw_count", "counters", "equivalence_group"],
    "properties": {
        "order": {"type": "integer", "minimum": 1},
        "mode": {"enum": [HADAMARD, BARKER]},
        "survivors": {"type": "array", "items": {"type": "array", "items": {"enum": [-1, 1]}}},
        "raw_count": {"type": "integer", "minimum": 0},
        "counters": {
            "type": "object",
            "required": ["nodes_visited", "pruned_by_weight", "pruned_by_partial_pacf"],
            "additionalProperties": {"type": "integer", "minimum": 0},
        },
        "duration_ms": {"type": "number", "minimum": 0},
        "equivalence_group": {"type": "string"},
        "filter_verdict": {
            "type": "object",
            "required": ["order", "status", "reason"],
            "properties": {"status": {"enum": ["excluded-shape", "excluded-parity", "candidate"]}},
        },
        "confirmed_empirically": {"type": "boolean"},
    },
    "additionalProperties": False,
}


# ---------------------------------------------------------------------------
# naive oracles (no pruning, vectorized)


def _all_rows(n: int, chunk: int = 1 << 16):
    """All 2^n sign rows in binary order (bit set -> -1), in chunks."""
    total = 1 << n
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        bits = (idx[:, None] >> shifts) & 1
        yield (1 - 2 * bits).astype(np.int8)


def _fixed_weight_rows(n: int, weight: int):
    for ones in combinations(range(n), weight):
        r = [-1] * n
        for i in ones:
            r[i] = 1
        yield tuple(r)


def naive_circulant_hadamard(n: int, weight: Optional[int] = None) -> set:
    """Every row with vanishing periodic sidelobes, by plain enumeration.

    With ``weight`` only rows with that many +1 entries are tested.
    """
    if n > 30:
        raise SearchError("naive enumeration is limited to n <= 30")
    if weight is not None:
        return {r for r in _fixed_weight_rows(n, weight) if all(v == 0 for v in pacf(r).sidelobes())}
    out = set()
    for R in _all_rows(n):
        R = R.astype(np.int16)
        ok = np.ones(len(R), bool)
        for k in range(1, n // 2 + 1):
            ok &= (R * np.roll(R, -k, axis=1)).sum(axis=1) == 0
        out.update(tuple(int(x) for x in r) for r in R[ok])
    return out


def naive_barker(n: int) -> set:
    if n > 30:
        raise SearchError("naive enumeration is limited to n <= 30")
    out = set()
    for R in _all_rows(n):
        R = R.astype(np.int16)
        ok = np.ones(len(R), bool)
        for k in range(1, n):
            ok &= np.abs((R[:, : n - k] * R[:, k:]).sum(axis=1)) <= 1
        out.update(tuple(int(x) for x in r) for r in R[ok])
    return out


# ---------------------------------------------------------------------------
# sharded pruned search


@dataclass
class _Plan:
    n: int
    mode: str
    order: np.ndarray
    periodic: bool
    weight: int
    fixed: tuple  # values forced at the start of ``order``
    shard_depth: int


def _barker_order(n):
    out, lo, hi = [], 0, n - 1
    while lo <= hi:
        out.append(lo)
        if hi != lo:
            out.append(hi)
        lo, hi = lo + 1, hi - 1
    return np.array(out, np.int64)


def _default_shard_depth(n):
    return max(0, min(n - 1, n // 2, 12))


def _run_shard(args):
    plan, prefix, budget = args
    found, count, counters, status = _kernel.dfs(
        plan.n, plan.order, plan.periodic, plan.weight,
        np.asarray(prefix, np.int8), plan.n, budget,
    )
    rows = []
    for vals in found[:count]:
        r = [0] * plan.n
        for j, p in enumerate(plan.order):
            r[int(p)] = int(vals[j])
        rows.append(tuple(r))
    return rows, [int(c) for c in counters], int(status)


def _prefixes(plan):
    fixed = np.array(plan.fixed, np.int8)
    depth = max(plan.shard_depth, len(plan.fixed))
    found, count, counters, status = _kernel.dfs(
        plan.n, plan.order, plan.periodic, plan.weight, fixed, depth, -1
    )
    return [tuple(int(x) for x in f) for f in found[:count]], [int(c) for c in counters]


def _write_checkpoint(path, state):
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump(state, fh, sort_keys=True)
    os.replace(tmp, path)


def load_checkpoint(path) -> dict:
    with open(path) as fh:
        state = json.load(fh)
    if state.get("magic") != CHECKPOINT_MAGIC:
        raise SearchError(f"{path} is not a {CHECKPOINT_MAGIC} checkpoint")
    return state


def _state(plan, next_shard, n_shards, found, counters):
    return {
        "magic": CHECKPOINT_MAGIC,
        "order": plan.n,
        "mode": plan.mode,
        "weight": plan.weight,
        "shard_depth": plan.shard_depth,
        "next_range_start": next_shard,
        "range_count": n_shards,
        "survivors_so_far": [list(r) for r in found],
        "counters": {
            "nodes_visited": counters[0],
            "pruned_by_weight": counters[1],
            "pruned_by_partial_pacf": counters[2],
        },
    }


def _execute(plan: _Plan, options: SearchOptions):
    """Run every shard of ``plan``.  Returns (rows found, counters, shard count)."""
    prefixes, counters = _prefixes(plan)
    found = []
    start = 0
    ck = options.checkpoint_path
    if ck and os.path.exists(ck):
        state = load_checkpoint(ck)
        if (state["order"], state["mode"], state["weight"], state["shard_depth"]) != (
            plan.n, plan.mode, plan.weight, plan.shard_depth
        ) or state["range_count"] != len(prefixes):
            raise SearchError(f"checkpoint {ck} belongs to a different search")
        start = state["next_range_start"]
        found = [tuple(r) for r in state["survivors_so_far"]]
        c = state["counters"]
        counters = [c["nodes_visited"], c["pruned_by_weight"], c["pruned_by_partial_pacf"]]
        log.info("resuming %s n=%d at shard %d/%d", plan.mode, plan.n, start, len(prefixes))

    budget = options.node_budget
    workers = max(1, int(options.worker_count))
    since_ck = 0
    since_progress = 0
    i = start

    def remaining():
        return -1 if budget is None else max(0, budget - counters[0])

    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        while i < len(prefixes):
            block = prefixes[i: i + (workers * 4 if pool else 1)]
            args = [(plan, p, remaining()) for p in block]
            results = pool.map(_run_shard, args) if pool else map(_run_shard, args)
            for rows, c, status in results:
                if status == _kernel.BUDGET or (budget is not None and counters[0] + c[0] > budget):
                    state = _state(plan, i, len(prefixes), found, counters)
                    if ck:
                        _write_checkpoint(ck, state)
                    raise PartialResultError(
                        f"node budget {budget} exhausted after {i}/{len(prefixes)} shards", state
                    )
                found.extend(rows)
                for j in range(3):
                    counters[j] += c[j]
                since_ck += c[0]
                since_progress += c[0]
                i += 1
                if ck and since_ck >= options.checkpoint_every:
                    _write_checkpoint(ck, _state(plan, i, len(prefixes), found, counters))
                    since_ck = 0
                if options.emit_progress_every and since_progress >= options.emit_progress_every:
                    log.info("%s n=%d: shard %d/%d, %d nodes, %d rows",
                             plan.mode, plan.n, i, len(prefixes), counters[0], len(found))
                    since_progress = 0
    finally:
        if pool is not None:
            pool.shutdown()
    if ck:
        _write_checkpoint(ck, _state(plan, i, len(prefixes), found, counters))
    return found, counters, len(prefixes)


def _shard_depth(n, options):
    d = options.shard_depth if options.shard_depth is not None else _default_shard_depth(n)
    return max(0, min(n, d))


def _check_order(n):
    if not isinstance(n, int) or n < 1:
        raise SearchError(f"order must be a positive integer, got {n!r}")
    if n > MAX_ORDER:
        raise SearchError(f"orders above {MAX_ORDER} are not supported")


def pruned_rows(n: int, weight: Optional[int] = None, options: Optional[SearchOptions] = None) -> set:
    """Rows with vanishing periodic sidelobes found by the pruned search.

    ``weight=None`` searches every weight; otherwise only rows with exactly
    ``weight`` entries equal to +1 (no negation closure).
    """
    _check_order(n)
    options = options or SearchOptions()
    w = -1 if weight is None else weight
    plan = _Plan(n, HADAMARD, np.arange(n, dtype=np.int64), True, w, (), _shard_depth(n, options))
    found, _, _ = _execute(plan, options)
    return set(found)


def search_circulant_hadamard(n: int, options: Optional[SearchOptions] = None) -> SearchReport:
    """Find all first rows of order ``n`` whose circulant is Hadamard.

    Orders excluded by :func:`theoretical_filter` return an empty report
    unless ``options.confirm_excluded_orders`` asks for an unpruned
    enumeration of all ``2^n`` rows.
    """
    _check_order(n)
    options = options or SearchOptions()
    t0 = time.perf_counter()
    verdict = theoretical_filter(n) if n >= 4 else None
    report = SearchReport(order=n, mode=HADAMARD, survivors=[], raw_count=0, filter_verdict=verdict)

    if verdict is not None and verdict.status != "candidate":
        if options.confirm_excluded_orders:
            rows = naive_circulant_hadamard(n)
            report.raw_count = len(rows)
            report.survivors = sorted({canonical_form(r) for r in rows})
            report.confirmed = True
        report.duration = (time.perf_counter() - t0) * 1e3
        _verify(report)
        return report

    # orders 1..3 fall outside the filter: search every weight
    weight = 2 * verdict.h ** 2 + verdict.h if verdict is not None else -1
    plan = _Plan(n, HADAMARD, np.arange(n, dtype=np.int64), True, weight, (), _shard_depth(n, options))
    found, counters, shards = _execute(plan, options)
    raw = set(found)
    if weight >= 0:
        raw |= {tuple(-x for x in r) for r in found}
    report.raw_count = len(raw)
    report.survivors = sorted({canonical_form(r) for r in raw})
    report.nodes_visited, report.pruned_by_weight, report.pruned_by_partial_pacf = counters
    report.shards = shards
    report.confirmed = True
    report.duration = (time.perf_counter() - t0) * 1e3
    _verify(report)
    return report


def search_barker(n: int, options: Optional[SearchOptions] = None) -> SearchReport:
    """Find all Barker sequences of length ``n`` (all aperiodic sidelobes in {-1, 0, 1})."""
    _check_order(n)
    options = options or SearchOptions()
    t0 = time.perf_counter()
    plan = _Plan(n, BARKER, _barker_order(n), False, -1, (1,), _shard_depth(n, options))
    found, counters, shards = _execute(plan, options)
    raw = set(found) | {tuple(-x for x in r) for r in found}
    report = SearchReport(order=n, mode=BARKER, survivors=sorted({barker_canonical_form(r) for r in raw}),
                          raw_count=len(raw), confirmed=True, shards=shards)
    report.nodes_visited, report.pruned_by_weight, report.pruned_by_partial_pacf = counters
    report.duration = (time.perf_counter() - t0) * 1e3
    _verify(report)
    return report


def _verify(report: SearchReport):
    # survivors are re-checked through the exact rational path
    for r in report.survivors:
        ok = is_hadamard(r) if report.mode == HADAMARD else is_barker(r)
        if not ok:
            raise AssertionError(f"search produced an invalid row {r}")
    orbit = hadamard_orbit if report.mode == HADAMARD else barker_orbit
    expected = sum(len(orbit(r)) for r in report.survivors)
    if expected != report.raw_count:
        raise AssertionError(f"raw_count {report.raw_count} disagrees with orbit sizes {expected}")
