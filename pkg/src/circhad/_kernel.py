"""Depth-first +-1 sequence enumeration with partial-correlation pruning.

One kernel serves both searches:

* periodic mode (circulant Hadamard): lags ``1..n//2``, target value 0,
  optional fixed number of ``+1`` entries;
* aperiodic mode (Barker): lags ``1..n-1``, target ``|value| <= 1``.

Positions are filled in the order given by ``order``.  When a position is
set, every correlation term pairing it with an already-set position is added
to that lag's running sum.  A lag whose running sum exceeds the number of
still-undetermined terms (plus the slack, 0 or 1) can no longer meet its
target, so the branch is cut.

Written in the numba subset; falls back to plain Python if numba is absent.
"""

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

# counter slots
NODES, PRUNED_WEIGHT, PRUNED_CORR = 0, 1, 2
# status codes
DONE, BUDGET = 0, 1


@njit(cache=True)
def _touch(row, sums, det, n, p, periodic, nlags, sign):
    # add (sign=+1) or remove (sign=-1) the terms between position p and set positions
    v = row[p]
    for k in range(1, nlags + 1):
        q = p - k
        if periodic:
            q = q % n
            if row[q] != 0:
                sums[k] += sign * v * row[q]
                det[k] += sign
            q = (p + k) % n
            if row[q] != 0:
                sums[k] += sign * v * row[q]
                det[k] += sign
        else:
            if q >= 0 and row[q] != 0:
                sums[k] += sign * v * row[q]
                det[k] += sign
            q = p + k
            if q < n and row[q] != 0:
                sums[k] += sign * v * row[q]
                det[k] += sign


@njit(cache=True)
def _feasible(sums, det, n, periodic, nlags, slack):
    for k in range(1, nlags + 1):
        total = n if periodic else n - k
        s = sums[k]
        if s < 0:
            s = -s
        if s > total - det[k] + slack:
            return False
    return True


@njit(cache=True)
def dfs(n, order, periodic, weight, prefix, stop_depth, budget):
    """Enumerate completions of ``prefix`` down to ``stop_depth`` positions.

    Returns ``(found, count, counters, status)``: ``found[:count]`` holds the
    surviving assignments listed along ``order``; ``counters`` are
    (nodes, pruned by weight, pruned by correlation); ``status`` is DONE or
    BUDGET.  Nodes spent placing ``prefix`` are not counted.  ``weight < 0``
    disables the weight constraint; ``budget < 0`` means unlimited.
    """
    nlags = n // 2 if periodic else n - 1
    slack = 0 if periodic else 1
    row = np.zeros(n, np.int64)
    sums = np.zeros(nlags + 1, np.int64)
    det = np.zeros(nlags + 1, np.int64)
    counters = np.zeros(3, np.int64)
    cap = 16
    found = np.zeros((cap, stop_depth), np.int8)
    count = 0

    p0 = prefix.shape[0]
    ones = 0
    for d in range(p0):
        pos = order[d]
        row[pos] = prefix[d]
        if prefix[d] == 1:
            ones += 1
        _touch(row, sums, det, n, pos, periodic, nlags, 1)
    if weight >= 0 and (ones > weight or ones + (n - p0) < weight):
        return found[:0], 0, counters, DONE
    if not _feasible(sums, det, n, periodic, nlags, slack):
        return found[:0], 0, counters, DONE
    if p0 >= stop_depth:
        found[0, :stop_depth] = prefix[:stop_depth]
        return found[:1], 1, counters, DONE

    choice = np.zeros(n + 1, np.int64)
    d = p0
    while True:
        if d == stop_depth:
            if count == cap:
                grown = np.zeros((cap * 2, stop_depth), np.int8)
                grown[:cap] = found
                found = grown
                cap *= 2
            for j in range(stop_depth):
                found[count, j] = row[order[j]]
            count += 1
            d -= 1
            pos = order[d]
            _touch(row, sums, det, n, pos, periodic, nlags, -1)
            if row[pos] == 1:
                ones -= 1
            row[pos] = 0
            continue
        c = choice[d]
        if c == 2:
            choice[d] = 0
            d -= 1
            if d < p0:
                break
            pos = order[d]
            _touch(row, sums, det, n, pos, periodic, nlags, -1)
            if row[pos] == 1:
                ones -= 1
            row[pos] = 0
            continue
        choice[d] = c + 1
        v = -1 if c == 0 else 1
        new_ones = ones + (1 if v == 1 else 0)
        if weight >= 0 and (new_ones > weight or new_ones + (n - d - 1) < weight):
            counters[PRUNED_WEIGHT] += 1
            continue
        if budget >= 0 and counters[NODES] >= budget:
            return found[:count], count, counters, BUDGET
        counters[NODES] += 1
        pos = order[d]
        row[pos] = v
        _touch(row, sums, det, n, pos, periodic, nlags, 1)
        if not _feasible(sums, det, n, periodic, nlags, slack):
            counters[PRUNED_CORR] += 1
            _touch(row, sums, det, n, pos, periodic, nlags, -1)
            row[pos] = 0
            continue
        ones = new_ones
        d += 1
    return found[:count], count, counters, DONE


def dfs_py(n, order, periodic, weight, prefix, stop_depth, budget):
    """The same kernel run as interpreted Python (for cross-checks)."""
    fn = getattr(dfs, "py_func", dfs)
    return fn(n, order, periodic, weight, prefix, stop_depth, budget)
