import itertools
import json
import os

import numpy as np
import pytest
from hypothesis import given, strategies as st

from circhad import _kernel
from circhad.hadamard import catalog, is_hadamard
from circhad.search import (
    CERTIFICATE_SCHEMA,
    CHECKPOINT_MAGIC,
    PartialResultError,
    SearchError,
    SearchOptions,
    apacf,
    barker_canonical_form,
    barker_orbit,
    canonical_form,
    decimation_classes,
    hadamard_orbit,
    is_barker,
    load_checkpoint,
    naive_barker,
    naive_circulant_hadamard,
    pacf,
    pruned_rows,
    search_barker,
    search_circulant_hadamard,
    theoretical_filter,
)

BARKER_LENGTHS = {1, 2, 3, 4, 5, 7, 11, 13}
rows_st = st.lists(st.sampled_from([-1, 1]), min_size=1, max_size=14).map(tuple)


def all_rows(n):
    return itertools.product((-1, 1), repeat=n)


# --- correlations ----------------------------------------------------------


def test_pacf_examples():
    assert pacf((1, -1, -1, -1)).values == (4, 0, 0, 0)
    assert pacf((1, 1, 1, 1)).values == (4, 4, 4, 4)


def test_apacf_examples():
    assert apacf((1, 1, -1)).values == (3, 0, -1)
    assert apacf((1,)).values == (1,)


@given(rows_st)
def test_pacf_symmetry_and_peak(row):
    v = pacf(row).values
    n = len(row)
    assert v[0] == n and apacf(row)[0] == n
    assert all(v[k] == v[n - k] for k in range(1, n))
    # numpy oracle
    r = np.array(row)
    assert list(v) == [int(r @ np.roll(r, -k)) for k in range(n)]
    assert list(apacf(row).values) == [int(r[: n - k] @ r[k:]) for k in range(n)]


@pytest.mark.parametrize("n", range(1, 13))
def test_pacf_hadamard_equivalence_exhaustive(n):
    for row in all_rows(n):
        assert (all(x == 0 for x in pacf(row).sidelobes())) == is_hadamard(row)


# --- filter ----------------------------------------------------------------


@pytest.mark.parametrize("n, status, h", [
    (4, "candidate", 1),
    (8, "excluded-shape", None),
    (16, "excluded-parity", 2),
    (36, "candidate", 3),
    (64, "excluded-parity", 4),
    (100, "candidate", 5),
    (12, "excluded-shape", None),
])
def test_theoretical_filter(n, status, h):
    v = theoretical_filter(n)
    assert v.status == status and v.h == h and v.order == n


def test_theoretical_filter_range():
    with pytest.raises(SearchError):
        theoretical_filter(3)
    statuses = {n: theoretical_filter(n).status for n in range(5, 36)}
    assert [n for n, s in statuses.items() if s == "candidate"] == []
    assert [n for n, s in statuses.items() if s == "excluded-parity"] == [16]


# --- canonical forms ---------------------------------------------------------


def test_canonical_form_example():
    row = (-1, 1, -1, -1)
    r = np.array(row)
    orbit = {tuple(int(x) for x in s * np.roll(r, k)) for k in range(4) for s in (1, -1)}
    assert canonical_form(row) == min(orbit) == (-1, -1, -1, 1)


def test_h3_orbit():
    orbit = hadamard_orbit((1, -1, -1, -1))
    assert len(orbit) == 8
    assert {canonical_form(r) for r in orbit} == {(-1, -1, -1, 1)}


@given(rows_st)
def test_canonical_idempotent(row):
    c = canonical_form(row)
    assert canonical_form(c) == c and c in hadamard_orbit(row)
    b = barker_canonical_form(row)
    assert barker_canonical_form(b) == b and b in barker_orbit(row)


def _bfs_orbit(row, gens):
    seen, todo = {row}, [row]
    while todo:
        r = todo.pop()
        for g in gens:
            s = g(r)
            if s not in seen:
                seen.add(s)
                todo.append(s)
    return seen


@pytest.mark.parametrize("n", range(1, 11))
def test_canonical_soundness_exhaustive(n):
    gens = [lambda r: r[-1:] + r[:-1], lambda r: tuple(-x for x in r)]
    classes = {}
    for row in all_rows(n):
        classes.setdefault(canonical_form(row), set()).add(row)
    for rep, members in classes.items():
        assert members == _bfs_orbit(rep, gens)


@pytest.mark.parametrize("n", range(1, 11))
def test_barker_group_preserves_sidelobes(n):
    for row in all_rows(n):
        mags = sorted(abs(x) for x in apacf(row).sidelobes())
        for other in barker_orbit(row):
            assert sorted(abs(x) for x in apacf(other).sidelobes()) == mags


def test_decimation_classes():
    assert decimation_classes([e.row for e in catalog() if e.order == 4]) == [[(-1, -1, -1, 1)]]


# --- kernels ---------------------------------------------------------------


@pytest.mark.parametrize("n", [4, 6, 8])
def test_compiled_kernel_matches_python(n):
    args = (n, np.arange(n, dtype=np.int64), True, -1, np.zeros(0, np.int8), n, -1)
    f1, c1, k1, s1 = _kernel.dfs(*args)
    f2, c2, k2, s2 = _kernel.dfs_py(*args)
    assert c1 == c2 and list(k1) == list(k2) and s1 == s2
    assert sorted(map(tuple, f1.tolist())) == sorted(map(tuple, f2.tolist()))


@pytest.mark.parametrize("n", range(1, 13))
def test_pruned_equals_naive(n):
    assert pruned_rows(n) == naive_circulant_hadamard(n)


@pytest.mark.parametrize("n", range(1, 15))
def test_barker_pruned_equals_naive(n):
    report = search_barker(n)
    raw = naive_barker(n)
    assert report.raw_count == len(raw)
    assert report.survivors == sorted({barker_canonical_form(r) for r in raw})


def test_naive_fixed_weight_path():
    assert naive_circulant_hadamard(4, weight=3) == {r for r in naive_circulant_hadamard(4) if sum(r) == 2}


# --- circulant Hadamard search ---------------------------------------------


def test_search_order4():
    report = search_circulant_hadamard(4)
    assert report.raw_count == 8
    assert report.survivors == [(-1, -1, -1, 1)]
    cat4 = {canonical_form(e.row) for e in catalog() if e.order == 4}
    assert set(report.survivors) == cat4
    assert report.filter_verdict.status == "candidate"


def test_weight_pruning_sound_at_4():
    fixed = pruned_rows(4, weight=3)
    closed = fixed | {tuple(-x for x in r) for r in fixed}
    assert closed == {r for r in all_rows(4) if is_hadamard(r)}


@pytest.mark.parametrize("n, raw", [(1, 2), (2, 0), (3, 0)])
def test_search_small_orders(n, raw):
    report = search_circulant_hadamard(n)
    assert report.raw_count == raw and report.filter_verdict is None


@pytest.mark.parametrize("n", [8, 12])
def test_search_excluded_brute_force(n):
    report = search_circulant_hadamard(n, SearchOptions(confirm_excluded_orders=True))
    assert report.raw_count == 0 and report.confirmed
    assert report.filter_verdict.status == "excluded-shape"
    assert naive_circulant_hadamard(n) == set()
    plain = search_circulant_hadamard(n)
    assert plain.raw_count == 0 and not plain.confirmed


def test_certificate_schema_and_determinism():
    jsonschema = pytest.importorskip("jsonschema")
    for report in (search_circulant_hadamard(4), search_barker(13),
                   search_circulant_hadamard(12, SearchOptions(confirm_excluded_orders=True))):
        cert = report.certificate()
        jsonschema.validate(cert, CERTIFICATE_SCHEMA)
        assert "duration_ms" in cert
        assert "duration_ms" not in report.certificate(include_duration=False)
    a = search_barker(11).to_json(include_duration=False)
    b = search_barker(11).to_json(include_duration=False)
    assert a == b


@pytest.mark.parametrize("search, n", [
    (search_circulant_hadamard, 4),
    (search_barker, 13),
    (search_barker, 16),
])
def test_parallel_determinism(search, n):
    one = search(n, SearchOptions(worker_count=1, shard_depth=3))
    four = search(n, SearchOptions(worker_count=4, shard_depth=3))
    assert one.survivors == four.survivors
    assert one.raw_count == four.raw_count
    assert one.counters == four.counters


def test_pruned_rows_parallel():
    assert pruned_rows(10, options=SearchOptions(worker_count=4)) == pruned_rows(10) == set()


# --- Barker ----------------------------------------------------------------


def test_barker_13():
    report = search_barker(13)
    assert report.survivors
    for r in report.survivors:
        assert all(abs(apacf(r)[k]) <= 1 for k in range(1, 13))
    assert report.survivors == [barker_canonical_form((1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1))]


def test_barker_6_empty():
    assert search_barker(6).survivors == []
    assert not any(is_barker(r) for r in all_rows(6))


@pytest.mark.parametrize("n", range(1, 21))
def test_barker_lengths(n):
    report = search_barker(n)
    assert bool(report.survivors) is (n in BARKER_LENGTHS)


# --- budgets and checkpoints -------------------------------------------------


def test_budget_raises_partial_result(tmp_path):
    ck = tmp_path / "n36.json"
    with pytest.raises(PartialResultError) as exc:
        search_circulant_hadamard(36, SearchOptions(node_budget=5000, checkpoint_path=str(ck)))
    state = exc.value.state
    assert state["magic"] == CHECKPOINT_MAGIC and state["order"] == 36
    assert state["mode"] == "circulant-hadamard"
    assert load_checkpoint(ck) == state


def test_checkpoint_resume_matches_fresh_run(tmp_path):
    ck = str(tmp_path / "b20.json")
    fresh = search_barker(20)
    with pytest.raises(PartialResultError):
        search_barker(20, SearchOptions(node_budget=300, checkpoint_path=ck))
    mid = load_checkpoint(ck)
    assert 0 < mid["next_range_start"] < mid["range_count"]
    resumed = search_barker(20, SearchOptions(checkpoint_path=ck))
    assert resumed.survivors == fresh.survivors
    assert resumed.raw_count == fresh.raw_count
    assert resumed.counters == fresh.counters
    assert load_checkpoint(ck)["next_range_start"] == mid["range_count"]


def test_checkpoint_mismatch_rejected(tmp_path):
    ck = str(tmp_path / "ck.json")
    search_barker(9, SearchOptions(checkpoint_path=ck))
    with pytest.raises(SearchError):
        search_barker(10, SearchOptions(checkpoint_path=ck))
    with open(ck, "w") as fh:
        json.dump({"magic": "nope"}, fh)
    with pytest.raises(SearchError):
        load_checkpoint(ck)


def test_order_limits():
    with pytest.raises(SearchError):
        search_barker(0)
    with pytest.raises(SearchError):
        search_circulant_hadamard(65)


@pytest.mark.slow
def test_order_36_full_run(tmp_path):
    report = search_circulant_hadamard(36, SearchOptions(checkpoint_path=str(tmp_path / "n36.json")))
    assert report.survivors == [] and report.raw_count == 0
