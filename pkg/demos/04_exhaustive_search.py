"""
Exhaustive searches
===================

Orders that are not 4h^2 with h odd are ruled out before enumeration; with
``confirm_excluded_orders`` they are also brute-forced.  Order 4 is searched
at fixed weight with partial-autocorrelation pruning.  Barker sequences are
searched up to length 20.
"""

import time

from circhad import SearchOptions, search_barker, search_circulant_hadamard, theoretical_filter

for n in (4, 8, 12, 16, 36):
    print(n, theoretical_filter(n).status)

report = search_circulant_hadamard(4)
print("order 4:", report.raw_count, "rows,", len(report.survivors), "class:", report.survivors)

t0 = time.perf_counter()
for n in range(5, 21):
    r = search_circulant_hadamard(n, SearchOptions(confirm_excluded_orders=n <= 16))
    print(f"order {n:>2}: {r.filter_verdict.status:<16} raw_count={r.raw_count} confirmed={r.confirmed}")
print(f"orders 5..20 in {time.perf_counter() - t0:.2f}s")

for n in range(1, 21):
    r = search_barker(n)
    tag = " ".join("".join("+" if x > 0 else "-" for x in s) for s in r.survivors)
    print(f"Barker {n:>2}: {len(r.survivors)} class(es) {tag}  nodes={r.nodes_visited}")

print(search_barker(13, SearchOptions(worker_count=2)).to_json(indent=1))
