"""
The order-36 job
================

36 = 4 * 3^2 is the first order after 4 that survives the filter.  The pruned
fixed-weight search over it takes a while, so it checkpoints to a JSON file
and resumes from it when restarted.  Run with a node budget to take a slice,
or without one to finish the job.
"""

import logging
import sys

from circhad import PartialResultError, SearchOptions, search_circulant_hadamard

logging.basicConfig(level=logging.INFO)
budget = int(sys.argv[1]) if len(sys.argv) > 1 else None
options = SearchOptions(
    node_budget=budget,
    checkpoint_path="n36.checkpoint.json",
    checkpoint_every=50_000_000,
    emit_progress_every=100_000_000,
)
try:
    report = search_circulant_hadamard(36, options)
except PartialResultError as exc:
    s = exc.state
    print(f"stopped at shard {s['next_range_start']}/{s['range_count']}, "
          f"{s['counters']['nodes_visited']} nodes, {len(s['survivors_so_far'])} rows so far")
else:
    print(report.to_json(indent=1))
