"""Task helpers for the optional data-parallel execution paths.

Parallel execution never changes results: tasks write disjoint slots and
every reduction runs in a fixed canonical order afterwards.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    raw = os.environ.get("POLYNEWT_THREADS", "")
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap < 1:
        cap = os.cpu_count() or 1
    return cap


def run_tasks(tasks, parallel: bool):
    """Run nullary tasks, concurrently when requested; returns their results."""
    if not parallel or len(tasks) <= 1:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=min(thread_count(), len(tasks))) as pool:
        futures = [pool.submit(t) for t in tasks]
        return [f.result() for f in futures]


def chunk_ranges(n: int, parts: int):
    """Split range(n) into at most `parts` contiguous chunks."""
    parts = max(1, min(parts, n))
    step = (n + parts - 1) // parts
    return [(i, min(i + step, n)) for i in range(0, n, step)]
