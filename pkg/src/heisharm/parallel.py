"""Deterministic work distribution.

Grid sweeps parallelize over independent cells.  Each cell's arithmetic is
self-contained and reductions inside a cell use numpy's fixed pairwise
summation, so the assembled result is bit-identical no matter how many
workers ran the sweep.  The pool only changes wall time, never bytes.
"""

from concurrent.futures import ThreadPoolExecutor

__all__ = ["deterministic_map"]


def deterministic_map(fn, items, threads=1):
    """Apply fn to each item, preserving input order exactly.

    With threads <= 1 this is a plain loop.  With more threads the items are
    evaluated on a thread pool but results are collected back in submission
    order, so the output list is independent of scheduling.
    """
    items = list(items)
    if threads is None or threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
