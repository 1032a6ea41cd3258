"""Order-preserving process pool map.

mpmath keeps its precision in a process-global context, so work is spread
over processes rather than threads.  Results come back in input order,
which keeps every report independent of the worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def default_workers() -> int:
    return max(1, os.cpu_count() or 1)


def parallel_map(fn: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """[fn(x) for x in items], evaluated on up to ``workers`` processes.

    ``fn`` must be picklable (a module-level function or a functools.partial
    of one).  With one worker, or a single item, everything runs inline.
    """
    items = list(items)
    workers = default_workers() if workers is None else int(workers)
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
