"""Optional thread fan-out for independent checks.

``CONFORMAL_WORKBENCH_THREADS`` unset or ``1`` runs serially, ``0`` uses
one worker per CPU, any other positive integer caps the pool.  Results are
always returned in input order, so reports do not depend on scheduling.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

T = TypeVar("T")
U = TypeVar("U")

ENV_VAR = "CONFORMAL_WORKBENCH_THREADS"


def worker_count() -> int:
    raw = os.environ.get(ENV_VAR, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        return 1
    if n == 0:
        return os.cpu_count() or 1
    return max(n, 1)


def ordered_map(fn: Callable[[T], U], items: Iterable[T]) -> List[U]:
    items = list(items)
    n = worker_count()
    if n <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
