import os
from concurrent.futures import ThreadPoolExecutor

ENV_THREADS = "PAULTRAP_THREADS"


def worker_count() -> int:
    n = os.cpu_count() or 1
    cap = os.environ.get(ENV_THREADS)
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return max(1, n)


def pmap(fn, items):
    """Ordered map over ``items`` using up to :func:`worker_count` threads."""
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
