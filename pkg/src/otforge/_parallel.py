import os
from concurrent.futures import ThreadPoolExecutor

ENV_VAR = "OTFORGE_THREADS"


def thread_count() -> int:
    raw = os.environ.get(ENV_VAR, "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def pmap(fn, items):
    """Order-preserving map; runs on up to OTFORGE_THREADS worker threads."""
    items = list(items)
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def chunked(seq, parts: int):
    seq = list(seq)
    size = max(1, -(-len(seq) // max(1, parts)))
    return [seq[i:i + size] for i in range(0, len(seq), size)]
