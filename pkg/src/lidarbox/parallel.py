"""Frame-level worker pool. Results always come back in input order."""

import typing as t
from multiprocessing import Pool

from lidarbox import logger
from lidarbox.helpers import resolve_workers

T = t.TypeVar("T")
R = t.TypeVar("R")


def ordered_map(func: t.Callable[[T], R], items: t.Iterable[T], workers: int | None = None) -> list[R]:
    """Apply `func` to every item across a process pool

    Args:
        func (t.Callable): Picklable, module level callable.
        items (t.Iterable): Work items.
        workers (int, optional): Pool size. Defaults to `DEFAULT_WORKERS`.

    Returns:
        list: `func(item)` for every item, in input order
    """
    items = list(items)
    workers = min(resolve_workers(workers), len(items))

    # There is no need to spin up processes for a single item
    if workers <= 1:
        return [func(item) for item in items]

    logger.debug(f"Mapping {func.__name__} over {len(items)} items with {workers} workers")
    with Pool(processes=workers) as pool:
        return list(pool.imap(func, items))
