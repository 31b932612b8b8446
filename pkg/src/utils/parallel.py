"""Order-preserving parallel map for scan grids and ensemble blocks."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(func: Callable[[T], R], items: Iterable[T], threads: int = 1) -> List[R]:
    """
    Apply func to every item and return results in input order.

    Results never depend on the worker count: each item is evaluated
    independently and any reduction is left to the caller, in list order.

    Args:
        func: Pure function of one item
        items: Work items
        threads: Worker count; 1 evaluates inline

    Returns:
        List of results aligned with items
    """
    work = list(items)
    if threads <= 1 or len(work) <= 1:
        return [func(item) for item in work]

    workers = min(threads, len(work))
    logger.debug("[Parallel] %d items on %d threads", len(work), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, work))
