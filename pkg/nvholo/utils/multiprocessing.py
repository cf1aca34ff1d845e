# -*- coding: utf-8 -*-
"""
Utilities related to multiprocessing.
"""
import logging
import multiprocessing
from typing import Callable, Iterable, List

from tqdm import tqdm

logger = logging.getLogger(__name__)


def get_n_pool(pool):
    """Determine the number of processes in a multiprocessing pool.

    Parameters
    ----------
    pool : object
        Multiprocessing pool or similar.

    Returns
    -------
    int or None
        Number of processes. Returns None if number could not be determined.
    """
    try:
        n_pool = pool._processes
    except AttributeError:
        n_pool = None
        logger.warning(
            "Could not determine number of processes in pool of type: "
            f"{type(pool)}."
        )
    return n_pool


def map_in_order(
    func: Callable,
    items: Iterable,
    n_pool: int = None,
    progress: bool = False,
    desc: str = None,
) -> List:
    """Apply a function to every item and return the results in input order.

    Parameters
    ----------
    func : Callable
        Function to apply. Must be picklable if ``n_pool`` is used.
    items : Iterable
        Inputs.
    n_pool : int, optional
        Number of processes. If not specified or 1, the items are processed
        serially in the current process.
    progress : bool
        Show a progress bar.
    desc : str, optional
        Description for the progress bar.
    """
    items = list(items)
    if not n_pool or n_pool == 1 or len(items) < 2:
        return [
            func(item) for item in tqdm(items, desc=desc, disable=not progress)
        ]
    with multiprocessing.Pool(processes=n_pool) as pool:
        logger.info(f"Running {len(items)} tasks on {get_n_pool(pool)} processes")
        return list(
            tqdm(
                pool.imap(func, items),
                total=len(items),
                desc=desc,
                disable=not progress,
            )
        )
