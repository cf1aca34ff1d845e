# -*- coding: utf-8 -*-
"""
General utilities for nvholo.
"""
from .expressions import (
    evaluate,
    evaluate_real,
    format_operator,
    parse_amplitudes,
    parse_operator,
)
from .io import (
    NvholoJSONEncoder,
    is_jsonable,
    save_dict_to_hdf5,
    save_to_json,
    write_csv,
)
from .logging import setup_logger
from .multiprocessing import get_n_pool, map_in_order


__all__ = [
    "NvholoJSONEncoder",
    "evaluate",
    "evaluate_real",
    "format_operator",
    "get_n_pool",
    "is_jsonable",
    "map_in_order",
    "parse_amplitudes",
    "parse_operator",
    "save_dict_to_hdf5",
    "save_to_json",
    "setup_logger",
    "write_csv",
]
