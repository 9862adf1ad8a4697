"""Exact Atiyah-class computations for Lie pairs and infinitesimal ideal systems."""

import json

from ._core import (
    InputError,
    InternalError,
    Poly,
    catalog_input,
    catalog_names,
    kernel_basis,
    linear_solve,
    search_nonvanishing_pair,
)
from ._core import run_task as _run_task

__all__ = [
    "InputError",
    "InternalError",
    "Poly",
    "catalog_input",
    "catalog_names",
    "kernel_basis",
    "linear_solve",
    "run",
    "run_task",
    "search_nonvanishing_pair",
]


def run_task(task, document, degree_bound=None):
    """Run a CLI task in-process. `document` is a JSON string or a dict.

    Returns (exit_code, report_json_text).
    """
    if not isinstance(document, str):
        document = json.dumps(document)
    return _run_task(task, document, degree_bound)


def run(task, document, degree_bound=None):
    """Like run_task, with the report decoded into a dict."""
    code, text = run_task(task, document, degree_bound)
    return code, json.loads(text)
