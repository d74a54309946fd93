"""
Table Writer for ICF Series

Writes an IcfSeries as a plot-ready table. Both formats share one schema:

    step, time, mean_re, se_re, mean_im, se_im, exact_re, exact_im, analytic_re, analytic_im

CSV leaves disabled values empty; JSON stores them as null and adds the run
configuration and seed next to the rows. Files are written to a temporary file
in the target directory and moved into place, so a failed run never leaves a
partial table behind.

Functions:
    emit_table: Writes a series to CSV or JSON
    read_table: Reads an emitted table back into a DataFrame
"""

# Standard library imports
import json
import math
import os
from tempfile import mkstemp
from typing import Any, Dict, Optional

# Third-party imports
import pandas as pd

# Local imports
from icf_series import COLUMNS, IcfSeries

SCHEMA = "icf-series/1"
FORMATS = ("csv", "json")


def _clean(value: Any) -> Any:
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


def _json_text(frame: pd.DataFrame, config: Optional[Dict[str, Any]], seed: Optional[int]) -> str:
    rows = []
    for record in frame.to_dict(orient="records"):
        row = {}
        for name in COLUMNS:
            value = record[name]
            row[name] = int(value) if name == "step" else _clean(float(value))
        rows.append(row)
    document = {"schema": SCHEMA, "seed": seed, "config": config or {}, "rows": rows}
    return json.dumps(document, indent=2, allow_nan=False) + "\n"


def emit_table(series: IcfSeries, path: str, fmt: str = "csv",
               config: Optional[Dict[str, Any]] = None, seed: Optional[int] = None) -> str:
    """
    Writes `series` to `path`.

    Parameters
    ----------
    series : IcfSeries
        The rescaled series with any oracle columns attached
    path : str
        Output file
    fmt : str
        "csv" or "json"
    config : dict, optional
        Run configuration echoed into the JSON document
    seed : int, optional
        Run seed echoed into the JSON document

    Returns
    -------
    str
        The path written

    Raises
    ------
    ValueError
        For an unknown format
    OSError
        If the file cannot be written
    """
    if fmt not in FORMATS:
        raise ValueError(f"Unknown table format {fmt!r}; expected one of {FORMATS}.")
    frame = series.to_frame()
    directory = os.path.dirname(os.path.abspath(path))
    handle, tmp = mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(handle, "w", newline="") as file:
            if fmt == "csv":
                frame.to_csv(file, index=False, na_rep="", float_format="%.17g")
            else:
                file.write(_json_text(frame, config, seed))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    return path


def read_table(path: str) -> pd.DataFrame:
    """Reads a CSV or JSON table written by emit_table, columns in schema order."""
    if path.endswith(".json"):
        with open(path) as file:
            document = json.load(file)
        frame = pd.DataFrame.from_records(document["rows"], columns=list(COLUMNS))
    else:
        frame = pd.read_csv(path)
    if list(frame.columns) != list(COLUMNS):
        raise ValueError(f"{path} does not follow the table schema: {list(frame.columns)}")
    return frame.astype({c: "float64" for c in COLUMNS if c != "step"})
