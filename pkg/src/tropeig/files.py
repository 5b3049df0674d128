"""Input file parsing for the command-line front end.

Matrix formats:

* json-dense: a JSON array of rows; entries are numbers or [re, im].
* csv-dense: comma-separated rows of numbers or "a+bi" strings.
* coordinate: whitespace-separated "row col re im" lines, 1-indexed;
  duplicates are rejected and the size is the largest index seen.

Polynomial files are JSON arrays, index 0 first; complex entries as
[re, im] pairs; in max-plus mode, coefficients are log-domain numbers
with -inf spelled as the string "-inf".
"""

import json
from pathlib import Path

import numpy as np

from .trop_poly import coeffs_from_json, complex_coeffs_from_json


class ParseError(ValueError):
    pass


def _parse_complex_token(token):
    token = token.strip().replace(" ", "")
    if not token:
        raise ParseError("empty entry")
    normalized = token.replace("i", "j")
    try:
        return complex(normalized)
    except ValueError as err:
        raise ParseError(f"cannot parse complex entry {token!r}") from err


def _matrix_from_json_data(data):
    if not isinstance(data, list) or not data:
        raise ParseError("expected a nonempty JSON array of rows")
    rows = []
    for row in data:
        if not isinstance(row, list):
            raise ParseError("expected a JSON array of rows")
        rows.append([_entry_from_json(entry) for entry in row])
    out = np.array(rows, dtype=complex)
    if out.ndim != 2 or out.shape[0] != out.shape[1]:
        raise ParseError(f"matrix must be square, got shape {out.shape}")
    return out


def _entry_from_json(entry):
    if isinstance(entry, (int, float)):
        return complex(entry)
    if isinstance(entry, list) and len(entry) == 2:
        return complex(float(entry[0]), float(entry[1]))
    if isinstance(entry, str):
        return _parse_complex_token(entry)
    raise ParseError(f"unrecognized matrix entry: {entry!r}")


def _matrix_from_csv(text):
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([_parse_complex_token(tok) for tok in line.split(",")])
    if not rows:
        raise ParseError("no rows found")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ParseError("ragged rows in CSV matrix")
    out = np.array(rows, dtype=complex)
    if out.shape[0] != out.shape[1]:
        raise ParseError(f"matrix must be square, got shape {out.shape}")
    return out


def _matrix_from_coordinates(text):
    entries = {}
    size = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 4:
            raise ParseError(
                f"line {lineno}: expected 'row col re im', got {line!r}"
            )
        i, j = int(fields[0]), int(fields[1])
        if i < 1 or j < 1:
            raise ParseError(f"line {lineno}: coordinates are 1-indexed")
        if (i, j) in entries:
            raise ParseError(f"line {lineno}: duplicate coordinate ({i}, {j})")
        entries[(i, j)] = complex(float(fields[2]), float(fields[3]))
        size = max(size, i, j)
    if not entries:
        raise ParseError("no entries found")
    out = np.zeros((size, size), dtype=complex)
    for (i, j), value in entries.items():
        out[i - 1, j - 1] = value
    return out


def load_matrix(path, fmt=None):
    """Load a square complex matrix; the format is sniffed unless given.

    fmt: one of "json-dense", "csv-dense", "coordinate", or None.
    """
    text = Path(path).read_text()
    if fmt is None:
        stripped = text.lstrip()
        if stripped.startswith("["):
            fmt = "json-dense"
        else:
            first = next(
                (ln for ln in text.splitlines()
                 if ln.strip() and not ln.strip().startswith("#")),
                "",
            )
            fields = first.split()
            fmt = "coordinate" if len(fields) == 4 and "," not in first else "csv-dense"
    if fmt == "json-dense":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as err:
            raise ParseError(f"invalid JSON: {err}") from err
        return _matrix_from_json_data(data)
    if fmt == "csv-dense":
        return _matrix_from_csv(text)
    if fmt == "coordinate":
        return _matrix_from_coordinates(text)
    raise ParseError(f"unknown matrix format {fmt!r}")


def load_polynomial(path, max_plus=False):
    """Load polynomial coefficients from a JSON array file.

    Returns a TropicalPolynomial in max-plus mode, else a complex
    coefficient ndarray.
    """
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(f"invalid JSON: {err}") from err
    if not isinstance(data, list):
        raise ParseError("expected a JSON array of coefficients")
    try:
        if max_plus:
            return coeffs_from_json(data)
        return complex_coeffs_from_json(data)
    except ValueError as err:
        raise ParseError(str(err)) from err
