"""JSON state files.

Layout::

    {"format_version": "1",
     "dims": [dA, dB],
     "matrix": [[[re, im], ...], ...]}

Entries are written with 17 significant digits, so a save/load cycle
reproduces every double exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .bipartite import BipartiteDims, DensityOperator
from .errors import RangeDimError, ValidationError

FORMAT_VERSION = "1"


def _num(x: float) -> str:
    return format(float(x), ".17g")


def dumps_state(rho3: DensityOperator) -> str:
    rows = []
    for row in rho3.matrix:
        rows.append("    [" + ", ".join(f"[{_num(z.real)}, {_num(z.imag)}]" for z in row) + "]")
    return (
        "{\n"
        f'  "format_version": "{FORMAT_VERSION}",\n'
        f'  "dims": [{rho3.dims.dimA}, {rho3.dims.dimB}],\n'
        '  "matrix": [\n' + ",\n".join(rows) + "\n  ]\n}\n"
    )


def loads_state(text: str) -> DensityOperator:
    """Parse and validate a state document; raises :class:`ValidationError`."""
    try:
        # parse_int=float keeps the sign of entries written as "-0"
        doc = json.loads(text, parse_int=float)
    except json.JSONDecodeError as exc:
        raise ValidationError("format", f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ValidationError("format", "top level must be an object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValidationError("format", f"unsupported format_version {doc.get('format_version')!r}")
    dims = doc.get("dims")
    if (not isinstance(dims, list) or len(dims) != 2
            or not all(isinstance(d, float) and d.is_integer() and d >= 1 for d in dims)):
        raise ValidationError("format", f"dims must be two naturals, got {dims!r}")
    try:
        dims = BipartiteDims(int(dims[0]), int(dims[1]))
    except RangeDimError as exc:
        raise ValidationError("format", str(exc)) from None
    try:
        arr = np.array(doc.get("matrix"), dtype=float)
    except (TypeError, ValueError):
        raise ValidationError("format", "matrix must be a rectangular array of [re, im] pairs") from None
    n = dims.total
    if arr.shape != (n, n, 2):
        raise ValidationError("shape", f"matrix must be {n}x{n} of [re, im], got shape {arr.shape}")
    # viewing the [re, im] pairs keeps signed zeros that re + 1j*im would lose
    return DensityOperator(dims, np.ascontiguousarray(arr).view(np.complex128)[..., 0])


def save_state(rho3: DensityOperator, path) -> None:
    Path(path).write_text(dumps_state(rho3))


def load_state(path) -> DensityOperator:
    return loads_state(Path(path).read_text())
