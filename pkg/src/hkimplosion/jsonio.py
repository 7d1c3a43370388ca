"""JSON encoding: complex numbers as ``[re, im]`` pairs, matrices row-major."""

from __future__ import annotations

import json

import numpy as np

from .errors import PreconditionError


def _clean(x: float) -> float:
    x = float(x)
    return 0.0 if x == 0 else x


def encode(obj):
    """Recursively convert numpy/complex values into JSON-ready lists."""
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return encode_complex(obj)
        if obj.dtype == bool:
            return obj.tolist()
        if np.issubdtype(obj.dtype, np.integer):
            return obj.tolist()
        return [encode(x) for x in obj] if obj.ndim else _clean(obj)
    if isinstance(obj, complex | np.complexfloating):
        return [_clean(obj.real), _clean(obj.imag)]
    if isinstance(obj, np.floating | float):
        return _clean(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, list | tuple):
        return [encode(x) for x in obj]
    if isinstance(obj, frozenset | set):
        return sorted(encode(x) for x in obj)
    return obj


def encode_complex(arr) -> list:
    arr = np.asarray(arr, dtype=complex)
    if arr.ndim == 0:
        return [_clean(arr.real), _clean(arr.imag)]
    return [encode_complex(x) for x in arr]


def decode_complex(obj, ndim: int) -> np.ndarray:
    """Parse a complex array of dimension ``ndim``; plain reals are accepted."""
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError):
        raise PreconditionError("malformed numeric array", code="schema") from None
    if arr.ndim == ndim + 1 and arr.shape[-1] == 2:
        return arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim == ndim:
        return arr.astype(complex)
    raise PreconditionError(f"expected a complex array of dimension {ndim}", code="schema")


def dumps(obj) -> str:
    return json.dumps(encode(obj), sort_keys=True, indent=2)
