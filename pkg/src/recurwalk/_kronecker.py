"""Exact 2D convolution of non-negative integer grids by Kronecker substitution.

Each grid is packed into one big integer, ``sum c[i, j] << bits*(i*W + j)``,
with a row pitch ``W`` wide enough that the column index of the product never
wraps. One GMP multiplication then yields every output coefficient, and the
slot width guarantees no carries cross slots.
"""
from __future__ import annotations

import gmpy2
import numpy as np


def _pack(grid: np.ndarray, pitch: int, nbytes: int) -> gmpy2.mpz:
    pad = bytes(nbytes * (pitch - grid.shape[1]))
    parts = []
    for row in grid:
        parts.extend(int(c).to_bytes(nbytes, "little") for c in row)
        parts.append(pad)
    return gmpy2.mpz(int.from_bytes(b"".join(parts), "little"))


def _unpack(value: gmpy2.mpz, count: int, nbytes: int) -> list:
    raw = int(value).to_bytes(count * nbytes, "little")
    view = memoryview(raw)
    return [int.from_bytes(view[k:k + nbytes], "little")
            for k in range(0, count * nbytes, nbytes)]


def convolve_grids(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Full 2D convolution of two object grids of non-negative Python ints."""
    ha, wa = a.shape
    hb, wb = b.shape
    h, w = ha + hb - 1, wa + wb - 1
    bound = sum(int(v) for v in a.flat) * sum(int(v) for v in b.flat)
    nbytes = max(1, (bound.bit_length() + 7) // 8)
    product = _pack(a, w, nbytes) * _pack(b, w, nbytes)
    flat = _unpack(product, h * w, nbytes)
    out = np.empty(h * w, dtype=object)
    out[:] = flat
    return out.reshape(h, w)
