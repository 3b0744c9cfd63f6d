"""Kernel backend selection: numba-jitted loops or pure numpy.

The hot path of variable elimination is "multiply every factor in a bucket,
then sum one variable out". The numba backend fuses that whole step into a
single cache-friendly loop (odometer indexing, no intermediate arrays); the
numpy backend composes broadcast products with axis reductions.

The active backend is chosen by the ``DXPROBE_BACKEND`` environment variable
(``numba`` or ``numpy``). Default is ``numba`` when importable, otherwise
numpy. ``set_backend`` switches at runtime (tests and the benchmark do).
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore[misc]
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


NUMPY = "numpy"
NUMBA = "numba"


def _initial_backend() -> str:
    requested = os.environ.get("DXPROBE_BACKEND", "").strip().lower()
    if requested in (NUMPY, NUMBA):
        if requested == NUMBA and not HAS_NUMBA:
            raise ImportError("DXPROBE_BACKEND=numba but numba is not installed")
        return requested
    if requested:
        raise ValueError(f"DXPROBE_BACKEND must be 'numpy' or 'numba', got {requested!r}")
    return NUMBA if HAS_NUMBA else NUMPY


_active = _initial_backend()


def active_backend() -> str:
    """Name of the backend used for factor kernels."""
    return _active


def set_backend(name: str) -> None:
    """Switch kernels at runtime. Raises if numba is requested but missing."""
    global _active
    if name not in (NUMPY, NUMBA):
        raise ValueError(f"unknown backend {name!r}")
    if name == NUMBA and not HAS_NUMBA:
        raise ImportError("numba backend requested but numba is not installed")
    _active = name


@njit(cache=True)
def _product_kernel(out, cards, a_vals, a_strides, b_vals, b_strides):  # pragma: no cover
    n_axes = cards.shape[0]
    digits = np.zeros(n_axes, np.int64)
    ia = 0
    ib = 0
    for i in range(out.shape[0]):
        out[i] = a_vals[ia] * b_vals[ib]
        for j in range(n_axes - 1, -1, -1):
            digits[j] += 1
            ia += a_strides[j]
            ib += b_strides[j]
            if digits[j] < cards[j]:
                break
            digits[j] = 0
            ia -= a_strides[j] * cards[j]
            ib -= b_strides[j] * cards[j]


@njit(cache=True)
def _sum_out_kernel(out, vals, cards, keep_strides):  # pragma: no cover
    n_axes = cards.shape[0]
    digits = np.zeros(n_axes, np.int64)
    io = 0
    for i in range(vals.shape[0]):
        out[io] += vals[i]
        for j in range(n_axes - 1, -1, -1):
            digits[j] += 1
            io += keep_strides[j]
            if digits[j] < cards[j]:
                break
            digits[j] = 0
            io -= keep_strides[j] * cards[j]


@njit(cache=True)
def _bucket_sum_kernel(out, cards, vals, offsets, strides, keep_strides):  # pragma: no cover
    # out[keep-index] += prod_f vals[f at full-index], walking the union
    # domain once with per-factor odometer offsets.
    n_axes = cards.shape[0]
    n_factors = offsets.shape[0] - 1
    digits = np.zeros(n_axes, np.int64)
    pos = np.zeros(n_factors, np.int64)
    total = 1
    for j in range(n_axes):
        total *= cards[j]
    io = 0
    for _ in range(total):
        p = 1.0
        for f in range(n_factors):
            p *= vals[offsets[f] + pos[f]]
        out[io] += p
        for j in range(n_axes - 1, -1, -1):
            digits[j] += 1
            io += keep_strides[j]
            for f in range(n_factors):
                pos[f] += strides[f, j]
            if digits[j] < cards[j]:
                break
            digits[j] = 0
            io -= keep_strides[j] * cards[j]
            for f in range(n_factors):
                pos[f] -= strides[f, j] * cards[j]


def product_flat(a_vals: np.ndarray, a_strides: np.ndarray,
                 b_vals: np.ndarray, b_strides: np.ndarray,
                 cards: np.ndarray) -> np.ndarray:
    """Pointwise product over the union domain, all arrays flat C-order.

    ``*_strides[j]`` is the element stride of union axis j inside the input
    (0 when the input does not contain that axis).
    """
    out = np.empty(int(np.prod(cards)), dtype=np.float64)
    _product_kernel(out, cards, a_vals, a_strides, b_vals, b_strides)
    return out


def sum_out_flat(vals: np.ndarray, cards: np.ndarray,
                 keep_strides: np.ndarray, out_size: int) -> np.ndarray:
    """Sum ``vals`` onto the kept axes; summed axes have keep stride 0."""
    out = np.zeros(out_size, dtype=np.float64)
    _sum_out_kernel(out, vals, cards, keep_strides)
    return out


def bucket_sum_flat(vals: np.ndarray, offsets: np.ndarray, strides: np.ndarray,
                    cards: np.ndarray, keep_strides: np.ndarray,
                    out_size: int) -> np.ndarray:
    """Fused product-of-factors + marginalization over the union domain.

    ``vals`` concatenates every factor's flat values; ``offsets`` delimits
    them; ``strides[f, j]`` is factor f's element stride along union axis j
    (0 where absent); axes with ``keep_strides`` 0 are summed out.
    """
    out = np.zeros(out_size, dtype=np.float64)
    _bucket_sum_kernel(out, cards, vals, offsets, strides, keep_strides)
    return out


def warmup() -> None:
    """Force JIT compilation of the kernels on toy inputs.

    Call once before timing anything; with ``cache=True`` the compiled
    kernels persist across processes.
    """
    if not HAS_NUMBA:
        return
    cards = np.array([2, 2], dtype=np.int64)
    a = np.array([0.5, 0.5, 0.25, 0.75], dtype=np.float64)
    s = np.array([2, 1], dtype=np.int64)
    product_flat(a, s, a, s, cards)
    sum_out_flat(a, cards, np.array([1, 0], dtype=np.int64), 2)
    bucket_sum_flat(
        np.concatenate([a, a]),
        np.array([0, 4, 8], dtype=np.int64),
        np.array([[2, 1], [2, 1]], dtype=np.int64),
        cards,
        np.array([1, 0], dtype=np.int64),
        2,
    )
