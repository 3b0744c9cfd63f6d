"""Dense factors over discrete variables and the algebra used by inference.

A factor holds its axes as strictly increasing *global* variable indices
(positions in the owning network's declaration order) and its values as a
C-contiguous float64 ndarray whose shape lists one cardinality per axis.
Keeping axes sorted makes the union of two scopes a linear merge and lets
the numpy path broadcast without transposes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend


@dataclass(frozen=True)
class Factor:
    axes: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        if list(self.axes) != sorted(set(self.axes)):
            raise ValueError(f"factor axes must be strictly increasing, got {self.axes}")
        if self.values.ndim != len(self.axes):
            raise ValueError("factor rank does not match axis count")

    @property
    def cards(self) -> tuple[int, ...]:
        return self.values.shape


def scalar(value: float) -> Factor:
    return Factor((), np.asarray(value, dtype=np.float64))


def _contig(values: np.ndarray) -> np.ndarray:
    # ascontiguousarray promotes 0-d to 1-d; keep the true shape.
    return np.ascontiguousarray(values).reshape(values.shape)


def _c_strides(shape: tuple[int, ...]) -> list[int]:
    strides = [0] * len(shape)
    acc = 1
    for j in range(len(shape) - 1, -1, -1):
        strides[j] = acc
        acc *= shape[j]
    return strides


def product(a: Factor, b: Factor) -> Factor:
    """Pointwise product on the union of the two scopes."""
    if not a.axes:
        return Factor(b.axes, b.values * float(a.values))
    if not b.axes:
        return Factor(a.axes, a.values * float(b.values))
    union = tuple(sorted(set(a.axes) | set(b.axes)))
    if backend.active_backend() == backend.NUMBA:
        return _product_numba(a, b, union)
    return _product_numpy(a, b, union)


def _product_numpy(a: Factor, b: Factor, union: tuple[int, ...]) -> Factor:
    # Insert size-1 axes where a scope is missing a union variable, then
    # let broadcasting do the outer product.
    idx_a = tuple(slice(None) if v in a.axes else None for v in union)
    idx_b = tuple(slice(None) if v in b.axes else None for v in union)
    values = a.values[idx_a] * b.values[idx_b]
    return Factor(union, _contig(values))


def _product_numba(a: Factor, b: Factor, union: tuple[int, ...]) -> Factor:
    cards = []
    a_pos = {v: i for i, v in enumerate(a.axes)}
    b_pos = {v: i for i, v in enumerate(b.axes)}
    for v in union:
        cards.append(a.cards[a_pos[v]] if v in a_pos else b.cards[b_pos[v]])
    sa = _c_strides(a.cards)
    sb = _c_strides(b.cards)
    a_strides = np.array([sa[a_pos[v]] if v in a_pos else 0 for v in union], dtype=np.int64)
    b_strides = np.array([sb[b_pos[v]] if v in b_pos else 0 for v in union], dtype=np.int64)
    cards_arr = np.array(cards, dtype=np.int64)
    flat = backend.product_flat(a.values.reshape(-1), a_strides,
                                b.values.reshape(-1), b_strides, cards_arr)
    return Factor(union, flat.reshape(tuple(cards)))


def sum_out(f: Factor, var: int) -> Factor:
    """Marginalize one variable out of the factor's scope."""
    pos = f.axes.index(var)
    kept = f.axes[:pos] + f.axes[pos + 1:]
    if backend.active_backend() == backend.NUMBA:
        in_strides = _c_strides(f.cards)
        out_shape = f.cards[:pos] + f.cards[pos + 1:]
        out_strides = _c_strides(out_shape)
        keep_strides = np.zeros(len(f.axes), dtype=np.int64)
        k = 0
        for j in range(len(f.axes)):
            if j != pos:
                keep_strides[j] = out_strides[k]
                k += 1
        cards_arr = np.array(f.cards, dtype=np.int64)
        out_size = int(np.prod(out_shape)) if out_shape else 1
        flat = backend.sum_out_flat(f.values.reshape(-1), cards_arr, keep_strides, out_size)
        return Factor(kept, flat.reshape(out_shape))
    return Factor(kept, _contig(f.values.sum(axis=pos)))


def reduce_state(f: Factor, var: int, state_idx: int) -> Factor:
    """Condition on var = state, dropping the axis (hard evidence)."""
    pos = f.axes.index(var)
    kept = f.axes[:pos] + f.axes[pos + 1:]
    return Factor(kept, _contig(f.values.take(state_idx, axis=pos)))


def product_all(fs: list[Factor]) -> Factor:
    out = scalar(1.0)
    for f in fs:
        out = product(out, f)
    return out


def bucket_sum_out(fs: list[Factor], var: int) -> Factor:
    """Multiply a bucket of factors and sum ``var`` out of the result.

    On the numba backend the whole step runs as one fused kernel with no
    intermediate product array; the numpy path composes product_all and
    sum_out.
    """
    if backend.active_backend() != backend.NUMBA:
        return sum_out(product_all(fs), var)
    union: list[int] = sorted(set().union(*(set(f.axes) for f in fs)))
    cards: dict[int, int] = {}
    for f in fs:
        for a, c in zip(f.axes, f.cards):
            cards[a] = c
    kept = tuple(a for a in union if a != var)
    out_shape = tuple(cards[a] for a in kept)
    out_strides = _c_strides(out_shape)
    keep_map = {a: out_strides[i] for i, a in enumerate(kept)}
    keep_strides = np.array([keep_map.get(a, 0) for a in union], dtype=np.int64)

    vals = np.concatenate([f.values.reshape(-1) for f in fs])
    offsets = np.zeros(len(fs) + 1, dtype=np.int64)
    strides = np.zeros((len(fs), len(union)), dtype=np.int64)
    for fi, f in enumerate(fs):
        offsets[fi + 1] = offsets[fi] + f.values.size
        own = _c_strides(f.cards)
        pos = {a: own[i] for i, a in enumerate(f.axes)}
        for j, a in enumerate(union):
            strides[fi, j] = pos.get(a, 0)

    cards_arr = np.array([cards[a] for a in union], dtype=np.int64)
    out_size = int(np.prod(out_shape)) if out_shape else 1
    flat = backend.bucket_sum_flat(vals, offsets, strides, cards_arr, keep_strides, out_size)
    return Factor(kept, flat.reshape(out_shape))
