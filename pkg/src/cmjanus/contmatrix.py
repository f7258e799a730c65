"""Contingency matrices: p-dimensional arrays over a monoid with no zero slice.

Directions are numbered 1..p. For p = 2, direction 1 is the real axis and
direction 2 the imaginary one. Entries are stored flat in row-major order
(last index varies fastest).
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .monoid import MonoidSpec


class MatrixError(ValueError):
    pass


@dataclass(frozen=True)
class ContMatrix:
    spec: MonoidSpec
    shape: tuple
    entries: tuple

    def __post_init__(self):
        shape = tuple(int(d) for d in self.shape)
        if not shape or any(d < 1 for d in shape):
            raise MatrixError(f"bad shape {self.shape}")
        if len(self.entries) != math.prod(shape):
            raise MatrixError("entry count does not match shape")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "entries", tuple(self.entries))
        arr = self.array()
        for nu in range(len(shape)):
            for s in _slices(arr, nu + 1):
                if all(self.spec.is_zero(x) for x in s):
                    raise MatrixError(f"zero slice in direction {nu + 1}")

    # -- basic views ----------------------------------------------------------

    @property
    def p(self):
        return len(self.shape)

    @property
    def dim(self):
        """Real dimension of the cell: sum of the dims."""
        return sum(self.shape)

    def array(self):
        return _obj_array(self.entries, self.shape)

    def __getitem__(self, idx):
        flat = 0
        for i, d in zip(idx, self.shape):
            flat = flat * d + i
        return self.entries[flat]

    def nnz(self):
        return sum(1 for x in self.entries if not self.spec.is_zero(x))

    def sort_key(self):
        return (self.shape, tuple(self.spec.weight(x) for x in self.entries))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        body = [self.spec.element_to_json(x) for x in self.entries]
        return f"CM{self.shape}{body}"

    def to_json(self):
        return {
            "shape": list(self.shape),
            "entries": [self.spec.element_to_json(x) for x in self.entries],
        }

    @classmethod
    def from_json(cls, spec, obj):
        shape = tuple(int(d) for d in obj["shape"])
        entries = tuple(spec.element_from_json(x) for x in obj["entries"])
        return cls(spec, shape, entries)

    @classmethod
    def from_nested(cls, spec, rows):
        """Build from a nested list of scalars; the outer index is direction 1.

        Vector-valued (free) entries should go through ``from_json``.
        """
        arr = np.array(rows, dtype=object)
        return cls(spec, arr.shape, tuple(int(x) for x in arr.flat))


def _from_array_unchecked(spec, arr):
    m = object.__new__(ContMatrix)
    object.__setattr__(m, "spec", spec)
    object.__setattr__(m, "shape", tuple(arr.shape))
    object.__setattr__(m, "entries", tuple(arr.flat))
    return m


def content(m):
    return m.spec.total(m.entries)


def _slices(arr, nu):
    """2-d view: row k lists the entries of the k-th slice in direction nu."""
    return np.moveaxis(arr, nu - 1, 0).reshape(arr.shape[nu - 1], -1)


def slice_sum(m, nu, idx):
    """Monoid sum of the idx-th slice (0-based) in direction nu (1-based)."""
    return m.spec.total(_slices(m.array(), nu)[idx])


def margin(m, nu):
    """Vector of slice sums in direction nu, as a 1-dimensional matrix."""
    sums = tuple(slice_sum(m, nu, k) for k in range(m.shape[nu - 1]))
    return ContMatrix(m.spec, (len(sums),), sums)


@lru_cache(maxsize=None)
def merge_blocks(m, nu, surj):
    """Sum slices in direction nu along a monotone surjection (list of target indices)."""
    arr = m.array()
    rows = _slices(arr, nu)
    size = surj[-1] + 1
    add = m.spec.add
    out = np.empty((size, rows.shape[1]), dtype=object)
    for t in range(size):
        block = [rows[k] for k, tk in enumerate(surj) if tk == t]
        for c in range(rows.shape[1]):
            acc = block[0][c]
            for b in block[1:]:
                acc = add(acc, b[c])
            out[t, c] = acc
    rest = np.moveaxis(arr, nu - 1, 0).shape[1:]
    res = np.moveaxis(out.reshape((size,) + rest), 0, nu - 1)
    return _from_array_unchecked(m.spec, res)


@lru_cache(maxsize=None)
def contract(m, nu, i):
    """Merge slices i+1 and i+2 (1-based) in direction nu; i is 0-based."""
    if not 1 <= nu <= m.p:
        raise MatrixError(f"direction {nu} out of range")
    d = m.shape[nu - 1]
    if not 0 <= i <= d - 2:
        raise MatrixError(f"contraction index {i} out of range for size {d}")
    surj = tuple(k if k <= i else k - 1 for k in range(d))
    return merge_blocks(m, nu, surj)


def is_anodyne_elementary(m, nu, i):
    rows = _slices(m.array(), nu)
    z = m.spec.is_zero
    return all(z(a) or z(b) for a, b in zip(rows[i], rows[i + 1]))


def transpose(m):
    if m.p != 2:
        raise MatrixError("transpose needs a 2-dimensional matrix")
    return _from_array_unchecked(m.spec, m.array().T.copy())


def nonzero_partition(m):
    """Sorted tuple of nonzero entries (a multiset)."""
    spec = m.spec
    return tuple(sorted((x for x in m.entries if not spec.is_zero(x)), key=spec.weight))


def _obj_array(flat, shape):
    a = np.empty(len(flat), dtype=object)
    for k, x in enumerate(flat):
        a[k] = x
    return a.reshape(shape)


def _no_zero_slice(spec, flat, shape):
    arr = _obj_array(flat, shape)
    for nu in range(len(shape)):
        for s in _slices(arr, nu + 1):
            if all(spec.is_zero(x) for x in s):
                return False
    return True


@lru_cache(maxsize=None)
def enumerate_shape(spec, n, shape):
    """All contingency matrices of the given shape and content, canonically ordered."""
    shape = tuple(shape)
    if spec.is_zero(n):
        raise MatrixError("content must be nonzero")
    out = []
    for flat in spec.sequences(n, math.prod(shape)):
        if _no_zero_slice(spec, flat, shape):
            out.append(_from_flat_unchecked(spec, shape, flat))
    out.sort(key=ContMatrix.sort_key)
    return tuple(out)


def _from_flat_unchecked(spec, shape, flat):
    m = object.__new__(ContMatrix)
    object.__setattr__(m, "spec", spec)
    object.__setattr__(m, "shape", shape)
    object.__setattr__(m, "entries", tuple(flat))
    return m


def shapes_upto(cutoff):
    return list(itertools.product(*(range(1, c + 1) for c in cutoff)))


def enumerate_all(spec, n, cutoff):
    """All contingency matrices of content n with shape bounded by cutoff."""
    out = []
    for shape in shapes_upto(cutoff):
        out.extend(enumerate_shape(spec, n, shape))
    out.sort(key=ContMatrix.sort_key)
    return out


def default_cutoff(spec, n, p):
    """For nat the number of slices is bounded by n itself."""
    if spec.kind == "nat":
        return (n,) * p
    if spec.kind == "free":
        return (sum(n),) * p
    raise MatrixError("truth-valued contents need an explicit cutoff")


def block_sum(a, b):
    """Block-diagonal direct sum of two 2-dimensional matrices."""
    if a.p != 2 or b.p != 2:
        raise MatrixError("block sums are defined for 2-dimensional matrices")
    spec = a.spec
    r, s = a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]
    arr = np.empty((r, s), dtype=object)
    for idx in np.ndindex(r, s):
        arr[idx] = spec.zero()
    arr[: a.shape[0], : a.shape[1]] = a.array()
    arr[a.shape[0]:, a.shape[1]:] = b.array()
    return _from_array_unchecked(spec, arr)


def nonzero_counts(ms):
    return Counter(nonzero_partition(m) for m in ms)
