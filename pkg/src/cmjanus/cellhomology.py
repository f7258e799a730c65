"""Borel-Moore cellular chains of the contingency cell decomposition.

Cells are contingency matrices; the cell of M has real dimension sum(shape).
The boundary of a cell is the signed sum of its elementary contractions.
"""

from __future__ import annotations

from . import contmatrix as cm
from .exactla import ChainComplex, Mat
from .grocat import TruncatedCategory


def incidence_sign(m, nu, i):
    """Sign of the face contract(m, nu, i) in the boundary of m.

    Each factor R^{d_nu}_< contributes the simplicial sign (-1)^i, shifted by
    the dimensions of the factors before it. For p = 2 this is (-1)^i for
    direction 1 and (-1)^(d_1 + i) for direction 2.
    """
    before = sum(m.shape[: nu - 1])
    return -1 if (i + before) % 2 else 1


class CellComplexModel:
    def __init__(self, spec, n, p=2, cutoff=None):
        if cutoff is None:
            cutoff = cm.default_cutoff(spec, n, p)
        if len(cutoff) != p:
            raise ValueError("cutoff must have one entry per direction")
        self.category = TruncatedCategory(spec, n, cutoff)
        self.cells = {}
        for m in self.category.objects:
            self.cells.setdefault(m.dim, []).append(m)
        self.position = {m: k for cells in self.cells.values() for k, m in enumerate(cells)}

    def cell_counts(self):
        return {d: len(c) for d, c in sorted(self.cells.items())}

    def boundary_matrix(self, d):
        """Matrix of the boundary from dimension d to dimension d - 1."""
        src = self.cells.get(d, [])
        tgt = self.cells.get(d - 1, [])
        entries = []
        for col, m in enumerate(src):
            for nu, size in enumerate(m.shape, start=1):
                for i in range(size - 1):
                    face = cm.contract(m, nu, i)
                    entries.append((self.position[face], col, incidence_sign(m, nu, i)))
        return Mat.from_entries(len(tgt), len(src), entries)

    def chain_complex(self):
        """Chains placed in degree -d so the boundary raises degree."""
        dims = {-d: len(c) for d, c in self.cells.items()}
        diffs = {-d: self.boundary_matrix(d) for d in self.cells if d - 1 in self.cells}
        return ChainComplex(dims, diffs).check()

    def homology(self):
        """{dimension: rank of BM homology}."""
        h = self.chain_complex().homology_dims()
        return {-q: r for q, r in sorted(h.items(), reverse=True)}

    def euler_characteristic(self):
        return sum((-1) ** (d % 2) * len(c) for d, c in self.cells.items())


def bm_homology(spec, n, p=2, cutoff=None):
    return CellComplexModel(spec, n, p, cutoff).homology()
