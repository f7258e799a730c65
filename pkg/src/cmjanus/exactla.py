"""Exact linear algebra over Q: sparse matrices, ranks, chain complexes.

Matrices act on column vectors, so a map V -> W has shape (dim W, dim V).
Entries are ints or Fractions; nothing here ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

MODULUS = 32003


class ComplexError(ValueError):
    pass


def _scalar(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else x
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        return _scalar(Fraction(x))
    raise TypeError(f"not an exact scalar: {x!r}")


class Mat:
    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows, cols, data=None):
        self.rows = rows
        self.cols = cols
        self.data = {}
        if data:
            for r, row in data.items():
                clean = {c: v for c, v in row.items() if v}
                if clean:
                    self.data[r] = clean

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def from_dense(cls, rows, cols=None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        data = {}
        for i, r in enumerate(rows):
            if len(r) != cols:
                raise ValueError("ragged matrix")
            data[i] = {j: _scalar(v) for j, v in enumerate(r)}
        return cls(len(rows), cols, data)

    @classmethod
    def from_entries(cls, rows, cols, entries):
        """entries: iterable of (r, c, value); repeated positions are summed."""
        data = {}
        for r, c, v in entries:
            row = data.setdefault(r, {})
            row[c] = row.get(c, 0) + v
        return cls(rows, cols, data)

    # -- views ----------------------------------------------------------------

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, rc):
        r, c = rc
        return self.data.get(r, {}).get(c, 0)

    def to_dense(self):
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, row in self.data.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    def nnz(self):
        return sum(len(r) for r in self.data.values())

    def is_zero(self):
        return not self.data

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __repr__(self):
        return f"Mat({self.rows}x{self.cols}, {self.to_dense()})"

    # -- arithmetic -----------------------------------------------------------

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = {}
        odata = other.data
        for r, row in self.data.items():
            acc = {}
            for k, a in row.items():
                orow = odata.get(k)
                if orow:
                    for c, b in orow.items():
                        acc[c] = acc.get(c, 0) + a * b
            if acc:
                out[r] = acc
        return Mat(self.rows, other.cols, out)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch in sum")
        out = {r: dict(row) for r, row in self.data.items()}
        for r, row in other.data.items():
            acc = out.setdefault(r, {})
            for c, v in row.items():
                acc[c] = acc.get(c, 0) + v
        return Mat(self.rows, self.cols, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        k = _scalar(k)
        if k == 0:
            return Mat(self.rows, self.cols)
        return Mat(self.rows, self.cols, {r: {c: k * v for c, v in row.items()} for r, row in self.data.items()})

    @property
    def T(self):
        out = {}
        for r, row in self.data.items():
            for c, v in row.items():
                out.setdefault(c, {})[r] = v
        return Mat(self.cols, self.rows, out)

    def kron(self, other):
        """Tensor product; basis of V (x) W is ordered with V outer."""
        out = {}
        for r1, row1 in self.data.items():
            for r2, row2 in other.data.items():
                acc = out.setdefault(r1 * other.rows + r2, {})
                for c1, a in row1.items():
                    for c2, b in row2.items():
                        acc[c1 * other.cols + c2] = a * b
        return Mat(self.rows * other.rows, self.cols * other.cols, out)

    def rank(self, modulus=None):
        return rank(self, modulus)

    def inverse(self):
        return inverse(self)


# -- elimination -------------------------------------------------------------


def _primitive(row):
    """Scale an integer row so its entries are coprime with positive lead."""
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g not in (0, 1):
        row = {c: v // g for c, v in row.items()}
    return row


def _integer_rows(m):
    """Rows scaled to integers (row scaling preserves rank)."""
    out = []
    for row in m.data.values():
        den = 1
        for v in row.values():
            if isinstance(v, Fraction):
                den = den * v.denominator // gcd(den, v.denominator)
        out.append({c: int(v * den) for c, v in row.items()})
    return out


def bareiss_rank(dense):
    """Rank of a dense integer matrix by Bareiss fraction-free elimination."""
    a = [list(r) for r in dense]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    prev = 1
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        for i in range(r + 1, rows):
            a[i] = [(a[r][c] * a[i][k] - a[i][c] * a[r][k]) // prev for k in range(cols)]
        prev = a[r][c]
        r += 1
        if r == rows:
            break
    return r


def rank(m, modulus=None):
    """Exact rank by incremental fraction-free row echelon form.

    Small matrices go through dense Bareiss elimination; larger sparse ones
    use a gcd-normalized row echelon form that keeps fill-in low.

    With ``modulus`` the elimination runs in Z/p instead (a lower bound for the
    rational rank, equal to it for all but finitely many p).
    """
    if m.rows == 0 or m.cols == 0 or not m.data:
        return 0
    # eliminate along the smaller side
    if m.rows > m.cols:
        m = m.T
    rows = _integer_rows(m)
    if not modulus and m.rows * m.cols <= 400:
        dense = [[0] * m.cols for _ in rows]
        for d, row in zip(dense, rows):
            for c, v in row.items():
                d[c] = v
        return bareiss_rank(dense)
    rows.sort(key=len)
    if modulus:
        return _rank_mod(rows, modulus)
    pivots = {}
    for row in rows:
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                pivots[c] = _primitive(row)
                break
            a, b = piv[c], row[c]
            g = gcd(a, b)
            fa, fb = a // g, b // g
            new = {k: fa * v for k, v in row.items()}
            for k, v in piv.items():
                w = new.get(k, 0) - fb * v
                if w:
                    new[k] = w
                else:
                    new.pop(k, None)
            row = _primitive(new) if new else new
    return len(pivots)


def _rank_mod(rows, p):
    pivots = {}
    for row in rows:
        row = {c: v % p for c, v in row.items() if v % p}
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                inv = pow(row[c], -1, p)
                pivots[c] = {k: v * inv % p for k, v in row.items()}
                break
            f = row[c]
            for k, v in piv.items():
                w = (row.get(k, 0) - f * v) % p
                if w:
                    row[k] = w
                else:
                    row.pop(k, None)
    return len(pivots)


def _rref(dense):
    """Reduced row echelon form over Q (dense, in place); returns pivot columns."""
    rows = len(dense)
    cols = len(dense[0]) if rows else 0
    pivcols = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if dense[i][c] != 0), None)
        if pr is None:
            continue
        dense[r], dense[pr] = dense[pr], dense[r]
        inv = Fraction(1) / dense[r][c]
        dense[r] = [v * inv for v in dense[r]]
        for i in range(rows):
            if i != r and dense[i][c] != 0:
                f = dense[i][c]
                dense[i] = [a - f * b for a, b in zip(dense[i], dense[r])]
        pivcols.append(c)
        r += 1
        if r == rows:
            break
    return pivcols


def inverse(m):
    if m.rows != m.cols:
        raise ValueError("only square matrices can be inverted")
    n = m.rows
    dense = m.to_dense()
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(dense)]
    piv = _rref(aug)
    if [c for c in piv if c < n] != list(range(n)):
        raise ValueError("matrix is singular")
    return Mat.from_dense([[_scalar(v) for v in row[n:]] for row in aug], n)


def is_invertible(m):
    return m.rows == m.cols and rank(m) == m.rows


def nullspace(m):
    """Basis of the kernel, as the columns of the returned matrix."""
    dense = [[Fraction(v) for v in row] for row in m.to_dense()]
    piv = _rref(dense) if dense else []
    free = [c for c in range(m.cols) if c not in piv]
    basis = []
    for f in free:
        vec = [Fraction(0)] * m.cols
        vec[f] = Fraction(1)
        for i, c in enumerate(piv):
            vec[c] = -dense[i][f]
        basis.append(vec)
    return Mat.from_dense([[_scalar(b[r]) for b in basis] for r in range(m.cols)], len(basis))


def solve(a, b):
    """Return x with a @ x == b, raising if no solution exists."""
    n = a.cols
    aug = [[Fraction(v) for v in ra] + [Fraction(v) for v in rb] for ra, rb in zip(a.to_dense(), b.to_dense())]
    piv = _rref(aug)
    if any(c >= n for c in piv):
        raise ValueError("inconsistent linear system")
    x = [[0] * b.cols for _ in range(n)]
    for i, c in enumerate(piv):
        x[c] = [_scalar(v) for v in aug[i][n:]]
    return Mat.from_dense(x, b.cols)


# -- block assembly ------------------------------------------------------------


def offsets(sizes):
    out, acc = [], 0
    for s in sizes:
        out.append(acc)
        acc += s
    return out, acc


def assemble(row_sizes, col_sizes, blocks):
    """Block matrix from {(row_block, col_block): Mat}."""
    ro, rows = offsets(row_sizes)
    co, cols = offsets(col_sizes)
    data = {}
    for (i, j), blk in blocks.items():
        if blk.shape != (row_sizes[i], col_sizes[j]):
            raise ValueError(f"block {(i, j)} has shape {blk.shape}")
        for r, row in blk.data.items():
            acc = data.setdefault(ro[i] + r, {})
            for c, v in row.items():
                k = co[j] + c
                acc[k] = acc.get(k, 0) + v
    return Mat(rows, cols, data)


def block(m, row_range, col_range):
    r0, r1 = row_range
    c0, c1 = col_range
    data = {}
    for r, row in m.data.items():
        if r0 <= r < r1:
            sub = {c - c0: v for c, v in row.items() if c0 <= c < c1}
            if sub:
                data[r - r0] = sub
    return Mat(r1 - r0, c1 - c0, data)


# -- chain complexes -------------------------------------------------------------


class ChainComplex:
    """Cohomologically graded: d[q] maps degree q to degree q + 1."""

    def __init__(self, dims, diffs=None):
        self.dims = {q: n for q, n in dims.items() if n}
        self.d = {}
        for q, m in (diffs or {}).items():
            if m.shape != (self.dim(q + 1), self.dim(q)):
                raise ComplexError(f"differential in degree {q} has shape {m.shape}")
            if not m.is_zero():
                self.d[q] = m

    def dim(self, q):
        return self.dims.get(q, 0)

    def diff(self, q):
        return self.d.get(q) or Mat(self.dim(q + 1), self.dim(q))

    def degrees(self):
        return sorted(self.dims)

    def total_dim(self):
        return sum(self.dims.values())

    def check(self):
        """Raise with the offending degree if d o d != 0."""
        for q in self.d:
            if q + 1 in self.d and not (self.d[q + 1] @ self.d[q]).is_zero():
                raise ComplexError(f"d o d != 0 starting in degree {q}")
        return self

    def is_complex(self):
        try:
            self.check()
            return True
        except ComplexError:
            return False

    def homology_dims(self, modulus=None):
        self.check()
        ranks = {q: rank(m, modulus) for q, m in self.d.items()}
        out = {}
        for q, n in self.dims.items():
            h = n - ranks.get(q, 0) - ranks.get(q - 1, 0)
            if h:
                out[q] = h
        return out

    def euler_characteristic(self):
        return sum((-1) ** (q % 2) * n for q, n in self.dims.items())

    def is_acyclic(self, modulus=None):
        return not self.homology_dims(modulus)

    def shift(self, k):
        """C[k]: degree q of the result is degree q + k of self (sign (-1)^k on d)."""
        s = (-1) ** (k % 2)
        return ChainComplex(
            {q - k: n for q, n in self.dims.items()},
            {q - k: m.scale(s) for q, m in self.d.items()},
        )

    def dual(self):
        """Degreewise dual: degree -q holds the dual of degree q, maps transposed."""
        return ChainComplex(
            {-q: n for q, n in self.dims.items()},
            {-q - 1: m.T for q, m in self.d.items()},
        )

    def to_json(self):
        return {
            "dims": {str(q): n for q, n in sorted(self.dims.items())},
            "differentials": {str(q): mat_to_json(m) for q, m in sorted(self.d.items())},
        }

    @classmethod
    def from_json(cls, obj):
        dims = {int(q): int(n) for q, n in obj.get("dims", {}).items()}
        diffs = {int(q): mat_from_json(m) for q, m in obj.get("differentials", {}).items()}
        return cls(dims, diffs)

    def __repr__(self):
        return f"ChainComplex({dict(sorted(self.dims.items()))})"


def zero_complex():
    return ChainComplex({})


def concentrated(dim, degree=0):
    return ChainComplex({degree: dim})


class ChainMap:
    """Degreewise maps source -> target."""

    def __init__(self, source, target, maps):
        self.source = source
        self.target = target
        self.maps = {}
        for q, m in maps.items():
            if m.shape != (target.dim(q), source.dim(q)):
                raise ComplexError(f"chain map component {q} has shape {m.shape}")
            if not m.is_zero():
                self.maps[q] = m

    def at(self, q):
        return self.maps.get(q) or Mat(self.target.dim(q), self.source.dim(q))

    def check(self):
        degs = set(self.source.dims) | set(self.target.dims)
        for q in degs:
            lhs = self.target.diff(q) @ self.at(q)
            rhs = self.at(q + 1) @ self.source.diff(q)
            if lhs != rhs:
                raise ComplexError(f"not a chain map in degree {q}")
        return self

    def compose_after(self, other):
        """self o other."""
        degs = set(other.source.dims)
        return ChainMap(other.source, self.target, {q: self.at(q) @ other.at(q) for q in degs})

    def __eq__(self, other):
        degs = set(self.source.dims) | set(self.target.dims)
        return all(self.at(q) == other.at(q) for q in degs)

    def transpose(self):
        """Dual map between dual complexes (target* -> source*)."""
        return ChainMap(self.target.dual(), self.source.dual(), {-q: m.T for q, m in self.maps.items()})

    def is_quasi_iso(self, modulus=None):
        return cone(self).is_acyclic(modulus)


def identity_map(c):
    return ChainMap(c, c, {q: Mat.identity(n) for q, n in c.dims.items()})


def cone(f):
    """Mapping cone: degree q is A^{q+1} + B^q, d = [[-dA, 0], [f, dB]]."""
    a, b = f.source, f.target
    degs = {q - 1 for q in a.dims} | set(b.dims)
    dims = {q: a.dim(q + 1) + b.dim(q) for q in degs}
    diffs = {}
    for q in degs:
        if q + 1 not in dims:
            continue
        rows = [a.dim(q + 2), b.dim(q + 1)]
        cols = [a.dim(q + 1), b.dim(q)]
        diffs[q] = assemble(rows, cols, {
            (0, 0): -a.diff(q + 1),
            (1, 0): f.at(q + 1),
            (1, 1): b.diff(q),
        })
    return ChainComplex(dims, diffs)


def total_complex(dims, horizontal, vertical, check=True):
    """Totalize a double complex with commuting squares.

    dims: {(i, j): n}; horizontal[(i, j)]: (i, j) -> (i + 1, j);
    vertical[(i, j)]: (i, j) -> (i, j + 1). The total differential is
    h + (-1)^i v, placed in degree i + j.
    """
    def dim(i, j):
        return dims.get((i, j), 0)

    def h(i, j):
        return horizontal.get((i, j)) or Mat(dim(i + 1, j), dim(i, j))

    def v(i, j):
        return vertical.get((i, j)) or Mat(dim(i, j + 1), dim(i, j))

    if check:
        for (i, j) in dims:
            if v(i + 1, j) @ h(i, j) != h(i, j + 1) @ v(i, j):
                raise ComplexError(f"square at {(i, j)} does not commute")
    by_deg = {}
    for (i, j), n in sorted(dims.items()):
        if n:
            by_deg.setdefault(i + j, []).append((i, j))
    tdims = {q: sum(dims[c] for c in cells) for q, cells in by_deg.items()}
    diffs = {}
    for q, cells in by_deg.items():
        targets = by_deg.get(q + 1)
        if not targets:
            continue
        tindex = {c: k for k, c in enumerate(targets)}
        blocks = {}
        for k, (i, j) in enumerate(cells):
            if (i + 1, j) in tindex:
                blocks[(tindex[(i + 1, j)], k)] = h(i, j)
            if (i, j + 1) in tindex:
                blocks[(tindex[(i, j + 1)], k)] = v(i, j).scale((-1) ** (i % 2))
        diffs[q] = assemble([dims[c] for c in targets], [dims[c] for c in cells], blocks)
    return ChainComplex(tdims, diffs)


# -- JSON ----------------------------------------------------------------------


def scalar_to_json(v):
    return v if isinstance(v, int) else str(v)


def mat_to_json(m):
    return {"shape": [m.rows, m.cols], "rows": [[scalar_to_json(v) for v in r] for r in m.to_dense()]}


def mat_from_json(obj):
    if isinstance(obj, dict):
        rows, cols = obj["shape"]
        return Mat.from_dense(obj["rows"], cols) if rows else Mat(0, cols)
    return Mat.from_dense(obj)
