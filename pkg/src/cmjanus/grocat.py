"""Arrows of the Grothendieck construction over contingency matrices.

An arrow M -> N is a tuple of monotone surjections, one per direction,
each given as the tuple of 0-based target indices of the source slices.
Arrows only ever merge slices, so the target is computed from the source.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from . import contmatrix as cm
from .contmatrix import ContMatrix


class ArrowError(ValueError):
    pass


def identity_surj(d):
    return tuple(range(d))


@lru_cache(maxsize=None)
def surjections(d, e):
    """All monotone surjections {0..d-1} -> {0..e-1}."""
    if e < 1 or e > d:
        return ()
    out = []
    # choose the e-1 cut positions among the d-1 gaps
    for cuts in itertools.combinations(range(1, d), e - 1):
        s, t = [], 0
        cutset = set(cuts)
        for k in range(d):
            if k in cutset:
                t += 1
            s.append(t)
        out.append(tuple(s))
    return tuple(out)


def is_monotone_surjection(s):
    if not s or s[0] != 0:
        return False
    return all(b - a in (0, 1) for a, b in zip(s, s[1:]))


def compose_surj(outer, inner):
    return tuple(outer[k] for k in inner)


def elementary_surj(d, i):
    return tuple(k if k <= i else k - 1 for k in range(d))


def apply_surjs(m, surjs):
    out = m
    for nu, s in enumerate(surjs, start=1):
        if s != identity_surj(len(s)):
            out = cm.merge_blocks(out, nu, s)
    return out


@dataclass(frozen=True)
class GroArrow:
    source: ContMatrix
    surjs: tuple
    target: ContMatrix = field(compare=False, hash=False, repr=False, default=None)

    def __post_init__(self):
        surjs = tuple(tuple(s) for s in self.surjs)
        if len(surjs) != self.source.p:
            raise ArrowError("one surjection per direction is required")
        for s, d in zip(surjs, self.source.shape):
            if len(s) != d or not is_monotone_surjection(s):
                raise ArrowError(f"{s} is not a monotone surjection from {d} slices")
        object.__setattr__(self, "surjs", surjs)
        object.__setattr__(self, "target", apply_surjs(self.source, surjs))

    @property
    def reldim(self):
        return self.source.dim - self.target.dim

    def is_identity(self):
        return all(s == identity_surj(len(s)) for s in self.surjs)

    def directions(self):
        """Directions in which this arrow merges something."""
        return [nu for nu, s in enumerate(self.surjs, start=1) if s != identity_surj(len(s))]

    def in_direction(self, nu):
        """True when the arrow lives in the subcategory for direction nu."""
        return all(d == nu for d in self.directions())

    def to_json(self):
        return {"source": self.source.to_json(), "surjections": [list(s) for s in self.surjs]}

    @classmethod
    def from_json(cls, spec, obj):
        return cls(ContMatrix.from_json(spec, obj["source"]), tuple(tuple(s) for s in obj["surjections"]))

    def __repr__(self):
        return f"Arrow({self.source!r} -> {self.target!r} via {self.surjs})"


def identity(m):
    return GroArrow(m, tuple(identity_surj(d) for d in m.shape))


def elementary(m, nu, i):
    surjs = [identity_surj(d) for d in m.shape]
    surjs[nu - 1] = elementary_surj(m.shape[nu - 1], i)
    return GroArrow(m, tuple(surjs))


def elementary_arrows(m):
    """All (nu, i, arrow) for elementary contractions out of m."""
    out = []
    for nu, d in enumerate(m.shape, start=1):
        for i in range(d - 1):
            out.append((nu, i, elementary(m, nu, i)))
    return out


def compose(g, f):
    """g o f (first f, then g)."""
    if f.target != g.source:
        raise ArrowError("arrows are not composable")
    return GroArrow(f.source, tuple(compose_surj(sg, sf) for sg, sf in zip(g.surjs, f.surjs)))


def hom_set(m, n):
    if m.p != n.p or m.spec != n.spec:
        return []
    choices = [surjections(d, e) for d, e in zip(m.shape, n.shape)]
    out = []
    for surjs in itertools.product(*choices):
        if apply_surjs(m, surjs) == n:
            out.append(GroArrow(m, surjs))
    return out


def split(f):
    """Factor f as (direction-1 part, rest) with f = rest o first."""
    first = list(identity_surj(d) for d in f.source.shape)
    first[0] = f.surjs[0]
    a = GroArrow(f.source, tuple(first))
    rest = list(identity_surj(d) for d in a.target.shape)
    rest[1:] = f.surjs[1:]
    b = GroArrow(a.target, tuple(rest))
    return a, b


def split_vertical_first(f):
    """Factor f = horizontal o vertical (p = 2)."""
    first = [identity_surj(f.source.shape[0]), f.surjs[1]]
    a = GroArrow(f.source, tuple(first))
    b = GroArrow(a.target, (f.surjs[0], identity_surj(a.target.shape[1])))
    return a, b


def factor_steps(f):
    """One factorization of f into elementary steps: list of (nu, i) in order."""
    steps = []
    cur = list(f.surjs)
    for nu in range(1, f.source.p + 1):
        s = list(cur[nu - 1])
        # merge left to right: repeatedly contract the first adjacent equal pair
        while True:
            k = next((k for k in range(len(s) - 1) if s[k] == s[k + 1]), None)
            if k is None:
                break
            steps.append((nu, k))
            s = s[:k + 1] + s[k + 2:]
    return steps


def is_anodyne_elementary(m, nu, i):
    return cm.is_anodyne_elementary(m, nu, i)


@lru_cache(maxsize=None)
def _anodyne(source, surjs):
    if all(s == identity_surj(len(s)) for s in surjs):
        return True
    for nu, s in enumerate(surjs, start=1):
        for k in range(len(s) - 1):
            if s[k] != s[k + 1] or not cm.is_anodyne_elementary(source, nu, k):
                continue
            nxt = cm.contract(source, nu, k)
            rest = list(surjs)
            rest[nu - 1] = s[:k + 1] + s[k + 2:]
            if _anodyne(nxt, tuple(rest)):
                return True
    return False


def is_anodyne(f):
    """True iff some factorization into elementary steps is anodyne at every step."""
    return _anodyne(f.source, f.surjs)


# -- anodyne equivalence classes ---------------------------------------------


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb, key=ContMatrix.sort_key)] = min(ra, rb, key=ContMatrix.sort_key)


def equivalence_classes(matrices, mode="full"):
    """Partition generated by anodyne arrows among the given matrices.

    mode: "full", "horizontal" (direction 1 only) or "vertical" (direction 2 only).
    Returns a sorted list of sorted tuples.
    """
    allowed = {"full": None, "horizontal": 1, "vertical": 2}
    if mode not in allowed:
        raise ValueError(f"unknown mode {mode!r}")
    only = allowed[mode]
    items = set(matrices)
    uf = _UnionFind(items)
    for m in items:
        for nu, d in enumerate(m.shape, start=1):
            if only is not None and nu != only:
                continue
            for i in range(d - 1):
                if cm.is_anodyne_elementary(m, nu, i):
                    t = cm.contract(m, nu, i)
                    if t in items:
                        uf.union(m, t)
    groups = {}
    for m in items:
        groups.setdefault(uf.find(m), []).append(m)
    classes = [tuple(sorted(g, key=ContMatrix.sort_key)) for g in groups.values()]
    classes.sort(key=lambda c: c[0].sort_key())
    return classes


def fnf_key(m):
    """Second margin plus, per direction-2 slice, the nonzero entries read along direction 1."""
    spec = m.spec
    arr = m.array()
    seqs = tuple(
        tuple(x for x in arr[:, j] if not spec.is_zero(x)) for j in range(m.shape[1])
    )
    return (cm.margin(m, 2).entries, seqs)


def multiset_key(m):
    return cm.nonzero_partition(m)


def group_by(matrices, key):
    groups = {}
    for m in matrices:
        groups.setdefault(key(m), []).append(m)
    classes = [tuple(sorted(g, key=ContMatrix.sort_key)) for g in groups.values()]
    classes.sort(key=lambda c: c[0].sort_key())
    return classes


# -- mixed forks ------------------------------------------------------------------


@dataclass(frozen=True)
class MixedFork:
    """A direction-1 arrow and a direction-2 arrow with a common target."""

    horizontal: GroArrow  # M' -> N'
    vertical: GroArrow    # N  -> N'

    def __post_init__(self):
        if not self.horizontal.in_direction(1) or not self.vertical.in_direction(2):
            raise ArrowError("fork legs must be horizontal and vertical respectively")
        if self.horizontal.target != self.vertical.target:
            raise ArrowError("fork legs must share their target")


@dataclass(frozen=True)
class SupSquare:
    apex: ContMatrix
    to_vertical_source: GroArrow    # M -> N, horizontal
    to_horizontal_source: GroArrow  # M -> M', vertical


def sup(fork):
    """All M completing the fork to a commutative square, via the decomposition oracle."""
    hsurj = fork.horizontal.surjs[0]
    vsurj = fork.vertical.surjs[1]
    mp = fork.horizontal.source  # M'
    n = fork.vertical.source      # N
    spec = mp.spec
    rows, cols = mp.shape[0], n.shape[1]
    # entry (i, j') of M' spreads over the columns j with vsurj[j] == j'
    blocks = [[j for j in range(cols) if vsurj[j] == jp] for jp in range(mp.shape[1])]
    cells = []
    for i in range(rows):
        for jp, js in enumerate(blocks):
            cells.append((i, js, spec.sequences(mp[(i, jp)], len(js))))
    out = []
    for choice in itertools.product(*(c[2] for c in cells)):
        grid = [[None] * cols for _ in range(rows)]
        for (i, js, _), vals in zip(cells, choice):
            for j, v in zip(js, vals):
                grid[i][j] = v
        flat = tuple(x for row in grid for x in row)
        cand = cm._from_flat_unchecked(spec, (rows, cols), flat)
        if cm.merge_blocks(cand, 1, hsurj) != n:
            continue
        m = ContMatrix(spec, (rows, cols), flat)
        out.append(SupSquare(
            m,
            GroArrow(m, (hsurj, identity_surj(cols))),
            GroArrow(m, (identity_surj(rows), vsurj)),
        ))
    out.sort(key=lambda sq: sq.apex.sort_key())
    return out


def sup_bruteforce(fork):
    """Reference enumeration over every matrix of the forced shape."""
    mp, n = fork.horizontal.source, fork.vertical.source
    spec = mp.spec
    total = cm.content(mp)
    lower = spec.elements_leq(total)
    rows, cols = mp.shape[0], n.shape[1]
    out = []
    for flat in itertools.product(lower, repeat=rows * cols):
        try:
            m = ContMatrix(spec, (rows, cols), flat)
        except cm.MatrixError:
            continue
        if cm.merge_blocks(m, 2, fork.vertical.surjs[1]) == mp and cm.merge_blocks(m, 1, fork.horizontal.surjs[0]) == n:
            out.append(m)
    out.sort(key=ContMatrix.sort_key)
    return out


# -- truncated categories ------------------------------------------------------------


class TruncatedCategory:
    """All matrices of a fixed content with shape bounded by a cutoff, and their arrows."""

    def __init__(self, spec, n, cutoff):
        self.spec = spec
        self.n = n
        self.cutoff = tuple(cutoff)
        if any(c < 1 for c in self.cutoff):
            raise ValueError("cutoff dims must be positive")
        self.objects = cm.enumerate_all(spec, n, self.cutoff)
        self.index = {m: k for k, m in enumerate(self.objects)}
        self._into = {}

    @property
    def p(self):
        return len(self.cutoff)

    def __contains__(self, m):
        return m in self.index

    def __len__(self):
        return len(self.objects)

    def elementary_out(self, m):
        return elementary_arrows(m)

    def arrows_into(self, m):
        """All arrows N -> m with N in the category."""
        got = self._into.get(m)
        if got is None:
            got = []
            for src in self.objects:
                if all(a >= b for a, b in zip(src.shape, m.shape)):
                    got.extend(hom_set(src, m))
            got.sort(key=lambda f: (f.reldim, f.source.sort_key(), f.surjs))
            self._into[m] = got
        return got

    def arrows(self):
        for m in self.objects:
            yield from self.arrows_into(m)

    def mixed_forks(self):
        """Every fork M' -> N' <- N with a horizontal and a vertical leg (p = 2)."""
        for mid in self.objects:
            into = self.arrows_into(mid)
            hs = [f for f in into if f.in_direction(1)]
            vs = [f for f in into if f.in_direction(2)]
            for h in hs:
                for v in vs:
                    yield MixedFork(h, v)

    def transposed(self):
        return TruncatedCategory(self.spec, self.n, tuple(reversed(self.cutoff)))


def transpose_arrow(f):
    if f.source.p != 2:
        raise ArrowError("transpose needs p = 2")
    return GroArrow(cm.transpose(f.source), (f.surjs[1], f.surjs[0]))


def direct_sum_arrow(f, g):
    """f (+) g acting blockwise on the block-diagonal sum of the sources."""
    a = f.surjs
    b = g.surjs
    off = [a[0][-1] + 1, a[1][-1] + 1]
    surjs = (
        a[0] + tuple(x + off[0] for x in b[0]),
        a[1] + tuple(x + off[1] for x in b[1]),
    )
    return GroArrow(cm.block_sum(f.source, g.source), surjs)


def bfs_reachable(m):
    """Every target reachable from m (for small sanity checks)."""
    seen = {m}
    queue = deque([m])
    while queue:
        x = queue.popleft()
        for _, _, e in elementary_arrows(x):
            if e.target not in seen:
                seen.add(e.target)
                queue.append(e.target)
    return seen
