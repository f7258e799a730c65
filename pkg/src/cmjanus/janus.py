"""Janus data and their Cousin complexes.

A Janus datum E on a truncated p = 2 category stores

* E(M) as a dimension,
* dh[(M, i)]: E(contract(M, 1, i)) -> E(M)   (contravariant in direction 1),
* dv[(M, j)]: E(M) -> E(contract(M, 2, j))   (covariant in direction 2).

Values on composite arrows are products along any factorization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import contmatrix as cm
from . import grocat as gc
from .exactla import (
    ChainComplex,
    ChainMap,
    Mat,
    assemble,
    block,
    is_invertible,
    mat_from_json,
    mat_to_json,
    offsets,
)
from .grocat import GroArrow, TruncatedCategory
from .monoid import MonoidSpec
from .sheafrep import VComplexFunctor, costalk, quotient


class JanusError(ValueError):
    pass


def _sign(i):
    return -1 if i % 2 else 1


class JanusData:
    def __init__(self, category, dims, dh, dv):
        if category.p != 2:
            raise JanusError("Janus data live on 2-dimensional matrices")
        self.category = category
        self.dims = {m: d for m, d in dims.items() if d}
        self.dh = dh
        self.dv = dv

    def dim(self, m):
        return self.dims.get(m, 0)

    def support(self):
        return [m for m in self.category.objects if m in self.dims]

    # elementary values, defaulting to zero maps

    def h(self, m, i):
        got = self.dh.get((m, i))
        if got is None:
            return Mat(self.dim(m), self.dim(cm.contract(m, 1, i)))
        return got

    def v(self, m, j):
        got = self.dv.get((m, j))
        if got is None:
            return Mat(self.dim(cm.contract(m, 2, j)), self.dim(m))
        return got

    def horizontal(self, f):
        """delta' of a direction-1 arrow f: N -> M, as a map E(M) -> E(N)."""
        if not f.in_direction(1):
            raise JanusError("not a horizontal arrow")
        cur = f.source
        result = Mat.identity(self.dim(cur))
        for _, i in gc.factor_steps(f):
            result = result @ self.h(cur, i)
            cur = cm.contract(cur, 1, i)
        return result

    def vertical(self, g):
        """delta'' of a direction-2 arrow g: N -> M, as a map E(N) -> E(M)."""
        if not g.in_direction(2):
            raise JanusError("not a vertical arrow")
        cur = g.source
        result = Mat.identity(self.dim(cur))
        for _, j in gc.factor_steps(g):
            result = self.v(cur, j) @ result
            cur = cm.contract(cur, 2, j)
        return result

    def copy(self):
        return JanusData(self.category, dict(self.dims), dict(self.dh), dict(self.dv))

    # -- JSON ------------------------------------------------------------------

    def to_json(self):
        cat = self.category
        out = {
            "monoid": cat.spec.to_json(),
            "content": cat.spec.element_to_json(cat.n),
            "cutoff": list(cat.cutoff),
            "objects": [{"matrix": m.to_json(), "dim": self.dim(m)} for m in cat.objects if self.dim(m)],
            "deltas_h": [],
            "deltas_v": [],
        }
        for key, store, nu in (("deltas_h", self.dh, 1), ("deltas_v", self.dv, 2)):
            for (m, i), mat in sorted(store.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1])):
                if mat.is_zero():
                    continue
                out[key].append({"arrow": gc.elementary(m, nu, i).to_json(), "matrix": mat_to_json(mat)})
        return out

    @classmethod
    def from_json(cls, obj):
        spec = MonoidSpec.from_json(obj["monoid"])
        n = spec.element_from_json(obj["content"])
        cat = TruncatedCategory(spec, n, tuple(obj["cutoff"]))
        dims = {}
        for rec in obj.get("objects", []):
            m = cm.ContMatrix.from_json(spec, rec["matrix"])
            if m not in cat:
                raise JanusError(f"object {m!r} lies outside the cutoff")
            dims[m] = int(rec["dim"])
        data = cls(cat, dims, {}, {})
        for key, store, nu in (("deltas_h", data.dh, 1), ("deltas_v", data.dv, 2)):
            for rec in obj.get(key, []):
                f = GroArrow.from_json(spec, rec["arrow"])
                steps = f.directions()
                if steps != [nu] or f.reldim != 1:
                    raise JanusError(f"{key} entries must be elementary direction-{nu} arrows")
                i = next(k for k, s in enumerate(f.surjs[nu - 1][:-1]) if s == f.surjs[nu - 1][k + 1])
                mat = mat_from_json(rec["matrix"])
                src, tgt = (f.target, f.source) if nu == 1 else (f.source, f.target)
                if mat.shape != (data.dim(tgt), data.dim(src)):
                    raise JanusError(f"map on {f!r} has shape {mat.shape}")
                store[(f.source, i)] = mat
        return data


# -- axioms --------------------------------------------------------------------------------


@dataclass
class JanusVerdict:
    js1: bool = True
    js2: bool = True
    js3: bool = True
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.js1 and self.js2 and self.js3

    def to_json(self):
        return {"js1": self.js1, "js2": self.js2, "js3": self.js3, "pass": self.ok, "witnesses": self.witnesses}


def fork_sides(E, fork):
    """(lhs, rhs) of the commutation relation for a mixed fork."""
    lhs = E.horizontal(fork.horizontal) @ E.vertical(fork.vertical)
    rhs = Mat(lhs.rows, lhs.cols)
    for sq in gc.sup(fork):
        rhs = rhs + E.vertical(sq.to_horizontal_source) @ E.horizontal(sq.to_vertical_source)
    return lhs, rhs


def check_js1(E):
    for m in E.category.objects:
        for nu in (1, 2):
            paths = {}
            for i in range(m.shape[nu - 1] - 1):
                e1 = gc.elementary(m, nu, i)
                mid = e1.target
                for k in range(mid.shape[nu - 1] - 1):
                    e2 = gc.elementary(mid, nu, k)
                    if nu == 1:
                        val = E.h(m, i) @ E.h(mid, k)
                    else:
                        val = E.v(mid, k) @ E.v(m, i)
                    paths.setdefault(gc.compose(e2, e1), []).append(((i, k), val))
            for comp, vals in paths.items():
                if any(val != vals[0][1] for _, val in vals[1:]):
                    return {"object": m.to_json(), "direction": nu, "paths": [list(p) for p, _ in vals]}
    return None


def check_js2(E, forks=None):
    for fork in forks if forks is not None else E.category.mixed_forks():
        lhs, rhs = fork_sides(E, fork)
        if lhs != rhs:
            return {"horizontal": fork.horizontal.to_json(), "vertical": fork.vertical.to_json()}
    return None


def check_js3(E):
    for m in E.category.objects:
        for nu, i, e in gc.elementary_arrows(m):
            if not cm.is_anodyne_elementary(m, nu, i):
                continue
            mat = E.h(m, i) if nu == 1 else E.v(m, i)
            if not is_invertible(mat):
                return {"arrow": e.to_json()}
    return None


def check_janus(E, forks=None):
    verdict = JanusVerdict()
    for name, fn in (("js1", check_js1), ("js2", lambda x: check_js2(x, forks)), ("js3", check_js3)):
        wit = fn(E)
        if wit is not None:
            setattr(verdict, name, False)
            verdict.witnesses[name] = wit
    return verdict


def _arrow_keys(f, kind):
    """Elementary (kind, object, index) keys used when evaluating a one-direction arrow."""
    cur, out = f.source, []
    for nu, i in gc.factor_steps(f):
        out.append((kind, cur, i))
        cur = cm.contract(cur, nu, i)
    return out


def fork_keys(fork):
    keys = set(_arrow_keys(fork.horizontal, "h")) | set(_arrow_keys(fork.vertical, "v"))
    for sq in gc.sup(fork):
        keys.update(_arrow_keys(sq.to_horizontal_source, "v"))
        keys.update(_arrow_keys(sq.to_vertical_source, "h"))
    return keys


def corrupt(E, key, amount=1):
    """Copy of E with ``amount`` added to entry (0, 0) of one elementary map."""
    kind, m, i = key
    out = E.copy()
    store = out.dh if kind == "h" else out.dv
    mat = E.h(m, i) if kind == "h" else E.v(m, i)
    store[(m, i)] = mat + Mat.from_entries(mat.rows, mat.cols, [(0, 0, amount)])
    return out


def mutation_scan(E, amount=1):
    """Corrupt each nonempty elementary map in turn; return the keys no axiom check notices.

    Only the relations that involve the corrupted map are re-evaluated.
    """
    cat = E.category
    by_key = {}
    for fork in cat.mixed_forks():
        for key in fork_keys(fork):
            by_key.setdefault(key, []).append(fork)
    missed = []
    for m in cat.objects:
        for nu, i, e in gc.elementary_arrows(m):
            kind = "h" if nu == 1 else "v"
            mat = E.h(m, i) if nu == 1 else E.v(m, i)
            if not mat.rows or not mat.cols:
                continue
            bad = corrupt(E, (kind, m, i), amount)
            near = {m, e.target} | {x.source for x in cat.arrows_into(m) if x.reldim == 1}
            local = _Restricted(bad, near)
            if check_js1(local) or check_js3(local) or check_js2(bad, by_key.get((kind, m, i), [])):
                continue
            missed.append((kind, m, i))
    return missed


class _Restricted:
    """View of Janus data whose category lists only some objects (for local checks)."""

    def __init__(self, E, objects):
        self._E = E
        self.category = type("C", (), {"objects": [x for x in E.category.objects if x in objects]})()

    def __getattr__(self, name):
        return getattr(self._E, name)


# -- Cousin complexes ------------------------------------------------------------------------


class CousinComplex(VComplexFunctor):
    """Functor whose value at M sums E(N) over vertical arrows N -> M.

    ``components[M][q]`` lists the (N, h) summands of degree q in order.
    """

    def __init__(self, category, values, maps, components):
        super().__init__(category, values, maps)
        self.components = components

    def block_range(self, m, q, key):
        comps = self.components[m].get(q, [])
        sizes = [self._size(n) for n, _ in comps]
        offs, _ = offsets(sizes)
        k = comps.index(key)
        return offs[k], offs[k] + sizes[k]

    def _size(self, n):
        return self.janus_dims.get(n, 0)


def _vertical_components(E, m):
    comps = {}
    for h in E.category.arrows_into(m):
        if h.in_direction(2) and E.dim(h.source):
            comps.setdefault(-h.source.shape[1], []).append((h.source, h))
    return comps


def cousin(E):
    cat = E.category
    components = {m: _vertical_components(E, m) for m in cat.objects}
    values = {}
    for m, comps in components.items():
        values[m] = _cousin_value(E, comps)
    maps = {}
    for m1 in cat.objects:
        for nu, i, g in gc.elementary_arrows(m1):
            maps[(m1, nu, i)] = _cousin_arrow(E, g, components, values)
    out = CousinComplex(cat, values, maps, components)
    out.janus_dims = dict(E.dims)
    return out


def _cousin_value(E, comps):
    dims = {q: sum(E.dim(n) for n, _ in c) for q, c in comps.items()}
    diffs = {}
    for q, src in comps.items():
        tgt = comps.get(q + 1)
        if not tgt:
            continue
        tindex = {c: k for k, c in enumerate(tgt)}
        blocks = {}
        for col, (n, h) in enumerate(src):
            for j in range(n.shape[1] - 1):
                h2 = quotient(h, 2, j)
                key = (cm.contract(n, 2, j), h2)
                if key not in tindex:
                    continue
                mat = E.v(n, j).scale(_sign(j))
                pos = (tindex[key], col)
                blocks[pos] = blocks[pos] + mat if pos in blocks else mat
        diffs[q] = assemble([E.dim(n) for n, _ in tgt], [E.dim(n) for n, _ in src], blocks)
    return ChainComplex(dims, diffs)


def _cousin_arrow(E, g, components, values):
    """Chain map C(target) -> C(source) for an elementary arrow g."""
    m1, m2 = g.source, g.target
    src_comps, tgt_comps = components[m2], components[m1]
    maps = {}
    for q, comps1 in tgt_comps.items():
        comps2 = src_comps.get(q, [])
        index2 = {c: k for k, c in enumerate(comps2)}
        blocks = {}
        for row, (n1, h1) in enumerate(comps1):
            comp = gc.compose(g, h1)
            first, rest = gc.split(comp)
            key = (first.target, rest)
            if key not in index2:
                continue
            blocks[(row, index2[key])] = E.horizontal(first)
        maps[q] = assemble([E.dim(n) for n, _ in comps1], [E.dim(n) for n, _ in comps2], blocks)
    return ChainMap(values[m2], values[m1], maps)


def vertical_dual(E):
    """D''E: the same functor, object complexes built from composites phi with g' o phi = g."""
    base = cousin(E)
    values = {}
    for m in E.category.objects:
        comps = base.components[m]
        dims = {q: sum(E.dim(n) for n, _ in c) for q, c in comps.items()}
        diffs = {}
        for q, src in comps.items():
            tgt = comps.get(q + 1)
            if not tgt:
                continue
            blocks = {}
            for col, (n, g) in enumerate(src):
                for row, (n1, g1) in enumerate(tgt):
                    for j in range(n.shape[1] - 1):
                        phi = gc.elementary(n, 2, j)
                        if phi.target == n1 and gc.compose(g1, phi) == g:
                            mat = E.v(n, j).scale(_sign(j))
                            blocks[(row, col)] = blocks[(row, col)] + mat if (row, col) in blocks else mat
            diffs[q] = assemble([E.dim(x) for x, _ in tgt], [E.dim(x) for x, _ in src], blocks)
        values[m] = ChainComplex(dims, diffs).check()
    out = CousinComplex(E.category, values, base.maps, base.components)
    out.janus_dims = dict(E.dims)
    return out


def double_vertical_dual(E, m, dual=None):
    """Total complex of D''D''E at m (vertical arrows only, base column d''_m)."""
    dual = dual or vertical_dual(E)
    arrows = [f for f in E.category.arrows_into(m) if f.in_direction(2)]
    return costalk(dual, m, arrows, m.shape[1], lambda src, nu, i: _sign(i)).check()


def double_vertical_dual_check(E):
    """(ok, degree, report): homology concentrated in one common degree with dim E(M)."""
    dual = vertical_dual(E)
    degree = None
    for m in E.category.objects:
        h = double_vertical_dual(E, m, dual).homology_dims()
        if not E.dim(m):
            if h:
                return False, degree, {"object": m.to_json(), "homology": h}
            continue
        if len(h) != 1 or list(h.values())[0] != E.dim(m):
            return False, degree, {"object": m.to_json(), "homology": h}
        q = next(iter(h))
        if degree is None:
            degree = q
        elif q != degree:
            return False, degree, {"object": m.to_json(), "homology": h}
    return True, degree, None


def truncation_window(category):
    """Open degree interval (lo, hi) unaffected by the shape cutoff, or None if nothing is cut.

    A cutoff (c1, c2) drops Cousin summands with more than c2 imaginary slices
    and arrows from objects beyond the cutoff, which can only create homology
    in stalk degree -c2 and shriek-stalk degree c1.
    """
    if category.spec.kind == "truth":
        return (-category.cutoff[1], category.cutoff[0])
    full = cm.default_cutoff(category.spec, category.n, 2)
    if all(a >= b for a, b in zip(category.cutoff, full)):
        return None
    return (-category.cutoff[1], category.cutoff[0])


# -- transpose duality -----------------------------------------------------------------------


def transpose_janus(E):
    cat = E.category.transposed()
    dims = {cm.transpose(m): d for m, d in E.dims.items()}
    dh = {(cm.transpose(m), j): mat.T for (m, j), mat in E.dv.items()}
    dv = {(cm.transpose(m), i): mat.T for (m, i), mat in E.dh.items()}
    return JanusData(cat, dims, dh, dv)


# -- round trip ---------------------------------------------------------------------------------


def cousin_extract(C):
    """Recover the Janus datum from a Cousin complex."""
    if not isinstance(C, CousinComplex):
        raise JanusError("expected a Cousin complex with component labels")
    cat = C.category
    dims = {}
    for m in cat.objects:
        ident = (m, gc.identity(m))
        q = -m.shape[1]
        if ident in C.components[m].get(q, []):
            r0, r1 = C.block_range(m, q, ident)
            dims[m] = r1 - r0
    E = JanusData(cat, dims, {}, {})
    for m in cat.objects:
        q = -m.shape[1]
        for nu, i, e in gc.elementary_arrows(m):
            tgt = e.target
            if nu == 1:
                if not dims.get(m) or not dims.get(tgt):
                    continue
                f = C.maps[(m, 1, i)].at(q)
                rows = C.block_range(m, q, (m, gc.identity(m)))
                cols = C.block_range(tgt, q, (tgt, gc.identity(tgt)))
                E.dh[(m, i)] = block(f, rows, cols)
            else:
                if not dims.get(m) or not dims.get(tgt):
                    continue
                d = C.value(tgt).diff(q)
                rows = C.block_range(tgt, q + 1, (tgt, gc.identity(tgt)))
                cols = C.block_range(tgt, q, (m, e))
                E.dv[(m, i)] = block(d, rows, cols).scale(_sign(i))
    return E


def same_janus(a, b):
    """Exact equality of two Janus data on the same category (zero maps ignored)."""
    if a.dims != b.dims:
        return False
    for store_a, store_b, get_a, get_b in ((a.dh, b.dh, a.h, b.h), (a.dv, b.dv, a.v, b.v)):
        for key in set(store_a) | set(store_b):
            if get_a(*key) != get_b(*key):
                return False
    return True


def cousin_to_json(C):
    objs = []
    for m in C.category.objects:
        val = C.value(m)
        objs.append({"matrix": m.to_json(), **val.to_json()})
    arrows = []
    for (m, nu, i), f in sorted(C.maps.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1:])):
        if not f.maps:
            continue
        e = gc.elementary(m, nu, i)
        arrows.append({**e.to_json(), "maps": {str(q): mat_to_json(mat) for q, mat in sorted(f.maps.items())}})
    return {"objects": objs, "arrows": arrows}


def functor_from_json(spec, n, cutoff, obj):
    """Read a complex-valued functor from its JSON form."""
    cat = TruncatedCategory(spec, n, tuple(cutoff))
    values = {}
    for rec in obj["objects"]:
        m = cm.ContMatrix.from_json(spec, rec["matrix"])
        values[m] = ChainComplex.from_json(rec)
    maps = {}
    for rec in obj.get("arrows", []):
        f = GroArrow.from_json(spec, rec)
        (nu,) = f.directions()
        s = f.surjs[nu - 1]
        i = next(k for k in range(len(s) - 1) if s[k] == s[k + 1])
        src = values.get(f.target) or ChainComplex({})
        tgt = values.get(f.source) or ChainComplex({})
        maps[(f.source, nu, i)] = ChainMap(src, tgt, {int(q): mat_from_json(m) for q, m in rec["maps"].items()})
    return VComplexFunctor(cat, values, maps)
