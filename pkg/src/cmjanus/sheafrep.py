"""Cellular sheaves and complexes as functors on a truncated exit-path category.

A functor is stored by its values on objects and on elementary arrows.
Values are contravariant: an arrow M -> N gives a map F(N) -> F(M).
"""

from __future__ import annotations

from . import contmatrix as cm
from . import grocat as gc
from .cellhomology import incidence_sign
from .exactla import ChainComplex, ChainMap, Mat, assemble, cone, identity_map, total_complex, zero_complex


class FunctorError(ValueError):
    pass


class NotConstructible(FunctorError):
    pass


class VComplexFunctor:
    """values: {M: ChainComplex}; maps: {(M, nu, i): ChainMap F(target) -> F(M)}.

    Objects missing from ``values`` carry the zero complex; missing maps are zero.
    """

    def __init__(self, category, values, maps):
        self.category = category
        self.values = {m: c for m, c in values.items() if c.dims}
        self.maps = maps

    def value(self, m):
        return self.values.get(m) or zero_complex()

    def support(self):
        return [m for m in self.category.objects if m in self.values]

    def elementary_map(self, m, nu, i):
        got = self.maps.get((m, nu, i))
        if got is not None:
            return got
        tgt = cm.contract(m, nu, i)
        return ChainMap(self.value(tgt), self.value(m), {})

    def map_of(self, f):
        """Value on an arbitrary arrow, composed along one factorization."""
        cur = f.source
        result = identity_map(self.value(cur))
        for nu, i in gc.factor_steps(f):
            step = self.elementary_map(cur, nu, i)
            result = result.compose_after(step)
            cur = cm.contract(cur, nu, i)
        return result


def vfunctor(category, dims, maps):
    """Functor into vector spaces, placed in degree 0."""
    values = {m: ChainComplex({0: d}) for m, d in dims.items() if d}
    cmaps = {}
    for (m, nu, i), mat in maps.items():
        tgt = cm.contract(m, nu, i)
        cmaps[(m, nu, i)] = ChainMap(values.get(tgt) or zero_complex(), values.get(m) or zero_complex(), {0: mat})
    return VComplexFunctor(category, values, cmaps)


def constant(category, degree=0, dim=1):
    """The constant functor k^dim placed in the given degree."""
    values = {m: ChainComplex({degree: dim}) for m in category.objects}
    maps = {}
    for m in category.objects:
        for nu, i, _ in gc.elementary_arrows(m):
            tgt = cm.contract(m, nu, i)
            maps[(m, nu, i)] = ChainMap(values[tgt], values[m], {degree: Mat.identity(dim)})
    return VComplexFunctor(category, values, maps)


def representable(category, base, dim=1):
    """V^{h^base}: value at M is V tensored with the hom set from M to base."""
    homs = {m: gc.hom_set(m, base) for m in category.objects}
    values = {m: ChainComplex({0: len(h) * dim}) for m, h in homs.items() if h}
    maps = {}
    for m in category.objects:
        for nu, i, e in gc.elementary_arrows(m):
            tgt = e.target
            src_h, tgt_h = homs[m], homs.get(tgt, [])
            pos = {f: k for k, f in enumerate(src_h)}
            entries = []
            for col, g in enumerate(tgt_h):
                row = pos[gc.compose(g, e)]
                for k in range(dim):
                    entries.append((row * dim + k, col * dim + k, 1))
            mat = Mat.from_entries(len(src_h) * dim, len(tgt_h) * dim, entries)
            maps[(m, nu, i)] = ChainMap(
                values.get(tgt) or zero_complex(), values.get(m) or zero_complex(), {0: mat}
            )
    return VComplexFunctor(category, values, maps)


# -- functoriality ---------------------------------------------------------------------


def check_functoriality(functor):
    """Verify chain-map conditions and every length-two generator relation.

    Returns None when all hold, else a string naming the first violation.
    """
    for (m, nu, i), f in sorted(functor.maps.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1:])):
        try:
            f.check()
        except Exception as exc:  # noqa: BLE001 - report, don't crash
            return f"map at {m!r} direction {nu} index {i}: {exc}"
    for m in functor.category.objects:
        paths = {}
        for nu1, i1, e1 in gc.elementary_arrows(m):
            mid = e1.target
            for nu2, i2, e2 in gc.elementary_arrows(mid):
                comp = gc.compose(e2, e1)
                val = functor.elementary_map(m, nu1, i1).compose_after(functor.elementary_map(mid, nu2, i2))
                paths.setdefault(comp, []).append(((nu1, i1, nu2, i2), val))
        for comp, vals in paths.items():
            ref_steps, ref = vals[0]
            for steps, val in vals[1:]:
                if not val == ref:
                    return (
                        f"relation at {m!r}: path {ref_steps} differs from path {steps}"
                        f" (direction, index pairs)"
                    )
    return None


# -- constructibility --------------------------------------------------------------------


def constructibility(functor, mode="S0", window=None):
    """(ok, witness): anodyne elementary arrows must go to quasi-isomorphisms.

    S0 uses every anodyne arrow, S1 only those in direction 1. With
    ``window = (lo, hi)`` only the cone degrees q with lo - 1 < q < hi count.
    """
    dirs = {"S0": None, "S1": 1}[mode]
    for m in functor.category.objects:
        for nu, i, e in gc.elementary_arrows(m):
            if dirs is not None and nu != dirs:
                continue
            if not cm.is_anodyne_elementary(m, nu, i):
                continue
            f = functor.elementary_map(m, nu, i)
            if window is None:
                ok = f.is_quasi_iso()
            else:
                ok = not _inside(cone(f).homology_dims(), window[0] - 1, window[1])
            if not ok:
                return False, e
    return True, None


def _inside(homology, lo, hi):
    return {q: d for q, d in homology.items() if lo < q < hi}


# -- Verdier stalks ------------------------------------------------------------------------


def costalk(functor, m, arrows, base_degree, sign):
    """Total complex of the sum over arrows phi: M_k -> m of F(M_k).

    The summands of relative dimension r form column base_degree + r. The
    column differential has block sign(M', nu, i) * F(e) from phi to phi o e
    for each elementary e out of M'. ``arrows`` must include the identity.
    """
    by_rel = {}
    for f in arrows:
        if f.source in functor.values:
            by_rel.setdefault(f.reldim, []).append(f)
    index = {f: k for fs in by_rel.values() for k, f in enumerate(fs)}

    def sizes(fs, q):
        return [functor.value(f.source).dim(q) for f in fs]

    dims, horiz, vert = {}, {}, {}
    for r, fs in by_rel.items():
        for f in fs:
            for q, d in functor.value(f.source).dims.items():
                key = (base_degree + r, q)
                dims[key] = dims.get(key, 0) + d
    for r, fs in by_rel.items():
        col = base_degree + r
        nxt = by_rel.get(r + 1, [])
        for q in [q for (c, q) in dims if c == col]:
            if (col, q + 1) in dims:
                blocks = {(k, k): functor.value(f.source).diff(q) for k, f in enumerate(fs)}
                vert[(col, q)] = assemble(sizes(fs, q + 1), sizes(fs, q), blocks)
            if (col + 1, q) not in dims:
                continue
            blocks = {}
            for row, g in enumerate(nxt):
                for nu, i, e in gc.elementary_arrows(g.source):
                    f = quotient(g, nu, i)
                    if f is None or f.reldim != r or f not in index:
                        continue
                    mat = functor.elementary_map(g.source, nu, i).at(q).scale(sign(g.source, nu, i))
                    key = (row, index[f])
                    blocks[key] = blocks[key] + mat if key in blocks else mat
            horiz[(col, q)] = assemble(sizes(nxt, q), sizes(fs, q), blocks)
    return total_complex(dims, horiz, vert)


def quotient(g, nu, i):
    """The arrow f with f o elementary(g.source, nu, i) == g, or None."""
    s = g.surjs[nu - 1]
    if s[i] != s[i + 1]:
        return None
    rest = list(g.surjs)
    rest[nu - 1] = s[: i + 1] + s[i + 2:]
    return gc.GroArrow(cm.contract(g.source, nu, i), tuple(rest))


def shriek_stalk(functor, m):
    """F^!(m): arrows into m by relative dimension, lowest column in degree dim(m)."""
    return costalk(functor, m, functor.category.arrows_into(m), m.dim, incidence_sign).check()


def pushforward(functor, psi, source_stalk=None, target_stalk=None):
    """Chain map F^!(M) -> F^!(N) for psi: M -> N, sending phi to psi o phi."""
    cat = functor.category
    a = source_stalk or shriek_stalk(functor, psi.source)
    b = target_stalk or shriek_stalk(functor, psi.target)
    src = _layout(functor, cat.arrows_into(psi.source), psi.source.dim)
    tgt = _layout(functor, cat.arrows_into(psi.target), psi.target.dim)
    maps = {}
    for (f, q), (deg, off, size) in src.items():
        g = gc.compose(psi, f)
        deg2, off2, size2 = tgt[(g, q)]
        assert deg2 == deg and size2 == size
        mat = maps.setdefault(deg, {})
        for k in range(size):
            mat[(off2 + k, off + k)] = 1
    return ChainMap(a, b, {
        deg: Mat.from_entries(b.dim(deg), a.dim(deg), [(r, c, v) for (r, c), v in ent.items()])
        for deg, ent in maps.items()
    })


def _layout(functor, arrows, base):
    """Offsets of each (arrow, inner degree) block inside the total complex.

    Mirrors the ordering used by total_complex: cells sorted by (column, inner
    degree), then arrows in the order given within the column.
    """
    by_rel = {}
    for f in arrows:
        if f.source in functor.values:
            by_rel.setdefault(f.reldim, []).append(f)
    cells = {}
    for r, fs in by_rel.items():
        for f in fs:
            for q in functor.value(f.source).dims:
                cells.setdefault((base + r, q), []).append(f)
    out = {}
    offs = {}
    for (c, q) in sorted(cells):
        deg = c + q
        start = offs.get(deg, 0)
        for f in by_rel[c - base]:
            d = functor.value(f.source).dim(q)
            if d:
                out[(f, q)] = (deg, start, d)
                start += d
        offs[deg] = start
    return out


def verdier_dual(functor):
    """Dual functor: value at M is the dual of F^!(M) (degrees negated).

    Arrow psi: M -> N acts by the transpose of the pushforward, so the result
    is again contravariant.
    """
    cat = functor.category
    stalks = {m: shriek_stalk(functor, m) for m in cat.objects}
    values = {m: c.dual() for m, c in stalks.items()}
    maps = {}
    for m in cat.objects:
        for nu, i, e in gc.elementary_arrows(m):
            push = pushforward(functor, e, stalks[m], stalks[e.target])
            maps[(m, nu, i)] = push.transpose()
    return VComplexFunctor(cat, values, maps)


# -- perversity -------------------------------------------------------------------------------


class PerversityReport:
    def __init__(self, minus_ok, plus_ok, minus_witness, plus_witness):
        self.minus_ok = minus_ok
        self.plus_ok = plus_ok
        self.minus_witness = minus_witness
        self.plus_witness = plus_witness

    @property
    def perverse(self):
        return self.minus_ok and self.plus_ok

    def __bool__(self):
        return self.perverse

    def to_json(self):
        def wit(w):
            if w is None:
                return None
            m, q = w
            return {"matrix": m.to_json(), "degree": q}

        return {
            "perverse": self.perverse,
            "p_minus": self.minus_ok,
            "p_plus": self.plus_ok,
            "p_minus_witness": wit(self.minus_witness),
            "p_plus_witness": wit(self.plus_witness),
        }


def check_perverse(functor, require_constructible=True, window=None):
    """Pointwise middle-perversity test with c(M) = number of nonzero entries.

    (P-): H^q F(M) = 0 for q > -c(M).  (P+): H^q F^!(M) = 0 for q < c(M).
    ``window = (lo, hi)`` restricts every test to degrees lo < q < hi, for
    truncated data whose extreme degrees are not trustworthy.
    """
    lo, hi = window if window is not None else (float("-inf"), float("inf"))
    if require_constructible:
        ok, wit = constructibility(functor, "S0", window)
        if not ok:
            raise NotConstructible(f"anodyne arrow {wit!r} is not sent to a quasi-isomorphism")
    minus_wit = plus_wit = None
    for m in functor.category.objects:
        c = m.nnz()
        if minus_wit is None:
            h = _inside(functor.value(m).homology_dims(), lo, hi)
            bad = [q for q in h if q > -c]
            if bad:
                minus_wit = (m, max(bad))
        if plus_wit is None:
            h = _inside(shriek_stalk(functor, m).homology_dims(), lo, hi)
            bad = [q for q in h if q < c]
            if bad:
                plus_wit = (m, min(bad))
    return PerversityReport(minus_wit is None, plus_wit is None, minus_wit, plus_wit)


def p_minus(functor):
    for m in functor.category.objects:
        if any(q > -m.nnz() for q in functor.value(m).homology_dims()):
            return False
    return True


def p_plus(functor):
    for m in functor.category.objects:
        if any(q < m.nnz() for q in shriek_stalk(functor, m).homology_dims()):
            return False
    return True


def stalk_homology(functor):
    return {m: functor.value(m).homology_dims() for m in functor.category.objects}
