"""Graded bialgebras, their Janus sheaves, and evaluated exchange/braiding words.

Tensor factors of E(M) follow the row-major grid order of M. The target
category is symmetric, so reordering factors is a relabelling of basis tuples.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import contmatrix as cm
from . import grocat as gc
from .exactla import Mat, inverse, is_invertible, mat_from_json, mat_to_json, nullspace, solve
from .grocat import GroArrow, TruncatedCategory
from .janus import JanusData
from .monoid import MonoidSpec


class BialgebraError(ValueError):
    pass


def _radix_index(digits, sizes):
    idx = 0
    for d, s in zip(digits, sizes):
        idx = idx * s + d
    return idx


def _radix_digits(idx, sizes):
    out = [0] * len(sizes)
    for k in range(len(sizes) - 1, -1, -1):
        idx, out[k] = divmod(idx, sizes[k])
    return out


def swap_map(a, b):
    """The symmetry k^a (x) k^b -> k^b (x) k^a."""
    return Mat.from_entries(a * b, a * b, [(j * a + i, i * b + j, 1) for i in range(a) for j in range(b)])


class GradedBialgebra:
    """dims: {elem: dim}; mu[(m, n)]: A_m (x) A_n -> A_{m+n}; delta[(m, n)]: A_{m+n} -> A_m (x) A_n.

    Components with a zero index are identities and need not be stored.
    """

    def __init__(self, spec, dims, mu, delta, name=None):
        self.spec = spec
        self.dims = {k: v for k, v in dims.items() if v}
        self.dims[spec.zero()] = 1
        self.mu_maps = mu
        self.delta_maps = delta
        self.name = name

    def dim(self, n):
        return self.dims.get(n, 0)

    def elements(self):
        return sorted(self.dims, key=self.spec.weight)

    def mu(self, m, n):
        if (m, n) in self.mu_maps:
            return self.mu_maps[(m, n)]
        s = self.spec
        if s.is_zero(m) or s.is_zero(n):
            return Mat.identity(self.dim(s.add(m, n)))
        return Mat(self.dim(s.add(m, n)), self.dim(m) * self.dim(n))

    def delta(self, m, n):
        if (m, n) in self.delta_maps:
            return self.delta_maps[(m, n)]
        s = self.spec
        if s.is_zero(m) or s.is_zero(n):
            return Mat.identity(self.dim(s.add(m, n)))
        return Mat(self.dim(m) * self.dim(n), self.dim(s.add(m, n)))

    # -- JSON --------------------------------------------------------------------

    def to_json(self):
        s = self.spec
        return {
            "monoid": s.to_json(),
            "components": [{"n": s.element_to_json(k), "dim": self.dims[k]} for k in self.elements()],
            "mu": [
                {"m": s.element_to_json(a), "n": s.element_to_json(b), "matrix": mat_to_json(v)}
                for (a, b), v in sorted(self.mu_maps.items(), key=lambda kv: (s.weight(kv[0][0]), s.weight(kv[0][1])))
            ],
            "delta": [
                {"m": s.element_to_json(a), "n": s.element_to_json(b), "matrix": mat_to_json(v)}
                for (a, b), v in sorted(self.delta_maps.items(), key=lambda kv: (s.weight(kv[0][0]), s.weight(kv[0][1])))
            ],
        }

    @classmethod
    def from_json(cls, obj):
        spec = MonoidSpec.from_json(obj["monoid"])
        el = spec.element_from_json
        dims = {el(c["n"]): int(c["dim"]) for c in obj["components"]}
        mu = {(el(r["m"]), el(r["n"])): mat_from_json(r["matrix"]) for r in obj.get("mu", [])}
        delta = {(el(r["m"]), el(r["n"])): mat_from_json(r["matrix"]) for r in obj.get("delta", [])}
        return cls(spec, dims, mu, delta)


# -- axioms -------------------------------------------------------------------------


def _nonzero(spec, elems):
    return [e for e in elems if not spec.is_zero(e)]


def _content_range(A, bound):
    s = A.spec
    top = bound if bound is not None else max(A.dims, key=s.weight)
    return [n for n in s.elements_leq(top)]


def lb3_terms(A, l1, l2, m1, m2):
    """[(O, term)] for the right side of the compatibility axiom; O = ((o11, o12), (o21, o22))."""
    s = A.spec
    out = []
    for o11, o12 in s.decompose2(m1):
        for o21, o22 in s.decompose2(m2):
            if s.add(o11, o21) != l1 or s.add(o12, o22) != l2:
                continue
            d = [[A.dim(o11), A.dim(o12)], [A.dim(o21), A.dim(o22)]]
            mid = Mat.identity(d[0][0]).kron(swap_map(d[0][1], d[1][0])).kron(Mat.identity(d[1][1]))
            term = A.mu(o11, o21).kron(A.mu(o12, o22)) @ mid @ A.delta(o11, o12).kron(A.delta(o21, o22))
            out.append((((o11, o12), (o21, o22)), term))
    return out


def check_axioms(A, bound=None):
    """{"LB0".."LB3": (ok, witness)} over every index combination with total <= bound."""
    s = A.spec
    elems = _content_range(A, bound)
    zero = s.zero()
    report = {}

    wit = None
    for n in elems:
        for m, k in ((zero, n), (n, zero)):
            if (m, k) in A.mu_maps and A.mu_maps[(m, k)] != Mat.identity(A.dim(n)):
                wit = wit or {"mu": [s.element_to_json(m), s.element_to_json(k)]}
            if (m, k) in A.delta_maps and A.delta_maps[(m, k)] != Mat.identity(A.dim(n)):
                wit = wit or {"delta": [s.element_to_json(m), s.element_to_json(k)]}
    report["LB0"] = (wit is None, wit)

    nz = _nonzero(s, elems)
    inside = set(elems)
    triples = [(a, b, c) for a in nz for b in nz for c in nz if s.add(s.add(a, b), c) in inside]
    wit = None
    for a, b, c in triples:
        ab, bc = s.add(a, b), s.add(b, c)
        lhs = A.mu(ab, c) @ A.mu(a, b).kron(Mat.identity(A.dim(c)))
        rhs = A.mu(a, bc) @ Mat.identity(A.dim(a)).kron(A.mu(b, c))
        if lhs != rhs:
            wit = [s.element_to_json(x) for x in (a, b, c)]
            break
    report["LB1"] = (wit is None, wit)

    wit = None
    for a, b, c in triples:
        ab, bc = s.add(a, b), s.add(b, c)
        lhs = A.delta(a, b).kron(Mat.identity(A.dim(c))) @ A.delta(ab, c)
        rhs = Mat.identity(A.dim(a)).kron(A.delta(b, c)) @ A.delta(a, bc)
        if lhs != rhs:
            wit = [s.element_to_json(x) for x in (a, b, c)]
            break
    report["LB2"] = (wit is None, wit)

    wit = None
    for n in _nonzero(s, elems):
        pairs = [(x, y) for x, y in s.decompose2(n) if not s.is_zero(x) and not s.is_zero(y)]
        for (l1, l2), (m1, m2) in itertools.product(pairs, pairs):
            lhs = A.delta(l1, l2) @ A.mu(m1, m2)
            rhs = Mat(lhs.rows, lhs.cols)
            for _, term in lb3_terms(A, l1, l2, m1, m2):
                rhs = rhs + term
            if lhs != rhs:
                wit = [s.element_to_json(x) for x in (l1, l2, m1, m2)]
                break
        if wit:
            break
    report["LB3"] = (wit is None, wit)
    return report


def axioms_ok(report):
    return all(ok for ok, _ in report.values())


# -- presets ------------------------------------------------------------------------------


def kx(bound=6):
    """Polynomial bialgebra: A_n = k x^n, mu = 1, Delta_{a,b} = binomial(a+b, a)."""
    spec = MonoidSpec.nat()
    dims = {n: 1 for n in range(bound + 1)}
    mu, delta = {}, {}
    for a in range(1, bound + 1):
        for b in range(1, bound + 1 - a):
            mu[(a, b)] = Mat.from_dense([[1]])
            delta[(a, b)] = Mat.from_dense([[math.comb(a + b, a)]])
    return GradedBialgebra(spec, dims, mu, delta, name="kx")


def divided_powers(bound=6):
    """Graded dual of k[x]: mu_{a,b} = binomial(a+b, a), Delta = 1."""
    base = kx(bound)
    mu = {k: v.T for k, v in base.delta_maps.items()}
    delta = {k: v.T for k, v in base.mu_maps.items()}
    return GradedBialgebra(base.spec, base.dims, mu, delta, name="divided-powers")


def trivial(spec=None):
    return GradedBialgebra(spec or MonoidSpec.nat(), {}, {}, {}, name="trivial")


@dataclass
class UnitalBialgebra:
    """Ungraded bialgebra on k^dim with unit e: k -> B and counit eta: B -> k."""

    dim: int
    mu: Mat
    delta: Mat
    unit: Mat
    counit: Mat
    name: str | None = None

    def check(self):
        d = self.dim
        ident = Mat.identity(d)
        problems = []
        if self.mu @ self.mu.kron(ident) != self.mu @ ident.kron(self.mu):
            problems.append("associativity")
        if self.delta.kron(ident) @ self.delta != ident.kron(self.delta) @ self.delta:
            problems.append("coassociativity")
        if self.mu @ self.unit.kron(ident) != ident or self.mu @ ident.kron(self.unit) != ident:
            problems.append("unit")
        if self.counit.kron(ident) @ self.delta != ident or ident.kron(self.counit) @ self.delta != ident:
            problems.append("counit")
        mid = ident.kron(swap_map(d, d)).kron(ident)
        if self.delta @ self.mu != self.mu.kron(self.mu) @ mid @ self.delta.kron(self.delta):
            problems.append("compatibility")
        if self.counit @ self.mu != self.counit.kron(self.counit):
            problems.append("counit multiplicative")
        if self.delta @ self.unit != self.unit.kron(self.unit):
            problems.append("unit comultiplicative")
        return problems


def group_algebra(order):
    """k[Z/order] in the basis g^0, ..., g^(order-1)."""
    d = order
    mu = Mat.from_entries(d, d * d, [((a + b) % d, a * d + b, 1) for a in range(d) for b in range(d)])
    delta = Mat.from_entries(d * d, d, [(a * d + a, a, 1) for a in range(d)])
    unit = Mat.from_entries(d, 1, [(0, 0, 1)])
    counit = Mat.from_entries(1, d, [(0, a, 1) for a in range(d)])
    return UnitalBialgebra(d, mu, delta, unit, counit, name=f"group-algebra-z{order}")


def function_algebra(order):
    """k^{Z/order}: pointwise product, Delta(f)(g, h) = f(g + h), counit = evaluation at 0."""
    d = order
    mu = Mat.from_entries(d, d * d, [(a, a * d + a, 1) for a in range(d)])
    delta = Mat.from_entries(d * d, d, [(g * d + h, (g + h) % d, 1) for g in range(d) for h in range(d)])
    unit = Mat.from_entries(d, 1, [(a, 0, 1) for a in range(d)])
    counit = Mat.from_entries(1, d, [(0, 0, 1)])
    return UnitalBialgebra(d, mu, delta, unit, counit, name=f"function-algebra-z{order}")


def truncate_unital(B):
    """The truth(2)-graded bialgebra with A_1 = ker(counit) and reduced coproduct."""
    problems = B.check()
    if problems:
        raise BialgebraError("not a unital bialgebra: " + ", ".join(problems))
    spec = MonoidSpec.truth(2)
    basis = nullspace(B.counit)  # columns span ker(eta)
    r = basis.cols
    name = f"{B.name}-truncated" if B.name else None
    if r == 0:
        return GradedBialgebra(spec, {}, {}, {}, name=name)
    ident = Mat.identity(B.dim)
    # reduced coproduct Delta - x (x) 1 - 1 (x) x on B
    reduced = B.delta - ident.kron(B.unit) - B.unit.kron(ident)
    try:
        mu1 = solve(basis, B.mu @ basis.kron(basis))
        delta1 = solve(basis.kron(basis), reduced @ basis)
    except ValueError:
        raise BialgebraError("kernel of the counit is not closed under the reduced structure")
    return GradedBialgebra(spec, {1: r}, {(1, 1): mu1}, {(1, 1): delta1}, name=name)


def preset(name, bound=6):
    """Look up a named preset: kx, divided-powers, trivial, group-algebra-zN, function-algebra-zN."""
    if name == "kx":
        return kx(bound)
    if name == "divided-powers":
        return divided_powers(bound)
    if name == "trivial":
        return trivial()
    for prefix, build in (("group-algebra-z", group_algebra), ("function-algebra-z", function_algebra)):
        if name.startswith(prefix):
            try:
                order = int(name[len(prefix):])
            except ValueError:
                break
            if order < 1:
                break
            return truncate_unital(build(order))
    raise BialgebraError(f"unknown preset {name!r}")


PRESETS = ("kx", "divided-powers", "trivial", "group-algebra-zN", "function-algebra-zN")


# -- the Janus sheaf of a bialgebra -------------------------------------------------------------


def grid_map(src_sizes, tgt_sizes, pieces):
    """Linear map between tensor products of grid factors.

    ``pieces`` is a list of (input positions, output positions, Mat) where the
    Mat acts from the tensor product of the inputs to that of the outputs.
    Every source and target position belongs to exactly one piece.
    """
    rows = math.prod(tgt_sizes)
    cols = math.prod(src_sizes)
    prepared = []
    for ins, outs, mat in pieces:
        in_sizes = [src_sizes[k] for k in ins]
        out_sizes = [tgt_sizes[k] for k in outs]
        prepared.append((ins, outs, in_sizes, out_sizes, mat))
    entries = []
    for col in range(cols):
        digits = _radix_digits(col, src_sizes)
        partial = [({}, Fraction(1))]
        for ins, outs, in_sizes, out_sizes, mat in prepared:
            local_col = _radix_index([digits[k] for k in ins], in_sizes)
            images = [(r, v) for r, v in ((r, mat[r, local_col]) for r in range(mat.rows)) if v]
            nxt = []
            for assign, coeff in partial:
                for r, v in images:
                    a = dict(assign)
                    for pos, dig in zip(outs, _radix_digits(r, out_sizes)):
                        a[pos] = dig
                    nxt.append((a, coeff * v))
            partial = nxt
            if not partial:
                break
        for assign, coeff in partial:
            row = _radix_index([assign[k] for k in range(len(tgt_sizes))], tgt_sizes)
            entries.append((row, col, coeff))
    return Mat.from_entries(rows, cols, entries)


class BialgebraJanus:
    """Lazy E_A on all 2-dimensional matrices; values are computed on demand."""

    def __init__(self, A):
        self.A = A
        self.spec = A.spec
        self._h = {}
        self._v = {}

    def sizes(self, m):
        arr = m.array()
        return [self.A.dim(arr[r, s]) for r in range(m.shape[0]) for s in range(m.shape[1])]

    def dim(self, m):
        return math.prod(self.sizes(m))

    def h(self, m, i):
        """delta' for contract(m, 1, i): E(contract) -> E(m), via Delta on rows i, i+1."""
        key = (m, i)
        if key not in self._h:
            d1, d2 = m.shape
            arr = m.array()
            src = cm.contract(m, 1, i)
            pieces = []
            for r in range(d1 - 1):
                for s in range(d2):
                    if r < i:
                        pieces.append(([r * d2 + s], [r * d2 + s], Mat.identity(self.A.dim(arr[r, s]))))
                    elif r > i:
                        pieces.append(([r * d2 + s], [(r + 1) * d2 + s], Mat.identity(self.A.dim(arr[r + 1, s]))))
                    else:
                        mat = self.A.delta(arr[i, s], arr[i + 1, s])
                        pieces.append(([i * d2 + s], [i * d2 + s, (i + 1) * d2 + s], mat))
            self._h[key] = grid_map(self.sizes(src), self.sizes(m), pieces)
        return self._h[key]

    def v(self, m, j):
        """delta'' for contract(m, 2, j): E(m) -> E(contract), via mu on columns j, j+1."""
        key = (m, j)
        if key not in self._v:
            d1, d2 = m.shape
            arr = m.array()
            tgt = cm.contract(m, 2, j)
            e2 = d2 - 1
            pieces = []
            for r in range(d1):
                for s in range(d2):
                    if s < j:
                        pieces.append(([r * d2 + s], [r * e2 + s], Mat.identity(self.A.dim(arr[r, s]))))
                    elif s > j + 1:
                        pieces.append(([r * d2 + s], [r * e2 + s - 1], Mat.identity(self.A.dim(arr[r, s]))))
                    elif s == j:
                        mat = self.A.mu(arr[r, j], arr[r, j + 1])
                        pieces.append(([r * d2 + j, r * d2 + j + 1], [r * e2 + j], mat))
            self._v[key] = grid_map(self.sizes(m), self.sizes(tgt), pieces)
        return self._v[key]


def janus_from_bialgebra(A, n, cutoff=None):
    spec = A.spec
    if cutoff is None:
        cutoff = cm.default_cutoff(spec, n, 2)
    cat = TruncatedCategory(spec, n, tuple(cutoff))
    lazy = BialgebraJanus(A)
    dims = {m: lazy.dim(m) for m in cat.objects}
    dh, dv = {}, {}
    for m in cat.objects:
        if not dims[m]:
            continue
        for nu, i, _ in gc.elementary_arrows(m):
            tgt = cm.contract(m, nu, i)
            if not dims[tgt]:
                continue
            if nu == 1:
                dh[(m, i)] = lazy.h(m, i)
            else:
                dv[(m, i)] = lazy.v(m, i)
    return JanusData(cat, dims, dh, dv)


# -- operations on Janus data --------------------------------------------------------------------


def direct_sum(*data):
    """Objectwise direct sum of Janus data on one category."""
    cat = data[0].category
    dims, dh, dv = {}, {}, {}
    for m in cat.objects:
        dims[m] = sum(E.dim(m) for E in data)
    for m in cat.objects:
        for nu, i, _ in gc.elementary_arrows(m):
            mats = [(E.h(m, i) if nu == 1 else E.v(m, i)) for E in data]
            rows = sum(x.rows for x in mats)
            cols = sum(x.cols for x in mats)
            if not rows or not cols:
                continue
            entries, r0, c0 = [], 0, 0
            for x in mats:
                entries.extend((r0 + r, c0 + c, v) for r, c, v in _entries(x))
                r0 += x.rows
                c0 += x.cols
            (dh if nu == 1 else dv)[(m, i)] = Mat.from_entries(rows, cols, entries)
    return JanusData(cat, dims, dh, dv)


def _entries(mat):
    return [(r, c, v) for r, row in mat.data.items() for c, v in row.items()]


def random_invertible(size, rng, spread=2):
    """Product of random unit lower and upper triangular integer matrices."""
    lower = [[1 if r == c else (rng.randint(-spread, spread) if r > c else 0) for c in range(size)] for r in range(size)]
    upper = [[1 if r == c else (rng.randint(-spread, spread) if r < c else 0) for c in range(size)] for r in range(size)]
    perm = list(range(size))
    rng.shuffle(perm)
    p = [[1 if perm[r] == c else 0 for c in range(size)] for r in range(size)]
    return Mat.from_dense(p) @ Mat.from_dense(lower) @ Mat.from_dense(upper)


def gauge(E, rng, spread=2):
    """Conjugate every value by a random invertible matrix; the result is isomorphic to E."""
    cat = E.category
    g = {m: random_invertible(E.dim(m), rng, spread) for m in cat.objects if E.dim(m)}
    ginv = {m: inverse(x) for m, x in g.items()}
    dh = {}
    for (m, i), mat in E.dh.items():
        tgt = cm.contract(m, 1, i)
        dh[(m, i)] = g[m] @ mat @ ginv[tgt]
    dv = {}
    for (m, j), mat in E.dv.items():
        tgt = cm.contract(m, 2, j)
        dv[(m, j)] = g[tgt] @ mat @ ginv[m]
    return JanusData(cat, dict(E.dims), dh, dv)


def random_janus_sheaf(spec, n, cutoff, seed):
    """A gauge-transformed direct sum of one to three preset sheaves; a Janus sheaf by construction."""
    rng = random.Random(seed)
    if spec.kind == "nat":
        pool = [kx(n), divided_powers(n)]
    elif spec.kind == "truth" and spec.levels == 2:
        pool = [preset("group-algebra-z2"), preset("function-algebra-z2")]
    else:
        raise BialgebraError("random sheaves are available over nat and truth:2")
    parts = [janus_from_bialgebra(rng.choice(pool), n, cutoff) for _ in range(rng.randint(1, 3))]
    return gauge(direct_sum(*parts), rng)


# -- words in the evaluation category ------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    """One generator: ``kind`` is "h" or "v"; ``arrow`` is elementary; ``inverse`` flips it.

    A forward "h" step over f: N -> M runs E(M) -> E(N); a forward "v" step over
    g: N -> M runs E(N) -> E(M).
    """

    kind: str
    arrow: GroArrow
    inverse: bool = False

    def endpoints(self):
        a = self.arrow
        fwd = (a.target, a.source) if self.kind == "h" else (a.source, a.target)
        return fwd[::-1] if self.inverse else fwd


@dataclass
class MorphismWord:
    start: object
    steps: list = field(default_factory=list)

    def end(self):
        cur = self.start
        for st in self.steps:
            a, b = st.endpoints()
            if a != cur:
                raise BialgebraError(f"word is not composable at {cur!r}")
            cur = b
        return cur

    def then(self, other):
        return MorphismWord(self.start, self.steps + other.steps)


def _elementary_index(arrow, nu):
    s = arrow.surjs[nu - 1]
    return next(k for k in range(len(s) - 1) if s[k] == s[k + 1])


def evaluate_word(E, word):
    """Composite linear map of a word; E needs dim, h and v (JanusData or BialgebraJanus)."""
    word.end()
    result = Mat.identity(E.dim(word.start))
    for st in word.steps:
        a = st.arrow
        if a.reldim != 1:
            raise BialgebraError("words use elementary generators only")
        nu = 1 if st.kind == "h" else 2
        i = _elementary_index(a, nu)
        mat = E.h(a.source, i) if nu == 1 else E.v(a.source, i)
        if st.inverse:
            if not cm.is_anodyne_elementary(a.source, nu, i):
                raise BialgebraError("inverse of a non-anodyne generator")
            if not is_invertible(mat):
                raise BialgebraError("anodyne generator evaluates to a singular matrix")
            mat = inverse(mat)
        result = mat @ result
    return result


def multiplication_word(spec, m, n):
    """(delta')^{-1} then delta'': E((m) + (n)) -> E((m + n))."""
    diag = cm.block_sum(cm.ContMatrix.from_nested(spec, [[m]]), cm.ContMatrix.from_nested(spec, [[n]]))
    e1 = gc.elementary(diag, 1, 0)
    row = e1.target
    e2 = gc.elementary(row, 2, 0)
    return MorphismWord(diag, [Step("h", e1, True), Step("v", e2)])


def comultiplication_word(spec, m, n):
    """delta' then (delta'')^{-1}: E((m + n)) -> E((m) + (n))."""
    diag = cm.block_sum(cm.ContMatrix.from_nested(spec, [[m]]), cm.ContMatrix.from_nested(spec, [[n]]))
    e2 = gc.elementary(diag, 2, 0)
    col = e2.target
    e1 = gc.elementary(col, 1, 0)
    return MorphismWord(e1.target, [Step("h", e1), Step("v", e2, True)])


def exchange_step(m, nu, i):
    """Word for swapping the disjoint slices i, i+1 of m in direction nu."""
    if not cm.is_anodyne_elementary(m, nu, i):
        raise BialgebraError("exchanged slices must be disjoint")
    swapped = swap_slices(m, nu, i)
    e = gc.elementary(m, nu, i)
    f = gc.elementary(swapped, nu, i)
    if nu == 1:
        return MorphismWord(m, [Step("h", e, True), Step("h", f)])
    return MorphismWord(m, [Step("v", e), Step("v", f, True)])


def swap_slices(m, nu, i):
    arr = m.array()
    order = list(range(m.shape[nu - 1]))
    order[i], order[i + 1] = order[i + 1], order[i]
    arr = arr[order, :] if nu == 1 else arr[:, order]
    return cm._from_array_unchecked(m.spec, arr)


def exchange_word(m, moves):
    """Compose exchange steps given as [(nu, i)] starting from m."""
    word = MorphismWord(m, [])
    cur = m
    for nu, i in moves:
        step = exchange_step(cur, nu, i)
        word = word.then(step)
        cur = step.end()
    return word


def _reduced_words(labels, target, limit):
    """All sequences of adjacent swaps (each fixing one inversion) taking labels to target."""
    pos = {x: k for k, x in enumerate(target)}
    out = []

    def rec(cur, acc):
        if len(out) >= limit:
            return
        if list(cur) == list(target):
            out.append(list(acc))
            return
        for k in range(len(cur) - 1):
            if pos[cur[k]] > pos[cur[k + 1]]:
                nxt = list(cur)
                nxt[k], nxt[k + 1] = nxt[k + 1], nxt[k]
                acc.append(k)
                rec(nxt, acc)
                acc.pop()

    rec(list(labels), [])
    return out


def _block_ranges(blocks, nu):
    out, start = [], 0
    for b in blocks:
        out.append(list(range(start, start + b.shape[nu - 1])))
        start += b.shape[nu - 1]
    return out


def braiding_moves(blocks, k, limit=1, vertical_first=True):
    """Exchange sequences realising the swap of blocks k and k+1 of a block sum.

    Direction-2 exchanges (R'') come before direction-1 exchanges (R').
    Returns up to ``limit`` sequences of (nu, i).
    """
    per_dir = {}
    for nu in (1, 2):
        ranges = _block_ranges(blocks, nu)
        labels = [x for r in ranges for x in r]
        target_ranges = ranges[:k] + [ranges[k + 1], ranges[k]] + ranges[k + 2:]
        target = [x for r in target_ranges for x in r]
        per_dir[nu] = [[(nu, i) for i in w] for w in _reduced_words(labels, target, limit)]
    order = (2, 1) if vertical_first else (1, 2)
    return [a + b for a in per_dir[order[0]] for b in per_dir[order[1]]][:limit]


def block_sum_all(blocks):
    out = blocks[0]
    for b in blocks[1:]:
        out = cm.block_sum(out, b)
    return out


def braiding(E, blocks, k=0, moves=None):
    """Evaluated R for blocks k and k+1 of the block sum of ``blocks``: E(... M N ...) -> E(... N M ...)."""
    m = block_sum_all(blocks)
    if moves is None:
        moves = braiding_moves(blocks, k)[0]
    word = exchange_word(m, moves)
    expected = block_sum_all(blocks[:k] + [blocks[k + 1], blocks[k]] + blocks[k + 2:])
    if word.end() != expected:
        raise BialgebraError("exchange sequence does not realise the block swap")
    return evaluate_word(E, word)


# -- coherence verdicts ---------------------------------------------------------------------------


def _check_cutoff(m, cutoff):
    if cutoff is not None and any(a > b for a, b in zip(m.shape, cutoff)):
        raise BialgebraError(f"block sum of shape {m.shape} exceeds the cutoff {tuple(cutoff)}")


def order_independence(E, blocks, k=0, limit=200):
    """All reduced exchange sequences (both direction orders) evaluate equally."""
    seqs = braiding_moves(blocks, k, limit, True) + braiding_moves(blocks, k, limit, False)
    # interleavings of a fixed pair of direction words
    base = braiding_moves(blocks, k, 1, True)[0]
    vert = [s for s in base if s[0] == 2]
    horiz = [s for s in base if s[0] == 1]
    for mask in itertools.combinations(range(len(vert) + len(horiz)), len(vert)):
        vi, hi, seq = iter(vert), iter(horiz), []
        for pos in range(len(vert) + len(horiz)):
            seq.append(next(vi) if pos in mask else next(hi))
        seqs.append(seq)
        if len(seqs) > 2 * limit:
            break
    values = [braiding(E, blocks, k, s) for s in seqs]
    bad = next((s for s, v in zip(seqs, values) if v != values[0]), None)
    return bad is None, {"sequences": len(seqs), "witness": bad}


def _arrow_value(E, arrow):
    """Value of an elementary arrow with its natural variance."""
    (nu,) = arrow.directions()
    i = _elementary_index(arrow, nu)
    return (E.h(arrow.source, i) if nu == 1 else E.v(arrow.source, i)), nu


def naturality(E, first, second):
    """Naturality squares of R against every elementary arrow out of either object."""
    r_ab = braiding(E, [first, second])
    for slot, obj in ((0, first), (1, second)):
        for nu, i, f in gc.elementary_arrows(obj):
            other = second if slot == 0 else first
            moved = f.target
            pair = [moved, second] if slot == 0 else [first, moved]
            r_moved = braiding(E, pair)
            ident = gc.identity(other)
            before = gc.direct_sum_arrow(f, ident) if slot == 0 else gc.direct_sum_arrow(ident, f)
            after = gc.direct_sum_arrow(ident, f) if slot == 0 else gc.direct_sum_arrow(f, ident)
            vb = E_composite(E, before)
            va = E_composite(E, after)
            if nu == 1:
                ok = r_ab @ vb == va @ r_moved
            else:
                ok = r_moved @ vb == va @ r_ab
            if not ok:
                return False, {"object": slot, "direction": nu, "index": i}
    return True, None


def E_composite(E, arrow):
    """Value of a one-direction arrow by composing elementary steps."""
    (nu,) = arrow.directions()
    cur = arrow.source
    result = Mat.identity(E.dim(cur))
    for _, i in gc.factor_steps(arrow):
        if nu == 1:
            result = result @ E.h(cur, i)
        else:
            result = E.v(cur, i) @ result
        cur = cm.contract(cur, nu, i)
    return result


def hexagons(E, a, b, c):
    """Both hexagon identities for the objects a, b, c."""
    # R_{a, b+c} = (id_b (x) R_{a,c}) o (R_{a,b} (x) id_c)
    lhs1 = braiding(E, [a, cm.block_sum(b, c)])
    rhs1 = braiding(E, [b, a, c], 1) @ braiding(E, [a, b, c], 0)
    # R_{a+b, c} = (R_{a,c} (x) id_b) o (id_a (x) R_{b,c})
    lhs2 = braiding(E, [cm.block_sum(a, b), c])
    rhs2 = braiding(E, [a, c, b], 0) @ braiding(E, [a, b, c], 1)
    return lhs1 == rhs1, lhs2 == rhs2


@dataclass
class BraidingReport:
    order_independent: bool
    natural: bool
    hexagon1: bool
    hexagon2: bool
    details: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.order_independent and self.natural and self.hexagon1 and self.hexagon2

    def to_json(self):
        return {
            "order_independent": self.order_independent,
            "natural": self.natural,
            "hexagon1": self.hexagon1,
            "hexagon2": self.hexagon2,
            "pass": self.ok,
            "details": self.details,
        }


def braiding_report(A, objects, cutoff=None):
    """Coherence verdicts of the evaluated braiding on a list of two or three objects."""
    if len(objects) not in (2, 3):
        raise BialgebraError("give two or three objects")
    total = block_sum_all(objects)
    _check_cutoff(total, cutoff)
    E = BialgebraJanus(A)
    details = {}
    oi = True
    for k in range(len(objects) - 1):
        ok, info = order_independence(E, objects, k)
        details[f"order_{k}"] = info
        oi = oi and ok
    nat_ok = True
    for x, y in itertools.permutations(objects, 2):
        ok, wit = naturality(E, x, y)
        if not ok:
            nat_ok = False
            details["naturality"] = wit
            break
    h1 = h2 = True
    if len(objects) == 3:
        h1, h2 = hexagons(E, *objects)
    else:
        details["hexagons"] = "need three objects"
    return BraidingReport(oi, nat_ok, h1, h2, details)
