"""Acceptance criteria, one group of tests per criterion.

Every numeric anchor here comes from an independent oracle: a hand count,
a closed formula, or a brute-force enumeration written in this file.
"""

import itertools
import math

import numpy as np
import pytest

from cmjanus import bialg, janus
from cmjanus import contmatrix as cm
from cmjanus import grocat as gc
from cmjanus import sheafrep as sr
from cmjanus.cellhomology import CellComplexModel, bm_homology
from cmjanus.contmatrix import ContMatrix
from cmjanus.grocat import TruncatedCategory
from cmjanus.monoid import MonoidSpec

NAT = MonoidSpec.nat()
T2 = MonoidSpec.truth(2)


def criterion(k):
    return pytest.mark.criterion(k)


# -- brute-force oracles -------------------------------------------------------------------


def brute_matrices(spec, n, shape):
    """Every array of the given shape over the lower interval of n with sum n and no zero slice."""
    values = spec.elements_leq(n)
    out = []
    for flat in itertools.product(values, repeat=math.prod(shape)):
        if spec.total(flat) != n:
            continue
        arr = np.array(flat, dtype=object).reshape(shape)
        zero_slice = any(
            all(spec.is_zero(x) for x in np.moveaxis(arr, ax, 0)[k].flat)
            for ax in range(len(shape))
            for k in range(shape[ax])
        )
        if not zero_slice:
            out.append(flat)
    return out


def brute_merge(spec, arr, surj, axis):
    """Sum the slices of arr along axis according to a monotone surjection."""
    arr = np.moveaxis(np.array(arr, dtype=object), axis, 0)
    groups = [[] for _ in range(max(surj) + 1)]
    for k, s in enumerate(surj):
        groups[s].append(arr[k])
    merged = []
    for g in groups:
        acc = g[0]
        for x in g[1:]:
            acc = np.vectorize(spec.add, otypes=[object])(acc, x)
        merged.append(acc)
    return np.moveaxis(np.array(merged, dtype=object), 0, axis)


def brute_sup(fork):
    mp, n = fork.horizontal.source, fork.vertical.source
    spec = mp.spec
    shape = (mp.shape[0], n.shape[1])
    out = []
    for flat in brute_matrices(spec, cm.content(mp), shape):
        arr = np.array(flat, dtype=object).reshape(shape)
        if (brute_merge(spec, arr, fork.vertical.surjs[1], 1) == mp.array()).all() and \
           (brute_merge(spec, arr, fork.horizontal.surjs[0], 0) == n.array()).all():
            out.append(ContMatrix(spec, shape, flat))
    return sorted(out, key=ContMatrix.sort_key)


def boolean_count(rows, cols):
    """Inclusion-exclusion count of 0/1 matrices without zero rows or columns."""
    return sum(
        (-1) ** (i + j) * math.comb(rows, i) * math.comb(cols, j) * 2 ** ((rows - i) * (cols - j))
        for i in range(rows + 1) for j in range(cols + 1)
    )


# -- 1. enumeration ------------------------------------------------------------------------


@criterion(1)
def test_enumeration_counts():
    assert len(cm.enumerate_shape(T2, 1, (2, 2))) == 7
    for p, q in itertools.product(range(1, 4), repeat=2):
        assert len(cm.enumerate_shape(T2, 1, (p, q))) == boolean_count(p, q)
        assert len(brute_matrices(T2, 1, (p, q))) == boolean_count(p, q)
    assert len(cm.enumerate_all(NAT, 2, cm.default_cutoff(NAT, 2, 2))) == 5
    for n in range(1, 7):
        assert len(cm.enumerate_all(NAT, n, (n,))) == 2 ** (n - 1)


# -- 2. Euler characteristic -----------------------------------------------------------------


@criterion(2)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_euler_characteristic(n):
    cells = cm.enumerate_all(NAT, n, cm.default_cutoff(NAT, n, 2))
    assert sum((-1) ** m.dim for m in cells) == 1
    assert CellComplexModel(NAT, n, 2).euler_characteristic() == 1


# -- 3. Borel-Moore homology -----------------------------------------------------------------


@criterion(3)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_bm_homology_of_plane(n):
    assert bm_homology(NAT, n, 2) == {2 * n: 1}


@criterion(3)
def test_bm_homology_of_line():
    assert bm_homology(NAT, 1, 1) == {1: 1}
    assert bm_homology(NAT, 2, 1) == {}
    assert bm_homology(NAT, 3, 1) == {}


@criterion(3)
@pytest.mark.parametrize("spec,n,p,cutoff", [
    (NAT, 1, 2, None), (NAT, 2, 2, None), (NAT, 3, 2, None),
    (NAT, 2, 1, None), (NAT, 3, 1, None),
    (T2, 1, 2, (2, 2)), (T2, 1, 2, (3, 3)), (T2, 1, 2, (3, 4)), (T2, 1, 2, (4, 4)),
])
def test_boundary_squares_to_zero(spec, n, p, cutoff):
    CellComplexModel(spec, n, p, cutoff).chain_complex().check()


# -- 4. fork suprema -------------------------------------------------------------------------


FORK_CATEGORIES = [(NAT, 1, (1, 1)), (NAT, 2, (2, 2)), (NAT, 3, (3, 3)), (T2, 1, (3, 3))]


@criterion(4)
@pytest.mark.parametrize("spec,n,cutoff", FORK_CATEGORIES)
def test_sup_matches_brute_force(spec, n, cutoff):
    cat = TruncatedCategory(spec, n, cutoff)
    anodyne_forks = 0
    for fork in cat.mixed_forks():
        squares = gc.sup(fork)
        assert [sq.apex for sq in squares] == brute_sup(fork)
        h_ano = gc.is_anodyne(fork.horizontal)
        v_ano = gc.is_anodyne(fork.vertical)
        if h_ano or v_ano:
            anodyne_forks += 1
            assert len(squares) == 1
            (sq,) = squares
            if h_ano:
                assert gc.is_anodyne(sq.to_vertical_source)
            if v_ano:
                assert gc.is_anodyne(sq.to_horizontal_source)
    assert anodyne_forks > 0


# -- 5. anodyne classes ----------------------------------------------------------------------


def restrict(classes, objects):
    keep = set(objects)
    out = [tuple(m for m in c if m in keep) for c in classes]
    return sorted([c for c in out if c], key=lambda c: c[0].sort_key())


def refines(fine, coarse):
    where = {m: k for k, c in enumerate(coarse) for m in c}
    return all(len({where[m] for m in c}) == 1 for c in fine)


@criterion(5)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_anodyne_classes_on_complete_categories(n):
    objs = TruncatedCategory(NAT, n, (n, n)).objects
    assert gc.equivalence_classes(objs, "horizontal") == gc.group_by(objs, gc.fnf_key)
    assert gc.equivalence_classes(objs, "full") == gc.group_by(objs, gc.multiset_key)


@criterion(5)
def test_anodyne_classes_on_truth_cutoff():
    objs = TruncatedCategory(T2, 1, (3, 3)).objects
    horizontal_keys = gc.group_by(objs, gc.fnf_key)
    full_keys = gc.group_by(objs, gc.multiset_key)
    # inside the cutoff the zigzags are shorter, so the classes can only be finer
    assert refines(gc.equivalence_classes(objs, "horizontal"), horizontal_keys)
    assert refines(gc.equivalence_classes(objs, "full"), full_keys)
    # one more row and column already hold every connecting zigzag
    ambient = cm.enumerate_all(T2, 1, (4, 4))
    assert restrict(gc.equivalence_classes(ambient, "horizontal"), objs) == horizontal_keys
    assert restrict(gc.equivalence_classes(ambient, "full"), objs) == full_keys


@criterion(5)
@pytest.mark.xfail(strict=True, reason="cutoff boundary: zigzags between some 3x3 matrices pass through 4 rows")
def test_anodyne_classes_inside_truth_cutoff():
    objs = TruncatedCategory(T2, 1, (3, 3)).objects
    assert gc.equivalence_classes(objs, "horizontal") == gc.group_by(objs, gc.fnf_key)


# -- 6. bialgebra axioms ---------------------------------------------------------------------


@criterion(6)
def test_kx_axioms():
    report = bialg.check_axioms(bialg.kx(6), 6)
    assert bialg.axioms_ok(report), report
    # LB3 for k[x] is Vandermonde: C(a+b, c) = sum_k C(a, k) C(b, c-k)
    for a, b in itertools.product(range(1, 6), repeat=2):
        for c in range(1, a + b):
            if a + b <= 6 and c < a + b:
                vander = sum(math.comb(a, k) * math.comb(b, c - k) for k in range(c + 1))
                assert vander == math.comb(a + b, c)


@criterion(6)
def test_z2_truncation():
    A = bialg.preset("group-algebra-z2")
    assert A.mu(1, 1).to_dense() == [[-2]]
    assert A.delta(1, 1).to_dense() == [[1]]
    terms = [t.to_dense()[0][0] for _, t in bialg.lb3_terms(A, 1, 1, 1, 1)]
    assert sorted(terms) == sorted([1, 1, 4, -2, -2, -2, -2])
    assert sum(terms) == -2
    assert (A.delta(1, 1) @ A.mu(1, 1)).to_dense() == [[-2]]
    assert bialg.axioms_ok(bialg.check_axioms(A))


# -- 7. Janus pipeline -----------------------------------------------------------------------


def pipeline_sheaves():
    out = [(f"kx-{n}", bialg.janus_from_bialgebra(bialg.kx(n), n)) for n in (1, 2, 3)]
    out.append(("z2-3x3", bialg.janus_from_bialgebra(bialg.preset("group-algebra-z2"), 1, (3, 3))))
    return out


PIPELINE_IDS = ["kx-1", "kx-2", "kx-3", "z2-3x3"]


@pytest.fixture(scope="module")
def pipeline():
    return {name: (E, janus.cousin(E)) for name, E in pipeline_sheaves()}


@criterion(7)
@pytest.mark.parametrize("name", PIPELINE_IDS)
def test_pipeline_axioms_and_cousin(pipeline, name):
    E, C = pipeline[name]
    assert janus.check_janus(E).ok
    for m in C.category.objects:
        C.value(m).check()
    assert sr.check_functoriality(C) is None
    assert sr.constructibility(C, "S1") == (True, None)
    assert janus.same_janus(janus.cousin_extract(C), E)


@criterion(7)
@pytest.mark.parametrize("name", PIPELINE_IDS)
def test_pipeline_perversity(pipeline, name):
    E, C = pipeline[name]
    window = janus.truncation_window(C.category)
    report = sr.check_perverse(C, window=window)
    assert report.perverse, report.to_json()
    if name.startswith("kx"):
        assert window is None


@criterion(7)
@pytest.mark.xfail(strict=True, reason="cutoff boundary: the shape cutoff leaves homology in stalk degree -c2 "
                                       "and costalk degree c1, outside the untruncated window")
def test_truth_perversity_without_window(pipeline):
    _, C = pipeline["z2-3x3"]
    assert sr.check_perverse(C, require_constructible=False).perverse


@criterion(7)
@pytest.mark.parametrize("name", PIPELINE_IDS)
def test_every_mutation_flips_a_verdict(pipeline, name):
    E, _ = pipeline[name]
    assert janus.mutation_scan(E) == []


# -- 8. duality --------------------------------------------------------------------------------


def duality_presets():
    out = []
    for n in (1, 2, 3):
        out.append((f"kx-{n}", bialg.janus_from_bialgebra(bialg.kx(n), n)))
        out.append((f"dp-{n}", bialg.janus_from_bialgebra(bialg.divided_powers(n), n)))
    for name in ("group-algebra-z2", "function-algebra-z2"):
        out.append((f"{name}-3x3", bialg.janus_from_bialgebra(bialg.preset(name), 1, (3, 3))))
    return out


DUALITY_IDS = [name for name, _ in duality_presets()]


@pytest.fixture(scope="module")
def duality():
    return dict(duality_presets())


@criterion(8)
@pytest.mark.parametrize("name", DUALITY_IDS)
def test_double_dual_on_presets(duality, name):
    ok, degree, wit = janus.double_vertical_dual_check(duality[name])
    assert ok, wit
    assert degree == 0


RANDOM_CASES = [(NAT, 3, (3, 3), seed) for seed in range(12)] + [(T2, 1, (3, 3), seed) for seed in range(8)]


@criterion(8)
@pytest.mark.parametrize("spec,n,cutoff,seed", RANDOM_CASES,
                         ids=[f"{s.kind}-{seed}" for s, _, _, seed in RANDOM_CASES])
def test_double_dual_on_random_sheaves(spec, n, cutoff, seed):
    E = bialg.random_janus_sheaf(spec, n, cutoff, seed)
    assert janus.check_janus(E).ok
    ok, degree, wit = janus.double_vertical_dual_check(E)
    assert ok, wit
    assert degree == 0


@criterion(8)
@pytest.mark.parametrize("name", DUALITY_IDS)
def test_transpose_duality_and_involution(duality, name):
    E = duality[name]
    C = janus.cousin(E)
    D = sr.verdier_dual(C)
    Ct = janus.cousin(janus.transpose_janus(E))
    DD = sr.verdier_dual(D)
    for m in E.category.objects:
        assert D.value(m).homology_dims() == Ct.value(cm.transpose(m)).homology_dims()
        assert DD.value(m).homology_dims() == C.value(m).homology_dims()


@criterion(8)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_constant_sheaves(n):
    cat = TruncatedCategory(NAT, n, (n, n))
    assert sr.check_perverse(sr.constant(cat, -n)).perverse
    report = sr.check_perverse(sr.constant(cat, 0))
    assert not report.minus_ok


# -- 9. braiding coherence ---------------------------------------------------------------------


def nat_objects(max_content):
    out = []
    for c in range(1, max_content + 1):
        out.extend(cm.enumerate_all(NAT, c, (c, c)))
    return out


NAT_PAIRS = [
    (a, b) for a, b in itertools.product(nat_objects(2), repeat=2) if cm.content(a) + cm.content(b) <= 3
]
ONE = ContMatrix.from_nested(T2, [[1]])
TRUTH_OBJECTS = [m for m in cm.enumerate_all(T2, 1, (2, 2))]
TRUTH_PAIRS = [
    (a, b) for a, b in itertools.product(TRUTH_OBJECTS, repeat=2)
    if a.shape[0] + b.shape[0] <= 3 and a.shape[1] + b.shape[1] <= 3
]


@criterion(9)
def test_braiding_over_nat():
    A = bialg.kx(3)
    for a, b in NAT_PAIRS:
        report = bialg.braiding_report(A, [a, b])
        assert report.ok, (a, b, report.to_json())
    one = ContMatrix.from_nested(NAT, [[1]])
    assert bialg.braiding_report(A, [one, one, one]).ok


@criterion(9)
@pytest.mark.parametrize("preset", ["group-algebra-z2", "function-algebra-z2"])
def test_braiding_over_truth(preset):
    A = bialg.preset(preset)
    assert len(TRUTH_PAIRS) > 1
    for a, b in TRUTH_PAIRS:
        report = bialg.braiding_report(A, [a, b], (3, 3))
        assert report.ok, (a, b, report.to_json())
    assert bialg.braiding_report(A, [ONE, ONE, ONE], (3, 3)).ok
