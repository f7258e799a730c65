import itertools

import pytest

from cmjanus import bialg, janus
from cmjanus import contmatrix as cm
from cmjanus import grocat as gc
from cmjanus import sheafrep as sr
from cmjanus.contmatrix import ContMatrix
from cmjanus.exactla import Mat
from cmjanus.grocat import TruncatedCategory
from cmjanus.monoid import MonoidSpec

NAT = MonoidSpec.nat()


def all_identity(n):
    cat = TruncatedCategory(NAT, n, (n, n))
    dims = {m: 1 for m in cat.objects}
    dh, dv = {}, {}
    for m in cat.objects:
        for nu, i, _ in gc.elementary_arrows(m):
            (dh if nu == 1 else dv)[(m, i)] = Mat.identity(1)
    return janus.JanusData(cat, dims, dh, dv)


def preset_sheaves():
    out = []
    for name in ("kx", "divided-powers"):
        for n in (1, 2, 3):
            out.append((f"{name}-{n}", bialg.janus_from_bialgebra(bialg.preset(name, n), n)))
    out.append(("z2-2x2", bialg.janus_from_bialgebra(bialg.preset("group-algebra-z2"), 1, (2, 2))))
    out.append(("fz2-2x2", bialg.janus_from_bialgebra(bialg.preset("function-algebra-z2"), 1, (2, 2))))
    return out


PRESET_IDS = [name for name, _ in preset_sheaves()]


@pytest.fixture(scope="module")
def presets():
    return dict(preset_sheaves())


def test_all_identity_fails_only_the_fork_relation():
    E = all_identity(2)
    verdict = janus.check_janus(E)
    assert verdict.js1 and verdict.js3
    assert not verdict.js2
    # the offending fork is the one whose Sup has two squares: (1,1) over (2)
    wit = verdict.witnesses["js2"]
    fork = next(
        f for f in E.category.mixed_forks()
        if f.horizontal.to_json() == wit["horizontal"] and f.vertical.to_json() == wit["vertical"]
    )
    assert len(gc.sup(fork)) == 2
    lhs, rhs = janus.fork_sides(E, fork)
    assert lhs.to_dense() == [[1]] and rhs.to_dense() == [[2]]


@pytest.mark.parametrize("name", PRESET_IDS)
def test_presets_are_janus(presets, name):
    assert janus.check_janus(presets[name]).ok


def test_empty_support_is_vacuously_janus():
    cat = TruncatedCategory(NAT, 2, (2, 2))
    E = janus.JanusData(cat, {}, {}, {})
    assert janus.check_janus(E).ok
    assert all(not janus.cousin(E).value(m).dims for m in cat.objects)


def test_singular_anodyne_map_breaks_js3():
    E = bialg.janus_from_bialgebra(bialg.kx(2), 2)
    m = ContMatrix.from_nested(NAT, [[1, 0], [0, 1]])
    bad = E.copy()
    bad.dh[(m, 0)] = Mat(1, 1)
    verdict = janus.check_janus(bad)
    assert not verdict.js3


@pytest.mark.parametrize("name", PRESET_IDS)
def test_cousin_is_a_functor_of_complexes(presets, name):
    C = janus.cousin(presets[name])
    for m in C.category.objects:
        C.value(m).check()
    assert sr.check_functoriality(C) is None


def test_corrupted_vertical_map_breaks_d_squared():
    E = bialg.janus_from_bialgebra(bialg.kx(3), 3)
    top = ContMatrix.from_nested(NAT, [[3]])
    assert janus.cousin(E).value(top).is_complex()
    bad = E.copy()
    row = ContMatrix.from_nested(NAT, [[1, 1, 1]])
    # the two vertical paths (1 1 1) -> (3) no longer agree
    bad.dv[(row, 0)] = E.v(row, 0).scale(5)
    assert not janus.check_janus(bad).js1
    assert not janus.cousin(bad).value(top).is_complex()


@pytest.mark.parametrize("name", PRESET_IDS)
def test_vertical_dual_matches_cousin(presets, name):
    E = presets[name]
    C = janus.cousin(E)
    D = janus.vertical_dual(E)
    for m in E.category.objects:
        assert D.value(m).homology_dims() == C.value(m).homology_dims()


@pytest.mark.parametrize("name", PRESET_IDS)
def test_double_vertical_dual_in_degree_zero(presets, name):
    ok, degree, wit = janus.double_vertical_dual_check(presets[name])
    assert ok, wit
    assert degree == 0


@pytest.mark.parametrize("name", PRESET_IDS)
def test_transpose_is_an_involution(presets, name):
    E = presets[name]
    Et = janus.transpose_janus(E)
    assert janus.check_janus(Et).ok
    back = janus.transpose_janus(Et)
    assert back.category.cutoff == E.category.cutoff
    assert janus.same_janus(back, E)


def test_transpose_swaps_kx_and_divided_powers():
    for n in (1, 2, 3):
        a = janus.transpose_janus(bialg.janus_from_bialgebra(bialg.kx(n), n))
        b = bialg.janus_from_bialgebra(bialg.divided_powers(n), n)
        assert janus.same_janus(a, b)


def test_transpose_of_broken_sheaf_stays_broken():
    Et = janus.transpose_janus(all_identity(2))
    verdict = janus.check_janus(Et)
    assert not verdict.js2 and verdict.js1 and verdict.js3


@pytest.mark.parametrize("name", PRESET_IDS)
def test_cousin_round_trip(presets, name):
    E = presets[name]
    assert janus.same_janus(janus.cousin_extract(janus.cousin(E)), E)


def test_round_trip_of_gauged_sheaf():
    E = bialg.random_janus_sheaf(NAT, 3, (3, 3), seed=11)
    assert janus.same_janus(janus.cousin_extract(janus.cousin(E)), E)


@pytest.mark.parametrize("name", PRESET_IDS)
def test_json_round_trip(presets, name):
    E = presets[name]
    again = janus.JanusData.from_json(E.to_json())
    assert janus.same_janus(again, E)


def test_from_json_rejects_wrong_shape():
    E = bialg.janus_from_bialgebra(bialg.kx(2), 2)
    obj = E.to_json()
    obj["deltas_h"][0]["matrix"] = {"shape": [2, 2], "rows": [[1, 0], [0, 1]]}
    with pytest.raises(janus.JanusError):
        janus.JanusData.from_json(obj)


@pytest.mark.parametrize("n", [2, 3])
def test_every_mutation_is_caught(n):
    E = bialg.janus_from_bialgebra(bialg.kx(n), n)
    assert janus.mutation_scan(E) == []


def test_cousin_degrees_sit_between_cutoff_bounds():
    E = bialg.janus_from_bialgebra(bialg.kx(3), 3)
    C = janus.cousin(E)
    c2 = C.category.cutoff[1]
    for m in C.category.objects:
        for q in C.value(m).dims:
            assert -c2 <= q <= -m.shape[1]


def test_truncation_window():
    cat = TruncatedCategory(NAT, 3, (3, 3))
    assert janus.truncation_window(cat) is None
    assert janus.truncation_window(TruncatedCategory(NAT, 3, (2, 3))) == (-3, 2)
    truth = MonoidSpec.truth(2)
    assert janus.truncation_window(TruncatedCategory(truth, 1, (3, 2))) == (-2, 3)


def test_brute_force_fork_relation_on_kx():
    # independent oracle: for kx every map is a binomial, so JS2 becomes
    # an identity between sums of products of binomials computed by hand
    E = bialg.janus_from_bialgebra(bialg.kx(2), 2)
    for fork in E.category.mixed_forks():
        lhs, rhs = janus.fork_sides(E, fork)
        assert lhs == rhs
    m = ContMatrix.from_nested(NAT, [[1], [1]])
    assert E.h(m, 0).to_dense() == [[2]]
    assert E.v(ContMatrix.from_nested(NAT, [[1, 1]]), 0).to_dense() == [[1]]
