import math
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmjanus import bialg, janus
from cmjanus import contmatrix as cm
from cmjanus.contmatrix import ContMatrix
from cmjanus.exactla import Mat
from cmjanus.monoid import MonoidSpec

NAT = MonoidSpec.nat()
TRUTH = MonoidSpec.truth(2)


def expand_binomial_power(k):
    """Coefficients of (u + v)^k by repeated polynomial multiplication."""
    poly = Counter({(0, 0): 1})
    for _ in range(k):
        nxt = Counter()
        for (a, b), c in poly.items():
            nxt[(a + 1, b)] += c
            nxt[(a, b + 1)] += c
        poly = nxt
    return poly


def test_kx_structure_maps_match_polynomial_expansion():
    A = bialg.kx(6)
    for total in range(2, 7):
        poly = expand_binomial_power(total)
        for a in range(1, total):
            assert A.delta(a, total - a).to_dense() == [[poly[(a, total - a)]]]
            assert A.mu(a, total - a).to_dense() == [[1]]


@pytest.mark.parametrize("builder", [bialg.kx, bialg.divided_powers])
def test_axioms_hold_up_to_six(builder):
    report = bialg.check_axioms(builder(6), 6)
    assert bialg.axioms_ok(report), report


def test_trivial_bialgebra():
    A = bialg.trivial()
    assert A.dims == {0: 1}
    assert bialg.axioms_ok(bialg.check_axioms(A, 4))


def test_broken_coproduct_is_caught():
    A = bialg.kx(4)
    A.delta_maps[(1, 2)] = Mat.from_dense([[4]])
    report = bialg.check_axioms(A, 4)
    assert not report["LB3"][0]
    assert report["LB3"][1] is not None


def test_non_identity_zero_component_is_caught():
    A = bialg.kx(3)
    A.mu_maps[(0, 2)] = Mat.from_dense([[3]])
    ok, wit = bialg.check_axioms(A, 3)["LB0"]
    assert not ok and wit == {"mu": [0, 2]}


def test_z2_group_algebra_values():
    # kernel of the counit is spanned by g - 1: (g-1)^2 = -2(g-1),
    # and the reduced coproduct of g - 1 is (g-1) (x) (g-1)
    A = bialg.preset("group-algebra-z2")
    assert A.spec == TRUTH
    assert A.dims == {0: 1, 1: 1}
    assert A.mu(1, 1).to_dense() == [[-2]]
    assert A.delta(1, 1).to_dense() == [[1]]
    assert bialg.axioms_ok(bialg.check_axioms(A))


def test_z2_function_algebra_values():
    # delta_1 is idempotent; its reduced coproduct is -2 delta_1 (x) delta_1
    A = bialg.preset("function-algebra-z2")
    assert A.mu(1, 1).to_dense() == [[1]]
    assert A.delta(1, 1).to_dense() == [[-2]]
    assert bialg.axioms_ok(bialg.check_axioms(A))


def test_lb3_terms_for_truth():
    A = bialg.preset("group-algebra-z2")
    terms = bialg.lb3_terms(A, 1, 1, 1, 1)
    assert len(terms) == 7
    values = sorted(t.to_dense()[0][0] for _, t in terms)
    assert values == sorted([1, -2, 1, -2, -2, -2, 4])
    assert sum(values) == -2 == (A.delta(1, 1) @ A.mu(1, 1)).to_dense()[0][0]


@pytest.mark.parametrize("order", [2, 3, 4])
def test_group_and_function_algebras(order):
    for build in (bialg.group_algebra, bialg.function_algebra):
        B = build(order)
        assert B.check() == []
        A = bialg.truncate_unital(B)
        assert A.dim(1) == order - 1
        assert bialg.axioms_ok(bialg.check_axioms(A))


def test_broken_unital_bialgebra_is_rejected():
    B = bialg.group_algebra(2)
    B.delta = B.delta.scale(2)
    assert "counit" in B.check()
    with pytest.raises(bialg.BialgebraError):
        bialg.truncate_unital(B)


def test_unknown_preset():
    for name in ("nope", "group-algebra-z", "group-algebra-z0"):
        with pytest.raises(bialg.BialgebraError):
            bialg.preset(name)


def test_json_round_trip():
    for A in (bialg.kx(4), bialg.preset("function-algebra-z3")):
        again = bialg.GradedBialgebra.from_json(A.to_json())
        assert again.to_json() == A.to_json()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_janus_sheaf_of_kx(n):
    E = bialg.janus_from_bialgebra(bialg.kx(n), n)
    assert janus.check_janus(E).ok


def test_janus_sheaf_of_z3_on_truth():
    E = bialg.janus_from_bialgebra(bialg.preset("group-algebra-z3"), 1, (2, 3))
    assert janus.check_janus(E).ok
    one = ContMatrix.from_nested(TRUTH, [[1, 1], [1, 0]])
    assert E.dim(one) == 8


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4))
def test_word_evaluation_on_kx(m, n):
    A = bialg.kx(m + n)
    E = bialg.BialgebraJanus(A)
    assert bialg.evaluate_word(E, bialg.multiplication_word(NAT, m, n)).to_dense() == [[1]]
    assert bialg.evaluate_word(E, bialg.comultiplication_word(NAT, m, n)).to_dense() == [[math.comb(m + n, m)]]


def test_word_evaluation_on_z2():
    E = bialg.BialgebraJanus(bialg.preset("group-algebra-z2"))
    assert bialg.evaluate_word(E, bialg.multiplication_word(TRUTH, 1, 1)).to_dense() == [[-2]]
    assert bialg.evaluate_word(E, bialg.comultiplication_word(TRUTH, 1, 1)).to_dense() == [[1]]


def test_word_must_compose():
    word = bialg.multiplication_word(NAT, 1, 2)
    other = bialg.multiplication_word(NAT, 2, 2)
    with pytest.raises(bialg.BialgebraError):
        word.then(other).end()


def test_r_is_the_swap_for_z3():
    o = ContMatrix.from_nested(TRUTH, [[1]])
    E = bialg.BialgebraJanus(bialg.preset("group-algebra-z3"))
    assert bialg.braiding(E, [o, o]) == bialg.swap_map(2, 2)


def test_braiding_report_for_kx_triple():
    one = ContMatrix.from_nested(NAT, [[1]])
    report = bialg.braiding_report(bialg.kx(3), [one, one, one])
    assert report.ok, report.to_json()


def test_braiding_report_for_kx_pairs():
    objs = [ContMatrix.from_nested(NAT, x) for x in ([[1]], [[2]], [[1, 1]], [[1], [1]])]
    for a in objs:
        for b in objs:
            if cm.content(a) + cm.content(b) > 3:
                continue
            report = bialg.braiding_report(bialg.kx(3), [a, b])
            assert report.ok, report.to_json()
            assert report.details["hexagons"] == "need three objects"


def test_braiding_report_rejects_bad_input():
    one = ContMatrix.from_nested(TRUTH, [[1]])
    A = bialg.preset("group-algebra-z2")
    with pytest.raises(bialg.BialgebraError):
        bialg.braiding_report(A, [one, one, one], (2, 2))
    with pytest.raises(bialg.BialgebraError):
        bialg.braiding_report(A, [one])


def test_random_sheaves_are_janus_and_reproducible():
    a = bialg.random_janus_sheaf(NAT, 2, (2, 2), seed=5)
    b = bialg.random_janus_sheaf(NAT, 2, (2, 2), seed=5)
    assert janus.same_janus(a, b)
    assert janus.check_janus(a).ok


def test_random_invertible_is_invertible():
    import random

    rng = random.Random(0)
    from cmjanus.exactla import is_invertible

    for size in range(1, 6):
        assert is_invertible(bialg.random_invertible(size, rng))
