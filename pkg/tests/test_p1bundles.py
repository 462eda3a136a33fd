"""Glued-bundle section counts against hand enumerations, plus the
invariance properties of the splitting type."""

import random

import pytest

from loopgr import (
    QQ,
    LaurentSeries,
    LoopMatrix,
    MarkedPoint,
    ModificationDatum,
    RationalFunction,
    all_strata_zero,
    elementary_loop,
    expand_at,
    h0,
    is_isomorphic,
    is_trivial,
    mat_mul,
    modify,
    monomial_loop,
    random_loop,
    random_positive,
    splitting_type,
    strata_of,
    stratum,
)
from loopgr.errors import DomainError, MarkedPointError

from conftest import rand_exact_series


def one_point(loop, r="0"):
    return ModificationDatum.at_points(QQ, [r], [loop])


def RF(num, den=((0, 1),)):
    return RationalFunction.from_terms(QQ, num, den)


def unipotent():
    return elementary_loop(QQ, 2, 0, 1, LaurentSeries.t_power(QQ, -1))


# ---------------------------------------------------------------------------
# expand_at


def test_expand_at_linear():
    d = one_point(LoopMatrix.identity(QQ, 1), r="2")
    out = expand_at([RF([(1, 1)])], d, 0)
    assert out[0] == LaurentSeries.from_terms(QQ, [(0, 2), (1, 1)])


def test_expand_at_own_pole():
    d = one_point(monomial_loop(QQ, (-1,)), r="3")
    out = expand_at([RF([(0, 1)], [(0, -3), (1, 1)])], d, 0)
    assert out[0] == LaurentSeries.t_power(QQ, -1)


def test_expand_at_two_pole_product():
    # 1/((t - r1)(t - r2)) at r1 with r1 - r2 = 1: t^-1 (1 + t)^-1
    d = ModificationDatum.at_points(
        QQ, ["1", "0"], [monomial_loop(QQ, (-1,)), monomial_loop(QQ, (-1,))]
    )
    f = RF([(0, 1)], [(1, 1), (2, 1)])  # 1/(t(t+... wait: (t-1)(t-0) = t^2 - t
    f = RF([(0, 1)], [(1, -1), (2, 1)])
    out = expand_at([f], d, 0, precision=5)[0]
    # oracle: product of the separate expansions
    a = RF([(0, 1)], [(0, -1), (1, 1)]).expand_at(1, 8)
    b = RF([(0, 1)], [(0, 0), (1, 1)]).expand_at(1, 8)
    assert out.agrees_with(a.mul(b))
    assert out.coefficient(-1) == 1 and out.coefficient(0) == -1 and out.coefficient(1) == 1


def test_expand_at_rejects_alien_poles():
    d = one_point(LoopMatrix.identity(QQ, 1), r="0")
    with pytest.raises(DomainError):
        expand_at([RF([(0, 1)], [(0, -5), (1, 1)])], d, 0)


# ---------------------------------------------------------------------------
# h0 hand oracles


def test_h0_line_bundle_trivial():
    # O on P^1: h0(m) = m + 1 for m >= 0, else 0
    d = one_point(LoopMatrix.identity(QQ, 1))
    assert [h0(d, m) for m in (-2, -1, 0, 1, 2)] == [0, 0, 1, 2, 3]


def test_h0_degree_one_bundle():
    # loop (t^-1) at r = 0: sections with pole order <= 1 at 0 and <= m at
    # infinity are spanned by 1/t, 1, t, ..., t^m, so h0 = m + 2 for m >= -1
    d = one_point(monomial_loop(QQ, (-1,)))
    assert [h0(d, m) for m in (-3, -2, -1, 0, 1, 2)] == [0, 0, 1, 2, 3, 4]


def test_h0_unipotent_by_hand():
    # alpha = [[1, t^-1], [0, 1]] at r = 0, twist 0.  Candidates
    # v = (w1/t, w2/t) with deg wi <= 1; alpha^-1 v = (v1 - t^-1 v2, v2).
    # Pole-freeness forces w2(0) = 0 and w1(0) = w2'(0): two independent
    # conditions on four unknowns, so h0 = 2.
    d = one_point(unipotent())
    assert h0(d, 0) == 2


def test_h0_empty_datum():
    d = ModificationDatum.empty(QQ, 2)
    assert h0(d, 0) == 2
    assert h0(d, 1) == 4
    assert h0(d, -1) == 0
    assert splitting_type(d).a == (0, 0)


def test_affine_and_infinity_presentations_agree():
    # the same monomial twist presented at an affine point and at infinity
    # must give isomorphic bundles: a cross-check of the two code paths
    rng = random.Random("p1-inf-cross")
    for _ in range(8):
        n = rng.choice((1, 2))
        lam = tuple(rng.randint(-2, 2) for _ in range(n))
        d_aff = one_point(monomial_loop(QQ, lam))
        d_inf = ModificationDatum(QQ, n, (), (), monomial_loop(QQ, lam))
        assert splitting_type(d_aff) == splitting_type(d_inf)
        assert is_isomorphic(d_aff, d_inf)


def test_h0_infinity_loop_only():
    # loop (s^-1) at infinity: the twisted lattice allows pole order m + 1
    d = ModificationDatum(QQ, 1, (), (), monomial_loop(QQ, (-1,)))
    assert [h0(d, m) for m in (-3, -2, -1, 0, 1)] == [0, 0, 1, 2, 3]
    assert splitting_type(d).a == (1,)
    assert strata_of(d)[0].entries == (-1,)


# ---------------------------------------------------------------------------
# splitting types


def test_splitting_identity():
    d = ModificationDatum.at_points(
        QQ, ["0", "1"], [LoopMatrix.identity(QQ, 2), LoopMatrix.identity(QQ, 2)]
    )
    assert splitting_type(d).a == (0, 0)
    assert is_trivial(d)


def test_splitting_diag_versus_unipotent_separation():
    # same stratum (1, -1), different bundles: the extension splits
    diag = one_point(monomial_loop(QQ, (-1, 1)))
    assert splitting_type(diag).a == (1, -1)
    assert stratum(diag.loops[0]).entries == (1, -1)
    uni = one_point(unipotent())
    assert splitting_type(uni).a == (0, 0)
    assert stratum(uni.loops[0]).entries == (1, -1)
    assert is_trivial(uni) and not is_trivial(diag)


def test_monomial_loop_splitting_is_negated_sort():
    rng = random.Random("p1-monomial")
    for _ in range(10):
        lam = [rng.randint(-2, 2) for _ in range(2)]
        d = one_point(monomial_loop(QQ, lam))
        assert splitting_type(d).a == tuple(sorted((-x for x in lam), reverse=True))


def test_is_isomorphic_same_degree_one():
    d1 = one_point(monomial_loop(QQ, (-1,)), r="0")
    d2 = one_point(monomial_loop(QQ, (-1,)), r="1")
    assert is_isomorphic(d1, d2)
    assert not is_isomorphic(d1, one_point(LoopMatrix.identity(QQ, 1)))


def test_degree_law_random():
    rng = random.Random("p1-degree")
    for _ in range(20):
        n = rng.choice((1, 2))
        pts, loops = [], []
        for r in ("0", "1"):
            if rng.random() < 0.8:
                pts.append(r)
                loops.append(random_loop(n, rng.randint(0, 2), seed=rng.randrange(10**6)))
        inf = (
            random_loop(n, 1, seed=rng.randrange(10**6)) if rng.random() < 0.4 else None
        )
        if not pts and inf is None:
            continue
        d = ModificationDatum(QQ, n, tuple(pts), tuple(loops), inf)
        degree = -sum(lp.det().valuation for lp in list(loops) + ([inf] if inf else []))
        assert splitting_type(d).degree() == degree


def test_gluing_locality_identity_point():
    base = one_point(monomial_loop(QQ, (-1, 1)))
    bigger = modify(base, "5", LoopMatrix.identity(QQ, 2))
    assert splitting_type(bigger) == splitting_type(base)


def test_positive_right_multiplication_irrelevant():
    rng = random.Random("p1-positive")
    for _ in range(10):
        lp = random_loop(2, 1, seed=rng.randrange(10**6))
        d = one_point(lp)
        p = random_positive(2, seed=rng.randrange(10**6))
        d2 = one_point(mat_mul(lp, LoopMatrix(p.rows)))
        assert splitting_type(d) == splitting_type(d2)


# ---------------------------------------------------------------------------
# global re-trivialization

from conftest import global_rational_loop, retrivialize


def test_global_retrivialization_invariance():
    rng = random.Random("p1-retriv")
    for _ in range(8):
        pts = ["0", "1"]
        loops = [random_loop(2, 1, seed=rng.randrange(10**6)) for _ in pts]
        d = ModificationDatum.at_points(QQ, pts, loops)
        m = global_rational_loop(QQ, [QQ.of(p) for p in pts], rng)
        d2 = retrivialize(d, m)
        assert splitting_type(d2) == splitting_type(d)


# ---------------------------------------------------------------------------
# strata and triviality


def test_strata_of_mixed_loops():
    d = ModificationDatum.at_points(
        QQ, ["0", "1"], [monomial_loop(QQ, (1, -1)), unipotent()]
    )
    assert [lam.entries for lam in strata_of(d)] == [(1, -1), (1, -1)]
    assert not all_strata_zero(d)


def test_all_strata_zero_on_positive_loops():
    rng = random.Random("p1-strata0")
    for _ in range(10):
        loops = [
            LoopMatrix(random_positive(2, seed=rng.randrange(10**6)).rows)
            for _ in range(2)
        ]
        d = ModificationDatum.at_points(QQ, ["0", "1"], loops)
        assert all_strata_zero(d)
        assert is_trivial(d)


def test_stratum_zero_implies_trivial_but_not_conversely():
    # the converse fails: the unipotent datum is trivial with nonzero stratum
    uni = one_point(unipotent())
    assert is_trivial(uni)
    assert not all_strata_zero(uni)


# ---------------------------------------------------------------------------
# h0 shape and modification


def test_h0_increments_monotone_bounded():
    rng = random.Random("p1-shape")
    for _ in range(6):
        n = rng.choice((1, 2))
        lp = random_loop(n, 2, seed=rng.randrange(10**6))
        d = one_point(lp)
        lo, hi = -2 * n * 2 - 1, 2 * n * 2 + 1
        table = [h0(d, m) for m in range(lo, hi + 1)]
        deltas = [b - a for a, b in zip(table, table[1:])]
        assert all(0 <= x <= n for x in deltas)
        assert all(a <= b for a, b in zip(deltas, deltas[1:]))
        assert deltas[-1] == n


def test_modify_append_and_compose():
    d = ModificationDatum.empty(QQ, 2)
    d1 = modify(d, "0", monomial_loop(QQ, (-1, 1)))
    assert splitting_type(d1).a == (1, -1)
    d2 = modify(d1, "0", monomial_loop(QQ, (1, -1)))
    assert len(d2.points) == 1
    assert splitting_type(d2).a == (0, 0)
    d3 = modify(d1, "1", LoopMatrix.identity(QQ, 2))
    assert len(d3.points) == 2
    assert splitting_type(d3) == splitting_type(d1)


def test_marked_points_need_unit_differences():
    from loopgr import ArtinianRing

    A = ArtinianRing(QQ, 2)
    x = A.gen()
    with pytest.raises(MarkedPointError):
        ModificationDatum(
            A,
            1,
            (MarkedPoint(A.zero), MarkedPoint(x)),
            (LoopMatrix.identity(A, 1), LoopMatrix.identity(A, 1)),
        )


def test_datum_validation():
    with pytest.raises(MarkedPointError):
        ModificationDatum.at_points(
            QQ, ["1", "1"], [LoopMatrix.identity(QQ, 1), LoopMatrix.identity(QQ, 1)]
        )
    with pytest.raises(DomainError):
        ModificationDatum.at_points(QQ, ["0"], [LoopMatrix.identity(QQ, 1)]).with_infinity(
            LoopMatrix.identity(QQ, 2)
        )
