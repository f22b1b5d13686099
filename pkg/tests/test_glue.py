import pytest

from topvertex import partitions as P
from topvertex.glue import LoopModel, closed, local_p2, minus2_model, one_brane, open_amplitude
from topvertex.qcoeff import KSeries, QRat, bracket
from topvertex.vertex import vertex

from p2_data import OPEN, b


def test_empty_tuple_only_at_weight_zero():
    for model in (local_p2(), minus2_model(2)):
        assert open_amplitude([()] * model.M, model, 0) == KSeries.one(0)
        assert closed(model, 0) == KSeries.one(0)


def test_leading_open_term():
    s = open_amplitude([(1,), (), ()], local_p2(), 0)
    assert s.constant() == bracket(1).inverse()


def test_closed_p2_first_order():
    assert closed(local_p2(), 1).coeff(Q=1) == -3 * b(1, -2)


def test_closed_p2_matches_reference_through_q3():
    s = closed(local_p2(), 3)
    for d, c in enumerate(OPEN[()]):
        assert s.coeff(Q=d) == c


@pytest.mark.parametrize("lam", [(1,), (1, 1), (2, 1), (2, 2)])
def test_one_brane_matches_reference(lam):
    s = one_brane(lam, local_p2(), len(OPEN[lam]) - 1)
    for d, c in enumerate(OPEN[lam]):
        assert s.coeff(Q=d) == c, d


def test_one_brane_two_low_orders():
    s = one_brane((2,), local_p2(), 1)
    assert s.coeff(Q=0) == OPEN[(2,)][0]
    assert s.coeff(Q=1) == OPEN[(2,)][1]


def test_weight_zero_is_the_vertex():
    for model in (local_p2(), minus2_model(2)):
        for lam in P.partitions_up_to(4):
            s = one_brane(lam, model, 0)
            assert s.constant() == vertex((), lam, ())


def test_transpose_mirror():
    model = local_p2()
    for lam in P.partitions_up_to(4):
        a = one_brane(lam, model, 3)
        t = one_brane(P.transpose(lam), model, 3)
        for d in range(4):
            assert a.coeff(Q=d).invert_q() * (-1) ** P.size(lam) == t.coeff(Q=d)


def test_cyclic_relabeling():
    model = LoopModel(3, (1, -1, 0), ("A", "B", "C"))
    ref = closed(model, 2)
    for k in range(1, 3):
        assert closed(model.rotate(k), 2) == ref


def test_identified_names_agree_with_distinct_names():
    distinct = LoopModel(3, (1, 1, 1), ("Q1", "Q2", "Q3"))
    assert closed(distinct, 2).rename({"Q1": "Q", "Q2": "Q", "Q3": "Q"}) == closed(local_p2(), 2)


def test_model_validation():
    with pytest.raises(ValueError):
        LoopModel(2, (1,), ("Q", "Q"))
    with pytest.raises(ValueError):
        LoopModel(0, (), ())
    with pytest.raises(ValueError):
        LoopModel.from_json('{"M": 1, "gamma": [1]}')
    m = LoopModel.from_json('{"M":3,"gamma":[1,1,1],"kahler":["Q","Q","Q"]}')
    assert m == local_p2()
    assert LoopModel.from_json(m.to_json()) == m


def test_open_amplitude_sums_over_tuples():
    # hand-rolled weight-1 shell for a single-vertex loop
    model = LoopModel(1, (0,), ("Q",))
    s = open_amplitude([()], model, 1)
    mu = (1,)
    # gluing pattern W_{mu^t, lambda, mu}
    expected = vertex(P.transpose(mu), (), mu) * QRat.qpow(0)
    assert s.coeff(Q=1) == expected
