from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from topvertex import flux, minus2
from topvertex import partitions as P
from topvertex.fock import (
    Atom, FockState, OperatorWord, StateVector, TruncationReport, apply_alpha,
    apply_diag, apply_fermion, apply_gamma, apply_shift, f_one, f_two, loop_word,
    psi_mu_element, psi_operator, single_variable, state_from_positions, trace_sector,
)
from topvertex.glue import local_p2, minus2_model
from topvertex.qcoeff import KSeries, QRat, bracket
from topvertex.vertex import vertex

q = QRat.qpow
HALF = F(1, 2)


def basis_states(e_max, n_max=2):
    out = []
    for n in range(-n_max, n_max + 1):
        room = F(e_max) - F(n * n, 2)
        if room < 0:
            continue
        for mu in P.partitions_up_to(int(room)):
            out.append(FockState(n, mu))
    return out


def same(a, b, bound=None):
    d = a - b
    if bound is None:
        return d.is_zero()
    return all(c.truncate(bound).is_zero() for c in d.terms.values())


def triples(total):
    for s in range(total + 1):
        for a in range(s + 1):
            for b in range(s - a + 1):
                for l in P.partitions_of(a):
                    for m in P.partitions_of(b):
                        for n in P.partitions_of(s - a - b):
                            yield l, m, n


partitions = st.integers(0, 8).flatmap(
    lambda n: st.sampled_from(list(P.partitions_of(n))))


# states


@given(partitions)
def test_charge_zero_eigenvalues(mu):
    s = FockState(0, mu)
    assert s.charge == 0
    assert s.energy == P.size(mu)
    assert s.eigen_clk() == (0, P.size(mu), P.kappa(mu))


@given(st.integers(-3, 3), partitions)
def test_positions_round_trip(n, mu):
    s = FockState(n, mu)
    k = len(mu) + 3
    pos = s.positions(k)
    assert pos == sorted(pos)
    assert state_from_positions(pos, pos[-1] + 1) == s
    assert s.eigen_clk()[0] == s.charge


def test_state_vector_arithmetic():
    a = StateVector.basis(0, (1,), 2)
    b = StateVector.basis(0, (1,), -2) + StateVector.basis(1, (), 5)
    s = a + b
    assert s.coeff(FockState(0, (1,))) == 0
    assert s.coeff(FockState(1, ())) == 5
    assert (s - s).is_zero()
    assert StateVector.basis(0, (3,), 1).truncate(2).is_zero()


# fermions


def test_creators_annihilate_vacuum_for_positive_modes():
    for r in [HALF, F(3, 2), F(7, 2)]:
        assert apply_fermion(r, "psi", StateVector.vacuum()).is_zero()
        assert apply_fermion(r, "psi*", StateVector.vacuum()).is_zero()


def test_hook_from_fermion_pair():
    for m in range(4):
        for n in range(4):
            v = apply_fermion(-n - HALF, "psi*", StateVector.vacuum())
            v = apply_fermion(-m - HALF, "psi", v)
            assert v.terms == {FockState(0, P.hook(m, n)): (-1) ** n}


def test_fermion_charges():
    v = apply_fermion(-HALF, "psi", StateVector.vacuum())
    assert [s.charge for s in v.terms] == [1]
    v = apply_fermion(-HALF, "psi*", StateVector.vacuum())
    assert [s.charge for s in v.terms] == [-1]


def test_bad_modes_rejected():
    with pytest.raises(ValueError):
        apply_fermion(1, "psi", StateVector.vacuum())
    with pytest.raises(ValueError):
        apply_fermion(HALF, "chi", StateVector.vacuum())


MODES = [F(2 * k + 1, 2) for k in range(-4, 4)]


def test_clifford_relations():
    for s in basis_states(4):
        v = StateVector({s: 1})
        for r in MODES:
            for t in MODES:
                a = apply_fermion(r, "psi", apply_fermion(t, "psi*", v))
                b = apply_fermion(t, "psi*", apply_fermion(r, "psi", v))
                want = v if r + t == 0 else StateVector()
                assert same(a + b, want), (s, r, t)
                a = apply_fermion(r, "psi", apply_fermion(t, "psi", v))
                b = apply_fermion(t, "psi", apply_fermion(r, "psi", v))
                assert (a + b).is_zero()
                a = apply_fermion(r, "psi*", apply_fermion(t, "psi*", v))
                b = apply_fermion(t, "psi*", apply_fermion(r, "psi*", v))
                assert (a + b).is_zero()


def test_boson_commutator():
    # [alpha_k, alpha_l] = k delta_(k+l)
    for s in basis_states(4):
        v = StateVector({s: 1})
        for k in range(-3, 4):
            for l in range(-3, 4):
                if k == 0 or l == 0:
                    continue
                c = apply_alpha(k, apply_alpha(l, v)) - apply_alpha(l, apply_alpha(k, v))
                assert same(c, v.scale(k) if k + l == 0 else StateVector())


# vertex operators


def test_gamma_minus_on_vacuum():
    t1, t2 = QRat.const(3), QRat.const(5)
    v = apply_gamma(-1, (t1, t2), StateVector.vacuum(QRat.one()), e_max=2)
    assert v.coeff(FockState(0, (1,))) == t1
    # s_(2) = (p1^2 + p2)/2, s_(1,1) = (p1^2 - p2)/2
    assert v.coeff(FockState(0, (2,))) == (t1 * t1 + t2) / 2
    assert v.coeff(FockState(0, (1, 1))) == (t1 * t1 - t2) / 2


def test_gamma_plus_fixes_vacuum():
    v = StateVector.vacuum(QRat.one())
    assert apply_gamma(1, (QRat.const(2), QRat.const(7)), v).terms == v.terms


def test_single_letter_gamma_builds_rows():
    z = q(F(1, 3))
    v = apply_gamma(-1, single_variable(z), StateVector.vacuum(QRat.one()), e_max=5)
    for s, c in v.terms.items():
        assert s.n == 0 and len(s.mu) <= 1
        assert c == z ** P.size(s.mu)
    assert len(v.terms) == 6


def test_gamma_minus_needs_cutoff_and_reports():
    with pytest.raises(ValueError):
        apply_gamma(-1, (1,), StateVector.vacuum())
    with pytest.raises(ValueError):
        apply_gamma(0, (1,), StateVector.vacuum())
    rep = TruncationReport()
    apply_gamma(-1, (1, 1), StateVector.vacuum(), e_max=2, report=rep)
    assert rep.dropped > 0 and rep.max_dropped_energy > 2


def test_gamma_commutation():
    D = 4
    w = KSeries.term(1, D, w=1)
    z = KSeries.term(1, D, z=1)
    factor = (KSeries.one(D) - w * z).inverse()
    for s in basis_states(3, n_max=1):
        v = StateVector({s: KSeries.one(D)})
        e = s.energy + D
        lhs = apply_gamma(1, single_variable(w), apply_gamma(-1, single_variable(z), v, e))
        rhs = apply_gamma(-1, single_variable(z), apply_gamma(1, single_variable(w), v), e)
        assert same(lhs, rhs.scale(factor), D)


# diagonal operators and the shift


def test_cut_and_join_weight_on_row():
    v = apply_diag(lambda C, L, K: q(-K / 2), StateVector.basis(0, (2,), QRat.one()))
    assert v.terms == {FockState(0, (2,)): q(-1)}


def test_kahler_weight_counts_boxes():
    D = 6
    for mu in P.partitions_up_to(4):
        v = apply_diag(lambda C, L, K: KSeries.term(1, D, Q=L), StateVector.basis(0, mu, 1))
        assert v.coeff(FockState(0, mu)) == KSeries.term(1, D, Q=P.size(mu))


def test_flux_conjugation_of_xi():
    D = 1
    for N in range(-2, 3):
        for mu in P.partitions_up_to(3):
            v = StateVector.basis(0, mu, KSeries.one(D))
            w = apply_shift(N, apply_diag(lambda C, L, K: KSeries.term(1, D, xi=C),
                                          apply_shift(-N, v)))
            assert w.terms == {FockState(0, mu): KSeries.term(1, D, xi=-N)}


def conjugated_diag(N, f, v):
    return apply_shift(N, apply_diag(f, apply_shift(-N, v)))


def test_shift_conjugation_of_charge_energy_and_cut_and_join():
    for s in basis_states(6):
        v = StateVector({s: 1})
        for N in range(-2, 3):
            assert same(conjugated_diag(N, lambda C, L, K: C, v),
                        apply_diag(lambda C, L, K: C - N, v))
            assert same(conjugated_diag(N, lambda C, L, K: L, v),
                        apply_diag(lambda C, L, K: L - N * C + F(N * N, 2), v))
            assert same(conjugated_diag(N, lambda C, L, K: K, v),
                        apply_diag(lambda C, L, K: K - 2 * N * L + N * N * C
                                   - F(N * (4 * N * N - 1), 12), v))


def shifted_cutoff(s, N, e):
    # R^(-N) moves a state of charge -n to charge -(n+N); the cutoff follows
    return F(e) - F(s.n * s.n, 2) + F((s.n + N) ** 2, 2)


def test_shift_commutes_with_gammas():
    p = lambda k: q(F(k, 2)) + 2
    for s in basis_states(6):
        v = StateVector({s: QRat.one()})
        for N in range(-2, 3):
            w = apply_shift(N, apply_gamma(1, p, apply_shift(-N, v)))
            assert same(w, apply_gamma(1, p, v))
            w = apply_shift(N, apply_gamma(-1, p, apply_shift(-N, v), shifted_cutoff(s, N, 6)))
            assert same(w, apply_gamma(-1, p, v, 6))


@pytest.mark.parametrize("mu", [(1,), (2,), (1, 1), (2, 1)])
def test_shift_conjugation_of_psi_operator(mu):
    op = psi_operator(mu)
    e = 3
    for s in basis_states(e):
        v = StateVector({s: QRat.one()})
        base = op.apply(v, e)
        for N in range(-2, 3):
            w = apply_shift(N, op.apply(apply_shift(-N, v), shifted_cutoff(s, N, e)))
            assert same(w, base.scale(q(-N * P.size(mu)))), (s, N)


def test_energy_weight_rescales_gamma_arguments():
    # a^L Gamma_-(z) = Gamma_-(a z) a^L and a^L Gamma_+(a z) = Gamma_+(z) a^L
    D = 4
    z = KSeries.term(1, D, z=1)
    a = KSeries.term(1, D, a=1)
    aL = lambda C, L, K: KSeries.term(1, D, a=L)
    for s in basis_states(3, n_max=1):
        v = StateVector({s: KSeries.one(D)})
        e = s.energy + D
        lhs = apply_diag(aL, apply_gamma(-1, single_variable(z), v, e))
        rhs = apply_gamma(-1, single_variable(a * z), apply_diag(aL, v), e)
        assert same(lhs, rhs, D)
        lhs = apply_diag(aL, apply_gamma(1, single_variable(a * z), v))
        rhs = apply_gamma(1, single_variable(z), apply_diag(aL, v))
        assert same(lhs, rhs, D)


def test_energy_weight_conjugation_with_q_power():
    a = q(F(3, 2))
    z = q(F(1, 5)) + 1
    up = lambda C, L, K: a ** L if L.denominator == 1 else q(F(3, 2) * L)
    down = lambda C, L, K: q(-F(3, 2) * L)
    for s in basis_states(6):
        v = StateVector({s: QRat.one()})
        lhs = apply_diag(up, apply_gamma(1, single_variable(z), apply_diag(down, v)))
        assert same(lhs, apply_gamma(1, single_variable(z / a), v))
        lhs = apply_diag(up, apply_gamma(-1, single_variable(z), apply_diag(down, v), 6))
        assert same(lhs, apply_gamma(-1, single_variable(z * a), v, 6))


# the Psi_mu operator


def test_psi_matrix_elements_match_vertex():
    n = 0
    for l, m, nu in triples(4):
        assert psi_mu_element(l, m, nu) == vertex(l, m, nu), (l, m, nu)
        n += 1
    assert n == 86


def test_psi_examples():
    assert psi_mu_element((), (), ()) == QRat.one()
    assert psi_mu_element((1,), (), ()) == vertex((1,), (), ())
    assert psi_mu_element((), (1,), ()) == 1 / bracket(1)


def test_fermion_weights_combine_to_half_integer_exponents():
    for i in range(5):
        for j in range(5):
            c = f_one(j + HALF) * f_two(i + HALF)
            assert c.is_monomial()
            assert all((2 * e).denominator == 1 for e in c.exponents())
    for l, m, nu in triples(3):
        for e in psi_mu_element(l, m, nu).exponents():
            assert (2 * e).denominator == 1
    for mu in [(1,), (2, 1), (3, 1, 1), (2, 2)]:
        assert all((2 * e).denominator == 1 for e in psi_operator(mu).scalar.exponents())


def test_single_fermion_weights_carry_sixteenths():
    for k in range(-3, 4):
        assert [e.denominator for e in f_one(k + HALF).num.terms] == [16]
        assert [e.denominator for e in f_two(k + HALF).num.terms] == [16]


def test_psi_element_refuses_small_cutoff():
    with pytest.raises(ValueError, match="refusing"):
        psi_mu_element((2,), (1,), (), e_max=1)


# words and traces


def test_word_charge_and_atoms():
    w = OperatorWord([Atom("shift", 2), Atom("psi", -HALF), Atom("psi*", -HALF), Atom("scalar", 3)])
    assert w.charge_shift == 2
    v = w.apply(StateVector.vacuum(), 0)
    assert v.terms == {FockState(-2, (1,)): 3}
    with pytest.raises(ValueError):
        OperatorWord([Atom("bogus")]).apply(StateVector.vacuum(), 0)


def test_identity_word_counts_partitions():
    D = 2
    tr = trace_sector(OperatorWord([]), D, 1)
    count = sum(P.count_partitions(k) for k in range(D + 1))
    assert tr == KSeries({(x, ()): QRat.const(count) for x in (-1, 0, 1)}, D)


@pytest.mark.parametrize("lam", [(), (1,)])
def test_p2_trace_matches_flux_sum(lam):
    model = local_p2()
    tr = trace_sector(loop_word(lam, model, 1), 1, 1)
    assert tr == flux.total(model, 1, 1, N_max=1).coefficient(lam)


def test_p2_trace_selects_product_convention():
    model = local_p2()
    tr = trace_sector(loop_word((), model, 2), 2, 1)
    assert tr == flux.total(model, 2, 0, N_max=1).coefficient(())
    assert tr != flux.total(model, 2, 0, N_max=1, convention="per_name").coefficient(())


def test_minus2_trace_matches_closed_form():
    model = minus2_model(1)
    tr = trace_sector(loop_word((), model, 1), 1, 1)
    assert tr == flux.total(model, 1, 0, N_max=1).coefficient(())
    assert tr == minus2.const_term_closed(model, 1, 1)
