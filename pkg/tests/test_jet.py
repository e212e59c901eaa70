import random

import pytest

from cohoma import apply, commutator
from cohoma import jet
from cohoma.errors import DegreeMismatch, NotClosed
from cohoma.sampling import random_homogeneous


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_canonical_relations(n):
    p = jet.build_jet([jet.JetField("u", 1)], n, 3)
    assert jet.check_jet_relations(p).ok


def test_two_fields_relations():
    p = jet.build_jet([jet.JetField("u", 2)], 2, 3)
    assert jet.check_jet_relations(p).ok


def test_qk_on_du():
    p = jet.build_jet([jet.JetField("u", 2)], 2, 2)
    du = p.du(1)
    L_du = sum((p.du(1, (mu,)) * p.dx(mu) for mu in (1, 2)), p.alg.zero())
    assert apply(commutator(p.Q, p.K), du) == L_du == apply(p.L, du)
    assert apply(p.Q, apply(p.Q, p.u(1))) == 0


def test_sigma_sequence_values():
    p = jet.sigma(2)
    seq = jet.standard_k_sequence(p, jet.seed(p))
    assert seq.render() == [
        "O[0] = 2*du[1]*du[2]",
        "O[1] = 2*dx[1]*u[1;1]*du[2] - 2*dx[1]*u[2;1]*du[1] + 2*dx[2]*u[1;2]*du[2] - 2*dx[2]*u[2;2]*du[1]",
        "O[2] = -2*dx[1]*dx[2]*u[1;1]*u[2;2] + 2*dx[1]*dx[2]*u[1;2]*u[2;1]",
    ]
    assert jet.verify_descent(p, seq).ok


def test_pullback_conventions():
    p = jet.sigma(2)
    first = jet.pullback_observable(p, p.meta["alpha"])
    second = jet.pullback_observable(p, p.meta["alpha"], convention="second")
    assert jet.verify_descent(p, first).ok
    assert not jet.verify_descent(p, second).ok
    assert jet.verify_de_rham_descent(p, second).ok
    # the two differ exactly by (-1)^(k(k-1)/2)
    assert [a == b for a, b in zip(first.O, second.O)] == [True, True, False]
    assert first.O[2] == -second.O[2]
    with pytest.raises(ValueError):
        jet.pullback_observable(p, p.meta["alpha"], convention="third")


def test_mtheory_binomials():
    p = jet.mtheory()
    seq = jet.standard_k_sequence(p, jet.seed(p))
    lit = jet.pullback_observable(p, p.meta["alpha"], convention="second").O
    signs = [1, 1, -1, -1]
    assert [o == lit[k].scale(s) for k, (o, s) in enumerate(zip(seq.O, signs))] == [True] * 4
    assert [len(o) for o in seq.O] == [7, 7 * 9, 7 * 18, 7 * 6]


def test_constant_seed():
    p = jet.tqm(2)
    c = p.alg.const(3)
    seq = jet.standard_k_sequence(p, c, 1)
    assert seq.O[0] == 3 and seq.O[1] == 0


def test_general_sequence_requires_closed_w():
    p = jet.tqm(2)
    O0 = p.du(1) * p.du(2)
    with pytest.raises(NotClosed):
        jet.general_k_sequence(p, O0, {1: p.u(1) * p.dx(1) * p.du(2)})
    with pytest.raises(DegreeMismatch):
        jet.general_k_sequence(p, O0, {1: p.dx(1) * p.du(1) * p.du(2)})
    W1 = p.dx(1) * p.u(1) * p.du(1)
    seq = jet.general_k_sequence(p, O0, {1: W1})
    assert jet.verify_descent(p, seq).ok
    zero = jet.general_k_sequence(p, O0, {})
    assert zero.O == jet.standard_k_sequence(p, O0).O


def test_unclosed_seed():
    p = jet.tqm(2)
    with pytest.raises(NotClosed):
        jet.standard_k_sequence(p, p.u(1) * p.du(2))


def test_dropping_factorials_fails_at_two():
    p = jet.sigma(2)
    seq = jet.standard_k_sequence(p, jet.seed(p))
    bad = jet.DescentSequence([seq.O[0], seq.O[1], apply(p.K, seq.O[1])])
    rep = jet.verify_descent(p, bad)
    assert [ok for _, ok in rep.entries] == [True, True, False]
    assert rep.data["residuals"][2] != "0"


def test_exact_sequences_random():
    p = jet.sigma(2)
    low = [g for g in p.alg.gens if not g.jet]
    rng = random.Random(11)
    for _ in range(20):
        rho = [random_homogeneous(p.alg, rng, (i, 1 - i), gens=low) for i in range(2)]
        seq = jet.exact_sequence(p, rho)
        assert jet.verify_descent(p, seq, check_degrees=False).ok
    zero = jet.exact_sequence(p, [])
    assert all(o == 0 for o in zero.O)
    with pytest.raises(DegreeMismatch):
        jet.exact_sequence(p, [p.du(1) * p.du(2)])


def test_k_sequence_checker():
    p = jet.tqm(2)
    O0 = p.du(1) * p.du(2)
    seq = jet.standard_k_sequence(p, O0)
    rep = jet.is_k_sequence_with_witness(p, seq, O0, {})
    assert rep.ok
    bumped = jet.DescentSequence([seq.O[0], seq.O[1] + p.dx(1) * p.du(1) * p.du(2)])
    rep = jet.is_k_sequence_with_witness(p, bumped, O0, {})
    assert not rep.ok and rep.data["first_mismatch"] == 1


def test_flat_tsm_relations():
    p = jet.flat_tsm(3)
    assert commutator(p.Q, p.Q).is_zero()
    assert commutator(p.Q, p.K).equals_on(p.L) == []
    assert commutator(p.K, p.L).is_zero()
