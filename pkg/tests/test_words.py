import random
from fractions import Fraction

import pytest

from cohoma import jet, words
from cohoma.errors import CohomaError, NormalizationViolated
from cohoma.sampling import random_polynomial


@pytest.mark.parametrize("word,nf", [
    ("QKQ", "Q L"),
    ("KQK", "K L - K^2 Q"),
    ("QQ", "0"),
    ("[Q,K]", "L"),
    ("[Q,K^2]", "-2 K L"),
    ("[Q,K^5]", "5 K^4 L"),
    ("LK + KL", "0"),
    ("QK + KQ - L", "0"),
    ("Q K^2 Q", "-2 K Q L"),
])
def test_normal_forms(word, nf):
    assert words.reduce(word).render() == nf


def test_qpk_lemma_up_to_16():
    for p in range(1, 17):
        assert words.check_qpk(p).ok


def test_qpoly():
    assert words.check_qpoly([3, 0, Fraction(1, 2), -1]).ok


def test_oracles_short_words():
    rep = words.check_oracles(5)
    assert rep.ok and rep.data["words"] == sum(3 ** k for k in range(6))


def test_truncation():
    assert words.reduce("K^3", 2).is_zero()
    assert words.reduce("K^2", 2).render() == "K^2"
    rng = random.Random(5)
    for _ in range(30):
        w = words.random_word_expression(rng, max_len=6)
        assert words.check_truncation_coherence(w, 2, 4)


def test_realization_soundness_flat():
    rng = random.Random(7)
    p = jet.flat_tsm(2)
    for _ in range(40):
        w = words.random_word_expression(rng, max_len=5)
        f = random_polynomial(p.alg, rng)
        assert words.realize(w, p)(f) == words.realize(words.reduce(w), p)(f)


def test_realize_examples():
    p = jet.flat_tsm(2)
    x1 = p.alg.var(p.alg.get("x", 1))
    eta1 = p.alg.var(p.alg.get("eta", 1))
    assert words.realize("QK + KQ", p)(x1) == eta1
    jp = jet.build_jet([jet.JetField("u", 1)], 2, 2)
    du = jp.du()
    expected = sum((jp.du(None, (mu,)) * jp.dx(mu) for mu in (1, 2)), jp.alg.zero())
    assert words.realize("L", jp)(du) == expected


@pytest.mark.parametrize("u,v", [((1, 0), (1, 0)), ((1, 1), (Fraction(1, 2), Fraction(1, 2)))])
def test_gl_family_normalized(u, v):
    assert words.gl_family_check(u, v).ok


def test_gl_family_unnormalized():
    rep = words.gl_family_check((1, 0), (0, 1))
    assert dict(rep.entries)["Q_u K_v + K_v Q_u = L"] is False
    assert any(w.lhs == "0" and w.rhs == "L" for w in rep.witnesses)
    with pytest.raises(NormalizationViolated):
        words.gl_family_check((1, 0), (0, 1), strict=True)


def test_gl_family_deformation():
    # the s dK_u term keeps all relations for any s
    assert words.gl_family_check((2, 1), (0, 1), s=3).ok


def test_sl2_action():
    rng = random.Random(3)
    for _ in range(5):
        g = words.random_unimodular(rng)
        u, v = words.random_normalized_pair(rng)
        assert words.sl2_check(g, u, v).ok
    with pytest.raises(NormalizationViolated):
        words.sl2_action([[2, 0], [0, 1]], (1, 0), (1, 0))


def test_malformed_word():
    with pytest.raises(CohomaError):
        words.reduce("Q X")
