import pytest

from cohoma import apply, commutator, lie
from cohoma.curvature import build_curvature_algebra, curvature_algebra_checks


@pytest.mark.parametrize("L", [lie.su2(), lie.so3(), lie.abelian(1), lie.abelian(2)], ids=lambda L: L.name)
def test_curvature_checks(L):
    rep = curvature_algebra_checks(L)
    assert rep.ok, rep.failures()


def test_k_on_curvatures():
    p = build_curvature_algebra(lie.su2())
    for a in range(3):
        assert apply(p.K, p.Rv[a]) == p.Rm[a]
        assert apply(p.K, p.Rm[a]) == p.Rh[a].scale(-2)
        assert apply(p.K, p.Rh[a]) == 0
        assert apply(p.K, p.Av[a]) == p.Ah[a]


def test_abelian_curvatures_are_closed():
    p = build_curvature_algebra(lie.abelian(1))
    for R in (p.Rh, p.Rv, p.Rm):
        assert apply(p.Q, R[0]) == 0
        assert apply(p.L, R[0]) == 0
    assert commutator(p.Q, p.Q).is_zero()


def test_wrong_k_sign_breaks_relation():
    from cohoma.core import Derivation
    p = build_curvature_algebra(lie.su2())
    act = dict(p.K.action)
    for a in range(3):
        act[p.alg.resolve(p.Rm[a])] = p.Rh[a].scale(2)
    bad = Derivation(p.alg, "K'", (1, -1), act)
    assert commutator(p.Q, bad).equals_on(p.L) != []
