import pytest

from cohoma import apply, commutator
from cohoma import equivariant as eq
from cohoma import lie
from cohoma.errors import InvalidLieAlgebra


@pytest.mark.parametrize("L", [lie.su2(), lie.so3(), lie.so2(), lie.abelian(2)], ids=lambda L: L.name)
def test_weil_l_module(L):
    rep = eq.check_L_module(eq.build_weil(L))
    assert rep.ok, rep.failures()


def test_weil_validate_rejects_broken_jacobi():
    with pytest.raises(InvalidLieAlgebra):
        eq.build_weil(lie.corrupted_su2())


def test_weil_broken_jacobi_witness():
    rep = eq.check_L_module(eq.build_weil(lie.corrupted_su2(), validate=False))
    assert not rep.ok
    w = rep.witnesses[0]
    assert w.generator.startswith(("theta", "phi"))
    assert w.lhs != w.rhs


def test_weil_acyclic_in_low_degree():
    p = eq.build_weil(lie.su2())
    dims = eq.cohomology_dims(p.d, range(1, 5))
    assert dims == {1: 0, 2: 0, 3: 0, 4: 0}


def test_iota_on_phi_vanishes():
    p = eq.build_weil(lie.su2())
    for i in p.iota:
        for ph in p.phi:
            assert apply(i, ph) == 0


def test_kalkman_plus_sign_passes_minus_fails():
    m = eq.build_weil_tensor(lie.su2())
    assert eq.kalkman_conjugate(m, 1)[1].ok
    rep = eq.kalkman_conjugate(m, -1)[1]
    assert not rep.ok and rep.witnesses


def test_semidirect_weil_kalkman_form():
    for L in (lie.so2(), lie.so_n(3)):
        p = eq.build_semidirect_weil(L)
        assert p.report.ok, p.report.failures()


def test_mq_identities_except_literal_alpha():
    m = eq.build_mq(lie.so2())
    entries = dict(eq.check_mq_identities(m).entries)
    literal = "L = s alpha + i(b^t w - chi^t dw), alpha = chi^t(b - theta chi)/2"
    corrected = "L = s alpha + i(b^t w - chi^t dw), alpha = chi^t(b + theta chi)/2"
    assert entries.pop(literal) is False
    assert entries.pop(corrected) is True
    assert all(entries.values()), [k for k, v in entries.items() if not v]


def test_mq_lagrangian_is_s_exact_and_basic():
    m = eq.build_mq(lie.so2())
    L = eq.mq_lagrangian(m)
    assert L == apply(m.s, eq.mq_primitive(m))
    assert apply(m.s, L) == 0
    for i, Lie_a in zip(m.iota, m.Lie):
        assert apply(i, L) == 0 and apply(Lie_a, L) == 0


def test_mq_variant():
    m = eq.build_mq(lie.so2(), variant=True)
    rep = eq.check_mq_identities(m)
    assert rep.ok, rep.failures()


def test_qkweil_relations():
    p = eq.build_symplectic(lie.su2())
    assert eq.check_qkweil(p).ok
    th, ph = p.theta, p.phi
    # L_1 = -f^b_{1c} phi_b theta^c with f = epsilon
    assert p.L(0) == ph[1] * th[2] - ph[2] * th[1]
    assert p.bracket(p.I(0), p.I(1)) == 0
    assert p.bracket(p.S(), p.I(0)) == p.L(0)
    assert p.bracket(p.S(), p.S()) == 0
    assert p.bracket(ph[0], th[0]) == 1


def test_poisson_laws_low_degree():
    p = eq.build_symplectic(lie.su2())
    rep = eq.poisson_laws(p, eq.poisson_monomials(p, 3))
    assert rep.ok, rep.failures()


def test_lie_algebroid_q():
    su2 = lie.su2()
    Q0, rep0 = eq.lie_algebroid_q(su2.f, [[0] * 3])
    assert rep0.ok
    broken = lie.corrupted_su2()
    _, bad = eq.lie_algebroid_q(broken.f, [[0] * 3])
    assert not bad.ok and bad.witnesses
    assert commutator(Q0, Q0).is_zero()
