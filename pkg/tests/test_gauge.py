from fractions import Fraction

import pytest

from cohoma import checks, gauge, lie
from cohoma.core import Derivation, apply
from cohoma.errors import DegreeMismatch, Dim4Only, NotBasic, SelfDualNeedsDim4
from cohoma.report import Report

SU2 = lie.su2()


@pytest.fixture(scope="module")
def space():
    return gauge.GaugeSpace(SU2, 4, 2)


@pytest.fixture(scope="module")
def p0(space):
    return gauge.build_gauge_jet(SU2, 4, 2, 0, 0, 1, space=space)


@pytest.mark.parametrize("rst", [(0, 0, 1), (0, 1, 1), (0, 2, 1), (1, 0, 1), (0, Fraction(1, 2), 1)])
def test_relations(space, rst):
    p = gauge.build_gauge_jet(SU2, 4, 2, *rst, space=space)
    rep = gauge.check_gauge_relations(p)
    assert rep.ok, rep.failures()


def test_relations_pre_chart(space):
    for t in (1, 2):
        p = gauge.build_gauge_jet(SU2, 4, 2, 0, 0, t, chart="pre", space=space)
        assert gauge.check_gauge_relations(p).ok


def test_rs_both_nonzero_fails(space):
    # QK + KQ = L breaks when both deformations are on
    rep = gauge.check_gauge_relations(gauge.build_gauge_jet(SU2, 4, 2, 1, 1, 1, space=space))
    assert rep.failures() == ["QK + KQ = L"]


def test_corrupted_q_upsilon_sign(p0):
    act = {g: (-img if p0.alg.gens[g].name == "upsilon" else img) for g, img in p0.Q.action.items()}
    bad = Derivation(p0.alg, "Q", (0, 1), act, p0.Q.undefined, check=False)
    rep = Report("corrupted")
    checks.nilpotent(rep, "Q^2 = 0", bad)
    assert not rep.ok
    assert rep.witnesses[0].generator.startswith("A[")


def test_universal_forms(space):
    for s in (0, 1, 2):
        p = gauge.build_gauge_jet(SU2, 4, 2, 0, s, 1, space=space)
        assert gauge.check_universal_forms(p).ok


def test_tym_list(space, p0):
    seq = gauge.tym_observables(p0).O
    S = p0.space
    tr = S.trace
    ph, U, F = S.comp("phi"), S.form("upsilon"), S.curvature()
    assert seq[0] == tr(ph, ph)
    assert seq[1] == tr(ph, U).scale(-2)
    assert seq[2] == tr(U, U) - tr(ph, F).scale(2)
    assert seq[3] == -tr(U, F).scale(-2)
    assert seq[4] == tr(F, F)
    for s in (1, 2):
        assert gauge.check_tym(gauge.build_gauge_jet(SU2, 4, 2, 0, s, 1, space=space)).ok


def test_k0_equivalence_sign(space):
    rep = gauge.k0_equivalence(SU2, 1, space=space)
    entries = dict(rep.entries)
    assert entries["O[4]: K_s standard = K_0 general, W4 = -(s^2/4) Q Tr(b chi)"] is False
    plus = [ok for name, ok in rep.entries if "W4 = +(s^2/4)" in name]
    assert len(plus) == 5 and all(plus)
    assert all(ok for name, ok in rep.entries if "O[4]" not in name)
    assert gauge.k0_equivalence(SU2, 0, space=space).ok


def test_gauge_structure(p0):
    gs = gauge.gauge_structure(p0)
    assert gs.report.ok, gs.report.failures()


def test_footnote_pre_chart(space):
    assert gauge.footnote_witness(SU2, 4, 2, space).ok


def test_selfdual_projection(p0):
    S = p0.space
    dx = [S.dx(mu) for mu in range(1, 5)]
    F = dx[0] * dx[1]
    Fm = gauge.selfdual_project(S, F, -1)
    assert Fm == (dx[0] * dx[1] - dx[2] * dx[3]).scale(Fraction(1, 2))
    sd = dx[0] * dx[1] + dx[2] * dx[3]
    assert gauge.selfdual_project(S, sd, -1) == 0
    assert gauge.hodge(S, gauge.hodge(S, F, 2), 2) == F


def test_selfdual_needs_dim4():
    with pytest.raises(SelfDualNeedsDim4):
        gauge.build_gauge_jet(lie.abelian(1), 3, 1, 1, 0, 1)
    p = gauge.build_gauge_jet(lie.abelian(1), 3, 1, 0, 0, 1)
    with pytest.raises(Dim4Only):
        gauge.selfdual_project(p.space, p.space.dx(1) * p.space.dx(2))


def test_lagrangian(p0):
    gs = gauge.gauge_structure(p0)
    Lg, rep = gauge.build_lagrangian(gauge.tym_prepotential(p0), p0, gs)
    assert rep.ok and Lg
    zero, rep0 = gauge.build_lagrangian(p0.alg.zero(), p0, gs)
    assert zero == 0 and rep0.ok
    S = p0.space
    chi = S.form("chi")
    bare = S.comp("theta")[0] * chi[0] * chi[1]
    with pytest.raises(NotBasic) as e:
        gauge.build_lagrangian(bare, p0, gs)
    assert e.value.witness.check == "iota_lambda"
    with pytest.raises(DegreeMismatch):
        gauge.build_lagrangian(S.comp("theta")[0], p0, gs)


def test_abelian_gauge(space):
    p = gauge.build_gauge_jet(lie.abelian(1), 4, 2, 0, 1, 1)
    assert gauge.check_gauge_relations(p).ok
    assert gauge.check_tym(p).ok


def test_trace_needs_metric():
    from cohoma.errors import MissingMetric
    L = lie.from_matrices("heis", [[[0, 1, 0], [0, 0, 0], [0, 0, 0]],
                                   [[0, 0, 0], [0, 0, 1], [0, 0, 0]],
                                   [[0, 0, 1], [0, 0, 0], [0, 0, 0]]])
    S = gauge.GaugeSpace(L, 2, 1)
    with pytest.raises(MissingMetric):
        S.trace(S.comp("phi"), S.comp("phi"))


def test_k_on_theta_k(p0):
    # K theta = A and K A = 0, so K theta_K = theta_K - theta
    thK = gauge.theta_K(p0)
    th = p0.space.comp("theta")
    for a in range(3):
        assert apply(p0.K, thK[a]) == thK[a] - th[a] == p0.space.form("A")[a]
