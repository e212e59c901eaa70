from fractions import Fraction

import pytest

from cohoma import BACKEND, SECOND, Algebra, Derivation, apply, commutator, convert_convention
from cohoma.coeff import Gaussian, as_coeff
from cohoma.core import (berezin, bideg, exp_derivation, left_derivative, make_label, monomial_convention_sign,
                         right_derivative, substitute, swap_parity, zero_derivation)
from cohoma.errors import ConventionMismatch, DegreeMismatch, NotNilpotent, TruncationExceeded, UnknownGenerator


def gens(alg, *specs):
    return [alg.var(alg.add(name, (), deg)) for name, deg in specs]


def test_backend_is_known():
    assert BACKEND in ("cython", "python")


def test_labels():
    assert make_label("x") == "x"
    assert make_label("A", (1, 2)) == "A[1,2]"
    assert make_label("u", (1,), (2, 3)) == "u[1;2,3]"


def test_swap_parity_examples():
    # first kind uses the componentwise product of degrees
    assert swap_parity((1, 0), (0, 1)) == 0
    assert swap_parity((1, 0), (1, 0)) == 1
    assert swap_parity((1, -1), (1, -1)) == 0
    # second kind uses total parities
    assert swap_parity((1, 0), (0, 1), SECOND) == 1
    assert swap_parity((1, -1), (1, 0), SECOND) == 0


def test_mixed_degrees_commute_in_first_kind():
    alg = Algebra()
    a, b = gens(alg, ("a", (1, 0)), ("b", (0, 1)))
    assert b * a == a * b
    g, h = a, alg.var(alg.add("h", (), (1, 0)))
    assert h * g == -(g * h)


def test_odd_generators_anticommute():
    alg = Algebra()
    t1, t2 = gens(alg, ("t1", (0, 1)), ("t2", (0, 1)))
    assert t1 * t1 == alg.zero()
    assert t2 * t1 == -(t1 * t2)
    assert (t1 + t2) * (t1 + t2) == 0
    f = t1 * t2 + 3
    assert f * 1 == f


def test_second_kind_example():
    alg = Algebra("S", SECOND)
    a, b = gens(alg, ("a", (0, 1)), ("b", (1, 0)))
    assert b * a == -(a * b)


def test_convention_conversion_examples():
    alg = Algebra()
    a, b = gens(alg, ("a", (0, 1)), ("b", (1, 0)))
    ab = a * b
    assert monomial_convention_sign(alg, next(iter(ab.terms))) == -1
    conv = convert_convention(ab)
    assert conv.alg.convention == SECOND
    assert conv == -product_of(conv.alg, ("a", "b"))
    t = gens(alg, ("t", (0, 3)))[0]
    assert convert_convention(a * t) == product_of(conv.alg, ("a", "t"))
    assert convert_convention(convert_convention(ab + 2 * a)) == ab + 2 * a


def product_of(alg, names):
    out = alg.one()
    for n in names:
        out = out * alg.var(alg.get(n))
    return out


def test_convention_mismatch():
    a1, a2 = Algebra("X"), Algebra("Y")
    x = a1.var(a1.add("x", (), (0, 0)))
    y = a2.var(a2.add("y", (), (0, 0)))
    with pytest.raises(ConventionMismatch):
        x * y


def test_duplicate_and_unknown_generators():
    alg = Algebra()
    alg.add("x", (1,), (0, 0))
    with pytest.raises(ValueError):
        alg.add("x", (1,), (0, 0))
    with pytest.raises(UnknownGenerator):
        alg.get("x", 2)


def test_exact_coefficients():
    alg = Algebra()
    x = gens(alg, ("x", (0, 0)))[0]
    p = x.scale(Fraction(1, 3)) * 3
    assert p == x
    z = x.scale(Gaussian(0, 1)) * x.scale(Gaussian(0, 1))
    assert z == -(x * x)
    with pytest.raises(TypeError):
        as_coeff(0.5)


def test_render_is_canonical():
    alg = Algebra()
    x, y = gens(alg, ("x", (0, 0)), ("y", (0, 0)))
    assert str(y * x - Fraction(1, 2) * x + 0) == str(x * y - Fraction(1, 2) * x)
    assert str(alg.zero()) == "0"


def weil_su2():
    from cohoma import equivariant as eq
    from cohoma import lie
    return eq.build_weil(lie.su2())


def test_weil_d_on_theta1():
    p = weil_su2()
    th, ph = p.theta, p.phi
    assert apply(p.d, th[0]) == ph[0] - th[1] * th[2]


def test_derivation_kills_constants():
    p = weil_su2()
    assert apply(p.d, p.alg.one()) == 0
    assert apply(p.iota[0], p.alg.const(5)) == 0


def test_commutator_d_iota_on_theta2():
    p = weil_su2()
    C = commutator(p.d, p.iota[0])
    assert apply(C, p.theta[1]) == p.theta[2]
    assert apply(p.Lie[0], p.theta[1]) == p.theta[2]
    assert apply(p.iota[0], p.phi[1]) == 0


def test_square_of_nilpotent_is_zero():
    p = weil_su2()
    assert commutator(p.d, p.d).is_zero()


def test_flat_tsm_qk_on_x():
    from cohoma.jet import flat_tsm
    p = flat_tsm(2)
    x1 = p.alg.var(p.alg.get("x", 1))
    eta1 = p.alg.var(p.alg.get("eta", 1))
    assert apply(commutator(p.Q, p.K), x1) == eta1 == apply(p.L, x1)


def test_degree_checked_at_construction():
    alg = Algebra()
    x, t = gens(alg, ("x", (0, 0)), ("t", (0, 1)))
    with pytest.raises(DegreeMismatch):
        Derivation(alg, "D", (0, 1), {"x": x})
    D = Derivation(alg, "D", (0, 1), {"x": t})
    assert apply(D, x * x) == 2 * (x * t)


def test_truncation_raises():
    alg = Algebra()
    x, t = gens(alg, ("x", (0, 0)), ("t", (0, 1)))
    D = Derivation(alg, "D", (0, 1), {"x": t}, undefined=["t"])
    with pytest.raises(TruncationExceeded):
        apply(D, t)


def test_exp_examples():
    from cohoma import gauge, lie
    p = gauge.build_gauge_jet(lie.su2(), 4, 2, 0, 0, 1)
    S = p.space
    th_K, ph_K = gauge.theta_K(p), gauge.phi_K(p)
    for a in range(3):
        assert th_K[a] == S.comp("theta")[a] + S.form("A")[a]
        assert ph_K[a] == S.comp("phi")[a] - S.form("upsilon")[a] - S.curvature()[a]
    zero = zero_derivation(p.alg, (1, -1))
    f = S.comp("phi")[0] * S.comp("theta")[1]
    assert exp_derivation(zero, f) == f


def test_kill_vertical_generators_on_phi_K():
    from cohoma import gauge, lie
    p = gauge.build_gauge_jet(lie.su2(), 4, 2, 0, 0, 1)
    kill = {g.id: 0 for g in p.alg.gens if g.degree.v > 0}
    out = [substitute(kill, x) for x in gauge.phi_K(p)]
    F = p.space.curvature()
    assert out == [-x for x in F]
    f = gauge.phi_K(p)[0]
    assert substitute({}, f) == f


def test_exp_not_nilpotent():
    alg = Algebra()
    x = gens(alg, ("x", (0, 0)))[0]
    D = Derivation(alg, "D", (0, 0), {"x": x})
    with pytest.raises(NotNilpotent):
        exp_derivation(D, x)


def test_partial_derivatives_and_berezin():
    alg = Algebra()
    x, t1, t2 = gens(alg, ("x", (0, 0)), ("t1", (0, 1)), ("t2", (0, 1)))
    f = x * t1 * t2
    assert left_derivative(f, "t1") == x * t2
    assert left_derivative(f, "t2") == -(x * t1)
    assert right_derivative(f, "t2") == x * t1
    assert right_derivative(f, "t1") == -(x * t2)
    assert berezin(f, ["t1", "t2"]) == x
    assert berezin(t2 * t1, ["t1", "t2"]) == -1


def test_bidegree_arithmetic():
    d = bideg((1, -1)) + bideg((0, 1))
    assert d == (1, 0) and d.h == 1 and d.v == 0 and d.parity == 1
