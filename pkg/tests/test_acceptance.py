"""Acceptance criteria 1-11, exact identities only.

Each criterion is evaluated once into a list of named sub-checks.  A criterion
line reads PASS only when every sub-check holds.  Sub-checks that state an
identity in a form that does not hold are kept as strict xfails so they turn
red the moment they start passing.

Run ``python tests/test_acceptance.py`` for the bare criterion lines; under
pytest they are printed in the terminal summary.
"""
from __future__ import annotations

import random
import sys
import time
from functools import cache

import pytest

from cohoma import equivariant as eq
from cohoma import gauge, jet, lie, properties, words
from cohoma.curvature import curvature_algebra_checks
from cohoma.sampling import random_polynomial

TIME_LIMIT = 60.0

# sub-checks whose literal statement is known not to hold
LITERAL = {
    3: {"post-change with alpha = chi^t(b - theta chi)/2"},
    5: {"sigma O[2] as printed", "mtheory O[2] as printed", "mtheory O[3] as printed"},
    6: {"k0 equivalence s=1 with W4 = -(s^2/4) Q Tr(b chi)",
        "k0 equivalence s=2 with W4 = -(s^2/4) Q Tr(b chi)"},
}


def _entry(rep, name):
    return dict(rep.entries)[name]


# ---------------------------------------------------------------------------
# criteria


def c1():
    out = []
    for L in (lie.su2(), lie.so3()):
        out.append((f"L-module relations {L.name}", eq.check_L_module(eq.build_weil(L)).ok))
    bad = eq.check_L_module(eq.build_weil(lie.corrupted_su2(), validate=False))
    out.append(("Jacobi-broken f fails with a witness", not bad.ok and bool(bad.witnesses)))
    return out


def c2():
    rep = eq.kalkman_conjugate(eq.build_weil_tensor(lie.su2()))[1]
    cartan = [ok for name, ok in rep.entries if "cartan" in name or "d_C" in name]
    return [
        ("j d_W j^-1 = closed formula on every generator",
         _entry(rep, "j d_W j^-1 = d + theta Lie - phi iota")),
        ("d_K^2 = 0", _entry(rep, "d_K^2 = 0")),
        ("Cartan restriction on the iota-kernel", bool(cartan) and all(cartan)),
    ]


def c3():
    m = eq.build_mq(lie.so2())
    ids = dict(eq.check_mq_identities(m).entries)
    s2 = [ok for name, ok in ids.items() if name.startswith("s^2")]
    return [
        ("s^2 = 0 with the s^2 b, s^2 chi expansions", len(s2) >= 7 and all(s2)),
        ("L_fin = s(chi^t(i w + b/2))", ids["L = s(chi^t(i w + b/2))"]),
        ("iota_a L_fin = Lie_a L_fin = 0", ids["iota[1] L = 0"] and ids["Lie[1] L = 0"]),
        ("post-change with alpha = chi^t(b - theta chi)/2",
         ids["L = s alpha + i(b^t w - chi^t dw), alpha = chi^t(b - theta chi)/2"]),
    ]


def c4():
    rng = random.Random(2024)
    flat = jet.flat_tsm(2)
    sound = True
    for _ in range(100):
        w = words.random_word_expression(rng, max_len=6)
        f = random_polynomial(flat.alg, rng, terms=3, max_len=3)
        if words.realize(w, flat)(f) != words.realize(words.reduce(w), flat)(f):
            sound = False
    return [
        ("reduce = exhaustive rewrite oracle, words of length <= 8", words.check_oracles(8).ok),
        ("[Q,K^p] = p L K^(p-1), p <= 16", all(words.check_qpk(p).ok for p in range(1, 17))),
        ("realization on flat tsm, 100 random words", sound),
    ]


def _sigma_literal(p):
    """The three sigma-model lines exactly as printed, omega = du1 du2."""
    om = jet.antisymmetric_tensor(p.meta["alpha"], 2)
    z = p.alg.zero()
    O0, O1, O2 = z, z, z
    for (i, j), c in om.items():
        O0 = O0 + (p.du(i) * p.du(j)).scale(c)
        for mu in (1, 2):
            O1 = O1 + (p.u(i, (mu,)) * p.dx(mu) * p.du(j)).scale(2 * c)
            for nu in (1, 2):
                O2 = O2 + (p.u(i, (mu,)) * p.u(j, (nu,)) * p.dx(mu) * p.dx(nu)).scale(c)
    return [O0, O1, O2]


def _mtheory_literal(p):
    """The four M-theory lines exactly as printed, coefficients 1, 3, 3, 1."""
    ph = jet.antisymmetric_tensor(p.meta["alpha"], 3)
    O = [p.alg.zero()] * 4
    mus = range(1, 4)
    for (i, j, k), c in ph.items():
        O[0] = O[0] + (p.du(i) * p.du(j) * p.du(k)).scale(c)
        for a in mus:
            O[1] = O[1] + (p.u(i, (a,)) * p.dx(a) * p.du(j) * p.du(k)).scale(3 * c)
            for b in mus:
                O[2] = O[2] + (p.u(i, (a,)) * p.u(j, (b,)) * p.dx(a) * p.dx(b) * p.du(k)).scale(3 * c)
                for e in mus:
                    O[3] = O[3] + (p.u(i, (a,)) * p.u(j, (b,)) * p.u(k, (e,))
                                   * p.dx(a) * p.dx(b) * p.dx(e)).scale(c)
    return O


def c5():
    out = []
    rel = [jet.check_jet_relations(jet.build_jet([jet.JetField("u", 1)], n, 3)).ok for n in (1, 2, 3, 4)]
    out.append(("canonical QK relations, J = 3, n <= 4", all(rel)))
    sg = jet.sigma(2)
    std = jet.standard_k_sequence(sg, jet.seed(sg)).O
    lit = _sigma_literal(sg)
    out.append(("sigma O[0], O[1] as printed", std[0] == lit[0] and std[1] == lit[1]))
    out.append(("sigma O[2] as printed", std[2] == lit[2]))
    mt = jet.mtheory()
    mstd = jet.standard_k_sequence(mt, jet.seed(mt)).O
    mlit = _mtheory_literal(mt)
    out.append(("mtheory O[0], O[1] as printed", mstd[0] == mlit[0] and mstd[1] == mlit[1]))
    out.append(("mtheory O[2] as printed", mstd[2] == mlit[2]))
    out.append(("mtheory O[3] as printed", mstd[3] == mlit[3]))
    agree = True
    for p in (sg, mt, jet.tqm(2)):
        pb = jet.pullback_observable(p, p.meta["alpha"]).O
        st = jet.standard_k_sequence(p, pb[0]).O
        agree &= len(pb) == len(st) and all(a == b for a, b in zip(pb, st))
    out.append(("pullback_observable = standard_k_sequence termwise", agree))
    return out


@cache
def _gauge_space():
    return gauge.GaugeSpace(lie.su2(), 4, 2)


@cache
def _gauge(r, s, t):
    return gauge.build_gauge_jet(lie.su2(), 4, 2, r, s, t, space=_gauge_space())


def c6():
    out = []
    for rst in ((0, 0, 1), (0, 1, 1), (0, 2, 1)):
        out.append((f"gauge relations {rst}", gauge.check_gauge_relations(_gauge(*rst)).ok))
    out.append(("theta_K = theta + A, phi_K = phi - upsilon - F at (0,0,1)",
                gauge.check_universal_forms(_gauge(0, 0, 1)).ok))
    out.append(("tym_observables(m=2) = five-line list, s = 0, 1, 2",
                all(gauge.check_tym(_gauge(0, s, 1)).ok for s in (0, 1, 2))))
    for s in (1, 2):
        rep = gauge.k0_equivalence(lie.su2(), s, space=_gauge_space())
        quoted = [ok for name, ok in rep.entries if "W4 = -(s^2/4)" in name]
        out.append((f"k0 equivalence s={s} with W4 = -(s^2/4) Q Tr(b chi)", all(quoted)))
    return out


def c7():
    rep = gauge.gauge_structure(_gauge(0, 0, 1)).report
    return [
        ("K delta - delta K = 0 on horizontal generators",
         _entry(rep, "K delta_lambda - delta_lambda K = 0 on horizontal generators")),
        ("K delta - delta K = -d lambda on theta",
         _entry(rep, "K delta_lambda - delta_lambda K = -d lambda on theta, 0 elsewhere")),
        ("[iota_lambda, L] = [delta_lambda, K] on all generators",
         _entry(rep, "[iota_lambda, L] = [delta_lambda, K]")),
    ]


def c8():
    return [(f"curvature algebra {L.name}", curvature_algebra_checks(L).ok)
            for L in (lie.su2(), lie.abelian(1), lie.abelian(2))]


def c9():
    rep = eq.check_qkweil(eq.build_symplectic(lie.su2()))
    return [("{I,I} = 0, {L,I} = f I, {S,I} = L, {S,S} = 0", rep.ok)]


def c10():
    rng = random.Random(10)
    pairs = [words.random_normalized_pair(rng) for _ in range(10)]
    good = all(words.gl_family_check(u, v).ok for u, v in pairs)
    bad = words.gl_family_check((1, 0), (0, 1))
    sl = all(words.sl2_check(words.random_unimodular(rng), *pairs[k]).ok for k in range(5))
    return [
        ("gl_family_check, 10 random u.v = 1", good),
        ("u.v = 0 fails with a witness", not bad.ok and bool(bad.witnesses)),
        ("SL(2) action, 5 random unimodular g", sl),
    ]


def c11():
    return [(r.command, r.ok and len(r.entries) >= 200) for r in properties.all_suites(200)]


CRITERIA = {1: c1, 2: c2, 3: c3, 4: c4, 5: c5, 6: c6, 7: c7, 8: c8, 9: c9, 10: c10, 11: c11}


@cache
def evaluate(n):
    t0 = time.perf_counter()
    subs = CRITERIA[n]()
    return subs, time.perf_counter() - t0


def line(n) -> str:
    subs, dt = evaluate(n)
    ok = all(v for _, v in subs) and dt < TIME_LIMIT
    bad = [name for name, v in subs if not v]
    tail = f"  failing: {'; '.join(bad)}" if bad else ""
    return f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  ({len(subs) - len(bad)}/{len(subs)} sub-checks, {dt:.2f}s){tail}"


# ---------------------------------------------------------------------------
# pytest


def _split(n):
    subs, dt = evaluate(n)
    lit = LITERAL.get(n, set())
    return [(k, v) for k, v in subs if k not in lit], [(k, v) for k, v in subs if k in lit], dt


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, capsys):
    holds, _, dt = _split(n)
    with capsys.disabled():
        print("\n" + line(n))
    assert dt < TIME_LIMIT
    assert all(v for _, v in holds), [k for k, v in holds if not v]


LITERAL_CASES = [(n, name) for n in sorted(LITERAL) for name in sorted(LITERAL[n])]


@pytest.mark.xfail(strict=True, reason="stated form of the identity does not hold; see decisions ledger")
@pytest.mark.parametrize("n,name", LITERAL_CASES)
def test_literal_statement(n, name):
    _, lit, _ = _split(n)
    assert dict(lit)[name]


def test_literal_sets_are_exact():
    # every sub-check outside LITERAL holds and every one inside fails
    for n in LITERAL:
        subs, _ = evaluate(n)
        failing = {k for k, v in subs if not v}
        assert failing == LITERAL[n]


if __name__ == "__main__":
    for n in sorted(CRITERIA):
        print(line(n), flush=True)
    sys.exit(0 if all(all(v for _, v in evaluate(n)[0]) for n in CRITERIA) else 1)
