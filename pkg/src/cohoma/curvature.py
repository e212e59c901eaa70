"""Abstract curvature algebra of a connection on a product M x (mapping space).

Lie-valued generators A_h (1,0), A_v (0,1), R_h (2,0), R_v (0,2), R_m (1,1)
and a constant gauge parameter lambda (0,0).  The curvature relations only fix
the sum L A_v - Q A_h in bidegree (1,1); it is split symmetrically,
Q A_h = -R_m/2 + [A_h, A_v]/2 and L A_v = R_m/2 - [A_h, A_v]/2, which is the
split compatible with K A_v = A_h.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import checks
from .core import Algebra, Derivation, apply, commutator
from .gauge import add, scale, sub
from .lie import LieAlgebraData
from .report import Report

HALF = Fraction(1, 2)


@dataclass
class CurvatureAlgebraPreset:
    lie: LieAlgebraData
    alg: Algebra
    Ah: list
    Av: list
    Rh: list
    Rv: list
    Rm: list
    lam: list
    Q: Derivation
    K: Derivation
    L: Derivation

    def bracket(self, X, Y):
        lie = self.lie
        out = []
        for a in range(lie.dim):
            acc = self.alg.zero()
            for b in range(lie.dim):
                for c in range(lie.dim):
                    k = lie.f[a][b][c]
                    if k:
                        acc = acc + (X[b] * Y[c]).scale(k)
            out.append(acc)
        return out

    def nabla_h(self, X):
        return add([apply(self.L, x) for x in X], self.bracket(self.Ah, X))

    def nabla_v(self, X):
        return add([apply(self.Q, x) for x in X], self.bracket(self.Av, X))


def _ids(alg, X):
    return [alg.resolve(x) for x in X]


def build_curvature_algebra(lie: LieAlgebraData) -> CurvatureAlgebraPreset:
    alg = Algebra(f"curvature({lie.name})")
    d = lie.dim

    def vec(name, deg):
        return [alg.var(alg.add(name, (a,), deg)) for a in range(1, d + 1)]

    Ah, Av = vec("A_h", (1, 0)), vec("A_v", (0, 1))
    Rh, Rv, Rm = vec("R_h", (2, 0)), vec("R_v", (0, 2)), vec("R_m", (1, 1))
    lam = vec("lambda", (0, 0))
    p = CurvatureAlgebraPreset(lie, alg, Ah, Av, Rh, Rv, Rm, lam, None, None, None)
    br = p.bracket

    def table(pairs, degree, name):
        act = {}
        for X, img in pairs:
            for gid, im in zip(_ids(alg, X), img):
                act[gid] = im
        return Derivation(alg, name, degree, act)

    K = table([(Av, Ah), (Rv, Rm), (Rm, scale(Rh, -2))], (1, -1), "K")
    QAv = sub(Rv, scale(br(Av, Av), HALF))
    QRv = scale(br(Av, Rv), -1)
    QAh = add(scale(Rm, -HALF), scale(br(Ah, Av), HALF))
    # Q R_m from Q^2 A_h = 0: Q R_m = [Q A_h, A_v] + [A_h, Q A_v]
    QRm = add(br(QAh, Av), br(Ah, QAv))
    # Q R_h from QK + KQ = L on R_m together with the fourth Bianchi identity
    QRh = add(add([apply(K, x) for x in QRm], br(Ah, Rm)), br(Av, Rh))
    Q = table([(Av, QAv), (Rv, QRv), (Ah, QAh), (Rm, QRm), (Rh, QRh)], (0, 1), "Q")
    p.Q = Q
    LAh = sub(Rh, scale(br(Ah, Ah), HALF))
    LAv = sub(scale(Rm, HALF), scale(br(Ah, Av), HALF))
    LRh = scale(br(Ah, Rh), -1)
    # -nabla_v R_m + nabla_h R_v = 0 and nabla_h R_m + nabla_v R_h = 0
    LRv = sub(add(QRm, br(Av, Rm)), br(Ah, Rv))
    LRm = sub(sub(scale(br(Ah, Rm), -1), QRh), br(Av, Rh))
    p.L = table([(Ah, LAh), (Av, LAv), (Rh, LRh), (Rv, LRv), (Rm, LRm)], (1, 0), "L")
    p.K = K
    return p


def curvature_algebra_checks(lie: LieAlgebraData) -> Report:
    """QK relations, Bianchi identities, the Weil map phi_W on generators and iota_lambda R_m = 0."""
    p = build_curvature_algebra(lie)
    alg, br = p.alg, p.bracket
    rep = Report(f"curvature {lie.name}")
    checks.nilpotent(rep, "Q^2 = 0", p.Q)
    checks.relation(rep, "QK + KQ = L", commutator(p.Q, p.K), p.L)
    checks.relation(rep, "KL + LK = 0", commutator(p.K, p.L), None)
    checks.relation(rep, "QL - LQ = 0", commutator(p.Q, p.L), None)
    checks.nilpotent(rep, "L^2 = 0", p.L)

    def vec_eq(name, X, Y):
        for a, (x, y) in enumerate(zip(X, Y), 1):
            if not rep.equal(f"{name} [{a}]", x, y, name):
                return False
        return True

    def vec_zero(name, X):
        return vec_eq(name, X, [alg.zero()] * len(X))

    Lap = lambda X: [apply(p.L, x) for x in X]  # noqa: E731
    Qap = lambda X: [apply(p.Q, x) for x in X]  # noqa: E731
    Kap = lambda X: [apply(p.K, x) for x in X]  # noqa: E731
    # curvature relations
    vec_eq("R_h = L A_h + [A_h, A_h]/2", p.Rh, add(Lap(p.Ah), scale(br(p.Ah, p.Ah), HALF)))
    vec_eq("R_v = Q A_v + [A_v, A_v]/2", p.Rv, add(Qap(p.Av), scale(br(p.Av, p.Av), HALF)))
    vec_eq("R_m = L A_v - Q A_h + [A_h, A_v]", p.Rm, add(sub(Lap(p.Av), Qap(p.Ah)), br(p.Ah, p.Av)))
    # Bianchi identities
    vec_zero("nabla_h R_h = 0", p.nabla_h(p.Rh))
    vec_zero("nabla_v R_v = 0", p.nabla_v(p.Rv))
    vec_zero("-nabla_v R_m + nabla_h R_v = 0", sub(p.nabla_h(p.Rv), p.nabla_v(p.Rm)))
    vec_zero("nabla_h R_m + nabla_v R_h = 0", add(p.nabla_h(p.Rm), p.nabla_v(p.Rh)))
    # K on curvatures, as in the proof
    vec_eq("K R_v = R_m", Kap(p.Rv), p.Rm)
    vec_eq("K R_m = -2 R_h", Kap(p.Rm), scale(p.Rh, -2))
    # phi_W: theta -> A_v, phi -> R_v, A -> A_h, upsilon -> -R_m, d -> L, F -> R_h
    th, ph, A, ups = p.Av, p.Rv, p.Ah, scale(p.Rm, -1)
    F = add(Lap(A), scale(br(A, A), HALF))
    vec_eq("phi_W(F) = R_h", F, p.Rh)
    vec_eq("K phi_W(theta) = phi_W(K theta)", Kap(th), A)
    vec_eq("K phi_W(A) = phi_W(K A)", Kap(A), [alg.zero()] * lie.dim)
    vec_eq("K phi_W(phi) = phi_W(K phi)", Kap(ph), scale(ups, -1))
    vec_eq("K phi_W(upsilon) = phi_W(K upsilon)", Kap(ups), scale(F, 2))
    vec_eq("Q phi_W(theta) = phi_W(Q theta)", Qap(th), sub(ph, scale(br(th, th), HALF)))
    vec_eq("Q phi_W(phi) = phi_W(Q phi)", Qap(ph), scale(br(th, ph), -1))
    dAth = add(Lap(th), br(A, th))
    vec_eq("Q phi_W(A) = phi_W(Q A)", Qap(A), add(ups, dAth))
    dAph = add(Lap(ph), br(A, ph))
    vec_eq("Q phi_W(upsilon) = phi_W(Q upsilon)", Qap(ups), sub(scale(br(th, ups), -1), dAph))
    # gauge structure: iota_lambda A_v = lambda, delta = [Q, iota]
    io = Derivation(alg, "iota_lambda", (0, -1), dict(zip(_ids(alg, p.Av), p.lam)))
    de = commutator(p.Q, io, "delta_lambda")
    checks.relation(rep, "[iota_lambda, L] = [delta_lambda, K]", commutator(io, p.L), commutator(de, p.K))
    expr = add(sub(Lap(p.Av), Qap(p.Ah)), br(p.Ah, p.Av))
    vec_zero("iota_lambda (L A_v - Q A_h + [A_h, A_v]) = 0", [apply(io, x) for x in expr])
    vec_zero("-K(delta_lambda A_v) + [A_h, lambda] = 0",
             add(scale(Kap([apply(de, x) for x in p.Av]), -1), br(p.Ah, p.lam)))
    rep.data["preset"] = p
    return rep.finish()
