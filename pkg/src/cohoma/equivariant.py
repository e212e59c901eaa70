"""Finite-dimensional equivariant models.

Weil algebra W(g), the Kalkman conjugation on W(g) (x) Omega(V), the
semidirect Weil algebra W(g |x V), the Mathai-Quillen model, Lie algebroid
differentials and the degree -3 Poisson bracket on g[1] + g*[2].

All single-graded objects sit in bidegree (0, j).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from . import checks, linalg
from .coeff import I
from .core import (
    Algebra,
    Derivation,
    Polynomial,
    apply,
    commutator,
    exp_derivation,
    left_derivative,
    linear_combination,
    right_derivative,
    substitute,
    times,
)
from .errors import InvalidRepresentation, MissingStructure
from .lie import LieAlgebraData, identity
from .report import Report, Witness

HALF = Fraction(1, 2)


def add_vector(alg: Algebra, name: str, dim: int, degree) -> list:
    return [alg.var(alg.add(name, (i + 1,), degree)) for i in range(dim)]


def bracket(lie: LieAlgebraData, X: list, Y: list) -> list:
    """[X, Y]^a = f^a_{bc} X^b Y^c for Lie-valued component lists."""
    out = []
    for a in range(lie.dim):
        acc = None
        for b in range(lie.dim):
            for c in range(lie.dim):
                k = lie.f[a][b][c]
                if k:
                    t = (X[b] * Y[c]).scale(k)
                    acc = t if acc is None else acc + t
        out.append(acc if acc is not None else X[0].alg.zero())
    return out


def rho_act(lie: LieAlgebraData, T: list, V: list) -> list:
    """(T V)^i = rho^i_{aj} T^a V^j, factors kept in the order T then V."""
    rho = lie.rho
    n = len(V)
    out = []
    for i in range(n):
        acc = V[0].alg.zero()
        for a in range(lie.dim):
            for j in range(n):
                k = rho[a][i][j]
                if k:
                    acc = acc + (T[a] * V[j]).scale(k)
        out.append(acc)
    return out


def rho_mat(lie, a, V: list) -> list:
    rho = lie.rho[a]
    return [sum((V[j].scale(rho[i][j]) for j in range(len(V)) if rho[i][j]), V[0].alg.zero())
            for i in range(len(V))]


def dot(X: list, Y: list):
    acc = X[0].alg.zero()
    for x, y in zip(X, Y):
        acc = acc + x * y
    return acc


# ---------------------------------------------------------------------------
# Weil algebra


def weil_tables(lie: LieAlgebraData, th: list, ph: list):
    """Action tables of d, iota_a, Lie_a on theta^a (deg 1) and phi^a (deg 2)."""
    dim = lie.dim
    f = lie.f
    alg = th[0].alg
    d = {}
    for a in range(dim):
        t = ph[a]
        p = alg.zero()
        for b in range(dim):
            for c in range(dim):
                if f[a][b][c]:
                    t = t - (th[b] * th[c]).scale(HALF * f[a][b][c])
                    p = p + (ph[b] * th[c]).scale(f[a][b][c])
        d[th[a]] = t
        d[ph[a]] = p
    iota = [{th[a]: 1} for a in range(dim)]
    lie_t = []
    for a in range(dim):
        tab = {}
        for b in range(dim):
            tab[th[b]] = sum((th[c].scale(-f[b][a][c]) for c in range(dim) if f[b][a][c]), alg.zero())
            tab[ph[b]] = sum((ph[c].scale(-f[b][a][c]) for c in range(dim) if f[b][a][c]), alg.zero())
        lie_t.append(tab)
    return d, iota, lie_t


@dataclass
class WeilPreset:
    lie: LieAlgebraData
    alg: Algebra
    theta: list
    phi: list
    d: Derivation
    iota: list
    Lie: list

    def derivations(self) -> dict:
        out = {"d": self.d}
        for a in range(self.lie.dim):
            out[f"iota[{a + 1}]"] = self.iota[a]
            out[f"Lie[{a + 1}]"] = self.Lie[a]
        return out


def build_weil(lie: LieAlgebraData, validate: bool = True) -> WeilPreset:
    if validate:
        lie.validate()
    alg = Algebra(f"W({lie.name})")
    th = add_vector(alg, "theta", lie.dim, (0, 1))
    ph = add_vector(alg, "phi", lie.dim, (0, 2))
    d, iota, lie_t = weil_tables(lie, th, ph)
    return WeilPreset(
        lie, alg, th, ph,
        Derivation(alg, "d", (0, 1), d),
        [Derivation(alg, f"iota[{a + 1}]", (0, -1), iota[a]) for a in range(lie.dim)],
        [Derivation(alg, f"Lie[{a + 1}]", (0, 0), lie_t[a]) for a in range(lie.dim)],
    )


def check_L_module(p, name="L-module") -> Report:
    """The relations of d, iota_a, Lie_a as derivation identities on every generator.

    Works for any object with ``lie``, ``d``, ``iota`` and ``Lie`` attributes.
    """
    for attr in ("d", "iota", "Lie"):
        if not hasattr(p, attr):
            raise MissingStructure(f"preset has no {attr}")
    rep = Report(name)
    lie, d, iota, Lie = p.lie, p.d, p.iota, p.Lie
    alg = d.alg
    dim = lie.dim
    derived = [commutator(d, iota[a], name=f"[d,iota[{a + 1}]]") for a in range(dim)]
    for a in range(dim):
        checks.relation(rep, f"[d,iota[{a + 1}]] = Lie[{a + 1}]", derived[a], Lie[a])
        checks.relation(rep, f"[Lie[{a + 1}],d] = 0", commutator(Lie[a], d))
        for b in range(dim):
            fc = [lie.f[c][a][b] for c in range(dim)]
            checks.relation(rep, f"[Lie[{a + 1}],Lie[{b + 1}]] = f Lie",
                            commutator(Lie[a], Lie[b]),
                            linear_combination(alg, zip(fc, Lie), (0, 0)))
            checks.relation(rep, f"[Lie[{a + 1}],iota[{b + 1}]] = f iota",
                            commutator(Lie[a], iota[b]),
                            linear_combination(alg, zip(fc, iota), (0, -1)))
            if b >= a:
                checks.relation(rep, f"[iota[{a + 1}],iota[{b + 1}]] = 0",
                                commutator(iota[a], iota[b]))
            # the bracket of derived Lie derivatives, independent of the Lie table
            checks.relation(rep, f"[[d,iota[{a + 1}]],[d,iota[{b + 1}]]] = f [d,iota]",
                            commutator(derived[a], derived[b]),
                            linear_combination(alg, zip(fc, derived), (0, 0)))
    checks.relation(rep, "[d,d] = 0", commutator(d, d))
    return rep.finish()


def graded_basis(alg: Algebra, degree: int) -> list:
    """Monomials of vertical degree ``degree`` in generators of positive (0, v) degree."""
    gens = [g for g in alg.gens if g.degree.v > 0 and g.degree.h == 0]
    out = []

    def rec(i, left, acc):
        if left == 0:
            out.append(tuple(acc))
            return
        if i == len(gens):
            return
        g = gens[i]
        dv = g.degree.v
        maxk = 1 if g.parity else left // dv
        for k in range(0, maxk + 1):
            if k * dv > left:
                break
            rec(i + 1, left - k * dv, acc + [g.id] * k)

    rec(0, degree, [])
    return out


def cohomology_dims(D: Derivation, degrees) -> dict:
    """dim H^k of D on the finite graded pieces, by exact rank computations."""
    alg = D.alg
    basis = {k: graded_basis(alg, k) for k in range(min(degrees) - 1, max(degrees) + 2)}
    ranks = {}

    def rank_of(k):
        if k in ranks:
            return ranks[k]
        src = basis.get(k) or []
        tgt = basis.get(k + 1) or graded_basis(alg, k + 1)
        index = {m: i for i, m in enumerate(tgt)}
        rows = []
        for m in src:
            img = apply(D, Polynomial(alg, {m: Fraction(1)}))
            row = [Fraction(0)] * len(tgt)
            for mm, c in img.terms.items():
                row[index[mm]] = c
            rows.append(row)
        ranks[k] = linalg.rank(rows) if rows and tgt else 0
        return ranks[k]

    out = {}
    for k in degrees:
        dim_k = len(basis[k])
        out[k] = dim_k - rank_of(k) - (rank_of(k - 1) if k - 1 >= 0 else 0)
    return out


# ---------------------------------------------------------------------------
# Kalkman conjugation on W(g) (x) Omega(V)


@dataclass
class KalkmanModel:
    lie: LieAlgebraData
    alg: Algebra
    theta: list
    phi: list
    x: list
    dx: list
    d: Derivation           # total differential d (x) 1 + 1 (x) d
    iotaW: list
    iotaX: list
    lieW: list
    lieX: list
    iota: list = field(default_factory=list)  # total contractions
    Lie: list = field(default_factory=list)


def build_weil_tensor(lie: LieAlgebraData, rho=None) -> KalkmanModel:
    """W(g) (x) Omega(V) with V given by ``rho`` (default: adjoint)."""
    lie.validate()
    rho = rho if rho is not None else lie.adjoint()
    lie_v = lie.with_rho(rho)
    lie_v.validate_rep()
    n = len(rho[0])
    alg = Algebra(f"W({lie.name})xOmega(V)")
    th = add_vector(alg, "theta", lie.dim, (0, 1))
    ph = add_vector(alg, "phi", lie.dim, (0, 2))
    x = add_vector(alg, "x", n, (0, 0))
    dx = add_vector(alg, "dx", n, (0, 1))
    dW, iW, lW = weil_tables(lie, th, ph)
    dtab = dict(dW)
    for i in range(n):
        dtab[x[i]] = dx[i]
    iX, lX = [], []
    for a in range(lie.dim):
        rx = rho_mat(lie_v, a, x)
        rdx = rho_mat(lie_v, a, dx)
        iX.append({dx[i]: -rx[i] for i in range(n)})
        lX.append({**{x[i]: -rx[i] for i in range(n)}, **{dx[i]: -rdx[i] for i in range(n)}})
    dim = lie.dim
    m = KalkmanModel(
        lie_v, alg, th, ph, x, dx,
        Derivation(alg, "d", (0, 1), dtab),
        [Derivation(alg, f"iotaW[{a + 1}]", (0, -1), iW[a]) for a in range(dim)],
        [Derivation(alg, f"iotaX[{a + 1}]", (0, -1), iX[a]) for a in range(dim)],
        [Derivation(alg, f"LieW[{a + 1}]", (0, 0), lW[a]) for a in range(dim)],
        [Derivation(alg, f"LieX[{a + 1}]", (0, 0), lX[a]) for a in range(dim)],
    )
    m.iota = [(m.iotaW[a] + m.iotaX[a]).renamed(f"iota[{a + 1}]") for a in range(dim)]
    m.Lie = [(m.lieW[a] + m.lieX[a]).renamed(f"Lie[{a + 1}]") for a in range(dim)]
    return m


def mq_generator(m: KalkmanModel, sign: int = 1) -> Derivation:
    """J = sign * theta^a iotaX_a; the Mathai-Quillen map is exp(J)."""
    alg = m.alg
    J = linear_combination(alg, [(1, times(m.theta[a], m.iotaX[a])) for a in range(m.lie.dim)],
                           (0, 0), "J")
    return J if sign > 0 else (-J).renamed("-J")


def conjugate(J: Derivation, D: Derivation, name: str) -> Derivation:
    """exp(J) o D o exp(-J) as a derivation (J even and locally nilpotent)."""
    alg = D.alg
    mJ = -J
    act = {}
    for g in alg.gens:
        x = alg.var(g)
        act[g.id] = exp_derivation(J, apply(D, exp_derivation(mJ, x)))
    return Derivation(alg, name, D.degree, act, check=False)


def kalkman_closed_formula(m: KalkmanModel) -> Derivation:
    alg = m.alg
    pairs = [(1, m.d)]
    for a in range(m.lie.dim):
        pairs.append((1, times(m.theta[a], m.lieX[a])))
        pairs.append((-1, times(m.phi[a], m.iotaX[a])))
    return linear_combination(alg, pairs, (0, 1), "d+theta*Lie-phi*iota")


def cartan_samples(m: KalkmanModel) -> list:
    """Invariant elements of S(g*) (x) Omega(V) for an orthogonal representation."""
    n = len(m.x)
    out = [dot(m.x, m.x), dot(m.x, m.dx), dot(m.phi, m.phi)]
    if n == m.lie.dim:
        out += [dot(m.phi, m.x), dot(m.phi, m.dx), dot(m.phi, m.x) * dot(m.x, m.x)]
    return out


def kalkman_conjugate(m: KalkmanModel, sign: int = 1) -> tuple[Derivation, Report]:
    """d_K = j d_W j^{-1} with j = exp(sign * theta^a iotaX_a), checked against
    d + theta^a Lie_a - phi^a iota_a on the target factor."""
    rep = Report(f"kalkman({m.lie.name})")
    J = mq_generator(m, sign)
    dK = conjugate(J, m.d, "d_K")
    closed = kalkman_closed_formula(m)
    checks.relation(rep, "j d_W j^-1 = d + theta Lie - phi iota", dK, closed)
    checks.nilpotent(rep, "d_K^2 = 0", dK)
    for a in range(m.lie.dim):
        checks.relation(rep, f"j iota[{a + 1}] j^-1 = iotaW[{a + 1}]",
                        conjugate(J, m.iota[a], "jij"), m.iotaW[a])
        checks.relation(rep, f"j Lie[{a + 1}] j^-1 = Lie[{a + 1}]",
                        conjugate(J, m.Lie[a], "jLj"), m.Lie[a])
    # Cartan restriction: d_C = d_X - phi^a iotaX_a with d_X de Rham on the target only.
    # On theta-free generators d_K - d_C = theta^a Lie_a (total), which kills invariants.
    dX = Derivation(m.alg, "d_X", (0, 1), {x: dx for x, dx in zip(m.x, m.dx)})
    cartan = linear_combination(
        m.alg, [(1, dX)] + [(-1, times(m.phi[a], m.iotaX[a])) for a in range(m.lie.dim)],
        (0, 1), "d_C")
    theta_lie = linear_combination(
        m.alg, [(1, times(m.theta[a], m.Lie[a])) for a in range(m.lie.dim)], (0, 1), "thetaLie")
    theta_free = [g for g in m.alg.gens if g.name != "theta"]
    checks.relation(rep, "d_K - d_C = theta Lie on theta-free generators", dK - cartan,
                    theta_lie, gens=theta_free)
    if m.lie.rho_is_skew():
        samples = cartan_samples(m)
        for k, f in enumerate(samples):
            inv = all(not apply(L, f) for L in m.Lie) and all(not apply(i, f) for i in m.iotaW)
            rep.record(f"cartan sample {k} is basic", inv, Witness(str(f), "", "basic"))
            rep.equal(f"d_K = d_C on cartan sample {k}", apply(dK, f), apply(cartan, f), str(f))
    return dK, rep.finish()


# ---------------------------------------------------------------------------
# semidirect Weil algebra and the Mathai-Quillen model


def semidirect(lie: LieAlgebraData) -> LieAlgebraData:
    """Structure constants of g |x V: [x_a, t_j] = rho^i_{aj} t_i, [t_i, t_j] = 0."""
    if lie.rho is None:
        raise InvalidRepresentation("semidirect product needs a representation")
    dg = lie.dim
    n = len(lie.rho[0])
    D = dg + n
    f = [[[Fraction(0)] * D for _ in range(D)] for _ in range(D)]
    for a in range(dg):
        for b in range(dg):
            for c in range(dg):
                f[a][b][c] = Fraction(lie.f[a][b][c])
    for a in range(dg):
        for j in range(n):
            for i in range(n):
                r = lie.rho[a][i][j]
                if r:
                    f[dg + i][a][dg + j] = Fraction(r)
                    f[dg + i][dg + j][a] = -Fraction(r)
    return LieAlgebraData(f"{lie.name}|xV", D, f)


@dataclass
class MQModel:
    lie: LieAlgebraData
    alg: Algebra
    theta: list
    phi: list
    chi: list
    b: list
    w: list
    dw: list
    s: Derivation
    iota: list
    Lie: list
    variant: bool = False

    @property
    def d(self):
        return self.s


def _mq_algebra(lie, with_v=True):
    n = len(lie.rho[0])
    alg = Algebra(f"MQ({lie.name})")
    th = add_vector(alg, "theta", lie.dim, (0, 1))
    ph = add_vector(alg, "phi", lie.dim, (0, 2))
    chi = add_vector(alg, "chi", n, (0, 1))
    b = add_vector(alg, "b", n, (0, 2))
    w = add_vector(alg, "w", n, (0, 0)) if with_v else []
    dw = add_vector(alg, "dw", n, (0, 1)) if with_v else []
    return alg, th, ph, chi, b, w, dw


@dataclass
class SemidirectWeil:
    lie: LieAlgebraData
    alg: Algebra
    theta: list
    phi: list
    chi: list
    b: list
    d: Derivation
    dK: Derivation
    iota: list
    Lie: list
    report: Report


def build_semidirect_weil(lie: LieAlgebraData) -> SemidirectWeil:
    """W(g |x V) = W(g) (x) Omega(V*); checks the Weil d equals the Kalkman form
    d + delta_K + theta^a Lie_a - phi^a iota_a with iota_a b = -rho_a chi."""
    lie.validate()
    if lie.rho is None:
        raise InvalidRepresentation("semidirect Weil algebra needs rho")
    sd = semidirect(lie)
    sd.validate()
    alg, th, ph, chi, b, _, _ = _mq_algebra(lie, with_v=False)
    d, iota_t, lie_t = weil_tables(sd, th + chi, ph + b)
    dW = Derivation(alg, "d", (0, 1), d)
    n = len(chi)
    dg = lie.dim
    delta = Derivation(alg, "delta_K", (0, 1), {chi[i]: b[i] for i in range(n)})
    lieV, iotaV = [], []
    for a in range(dg):
        rc = rho_mat(lie, a, chi)
        rb = rho_mat(lie, a, b)
        lieV.append(Derivation(alg, f"LieV[{a + 1}]", (0, 0),
                               {**{chi[i]: -rc[i] for i in range(n)},
                                **{b[i]: -rb[i] for i in range(n)}}))
        iotaV.append(Derivation(alg, f"iotaV[{a + 1}]", (0, -1), {b[i]: -rc[i] for i in range(n)}))
    dWg, _, _ = weil_tables(lie, th, ph)
    pairs = [(1, Derivation(alg, "dW", (0, 1), dWg)), (1, delta)]
    for a in range(dg):
        pairs.append((1, times(th[a], lieV[a])))
        pairs.append((-1, times(ph[a], iotaV[a])))
    dK = linear_combination(alg, pairs, (0, 1), "d_K")
    rep = Report(f"semidirect_weil({lie.name})")
    checks.relation(rep, "Weil d of g|xV = d + delta_K + theta Lie - phi iota", dW, dK)
    # the Lie derivatives of W(g|xV) restricted to g reproduce Lie_a b = -rho_a b
    for a in range(dg):
        lg = Derivation(alg, f"Lie[{a + 1}]", (0, 0), lie_t[a])
        ref = Derivation(alg, "ref", (0, 0), {**weil_tables(lie, th, ph)[2][a], **lieV[a].action})
        checks.relation(rep, f"Lie[{a + 1}] on chi, b is -rho", lg, ref)
    checks.nilpotent(rep, "d^2 = 0", dW)
    iota = [Derivation(alg, f"iota[{a + 1}]", (0, -1), iota_t[a]) for a in range(dg)]
    Lie = [Derivation(alg, f"Lie[{a + 1}]", (0, 0), lie_t[a]) for a in range(dg)]
    return SemidirectWeil(lie, alg, th, ph, chi, b, dW, dK, iota, Lie, rep.finish())


def build_mq(lie: LieAlgebraData, variant: bool = False) -> MQModel:
    """W(g |x V) (x) Omega(V) with differential s.

    ``variant`` switches to the Kalkman-type action on Omega(V):
    s w = dw - theta w, s dw = -theta dw + phi w.
    """
    lie.validate()
    if lie.rho is None:
        raise InvalidRepresentation("Mathai-Quillen model needs rho")
    alg, th, ph, chi, b, w, dw = _mq_algebra(lie)
    n = len(chi)
    dg = lie.dim
    dWg, iW, lW = weil_tables(lie, th, ph)
    s = dict(dWg)
    th_chi = rho_act(lie, th, chi)
    th_b = rho_act(lie, th, b)
    ph_chi = rho_act(lie, ph, chi)
    for i in range(n):
        s[chi[i]] = b[i] - th_chi[i]
        s[b[i]] = -th_b[i] + ph_chi[i]
    if variant:
        th_w = rho_act(lie, th, w)
        th_dw = rho_act(lie, th, dw)
        ph_w = rho_act(lie, ph, w)
        for i in range(n):
            s[w[i]] = dw[i] - th_w[i]
            s[dw[i]] = -th_dw[i] + ph_w[i]
    else:
        for i in range(n):
            s[w[i]] = dw[i]
    S = Derivation(alg, "s", (0, 1), s)
    iota, Lie = [], []
    for a in range(dg):
        tab = dict(iW[a])
        if not variant:
            # in the variant the action on Omega(V) already sits in s
            rw = rho_mat(lie, a, w)
            tab.update({dw[i]: -rw[i] for i in range(n)})
        iota.append(Derivation(alg, f"iota[{a + 1}]", (0, -1), tab))
        tab = dict(lW[a])
        for vec in (chi, b, w, dw):
            rv = rho_mat(lie, a, vec)
            for i in range(n):
                tab[vec[i]] = -rv[i]
        Lie.append(Derivation(alg, f"Lie[{a + 1}]", (0, 0), tab))
    return MQModel(lie, alg, th, ph, chi, b, w, dw, S, iota, Lie, variant)


def mq_lagrangian(m: MQModel) -> Polynomial:
    """L = b^t(b/2 + i w) - 1/2 chi^t phi chi - i chi^t (dw + theta w)."""
    b, w, chi, dw = m.b, m.w, m.chi, m.dw
    ph_chi = rho_act(m.lie, m.phi, chi)
    th_w = rho_act(m.lie, m.theta, w)
    L = dot(b, [bi.scale(HALF) + wi.scale(I) for bi, wi in zip(b, w)])
    L = L - dot(chi, ph_chi).scale(HALF)
    L = L - dot(chi, [x + y for x, y in zip(dw, th_w)]).scale(I)
    return L


def mq_primitive(m: MQModel) -> Polynomial:
    """chi^t (i w + b/2)."""
    return dot(m.chi, [wi.scale(I) + bi.scale(HALF) for wi, bi in zip(m.w, m.b)])


def mq_coordinate_change(m: MQModel, sign: int = -1) -> dict:
    """Generator map b -> b + sign * theta chi (default: b -> b - theta chi)."""
    th_chi = rho_act(m.lie, m.theta, m.chi)
    return {m.b[i]: m.b[i] + th_chi[i].scale(sign) for i in range(len(m.b))}


def conjugate_by_substitution(m: MQModel, fwd: dict, inv: dict, D: Derivation, name: str):
    """inv o D o fwd as a derivation table (fwd, inv mutually inverse generator maps)."""
    alg = m.alg
    act = {}
    for g in alg.gens:
        act[g.id] = substitute(inv, apply(D, substitute(fwd, alg.var(g))))
    return Derivation(alg, name, D.degree, act)


def remark_s2(m: MQModel) -> tuple[list, list]:
    """The hand expansions of s^2 b and s^2 chi, built from matrix-valued pieces."""
    lie = m.lie
    s = m.s
    sth = [apply(s, t) for t in m.theta]
    sph = [apply(s, p) for p in m.phi]
    sb = [apply(s, x) for x in m.b]
    schi = [apply(s, x) for x in m.chi]
    # s^2 b = -(s theta) b + theta (s b) + (s phi) chi + phi (s chi)
    s2b = [-a + b_ + c + d for a, b_, c, d in zip(rho_act(lie, sth, m.b), rho_act(lie, m.theta, sb),
                                                 rho_act(lie, sph, m.chi), rho_act(lie, m.phi, schi))]
    # s^2 chi = s b - (s theta) chi + theta (s chi)
    s2chi = [a - b_ + c for a, b_, c in zip(sb, rho_act(lie, sth, m.chi), rho_act(lie, m.theta, schi))]
    return s2b, s2chi


def check_mq_identities(m: MQModel) -> Report:
    rep = Report(f"mq({m.lie.name}{', variant' if m.variant else ''})")
    alg = m.alg
    s = m.s
    # (i) s^2 = 0, including the expanded forms of s^2 b and s^2 chi
    checks.nilpotent(rep, "s^2 = 0", s)
    s2b, s2chi = remark_s2(m)
    for i in range(len(m.b)):
        rep.equal(f"s^2 b[{i + 1}] expansion", s2b[i], apply(s, apply(s, m.b[i])), f"b[{i + 1}]")
        rep.zero(f"s^2 b[{i + 1}] expansion vanishes", s2b[i], f"b[{i + 1}]")
        rep.zero(f"s^2 chi[{i + 1}] expansion vanishes", s2chi[i], f"chi[{i + 1}]")
    # contractions and Lie derivatives form an L-module with s
    derived = [commutator(s, m.iota[a]) for a in range(m.lie.dim)]
    for a in range(m.lie.dim):
        checks.relation(rep, f"[s,iota[{a + 1}]] = Lie[{a + 1}]", derived[a], m.Lie[a])
    if m.variant:
        w0 = m.w[0]
        sw = apply(s, w0)
        rep.lines.append(f"variant: s {w0} = {sw}")
        rep.record("variant s differs from de Rham on Omega(V)", sw != m.dw[0],
                   Witness(str(w0), str(sw), str(m.dw[0])))
        return rep.finish()
    L = mq_lagrangian(m)
    # (ii) exactness
    rep.equal("L = s(chi^t(i w + b/2))", L, apply(s, mq_primitive(m)), "L")
    # (iii) closedness
    rep.zero("s L = 0", apply(s, L), "L")
    # (iv) basic
    for a in range(m.lie.dim):
        rep.zero(f"iota[{a + 1}] L = 0", apply(m.iota[a], L), "L")
        rep.zero(f"Lie[{a + 1}] L = 0", apply(m.Lie[a], L), "L")
    # (v) after the change of coordinates
    rep.merge(check_mq_post_change(m, L))
    return rep.finish()


def mq_alpha_candidates(m: MQModel) -> dict:
    th_chi = rho_act(m.lie, m.theta, m.chi)
    return {
        "chi^t(b - theta chi)/2": dot(m.chi, [x - y for x, y in zip(m.b, th_chi)]).scale(HALF),
        "chi^t(b + theta chi)/2": dot(m.chi, [x + y for x, y in zip(m.b, th_chi)]).scale(HALF),
    }


def check_mq_post_change(m: MQModel, L: Polynomial | None = None) -> Report:
    """Change coordinates b -> b - theta chi and test L = s alpha + i(b^t w - chi^t dw).

    ``fwd`` rewrites a new-chart generator in old coordinates.  The new
    coordinate is b' = b - theta chi, so old b = b' + theta chi.
    """
    rep = Report("mq post-change")
    L = mq_lagrangian(m) if L is None else L
    old_of_new = mq_coordinate_change(m, +1)   # b_old = b' + theta chi
    new_of_old = mq_coordinate_change(m, -1)   # b' = b_old - theta chi
    # s'(g) = (old -> new)(s((new -> old)(g)))
    s_new = conjugate_by_substitution(m, new_of_old, old_of_new, m.s, "s'")
    # simplified differential: d on W(g), Koszul on Omega(V*), de Rham on Omega(V)
    dWg, _, _ = weil_tables(m.lie, m.theta, m.phi)
    simple = dict(dWg)
    for i in range(len(m.b)):
        simple[m.chi[i]] = m.b[i]
        simple[m.w[i]] = m.dw[i]
    checks.relation(rep, "s' = d + delta_K + d_V", s_new,
                    Derivation(m.alg, "simple", (0, 1), simple))
    L_new = substitute(old_of_new, L)
    rest = (dot(m.b, m.w) - dot(m.chi, m.dw)).scale(I)
    results = {}
    for label, alpha in mq_alpha_candidates(m).items():
        results[label] = (apply(s_new, alpha) + rest) == L_new
    cands = mq_alpha_candidates(m)
    for label in ("chi^t(b - theta chi)/2", "chi^t(b + theta chi)/2"):
        rep.equal(f"L = s alpha + i(b^t w - chi^t dw), alpha = {label}",
                  L_new, apply(s_new, cands[label]) + rest, "L")
    for label, ok in results.items():
        rep.lines.append(f"alpha = {label}: {'holds' if ok else 'fails'}")
    rep.data["alpha_readings"] = results
    return rep.finish()


def abelian_mq_lagrangian(m: MQModel) -> Polynomial:
    """b^t(b/2 + i w) - i chi^t dw, the trivial-action specialization."""
    return dot(m.b, [bi.scale(HALF) + wi.scale(I) for bi, wi in zip(m.b, m.w)]) - \
        dot(m.chi, m.dw).scale(I)


# ---------------------------------------------------------------------------
# Lie algebroid differential with constant data


def lie_algebroid_q(f, rho) -> tuple[Derivation, Report]:
    """Q = -1/2 f^a_{bc} theta^b theta^c d/dtheta^a + rho^mu_a theta^a d/dx^mu.

    ``f[a][b][c]`` and ``rho[mu][a]`` are constant; Q^2 = 0 is checked on generators.
    """
    dim = len(f)
    n = len(rho)
    alg = Algebra("LA")
    th = add_vector(alg, "theta", dim, (0, 1))
    x = add_vector(alg, "x", n, (0, 0))
    act = {}
    for a in range(dim):
        acc = alg.zero()
        for b in range(dim):
            for c in range(dim):
                if f[a][b][c]:
                    acc = acc - (th[b] * th[c]).scale(HALF * f[a][b][c])
        act[th[a]] = acc
    for mu in range(n):
        act[x[mu]] = sum((th[a].scale(rho[mu][a]) for a in range(dim) if rho[mu][a]), alg.zero())
    Q = Derivation(alg, "Q", (0, 1), act)
    rep = Report("lie_algebroid")
    checks.nilpotent(rep, "Q^2 = 0", Q)
    return Q, rep.finish()


# ---------------------------------------------------------------------------
# degree -3 Poisson bracket on g[1] + g*[2]


@dataclass
class SymplecticPreset:
    lie: LieAlgebraData
    alg: Algebra
    theta: list
    phi: list
    metric: list
    _pairs: list | None = field(default=None, repr=False)

    def bracket(self, f: Polynomial, g: Polynomial) -> Polynomial:
        return poisson_bracket(self, f, g)

    def pairs(self):
        """(theta^a, phi_a) generator ids."""
        if self._pairs is None:
            r = self.alg.resolve
            self._pairs = [(r(t), r(p)) for t, p in zip(self.theta, self.phi)]
        return self._pairs

    def I(self, a):
        return self.phi[a]

    def L(self, a):
        f = self.lie.f
        acc = self.alg.zero()
        for b in range(self.lie.dim):
            for c in range(self.lie.dim):
                if f[b][a][c]:
                    acc = acc - (self.phi[b] * self.theta[c]).scale(f[b][a][c])
        return acc

    def S(self):
        f, g, dim = self.lie.f, self.metric, self.lie.dim
        acc = self.alg.zero()
        for a in range(dim):
            for b in range(dim):
                if g[a][b]:
                    acc = acc + (self.phi[a] * self.phi[b]).scale(HALF * g[a][b])
        for a in range(dim):
            for b in range(dim):
                for c in range(dim):
                    if f[a][b][c]:
                        acc = acc - (self.phi[a] * self.theta[b] * self.theta[c]).scale(HALF * f[a][b][c])
        return acc


def build_symplectic(lie: LieAlgebraData) -> SymplecticPreset:
    lie.validate()
    alg = Algebra(f"T*[3]{lie.name}[1]")
    th = add_vector(alg, "theta", lie.dim, (0, 1))
    ph = add_vector(alg, "phi", lie.dim, (0, 2))
    return SymplecticPreset(lie, alg, th, ph, lie.metric or identity(lie.dim))


def poisson_bracket(p: SymplecticPreset, f: Polynomial, g: Polynomial) -> Polynomial:
    """{f, g} = sum_a (f <d/dphi_a)(d/dtheta^a> g) - (f <d/dtheta^a)(d/dphi_a> g).

    Right derivatives act on f and left derivatives on g; with this sign
    {phi_a, theta^b} = delta_a^b and the QK Weil relations close.
    """
    out = p.alg.zero()
    vf, vg = f.variables(), g.variables()
    for th, ph in p.pairs():
        if ph in vf and th in vg:
            out = out + right_derivative(f, ph) * left_derivative(g, th)
        if th in vf and ph in vg:
            out = out - right_derivative(f, th) * left_derivative(g, ph)
    return out


def check_qkweil(p: SymplecticPreset) -> Report:
    rep = Report(f"qkweil({p.lie.name})")
    dim = p.lie.dim
    S = p.S()
    for a in range(dim):
        for b in range(dim):
            rep.zero(f"{{I[{a + 1}],I[{b + 1}]}} = 0", p.bracket(p.I(a), p.I(b)))
            rhs = sum((p.I(c).scale(p.lie.f[c][a][b]) for c in range(dim) if p.lie.f[c][a][b]),
                      p.alg.zero())
            rep.equal(f"{{L[{a + 1}],I[{b + 1}]}} = f I", p.bracket(p.L(a), p.I(b)), rhs)
        rep.equal(f"{{S,I[{a + 1}]}} = L[{a + 1}]", p.bracket(S, p.I(a)), p.L(a))
    rep.zero("{S,S} = 0", p.bracket(S, S))
    return rep.finish()


def poisson_monomials(p: SymplecticPreset, max_degree: int) -> list:
    out = []
    for k in range(0, max_degree + 1):
        for m in graded_basis(p.alg, k):
            out.append(Polynomial(p.alg, {m: Fraction(1)}))
    return out


def poisson_laws(p: SymplecticPreset, elems: list) -> Report:
    """Graded antisymmetry and Jacobi for a bracket of degree -3 (odd)."""
    rep = Report("poisson laws")
    deg = {id(e): e.degree().v for e in elems}
    anti_ok, jac_ok = True, True
    for f in elems:
        for g in elems:
            fg = p.bracket(f, g)
            gf = p.bracket(g, f)
            sgn = -1 if ((deg[id(f)] + 1) * (deg[id(g)] + 1)) & 1 else 1
            if gf != fg.scale(-sgn):
                if anti_ok:
                    rep.witnesses.append(Witness(f"{f}, {g}", str(gf), str(fg.scale(-sgn)), "antisymmetry"))
                anti_ok = False
    for f in elems:
        for g in elems:
            fg = p.bracket(f, g)
            for h in elems:
                lhs = p.bracket(f, p.bracket(g, h))
                sgn = -1 if ((deg[id(f)] + 1) * (deg[id(g)] + 1)) & 1 else 1
                rhs = p.bracket(fg, h) + p.bracket(g, p.bracket(f, h)).scale(sgn)
                if lhs != rhs:
                    if jac_ok:
                        rep.witnesses.append(Witness(f"{f}, {g}, {h}", str(lhs), str(rhs), "jacobi"))
                    jac_ok = False
    rep.record("graded antisymmetry", anti_ok)
    rep.record("graded Jacobi", jac_ok)
    return rep.finish()
