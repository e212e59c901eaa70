"""Truncated variational algebras: jet coordinates, the canonical QK structure,
descent equations and K-sequences, and the rigid example presets.

Coordinates x^mu are left out (functions are taken x-independent); the
differentials dx^mu stay.  Multi-indices are sorted tuples of base indices
1..n.  A derivation that would need a jet above the truncation J is marked
undefined there and raises TruncationExceeded when reached.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, permutations

from . import checks
from .coeff import as_coeff
from .core import (
    Algebra,
    Derivation,
    Polynomial,
    apply,
    binomial,
    commutator,
    power_series,
    zero_derivation,
)
from .errors import DegreeMismatch, NotAntisymmetric, NotClosed, TruncationExceeded
from .report import Report, Witness


def multi_indices(n: int, J: int) -> list:
    """Sorted multi-indices over 1..n of length 0..J."""
    out = []
    for k in range(J + 1):
        out.extend(combinations_with_replacement(range(1, n + 1), k))
    return out


def add_index(I: tuple, mu: int) -> tuple:
    return tuple(sorted(I + (mu,)))


class JetSpace:
    """Bookkeeping for jet generators over an n-dimensional base, truncated at J."""

    def __init__(self, alg: Algebra, n: int, J: int, base: str = "x"):
        if n < 1 or J < 0:
            raise ValueError("need n >= 1 and J >= 0")
        self.alg = alg
        self.n = n
        self.J = J
        self.base = base
        self.fields: dict = {}        # name -> (components, degree)
        self.jet_of: dict = {}        # gid -> (name, comp, I)
        self.dx = [alg.add("d" + base, (mu,) if n > 1 else (), (1, 0)) for mu in range(1, n + 1)]

    def dxp(self, mu) -> Polynomial:
        return self.alg.var(self.dx[mu - 1])

    def add_field(self, name, components, degree, order: int | None = None) -> list:
        """Declare name[c;I] for every component index tuple c and |I| <= order (default J)."""
        comps = [c if isinstance(c, tuple) else (c,) for c in components]
        J = self.J if order is None else order
        out = []
        for c in comps:
            for I in multi_indices(self.n, J):
                g = self.alg.add(name, c, degree, kind="jet", jet=I if I else None)
                self.jet_of[g.id] = (name, c, I)
                out.append(g)
        self.fields[name] = (comps, degree, J)
        return out

    def var(self, name, comp=(), I=()) -> Polynomial:
        comp = comp if isinstance(comp, tuple) else (comp,)
        I = tuple(sorted(I))
        if name in self.fields and len(I) > self.fields[name][2]:
            raise TruncationExceeded(f"{name}{list(comp)} needs jet order {len(I)} > {self.fields[name][2]}")
        return self.alg(name, *comp, jet=I)

    def shifted(self, gid, mu):
        """Generator id of the jet one order higher in direction mu, or None above J."""
        name, c, I = self.jet_of[gid]
        J2 = add_index(I, mu)
        if len(J2) > self.fields[name][2]:
            return None
        return self.alg.get(name, *c, jet=J2).id

    def total_derivative(self, mu: int, name="D") -> Derivation:
        """D_mu: field_I -> field_{I+mu}; dx -> 0; undefined at the top order."""
        act, undefined = {}, set()
        for gid in self.jet_of:
            s = self.shifted(gid, mu)
            if s is None:
                undefined.add(gid)
            else:
                act[gid] = self.alg.var(s)
        return Derivation(self.alg, f"{name}[{mu}]", (0, 0), act, undefined, check=False)

    def d_h2(self, name="L", only=None) -> Derivation:
        """g_I -> sum_mu g_{I+mu} dx^mu on the jet generators (optionally a subset of fields)."""
        alg = self.alg
        act, undefined = {}, set()
        for gid, (fname, _, _) in self.jet_of.items():
            if only is not None and fname not in only:
                continue
            img = alg.zero()
            for mu in range(1, self.n + 1):
                s = self.shifted(gid, mu)
                if s is None:
                    undefined.add(gid)
                    break
                img = img + alg.var(s) * self.dxp(mu)
            else:
                act[gid] = img
        return Derivation(alg, name, (1, 0), act, undefined, check=False)

    def dh_of(self, f: Polynomial) -> Polynomial:
        """Horizontal differential of a polynomial via d_h2."""
        return apply(self.d_h2(), f)

    def top_form(self) -> Polynomial:
        """dx^1 ... dx^n."""
        out = self.alg.one()
        for mu in range(1, self.n + 1):
            out = out * self.dxp(mu)
        return out


# ---------------------------------------------------------------------------
# canonical QK structure


@dataclass
class JetField:
    name: str
    components: int = 1
    degree: tuple = (0, 0)
    vertical: str | None = None  # name of the delta-partner, default "d" + name

    @property
    def vname(self):
        return self.vertical or "d" + self.name


@dataclass
class JetPreset:
    name: str
    alg: Algebra
    space: JetSpace
    fields: list
    Q: Derivation
    K: Derivation
    L: Derivation
    dh1: Derivation
    meta: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.space.n

    @property
    def J(self):
        return self.space.J

    def u(self, j=None, I=(), fld=None):
        f = self.fields[0] if fld is None else next(x for x in self.fields if x.name == fld)
        comp = () if f.components == 1 and j is None else (j,)
        return self.space.var(f.name, comp, I)

    def du(self, j=None, I=(), fld=None):
        f = self.fields[0] if fld is None else next(x for x in self.fields if x.name == fld)
        comp = () if f.components == 1 and j is None else (j,)
        return self.space.var(f.vname, comp, I)

    def dx(self, mu):
        return self.space.dxp(mu)

    def dh_u(self, j=None, fld=None):
        """d_h u^j = u^j_mu dx^mu."""
        return sum((self.u(j, (mu,), fld) * self.dx(mu) for mu in range(1, self.n + 1)),
                   self.alg.zero())


def build_jet(fields, n: int, J: int = 2, base: str = "x", include_x: bool = False,
              name: str = "jet") -> JetPreset:
    """Canonical QK structure: Q = d_v, L = d_h2, K(du_I) = u_{I+mu} dx^mu."""
    fields = [f if isinstance(f, JetField) else JetField(*f) if isinstance(f, tuple) else JetField(f)
              for f in fields]
    if n < 1 or J < 1:
        raise ValueError("need n >= 1 and J >= 1")
    alg = Algebra(name)
    sp = JetSpace(alg, n, J, base)
    xs = []
    if include_x:
        xs = [alg.add(base, (mu,) if n > 1 else (), (0, 0)) for mu in range(1, n + 1)]
    pairs = []
    for f in fields:
        comps = [()] if f.components == 1 else [(j,) for j in range(1, f.components + 1)]
        h, v = f.degree
        us = sp.add_field(f.name, comps, (h, v))
        dus = sp.add_field(f.vname, comps, (h, v + 1))
        pairs.append((us, dus))
    Qa, Ka = {}, {}
    Kund = set()
    for us, dus in pairs:
        for u, du in zip(us, dus):
            Qa[u.id] = alg.var(du)
            _, c, I = sp.jet_of[du.id]
            img = alg.zero()
            for mu in range(1, n + 1):
                s = sp.shifted(sp.alg.get(u.name, *c, jet=I).id, mu)
                if s is None:
                    Kund.add(du.id)
                    break
                img = img + alg.var(s) * sp.dxp(mu)
            else:
                Ka[du.id] = img
    Q = Derivation(alg, "Q", (0, 1), Qa)
    K = Derivation(alg, "K", (1, -1), Ka, Kund)
    L = sp.d_h2("L")
    dh1 = Derivation(alg, "d_h1", (1, 0), {x.id: alg.var(dx) for x, dx in zip(xs, sp.dx)})
    return JetPreset(name, alg, sp, fields, Q, K, L, dh1)


def check_jet_relations(p) -> Report:
    """Q^2 = 0, QK + KQ = L, KL + LK = 0 on every generator where defined."""
    rep = Report(f"{p.name} relations (n={p.n}, J={p.J})")
    checks.nilpotent(rep, "Q^2 = 0", p.Q)
    QK = commutator(p.Q, p.K)
    checks.relation(rep, "QK + KQ = L", QK, p.L)
    KL = commutator(p.K, p.L)
    checks.relation(rep, "KL + LK = 0", KL, None)
    skipped = len(QK.undefined | p.L.undefined)
    rep.lines.append(f"{len(p.alg.gens) - skipped} generators checked below the truncation")
    return rep.finish()


# ---------------------------------------------------------------------------
# flat (T + T)[(1,1)] M


@dataclass
class FlatPreset:
    name: str
    alg: Algebra
    x: list
    eta: list
    theta: list
    Q: Derivation
    K: Derivation
    L: Derivation


def flat_tsm(n: int) -> FlatPreset:
    """x (0,0), eta (1,0), theta (0,1); Q = theta d/dx, K = eta d/dtheta, L = eta d/dx."""
    alg = Algebra(f"tsm({n})")
    x = [alg.add("x", (m,), (0, 0)) for m in range(1, n + 1)]
    eta = [alg.add("eta", (m,), (1, 0)) for m in range(1, n + 1)]
    th = [alg.add("theta", (m,), (0, 1)) for m in range(1, n + 1)]
    Q = Derivation(alg, "Q", (0, 1), {a.id: alg.var(b) for a, b in zip(x, th)})
    K = Derivation(alg, "K", (1, -1), {a.id: alg.var(b) for a, b in zip(th, eta)})
    L = Derivation(alg, "L", (1, 0), {a.id: alg.var(b) for a, b in zip(x, eta)})
    return FlatPreset(f"flat_tsm({n})", alg, x, eta, th, Q, K, L)


# ---------------------------------------------------------------------------
# descent


@dataclass
class DescentSequence:
    O: list
    label: str = ""

    def __len__(self):
        return len(self.O)

    def __getitem__(self, p):
        return self.O[p]

    def render(self) -> list:
        return [f"O[{p}] = {o}" for p, o in enumerate(self.O)]


def _check_degrees(O, n, what="O"):
    for p, o in enumerate(O):
        if not o:
            continue
        for d in o.degrees():
            if tuple(d) != (p, n - p):
                raise DegreeMismatch(f"{what}[{p}] has degree {tuple(d)}, expected {(p, n - p)}")


def verify_descent(p, seq: DescentSequence, check_degrees: bool = True) -> Report:
    """Q O[0] = 0 and Q O[k] = L O[k-1]; residuals recorded per k."""
    O = seq.O
    n = len(O) - 1
    if check_degrees:
        _check_degrees(O, n)
    rep = Report(f"descent{'(' + seq.label + ')' if seq.label else ''}")
    rep.zero("Q O[0] = 0", apply(p.Q, O[0]), "O[0]")
    for k in range(1, len(O)):
        res = apply(p.Q, O[k]) - apply(p.L, O[k - 1])
        rep.zero(f"Q O[{k}] = L O[{k - 1}]", res, f"O[{k}]")
    rep.data["residuals"] = [None] + [str(apply(p.Q, O[k]) - apply(p.L, O[k - 1]))
                                      for k in range(1, len(O))]
    return rep.finish()


def _require_closed(p, f, index=None, what="O[0]"):
    r = apply(p.Q, f)
    if r:
        raise NotClosed(f"{what} is not Q-closed: Q {what} = {r}", index)


def standard_k_sequence(p, O0: Polynomial, n: int | None = None) -> DescentSequence:
    """O[k] = K^k O0 / k! for k = 0..n (n defaults to the vertical degree of O0)."""
    _require_closed(p, O0)
    n = _top(p, O0, n)
    series = power_series(p.K, O0, max_iter=n + 1) if O0 else [O0]
    O = [series[k] if k < len(series) else p.alg.zero() for k in range(n + 1)]
    return DescentSequence(O, "standard")


def _top(p, O0, n):
    if n is not None:
        return n
    if O0:
        d = O0.degree()
        if d is None or d == "mixed":
            raise DegreeMismatch("O[0] must be homogeneous")
        return d.v
    return getattr(p, "n", 0)


def general_k_sequence(p, O0: Polynomial, W: dict, n: int | None = None) -> DescentSequence:
    """O[k] = K^k O0/k! + sum_{q<=k} K^{k-q} W[q] / (k-q)!."""
    _require_closed(p, O0)
    n = _top(p, O0, n)
    top = O0.degree().v if O0 else n
    for q, w in sorted(W.items()):
        if w:
            for d in w.degrees():
                if tuple(d) != (q, top - q):
                    raise DegreeMismatch(f"W[{q}] has degree {tuple(d)}, expected {(q, top - q)}")
            _require_closed(p, w, q, f"W[{q}]")
    base = standard_k_sequence(p, O0, n).O
    O = list(base)
    for q, w in W.items():
        if not w:
            continue
        term = w
        for k in range(q, n + 1):
            if k > q:
                term = apply(p.K, term).scale(Fraction(1, k - q))
            O[k] = O[k] + term
    return DescentSequence(O, "general")


def exact_sequence(p, rho: list, n: int | None = None) -> DescentSequence:
    """O[0] = Q rho[0], O[i] = Q rho[i] + L rho[i-1] with rho[i] of degree (i, n-i-1)."""
    n = p.n if n is None else n
    rho = list(rho) + [p.alg.zero()] * (n + 1 - len(rho))
    for i, r in enumerate(rho):
        if not r:
            continue
        for d in r.degrees():
            if tuple(d) != (i, n - i - 1):
                raise DegreeMismatch(f"rho[{i}] has degree {tuple(d)}, expected {(i, n - i - 1)}")
    O = [apply(p.Q, rho[0])]
    for i in range(1, n + 1):
        O.append(apply(p.Q, rho[i]) + apply(p.L, rho[i - 1]))
    return DescentSequence(O, "exact")


def is_k_sequence_with_witness(p, seq: DescentSequence, O0: Polynomial, W: dict,
                               rho: list | None = None) -> Report:
    """seq = general K-sequence(O0, W) + exact(rho), termwise (a checker, no search)."""
    n = len(seq.O) - 1
    gen = general_k_sequence(p, O0, W, n).O
    ex = exact_sequence(p, rho, n).O if rho else [p.alg.zero()] * (n + 1)
    rep = Report("k-sequence up to exact")
    first = None
    for k in range(n + 1):
        target = gen[k] + ex[k]
        ok = seq.O[k] == target
        if not ok and first is None:
            first = k
        rep.record(f"O[{k}] = K-sequence + exact", ok, Witness(f"O[{k}]", str(seq.O[k]), str(target)))
    rep.data["first_mismatch"] = first
    return rep.finish()


# ---------------------------------------------------------------------------
# pullback of a closed form


def antisymmetric_tensor(alpha: dict, rank: int) -> dict:
    """Full antisymmetric component table from increasing-key or full input."""
    full: dict = {}
    for key, val in alpha.items():
        key = tuple(key)
        if len(key) != rank:
            raise NotAntisymmetric(f"component {key} has rank {len(key)}, expected {rank}")
        if not _nonzero(val):
            continue
        if len(set(key)) < rank:
            raise NotAntisymmetric(f"nonzero component with repeated index {key}")
        for perm in permutations(range(rank)):
            k2 = tuple(key[i] for i in perm)
            v2 = val if _perm_sign(perm) > 0 else -val
            old = full.get(k2)
            if old is not None and old != v2:
                raise NotAntisymmetric(f"components {key} and {k2} are not antisymmetric")
            full[k2] = v2
    return full


def _nonzero(v):
    return bool(v) if not isinstance(v, (int, Fraction)) else v != 0


def _perm_sign(perm):
    s = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


def pullback_observable(p: JetPreset, alpha: dict, fld: str | None = None,
                        convention: str = "first") -> DescentSequence:
    """Pieces of e^* alpha: C(n,k) alpha_{i1..in} d_h u^{i1} .. d_h u^{ik} du^{i(k+1)} .. du^{in}.

    ``alpha`` maps index tuples (1-based target indices) to constants or to
    polynomials in the undifferentiated fields; it is antisymmetrized.

    With convention="second" the pieces are returned as written for de Rham
    forms; they satisfy Q O[k] = (-1)^(k+1) L O[k-1], because the de Rham d_v
    becomes (-1)^h Q after the change to the first kind.  The default rescales
    piece k by (-1)^(k(k-1)/2), which gives an honest descendant sequence.
    """
    if convention not in ("first", "second"):
        raise ValueError("convention must be 'first' or 'second'")
    n = p.n
    full = antisymmetric_tensor(alpha, n)
    alg = p.alg
    O = []
    for k in range(n + 1):
        acc = alg.zero()
        for idx, c in full.items():
            t = c if isinstance(c, Polynomial) else alg.const(c)
            for pos, i in enumerate(idx):
                t = t * (p.dh_u(i, fld) if pos < k else p.du(i, (), fld))
            acc = acc + t
        c = binomial(n, k)
        if convention == "first" and (k * (k - 1) // 2) % 2:
            c = -c
        O.append(acc.scale(c))
    _require_closed(p, O[0])
    return DescentSequence(O, "pullback" if convention == "first" else "pullback(de Rham)")


def verify_de_rham_descent(p, seq: DescentSequence) -> Report:
    """Q O[0] = 0 and Q O[k] = (-1)^(k+1) L O[k-1] (descent for untransferred de Rham pieces)."""
    O = seq.O
    rep = Report("de Rham descent")
    rep.zero("Q O[0] = 0", apply(p.Q, O[0]), "O[0]")
    for k in range(1, len(O)):
        Lk = apply(p.L, O[k - 1])
        res = apply(p.Q, O[k]) - (Lk if k % 2 else -Lk)
        rep.zero(f"Q O[{k}] = (-1)^{k + 1} L O[{k - 1}]", res, f"O[{k}]")
    return rep.finish()


# ---------------------------------------------------------------------------
# example presets


def tqm(k: int = 2, J: int = 2) -> JetPreset:
    """Topological quantum mechanics: n = 1 (base t), k target coordinates."""
    p = build_jet([JetField("u", k)], 1, J, base="t", name=f"tqm({k})")
    # alpha = dh with h = 1/2 sum (u^i)^2, so alpha_i = u^i
    p.meta["alpha"] = {(i,): p.u(i) for i in range(1, k + 1)}
    return p


def standard_symplectic(m: int) -> dict:
    if m % 2:
        raise NotAntisymmetric("a symplectic target needs even dimension")
    return {(2 * a - 1, 2 * a): Fraction(1) for a in range(1, m // 2 + 1)}


def sigma(m: int = 2, omega: dict | None = None, J: int = 2) -> JetPreset:
    """Topological sigma model: n = 2, target dimension m, constant omega."""
    p = build_jet([JetField("u", m)], 2, J, name=f"sigma({m})")
    p.meta["alpha"] = omega if omega is not None else standard_symplectic(m)
    return p


G2_PHI = {(1, 2, 3): 1, (1, 4, 5): 1, (1, 6, 7): 1, (2, 4, 6): 1,
          (2, 5, 7): -1, (3, 4, 7): -1, (3, 5, 6): -1}


def mtheory(phi: dict | None = None, target: int = 7, J: int = 2) -> JetPreset:
    """Topological M-theory: n = 3, constant 3-form Phi (default the G2 form on R^7)."""
    p = build_jet([JetField("u", target)], 3, J, name="mtheory")
    p.meta["alpha"] = {k: Fraction(v) for k, v in (phi if phi is not None else G2_PHI).items()}
    return p


def omega_polynomial(p: JetPreset, alpha: dict, k: int) -> Polynomial:
    """alpha_{i..} (u_mu dx^mu)^{i1} .. du .. written straight from the component formula."""
    return pullback_observable(p, alpha).O[k]


def seed(p: JetPreset) -> Polynomial:
    """O[0] = alpha_{i1..in} du^{i1} .. du^{in} for the preset's alpha."""
    return pullback_observable(p, p.meta["alpha"]).O[0]


def zero_K(p) -> Derivation:
    return zero_derivation(p.alg, (1, -1), "0")


def as_rational(x):
    return as_coeff(x)
