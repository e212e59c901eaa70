"""Named presets for scripts and the CLI.

A preset bundles an algebra with its derivations, named polynomials,
Lie-valued vectors, tensors, default index ranges and the check suites run
by ``report``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from types import SimpleNamespace
from typing import Callable

from . import checks, curvature, equivariant as eq, gauge, jet
from .core import Algebra, commutator
from .errors import MissingMetric, MissingStructure, UnknownName
from .lie import LieAlgebraData, abelian, by_name, corrupted_su2
from .report import Report

LIE_INDICES = ("a", "b", "c", "e")


@dataclass
class LieVec:
    """Lie-algebra valued element, stored by components."""
    comps: list
    lie: LieAlgebraData


@dataclass
class Context:
    name: str
    alg: Algebra
    lie: LieAlgebraData | None = None
    ders: dict = field(default_factory=dict)
    polys: dict = field(default_factory=dict)
    vecs: dict = field(default_factory=dict)
    tensors: dict = field(default_factory=dict)
    ranges: dict = field(default_factory=dict)
    suites: dict = field(default_factory=dict)
    obj: object = None
    bracket: Callable | None = None
    tr_power: Callable | None = None

    def qkl(self):
        """Object with Q, K, L and alg, as the descent functions expect."""
        if self.obj is not None and all(hasattr(self.obj, x) for x in ("Q", "K", "L")):
            return self.obj
        missing = [x for x in ("Q", "K", "L") if x not in self.ders]
        if missing:
            raise MissingStructure(f"{self.name} has no derivation {missing[0]}")
        return SimpleNamespace(alg=self.alg, Q=self.ders["Q"], K=self.ders["K"], L=self.ders["L"],
                               n=self.ranges.get("mu", (1, 0))[1] or None)

    def list_generators(self) -> list:
        return [f"{g.label} {tuple(g.degree)}" for g in self.alg.gens]

    def trace(self, X: LieVec, Y: LieVec):
        g = X.lie.metric
        if g is None:
            raise MissingMetric(f"Tr on {X.lie.name} needs an invariant metric")
        out = self.alg.zero()
        for a, b in product(range(X.lie.dim), repeat=2):
            if g[a][b]:
                out = out + (X.comps[a] * Y.comps[b]).scale(g[a][b])
        return out

    def trace_power(self, X: LieVec, m: int):
        if self.tr_power is not None:
            return self.tr_power(X, m)
        if m == 2:
            return self.trace(X, X)
        rho = X.lie.rho
        if rho is None:
            raise MissingMetric(f"Tr(X^{m}) needs a representation of {X.lie.name}")
        n = len(rho[0])
        out = self.alg.zero()
        for idx in product(range(X.lie.dim), repeat=m):
            M = rho[idx[0]]
            for a in idx[1:]:
                M = [[sum(M[i][k] * rho[a][k][j] for k in range(n)) for j in range(n)] for i in range(n)]
            tr = sum(M[i][i] for i in range(n))
            if tr:
                t = self.alg.const(tr)
                for a in idx:
                    t = t * X.comps[a]
                out = out + t
        return out


def lie_tensors(lie: LieAlgebraData) -> dict:
    d = lie.dim
    f = {(a + 1, b + 1, c + 1): lie.f[a][b][c] for a in range(d) for b in range(d) for c in range(d)
         if lie.f[a][b][c]}
    out = {"f": f}
    if lie.metric is not None:
        out["g"] = {(a + 1, b + 1): lie.metric[a][b] for a in range(d) for b in range(d)
                    if lie.metric[a][b]}
    return out


def _lie_ranges(lie):
    return {k: (1, lie.dim) for k in LIE_INDICES}


def _ders(ds):
    return {D.name: D for D in ds}


def lie_of(spec) -> LieAlgebraData:
    """su2, so3, so2, so<n>, u1, u1^<n>, broken_su2, abelian(n)."""
    if isinstance(spec, LieAlgebraData):
        return spec
    if isinstance(spec, tuple):
        name, args = spec
        if name == "abelian" and len(args) == 1:
            return abelian(int(args[0]))
        raise UnknownName(f"unknown Lie algebra {name}({', '.join(map(str, args))})")
    if spec == "corrupted_su2":
        return corrupted_su2()
    return by_name(str(spec))


# ---------------------------------------------------------------------------
# builders


def weil(lie) -> Context:
    lie = lie_of(lie)
    p = eq.build_weil(lie, validate=False)
    return Context(f"weil({lie.name})", p.alg, lie, _ders([p.d, *p.iota, *p.Lie]),
                   vecs={"theta": LieVec(p.theta, lie), "phi": LieVec(p.phi, lie)},
                   tensors=lie_tensors(lie), ranges=_lie_ranges(lie),
                   suites={"default": lambda: eq.check_L_module(p, f"L-module {lie.name}"),
                           "acyclic": lambda: _acyclic(p)},
                   obj=p)


def _acyclic(p) -> Report:
    rep = Report(f"W({p.lie.name}) acyclicity")
    dims = eq.cohomology_dims(p.d, range(1, 5))
    for k, h in dims.items():
        rep.record(f"H^{k} = 0", h == 0)
        rep.lines.append(f"dim H^{k} = {h}")
    return rep.finish()


def kalkman(lie) -> Context:
    lie = lie_of(lie)
    m = eq.build_weil_tensor(lie)
    J = eq.mq_generator(m)
    ders = _ders([m.d, *m.iota, *m.Lie, *m.iotaW, *m.iotaX, *m.lieW, *m.lieX, J])
    return Context(f"kalkman({lie.name})", m.alg, lie, ders,
                   vecs={"theta": LieVec(m.theta, lie), "phi": LieVec(m.phi, lie)},
                   tensors=lie_tensors(lie), ranges=_lie_ranges(lie),
                   suites={"default": lambda: eq.kalkman_conjugate(m)[1],
                           "minus": lambda: eq.kalkman_conjugate(m, -1)[1]},
                   obj=m)


def semidirect_weil(lie, rep="std") -> Context:
    lie = lie_of(lie)
    if rep not in ("std", "adjoint"):
        raise UnknownName(f"unknown representation {rep}")
    if rep == "adjoint":
        lie = lie.with_rho(lie.adjoint())
    p = eq.build_semidirect_weil(lie)
    return Context(f"semidirect_weil({lie.name},{rep})", p.alg, lie,
                   _ders([p.d, p.dK, *p.iota, *p.Lie]),
                   vecs={"theta": LieVec(p.theta, lie), "phi": LieVec(p.phi, lie)},
                   tensors=lie_tensors(lie), ranges=_lie_ranges(lie),
                   suites={"default": lambda: p.report}, obj=p)


def mq(lie, variant=False) -> Context:
    lie = lie_of(lie)
    m = eq.build_mq(lie, variant=bool(variant))
    polys = {}
    suites = {"default": lambda: eq.check_mq_identities(m)}
    if not m.variant:
        polys["L_fin"] = eq.mq_lagrangian(m)
        polys["Psi"] = eq.mq_primitive(m)
        for k, (label, a) in enumerate(eq.mq_alpha_candidates(m).items()):
            polys[f"alpha[{k + 1}]"] = a
        suites["postchange"] = lambda: eq.check_mq_post_change(m)
    return Context(f"mq({lie.name}{',variant' if m.variant else ''})", m.alg, lie,
                   _ders([m.s, *m.iota, *m.Lie]), polys,
                   {"theta": LieVec(m.theta, lie), "phi": LieVec(m.phi, lie)},
                   lie_tensors(lie), _lie_ranges(lie) | {"j": (1, len(m.chi)), "k": (1, len(m.chi))},
                   suites, obj=m)


def qkweil(lie) -> Context:
    lie = lie_of(lie)
    p = eq.build_symplectic(lie)
    polys = {"S": p.S()}
    for a in range(lie.dim):
        polys[f"I[{a + 1}]"] = p.I(a)
        polys[f"L[{a + 1}]"] = p.L(a)
    return Context(f"qkweil({lie.name})", p.alg, lie, {}, polys,
                   {"theta": LieVec(p.theta, lie), "phi": LieVec(p.phi, lie)},
                   lie_tensors(lie), _lie_ranges(lie),
                   {"default": lambda: eq.check_qkweil(p),
                    "laws": lambda: eq.poisson_laws(p, eq.poisson_monomials(p, 6))},
                   obj=p, bracket=p.bracket)


def _jet_context(p, name, alias=None) -> Context:
    ders = {"Q": p.Q, "K": p.K, "L": p.L}
    if getattr(p, "dh1", None) is not None:
        ders["d_h1"] = p.dh1
    sp = p.space
    for mu in range(1, p.n + 1):
        D = sp.total_derivative(mu)
        ders[D.name] = D
    tensors = {}
    alpha = p.meta.get("alpha")
    if alpha:
        tensors["alpha"] = jet.antisymmetric_tensor(alpha, len(next(iter(alpha))))
        if alias:
            tensors[alias] = tensors["alpha"]
    ranges = {"mu": (1, p.n), "nu": (1, p.n)}
    ncomp = max((max((c[0] for c in f[0] if c), default=1) for f in sp.fields.values()), default=1)
    ranges |= {"j": (1, ncomp), "k": (1, ncomp), "l": (1, ncomp)}
    polys = {"O0": jet.seed(p)} if alpha else {}
    return Context(name, p.alg, None, ders, polys, {}, tensors, ranges,
                   {"default": lambda: jet.check_jet_relations(p)}, obj=p)


def tqm(k=2, J=2) -> Context:
    return _jet_context(jet.tqm(int(k), int(J)), f"tqm({k})")


def sigma(m=2, J=2) -> Context:
    return _jet_context(jet.sigma(int(m), J=int(J)), f"sigma({m})", "omega")


def mtheory(J=2) -> Context:
    return _jet_context(jet.mtheory(J=int(J)), "mtheory", "Phi")


def jetspace(n, J=3, k=1) -> Context:
    """Canonical QK structure on the jets of k scalar fields over R^n."""
    p = jet.build_jet([jet.JetField("u", int(k))], int(n), int(J))
    return _jet_context(p, f"jet({n},{J},{k})")


def flat_tsm(n) -> Context:
    p = jet.flat_tsm(int(n))

    def suite():
        rep = Report(p.name)
        checks.nilpotent(rep, "Q^2 = 0", p.Q)
        checks.relation(rep, "QK + KQ = L", commutator(p.Q, p.K), p.L)
        checks.relation(rep, "KL + LK = 0", commutator(p.K, p.L), None)
        return rep.finish()

    return Context(p.name, p.alg, None, {"Q": p.Q, "K": p.K, "L": p.L}, ranges={"mu": (1, int(n))},
                   suites={"default": suite}, obj=SimpleNamespace(alg=p.alg, Q=p.Q, K=p.K, L=p.L, n=int(n)))


def gauge_preset(lie, n=4, J=2, r=0, s=0, t=1, chart="post") -> Context:
    lie = lie_of(lie)
    p = gauge.build_gauge_jet(lie, int(n), int(J), r, s, t, chart=str(chart))
    S = p.space
    ders = {"Q": p.Q, "K": p.K, "L": p.L, "d_h": S.dh}
    for mu, D in S.D.items():
        ders[D.name] = D
    vecs = {f: LieVec(S.comp(f), lie) for f in ("theta", "phi", "w", "psi", "lambda")}
    vecs |= {f: LieVec(S.form(f), lie) for f in ("A", "upsilon", "chi", "b")}
    vecs["F"] = LieVec(S.curvature(), lie)
    vecs["theta_K"] = LieVec(gauge.theta_K(p), lie)
    vecs["phi_K"] = LieVec(gauge.phi_K(p), lie)
    state = {}

    def gs():
        if "gs" not in state:
            state["gs"] = gauge.gauge_structure(p)
        return state["gs"]

    def lagrangian():
        L, rep = gauge.build_lagrangian(gauge.tym_prepotential(p), p, gs())
        return rep

    name = f"gauge({lie.name},{n},{J},{p.r},{p.s}" + (f",{p.t}" if p.t != 1 else "") + \
        (f",{chart})" if chart != "post" else ")")
    ctx = Context(name, p.alg, lie, ders, {}, vecs, lie_tensors(lie),
                  _lie_ranges(lie) | {"mu": (1, int(n)), "nu": (1, int(n))},
                  {"default": lambda: gauge.check_gauge_relations(p),
                   "universal": lambda: gauge.check_universal_forms(p),
                   "structure": lambda: gs().report,
                   "footnote": lambda: gauge.footnote_witness(lie, S.n, S.J, S),
                   "lagrangian": lagrangian,
                   "tym": lambda: gauge.check_tym(p)},
                  obj=p, tr_power=lambda X, m: gauge.tr_power(p, X.comps, m))
    return ctx


def curvature_preset(lie) -> Context:
    lie = lie_of(lie)
    p = curvature.build_curvature_algebra(lie)
    vecs = {k: LieVec(getattr(p, a), lie)
            for k, a in (("A_h", "Ah"), ("A_v", "Av"), ("R_h", "Rh"), ("R_v", "Rv"), ("R_m", "Rm"),
                         ("lambda", "lam"))}
    return Context(f"curvature({lie.name})", p.alg, lie, {"Q": p.Q, "K": p.K, "L": p.L}, {}, vecs,
                   lie_tensors(lie), _lie_ranges(lie),
                   {"default": lambda: curvature.curvature_algebra_checks(lie)}, obj=p)


PRESETS: dict = {
    "weil": weil,
    "kalkman": kalkman,
    "semidirect_weil": semidirect_weil,
    "mq": mq,
    "mq_variant": lambda lie: mq(lie, True),
    "qkweil": qkweil,
    "tqm": tqm,
    "sigma": sigma,
    "mtheory": mtheory,
    "jet": jetspace,
    "flat_tsm": flat_tsm,
    "gauge": gauge_preset,
    "curvature": curvature_preset,
}


def build(name: str, args=(), kwargs=None) -> Context:
    try:
        fn = PRESETS[name]
    except KeyError:
        raise UnknownName(f"unknown preset {name!r}") from None
    return fn(*args, **(kwargs or {}))
