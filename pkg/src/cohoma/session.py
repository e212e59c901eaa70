"""Elaborate and run parsed scripts; text and JSON report rendering."""
from __future__ import annotations

import json
from fractions import Fraction
from itertools import product

from . import checks, coeff, curvature, gauge, jet, presets, words
from .core import Algebra, Derivation, Polynomial, apply, bideg, commutator, exp_derivation, \
    make_label, times
from .dsl import (AlgebraDecl, BinOp, Bracket, Call, Command, DerDecl, GenDecl, Imag, IndexDecl,
                  Int, Let, Neg, Node, Pow, PresetDecl, Rational, Ref, Script, Str, Sum, TensorCall,
                  TensorLit, parse, render_stmt)
from .errors import CohomaError, DegreeMismatch, MissingStructure, ScriptError, UnknownName
from .presets import Context, LieVec
from .report import Report

SCHEMA = 1


class ExpOp:
    """exp(D), applied with ``exp(D)(f)``."""

    def __init__(self, D: Derivation):
        self.D = D


def _is_scalar(x):
    return isinstance(x, (Fraction, coeff.Gaussian))


def _fail(node, msg, cls=ScriptError):
    line, col = getattr(node, "line", None), getattr(node, "col", None)
    if issubclass(cls, ScriptError):
        return cls(msg, line, col)
    return cls(msg + (f" (line {line}, col {col})" if line is not None else ""))


# text output summarises polynomials and witnesses beyond these sizes
SHOW_TERMS = 12
SHOW_CHARS = 300


def _brief(p) -> str:
    if isinstance(p, Polynomial) and len(p) > SHOW_TERMS:
        return f"{len(p)} terms"
    return str(p)


def _clip(text: str) -> str:
    text = str(text)
    return text if len(text) <= SHOW_CHARS else text[:SHOW_CHARS] + f" ... ({len(text)} chars)"


def _homogeneous_degree(p: Polynomial):
    degs = p.degrees() if p else set()
    return next(iter(degs)) if len(degs) == 1 else None


class Session:
    """State of one script: the active algebra, declarations and let-bindings."""

    def __init__(self):
        self.ctx: Context | None = None
        self.lets: dict = {}
        self.ranges: dict = {}
        self.tensors: dict = {}

    # -- context -----------------------------------------------------
    def use(self, ctx: Context):
        self.ctx = ctx
        self.lets = dict(ctx.polys)
        self.ranges = dict(ctx.ranges)
        self.tensors = dict(ctx.tensors)

    def need_ctx(self, node) -> Context:
        if self.ctx is None:
            self.use(Context("A", Algebra("A")))
        return self.ctx

    # -- literals for preset specs -------------------------------------
    def literal(self, node):
        if isinstance(node, Int):
            return node.value
        if isinstance(node, Rational):
            return node.value
        if isinstance(node, Neg):
            return -self.literal(node.arg)
        if isinstance(node, Str):
            return node.value
        if isinstance(node, Ref) and not node.idx and node.jet is None:
            return node.name
        if isinstance(node, Call) and isinstance(node.head, Ref):
            return (node.head.name, tuple(self.literal(a) for a in node.args))
        raise _fail(node, "expected a literal (number or name)")

    def preset_of(self, node) -> Context:
        spec = self.literal(node)
        name, args = (spec, ()) if isinstance(spec, str) else spec
        try:
            return presets.build(name, args)
        except TypeError as e:
            raise _fail(node, f"bad arguments for preset {name}: {e}") from None
        except (CohomaError, ValueError) as e:
            if isinstance(e, ScriptError) and e.line is not None:
                raise
            raise _fail(node, str(e), type(e) if isinstance(e, ScriptError) else ScriptError) from None

    # -- expressions ---------------------------------------------------
    def index_value(self, x, env, node):
        if isinstance(x, int):
            return x
        if x in env:
            return env[x]
        raise _fail(node, f"unbound index {x}", UnknownName)

    def eval(self, e: Node, env: dict):
        if isinstance(e, Int):
            return Fraction(e.value)
        if isinstance(e, Rational):
            return e.value
        if isinstance(e, Imag):
            return coeff.I
        if isinstance(e, Str):
            return e.value
        if isinstance(e, Ref):
            return self.lookup(e, env)
        if isinstance(e, Neg):
            return self.scale(self.eval(e.arg, env), -1, e)
        if isinstance(e, BinOp):
            a, b = self.eval(e.left, env), self.eval(e.right, env)
            if e.op == "+":
                return self.add(a, b, e)
            if e.op == "-":
                return self.add(a, self.scale(b, -1, e), e)
            if e.op == "*":
                return self.mul(a, b, e)
            if not _is_scalar(b) or not b:
                raise _fail(e, "can only divide by a nonzero number")
            return self.scale(a, 1 / b, e)
        if isinstance(e, Pow):
            a = self.eval(e.base, env)
            if _is_scalar(a):
                out = Fraction(1)
                for _ in range(e.exp):
                    out = out * a
                return out
            if isinstance(a, Polynomial):
                return a ** e.exp
            raise _fail(e, f"cannot raise {type(a).__name__} to a power")
        if isinstance(e, Sum):
            return self.eval_sum(e, env)
        if isinstance(e, Bracket):
            return self.bracket(self.eval(e.left, env), self.eval(e.right, env), e)
        if isinstance(e, Call):
            return self.call(e, env)
        raise _fail(e, f"cannot evaluate {type(e).__name__}")

    def lookup(self, e: Ref, env):
        if not e.idx and e.jet is None:
            if e.name in env:
                return Fraction(env[e.name])
        ctx = self.need_ctx(e)
        idx = tuple(self.index_value(x, env, e) for x in e.idx)
        jt = tuple(sorted(self.index_value(x, env, e) for x in e.jet)) if e.jet is not None else ()
        label = make_label(e.name, idx, jt)
        if label in self.lets:
            return self.lets[label]
        if e.name in self.tensors and e.jet is None and idx:
            return Fraction(0) + self.tensors[e.name].get(idx, 0)
        if label in ctx.ders:
            return ctx.ders[label]
        if not idx and e.jet is None and e.name in ctx.vecs:
            return ctx.vecs[e.name]
        if ctx.alg.has(e.name, *idx, jet=jt):
            return ctx.alg(e.name, *idx, jet=jt)
        raise _fail(e, f"unknown name {label}", UnknownName)

    def eval_sum(self, e: Sum, env):
        axes = []
        for name, r in e.vars:
            if r is None:
                r = self.ranges.get(name) or self.infer_range(name, e.body)
                if r is None:
                    raise _fail(e, f"no range declared for index {name}", UnknownName)
            axes.append(range(r[0], r[1] + 1))
        total = None
        for vals in product(*axes):
            sub = dict(env)
            sub.update(zip((n for n, _ in e.vars), vals))
            v = self.eval(e.body, sub)
            total = v if total is None else self.add(total, v, e)
        return Fraction(0) if total is None else total

    def infer_range(self, var, body):
        """Range of an undeclared summation index from the generators (else tensors) it indexes."""
        gen_r, ten_r = [], []
        alg = self.need_ctx(body).alg
        for ref in _refs(body):
            for k, x in enumerate(ref.idx):
                if x != var:
                    continue
                vals = [g.indices[k] for g in alg.gens if g.name == ref.name and len(g.indices) > k]
                if vals:
                    gen_r.append((min(vals), max(vals)))
                elif ref.name in self.tensors:
                    keys = [i[k] for i in self.tensors[ref.name] if len(i) > k]
                    if keys:
                        ten_r.append((min(keys), max(keys)))
        rs = gen_r or ten_r
        if not rs:
            return None
        return max(r[0] for r in rs), min(r[1] for r in rs)

    def call(self, e: Call, env):
        head = e.head
        if isinstance(head, Ref) and not head.idx and head.jet is None and head.name not in self.lets:
            fn = head.name
            if fn == "Tr":
                return self.trace(e, env)
            if fn == "exp":
                if len(e.args) != 1:
                    raise _fail(e, "exp takes one derivation")
                D = self.eval(e.args[0], env)
                if not isinstance(D, Derivation):
                    raise _fail(e, "exp needs a derivation")
                return ExpOp(D)
            if fn == "delta":
                a, b = (self.eval(x, env) for x in e.args)
                return Fraction(1 if a == b else 0)
        f = self.eval(head, env)
        if len(e.args) != 1:
            raise _fail(e, "operators take exactly one argument")
        x = self.eval(e.args[0], env)
        if _is_scalar(x):
            x = self.need_ctx(e).alg.const(x)
        if isinstance(f, (Derivation, ExpOp)):
            op = (lambda p: apply(f, p)) if isinstance(f, Derivation) else \
                (lambda p: exp_derivation(f.D, p))
            if isinstance(x, LieVec):
                return LieVec([op(c) for c in x.comps], x.lie)
            if isinstance(x, Polynomial):
                return op(x)
        raise _fail(e, f"cannot apply {type(f).__name__} to {type(x).__name__}")

    def trace(self, e: Call, env):
        ctx = self.need_ctx(e)
        if len(e.args) != 1:
            raise _fail(e, "Tr takes one argument")
        arg = e.args[0]
        if isinstance(arg, Pow):
            X = self.eval(arg.base, env)
            if isinstance(X, LieVec):
                return ctx.trace_power(X, arg.exp)
        if isinstance(arg, BinOp) and arg.op == "*":
            X, Y = self.eval(arg.left, env), self.eval(arg.right, env)
            if isinstance(X, LieVec) and isinstance(Y, LieVec):
                return ctx.trace(X, Y)
        X = self.eval(arg, env)
        if isinstance(X, LieVec):
            return ctx.trace_power(X, 1)
        raise _fail(e, "Tr needs a Lie-algebra valued argument")

    # arithmetic on values
    def add(self, a, b, node):
        if _is_scalar(a) and _is_scalar(b):
            return a + b
        if isinstance(a, LieVec) and isinstance(b, LieVec):
            return LieVec([x + y for x, y in zip(a.comps, b.comps)], a.lie)
        if isinstance(a, Derivation) and isinstance(b, Derivation):
            if a.degree != b.degree:
                raise _fail(node, f"adding derivations of degrees {tuple(a.degree)} and {tuple(b.degree)}",
                            DegreeMismatch)
            return a + b
        if isinstance(a, Derivation) or isinstance(b, Derivation):
            z = b if isinstance(a, Derivation) else a
            if _is_scalar(z) and not z:
                return a if isinstance(a, Derivation) else b
        alg = self.need_ctx(node).alg
        if _is_scalar(a):
            a = alg.const(a)
        if _is_scalar(b):
            b = alg.const(b)
        if isinstance(a, Polynomial) and isinstance(b, Polynomial):
            return a + b
        raise _fail(node, f"cannot add {type(a).__name__} and {type(b).__name__}")

    def scale(self, a, c, node):
        if _is_scalar(a):
            return a * c
        if isinstance(a, Polynomial):
            return a.scale(c)
        if isinstance(a, Derivation):
            return c * a
        if isinstance(a, LieVec):
            return LieVec([x.scale(c) for x in a.comps], a.lie)
        raise _fail(node, f"cannot scale {type(a).__name__}")

    def mul(self, a, b, node):
        if _is_scalar(a):
            return self.scale(b, a, node)
        if _is_scalar(b):
            return self.scale(a, b, node)
        if isinstance(a, Polynomial) and isinstance(b, Polynomial):
            return a * b
        if isinstance(a, Polynomial) and isinstance(b, Derivation):
            if _homogeneous_degree(a) is None:
                raise _fail(node, "coefficient of a derivation must be homogeneous", DegreeMismatch)
            return times(a, b)
        if isinstance(a, Polynomial) and isinstance(b, LieVec):
            return LieVec([a * x for x in b.comps], b.lie)
        if isinstance(a, LieVec) and isinstance(b, Polynomial):
            return LieVec([x * b for x in a.comps], a.lie)
        raise _fail(node, f"cannot multiply {type(a).__name__} by {type(b).__name__}")

    def bracket(self, a, b, node):
        if isinstance(a, Derivation) and isinstance(b, Derivation):
            return commutator(a, b)
        if isinstance(a, LieVec) and isinstance(b, LieVec):
            lie = a.lie
            alg = self.need_ctx(node).alg
            out = [alg.zero() for _ in range(lie.dim)]
            for i, j, k, v in lie.nonzero_f():
                out[i] = out[i] + (a.comps[j] * b.comps[k]).scale(v)
            return LieVec(out, lie)
        ctx = self.need_ctx(node)
        if _is_scalar(a):
            a = ctx.alg.const(a)
        if _is_scalar(b):
            b = ctx.alg.const(b)
        if isinstance(a, Polynomial) and isinstance(b, Polynomial):
            if ctx.bracket is None:
                raise _fail(node, f"{ctx.name} has no Poisson bracket", MissingStructure)
            return ctx.bracket(a, b)
        raise _fail(node, f"cannot bracket {type(a).__name__} with {type(b).__name__}")

    # -- declarations --------------------------------------------------
    def declare(self, s):
        if isinstance(s, AlgebraDecl):
            conv = s.convention or "first"
            if conv not in ("first", "second"):
                raise _fail(s, f"unknown convention {conv}")
            self.use(Context(s.name, Algebra(s.name, conv)))
        elif isinstance(s, PresetDecl):
            self.use(self.preset_of(s.spec))
        elif isinstance(s, IndexDecl):
            if s.hi < s.lo:
                raise _fail(s, "empty index range")
            for n in s.names:
                self.ranges[n] = (s.lo, s.hi)
        elif isinstance(s, GenDecl):
            ctx = self.need_ctx(s)
            for spec in s.specs:
                for r in spec.ranges:
                    if not isinstance(r, int):
                        self.ranges.setdefault(r[0], (r[1], r[2]))
            for name, idx in s.generators:
                if ctx.alg.has(name, *idx):
                    raise _fail(s, f"generator {make_label(name, idx)} declared twice")
                ctx.alg.add(name, idx, s.degree)
        elif isinstance(s, TensorCall):
            self.tensors[s.name] = self.tensor_from(s)
        elif isinstance(s, TensorLit):
            tab = {}
            for idx, v in s.entries:
                val = self.eval(v, {})
                if not _is_scalar(val):
                    raise _fail(s, "tensor entries must be numbers")
                if val:
                    tab[tuple(idx)] = val
            self.tensors[s.name] = tab
        elif isinstance(s, Let):
            t = s.target
            idx = tuple(self.index_value(x, {}, t) for x in t.idx)
            jt = tuple(t.jet) if t.jet is not None else ()
            self.lets[make_label(t.name, idx, jt)] = self.eval(s.value, {})
        elif isinstance(s, DerDecl):
            self.declare_der(s)
        else:
            raise _fail(s, f"unknown declaration {type(s).__name__}")

    def tensor_from(self, s: TensorCall) -> dict:
        args = [self.literal(a) for a in s.args]
        src = s.source
        if src in ("structure", "metric"):
            if len(args) != 1:
                raise _fail(s, f"{src} takes a Lie algebra name")
            lie = presets.lie_of(args[0])
            tabs = presets.lie_tensors(lie)
            if src == "metric" and "g" not in tabs:
                raise _fail(s, f"{lie.name} has no metric")
            return tabs["f" if src == "structure" else "g"]
        if src == "delta":
            n = int(args[0])
            return {(a, a): Fraction(1) for a in range(1, n + 1)}
        if src == "epsilon":
            from itertools import permutations
            n = int(args[0])
            out = {}
            for perm in permutations(range(1, n + 1)):
                inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
                out[perm] = Fraction(-1 if inv % 2 else 1)
            return out
        raise _fail(s, f"unknown tensor source {src}", UnknownName)

    def declare_der(self, s: DerDecl):
        ctx = self.need_ctx(s)
        alg = ctx.alg
        deg = bideg(s.degree)
        names = [r[0] for r in s.ranges if not isinstance(r, int)]
        for inst in s.instances():
            env = {}
            for r, v in zip(s.ranges, inst):
                if not isinstance(r, int):
                    env[r[0]] = v
            act = {}
            for rule in s.rules:
                for g, benv in self.match(rule.pattern, env):
                    img = self.eval(rule.image, benv)
                    if _is_scalar(img):
                        img = alg.const(img)
                    if not isinstance(img, Polynomial):
                        raise _fail(rule, f"image of {g.label} is not a polynomial")
                    want = g.degree + deg
                    for d in img.degrees():
                        if d != want:
                            raise _fail(rule, f"{s.name}({g.label}) has degree {tuple(d)}, "
                                              f"expected {tuple(want)}", DegreeMismatch)
                    if g.id in act:
                        raise _fail(rule, f"{s.name} defined twice on {g.label}")
                    act[g.id] = img
            label = make_label(s.name, inst)
            ctx.ders[label] = Derivation(alg, label, deg, act)
        for n in names:
            self.ranges.setdefault(n, next((r[1], r[2]) for r in s.ranges if not isinstance(r, int)
                                           and r[0] == n))

    def match(self, pat: Ref, env):
        """Generators matching a rule pattern, with the index bindings."""
        alg = self.ctx.alg
        out = []
        pj = pat.jet if pat.jet is not None else ()
        for g in alg.gens:
            if g.name != pat.name or len(g.indices) != len(pat.idx) or len(g.jet) != len(pj):
                continue
            b = dict(env)
            ok = True
            for p, v in zip(tuple(pat.idx) + tuple(pj), g.indices + g.jet):
                if isinstance(p, int):
                    ok = p == v
                elif p in b:
                    ok = b[p] == v
                else:
                    b[p] = v
                if not ok:
                    break
            if ok:
                out.append((g, b))
        if not out:
            raise _fail(pat, f"no generator matches {pat.name}", UnknownName)
        return out

    # -- commands ------------------------------------------------------
    def run(self, c: Command) -> Report:
        rep = Report(render_stmt(c).rstrip(";"))
        getattr(self, "cmd_" + c.kind)(c, rep)
        return rep.finish()

    def kwargs(self, c: Command, allowed) -> dict:
        out = {}
        for k, v in c.kwargs:
            if k not in allowed and not any(k.startswith(a.rstrip("*")) and a.endswith("*") for a in allowed):
                raise _fail(c, f"unknown option {k}", UnknownName)
            out[k] = v
        return out

    def _value_pair(self, c, a, b):
        if isinstance(a, Derivation) and _is_scalar(b) and not b:
            return a, None
        if isinstance(a, Derivation) and isinstance(b, Derivation):
            if a.degree != b.degree:
                raise _fail(c, f"derivations of degrees {tuple(a.degree)} and {tuple(b.degree)}",
                            DegreeMismatch)
            return a, b
        alg = self.need_ctx(c).alg
        if _is_scalar(a):
            a = alg.const(a)
        if _is_scalar(b):
            b = alg.const(b)
        return a, b

    def cmd_check(self, c, rep):
        a, b = self._value_pair(c, self.eval(c.args[0], {}), self.eval(c.args[1], {}))
        name = f"{_short(c.args[0])} == {_short(c.args[1])}"
        if isinstance(a, Derivation):
            checks.relation(rep, name, a, b)
        elif isinstance(a, Polynomial) and isinstance(b, Polynomial):
            da, db = _homogeneous_degree(a), _homogeneous_degree(b)
            if a and b and da is not None and db is not None and da != db:
                raise _fail(c, f"comparing degrees {tuple(da)} and {tuple(db)}", DegreeMismatch)
            rep.equal(name, a, b)
        elif isinstance(a, LieVec) and isinstance(b, LieVec):
            for k, (x, y) in enumerate(zip(a.comps, b.comps), 1):
                rep.equal(f"{name} [{k}]", x, y, f"component {k}")
        else:
            raise _fail(c, f"cannot compare {type(a).__name__} with {type(b).__name__}")

    def cmd_nilpotent(self, c, rep):
        D = self.eval(c.args[0], {})
        if not isinstance(D, Derivation):
            raise _fail(c, "check nilpotent needs a derivation")
        checks.nilpotent(rep, f"{D.name}^2 = 0", D)

    def cmd_nf(self, c, rep):
        kw = self.kwargs(c, {"n", "expect"})
        n = int(self.literal(kw["n"])) if "n" in kw else None
        try:
            nf = words.reduce(c.args[0], n)
        except CohomaError:
            raise
        except Exception as e:
            raise _fail(c, f"cannot read word {c.args[0]!r}: {e}") from None
        text = nf.render()
        rep.lines.append(text)
        if "expect" in kw:
            want = self.literal(kw["expect"])
            rep.record(f"nf = {want}", text == want, _witness("nf", text, want))

    def cmd_kseq(self, c, rep):
        kind = c.args[0]
        kw = self.kwargs(c, {"preset", "O0", "n", "convention", "W*", "rho*"})
        saved = self.ctx, self.lets, self.ranges, self.tensors
        try:
            if "preset" in kw:
                self.use(self.preset_of(kw["preset"]))
            self._kseq(c, kind, kw, rep)
        finally:
            if "preset" in kw:
                self.ctx, self.lets, self.ranges, self.tensors = saved

    def _poly(self, node, env=None):
        v = self.eval(node, env or {})
        if _is_scalar(v):
            v = self.ctx.alg.const(v)
        if not isinstance(v, Polynomial):
            raise _fail(node, "expected a polynomial")
        return v

    def _kseq(self, c, kind, kw, rep):
        ctx = self.need_ctx(c)
        p = ctx.qkl()
        n = int(self.literal(kw["n"])) if "n" in kw else None
        if kind == "pullback":
            alpha = getattr(p, "meta", {}).get("alpha")
            if alpha is None:
                raise _fail(c, f"{ctx.name} has no closed form to pull back", MissingStructure)
            conv = self.literal(kw["convention"]) if "convention" in kw else "first"
            if conv not in ("first", "second"):
                raise _fail(c, "convention must be first or second")
            seq = jet.pullback_observable(p, alpha, convention=conv)
            self._emit(seq, rep)
            if conv == "first":
                rep.merge(jet.verify_descent(p, seq), "descent: ")
                std = jet.standard_k_sequence(p, seq.O[0], len(seq.O) - 1)
                for k, (x, y) in enumerate(zip(seq.O, std.O)):
                    rep.equal(f"O[{k}] = K^{k} O[0]/{k}!", x, y, f"O[{k}]")
            else:
                rep.merge(jet.verify_de_rham_descent(p, seq), "de Rham descent: ")
            return
        if kind == "exact":
            rhos = {int(k[3:]): self._poly(v) for k, v in kw.items() if k.startswith("rho")}
            if not rhos:
                raise _fail(c, "kseq exact needs rho0=...")
            seq = jet.exact_sequence(p, [rhos.get(i, ctx.alg.zero()) for i in range(max(rhos) + 1)],
                                     n if n is not None else getattr(p, "n", None))
        else:
            if "O0" not in kw:
                raise _fail(c, f"kseq {kind} needs O0=...")
            O0 = self._poly(kw["O0"])
            if kind == "standard":
                seq = jet.standard_k_sequence(p, O0, n)
            elif kind == "general":
                W = {int(k[1:]): self._poly(v) for k, v in kw.items() if k.startswith("W")}
                seq = jet.general_k_sequence(p, O0, W, n)
            else:
                raise _fail(c, f"unknown sequence kind {kind}", UnknownName)
        self._emit(seq, rep)
        rep.merge(jet.verify_descent(p, seq, check_degrees=False), "descent: ")
        if kind == "standard" and isinstance(p, gauge.GaugePreset) and p.r == 0 \
                and O0 == gauge.tr_power(p, p.space.comp("phi"), 2):
            for k, (x, y) in enumerate(zip(seq.O, gauge.tym_expected(p))):
                rep.equal(f"O[{k}] matches the Tr(phi^2) list", x, y, f"O[{k}]")

    def _emit(self, seq, rep):
        for k, o in enumerate(seq.O):
            self.lets[f"O[{k}]"] = o
            rep.lines.append(f"O[{k}] = {_brief(o)}")

    def cmd_exp(self, c, rep):
        D = self.eval(c.args[0], {})
        if not isinstance(D, Derivation):
            raise _fail(c, "exp needs a derivation")
        f = self._poly(c.args[1])
        out = exp_derivation(D, f)
        for d, part in sorted(out.homogeneous_parts().items()):
            rep.lines.append(f"{tuple(d)}: {_brief(part)}")
        if not out:
            rep.lines.append("0")
        self.lets["last"] = out

    def cmd_bracket(self, c, rep):
        v = self.bracket(self.eval(c.args[0], {}), self.eval(c.args[1], {}), c)
        rep.lines.extend(_show(v))
        self.lets["last"] = v

    def cmd_commute(self, c, rep):
        a, b = self.eval(c.args[0], {}), self.eval(c.args[1], {})
        if not (isinstance(a, Derivation) and isinstance(b, Derivation)):
            raise _fail(c, "commute needs two derivations")
        rep.lines.extend(_show(commutator(a, b)))

    def cmd_show(self, c, rep):
        rep.lines.extend(_show(self.eval(c.args[0], {})))

    def cmd_report(self, c, rep):
        ctx = self.need_ctx(c)
        suite = c.args[0] if c.args else "default"
        if suite not in ctx.suites:
            raise _fail(c, f"{ctx.name} has no suite {suite}", UnknownName)
        _absorb(rep, ctx.suites[suite]())

    def _gauge(self, c):
        ctx = self.need_ctx(c)
        if not isinstance(ctx.obj, gauge.GaugePreset):
            raise _fail(c, f"{c.kind} needs a gauge preset", MissingStructure)
        return ctx.obj

    def cmd_tym(self, c, rep):
        kw = self.kwargs(c, {"m", "preset"})
        saved = self.ctx, self.lets, self.ranges, self.tensors
        try:
            if "preset" in kw:
                self.use(self.preset_of(kw["preset"]))
            p = self._gauge(c)
            m = int(self.literal(kw["m"])) if "m" in kw else 2
            if m == 2:
                sub = gauge.check_tym(p)
                self._emit(sub.data["sequence"], rep)
                _absorb(rep, sub)
            else:
                seq = gauge.tym_observables(p, m)
                self._emit(seq, rep)
                rep.merge(jet.verify_descent(p, seq, check_degrees=False), "descent: ")
        finally:
            if "preset" in kw:
                self.ctx, self.lets, self.ranges, self.tensors = saved

    def cmd_k0equiv(self, c, rep):
        kw = self.kwargs(c, {"s"})
        p = self._gauge(c)
        if "s" not in kw:
            raise _fail(c, "k0equiv needs s=...")
        s = self.eval(kw["s"], {})
        if not _is_scalar(s):
            raise _fail(c, "s must be a number")
        _absorb(rep, gauge.k0_equivalence(p.space.lie, s, space=p.space))

    def cmd_curvature(self, c, rep):
        spec = self.literal(c.args[0])
        try:
            lie = presets.lie_of(spec)
        except CohomaError as e:
            raise _fail(c, str(e), UnknownName) from None
        _absorb(rep, curvature.curvature_algebra_checks(lie))


def _refs(node):
    if isinstance(node, Ref):
        yield node
    for v in vars(node).values() if isinstance(node, Node) else ():
        items = v if isinstance(v, tuple) else (v,)
        for x in items:
            if isinstance(x, Node):
                yield from _refs(x)


def _short(node):
    from .dsl import render_expr
    return render_expr(node)


def _witness(gen, lhs, rhs):
    from .report import Witness
    return Witness(gen, lhs, rhs)


def _absorb(rep: Report, sub: Report):
    rep.merge(sub)
    rep.data.update(sub.data)


def _show(v) -> list:
    if isinstance(v, Derivation):
        alg = v.alg
        lines = [f"{alg.gens[g].label} -> {img}" for g, img in sorted(v.action.items())]
        return lines or ["0"]
    if isinstance(v, LieVec):
        return [f"[{k}] {x}" for k, x in enumerate(v.comps, 1)]
    if isinstance(v, ExpOp):
        return [f"exp({v.D.name})"]
    if _is_scalar(v):
        return [coeff.render_coeff(v)]
    return [str(v)]


# ---------------------------------------------------------------------------
# entry points


def execute(script: Script | str) -> tuple[list, int]:
    """Run every statement in order; returns (reports, exit code).

    Exit code 0 iff all checks pass, 1 on a failed check, 2 on a parse or
    elaboration error (execution stops at the first error).
    """
    if isinstance(script, str):
        try:
            script = parse(script)
        except ScriptError as e:
            r = Report("parse", error=f"{type(e).__name__}: {e}")
            return [r.finish()], 2
    sess = Session()
    reports = []
    for s in script.statements:
        try:
            if isinstance(s, Command):
                reports.append(sess.run(s))
            else:
                sess.declare(s)
        except (CohomaError, ValueError, ZeroDivisionError) as e:
            kind = type(e).__name__
            if not isinstance(e, ScriptError) and "(line " not in str(e):
                e = _fail(s, str(e), ScriptError)
            reports.append(Report(render_stmt(s).rstrip(";"), error=f"{kind}: {e}").finish())
            return reports, 2
    code = 0 if all(r.ok for r in reports) else 1
    return reports, code


def render_json(reports, deterministic: bool = False) -> str:
    """{"schema": 1, "reports": [{command, status, witnesses, elapsed_ms, ...}]}."""
    if isinstance(reports, Report):
        reports = [reports]
    body = {"schema": SCHEMA, "reports": [r.to_dict(deterministic) for r in reports]}
    return json.dumps(body, indent=2, ensure_ascii=False) + "\n"


def render_text(reports, deterministic: bool = False) -> str:
    out = []
    counts = {"pass": 0, "fail": 0, "error": 0}
    for r in reports:
        counts[r.status] += 1
        n, bad = len(r.entries), len(r.failures())
        tag = {"pass": "pass", "fail": "FAIL", "error": "ERROR"}[r.status]
        line = f"[{tag}] {r.command}"
        if n:
            line += f"  ({n - bad}/{n})"
        if not deterministic:
            line += f"  {r.elapsed_ms:.1f} ms"
        out.append(line)
        if r.error:
            out.append(f"    {r.error}")
        for text in r.lines:
            out.append(f"    {text}")
        for name in r.failures():
            out.append(f"    failed: {name}")
        for w in r.witnesses:
            out.append(f"    witness {w.generator} [{w.check}]: lhs = {_clip(w.lhs)}; rhs = {_clip(w.rhs)}")
    out.append(f"{len(reports)} reports: {counts['pass']} pass, {counts['fail']} fail, "
               f"{counts['error']} error")
    return "\n".join(out) + "\n"
