"""The .cohoma script language: grammar, AST and canonical printer.

A script is a sequence of declarations and commands, each ending in ``;``
(blocks ``der ... { ... }`` and ``tensor T { ... }`` end at the brace)::

    preset weil(su2);
    check [d, iota[1]] == Lie[1];
    der Q deg (0,1) { theta[a] -> phi[a] - 1/2*sum(b,c) f[a,b,c]*theta[b]*theta[c]; }

Index ranges written as ``a=1..3`` are expanded while parsing, so every
generator in the AST is concrete.  :func:`render` prints an AST back to text;
``parse(render(s)) == s`` for every parsed script.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from .errors import ScriptSyntaxError

GRAMMAR = r"""
start: item*

?item: simple ";"
     | der
     | tensor_lit

?simple: algebra | index | gen | tensor_call | let | preset
       | check | check_nil | nf | kseq | exp | bracket | commute
       | report | tym | k0equiv | curvature | show

algebra: "algebra" NAME ("convention" NAME)?
index: "index" NAME ("," NAME)* "=" INT ".." INT
gen: "gen" genspec ("," genspec)* "deg" degree
genspec: NAME ("[" gidx ("," gidx)* "]")?
gidx: NAME "=" INT ".." INT   -> grange
    | INT                      -> gfixed
degree: "(" SIGNED_INT "," SIGNED_INT ")"
tensor_call: "tensor" NAME "=" NAME "(" [expr ("," expr)*] ")"
tensor_lit: "tensor" NAME "{" tentry* "}" ";"?
tentry: "[" INT ("," INT)* "]" "=" expr ";"
let: "let" ref "=" expr
preset: PRESET expr
der: "der" NAME ("[" gidx ("," gidx)* "]")? "deg" degree "{" rule* "}" ";"?
rule: ref "->" expr ";"
check: "check" expr "==" expr
check_nil: "check" "nilpotent" expr
nf: "nf" STRING kwarg*
kseq: "kseq" NAME kwarg*
exp: "exp" expr "," expr
bracket: "bracket" expr "," expr
commute: "commute" expr "," expr
report: "report" NAME?
tym: "tym" kwarg*
k0equiv: "k0equiv" kwarg*
curvature: "curvature" expr
show: "show" expr
kwarg: (NAME | PRESET) "=" expr

?expr: sum
?sum: prod
    | sum "+" prod      -> add
    | sum "-" prod      -> sub
?prod: unary
     | prod "*" unary   -> mul
     | prod "/" unary   -> div
     | prod "*" sumx    -> mul
     | sumx
sumx: "sum" "(" svar ("," svar)* ")" prod
svar: NAME ("=" INT ".." INT)?
?unary: pow
      | "-" unary       -> neg
      | "-" sumx        -> neg
?pow: post
    | post "^" INT      -> pow
?post: atom
     | post "(" [expr ("," expr)*] ")"   -> call
?atom: INT              -> int
     | RATIONAL         -> rational
     | "i"              -> imag
     | STRING           -> string
     | ref
     | "(" expr ")"
     | "[" expr "," expr "]"             -> brk
ref: NAME ("[" [idx ("," idx)*] (SEMI [idx ("," idx)*])? "]")?
?idx: INT | NAME

PRESET: "preset"
SEMI: ";"
RATIONAL.2: /\d+\/\d+/
NAME: /[A-Za-z_][A-Za-z_0-9']*/
STRING: /"[^"\n]*"/
COMMENT: /#[^\n]*/

%import common.INT
%import common.SIGNED_INT
%import common.WS
%ignore WS
%ignore COMMENT
"""


# ---------------------------------------------------------------------------
# AST


def _pos():
    return field(default=None, compare=False, repr=False)


@dataclass
class Node:
    pass


@dataclass
class Int(Node):
    value: int
    line: int = _pos()
    col: int = _pos()


@dataclass
class Rational(Node):
    value: Fraction
    line: int = _pos()
    col: int = _pos()


@dataclass
class Imag(Node):
    line: int = _pos()
    col: int = _pos()


@dataclass
class Str(Node):
    value: str
    line: int = _pos()
    col: int = _pos()


@dataclass
class Ref(Node):
    name: str
    idx: tuple = ()
    jet: tuple | None = None
    line: int = _pos()
    col: int = _pos()


@dataclass
class BinOp(Node):
    op: str
    left: Node
    right: Node
    line: int = _pos()
    col: int = _pos()


@dataclass
class Neg(Node):
    arg: Node
    line: int = _pos()
    col: int = _pos()


@dataclass
class Pow(Node):
    base: Node
    exp: int
    line: int = _pos()
    col: int = _pos()


@dataclass
class Call(Node):
    head: Node
    args: tuple
    line: int = _pos()
    col: int = _pos()


@dataclass
class Bracket(Node):
    left: Node
    right: Node
    line: int = _pos()
    col: int = _pos()


@dataclass
class Sum(Node):
    vars: tuple          # ((name, (lo, hi) | None), ...)
    body: Node
    line: int = _pos()
    col: int = _pos()


@dataclass
class GenSpec(Node):
    name: str
    ranges: tuple        # (("a", lo, hi) | int, ...)

    def expand(self) -> list:
        """Concrete index tuples, in lexicographic order."""
        axes = [[r] if isinstance(r, int) else list(range(r[1], r[2] + 1)) for r in self.ranges]
        return [tuple(t) for t in itertools.product(*axes)]


@dataclass
class Stmt(Node):
    pass


@dataclass
class AlgebraDecl(Stmt):
    name: str
    convention: str | None = None
    line: int = _pos()
    col: int = _pos()


@dataclass
class IndexDecl(Stmt):
    names: tuple
    lo: int
    hi: int
    line: int = _pos()
    col: int = _pos()


@dataclass
class GenDecl(Stmt):
    specs: tuple
    degree: tuple
    line: int = _pos()
    col: int = _pos()

    @property
    def generators(self) -> list:
        """(name, indices) for every generator after range expansion."""
        return [(s.name, t) for s in self.specs for t in s.expand()]


@dataclass
class TensorCall(Stmt):
    name: str
    source: str
    args: tuple
    line: int = _pos()
    col: int = _pos()


@dataclass
class TensorLit(Stmt):
    name: str
    entries: tuple       # ((indices, expr), ...)
    line: int = _pos()
    col: int = _pos()


@dataclass
class Let(Stmt):
    target: Ref
    value: Node
    line: int = _pos()
    col: int = _pos()


@dataclass
class PresetDecl(Stmt):
    spec: Node
    line: int = _pos()
    col: int = _pos()


@dataclass
class Rule(Node):
    pattern: Ref
    image: Node
    line: int = _pos()
    col: int = _pos()


@dataclass
class DerDecl(Stmt):
    name: str
    ranges: tuple
    degree: tuple
    rules: tuple
    line: int = _pos()
    col: int = _pos()

    def instances(self) -> list:
        return GenSpec(self.name, self.ranges).expand()


@dataclass
class Command(Stmt):
    kind: str                    # check, nilpotent, nf, kseq, exp, bracket, ...
    args: tuple = ()
    kwargs: tuple = ()           # ((key, expr), ...)
    line: int = _pos()
    col: int = _pos()


@dataclass
class Script:
    statements: list

    @property
    def declarations(self):
        return [s for s in self.statements if not isinstance(s, Command)]

    @property
    def commands(self):
        return [s for s in self.statements if isinstance(s, Command)]


# ---------------------------------------------------------------------------
# parse tree -> AST


def _at(meta):
    if getattr(meta, "empty", True):
        return {}
    return {"line": meta.line, "col": meta.column}


@v_args(meta=True)
class _Build(Transformer):
    def start(self, meta, items):
        return Script(list(items))

    # expressions
    def int(self, meta, c):
        return Int(int(c[0]), **_at(meta))

    def rational(self, meta, c):
        p, q = str(c[0]).split("/")
        if int(q) == 0:
            raise ScriptSyntaxError("division by zero in literal", meta.line, meta.column)
        return Rational(Fraction(int(p), int(q)), **_at(meta))

    def imag(self, meta, c):
        return Imag(**_at(meta))

    def string(self, meta, c):
        return Str(str(c[0])[1:-1], **_at(meta))

    def ref(self, meta, c):
        name = str(c[0])
        rest = list(c[1:])
        idx, jet, seen = [], None, False
        for x in rest:
            if isinstance(x, Token) and x.type == "SEMI":
                seen, jet = True, []
                continue
            if x is None:
                continue
            v = int(x) if x.type == "INT" else str(x)
            (jet if seen else idx).append(v)
        return Ref(name, tuple(idx), None if jet is None else tuple(jet), **_at(meta))

    def _bin(op):
        def f(self, meta, c):
            return BinOp(op, c[0], c[1], **_at(meta))
        return f

    add = _bin("+")
    sub = _bin("-")
    mul = _bin("*")
    div = _bin("/")

    def neg(self, meta, c):
        return Neg(c[0], **_at(meta))

    def pow(self, meta, c):
        return Pow(c[0], int(c[1]), **_at(meta))

    def call(self, meta, c):
        return Call(c[0], tuple(x for x in c[1:] if x is not None), **_at(meta))

    def brk(self, meta, c):
        return Bracket(c[0], c[1], **_at(meta))

    def svar(self, meta, c):
        return (str(c[0]), (int(c[1]), int(c[2])) if len(c) > 1 else None)

    def sumx(self, meta, c):
        return Sum(tuple(c[:-1]), c[-1], **_at(meta))

    # declarations
    def algebra(self, meta, c):
        return AlgebraDecl(str(c[0]), str(c[1]) if len(c) > 1 else None, **_at(meta))

    def index(self, meta, c):
        return IndexDecl(tuple(str(x) for x in c[:-2]), int(c[-2]), int(c[-1]), **_at(meta))

    def grange(self, meta, c):
        return (str(c[0]), int(c[1]), int(c[2]))

    def gfixed(self, meta, c):
        return int(c[0])

    def genspec(self, meta, c):
        return GenSpec(str(c[0]), tuple(c[1:]))

    def degree(self, meta, c):
        return (int(c[0]), int(c[1]))

    def gen(self, meta, c):
        return GenDecl(tuple(c[:-1]), c[-1], **_at(meta))

    def tensor_call(self, meta, c):
        return TensorCall(str(c[0]), str(c[1]), tuple(x for x in c[2:] if x is not None), **_at(meta))

    def tentry(self, meta, c):
        return (tuple(int(x) for x in c[:-1]), c[-1])

    def tensor_lit(self, meta, c):
        return TensorLit(str(c[0]), tuple(c[1:]), **_at(meta))

    def let(self, meta, c):
        return Let(c[0], c[1], **_at(meta))

    def preset(self, meta, c):
        return PresetDecl(c[1], **_at(meta))

    def rule(self, meta, c):
        return Rule(c[0], c[1], **_at(meta))

    def der(self, meta, c):
        name = str(c[0])
        k = 1
        ranges = []
        while not isinstance(c[k], tuple) or len(c[k]) != 2 or isinstance(c[k][0], str):
            ranges.append(c[k])
            k += 1
        return DerDecl(name, tuple(ranges), c[k], tuple(c[k + 1:]), **_at(meta))

    # commands
    def kwarg(self, meta, c):
        return (str(c[0]), c[1])

    def check(self, meta, c):
        return Command("check", (c[0], c[1]), **_at(meta))

    def check_nil(self, meta, c):
        return Command("nilpotent", (c[0],), **_at(meta))

    def nf(self, meta, c):
        return Command("nf", (str(c[0])[1:-1],), tuple(c[1:]), **_at(meta))

    def kseq(self, meta, c):
        return Command("kseq", (str(c[0]),), tuple(c[1:]), **_at(meta))

    def exp(self, meta, c):
        return Command("exp", (c[0], c[1]), **_at(meta))

    def bracket(self, meta, c):
        return Command("bracket", (c[0], c[1]), **_at(meta))

    def commute(self, meta, c):
        return Command("commute", (c[0], c[1]), **_at(meta))

    def report(self, meta, c):
        return Command("report", tuple(str(x) for x in c if x is not None), **_at(meta))

    def tym(self, meta, c):
        return Command("tym", (), tuple(c), **_at(meta))

    def k0equiv(self, meta, c):
        return Command("k0equiv", (), tuple(c), **_at(meta))

    def curvature(self, meta, c):
        return Command("curvature", (c[0],), **_at(meta))

    def show(self, meta, c):
        return Command("show", (c[0],), **_at(meta))


_PARSER = None


def _parser():
    global _PARSER
    if _PARSER is None:
        _PARSER = Lark(GRAMMAR, parser="lalr", propagate_positions=True, maybe_placeholders=True)
    return _PARSER


def parse(text: str) -> Script:
    """Parse script text; raises ScriptSyntaxError(line, col) on malformed input."""
    try:
        tree = _parser().parse(text)
    except UnexpectedEOF as e:
        lines = text.splitlines() or [""]
        raise ScriptSyntaxError("unexpected end of input", len(lines), len(lines[-1]) + 1) from None
    except (UnexpectedToken, UnexpectedCharacters) as e:
        what = getattr(e, "token", None)
        if what is not None:
            msg = f"unexpected {str(what)!r}"
        else:
            msg = f"unexpected character {e.char!r}" if hasattr(e, "char") else "unexpected character"
        raise ScriptSyntaxError(msg, e.line, e.column) from None
    except UnexpectedInput as e:
        raise ScriptSyntaxError("syntax error", getattr(e, "line", None), getattr(e, "column", None)) from None
    try:
        return _Build().transform(tree)
    except Exception as e:
        inner = getattr(e, "orig_exc", None)
        if isinstance(inner, ScriptSyntaxError):
            raise inner from None
        raise


def parse_expr(text: str) -> Node:
    """Parse a single expression (used by the CLI for preset specs)."""
    s = parse(f"show {text};")
    return s.statements[0].args[0]


# ---------------------------------------------------------------------------
# canonical printer

_ADD, _MUL, _NEG, _POW, _ATOM = 1, 2, 3, 4, 5


def _prec(e):
    if isinstance(e, BinOp):
        return _ADD if e.op in "+-" else _MUL
    if isinstance(e, Sum):
        return _MUL
    if isinstance(e, Neg):
        return _NEG
    if isinstance(e, Pow):
        return _POW
    return _ATOM


def _wrap(e, need, no_sum=False):
    s = render_expr(e)
    if _prec(e) < need or (no_sum and isinstance(e, Sum)):
        return f"({s})"
    return s


def _idx_list(xs):
    return ",".join(str(x) for x in xs)


def render_expr(e: Node) -> str:
    if isinstance(e, Int):
        return str(e.value)
    if isinstance(e, Rational):
        return f"{e.value.numerator}/{e.value.denominator}"
    if isinstance(e, Imag):
        return "i"
    if isinstance(e, Str):
        return f'"{e.value}"'
    if isinstance(e, Ref):
        if not e.idx and e.jet is None:
            return e.name
        s = _idx_list(e.idx)
        if e.jet is not None:
            s += ";" + _idx_list(e.jet)
        return f"{e.name}[{s}]"
    if isinstance(e, BinOp):
        if e.op in "+-":
            # the left operand may end in a sum(...) body; the right one binds tighter
            return f"{_wrap(e.left, _ADD)} {e.op} {_wrap(e.right, _MUL)}"
        if e.op == "*" and isinstance(e.right, Sum):
            return f"{_wrap(e.left, _MUL, True)}*{render_expr(e.right)}"
        return f"{_wrap(e.left, _MUL, True)}{e.op}{_wrap(e.right, _NEG)}"
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, _NEG)
    if isinstance(e, Pow):
        return f"{_wrap(e.base, _ATOM)}^{e.exp}"
    if isinstance(e, Call):
        return f"{_wrap(e.head, _ATOM)}({', '.join(render_expr(a) for a in e.args)})"
    if isinstance(e, Bracket):
        return f"[{render_expr(e.left)}, {render_expr(e.right)}]"
    if isinstance(e, Sum):
        vs = ",".join(n if r is None else f"{n}={r[0]}..{r[1]}" for n, r in e.vars)
        return f"sum({vs}) {_wrap(e.body, _MUL)}"
    raise TypeError(f"cannot render {e!r}")


def _ranges(rs):
    return ",".join(str(r) if isinstance(r, int) else f"{r[0]}={r[1]}..{r[2]}" for r in rs)


def _kw(kwargs):
    return "".join(f" {k}={render_expr(v)}" for k, v in kwargs)


def render_stmt(s: Stmt) -> str:
    if isinstance(s, AlgebraDecl):
        return f"algebra {s.name}" + (f" convention {s.convention}" if s.convention else "") + ";"
    if isinstance(s, IndexDecl):
        return f"index {', '.join(s.names)} = {s.lo}..{s.hi};"
    if isinstance(s, GenDecl):
        specs = ", ".join(g.name + (f"[{_ranges(g.ranges)}]" if g.ranges else "") for g in s.specs)
        return f"gen {specs} deg ({s.degree[0]},{s.degree[1]});"
    if isinstance(s, TensorCall):
        return f"tensor {s.name} = {s.source}({', '.join(render_expr(a) for a in s.args)});"
    if isinstance(s, TensorLit):
        body = " ".join(f"[{_idx_list(i)}] = {render_expr(v)};" for i, v in s.entries)
        return f"tensor {s.name} {{ {body} }}" if body else f"tensor {s.name} {{ }}"
    if isinstance(s, Let):
        return f"let {render_expr(s.target)} = {render_expr(s.value)};"
    if isinstance(s, PresetDecl):
        return f"preset {render_expr(s.spec)};"
    if isinstance(s, DerDecl):
        head = s.name + (f"[{_ranges(s.ranges)}]" if s.ranges else "")
        body = " ".join(f"{render_expr(r.pattern)} -> {render_expr(r.image)};" for r in s.rules)
        return f"der {head} deg ({s.degree[0]},{s.degree[1]}) {{ {body} }}" if body else \
            f"der {head} deg ({s.degree[0]},{s.degree[1]}) {{ }}"
    if isinstance(s, Command):
        k, a = s.kind, s.args
        if k == "check":
            return f"check {render_expr(a[0])} == {render_expr(a[1])};"
        if k == "nilpotent":
            return f"check nilpotent {render_expr(a[0])};"
        if k == "nf":
            return f'nf "{a[0]}"{_kw(s.kwargs)};'
        if k == "kseq":
            return f"kseq {a[0]}{_kw(s.kwargs)};"
        if k in ("exp", "bracket", "commute"):
            return f"{k} {render_expr(a[0])}, {render_expr(a[1])};"
        if k == "report":
            return "report" + (f" {a[0]}" if a else "") + ";"
        if k in ("tym", "k0equiv"):
            return f"{k}{_kw(s.kwargs)};"
        if k in ("curvature", "show"):
            return f"{k} {render_expr(a[0])};"
    raise TypeError(f"cannot render {s!r}")


def render(script: Script) -> str:
    return "".join(render_stmt(s) + "\n" for s in script.statements)
