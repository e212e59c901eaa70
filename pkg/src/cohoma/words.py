"""Word algebras over abstract bigraded generators and the QK normal form.

A word algebra here is the enveloping algebra of a small bigraded Lie
algebra: adjacent out-of-order letters are swapped with the first-kind
sign and the bracket is added, squares of odd letters are halved brackets.
The QK algebra uses the order K < Q < L, so a reduced word reads
K^i, K^i Q, K^i L or K^i Q L.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from lark import Lark, Transformer, v_args
from lark.exceptions import LarkError, VisitError

from .coeff import as_coeff
from .core import Bidegree, apply, bideg, swap_parity
from .errors import MissingStructure, NormalizationViolated, ScriptSyntaxError, UnknownGenerator
from .report import Report, Witness

Word = tuple


# ---------------------------------------------------------------------------
# word expressions


class WordExpression:
    """Finite linear combination of words, {tuple of letters: Fraction}."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "WordAlgebra", terms=None):
        self.algebra = algebra
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def word(cls, algebra, letters, coeff=1):
        return cls(algebra, {tuple(letters): as_coeff(coeff)})

    def _lift(self, other):
        if isinstance(other, WordExpression):
            return other
        return WordExpression(self.algebra, {(): as_coeff(other)})

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return WordExpression(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return WordExpression(self.algebra, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c):
        c = as_coeff(c)
        return WordExpression(self.algebra, {w: c * x for w, x in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, WordExpression):
            return self.scale(other)
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return WordExpression(self.algebra, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k):
        out = WordExpression(self.algebra, {(): Fraction(1)})
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._lift(other)
        return isinstance(other, WordExpression) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def degrees(self) -> set:
        return {self.algebra.word_degree(w) for w in self.terms}

    def homogeneous_parts(self) -> dict:
        parts: dict = {}
        for w, c in self.terms.items():
            parts.setdefault(self.algebra.word_degree(w), {})[w] = c
        return {d: WordExpression(self.algebra, t) for d, t in parts.items()}

    def render(self) -> str:
        return render_terms(sorted(self.terms.items(), key=lambda wc: (len(wc[0]), wc[0])))

    __str__ = render

    def __repr__(self):
        return f"WordExpression({self.render()!r})"


def render_word(w: Word) -> str:
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        k = j - i
        parts.append(w[i] if k == 1 else f"{w[i]}^{k}")
        i = j
    return " ".join(parts)


def render_terms(items) -> str:
    out = []
    for w, c in items:
        neg = c < 0
        a = -c if neg else c
        body = render_word(w)
        if not w:
            s = str(a)
        elif a == 1:
            s = body
        else:
            s = f"{a} {body}"
        if not out:
            out.append(f"-{s}" if neg else s)
        else:
            out.append(f"- {s}" if neg else f"+ {s}")
    return " ".join(out) if out else "0"


# ---------------------------------------------------------------------------
# enveloping algebras with a PBW rewrite


class WordAlgebra:
    """Enveloping algebra of a bigraded Lie algebra on named letters.

    ``gens`` maps letter -> degree in PBW order; ``brackets`` maps ordered
    pairs (X, Y) to {letter: coeff}; missing pairs bracket to zero.
    """

    def __init__(self, name, gens: dict, brackets: dict):
        self.name = name
        self.gens = {g: bideg(d) for g, d in gens.items()}
        self.order = {g: k for k, g in enumerate(self.gens)}
        self.brackets = {}
        for (x, y), val in brackets.items():
            val = {z: as_coeff(c) for z, c in val.items() if c}
            self.brackets[(x, y)] = val
            eps = self.eps(x, y)
            # [Y, X] = -(-1)^{p(d(X) d(Y))} [X, Y]
            self.brackets[(y, x)] = {z: c * eps for z, c in val.items()} if x != y else val
        self._memo: dict = {}

    def eps(self, x, y) -> int:
        """Commutation sign of letters x, y: XY = eps YX + [X, Y]."""
        return -1 if swap_parity(self.gens[x], self.gens[y]) else 1

    def word_degree(self, w) -> Bidegree:
        d = Bidegree(0, 0)
        for x in w:
            d = d + self.gens[x]
        return d

    def letter(self, x) -> WordExpression:
        if x not in self.gens:
            raise UnknownGenerator(x)
        return WordExpression.word(self, (x,))

    def one(self) -> WordExpression:
        return WordExpression(self, {(): Fraction(1)})

    def zero(self) -> WordExpression:
        return WordExpression(self, {})

    def parse(self, text: str) -> WordExpression:
        return parse_words(self, text)

    def bracket(self, a: WordExpression, b: WordExpression) -> WordExpression:
        """Graded commutator ab - (-1)^{p(d(a) d(b))} ba over homogeneous parts."""
        out = self.zero()
        for da, pa in a.homogeneous_parts().items():
            for db, pb in b.homogeneous_parts().items():
                sgn = -1 if swap_parity(da, db) else 1
                out = out + pa * pb - (pb * pa).scale(sgn)
        return out

    # -- rewriting ------------------------------------------------------
    def redex(self, w: Word):
        """First position i where w[i] w[i+1] is out of PBW order or an odd square."""
        o = self.order
        for i in range(len(w) - 1):
            x, y = w[i], w[i + 1]
            if o[x] > o[y] or (x == y and self.eps(x, x) < 0):
                return i
        return None

    def rewrite_at(self, w: Word, i: int) -> dict:
        """One rewrite step at position i, as {word: coeff}."""
        x, y = w[i], w[i + 1]
        pre, post = w[:i], w[i + 2:]
        out: dict = {}
        br = self.brackets.get((x, y), {})
        if x == y:
            # X^2 = 1/2 [X, X] for odd X
            for z, c in br.items():
                out[pre + (z,) + post] = c / 2
            return out
        out[pre + (y, x) + post] = Fraction(self.eps(x, y))
        for z, c in br.items():
            k = pre + (z,) + post
            out[k] = out.get(k, 0) + c
        return out

    def reduce_word(self, w: Word) -> dict:
        """PBW normal form of a single word (memoized)."""
        memo = self._memo
        hit = memo.get(w)
        if hit is not None:
            return hit
        # iterative leftmost rewriting with memo on sub-results
        i = self.redex(w)
        if i is None:
            res = {w: Fraction(1)}
        else:
            res = {}
            for w2, c in self.rewrite_at(w, i).items():
                for w3, c3 in self.reduce_word(w2).items():
                    v = res.get(w3, 0) + c * c3
                    if v:
                        res[w3] = v
                    else:
                        res.pop(w3, None)
        memo[w] = res
        return res

    def reduce(self, e: WordExpression) -> WordExpression:
        out: dict = {}
        for w, c in e.terms.items():
            for w2, c2 in self.reduce_word(w).items():
                out[w2] = out.get(w2, 0) + c * c2
        return WordExpression(self, out)

    def equal(self, a: WordExpression, b: WordExpression) -> bool:
        return self.reduce(a - b).is_zero()


def qk_algebra() -> WordAlgebra:
    """Q (0,1), K (1,-1), L (1,0) with [Q,K] = L, all other brackets zero."""
    return WordAlgebra("K", {"K": (1, -1), "Q": (0, 1), "L": (1, 0)}, {("Q", "K"): {"L": 1}})


def gl_algebra() -> WordAlgebra:
    """Q_l, Q_r (0,1), K_l, K_r (1,-1), L (1,0) with [Q_l,K_l] = [Q_r,K_r] = L."""
    gens = {"K_l": (1, -1), "K_r": (1, -1), "Q_l": (0, 1), "Q_r": (0, 1), "L": (1, 0)}
    return WordAlgebra("K_GL", gens, {("Q_l", "K_l"): {"L": 1}, ("Q_r", "K_r"): {"L": 1}})


QK = qk_algebra()


# ---------------------------------------------------------------------------
# parsing words


_WORD_GRAMMAR = r"""
start: sum
sum: sign? term (addop term)*
!addop: "+" | "-"
!sign: "+" | "-"
term: coef "*"? factor*   -> scaled
    | factor+             -> plain
factor: atom ("^" INT)?
?atom: GEN                       -> gen
     | "(" sum ")"               -> group
     | "[" sum "," sum "]"       -> bracket
coef: INT ("/" INT)?
GEN: /[A-Z](_[a-z0-9]+)?/
%import common.INT
%import common.WS
%ignore WS
"""

_word_parser = Lark(_WORD_GRAMMAR, parser="lalr")


@v_args(inline=True)
class _WordBuilder(Transformer):
    def __init__(self, algebra):
        super().__init__()
        self.alg = algebra

    def start(self, s):
        return s

    def sum(self, *items):
        items = list(items)
        sign = 1
        if items and isinstance(items[0], str):
            sign = -1 if items.pop(0) == "-" else 1
        acc = items[0].scale(sign)
        for k in range(1, len(items), 2):
            op, t = items[k], items[k + 1]
            acc = acc + t if op == "+" else acc - t
        return acc

    def addop(self, tok):
        return str(tok)

    def sign(self, tok):
        return str(tok)

    def scaled(self, c, *factors):
        acc = self.alg.one().scale(c)
        for f in factors:
            acc = acc * f
        return acc

    def plain(self, *factors):
        acc = self.alg.one()
        for f in factors:
            acc = acc * f
        return acc

    def factor(self, atom, power=None):
        return atom if power is None else atom ** int(power)

    def gen(self, tok):
        return self.alg.letter(str(tok))

    def group(self, s):
        return s

    def bracket(self, a, b):
        return self.alg.bracket(a, b)

    def coef(self, num, den=None):
        return Fraction(int(num), int(den) if den is not None else 1)


def parse_words(algebra: WordAlgebra, text: str) -> WordExpression:
    try:
        tree = _word_parser.parse(text)
        return _WordBuilder(algebra).transform(tree)
    except VisitError as e:
        raise e.orig_exc from None
    except LarkError as e:
        line = getattr(e, "line", None)
        col = getattr(e, "column", None)
        raise ScriptSyntaxError(f"bad word expression {text!r}", line, col) from None


# ---------------------------------------------------------------------------
# QK normal form


KINDS = ((), ("Q",), ("L",), ("Q", "L"))


@dataclass(frozen=True)
class NormalForm:
    """p0(K) + p1(K) Q + p2(K) L + p3(K) QL, coefficient lists indexed by the K power."""

    p0: tuple
    p1: tuple
    p2: tuple
    p3: tuple
    n: int | None = None

    @property
    def polys(self):
        return (self.p0, self.p1, self.p2, self.p3)

    def to_lists(self):
        return [[_plain(c) for c in p] for p in self.polys]

    def terms(self):
        """(word, coeff) pairs in display order."""
        out = []
        for kind, p in zip(KINDS, self.polys):
            for i, c in enumerate(p):
                if c:
                    out.append((("K",) * i + kind, c))
        out.sort(key=lambda wc: (len(wc[0]), KINDS.index(wc[0][len(wc[0]) - _kind_len(wc[0]):])))
        return out

    def to_expression(self) -> WordExpression:
        return WordExpression(QK, dict(self.terms()))

    def render(self) -> str:
        return render_terms(self.terms())

    __str__ = render

    def is_zero(self):
        return not any(self.polys)

    def degrees(self) -> set:
        return {QK.word_degree(w) for w, _ in self.terms()}


def _kind_len(w):
    if w[-2:] == ("Q", "L"):
        return 2
    if w and w[-1] in ("Q", "L"):
        return 1
    return 0


def _plain(c):
    return int(c) if c.denominator == 1 else str(c)


def _trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return tuple(p)


def _to_normal_form(terms: dict, n=None) -> NormalForm:
    polys = [dict(), dict(), dict(), dict()]
    for w, c in terms.items():
        k = _kind_len(w)
        i = len(w) - k
        if any(x != "K" for x in w[:i]):
            raise ValueError(f"not a PBW word: {w}")
        kind = KINDS.index(w[i:])
        if n is not None and (i > n if kind < 2 else i >= n):
            continue
        polys[kind][i] = polys[kind].get(i, 0) + c
    out = []
    for p in polys:
        top = max(p, default=-1)
        out.append(_trim(Fraction(p.get(i, 0)) for i in range(top + 1)))
    return NormalForm(*out, n=n)


def as_words(w, algebra: WordAlgebra = QK) -> WordExpression:
    if isinstance(w, WordExpression):
        return w
    if isinstance(w, str):
        return parse_words(algebra, w)
    if isinstance(w, (tuple, list)):
        return WordExpression.word(algebra, w)
    raise TypeError(f"cannot read {w!r} as a word expression")


def reduce(w, n: int | None = None) -> NormalForm:
    """Normal form of a QK word expression; ``n`` imposes K^{n+1} = 0.

    The ideal generated by K^{n+1} also contains L K^n (apply [Q, .]), so
    the L and QL parts keep K powers below n.
    """
    e = as_words(w)
    return _to_normal_form(QK.reduce(e).terms, n)


def expand(nf: NormalForm) -> WordExpression:
    return nf.to_expression()


# ---------------------------------------------------------------------------
# independent oracles


def right_multiplication_oracle(w: Word, n: int | None = None) -> NormalForm:
    """Evaluate a word by right-multiplying basis elements K^i X (X in 1, Q, L, QL).

    The table follows directly from the relations:
      K^i Q K = K^i L - K^{i+1} Q,  K^i L K = -K^{i+1} L,  K^i QL K = K^{i+1} QL,
      K^i L Q = K^i QL,  K^i Q Q = K^i Q L L = 0.
    """
    state = {(0, 0): Fraction(1)}  # (kind, i) -> coeff
    for x in w:
        nxt: dict = {}

        def add(kind, i, c):
            if n is not None and (i > n if kind < 2 else i >= n):
                return
            v = nxt.get((kind, i), 0) + c
            nxt[(kind, i)] = v

        for (kind, i), c in state.items():
            if x == "K":
                if kind == 0:
                    add(0, i + 1, c)
                elif kind == 1:
                    add(2, i, c)
                    add(1, i + 1, -c)
                elif kind == 2:
                    add(2, i + 1, -c)
                else:
                    add(3, i + 1, c)
            elif x == "Q":
                if kind == 0:
                    add(1, i, c)
                elif kind == 2:
                    add(3, i, c)
            elif x == "L":
                if kind == 0:
                    add(2, i, c)
                elif kind == 1:
                    add(3, i, c)
            else:
                raise UnknownGenerator(x)
        state = {k: v for k, v in nxt.items() if v}
    terms = {("K",) * i + KINDS[kind]: c for (kind, i), c in state.items()}
    return _to_normal_form(terms, n)


class ConfluenceOracle:
    """Normal forms computed along every rewrite order.

    For each word every redex is tried; the results of all one-step
    choices must agree (sub-words are handled by the same memoized search,
    so agreement is established inductively on the rewrite order).
    """

    def __init__(self, algebra: WordAlgebra = QK):
        self.alg = algebra
        self.memo: dict = {}
        self.conflicts: list = []

    def redexes(self, w):
        o = self.alg.order
        eps = self.alg.eps
        return [i for i in range(len(w) - 1)
                if o[w[i]] > o[w[i + 1]] or (w[i] == w[i + 1] and eps(w[i], w[i]) < 0)]

    def normal_form(self, w: Word) -> frozenset:
        hit = self.memo.get(w)
        if hit is not None:
            return hit
        reds = self.redexes(w)
        if not reds:
            res = frozenset({(w, Fraction(1))})
            self.memo[w] = res
            return res
        results = set()
        for i in reds:
            acc: dict = {}
            for w2, c in self.alg.rewrite_at(w, i).items():
                for w3, c3 in self.normal_form(w2):
                    acc[w3] = acc.get(w3, 0) + c * c3
            results.add(frozenset((k, v) for k, v in acc.items() if v))
        if len(results) > 1:
            self.conflicts.append((w, results))
        res = next(iter(results))
        self.memo[w] = res
        return res


def all_words(letters, max_len):
    out = [()]
    layer = [()]
    for _ in range(max_len):
        layer = [w + (x,) for w in layer for x in letters]
        out.extend(layer)
    return out


def check_oracles(max_len: int = 8, n: int | None = None) -> Report:
    """reduce() against the right-multiplication table and the all-orders search."""
    rep = Report(f"qk normal form (length <= {max_len}{'' if n is None else f', n={n}'})")
    conf = ConfluenceOracle(QK)
    mismatches = 0
    count = 0
    for w in all_words("QKL", max_len):
        count += 1
        nf = reduce(w, n)
        rm = right_multiplication_oracle(w, n)
        co = _to_normal_form(dict(conf.normal_form(w)), n)
        if nf != rm or nf != co:
            mismatches += 1
            if mismatches <= 3:
                rep.witnesses.append(Witness(render_word(w), nf.render(),
                                             f"{rm.render()} / {co.render()}", "oracle"))
    rep.record(f"reduce = right-multiplication oracle = all-orders oracle on {count} words",
               mismatches == 0)
    rep.record("rewrite system confluent", not conf.conflicts,
               Witness(render_word(conf.conflicts[0][0]), "", "") if conf.conflicts else None)
    rep.data["words"] = count
    return rep.finish()


# ---------------------------------------------------------------------------
# lemma checks


def check_qpk(p: int, n: int | None = None) -> Report:
    """[Q, K^p] = p L K^{p-1} in normal form."""
    rep = Report(f"qpk(p={p})")
    lhs = reduce(QK.bracket(QK.letter("Q"), QK.letter("K") ** p), n)
    rhs = reduce((QK.letter("L") * QK.letter("K") ** (p - 1)).scale(p), n)
    rep.record(f"[Q,K^{p}] = {p} L K^{p - 1}", lhs == rhs,
               Witness(f"K^{p}", lhs.render(), rhs.render()))
    rep.lines.append(f"[Q,K^{p}] = {lhs.render()}")
    return rep.finish()


def check_qpoly(coeffs, n: int | None = None) -> Report:
    """[Q, p(K)] = L p'(K) for p given by its coefficient list."""
    rep = Report("qpk(poly)")
    K = QK.letter("K")
    pK = sum((K ** i * as_coeff(c) for i, c in enumerate(coeffs) if c), QK.zero())
    dp = sum((K ** (i - 1) * (as_coeff(c) * i) for i, c in enumerate(coeffs) if c and i), QK.zero())
    lhs = reduce(QK.bracket(QK.letter("Q"), pK), n)
    rhs = reduce(QK.letter("L") * dp, n)
    rep.record("[Q,p(K)] = L p'(K)", lhs == rhs, Witness("p", lhs.render(), rhs.render()))
    return rep.finish()


def check_truncation_coherence(w, n: int, m: int) -> bool:
    """Reducing in K_m and truncating to K_n equals reducing in K_n (m >= n)."""
    big = reduce(w, m)
    return _to_normal_form(dict(big.terms()), n) == reduce(w, n)


# ---------------------------------------------------------------------------
# GL family


def _dot(u, v):
    return sum(as_coeff(a) * as_coeff(b) for a, b in zip(u, v))


def gl_family_check(u, v, s=0, strict: bool = False) -> Report:
    """Q_u = u1 Q_l + u2 Q_r, K = K_v + s dK_u with dK_u = -u2 K_l + u1 K_r.

    Checks Q_u^2 = 0, Q_u K + K Q_u = L, K L + L K = 0 in the enveloping
    algebra of K_GL.  With ``strict`` a violated normalization u.v = 1
    raises instead of being reported.
    """
    A = gl_algebra()
    u = [as_coeff(x) for x in u]
    v = [as_coeff(x) for x in v]
    s = as_coeff(s)
    uv = _dot(u, v)
    if strict and uv != 1:
        raise NormalizationViolated(f"u.v = {uv}, expected 1")
    Ql, Qr, Kl, Kr, L = (A.letter(x) for x in ("Q_l", "Q_r", "K_l", "K_r", "L"))
    Qu = Ql.scale(u[0]) + Qr.scale(u[1])
    Kv = Kl.scale(v[0]) + Kr.scale(v[1]) + (Kl.scale(-u[1]) + Kr.scale(u[0])).scale(s)
    rep = Report(f"gl_family(u={_fmt(u)}, v={_fmt(v)}{'' if not s else f', s={s}'})")
    rep.record("u.v = 1", uv == 1, Witness("u.v", str(uv), "1"))
    for name, lhs, rhs in (("Q_u^2 = 0", Qu * Qu, A.zero()),
                           ("Q_u K_v + K_v Q_u = L", Qu * Kv + Kv * Qu, L),
                           ("K_v L + L K_v = 0", Kv * L + L * Kv, A.zero())):
        a, b = A.reduce(lhs), A.reduce(rhs)
        rep.record(name, a == b, Witness(name.split(" = ")[0], a.render(), b.render()))
    return rep.finish()


def _fmt(vec):
    return "(" + ",".join(str(x) for x in vec) + ")"


def sl2_action(g, u, v):
    """(g u, (g^{-1})^t v) for g in SL(2)."""
    (a, b), (c, d) = [[as_coeff(x) for x in row] for row in g]
    det = a * d - b * c
    if det != 1:
        raise NormalizationViolated(f"det g = {det}, expected 1")
    gu = [a * u[0] + b * u[1], c * u[0] + d * u[1]]
    # (g^{-1})^t = [[d, -c], [-b, a]]
    gv = [d * v[0] - c * v[1], -b * v[0] + a * v[1]]
    return gu, gv


def sl2_check(g, u, v) -> Report:
    gu, gv = sl2_action(g, u, v)
    rep = gl_family_check(gu, gv)
    rep.command = f"sl2(g={g}) " + rep.command
    return rep


def random_unimodular(rng, steps: int = 6, bound: int = 3):
    """Product of random elementary integer matrices (det 1)."""
    m = [[1, 0], [0, 1]]
    for _ in range(steps):
        k = rng.randint(-bound, bound)
        if rng.random() < 0.5:
            e = [[1, k], [0, 1]]
        else:
            e = [[1, 0], [k, 1]]
        m = [[sum(m[i][t] * e[t][j] for t in range(2)) for j in range(2)] for i in range(2)]
    return m


def random_normalized_pair(rng, bound: int = 5):
    """Random rational (u, v) with u.v = 1."""
    while True:
        u = [Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(2)]
        if any(u):
            break
    w = [Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(2)]
    # v = u / |u|^2 + t * u_perp
    nu = u[0] * u[0] + u[1] * u[1]
    t = w[0]
    v = [u[0] / nu - t * u[1], u[1] / nu + t * u[0]]
    return u, v


# ---------------------------------------------------------------------------
# realization on a preset


def operators_of(preset) -> dict:
    """Letter -> derivation map exposed by a preset (attributes Q, K, L or a mapping)."""
    if isinstance(preset, dict):
        ops = preset
    else:
        ops = {x: getattr(preset, x) for x in ("Q", "K", "L") if getattr(preset, x, None) is not None}
    if not ops:
        raise MissingStructure("preset exposes none of Q, K, L")
    return ops


def realize(w, preset, algebra: WordAlgebra = QK):
    """The linear operator named by a word expression; words compose right to left."""
    e = as_words(w, algebra) if not isinstance(w, NormalForm) else w.to_expression()
    ops = operators_of(preset)
    missing = {x for word in e.terms for x in word} - set(ops)
    if missing:
        raise MissingStructure(f"preset lacks {sorted(missing)}")

    def op(f):
        out = f.alg.zero()
        for word, c in e.terms.items():
            g = f
            for x in reversed(word):
                g = apply(ops[x], g)
                if not g:
                    break
            out = out + g.scale(c)
        return out

    return op


@lru_cache(maxsize=None)
def _letters():
    return tuple(QK.gens)


def random_word_expression(rng, max_len: int = 6, terms: int = 3) -> WordExpression:
    out = QK.zero()
    for _ in range(rng.randint(1, terms)):
        k = rng.randint(0, max_len)
        w = tuple(rng.choice(_letters()) for _ in range(k))
        out = out + WordExpression.word(QK, w, rng.randint(-3, 3) or 1)
    return out
