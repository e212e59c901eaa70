"""Bigraded-commutative polynomial algebras and graded derivations.

An :class:`Algebra` is a finite list of declared generators, each with a
:class:`Bidegree`.  Declaration order is the canonical factor order.  A
:class:`Polynomial` is a dict from canonical monomials (tuples of generator
ids) to exact coefficients.  A :class:`Derivation` is given by its values on
generators and extended by the graded Leibniz rule.

Two sign conventions are supported.  With the first kind, swapping x and y
costs ``(-1)**parity(d(x)*d(y))`` where ``*`` is the componentwise product;
the second kind uses ``(-1)**(parity(d(x))*parity(d(y)))``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping

from ._backend import kernels as _k
from .coeff import as_coeff, render_coeff
from .errors import (
    ConventionMismatch,
    DegreeMismatch,
    NotNilpotent,
    TruncationExceeded,
    UnknownGenerator,
)

FIRST = "first"
SECOND = "second"


class Bidegree(tuple):
    """(h, v): horizontal and vertical degree."""

    __slots__ = ()

    def __new__(cls, h=0, v=0):
        return tuple.__new__(cls, (int(h), int(v)))

    @property
    def h(self):
        return self[0]

    @property
    def v(self):
        return self[1]

    @property
    def parity(self):
        return (self[0] + self[1]) & 1

    def __add__(self, other):
        return Bidegree(self[0] + other[0], self[1] + other[1])

    def __sub__(self, other):
        return Bidegree(self[0] - other[0], self[1] - other[1])

    def __neg__(self):
        return Bidegree(-self[0], -self[1])

    def __mul__(self, other):
        # semiring product used by the first-kind sign rule
        return Bidegree(self[0] * other[0], self[1] * other[1])

    def __repr__(self):
        return f"({self[0]},{self[1]})"

    __str__ = __repr__


def bideg(d) -> Bidegree:
    if isinstance(d, Bidegree):
        return d
    return Bidegree(*d)


def swap_parity(d1, d2, convention=FIRST) -> int:
    """1 if exchanging elements of degrees d1, d2 costs a sign."""
    if convention == FIRST:
        return (d1[0] * d2[0] + d1[1] * d2[1]) & 1
    return ((d1[0] + d1[1]) & (d2[0] + d2[1])) & 1


MIXED = "mixed"


@dataclass(frozen=True)
class Generator:
    id: int
    name: str
    indices: tuple = ()
    degree: Bidegree = Bidegree(0, 0)
    kind: str = "plain"
    jet: tuple = ()

    @property
    def key(self):
        return (self.name, self.indices, self.jet)

    @property
    def label(self):
        return make_label(self.name, self.indices, self.jet)

    @property
    def parity(self):
        return self.degree.parity


def make_label(name, indices=(), jet=()):
    """``name``, ``name[1,2]`` or, for jet coordinates, ``name[1;2,3]``."""
    jet = tuple(jet or ())
    if not indices and not jet:
        return name
    s = ",".join(str(i) for i in indices)
    if jet:
        s += ";" + ",".join(str(i) for i in jet)
    return f"{name}[{s}]"


@dataclass
class _Tables:
    n: int
    swap: bytes
    hs: list
    vs: list
    dpar: dict = field(default_factory=dict)


class Algebra:
    """Free bigraded-commutative algebra on declared generators."""

    def __init__(self, name="A", convention=FIRST):
        if convention not in (FIRST, SECOND):
            raise ValueError(f"unknown convention {convention!r}")
        self.name = name
        self.convention = convention
        self.gens: list[Generator] = []
        self._by_key: dict = {}
        self._by_label: dict = {}
        self._tables = None
        self._twin = None
        self.meta: dict = {}

    def __repr__(self):
        return f"Algebra({self.name!r}, {len(self.gens)} generators, {self.convention})"

    # -- declaration -------------------------------------------------
    def add(self, name, indices=(), degree=(0, 0), kind="plain", jet=None) -> Generator:
        indices = tuple(indices)
        jt = tuple(jet) if jet is not None else ()
        key = (name, indices, jt)
        if key in self._by_key:
            raise ValueError(f"generator {make_label(name, indices, jet)} declared twice")
        g = Generator(len(self.gens), name, indices, bideg(degree), kind, jt)
        self.gens.append(g)
        self._by_key[key] = g
        self._by_label[g.label] = g
        return g

    def get(self, name, *indices, jet=()) -> Generator:
        g = self._by_key.get((name, tuple(indices), tuple(jet)))
        if g is None:
            raise UnknownGenerator(make_label(name, indices, jet))
        return g

    def has(self, name, *indices, jet=()) -> bool:
        return (name, tuple(indices), tuple(jet)) in self._by_key

    def by_label(self, label) -> Generator:
        try:
            return self._by_label[label]
        except KeyError:
            raise UnknownGenerator(label) from None

    def resolve(self, g) -> int:
        if isinstance(g, Generator):
            if g.id >= len(self.gens) or self.gens[g.id] is not g:
                raise UnknownGenerator(g.label)
            return g.id
        if isinstance(g, int):
            if not 0 <= g < len(self.gens):
                raise UnknownGenerator(str(g))
            return g
        if isinstance(g, str):
            return self.by_label(g).id
        if isinstance(g, Polynomial):
            if len(g.terms) == 1:
                (m, c), = g.terms.items()
                if len(m) == 1 and c == 1:
                    return m[0]
        raise UnknownGenerator(repr(g))

    def __call__(self, name, *indices, jet=()) -> "Polynomial":
        return self.var(self.get(name, *indices, jet=jet))

    def var(self, g) -> "Polynomial":
        return Polynomial(self, {(self.resolve(g),): Fraction(1)})

    def const(self, c) -> "Polynomial":
        c = as_coeff(c)
        return Polynomial(self, {(): c} if c else {})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def find(self, name) -> list[Generator]:
        return [g for g in self.gens if g.name == name]

    # -- sign tables ---------------------------------------------------
    def tables(self) -> _Tables:
        t = self._tables
        n = len(self.gens)
        if t is None or t.n != n:
            degs = [g.degree for g in self.gens]
            # the sign only depends on (h mod 2, v mod 2), so build one row per class
            cls = [(d[0] & 1, d[1] & 1) for d in degs]
            rows = {}
            for c in set(cls):
                rows[c] = bytes(swap_parity(c, o, self.convention) for o in cls)
            swap = b"".join(rows[c] for c in cls)
            t = _Tables(n, swap, [d[0] for d in degs], [d[1] for d in degs])
            self._tables = t
        return t

    def dpar(self, degree) -> bytes:
        t = self.tables()
        degree = bideg(degree)
        b = t.dpar.get(degree)
        if b is None:
            b = bytes(swap_parity(degree, g.degree, self.convention) for g in self.gens)
            t.dpar[degree] = b
        return b

    def mono_degree(self, m) -> Bidegree:
        t = self.tables()
        return Bidegree(sum(t.hs[g] for g in m), sum(t.vs[g] for g in m))

    def normalize(self, word) -> tuple[int, tuple | None]:
        ids = [self.resolve(g) for g in word]
        t = self.tables()
        return _k.normalize(ids, t.swap, t.n)

    def twin(self) -> "Algebra":
        """Same generators, opposite sign convention."""
        if self._twin is None:
            other = Algebra(self.name + "'", SECOND if self.convention == FIRST else FIRST)
            other.gens = self.gens
            other._by_key = self._by_key
            other._by_label = self._by_label
            other.meta = self.meta
            other._twin = self
            self._twin = other
        return self._twin

    def compatible(self, other) -> bool:
        return other is self or (other.gens is self.gens and other.convention == self.convention)


class Polynomial:
    """Immutable exact polynomial; ``terms`` maps canonical monomials to coefficients."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: Algebra, terms: dict):
        self.alg = alg
        self.terms = terms

    # -- construction helpers -----------------------------------------
    @classmethod
    def from_word(cls, alg, word, coeff=1):
        s, m = alg.normalize(word)
        if not s:
            return alg.zero()
        c = as_coeff(coeff)
        if not c:
            return alg.zero()
        return cls(alg, {m: c if s > 0 else -c})

    def _lift(self, other):
        if isinstance(other, Polynomial):
            if not self.alg.compatible(other.alg):
                raise ConventionMismatch(f"{self.alg.name} vs {other.alg.name}")
            return other
        return self.alg.const(other)

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        if not other.terms:
            return self
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c):
        c = as_coeff(c)
        if not c:
            return self.alg.zero()
        if c == 1:
            return self
        return Polynomial(self.alg, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        other = self._lift(other)
        t = self.alg.tables()
        return Polynomial(self.alg, _k.poly_mul(self.terms, other.terms, t.swap, t.n))

    def __rmul__(self, other):
        # scalars commute with everything
        return self.scale(other)

    def __truediv__(self, c):
        return self.scale(1 / as_coeff(c))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = self.alg.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.alg.gens is other.alg.gens and self.terms == other.terms
        try:
            return self.terms == self.alg.const(other).terms
        except TypeError:
            return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    # -- inspection ----------------------------------------------------
    def degrees(self) -> set:
        md = self.alg.mono_degree
        return {md(m) for m in self.terms}

    def degree(self):
        """The common bidegree, ``None`` for zero, ``MIXED`` otherwise."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            return MIXED
        return next(iter(ds))

    def homogeneous_parts(self) -> dict:
        md = self.alg.mono_degree
        parts: dict = {}
        for m, c in self.terms.items():
            parts.setdefault(md(m), {})[m] = c
        return {d: Polynomial(self.alg, t) for d, t in parts.items()}

    def select(self, pred) -> "Polynomial":
        return Polynomial(self.alg, {m: c for m, c in self.terms.items() if pred(m)})

    def horizontal_part(self, h: int) -> "Polynomial":
        hs = self.alg.tables().hs
        return self.select(lambda m: sum(hs[g] for g in m) == h)

    def coefficient(self, word):
        s, m = self.alg.normalize(word)
        if not s:
            return Fraction(0)
        c = self.terms.get(m, Fraction(0))
        return c if s > 0 else -c

    def constant_term(self):
        return self.terms.get((), Fraction(0))

    def variables(self) -> set:
        return {g for m in self.terms for g in m}

    def sorted_terms(self):
        md = self.alg.mono_degree
        return sorted(self.terms.items(), key=lambda mc: (len(mc[0]), md(mc[0]), mc[0]))

    def render(self) -> str:
        if not self.terms:
            return "0"
        gens = self.alg.gens
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            i = 0
            while i < len(m):
                j = i
                while j < len(m) and m[j] == m[i]:
                    j += 1
                lab = gens[m[i]].label
                factors.append(lab if j - i == 1 else f"{lab}^{j - i}")
                i = j
            cs = render_coeff(c)
            neg = cs.startswith("-")
            mag = cs[1:] if neg else cs
            if not factors:
                body = mag
            elif mag == "1":
                body = "*".join(factors)
            else:
                body = mag + "*" + "*".join(factors)
            parts.append(("-" if neg else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sgn, body in parts[1:]:
            out += f" {sgn} {body}"
        return out

    __str__ = render

    def __repr__(self):
        return f"Polynomial({self.render()})"


def _as_poly(alg, x) -> Polynomial:
    if isinstance(x, Polynomial):
        if not alg.compatible(x.alg):
            raise ConventionMismatch(f"{x.alg.name} is not {alg.name}")
        return x
    return alg.const(x)


# ---------------------------------------------------------------------------
# module-level operations


def normalize(alg: Algebra, word) -> Polynomial:
    """Canonical signed monomial for a word of generators (zero on odd repeats)."""
    return Polynomial.from_word(alg, word)


def mul(f: Polynomial, g: Polynomial) -> Polynomial:
    return f * g


def monomial_convention_sign(alg: Algebra, m) -> int:
    """Sign relating a first-kind product to the second-kind product of the same factors."""
    t = alg.tables()
    flips = 0
    jsum = 0
    for g in m:
        flips += jsum * t.hs[g]
        jsum += t.vs[g]
    return -1 if flips & 1 else 1


class Derivation:
    """Homogeneous graded derivation defined by its action on generators.

    Generators in ``undefined`` have no image (used for jet coordinates at
    the truncation order); touching them raises :class:`TruncationExceeded`.
    """

    __slots__ = ("alg", "name", "degree", "action", "undefined", "_images")

    def __init__(self, alg: Algebra, name: str, degree, action: Mapping | None = None,
                 undefined: Iterable = (), check: bool = True):
        self.alg = alg
        self.name = name
        self.degree = bideg(degree)
        act: dict = {}
        for g, img in (action or {}).items():
            gid = alg.resolve(g)
            p = _as_poly(alg, img)
            if p.terms:
                act[gid] = p
        self.undefined = frozenset(alg.resolve(g) for g in undefined)
        for gid in self.undefined:
            act.pop(gid, None)
        if check:
            for gid, p in act.items():
                want = alg.gens[gid].degree + self.degree
                for d in p.degrees():
                    if d != want:
                        raise DegreeMismatch(
                            f"{name}({alg.gens[gid].label}) has degree {d}, expected {want}")
        self.action = act
        self._images = {g: p.terms for g, p in act.items()}

    def __repr__(self):
        return f"Derivation({self.name}, deg {self.degree}, {len(self.action)} images)"

    @property
    def parity(self):
        return self.degree.parity

    def image(self, g) -> Polynomial:
        gid = self.alg.resolve(g)
        if gid in self.undefined:
            raise TruncationExceeded(f"{self.name} undefined on {self.alg.gens[gid].label}")
        return self.action.get(gid) or self.alg.zero()

    def __call__(self, f):
        return apply(self, f)

    def is_zero(self) -> bool:
        return not self.action and not self.undefined

    def renamed(self, name) -> "Derivation":
        return Derivation(self.alg, name, self.degree, self.action, self.undefined, check=False)

    def _combine(self, other, sgn, name):
        if not isinstance(other, Derivation):
            return NotImplemented
        if not self.alg.compatible(other.alg):
            raise ConventionMismatch("derivations live on different algebras")
        if other.is_zero():
            return self
        if self.is_zero():
            return other if sgn > 0 else -other
        if other.degree != self.degree:
            raise DegreeMismatch(f"cannot add derivations of degrees {self.degree} and {other.degree}")
        act = dict(self.action)
        for g, p in other.action.items():
            q = p if sgn > 0 else -p
            act[g] = act[g] + q if g in act else q
        return Derivation(self.alg, name, self.degree, act, self.undefined | other.undefined,
                          check=False)

    def __add__(self, other):
        return self._combine(other, 1, f"({self.name}+{getattr(other, 'name', '?')})")

    def __sub__(self, other):
        return self._combine(other, -1, f"({self.name}-{getattr(other, 'name', '?')})")

    def __neg__(self):
        return Derivation(self.alg, f"-{self.name}", self.degree,
                          {g: -p for g, p in self.action.items()}, self.undefined, check=False)

    def __rmul__(self, c):
        c = as_coeff(c)
        return Derivation(self.alg, f"{render_coeff(c)}*{self.name}", self.degree,
                          {g: p.scale(c) for g, p in self.action.items()}, self.undefined,
                          check=False)

    def equals_on(self, other: "Derivation", gens=None) -> list:
        """Generators (labels) where the two derivations differ; [] means equal."""
        bad = []
        ids = range(len(self.alg.gens)) if gens is None else [self.alg.resolve(g) for g in gens]
        for gid in ids:
            a = None if gid in self.undefined else self.action.get(gid)
            b = None if gid in other.undefined else other.action.get(gid)
            if (gid in self.undefined) != (gid in other.undefined):
                bad.append(self.alg.gens[gid].label)
            elif (a or self.alg.zero()) != (b or self.alg.zero()):
                bad.append(self.alg.gens[gid].label)
        return bad


def zero_derivation(alg, degree, name="0") -> Derivation:
    return Derivation(alg, name, degree, {})


def apply(D: Derivation, f) -> Polynomial:
    """D(f) via the graded Leibniz rule."""
    alg = D.alg
    if not isinstance(f, Polynomial):
        return alg.zero()
    if not alg.compatible(f.alg):
        if f.alg.gens is alg.gens:
            raise ConventionMismatch(
                f"derivation {D.name} is {alg.convention}-kind, polynomial is {f.alg.convention}-kind")
        raise ConventionMismatch(f"{D.name} acts on {alg.name}, not {f.alg.name}")
    if not f.terms or (not D._images and not D.undefined):
        return alg.zero()
    t = alg.tables()
    gens = alg.gens

    def _exc(g):
        return TruncationExceeded(f"{D.name} undefined on {gens[g].label}")

    terms = _k.der_apply(f.terms, D._images, D.undefined, alg.dpar(D.degree), t.swap, t.n, _exc)
    return Polynomial(alg, terms)


def commutator(D: Derivation, E: Derivation, name: str | None = None) -> Derivation:
    """Graded commutator DE - (-1)^{p(d(D)d(E))} ED, itself a derivation."""
    if not D.alg.compatible(E.alg):
        raise ConventionMismatch("commutator of derivations on different algebras")
    alg = D.alg
    s = swap_parity(D.degree, E.degree, alg.convention)
    touched = set(D.action) | set(E.action) | D.undefined | E.undefined
    act = {}
    undefined = set()
    for g in sorted(touched):
        try:
            a = apply(D, E.image(g))
            b = apply(E, D.image(g))
        except TruncationExceeded:
            undefined.add(g)
            continue
        r = a + b if s else a - b
        if r.terms:
            act[g] = r
    nm = name or f"[{D.name},{E.name}]"
    return Derivation(alg, nm, D.degree + E.degree, act, undefined, check=False)


def exp_derivation(D: Derivation, f: Polynomial, max_iter: int = 64) -> Polynomial:
    """sum_p D^p f / p!, requiring D to be nilpotent on f."""
    if not isinstance(f, Polynomial):
        f = D.alg.const(f)
    total = f
    term = f
    p = 0
    while term.terms:
        p += 1
        if p > max_iter:
            raise NotNilpotent(f"{D.name} not nilpotent on input within {max_iter} steps")
        term = apply(D, term).scale(Fraction(1, p))
        total = total + term
    return total


def power_series(D: Derivation, f: Polynomial, max_iter: int = 64) -> list:
    """[f, Df, D^2 f / 2!, ...] up to the last nonzero term."""
    out = [f]
    p = 0
    term = f
    while True:
        p += 1
        if p > max_iter:
            raise NotNilpotent(f"{D.name} not nilpotent within {max_iter} steps")
        term = apply(D, term).scale(Fraction(1, p))
        if not term.terms:
            return out
        out.append(term)


def iterate(D: Derivation, f: Polynomial, k: int) -> Polynomial:
    for _ in range(k):
        f = apply(D, f)
    return f


def substitute(mapping: Mapping, f: Polynomial, target: Algebra | None = None,
               check: bool = True) -> Polynomial:
    """Extend generator images to the unique algebra homomorphism and apply it to f.

    Unmapped generators are sent to themselves, which requires the target to
    be the source algebra.
    """
    src = f.alg
    target = target or src
    images: dict = {}
    for g, img in mapping.items():
        gid = src.resolve(g)
        p = _as_poly(target, img)
        if check and p.terms:
            want = src.gens[gid].degree
            for d in p.degrees():
                if d != want:
                    raise DegreeMismatch(
                        f"image of {src.gens[gid].label} has degree {d}, expected {want}")
        images[gid] = p
    t = target.tables()
    out: dict = {}
    one = {(): Fraction(1)}
    for m, c in f.terms.items():
        acc = one
        for g in m:
            img = images.get(g)
            if img is None:
                if target.gens is not src.gens:
                    raise UnknownGenerator(f"no image for {src.gens[g].label}")
                it = {(g,): Fraction(1)}
            else:
                it = img.terms
            acc = _k.poly_mul(acc, it, t.swap, t.n)
            if not acc:
                break
        for mm, cc in acc.items():
            v = out.get(mm)
            v = cc * c if v is None else v + cc * c
            if v:
                out[mm] = v
            else:
                out.pop(mm, None)
    return Polynomial(target, out)


def convert_convention(x):
    """Move a polynomial or derivation to the algebra of the other sign convention.

    Products are related by ``a *' b = (-1)**(j_a*i_b) a*b``; derivations of degree
    (i, j) by ``D'(a) = (-1)**(j*i_a) D(a)``.  Applying twice is the identity.
    """
    if isinstance(x, Polynomial):
        alg = x.alg
        tw = alg.twin()
        out = {}
        for m, c in x.terms.items():
            out[m] = c if monomial_convention_sign(alg, m) > 0 else -c
        return Polynomial(tw, out)
    if isinstance(x, Derivation):
        alg = x.alg
        tw = alg.twin()
        j = x.degree.v
        act = {}
        for gid, p in x.action.items():
            q = convert_convention(p)
            if (j * alg.gens[gid].degree.h) & 1:
                q = -q
            act[gid] = q
        return Derivation(tw, x.name, x.degree, act, x.undefined, check=False)
    raise TypeError(f"cannot convert {type(x).__name__}")


def compose_apply(ops, f):
    """Apply derivations right to left: ops = [D1, D2, D3] gives D1(D2(D3 f))."""
    for D in reversed(list(ops)):
        f = apply(D, f)
    return f


def binomial(n, k):
    return factorial(n) // (factorial(k) * factorial(n - k))


def times(p: Polynomial, D: Derivation, name: str | None = None) -> Derivation:
    """The derivation g -> p * D(g) (left multiplication after D)."""
    deg = p.degree()
    if deg is None:
        return zero_derivation(D.alg, D.degree, name or "0")
    if deg == MIXED:
        raise DegreeMismatch("multiplier must be homogeneous")
    act = {g: p * img for g, img in D.action.items()}
    return Derivation(D.alg, name or f"{p}*{D.name}", deg + D.degree, act, D.undefined, check=False)


def linear_combination(alg: Algebra, pairs, degree, name="sum") -> Derivation:
    """sum c_k D_k for derivations of a common degree."""
    out = zero_derivation(alg, degree, name)
    for c, D in pairs:
        if c:
            out = out + (c * D if c != 1 else D)
    return out.renamed(name)


def left_derivative(f: Polynomial, g) -> Polynomial:
    """d/dg acting from the left: bring one factor g to the front, then drop it."""
    alg = f.alg
    gid = alg.resolve(g)
    t = alg.tables()
    n = t.n
    sw = t.swap
    out: dict = {}
    for m, c in f.terms.items():
        if gid not in m:
            continue
        p = m.index(gid)
        k = m.count(gid)
        flips = sum(sw[gid * n + y] for y in m[:p])
        rest = m[:p] + m[p + 1:]
        cc = c * k
        if flips & 1:
            cc = -cc
        v = out.get(rest)
        v = cc if v is None else v + cc
        if v:
            out[rest] = v
        else:
            out.pop(rest, None)
    return Polynomial(alg, out)


def right_derivative(f: Polynomial, g) -> Polynomial:
    """d/dg acting from the right: bring one factor g to the back, then drop it."""
    alg = f.alg
    gid = alg.resolve(g)
    t = alg.tables()
    n = t.n
    sw = t.swap
    out: dict = {}
    for m, c in f.terms.items():
        if gid not in m:
            continue
        k = m.count(gid)
        p = len(m) - 1 - m[::-1].index(gid)
        flips = sum(sw[gid * n + y] for y in m[p + 1:])
        rest = m[:p] + m[p + 1:]
        cc = c * k
        if flips & 1:
            cc = -cc
        v = out.get(rest)
        v = cc if v is None else v + cc
        if v:
            out[rest] = v
        else:
            out.pop(rest, None)
    return Polynomial(alg, out)


def berezin(f: Polynomial, odd_gens) -> Polynomial:
    """Top coefficient in the listed odd generators, normalized so the
    integral of g1*g2*...*gk is 1."""
    for g in odd_gens:
        f = left_derivative(f, g)
    return f
