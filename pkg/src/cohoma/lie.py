"""Structure constants, metrics and representations of small Lie algebras.

Indices are 0-based internally; ``f[a][b][c]`` is f^a_{bc}, so that
[x_b, x_c] = f^a_{bc} x_a.  Representation matrices satisfy
[rho_a, rho_b] = f^c_{ab} rho_c.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import linalg
from .errors import InvalidLieAlgebra, InvalidRepresentation


def _zeros(*shape):
    if len(shape) == 1:
        return [Fraction(0)] * shape[0]
    return [_zeros(*shape[1:]) for _ in range(shape[0])]


@dataclass
class LieAlgebraData:
    name: str
    dim: int
    f: list
    metric: list | None = None
    rho: list | None = None
    meta: dict = field(default_factory=dict)

    def bracket_coeffs(self, b, c):
        return [self.f[a][b][c] for a in range(self.dim)]

    def nonzero_f(self):
        """(a, b, c, value) for every nonzero f^a_{bc}."""
        d = self.dim
        return [(a, b, c, self.f[a][b][c]) for a in range(d) for b in range(d)
                for c in range(d) if self.f[a][b][c]]

    @property
    def rep_dim(self):
        return len(self.rho[0]) if self.rho else 0

    def is_abelian(self):
        return not self.nonzero_f()

    # -- validation ----------------------------------------------------
    def antisymmetry_violations(self):
        d = self.dim
        return [(a, b, c) for a in range(d) for b in range(d) for c in range(d)
                if self.f[a][b][c] != -self.f[a][c][b]]

    def jacobi_violations(self):
        """Triples (b, c, e) where sum_cyc [[x_b, x_c], x_e] != 0."""
        d, f = self.dim, self.f
        bad = []
        for b, c, e in combinations(range(d), 3):
            for a in range(d):
                s = sum(f[m][b][c] * f[a][m][e] + f[m][c][e] * f[a][m][b] + f[m][e][b] * f[a][m][c]
                        for m in range(d))
                if s:
                    bad.append((b, c, e))
                    break
        return bad

    def validate(self):
        if self.antisymmetry_violations():
            raise InvalidLieAlgebra(f"{self.name}: structure constants not antisymmetric")
        bad = self.jacobi_violations()
        if bad:
            raise InvalidLieAlgebra(f"{self.name}: Jacobi identity fails on {bad[0]}")
        if self.metric is not None and not self.metric_invariant():
            raise InvalidLieAlgebra(f"{self.name}: metric is not ad-invariant")
        if self.rho is not None:
            self.validate_rep()
        return self

    def metric_invariant(self):
        d, f, g = self.dim, self.f, self.metric
        for a in range(d):
            for b in range(d):
                for c in range(d):
                    s = sum(f[e][a][b] * g[e][c] + f[e][a][c] * g[b][e] for e in range(d))
                    if s:
                        return False
        return True

    def validate_rep(self):
        rho = self.rho
        if len(rho) != self.dim:
            raise InvalidRepresentation("need one matrix per basis element")
        for a in range(self.dim):
            for b in range(self.dim):
                lhs = linalg.commutator(rho[a], rho[b])
                n = len(lhs)
                for i in range(n):
                    for j in range(n):
                        rhs = sum(self.f[c][a][b] * rho[c][i][j] for c in range(self.dim))
                        if lhs[i][j] != rhs:
                            raise InvalidRepresentation(
                                f"{self.name}: rho is not a homomorphism at ({a},{b})")
        return True

    def rho_is_skew(self):
        return all(m[i][j] == -m[j][i] for m in self.rho
                   for i in range(len(m)) for j in range(len(m)))

    def with_rho(self, rho, name=None):
        return LieAlgebraData(name or self.name, self.dim, self.f, self.metric, rho, dict(self.meta))

    def adjoint(self):
        """ad(x_a)^i_j = f^i_{aj}."""
        d = self.dim
        return [[[self.f[i][a][j] for j in range(d)] for i in range(d)] for a in range(d)]


def epsilon3():
    e = _zeros(3, 3, 3)
    for (i, j, k), s in {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1,
                         (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}.items():
        e[i][j][k] = Fraction(s)
    return e


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def su2() -> LieAlgebraData:
    """su(2) in the basis with f^a_{bc} = epsilon_{abc}, metric delta."""
    g = LieAlgebraData("su2", 3, epsilon3(), identity(3))
    g.rho = g.adjoint()
    return g


def so3() -> LieAlgebraData:
    """so(3) from its defining 3x3 antisymmetric matrices (L_a)_{bc} = -epsilon_{abc}."""
    eps = epsilon3()
    mats = [[[-eps[a][b][c] for c in range(3)] for b in range(3)] for a in range(3)]
    return from_matrices("so3", mats, metric=identity(3))


def abelian(n) -> LieAlgebraData:
    return LieAlgebraData(f"u1^{n}" if n > 1 else "u1", n, _zeros(n, n, n), identity(n),
                          [[[Fraction(0)]] for _ in range(n)])


def so_n(n) -> LieAlgebraData:
    """so(n) with basis E_{ij} - E_{ji} (i<j) acting on R^n by its defining matrices."""
    mats = []
    for i, j in combinations(range(n), 2):
        m = _zeros(n, n)
        m[i][j] = Fraction(-1)
        m[j][i] = Fraction(1)
        mats.append(m)
    g = from_matrices(f"so{n}", mats, metric=identity(len(mats)))
    return g


def so2() -> LieAlgebraData:
    return so_n(2)


def from_matrices(name, mats, metric=None) -> LieAlgebraData:
    """Structure constants of the span of ``mats`` (which must close under brackets)."""
    d = len(mats)
    flat = [[x for row in m for x in row] for m in mats]
    cols = [[flat[a][k] for a in range(d)] for k in range(len(flat[0]))]
    f = _zeros(d, d, d)
    for b in range(d):
        for c in range(d):
            br = linalg.commutator(mats[b], mats[c])
            target = [x for row in br for x in row]
            x = linalg.solve(cols, target)
            if x is None:
                raise InvalidLieAlgebra(f"{name}: matrices do not close under the bracket")
            for a in range(d):
                f[a][b][c] = x[a]
    return LieAlgebraData(name, d, f, metric, [list(map(list, m)) for m in mats])


def corrupted_su2() -> LieAlgebraData:
    """su(2) with an extra f^1_{12}: still antisymmetric but Jacobi fails."""
    g = su2()
    f = [[list(r) for r in m] for m in g.f]
    f[0][0][1] += 1
    f[0][1][0] -= 1
    return LieAlgebraData("su2-broken", 3, f, None, None)


PRESETS = {"su2": su2, "so3": so3, "so2": so2, "u1": lambda: abelian(1),
           "broken_su2": corrupted_su2}


def by_name(name: str) -> LieAlgebraData:
    if name in PRESETS:
        return PRESETS[name]()
    if name.startswith("so") and name[2:].isdigit():
        return so_n(int(name[2:]))
    if name.startswith("u1^") and name[3:].isdigit():
        return abelian(int(name[3:]))
    raise InvalidLieAlgebra(f"unknown Lie algebra {name!r}")
