"""Seeded random polynomials and derivations for property tests and benchmarks."""
from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations_with_replacement

from .core import Algebra, Derivation, Polynomial

__all__ = ["monomials_by_degree", "random_polynomial", "random_homogeneous", "random_derivation"]


def _gen_ids(alg: Algebra, gens) -> tuple:
    if gens is None:
        return tuple(range(len(alg.gens)))
    return tuple(sorted(alg.resolve(g) for g in gens))


@lru_cache(maxsize=64)
def _monomials(alg: Algebra, ids: tuple, max_len: int, ngens: int):
    by_deg: dict = {}
    for k in range(max_len + 1):
        for word in combinations_with_replacement(ids, k):
            s, m = alg.normalize(word)
            if not s:
                continue
            by_deg.setdefault(alg.mono_degree(m), []).append(word)
    return by_deg


def monomials_by_degree(alg: Algebra, gens=None, max_len: int = 3) -> dict:
    """Nonzero canonical words of length <= max_len, grouped by bidegree."""
    return _monomials(alg, _gen_ids(alg, gens), max_len, len(alg.gens))


def _coeff(rng, bound):
    c = 0
    while c == 0:
        c = rng.randint(-bound, bound)
    return c


def random_polynomial(alg: Algebra, rng: random.Random, terms: int = 3, max_len: int = 3,
                      bound: int = 3, gens=None) -> Polynomial:
    """Sum of up to ``terms`` random monomials with small nonzero integer coefficients."""
    by_deg = monomials_by_degree(alg, gens, max_len)
    pool = [w for ws in by_deg.values() for w in ws]
    out = alg.zero()
    for _ in range(rng.randint(1, terms)):
        out = out + Polynomial.from_word(alg, rng.choice(pool), _coeff(rng, bound))
    return out


def random_homogeneous(alg: Algebra, rng: random.Random, degree, terms: int = 3,
                       max_len: int = 3, bound: int = 3, gens=None) -> Polynomial:
    """Random polynomial of a fixed bidegree (zero if no monomial has that degree)."""
    pool = monomials_by_degree(alg, gens, max_len).get(tuple(degree), [])
    out = alg.zero()
    if not pool:
        return out
    for _ in range(rng.randint(1, terms)):
        out = out + Polynomial.from_word(alg, rng.choice(pool), _coeff(rng, bound))
    return out


def random_derivation(alg: Algebra, rng: random.Random, degree, terms: int = 2,
                      max_len: int = 2, density: float = 0.6, gens=None, name: str = "D") -> Derivation:
    """Derivation of the given bidegree with random images on a random subset of generators."""
    by_deg = monomials_by_degree(alg, gens, max_len)
    act = {}
    for g in alg.gens:
        if rng.random() > density:
            continue
        want = tuple(a + b for a, b in zip(g.degree, degree))
        pool = by_deg.get(want)
        if not pool:
            continue
        img = alg.zero()
        for _ in range(rng.randint(1, terms)):
            img = img + Polynomial.from_word(alg, rng.choice(pool), _coeff(rng, 3))
        act[g.id] = img
    return Derivation(alg, name, degree, act)
