"""Seeded random inputs for the verification suites.

All generators draw from a ``random.Random`` instance so that a seed fixes
the whole corpus.  Defaults: polynomials on R^2 of degree <= 3 with integer
coefficients in -2..2.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Dict, List, Sequence, Tuple

from .fields import VectorField
from .functions import FunctionExpr
from .geometry import FrameConnection
from .modes import ANN, CRE, ClassicalModePoly, ModeLattice
from .scalars import LambdaSeries
from .twist import TwistSpec

__all__ = [
    "DEFAULT_SEED",
    "rng",
    "random_poly",
    "random_polys",
    "random_vector_field",
    "random_theta",
    "family_specs",
    "random_connection",
    "random_mode_monomial",
    "mode_pairs",
    "default_lattice",
]

DEFAULT_SEED = 42
COEFFS = (-2, -1, 1, 2)


def rng(seed: int = DEFAULT_SEED) -> random.Random:
    return random.Random(seed)


def _exponents(dim: int, max_deg: int) -> List[Tuple[int, ...]]:
    return [a for a in product(range(max_deg + 1), repeat=dim) if sum(a) <= max_deg]


def random_poly(r: random.Random, dim: int = 2, max_deg: int = 3, max_terms: int = 3) -> FunctionExpr:
    """Non-zero polynomial with 1..max_terms monomials."""
    monos = _exponents(dim, max_deg)
    while True:
        f = FunctionExpr.zero(dim)
        for _ in range(r.randint(1, max_terms)):
            f = f + FunctionExpr.monomial(r.choice(monos), r.choice(COEFFS))
        if f:
            return f


def random_polys(r: random.Random, count: int, dim: int = 2, max_deg: int = 3) -> List[FunctionExpr]:
    return [random_poly(r, dim, max_deg) for _ in range(count)]


def random_vector_field(r: random.Random, dim: int = 2, max_deg: int = 2) -> VectorField:
    while True:
        comps = []
        for _ in range(dim):
            comps.append(random_poly(r, dim, max_deg, 2) if r.random() < 0.75 else FunctionExpr.zero(dim))
        v = VectorField(comps)
        if any(comps):
            return v


def random_theta(r: random.Random, dim: int) -> List[List[Fraction]]:
    """Antisymmetric matrix with non-zero entries ``p/q``, ``|p| <= 3``, ``q <= 3``."""
    th = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            x = Fraction(r.choice((-3, -2, -1, 1, 2, 3)), r.randint(1, 3))
            th[i][j], th[j][i] = x, -x
    return th


def family_specs(r: random.Random, dim: int = 2, moyal_count: int = 1) -> List[Tuple[str, TwistSpec]]:
    """Moyal (random rational theta), Jordanian and extended Jordanian default realizations."""
    out = []
    for j in range(moyal_count):
        name = "moyal" if moyal_count == 1 else "moyal-%d" % (j + 1)
        out.append((name, TwistSpec.moyal([[str(x) for x in row] for row in random_theta(r, dim)])))
    out.append(("jordanian", TwistSpec.jordanian(dim)))
    out.append(("ext_jordanian", TwistSpec.ext_jordanian(dim)))
    return out


def random_connection(r: random.Random, dim: int = 3, order: int = 3, entries: int = 5,
                      max_deg: int = 2, lambda_deg: int = 1) -> FrameConnection:
    """Sparse connection with polynomial coefficients up to ``lambda^lambda_deg``."""
    gamma: Dict = {}
    for _ in range(entries):
        key = (r.randrange(dim), r.randrange(dim), r.randrange(dim))
        coeffs = {d: random_poly(r, dim, max_deg, 2) for d in range(lambda_deg + 1) if r.random() < 0.8 or d == 0}
        gamma[key] = LambdaSeries(coeffs, order)
    return FrameConnection(dim, gamma, order)


def default_lattice(d: int = 2, theta="sym") -> ModeLattice:
    """Negation-closed set ``{+-(1,0), +-(0,1), +-(1,1)}`` (embedded in Z^d)."""
    base = [(1, 0), (0, 1), (1, 1)]
    ks = []
    for k in base:
        k = k + (0,) * (d - 2)
        ks.extend([k, tuple(-x for x in k)])
    return ModeLattice(d, ks, theta)


def random_mode_monomial(r: random.Random, lattice: ModeLattice, degree: int,
                         pool: Sequence | None = None) -> ClassicalModePoly:
    pool = list(pool or lattice.momenta)
    letters = [(r.choice((ANN, CRE)), r.choice(pool)) for _ in range(degree)]
    return ClassicalModePoly.monomial(lattice, letters, r.choice(COEFFS))


def mode_pairs(r: random.Random, lattice: ModeLattice, count: int, max_deg: int = 4) -> List[Tuple]:
    """Monomial pairs cycling through all degree splits ``(dF, dG)`` with ``1 <= dF, dG <= max_deg``.

    The first pair is always ``(a(k), a*(k))``.  Letters are drawn from two
    momenta only, so that most pairs have non-vanishing brackets.
    """
    out = []
    k = lattice.momenta[0]
    out.append((ClassicalModePoly.a(lattice, k), ClassicalModePoly.astar(lattice, k)))
    splits = [(dF, dG) for dF in range(1, max_deg + 1) for dG in range(1, max_deg + 1)]
    j = 0
    while len(out) < count:
        dF, dG = splits[j % len(splits)]
        j += 1
        pool = lattice.momenta[:2]
        out.append((random_mode_monomial(r, lattice, dF, pool), random_mode_monomial(r, lattice, dG, pool)))
    return out
