"""Hypothesis strategies for polynomial inputs."""
from hypothesis import strategies as st

from twistgeom.fields import VectorField
from twistgeom.functions import FunctionExpr


def polys(dim=2, max_deg=3, max_terms=3, waves=False):
    def build(terms):
        f = FunctionExpr.zero(dim)
        for alpha, k, c in terms:
            f = f + FunctionExpr.monomial(alpha, c, k if waves else None)
        return f

    def cap(raw):
        out, left = [], max_deg
        for a in raw:
            out.append(min(a, left))
            left -= out[-1]
        return out

    alpha = st.lists(st.integers(0, max_deg), min_size=dim, max_size=dim).map(cap)
    wave = st.lists(st.integers(-2, 2), min_size=dim, max_size=dim)
    coeff = st.integers(-3, 3).filter(bool)
    term = st.tuples(alpha, wave, coeff)
    return st.lists(term, min_size=1, max_size=max_terms).map(build)


def vector_fields(dim=2, max_deg=2):
    return st.lists(polys(dim, max_deg, 2), min_size=dim, max_size=dim).map(VectorField)
