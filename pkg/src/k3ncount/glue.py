"""Gluing the rank one lattices <2d> and <2n-2> along their discriminant groups.

Both discriminant groups are cyclic, ``Z/m`` with quadratic form
``q(x) = x**2/m mod 2``. An even overlattice of index ``l`` in which both
summands stay primitive is the same thing as an isotropic subgroup of order
``l`` that is the graph of a monomorphism between the order ``l`` subgroups.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .quadform import GramForm, Vec, pair_index
from .query import ModuliQuery

__all__ = [
    "GlueDatum",
    "GlueError",
    "NonIntegralGram",
    "OddDiagonal",
    "q_value",
    "subgroup_generator",
    "is_isotropic",
    "graph_elements",
    "enumerate_candidate_graphs",
    "enumerate_isotropic_graphs",
    "graph_equivalence_classes",
    "overlattice_from_glue",
]


class GlueError(ValueError):
    pass


class NonIntegralGram(GlueError):
    pass


class OddDiagonal(GlueError):
    pass


@dataclass(frozen=True, order=True)
class GlueDatum:
    """Generator ``(x, y)`` of a graph subgroup of ``Z/2d + Z/(2n-2)``.

    ``epsilon`` is the unit mod ``l`` the generator was built from; the
    trivial glue (``l = 1``) carries ``epsilon = 0``.
    """

    epsilon: int
    x: int
    y: int
    l: int

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "l": self.l, "epsilon": self.epsilon}


def q_value(x: int, m: int) -> Fraction:
    """``x**2/m`` reduced into ``[0, 2)``."""
    if m <= 0 or m % 2:
        raise ValueError(f"discriminant form needs a positive even order, got {m}")
    return Fraction(x * x, m) % 2


def subgroup_generator(m: int, l: int) -> int:
    if l < 1 or m % l:
        raise ValueError(f"{l} does not divide {m}")
    return (m // l) % m


def _glue(query: ModuliQuery, epsilon: int) -> GlueDatum:
    l = query.t
    x = subgroup_generator(query.m1, l)
    y = (query.m2 // l * epsilon) % query.m2
    return GlueDatum(epsilon=epsilon, x=x, y=y, l=l)


def is_isotropic(query: ModuliQuery, x: int, y: int) -> bool:
    return (q_value(x % query.m1, query.m1) + q_value(y % query.m2, query.m2)) % 2 == 0


def graph_elements(query: ModuliQuery, glue: GlueDatum) -> frozenset[tuple[int, int]]:
    return frozenset(
        (k * glue.x % query.m1, k * glue.y % query.m2) for k in range(glue.l)
    )


def enumerate_candidate_graphs(query: ModuliQuery) -> list[GlueDatum]:
    """Graphs of all monomorphisms from the order ``t`` subgroup, isotropic or not."""
    l = query.t
    if l == 1:
        return [_glue(query, 0)]
    return [_glue(query, e) for e in range(1, l + 1) if gcd(e, l) == 1]


def enumerate_isotropic_graphs(query: ModuliQuery) -> list[GlueDatum]:
    seen = set()
    out = []
    for glue in enumerate_candidate_graphs(query):
        if not is_isotropic(query, glue.x, glue.y):
            continue
        elements = graph_elements(query, glue)
        if elements in seen:
            continue
        seen.add(elements)
        out.append(glue)
    return out


def _flip(query: ModuliQuery, elements, sx: int, sy: int) -> frozenset[tuple[int, int]]:
    return frozenset((sx * a % query.m1, sy * b % query.m2) for a, b in elements)


def graph_equivalence_classes(
    query: ModuliQuery, graphs: list[GlueDatum]
) -> list[list[GlueDatum]]:
    """Partition graphs under the sign changes ``(x, y) -> (+-x, +-y)``.

    Each class is sorted by ``epsilon``; classes are ordered by their least member.
    """
    by_elements = {graph_elements(query, g): g for g in graphs}
    classes: list[list[GlueDatum]] = []
    assigned = set()
    for g in sorted(graphs):
        if g in assigned:
            continue
        elems = graph_elements(query, g)
        members = {g}
        for sx in (1, -1):
            for sy in (1, -1):
                image = by_elements.get(_flip(query, elems, sx, sy))
                if image is not None:
                    members.add(image)
        assigned |= members
        classes.append(sorted(members))
    return classes


def overlattice_from_glue(query: ModuliQuery, glue: GlueDatum) -> tuple[GramForm, Vec, Vec]:
    """Overlattice of ``<2d> + <2n-2>`` determined by ``glue``.

    With ``e1, e2`` the generators of the summands and ``u = (e1 + eps*e2)/l``,
    the lattice is returned in the basis ``(u, e2)``. The marked vector is
    ``e1 = l*u - eps*e2`` and its complement generator is ``e2``.
    """
    l, eps = glue.l, glue.epsilon
    m1, m2 = query.m1, query.m2
    num_a = m1 + eps * eps * m2
    num_b = eps * m2
    if num_a % (l * l) or num_b % l:
        raise NonIntegralGram(f"glue {glue} of {query} gives a non-integral Gram matrix")
    a, b = num_a // (l * l), num_b // l
    if a % 2:
        raise OddDiagonal(f"glue {glue} of {query} gives an odd lattice")
    gram = GramForm(a, b, m2)
    h = Vec(l, -eps)
    delta = Vec(0, 1)

    checks = {
        "det": gram.det == query.discriminant,
        "norm of h": gram.norm(h) == m1,
        "norm of delta": gram.norm(delta) == m2,
        "orthogonality": gram.inner(h, delta) == 0,
        "primitivity": h.is_primitive(),
        "index": pair_index(gram, h) == l,
    }
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise GlueError(f"overlattice for {glue} of {query} fails: {', '.join(failed)}")
    return gram, h, delta
