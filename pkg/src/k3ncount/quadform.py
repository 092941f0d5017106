"""Even positive-definite binary lattices.

A lattice is stored by its Gram matrix ``[[a, b], [b, c]]``; vectors are
coordinate pairs in that basis. Isometry here always means the full
orthogonal group, improper isometries included, so reduction works up to
GL2(Z) and every reduced form has ``b >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
from typing import NamedTuple

__all__ = [
    "GramForm",
    "Vec",
    "Matrix",
    "MarkedPairClass",
    "NotAnInteger",
    "reduce",
    "enumerate_vectors",
    "automorphisms",
    "orthogonal_complement",
    "pair_index",
    "pairs_isometric",
    "canonical_pair",
    "apply",
    "matmul",
    "reduced_forms_of_det",
]

# 2x2 integer matrix, row major
Matrix = tuple[tuple[int, int], tuple[int, int]]


class NotAnInteger(ValueError):
    """A quantity that must be integral for a valid lattice was not."""


class Vec(NamedTuple):
    x: int
    y: int

    def __neg__(self) -> Vec:
        return Vec(-self.x, -self.y)

    def is_primitive(self) -> bool:
        return gcd(self.x, self.y) == 1


@dataclass(frozen=True, order=True)
class GramForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0 or self.c <= 0 or self.a * self.c - self.b * self.b <= 0:
            raise ValueError(f"{self.as_list()} is not positive definite")
        if self.a % 2 or self.c % 2:
            raise ValueError(f"{self.as_list()} is not even")

    @classmethod
    def from_matrix(cls, m) -> GramForm:
        if m[0][1] != m[1][0]:
            raise ValueError("Gram matrix must be symmetric")
        return cls(m[0][0], m[0][1], m[1][1])

    @property
    def det(self) -> int:
        return self.a * self.c - self.b * self.b

    def inner(self, u, v) -> int:
        return self.a * u[0] * v[0] + self.b * (u[0] * v[1] + u[1] * v[0]) + self.c * u[1] * v[1]

    def norm(self, v) -> int:
        return self.inner(v, v)

    def is_reduced(self) -> bool:
        return 0 <= 2 * self.b <= self.a <= self.c

    def transform(self, p: Matrix) -> GramForm:
        """Gram matrix of the basis whose vectors are the columns of ``p``."""
        e1 = (p[0][0], p[1][0])
        e2 = (p[0][1], p[1][1])
        return GramForm(self.norm(e1), self.inner(e1, e2), self.norm(e2))

    def as_list(self) -> list[int]:
        return [self.a, self.b, self.c]


@dataclass(frozen=True)
class MarkedPairClass:
    """Canonical representative of an isometry class of pairs (lattice, vector)."""

    gram: GramForm
    h: Vec
    delta: Vec
    beta: int

    def to_dict(self) -> dict:
        return {
            "gram": self.gram.as_list(),
            "h": list(self.h),
            "delta": list(self.delta),
            "beta": self.beta,
        }


def matmul(m: Matrix, n: Matrix) -> Matrix:
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def apply(m: Matrix, v) -> Vec:
    return Vec(m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def det2(m: Matrix) -> int:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def unimodular_inverse(m: Matrix) -> Matrix:
    s = det2(m)
    if s not in (1, -1):
        raise ValueError(f"{m} is not unimodular")
    return ((s * m[1][1], -s * m[0][1]), (-s * m[1][0], s * m[0][0]))


def reduce(g: GramForm) -> tuple[GramForm, Matrix]:
    """Reduce ``g`` to the unique form with ``0 <= 2b <= a <= c``.

    Returns the reduced form and the unimodular matrix whose columns are the
    new basis vectors written in the old basis, so that
    ``g.transform(p) == reduced``.
    """
    a, b, c = g.a, g.b, g.c
    p = [[1, 0], [0, 1]]
    while True:
        # e2 <- e2 - k*e1 puts b into (-a/2, a/2]
        k = -((a - 2 * b) // (2 * a))
        if k:
            c = c - 2 * k * b + k * k * a
            b = b - k * a
            p[0][1] -= k * p[0][0]
            p[1][1] -= k * p[1][0]
        if c < a:
            a, c = c, a
            p[0][0], p[0][1] = p[0][1], p[0][0]
            p[1][0], p[1][1] = p[1][1], p[1][0]
            continue
        break
    if b < 0:
        b = -b
        p[0][1], p[1][1] = -p[0][1], -p[1][1]
    reduced = GramForm(a, b, c)
    transform = ((p[0][0], p[0][1]), (p[1][0], p[1][1]))
    return reduced, transform


def enumerate_vectors(g: GramForm, norm: int) -> list[Vec]:
    """All vectors of the given norm, sorted lexicographically.

    ``x`` runs over the exact box ``x**2 <= norm*c/det``; for each ``x`` the
    quadratic in ``y`` is solved exactly.
    """
    if norm <= 0:
        raise ValueError("norm must be positive")
    a, b, c, det = g.a, g.b, g.c, g.det
    xmax = isqrt(norm * c // det)
    out = []
    for x in range(-xmax, xmax + 1):
        # c*y^2 + 2*b*x*y + a*x^2 - norm = 0, discriminant/4 = c*norm - det*x^2
        disc = c * norm - det * x * x
        if disc < 0:
            continue
        r = isqrt(disc)
        if r * r != disc:
            continue
        ys = {-b * x + r, -b * x - r}
        for num in sorted(ys):
            if num % c == 0:
                out.append(Vec(x, num // c))
    out.sort()
    return out


def automorphisms(g: GramForm) -> list[Matrix]:
    """The isometry group of ``g`` as matrices acting on coordinate columns."""
    group = []
    firsts = enumerate_vectors(g, g.a)
    seconds = firsts if g.c == g.a else enumerate_vectors(g, g.c)
    for u in firsts:
        for v in seconds:
            if g.inner(u, v) == g.b:
                group.append(((u.x, v.x), (u.y, v.y)))
    group.sort()
    return group


def orthogonal_complement(g: GramForm, h) -> Vec:
    """Primitive generator of the orthogonal complement of ``h``.

    The sign is fixed so that the first nonzero coordinate is positive.
    """
    if h[0] == 0 and h[1] == 0:
        raise ValueError("h must be nonzero")
    p = g.a * h[0] + g.b * h[1]
    q = g.b * h[0] + g.c * h[1]
    k = gcd(p, q)
    delta = Vec(q // k, -p // k)
    if delta.x < 0 or (delta.x == 0 and delta.y < 0):
        delta = -delta
    return delta


def pair_index(g: GramForm, h) -> int:
    """Index of the sublattice spanned by ``h`` and its complement generator."""
    delta = orthogonal_complement(g, h)
    num = g.norm(h) * g.norm(delta)
    if num % g.det:
        raise NotAnInteger(f"{num}/{g.det} is not an integer for h={tuple(h)} in {g.as_list()}")
    sq = num // g.det
    beta = isqrt(sq)
    if beta * beta != sq:
        raise NotAnInteger(f"{sq} is not a perfect square for h={tuple(h)} in {g.as_list()}")
    return beta


def _to_reduced(g: GramForm, h) -> tuple[GramForm, Vec]:
    reduced, p = reduce(g)
    return reduced, apply(unimodular_inverse(p), h)


def pairs_isometric(p, q) -> bool:
    """Whether some isometry between the lattices carries one marked vector to the other."""
    g1, h1 = _to_reduced(*p)
    g2, h2 = _to_reduced(*q)
    if g1 != g2:
        return False
    return any(apply(m, h1) == h2 for m in automorphisms(g1))


def canonical_pair(g: GramForm, h) -> MarkedPairClass:
    reduced, h_red = _to_reduced(g, h)
    best = min(apply(m, h_red) for m in automorphisms(reduced))
    return MarkedPairClass(
        gram=reduced,
        h=best,
        delta=orthogonal_complement(reduced, best),
        beta=pair_index(reduced, best),
    )


def reduced_forms_of_det(det: int) -> list[GramForm]:
    """Every reduced even positive-definite form of the given determinant.

    Reduced forms satisfy ``det >= 3a**2/4``, which bounds ``a``.
    """
    if det <= 0:
        raise ValueError("determinant must be positive")
    forms = []
    amax = isqrt(4 * det // 3)
    for a in range(2, amax + 1, 2):
        for b in range(a // 2 + 1):
            num = det + b * b
            if num % a:
                continue
            c = num // a
            if c % 2 or c < a:
                continue
            forms.append(GramForm(a, b, c))
    return forms
