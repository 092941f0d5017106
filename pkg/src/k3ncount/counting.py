"""Counting isometry classes of marked rank two lattices for a query (n, d, t).

Four independent routes produce the same number:

* Level A evaluates the closed-form case analysis.
* Level B counts isotropic glue graphs up to sign changes.
* Level C builds the overlattice of every isotropic graph and classifies the
  resulting marked lattices up to isometry.
* Level D enumerates every reduced form of the right determinant and every
  vector of norm 2d in it, with no reference to gluing at all.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .glue import (
    GlueDatum,
    enumerate_isotropic_graphs,
    graph_equivalence_classes,
    overlattice_from_glue,
)
from .numtheory import (
    euler_phi,
    factorize,
    is_quadratic_residue,
    mod_inverse,
    num_prime_divisors,
    split_w,
)
from .quadform import (
    MarkedPairClass,
    canonical_pair,
    enumerate_vectors,
    orthogonal_complement,
    pair_index,
    reduced_forms_of_det,
)
from .query import InvalidQuery, ModuliQuery

__all__ = [
    "LEVELS",
    "DerivedInvariants",
    "ClosedFormResult",
    "CountReport",
    "LevelMismatch",
    "NonIntegralCount",
    "derive_invariants",
    "closed_form",
    "closed_form_count",
    "glue_count",
    "lattice_count_via_glue",
    "lattice_count_direct",
    "simplified_congruence_count",
    "cross_check",
    "determines_polarization_type",
    "iter_grid",
    "connected_case",
    "verify_connected_cases",
    "verify_index",
    "verify_level_agreement",
    "screen_query",
    "sort_hits",
    "search_disconnected",
]

logger = logging.getLogger(__name__)

LEVELS = ("A", "B", "C", "D")


class NonIntegralCount(ArithmeticError):
    pass


class LevelMismatch(RuntimeError):
    def __init__(self, report: CountReport):
        super().__init__(f"counting levels disagree for {report.query.as_tuple()}: {report.counts}")
        self.report = report


@dataclass(frozen=True)
class DerivedInvariants:
    D: int
    g: int
    n_tilde: int
    d_tilde: int
    w: int
    g1: int
    l1: int
    w_plus: int
    w_minus: int

    def to_dict(self) -> dict:
        return asdict(self)


def derive_invariants(q: ModuliQuery) -> DerivedInvariants:
    common = q.common
    if common % q.t:
        raise InvalidQuery(f"t={q.t} does not divide {common}")
    g = common // q.t
    w = gcd(g, q.t)
    l1 = q.t // w
    w_plus, w_minus = split_w(w, l1)
    return DerivedInvariants(
        D=q.discriminant,
        g=g,
        n_tilde=q.m2 // common,
        d_tilde=q.m1 // common,
        w=w,
        g1=g // w,
        l1=l1,
        w_plus=w_plus,
        w_minus=w_minus,
    )


@dataclass(frozen=True)
class ClosedFormResult:
    count: int
    value: Fraction
    bullet: int
    matches: tuple[int, ...]
    condition_sets: tuple[int, ...]


def _residue_condition(num: int, den: int, modulus: int) -> bool:
    # -num/den is a square mod modulus; den must be a unit there
    return is_quadratic_residue(-num * mod_inverse(den, modulus), modulus)


def _condition_sets(inv: DerivedInvariants) -> tuple[int, ...]:
    """Which of the four residue condition sets hold (numbered 1..4)."""
    g1, l1, dt, nt, w = inv.g1, inv.l1, inv.d_tilde, inv.n_tilde, inv.w
    coprime_l1 = gcd(dt, l1) == 1
    held = []
    if g1 % 2 == 0 and coprime_l1 and gcd(nt, l1) == 1 and _residue_condition(dt, nt, l1):
        held.append(1)
    if (
        g1 % 2 == 1 and l1 % 2 == 1 and dt % 2 == 1
        and coprime_l1 and gcd(nt, 2 * l1) == 1
        and _residue_condition(dt, nt, 2 * l1)
    ):
        held.append(2)
    if (
        g1 % 2 == 1 and l1 % 2 == 1 and w % 2 == 1 and dt % 2 == 0
        and coprime_l1 and gcd(nt, 2 * l1) == 1
    ):
        if gcd(4 * nt, l1) != 1:
            raise NonIntegralCount(f"4*{nt} is not invertible modulo {l1}")
        if _residue_condition(dt, 4 * nt, l1):
            held.append(3)
    if (
        g1 % 2 == 1 and l1 % 2 == 0
        and coprime_l1 and gcd(nt, 2 * l1) == 1
        and _residue_condition(dt, nt, 2 * l1)
    ):
        held.append(4)
    return tuple(held)


def closed_form(q: ModuliQuery) -> ClosedFormResult:
    """Evaluate the closed-form case analysis, recording every bullet that applies."""
    inv = derive_invariants(q)
    sets = _condition_sets(inv)
    base = inv.w_plus * euler_phi(inv.w_minus)
    values: dict[int, Fraction] = {}
    if q.t > 2 and any(s in sets for s in (1, 2, 3)):
        values[1] = base * Fraction(2) ** (num_prime_divisors(inv.l1) - 1)
    if q.t > 2 and 4 in sets:
        values[2] = base * Fraction(2) ** (num_prime_divisors(inv.l1 // 2) - 1)
    if q.t <= 2 and sets:
        values[3] = Fraction(1)
    if not values:
        values[4] = Fraction(0)
    matches = tuple(sorted(values))
    if len({values[b] for b in matches}) > 1:
        logger.warning("bullets %s give different values for %s", matches, q)
    bullet = matches[0]
    value = values[bullet]
    if value.denominator != 1:
        raise NonIntegralCount(f"closed form gives {value} for {q.as_tuple()}")
    return ClosedFormResult(int(value), value, bullet, matches, sets)


def closed_form_count(q: ModuliQuery) -> int:
    return closed_form(q).count


def glue_count(q: ModuliQuery) -> tuple[int, list[GlueDatum]]:
    classes = graph_equivalence_classes(q, enumerate_isotropic_graphs(q))
    return len(classes), [c[0] for c in classes]


def _check_class(q: ModuliQuery, cls: MarkedPairClass) -> None:
    if cls.beta != q.t or cls.gram.norm(cls.delta) != q.m2:
        raise AssertionError(f"class {cls} violates index/complement for {q.as_tuple()}")


def lattice_count_via_glue(q: ModuliQuery) -> tuple[int, list[MarkedPairClass]]:
    classes = set()
    for glue in enumerate_isotropic_graphs(q):
        gram, h, _ = overlattice_from_glue(q, glue)
        cls = canonical_pair(gram, h)
        _check_class(q, cls)
        classes.add(cls)
    out = sorted(classes, key=_class_key)
    return len(out), out


def lattice_count_direct(q: ModuliQuery) -> tuple[int, list[MarkedPairClass]]:
    """Classify marked lattices straight from the definition.

    Walks all reduced even forms of determinant ``4d(n-1)/t**2``, keeps the
    primitive vectors of norm ``2d`` whose complement has norm ``2n-2`` and
    index ``t``, and collects their canonical pairs.
    """
    classes = set()
    for gram in reduced_forms_of_det(q.discriminant):
        for h in enumerate_vectors(gram, q.m1):
            if not h.is_primitive():
                continue
            delta = orthogonal_complement(gram, h)
            if gram.norm(delta) != q.m2 or pair_index(gram, h) != q.t:
                continue
            classes.add(canonical_pair(gram, h))
    out = sorted(classes, key=_class_key)
    return len(out), out


def _class_key(cls: MarkedPairClass):
    return (cls.gram.a, cls.gram.b, cls.gram.c, cls.h, cls.delta)


def simplified_congruence_count(q: ModuliQuery) -> int:
    """Units mod t solving ``d~ + n~ eps**2 == 0 (mod 2 l1)``, halved for t > 2.

    Diagnostic only: this congruence depends on the representative chosen for
    each residue class, unlike the discriminant form itself.
    """
    inv = derive_invariants(q)
    mod = 2 * inv.l1
    hits = sum(
        1
        for e in range(1, q.t + 1)
        if gcd(e, q.t) == 1 and (inv.d_tilde + inv.n_tilde * e * e) % mod == 0
    )
    return hits // 2 if q.t > 2 else hits


@dataclass
class CountReport:
    query: ModuliQuery
    invariants: DerivedInvariants
    counts: dict[str, int | None]
    classes: list[MarkedPairClass] = field(default_factory=list)
    glue_reps: list[GlueDatum] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    @property
    def agree(self) -> bool:
        return not self.diagnostics.get("mismatch", False)

    @property
    def count(self) -> int | None:
        for level in LEVELS:
            if self.counts.get(level) is not None:
                return self.counts[level]
        return None

    def to_dict(self) -> dict:
        q = self.query
        return {
            "schema": 1,
            "n": q.n,
            "d": q.d,
            "t": q.t,
            "D": self.invariants.D,
            "count": self.count,
            "counts": {level: self.counts.get(level) for level in LEVELS},
            "classes": [c.to_dict() for c in self.classes],
            "diagnostics": self.diagnostics,
        }


def _normalize_levels(levels: Iterable[str]) -> tuple[str, ...]:
    chosen = {str(x).strip().upper() for x in levels if str(x).strip()}
    unknown = chosen - set(LEVELS)
    if unknown:
        raise ValueError(f"unknown levels: {sorted(unknown)}")
    if not chosen:
        raise ValueError("at least one level is required")
    return tuple(x for x in LEVELS if x in chosen)


def cross_check(
    q: ModuliQuery, levels: Iterable[str] = LEVELS, strict: bool = True
) -> CountReport:
    """Run the requested levels and compare them.

    With ``strict`` a disagreement raises :class:`LevelMismatch` carrying the
    report; otherwise the mismatch is only flagged in the diagnostics.
    """
    levels = _normalize_levels(levels)
    report = CountReport(
        query=q,
        invariants=derive_invariants(q),
        counts={level: None for level in LEVELS},
    )
    diag = report.diagnostics
    classes_c = classes_d = None

    if "A" in levels:
        cf = closed_form(q)
        report.counts["A"] = cf.count
        diag["bullet"] = cf.bullet
        diag["bullet_matches"] = list(cf.matches)
        diag["condition_sets"] = list(cf.condition_sets)
        diag["formula_value"] = str(cf.value)
    if "B" in levels:
        count, reps = glue_count(q)
        report.counts["B"] = count
        report.glue_reps = reps
        diag["isotropic_graphs"] = len(enumerate_isotropic_graphs(q))
    if "C" in levels:
        report.counts["C"], classes_c = lattice_count_via_glue(q)
    if "D" in levels:
        report.counts["D"], classes_d = lattice_count_direct(q)
    diag["simplified_congruence_count"] = simplified_congruence_count(q)

    report.classes = classes_c if classes_c is not None else (classes_d or [])
    ran = [report.counts[x] for x in levels]
    mismatch = len(set(ran)) > 1
    if classes_c is not None and classes_d is not None and classes_c != classes_d:
        mismatch = True
        diag["class_mismatch"] = True
    diag["mismatch"] = mismatch
    if mismatch:
        if strict:
            raise LevelMismatch(report)
        logger.warning("levels disagree for %s: %s", q.as_tuple(), report.counts)
    return report


def determines_polarization_type(q: ModuliQuery) -> bool:
    return gcd(gcd(q.m2 // q.t, q.m1 // q.t), q.t) == 1


def iter_grid(
    max_n: int, max_d: int, min_n: int = 2, min_d: int = 1
) -> Iterable[ModuliQuery]:
    """Every valid query in the box, in lexicographic (n, d, t) order."""
    for n in range(max(min_n, 2), max_n + 1):
        for d in range(max(min_d, 1), max_d + 1):
            common = gcd(2 * d, 2 * n - 2)
            for t in range(1, common + 1):
                if common % t == 0:
                    yield ModuliQuery(n, d, t)


def _odd_prime_power(t: int) -> bool:
    f = factorize(t).factors
    return len(f) == 1 and f[0][0] > 2


def connected_case(q: ModuliQuery) -> str | None:
    """Name of the connectedness case the query falls under, if any."""
    n1 = q.n - 1
    if q.t == 1 and gcd(n1, q.d) == 1:
        return "split"
    if q.t == 2 and gcd(n1, q.d) == 1 and (q.d + n1) % 4 == 0:
        return "non-split"
    if q.t > 1 and _odd_prime_power(q.t) and q.common % (q.t * q.t) == 0:
        return "odd-prime-power"
    return None


def _counts_for(q: ModuliQuery, levels: Sequence[str]) -> dict[str, int]:
    report = cross_check(q, levels, strict=False)
    return {x: report.counts[x] for x in levels}


def verify_connected_cases(
    max_n: int, max_d: int, levels: Sequence[str] = LEVELS, min_n: int = 2, min_d: int = 1
) -> dict:
    """Check that every query in a connectedness case has at most one class."""
    levels = _normalize_levels(levels)
    cases = {name: {"checked": 0, "counterexamples": []} for name in ("split", "non-split", "odd-prime-power")}
    for q in iter_grid(max_n, max_d, min_n, min_d):
        case = connected_case(q)
        if case is None:
            continue
        counts = _counts_for(q, levels)
        cases[case]["checked"] += 1
        if any(c > 1 for c in counts.values()):
            cases[case]["counterexamples"].append({"n": q.n, "d": q.d, "t": q.t, "counts": counts})
    return cases


def verify_index(max_n: int, max_d: int, min_n: int = 2, min_d: int = 1) -> dict:
    """Every glued class must have index t and complement norm 2n-2."""
    checked = 0
    failures = []
    for q in iter_grid(max_n, max_d, min_n, min_d):
        _, classes = lattice_count_via_glue(q)
        for cls in classes:
            checked += 1
            if cls.beta != q.t or cls.gram.norm(cls.delta) != q.m2:
                failures.append({"n": q.n, "d": q.d, "t": q.t, "class": cls.to_dict()})
    return {"checked": checked, "counterexamples": failures}


def verify_level_agreement(max_n: int, max_d: int, min_n: int = 2, min_d: int = 1) -> dict:
    checked = 0
    failures = []
    for q in iter_grid(max_n, max_d, min_n, min_d):
        report = cross_check(q, LEVELS, strict=False)
        checked += 1
        if not report.agree:
            failures.append({"n": q.n, "d": q.d, "t": q.t, "counts": report.counts})
    return {"checked": checked, "counterexamples": failures}


def screen_query(q: ModuliQuery, min_count: int) -> tuple[ModuliQuery, int] | None:
    """Closed-form screen followed by a glue-count confirmation."""
    if closed_form_count(q) < min_count:
        return None
    confirmed, _ = glue_count(q)
    if confirmed != closed_form_count(q):
        logger.warning("closed form and glue count disagree for %s", q.as_tuple())
    return (q, confirmed) if confirmed >= min_count else None


def sort_hits(hits: Iterable[tuple[ModuliQuery, int] | None]) -> list[tuple[ModuliQuery, int]]:
    return sorted((h for h in hits if h is not None), key=lambda item: (-item[1], item[0].as_tuple()))


def search_disconnected(
    max_n: int, max_d: int, min_count: int = 2, min_n: int = 2, min_d: int = 1
) -> list[tuple[ModuliQuery, int]]:
    """Queries with at least ``min_count`` classes.

    The grid is screened with the closed form and each hit is confirmed by
    counting glue classes; the confirmed count is reported. Sorted by count
    descending, then (n, d, t).
    """
    return sort_hits(screen_query(q, min_count) for q in iter_grid(max_n, max_d, min_n, min_d))
