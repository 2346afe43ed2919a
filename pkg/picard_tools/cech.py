"""
Čech cohomology of the sheaf of units on punctured spectra.

Simplicial binoids split into one complex per vertex and have a closed
formula through links. General integral binoids are handled directly:
unit groups of the localizations on the minimal cover of Spec•, glued by
inclusion matrices. The Stanley-Reisner and monomial results combine the
combinatorial part with the symbolic K*-part.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

from tqdm import tqdm

from picard_tools.binoid import (
    BinoidPresentation,
    DifferenceGroup,
    check_positive,
    difference_group,
    face_presentation,
    from_simplicial,
    radical_complex,
)
from picard_tools.divisors import positive_grading
from picard_tools.errors import DegenerateLocalization, NotAGraph, VoidComplex
from picard_tools.exactalg import (
    CochainComplex,
    FinAbGroup,
    GroupExpr,
    IntMatrix,
    direct_sum,
    identity,
    image_basis,
    solve_integer,
    zeros,
)
from picard_tools.simplicial import (
    SimplicialComplex,
    as_face,
    cohomology,
    cohomology_with_coefficients,
    crosscut,
    faces,
    link,
)
from picard_tools.spectrum import (
    SpecPoset,
    compute_spec,
    height_locus,
    minimal_cover,
    nerve,
    open_subset,
    punctured,
)

DEFAULT_BOUND = 6
DEFAULT_SYMBOL = "K*"
NUM_THREADS = (os.cpu_count() - 2) if (os.cpu_count() - 2) > 0 else 1


@dataclass(frozen=True, eq=False)
class CechComplex:
    """
    Degree k is free on labels[k], one label (index face, coordinate) per
    basis element; differentials[k] maps degree k to degree k + 1.
    """

    labels: tuple[tuple, ...]
    differentials: tuple[IntMatrix, ...]

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.labels)

    def cochain_complex(self) -> CochainComplex:
        return CochainComplex(start=0, ranks=self.ranks, differentials=self.differentials)

    def cohomology(self) -> list[FinAbGroup]:
        return self.cochain_complex().cohomology()

    def to_dict(self) -> dict:
        return {
            "ranks": list(self.ranks),
            "differentials": [m.tolist() for m in self.differentials],
        }


def _coordinate_inclusion(target: tuple, source: tuple) -> IntMatrix:
    matrix = zeros(len(target), len(source))
    position = {c: i for i, c in enumerate(target)}
    for k, c in enumerate(source):
        matrix[position[c], k] = 1
    return matrix


def _assemble(index: SimplicialComplex, basis, inclusion) -> CechComplex:
    """
    Čech complex over the faces of `index`. The group on a face J is free on
    basis(J); inclusion(J, K) is the restriction from K = J minus its l-th
    index, entered with sign (-1)^l.
    """
    levels = [faces(index, d) for d in range(index.dimension + 1)]
    bases = {J: tuple(basis(J)) for level in levels for J in level}

    def offsets(level) -> tuple[dict, int]:
        found, total = {}, 0
        for J in level:
            found[J] = total
            total += len(bases[J])
        return found, total

    differentials = []
    for lower, upper in zip(levels, levels[1:]):
        column_at, width = offsets(lower)
        row_at, height = offsets(upper)
        matrix = zeros(height, width)
        for J in upper:
            for l in range(len(J)):
                K = J[:l] + J[l + 1:]
                block = inclusion(J, K)
                r, c = row_at[J], column_at[K]
                matrix[r:r + block.shape[0], c:c + block.shape[1]] += (-1) ** l * block
        differentials.append(matrix)

    labels = tuple(tuple((J, c) for J in level for c in bases[J]) for level in levels)
    return CechComplex(labels=labels, differentials=tuple(differentials))


########## simplicial binoids

def picard_complex_simplicial(delta: SimplicialComplex) -> CechComplex:
    """
    Čech complex of the units on the coordinate cover {D(x_v)} of Spec• M_Δ.
    The units on D(x_F) are Z^F, and restriction is inclusion of coordinates.
    """
    if delta.is_void or not delta.vertices:
        raise VoidComplex("the Čech complex needs a complex with at least one vertex")
    return _assemble(delta, lambda face: face, _coordinate_inclusion)


def local_picard_cech(delta: SimplicialComplex) -> list[FinAbGroup]:
    complex_ = picard_complex_simplicial(delta)
    logging.info(f"Čech-Picard complex has ranks {complex_.ranks}")
    return complex_.cohomology()


def local_picard_formula(delta: SimplicialComplex) -> list[FinAbGroup]:
    """H^j(Spec• M_Δ, O*) = sum over vertices v of reduced H^{j-1}(lk v), for j = 0..dim."""
    if delta.is_void:
        raise VoidComplex("the void complex has no punctured spectrum")

    def link_cohomology(vertex) -> list[FinAbGroup]:
        return cohomology(link(delta, (vertex,)), reduced=True)

    with ThreadPoolExecutor(max_workers=NUM_THREADS) as executor:
        per_vertex = list(executor.map(link_cohomology, delta.vertices))

    return [
        direct_sum(groups[j] for groups in per_vertex if j < len(groups))
        for j in range(delta.dimension + 1)
    ]


def graph_local_picard(delta: SimplicialComplex) -> list[FinAbGroup]:
    """Closed form for dim ≤ 1: H^0 = Z^{isolated}, H^1 = Z^{sum over the rest of (deg v - 1)}."""
    if delta.is_void:
        raise VoidComplex("the void complex has no punctured spectrum")
    if delta.dimension > 1:
        raise NotAGraph(f"complex of dimension {delta.dimension} is not a graph")

    edges = faces(delta, 1)
    degree = {v: sum(v in e for e in edges) for v in delta.vertices}
    isolated = sum(1 for d in degree.values() if d == 0)
    groups = [FinAbGroup.free(isolated)]
    if delta.dimension == 1:
        groups.append(FinAbGroup.free(sum(d - 1 for d in degree.values() if d)))
    return groups[: delta.dimension + 1]


def constant_cohomology(target, open_set=None) -> list[FinAbGroup]:
    """
    Cohomology with Z coefficients of a complex, or of an open subset of a
    spectrum (Spec• by default) through the nerve of its minimal cover.
    """
    if isinstance(target, SimplicialComplex):
        return cohomology(target)
    open_set = punctured(target) if open_set is None else open_set
    return cohomology(nerve(target, minimal_cover(target, open_set)))


def picard_complex_open(
    delta: SimplicialComplex, open_set, spec: SpecPoset | None = None
) -> CechComplex:
    """
    Čech complex of the units of M_Δ on an open subset U, built on its
    minimal cover {D(F_i)}. The nerve of that cover is the crosscut complex
    of the F_i, and the units on D(F_J) are Z^{F_J} for F_J the union of the
    faces over J.
    """
    binoid = from_simplicial(delta)
    spec = spec or compute_spec(binoid)
    cover = minimal_cover(spec, open_set)
    cover_faces = [tuple(binoid.generators[i] for i in support) for support in cover]
    index = crosscut(delta, cover_faces)

    def union(J) -> tuple:
        return as_face(v for j in J for v in cover_faces[j - 1])

    return _assemble(index, union, lambda J, K: _coordinate_inclusion(union(J), union(K)))


def pic_open_subset(
    delta: SimplicialComplex, open_set, spec: SpecPoset | None = None
) -> list[FinAbGroup]:
    """Cohomology of picard_complex_open; at least degrees 0 and 1 are returned."""
    groups = picard_complex_open(delta, open_set, spec).cohomology()
    return groups + [FinAbGroup.trivial()] * max(0, 2 - len(groups))


def class_group_simplicial(delta: SimplicialComplex) -> FinAbGroup:
    """Cl(M_Δ) = Pic(W) for W the primes of height at most one."""
    spec = compute_spec(from_simplicial(delta))
    return pic_open_subset(delta, height_locus(spec, 1), spec)[1]


class SplitCohomology(NamedTuple):
    units: GroupExpr
    combinatorial: FinAbGroup

    def to_dict(self) -> dict:
        return {"units": self.units.to_dict(), "combinatorial": self.combinatorial.to_dict()}

    def __str__(self) -> str:
        parts = [str(p) for p in self if not p.is_trivial]
        return " + ".join(parts) if parts else "0"


def stanley_reisner_cohomology(
    delta: SimplicialComplex, symbol: str = DEFAULT_SYMBOL
) -> list[SplitCohomology]:
    """H^j(Spec• K[Δ], O*) = H^j(Δ, K*) + sum over v of reduced H^{j-1}(lk v; Z)."""
    units = cohomology_with_coefficients(delta, symbol)
    return [
        SplitCohomology(u, c) for u, c in zip(units, local_picard_formula(delta))
    ]


########## general binoids

@dataclass(frozen=True, eq=False)
class UnitSubgroup:
    """The units of M_F, columns of `basis` in the coordinates of `ambient`."""

    support: tuple[int, ...]
    ambient: DifferenceGroup
    basis: IntMatrix
    generators: tuple[int, ...]
    complete: bool

    @property
    def rank(self) -> int:
        return self.basis.shape[1]


class MembershipOracle:
    """
    Decides whether an element of Γ lies in M. Sums of generators are
    searched in nondecreasing index order; a grading that is positive on
    every generator bounds the search.
    """

    def __init__(self, gamma: DifferenceGroup, grading):
        self.columns = [gamma.image(i) for i in range(gamma.images.shape[1])]
        self.grading = tuple(grading)
        self.degrees = [self._degree(c) for c in self.columns]
        self.memo: dict[tuple, bool] = {}

    def _degree(self, vector) -> int:
        return sum(a * b for a, b in zip(self.grading, vector))

    def contains(self, target, start: int = 0) -> bool:
        target = tuple(target)
        if not any(target):
            return True
        key = (target, start)
        if key not in self.memo:
            degree = self._degree(target)
            self.memo[key] = degree > 0 and any(
                self.contains(tuple(a - b for a, b in zip(target, self.columns[i])), i)
                for i in range(start, len(self.columns))
                if self.degrees[i] <= degree
            )
        return self.memo[key]


def units_of_localization(
    binoid: BinoidPresentation,
    gamma: DifferenceGroup | None,
    support,
    bound: int = DEFAULT_BOUND,
    spec: SpecPoset | None = None,
) -> UnitSubgroup:
    """
    Units of M_F for F = support.

    Generators in the largest prime of D(F) are not units. Every other
    generator x is certified a unit by some K ≤ bound with K·(sum of F) - x
    in M; the result is incomplete when a generator stays uncertified.
    Without a difference group (∞-relations present) the units are the
    difference group of the face M minus p, for p that largest prime.
    """
    spec = spec or compute_spec(binoid)
    support = tuple(sorted(support))
    region = open_subset(spec, support)
    if not region:
        raise DegenerateLocalization(
            f"{spec.support_text(support)} is empty, so the localization is the zero binoid"
        )
    largest = set().union(*(set(p) for p in region))
    candidates = tuple(i for i in range(binoid.rank) if i not in largest)

    if gamma is None:
        face = difference_group(face_presentation(binoid, candidates))
        return UnitSubgroup(support, face, identity(face.rank), candidates, True)

    oracle = MembershipOracle(gamma, positive_grading(gamma))
    total = [sum(gamma.image(f)[k] for f in support) for k in range(gamma.rank)]

    def certified(i: int) -> bool:
        if i in support:
            return True
        image = gamma.image(i)
        return any(
            oracle.contains(tuple(K * t - a for t, a in zip(total, image)))
            for K in range(1, bound + 1)
        )

    units = tuple(i for i in candidates if certified(i))
    complete = len(units) == len(candidates)
    if not complete:
        missing = ", ".join(binoid.names[i] for i in candidates if i not in units)
        logging.warning(
            f"{spec.support_text(support)}: {missing} not certified as units within bound {bound}"
        )
    basis = image_basis(gamma.images[:, list(units)]) if units else zeros(gamma.rank, 0)
    return UnitSubgroup(support, gamma, basis, units, complete)


@dataclass(frozen=True, eq=False)
class GeneralPicard:
    cohomology: list[FinAbGroup]
    complex: CechComplex
    cover: list[tuple[int, ...]]
    complete: bool

    @property
    def picard(self) -> FinAbGroup:
        return self.cohomology[1] if len(self.cohomology) > 1 else FinAbGroup.trivial()

    def to_dict(self) -> dict:
        return {
            "cohomology": [g.to_dict() for g in self.cohomology],
            "ranks": list(self.complex.ranks),
            "cover": [list(s) for s in self.cover],
            "complete": self.complete,
        }


def local_picard_general(
    binoid: BinoidPresentation,
    bound: int = DEFAULT_BOUND,
    open_set=None,
    spec: SpecPoset | None = None,
) -> GeneralPicard:
    """
    Čech cohomology of the units on the minimal cover of an open subset of
    Spec M (Spec• by default) for an integral, torsion-free, cancellative,
    positive binoid.
    """
    check_positive(binoid)
    gamma = difference_group(binoid)
    spec = spec or compute_spec(binoid)
    cover = minimal_cover(spec, punctured(spec) if open_set is None else open_set)
    index = nerve(spec, cover)

    support_of = {
        J: tuple(sorted(set().union(*(cover[j - 1] for j in J))))
        for J in index.all_faces
        if J
    }
    supports = sorted(set(support_of.values()), key=lambda s: (len(s), s))

    def units_at(support) -> UnitSubgroup:
        return units_of_localization(binoid, gamma, support, bound, spec)

    with ThreadPoolExecutor(max_workers=NUM_THREADS) as executor:
        found = list(
            tqdm(
                executor.map(units_at, supports),
                total=len(supports),
                desc="Computing unit groups",
                disable=None,
                leave=False,
            )
        )
    units = {u.support: u for u in found}

    def unit_basis(J) -> range:
        return range(units[support_of[J]].rank)

    def inclusion(J, K) -> IntMatrix:
        return solve_integer(units[support_of[J]].basis, units[support_of[K]].basis)

    complex_ = _assemble(index, unit_basis, inclusion)
    complete = all(u.complete for u in found)
    logging.info(f"Čech complex of {binoid} has ranks {complex_.ranks}")
    if not complete:
        logging.warning(f"Unit groups of {binoid} are incomplete at bound {bound}")

    return GeneralPicard(
        cohomology=complex_.cohomology(),
        complex=complex_,
        cover=cover,
        complete=complete,
    )


def pic_open_general(
    binoid: BinoidPresentation, height: int = 1, bound: int = DEFAULT_BOUND
) -> GeneralPicard:
    """
    Pic of the primes of height at most `height`. For height 1 this is Pic(W),
    the divisor class group of any integral binoid.
    """
    spec = compute_spec(binoid)
    return local_picard_general(binoid, bound, height_locus(spec, height), spec)


########## monomial quotients

@dataclass(frozen=True, eq=False)
class MonomialReport:
    binoid: BinoidPresentation
    radical: SimplicialComplex
    is_radical: bool
    parts: list[SplitCohomology]
    nonvanishing_h1: bool
    higher_cech_vanish: bool
    unipotent_part: str
    uncounted: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "radical": self.radical.to_dict(),
            "is_radical": self.is_radical,
            "parts": [p.to_dict() for p in self.parts],
            "nonvanishing_h1": self.nonvanishing_h1,
            "higher_cech_vanish": self.higher_cech_vanish,
            "unipotent_part": self.unipotent_part,
            "uncounted": list(self.uncounted),
        }


def _is_radical(binoid: BinoidPresentation) -> bool:
    """The ideal is radical iff each squarefree part of a generator lies in it."""
    monomials = [r.lhs for r in binoid.relations]
    for monomial in monomials:
        reduced = [min(a, 1) for a in monomial]
        if not any(all(a <= b for a, b in zip(m, reduced)) for m in monomials):
            return False
    return True


def monomial_report(
    binoid: BinoidPresentation, symbol: str = DEFAULT_SYMBOL
) -> MonomialReport:
    """
    Pic^loc of K[x]/I splits into the Stanley-Reisner part of the radical
    and a unipotent part 1 + N, which is not computed. A nonzero H^1 of the
    radical forces Pic^loc of the quotient to be nonzero.
    """
    radical = radical_complex(binoid)
    is_radical = _is_radical(binoid)
    parts = stanley_reisner_cohomology(radical, symbol)

    nonvanishing = len(parts) > 1 and (
        parts[1].units.free_power > 0 or not parts[1].combinatorial.is_trivial
    )
    # K*/dK* and K*[b] vanish for some fields, so they never decide the verdict
    uncounted = ()
    if len(parts) > 1:
        units = parts[1].units
        uncounted = tuple(f"{symbol}/{d}{symbol}" for d in units.cotorsion) + tuple(
            f"{symbol}[{b}]" for b in units.torsion_sub
        )
    low_dimensional = radical.dimension <= 0
    return MonomialReport(
        binoid=binoid,
        radical=radical,
        is_radical=is_radical,
        parts=parts,
        nonvanishing_h1=nonvanishing,
        higher_cech_vanish=low_dimensional,
        unipotent_part="trivial" if is_radical or low_dimensional else "not computed",
        uncounted=uncounted,
    )
