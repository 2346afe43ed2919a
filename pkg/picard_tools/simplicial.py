"""
Abstract simplicial complexes: faces, links, restrictions, crosscut
complexes and simplicial cohomology.

A complex is stored by its facets. The void complex has no faces at all;
the empty complex {∅} has exactly one face. Isolated vertices are
singleton facets.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from picard_tools.errors import NotAFace, UnknownVertex, VoidComplex
from picard_tools.exactalg import (
    CochainComplex,
    FinAbGroup,
    GroupExpr,
    coefficient_cohomology,
    zeros,
)

Label = int | str
Face = tuple


def label_key(label: Label) -> tuple:
    return (0, label) if isinstance(label, int) else (1, str(label))


def face_key(face: Face) -> tuple:
    return tuple(label_key(v) for v in face)


def as_face(vertices) -> Face:
    return tuple(sorted(set(vertices), key=label_key))


def face_text(face: Face) -> str:
    if not face:
        return "∅"
    return "{" + ",".join(str(v) for v in face) + "}"


@dataclass(frozen=True)
class SimplicialComplex:
    facets: frozenset

    @classmethod
    def from_facets(cls, facets, vertices=()) -> "SimplicialComplex":
        """
        Normalize to pairwise incomparable facets.
        Declared vertices that lie in no facet become isolated vertices.
        """
        candidates = {as_face(f) for f in facets}
        covered = {v for f in candidates for v in f}
        candidates |= {(v,) for v in vertices if v not in covered}
        maximal = {
            f for f in candidates if not any(set(f) < set(g) for g in candidates)
        }
        return cls(frozenset(maximal))

    @classmethod
    def void(cls) -> "SimplicialComplex":
        return cls(frozenset())

    @classmethod
    def empty(cls) -> "SimplicialComplex":
        return cls(frozenset({()}))

    @classmethod
    def simplex(cls, vertices) -> "SimplicialComplex":
        return cls.from_facets([vertices])

    @property
    def is_void(self) -> bool:
        return not self.facets

    @cached_property
    def vertices(self) -> tuple:
        return as_face(v for f in self.facets for v in f)

    @property
    def dimension(self) -> int:
        """-1 for both {∅} and the void complex."""
        return max((len(f) for f in self.facets), default=0) - 1

    @cached_property
    def sorted_facets(self) -> list[Face]:
        return sorted(self.facets, key=face_key)

    @cached_property
    def all_faces(self) -> frozenset:
        found = set()
        for facet in self.facets:
            for size in range(len(facet) + 1):
                found.update(combinations(facet, size))
        return frozenset(found)

    @cached_property
    def faces_by_dimension(self) -> dict[int, list[Face]]:
        grouped: dict[int, list[Face]] = {}
        for face in self.all_faces:
            grouped.setdefault(len(face) - 1, []).append(face)
        return {d: sorted(fs, key=face_key) for d, fs in sorted(grouped.items())}

    def __contains__(self, face) -> bool:
        return as_face(face) in self.all_faces

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "facets": [list(f) for f in self.sorted_facets],
        }

    def __str__(self) -> str:
        if self.is_void:
            return "void"
        return " ".join(face_text(f) for f in self.sorted_facets)


def faces(delta: SimplicialComplex, dimension: int) -> list[Face]:
    return list(delta.faces_by_dimension.get(dimension, []))


def index_complex(size: int, admits, labels=None) -> SimplicialComplex:
    """
    Complex on `size` indices whose faces are the index sets accepted by
    `admits`, which must be closed under taking subsets. Faces are relabeled
    with `labels` (1..size by default).
    """
    labels = list(labels) if labels is not None else list(range(1, size + 1))
    if len(labels) != size:
        raise ValueError(f"expected {size} labels, got {len(labels)}")

    found = [()]

    def grow(indices: tuple) -> None:
        first = indices[-1] + 1 if indices else 0
        for k in range(first, size):
            candidate = indices + (k,)
            if admits(candidate):
                found.append(candidate)
                grow(candidate)

    grow(())
    return SimplicialComplex.from_facets([[labels[k] for k in f] for f in found])


def link(delta: SimplicialComplex, face) -> SimplicialComplex:
    face = as_face(face)
    if face not in delta.all_faces:
        raise NotAFace(f"{face_text(face)} is not a face of the complex")
    rest = [
        tuple(v for v in facet if v not in face)
        for facet in delta.facets
        if set(face) <= set(facet)
    ]
    return SimplicialComplex.from_facets(rest)


def restriction(delta: SimplicialComplex, vertices) -> SimplicialComplex:
    keep = set(vertices)
    unknown = keep - set(delta.vertices)
    if unknown:
        raise UnknownVertex(f"{face_text(as_face(unknown))} not among the vertices")
    if delta.is_void:
        return delta
    return SimplicialComplex.from_facets(
        [tuple(v for v in facet if v in keep) for facet in delta.facets]
    )


def crosscut(delta: SimplicialComplex, listed, labels=None) -> SimplicialComplex:
    """Index sets J are faces iff the union of the listed faces over J lies in delta."""
    listed = [as_face(f) for f in listed]
    for f in listed:
        if f not in delta.all_faces:
            raise NotAFace(f"{face_text(f)} is not a face of the complex")

    def union_is_face(indices: tuple) -> bool:
        return as_face(v for k in indices for v in listed[k]) in delta.all_faces

    return index_complex(len(listed), union_is_face, labels)


def minimal_nonfaces(delta: SimplicialComplex) -> list[Face]:
    found = set()
    for face in delta.all_faces:
        for v in delta.vertices:
            if v in face:
                continue
            candidate = as_face(face + (v,))
            if candidate in delta.all_faces or candidate in found:
                continue
            boundary = (candidate[:l] + candidate[l + 1:] for l in range(len(candidate)))
            if all(b in delta.all_faces for b in boundary):
                found.add(candidate)
    return sorted(found, key=lambda f: (len(f), face_key(f)))


def connected_components(delta: SimplicialComplex) -> int:
    parent = {v: v for v in delta.vertices}

    def root(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for facet in delta.facets:
        for v in facet[1:]:
            parent[root(v)] = root(facet[0])

    return len({root(v) for v in delta.vertices})


########## cohomology

def cochain_complex(delta: SimplicialComplex, reduced: bool = False) -> CochainComplex:
    """
    Simplicial cochains with Z coefficients, one basis element per face in
    lexicographic order. Omitting the vertex in sorted position l carries
    the sign (-1)^l. The reduced complex starts with C^{-1} = Z spanned by ∅.
    """
    if delta.is_void:
        raise VoidComplex("the void complex has no cochain complex")

    start = -1 if reduced else 0
    bases = [faces(delta, d) for d in range(start, delta.dimension + 1)]
    differentials = []
    for lower, upper in zip(bases, bases[1:]):
        position = {face: k for k, face in enumerate(lower)}
        matrix = zeros(len(upper), len(lower))
        for row, face in enumerate(upper):
            for l in range(len(face)):
                matrix[row, position[face[:l] + face[l + 1:]]] += (-1) ** l
        differentials.append(matrix)

    return CochainComplex(
        start=start,
        ranks=tuple(len(b) for b in bases),
        differentials=tuple(differentials),
    )


def cohomology(delta: SimplicialComplex, reduced: bool = False) -> list[FinAbGroup]:
    """H^j for j = 0..dim, or reduced H^j for j = -1..dim (first entry is degree -1)."""
    return cochain_complex(delta, reduced).cohomology()


def cohomology_with_coefficients(
    delta: SimplicialComplex, symbol: str, reduced: bool = False
) -> list[GroupExpr]:
    groups = cohomology(delta, reduced)
    following = groups[1:] + [FinAbGroup.trivial()]
    return [
        coefficient_cohomology(here, after, symbol)
        for here, after in zip(groups, following)
    ]
