"""
Finitely presented commutative binoids.

A presentation lists generators and relations between exponent vectors in
N^n; the right-hand side of a relation is either another vector or
INFINITY, the absorbing element.
"""

from dataclasses import dataclass

from picard_tools.errors import (
    InvalidPresentation,
    NotIntegral,
    NotMonomialPresentation,
    NotPositive,
    NotSimplicialPresentation,
    TorsionError,
    VoidComplex,
)
from picard_tools.exactalg import IntMatrix, int_matrix, matmul, smith_normal_form
from picard_tools.simplicial import (
    SimplicialComplex,
    index_complex,
    minimal_nonfaces,
)

INFINITY = None


@dataclass(frozen=True)
class Relation:
    lhs: tuple[int, ...]
    rhs: tuple[int, ...] | None = INFINITY

    @property
    def is_infinite(self) -> bool:
        return self.rhs is INFINITY

    @property
    def support(self) -> frozenset[int]:
        return support(self.lhs)

    @property
    def rhs_support(self) -> frozenset[int]:
        return frozenset() if self.is_infinite else support(self.rhs)


def support(vector) -> frozenset[int]:
    return frozenset(i for i, a in enumerate(vector) if a)


def generator_name(label) -> str:
    return f"x{label}" if isinstance(label, int) else str(label)


@dataclass(frozen=True)
class BinoidPresentation:
    generators: tuple
    relations: tuple[Relation, ...] = ()

    def __post_init__(self):
        n = len(self.generators)
        if len(set(self.generators)) != n:
            raise InvalidPresentation(f"repeated generator in {self.generators}")
        for relation in self.relations:
            sides = [relation.lhs] if relation.is_infinite else [relation.lhs, relation.rhs]
            for side in sides:
                if len(side) != n:
                    raise InvalidPresentation(
                        f"relation {side} has {len(side)} exponents for {n} generators"
                    )
                if any(a < 0 for a in side):
                    raise InvalidPresentation(f"negative exponent in relation {side}")
            if relation.lhs == relation.rhs:
                raise InvalidPresentation(f"relation {self.element_text(relation.lhs)} is trivial")

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def names(self) -> list[str]:
        return [generator_name(g) for g in self.generators]

    @property
    def element_relations(self) -> list[Relation]:
        return [r for r in self.relations if not r.is_infinite]

    @property
    def infinite_relations(self) -> list[Relation]:
        return [r for r in self.relations if r.is_infinite]

    def element_text(self, vector) -> str:
        if vector is INFINITY:
            return "inf"
        terms = []
        for name, a in zip(self.names, vector):
            if a == 1:
                terms.append(name)
            elif a:
                terms.append(f"{a} {name}")
        return " + ".join(terms) if terms else "0"

    def relation_text(self, relation: Relation) -> str:
        return f"{self.element_text(relation.lhs)} = {self.element_text(relation.rhs)}"

    def to_dict(self) -> dict:
        return {
            "generators": self.names,
            "relations": [
                {"lhs": list(r.lhs), "rhs": None if r.is_infinite else list(r.rhs)}
                for r in self.relations
            ],
        }

    def __str__(self) -> str:
        relations = ", ".join(self.relation_text(r) for r in self.relations)
        generators = ", ".join(self.names)
        return f"({generators} | {relations})" if relations else f"({generators})"


def free_binoid(generators) -> BinoidPresentation:
    """Free binoid N^n ∪ {∞}; an integer n means generators 1..n."""
    if isinstance(generators, int):
        generators = range(1, generators + 1)
    return BinoidPresentation(tuple(generators))


def check_positive(binoid: BinoidPresentation) -> None:
    if binoid.rank == 0:
        raise NotPositive("a binoid with no generators has no maximal ideal M_+")
    for relation in binoid.relations:
        if not any(relation.lhs) or (not relation.is_infinite and not any(relation.rhs)):
            raise NotPositive(
                f"relation {binoid.relation_text(relation)} makes a generator a unit"
            )


def _indicator(indices, n: int) -> tuple[int, ...]:
    return tuple(int(i in indices) for i in range(n))


def from_simplicial(delta: SimplicialComplex) -> BinoidPresentation:
    """One generator per vertex and one ∞-relation per minimal non-face."""
    if delta.is_void or not delta.vertices:
        raise VoidComplex("a simplicial binoid needs a complex with at least one vertex")
    vertices = delta.vertices
    position = {v: i for i, v in enumerate(vertices)}
    relations = tuple(
        Relation(_indicator({position[v] for v in nonface}, len(vertices)))
        for nonface in minimal_nonfaces(delta)
    )
    return BinoidPresentation(tuple(vertices), relations)


def _complex_of_supports(binoid: BinoidPresentation, supports) -> SimplicialComplex:
    supports = list(supports)
    if any(not s for s in supports):
        return SimplicialComplex.void()

    def avoids_supports(indices: tuple) -> bool:
        chosen = set(indices)
        return not any(s <= chosen for s in supports)

    return index_complex(binoid.rank, avoids_supports, labels=binoid.generators)


def as_simplicial(binoid: BinoidPresentation) -> SimplicialComplex:
    for relation in binoid.relations:
        if not relation.is_infinite:
            raise NotSimplicialPresentation(
                f"{binoid.relation_text(relation)} is not of the form monomial = inf"
            )
        if any(a > 1 for a in relation.lhs):
            raise NotSimplicialPresentation(
                f"{binoid.relation_text(relation)} is not squarefree"
            )
    return _complex_of_supports(binoid, (r.support for r in binoid.relations))


def check_monomial(binoid: BinoidPresentation) -> None:
    for relation in binoid.relations:
        if not relation.is_infinite:
            raise NotMonomialPresentation(
                f"{binoid.relation_text(relation)} is not of the form monomial = inf"
            )


def squarefree(binoid: BinoidPresentation) -> BinoidPresentation:
    """The presentation of the radical: every exponent lowered to 0 or 1."""
    check_monomial(binoid)
    relations = []
    for relation in binoid.relations:
        reduced = Relation(tuple(min(a, 1) for a in relation.lhs))
        if reduced not in relations:
            relations.append(reduced)
    return BinoidPresentation(binoid.generators, tuple(relations))


def radical_complex(binoid: BinoidPresentation) -> SimplicialComplex:
    return as_simplicial(squarefree(binoid))


def face_presentation(binoid: BinoidPresentation, indices) -> BinoidPresentation:
    """
    Submonoid generated by the chosen generators, keeping the relations
    supported on them. When the chosen generators are the complement of a
    prime this is the face M minus p.
    """
    keep = sorted(set(indices))
    outside = set(range(binoid.rank)) - set(keep)
    relations = tuple(
        Relation(
            tuple(r.lhs[i] for i in keep),
            INFINITY if r.is_infinite else tuple(r.rhs[i] for i in keep),
        )
        for r in binoid.relations
        if not (r.support | r.rhs_support) & outside
    )
    return BinoidPresentation(tuple(binoid.generators[i] for i in keep), relations)


def _fresh_names(taken, count: int) -> list[str]:
    names, index = [], 0 if count == 1 else 1
    while len(names) < count:
        name = "t" if index == 0 else f"t{index}"
        if name not in taken:
            names.append(name)
        index += 1
    return names


def smash_free(binoid: BinoidPresentation, count: int) -> BinoidPresentation:
    """M ∧ (N^count)^∞: new free generators t (or t1..tk) and no new relations."""
    if count == 0:
        return binoid
    taken = set(binoid.generators) | set(binoid.names)
    padding = (0,) * count
    relations = tuple(
        Relation(r.lhs + padding, INFINITY if r.is_infinite else r.rhs + padding)
        for r in binoid.relations
    )
    return BinoidPresentation(
        binoid.generators + tuple(_fresh_names(taken, count)), relations
    )


########## difference group

@dataclass(frozen=True, eq=False)
class DifferenceGroup:
    """
    Γ ≅ Z^rank. Column i of `images` is the image of generator i;
    `relation_lattice` has one row lhs - rhs per element relation.
    """

    rank: int
    images: IntMatrix
    relation_lattice: IntMatrix

    def coordinates(self, vector) -> tuple[int, ...]:
        column = int_matrix([[a] for a in vector], shape=(len(vector), 1))
        return tuple(matmul(self.images, column)[:, 0])

    def image(self, generator: int) -> tuple[int, ...]:
        return tuple(self.images[:, generator])


def relation_lattice(binoid: BinoidPresentation) -> IntMatrix:
    rows = [
        [a - b for a, b in zip(r.lhs, r.rhs)] for r in binoid.element_relations
    ]
    return int_matrix(rows, shape=(len(rows), binoid.rank))


def difference_group(binoid: BinoidPresentation) -> DifferenceGroup:
    """
    Γ = Z^n / (row span of the relation lattice), with coordinates taken from
    the trailing columns of the Smith column transform.
    """
    if binoid.infinite_relations:
        raise NotIntegral(
            f"{binoid.relation_text(binoid.infinite_relations[0])} makes the binoid non-integral"
        )
    lattice = relation_lattice(binoid)
    decomposition = smith_normal_form(lattice)
    torsion = [d for d in decomposition.diagonal if d > 1]
    if torsion:
        raise TorsionError(f"the difference group has torsion of orders {torsion}")
    k = decomposition.rank
    images = decomposition.V[:, k:].T.copy()
    return DifferenceGroup(
        rank=binoid.rank - k,
        images=images,
        relation_lattice=lattice,
    )
