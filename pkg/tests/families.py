"""Complexes and presentations shared by the test modules."""

import random
from itertools import combinations

from picard_tools.binoid import BinoidPresentation, Relation
from picard_tools.simplicial import SimplicialComplex

RP2_FACETS = [
    (1, 2, 4), (1, 2, 5), (1, 3, 5), (1, 3, 6), (1, 4, 6),
    (2, 3, 4), (2, 3, 6), (2, 5, 6), (3, 4, 5), (4, 5, 6),
]


def complex_of(*facets) -> SimplicialComplex:
    return SimplicialComplex.from_facets(facets)


def simplex(n: int) -> SimplicialComplex:
    return SimplicialComplex.simplex(range(1, n + 1))


def discrete(n: int) -> SimplicialComplex:
    return SimplicialComplex.from_facets([(v,) for v in range(1, n + 1)])


def star(n: int) -> SimplicialComplex:
    """Center 1 joined to the leaves 2..n."""
    return SimplicialComplex.from_facets([(1, v) for v in range(2, n + 1)])


def cycle(n: int) -> SimplicialComplex:
    return SimplicialComplex.from_facets([(v, v % n + 1) for v in range(1, n + 1)])


def path(n: int) -> SimplicialComplex:
    return SimplicialComplex.from_facets([(v, v + 1) for v in range(1, n)])


def complete_graph(n: int) -> SimplicialComplex:
    return SimplicialComplex.from_facets(combinations(range(1, n + 1), 2))


def random_complex(rng: random.Random, max_vertices: int = 7) -> SimplicialComplex:
    n = rng.randint(1, max_vertices)
    facets = [
        rng.sample(range(1, n + 1), rng.randint(1, min(n, 4)))
        for _ in range(rng.randint(1, 5))
    ]
    return SimplicialComplex.from_facets(facets)


def random_graph(rng: random.Random, max_vertices: int = 7) -> SimplicialComplex:
    n = rng.randint(2, max_vertices)
    pairs = list(combinations(range(1, n + 1), 2))
    edges = rng.sample(pairs, rng.randint(1, len(pairs)))
    return SimplicialComplex.from_facets(edges, vertices=range(1, n + 1))


def x_plus_y_equals(n: int) -> BinoidPresentation:
    """(x, y, z | x + y = n z)"""
    return BinoidPresentation(("x", "y", "z"), (Relation((1, 1, 0), (0, 0, n)),))


def x_plus_y_equals_z_plus_w() -> BinoidPresentation:
    return BinoidPresentation(("x", "y", "z", "w"), (Relation((1, 1, 0, 0), (0, 0, 1, 1)),))


def free(names) -> BinoidPresentation:
    return BinoidPresentation(tuple(names))


def random_binoid(rng: random.Random, max_generators: int = 5) -> BinoidPresentation:
    """Positive presentation with a few element relations and possibly some ∞-relations."""
    n = rng.randint(1, max_generators)

    def element() -> tuple[int, ...]:
        vector = [0] * n
        for i in rng.sample(range(n), rng.randint(1, min(n, 2))):
            vector[i] = rng.randint(1, 2)
        return tuple(vector)

    relations = []
    for _ in range(rng.randint(0, 3)):
        lhs = element()
        rhs = None if rng.random() < 0.3 else element()
        if lhs != rhs:
            relations.append(Relation(lhs, rhs))
    return BinoidPresentation(tuple(f"x{i}" for i in range(1, n + 1)), tuple(relations))


def random_pure_complex(rng: random.Random, dimension: int, max_vertices: int = 7) -> SimplicialComplex:
    n = rng.randint(dimension + 1, max_vertices)
    facets = [rng.sample(range(1, n + 1), dimension + 1) for _ in range(rng.randint(1, 4))]
    return SimplicialComplex.from_facets(facets)
