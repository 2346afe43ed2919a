"""
Weil divisors of integral, torsion-free, cancellative, positive binoids.

Height one primes correspond to the facets of the cone spanned by the
generator images in Γ. The valuation of a generator at a prime is the value
of the primitive inward facet normal on its image.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from math import gcd

from picard_tools.binoid import BinoidPresentation, DifferenceGroup, difference_group
from picard_tools.errors import FacetPrimeMismatch, NotFullDimensional, NotPointed
from picard_tools.exactalg import (
    FinAbGroup,
    IntMatrix,
    cokernel,
    int_matrix,
    kernel_basis,
    matrix_rank,
)
from picard_tools.spectrum import Prime, compute_spec

Normal = tuple[int, ...]


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def _primitive(vector) -> Normal:
    divisor = 0
    for a in vector:
        divisor = gcd(divisor, int(a))
    return tuple(int(a) // divisor for a in vector) if divisor > 1 else tuple(int(a) for a in vector)


def _columns(gamma: DifferenceGroup) -> list[tuple[int, ...]]:
    return [gamma.image(i) for i in range(gamma.images.shape[1])]


def cone_facets(gamma: DifferenceGroup) -> list[Normal]:
    """
    Primitive inward normals of the facets of the cone spanned by the
    generator images, sorted.

    Every (r-1)-subset of images with a one dimensional orthogonal
    complement gives a candidate hyperplane; it is a facet iff all images
    lie on one side of it.
    """
    r = gamma.rank
    columns = _columns(gamma)
    if r == 0 or matrix_rank(gamma.images) < r:
        raise NotFullDimensional(f"generator images do not span Γ ≅ Z^{r}")

    normals: set[Normal] = set()
    for subset in combinations(range(len(columns)), r - 1):
        block = int_matrix([columns[i] for i in subset], shape=(r - 1, r))
        kernel = kernel_basis(block)
        if kernel.shape[1] != 1:
            continue
        normal = _primitive(kernel[:, 0])
        values = [_dot(normal, c) for c in columns]
        if all(v >= 0 for v in values):
            normals.add(normal)
        elif all(v <= 0 for v in values):
            normals.add(tuple(-a for a in normal))

    grading = _grading_of(normals, r)
    if any(_dot(grading, c) <= 0 for c in columns):
        raise NotPointed("the cone of generator images contains a line")
    logging.debug(f"Cone in Z^{r} has {len(normals)} facets")
    return sorted(normals)


def _grading_of(normals, r: int) -> tuple[int, ...]:
    return tuple(sum(n[k] for n in normals) for k in range(r))


def positive_grading(gamma: DifferenceGroup) -> tuple[int, ...]:
    """A linear form on Γ that is strictly positive on every generator image."""
    return _grading_of(cone_facets(gamma), gamma.rank)


@dataclass(frozen=True, eq=False)
class ValuationMatrix:
    binoid: BinoidPresentation
    primes: tuple[Prime, ...]
    normals: tuple[Normal, ...]
    values: IntMatrix

    def to_dict(self) -> dict:
        names = self.binoid.names
        return {
            "generators": names,
            "primes": [[names[i] for i in p] for p in self.primes],
            "normals": [list(n) for n in self.normals],
            "values": [list(row) for row in self.values.tolist()],
        }


def valuation_matrix(binoid: BinoidPresentation) -> ValuationMatrix:
    """
    Rows follow the height one primes of the spectrum. A facet is matched
    to the prime generated by the generators it does not vanish on.
    """
    gamma = difference_group(binoid)
    spec = compute_spec(binoid)
    height_one = [p for p in spec.primes if spec.heights[p] == 1]

    by_prime: dict[Prime, tuple[Normal, list[int]]] = {}
    for normal in cone_facets(gamma):
        values = [_dot(normal, c) for c in _columns(gamma)]
        prime = tuple(i for i, v in enumerate(values) if v > 0)
        if prime not in height_one or prime in by_prime:
            raise FacetPrimeMismatch(
                f"facet {normal} does not match a height one prime of {binoid}"
            )
        by_prime[prime] = (normal, values)

    missing = [p for p in height_one if p not in by_prime]
    if missing:
        raise FacetPrimeMismatch(
            f"{spec.prime_text(missing[0])} has height one but no facet"
        )

    return ValuationMatrix(
        binoid=binoid,
        primes=tuple(height_one),
        normals=tuple(by_prime[p][0] for p in height_one),
        values=int_matrix([by_prime[p][1] for p in height_one], shape=(len(height_one), binoid.rank)),
    )


def class_group(binoid: BinoidPresentation) -> FinAbGroup:
    """
    Cl(M) as the cokernel of the valuation map Γ -> Z^{height one primes}.
    The generators span Γ, so this is the cokernel of the valuation matrix.
    Meaningful as Cl(M) for normal binoids only; normality is not checked.
    """
    return cokernel(valuation_matrix(binoid).values)


@dataclass(frozen=True)
class RegularityVerdict:
    certified: bool
    evidence: tuple[str, ...]

    @property
    def label(self) -> str:
        return "certified" if self.certified else "unknown"

    def to_dict(self) -> dict:
        return {"verdict": self.label, "evidence": list(self.evidence)}


def regular_in_codim1_check(binoid: BinoidPresentation) -> RegularityVerdict:
    """
    Sufficient test that every localization at a height one prime is regular:
    some generator has valuation 1 there, and the
    generators of valuation 0 span a corank one sublattice of Γ.
    Failing the test proves nothing.
    """
    matrix = valuation_matrix(binoid)
    gamma = difference_group(binoid)
    names = binoid.names
    n = binoid.rank

    evidence, certified = [], True
    for prime, row in zip(matrix.primes, matrix.values.tolist()):
        label = "<" + ",".join(names[i] for i in prime) + ">"
        # valuations are nonnegative on M, so a sum of generators has value 1 only through a generator
        uniformizer = next((names[i] for i in range(n) if row[i] == 1), None)
        zero_columns = [i for i in range(n) if row[i] == 0]
        spanned = matrix_rank(gamma.images[:, zero_columns]) if zero_columns else 0

        if uniformizer is None:
            certified = False
            evidence.append(f"{label}: no element of valuation 1 found")
        elif spanned != gamma.rank - 1:
            certified = False
            evidence.append(f"{label}: valuation 0 generators span rank {spanned}")
        else:
            evidence.append(f"{label}: {uniformizer} has valuation 1")

    return RegularityVerdict(certified, tuple(evidence))
