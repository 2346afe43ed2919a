"""
The Zariski spectrum of a binoid presentation as a finite poset.

Every prime ideal is generated by a subset of the generators, so a prime is
stored as the sorted tuple of its generator indices; () is <∞>. Open sets
are frozensets of primes.
"""

import logging
from dataclasses import dataclass
from functools import cached_property, reduce
from itertools import combinations
from operator import or_

from tqdm import tqdm

from picard_tools.binoid import BinoidPresentation, check_positive
from picard_tools.errors import NotInSpec, NotOpen
from picard_tools.simplicial import SimplicialComplex, index_complex

Prime = tuple[int, ...]


def is_prime(binoid: BinoidPresentation, indices) -> bool:
    """
    The ideal generated by `indices` is prime iff it meets the left side of
    every element relation exactly when it meets the right side, and meets
    the support of every ∞-relation.
    """
    chosen = set(indices)
    for relation in binoid.relations:
        hits_lhs = bool(chosen & relation.support)
        if relation.is_infinite:
            if not hits_lhs:
                return False
        elif hits_lhs != bool(chosen & relation.rhs_support):
            return False
    return True


def _mask(prime) -> int:
    return sum(1 << i for i in prime)


def _bits(mask: int) -> list[int]:
    return [1 << i for i in range(mask.bit_length()) if mask >> i & 1]


@dataclass(frozen=True, eq=False)
class SpecPoset:
    binoid: BinoidPresentation
    primes: tuple[Prime, ...]

    @property
    def top(self) -> Prime:
        return tuple(range(self.binoid.rank))

    @property
    def is_integral(self) -> bool:
        return () in self.primes

    def __contains__(self, prime) -> bool:
        return tuple(sorted(prime)) in self._members

    def __len__(self) -> int:
        return len(self.primes)

    @cached_property
    def _members(self) -> dict[Prime, int]:
        return {p: k for k, p in enumerate(self.primes)}

    def below(self, prime: Prime) -> list[Prime]:
        """The largest primes inside `prime` minus one generator; every smaller prime lies under one."""
        return [self.primes[k] for k in sorted(self._lower_candidates[self._members[prime]])]

    @cached_property
    def _lower_candidates(self) -> list[frozenset[int]]:
        """
        For each prime p, the indices of the largest primes inside p minus one
        generator. Unions of primes are prime, so the primes contained in any
        set have a largest member; every prime strictly below p lies in one of
        these, and every lower cover of p is one of them.
        """
        index = {_mask(p): k for k, p in enumerate(self.primes)}
        memo: dict[int, int | None] = {}

        def largest_inside(mask: int) -> int | None:
            if mask in index:
                return mask
            if mask not in memo:
                inner = [largest_inside(mask ^ bit) for bit in _bits(mask)]
                found = [m for m in inner if m is not None]
                memo[mask] = reduce(or_, found) if found else None
            return memo[mask]

        candidates = []
        for p in self.primes:
            mask = _mask(p)
            inner = (largest_inside(mask ^ bit) for bit in _bits(mask))
            candidates.append(frozenset(index[m] for m in inner if m is not None))
        return candidates

    @cached_property
    def heights(self) -> dict[Prime, int]:
        # primes are sorted by size, so everything below p is done before p
        levels: list[int] = []
        for below in self._lower_candidates:
            levels.append(max((levels[k] + 1 for k in below), default=0))
        return dict(zip(self.primes, levels))

    @cached_property
    def covers(self) -> list[tuple[int, int]]:
        """Index pairs (i, j) with primes[i] ⊊ primes[j] and nothing strictly between."""
        masks = [_mask(p) for p in self.primes]
        edges = []
        for j, below in enumerate(self._lower_candidates):
            for i in below:
                if not any(k != i and masks[i] & masks[k] == masks[i] for k in below):
                    edges.append((i, j))
        return sorted(edges)

    def prime_text(self, prime: Prime) -> str:
        if not prime:
            return "<inf>"
        names = self.binoid.names
        return "<" + ",".join(names[i] for i in prime) + ">"

    def support_text(self, support) -> str:
        names = self.binoid.names
        return "D(" + " + ".join(names[i] for i in sorted(support)) + ")" if support else "D(0)"

    def to_dict(self) -> dict:
        names = self.binoid.names
        return {
            "generators": names,
            "primes": [[names[i] for i in p] for p in self.primes],
            "heights": [self.heights[p] for p in self.primes],
            "covers": [list(edge) for edge in self.covers],
        }


def _prime_key(prime: Prime) -> tuple:
    return (len(prime), prime)


def compute_spec(binoid: BinoidPresentation) -> SpecPoset:
    """Enumerate generator subsets by cardinality and keep the primes."""
    check_positive(binoid)
    n = binoid.rank
    found: list[Prime] = []

    for size in tqdm(range(n + 1), desc="Enumerating primes", disable=None, leave=False):
        found.extend(c for c in combinations(range(n), size) if is_prime(binoid, c))

    logging.info(f"Spectrum of {binoid} has {len(found)} primes")
    return SpecPoset(binoid, tuple(sorted(found, key=_prime_key)))


def _checked(spec: SpecPoset, prime) -> Prime:
    prime = tuple(sorted(prime))
    if prime not in spec:
        raise NotInSpec(f"{spec.prime_text(prime)} is not a prime of {spec.binoid}")
    return prime


def height(spec: SpecPoset, prime) -> int:
    return spec.heights[_checked(spec, prime)]


def minimal_neighborhood(spec: SpecPoset, prime) -> tuple[int, ...]:
    """Support F with D(F) the smallest open set containing `prime`."""
    prime = _checked(spec, prime)
    return tuple(i for i in range(spec.binoid.rank) if i not in prime)


def open_subset(spec: SpecPoset, support) -> frozenset:
    """D(f) for any f whose support is `support`: the primes avoiding it."""
    support = set(support)
    return frozenset(p for p in spec.primes if not support & set(p))


def punctured(spec: SpecPoset) -> frozenset:
    return frozenset(spec.primes) - {spec.top}


def height_locus(spec: SpecPoset, bound: int) -> frozenset:
    """Primes of height at most `bound`; W for bound 1."""
    return frozenset(p for p in spec.primes if spec.heights[p] <= bound)


def check_open(spec: SpecPoset, open_set) -> frozenset:
    open_set = frozenset(tuple(sorted(p)) for p in open_set)
    for p in open_set:
        _checked(spec, p)
    # a set closed under the largest primes below each member is closed downward
    for p in open_set:
        for q in spec.below(p):
            if q not in open_set:
                raise NotOpen(
                    f"{spec.prime_text(p)} is in the set but {spec.prime_text(q)} is not"
                )
    return open_set


def maximal_primes(open_set) -> list[Prime]:
    masks = {p: _mask(p) for p in open_set}
    return sorted(
        p for p, m in masks.items() if not any(o != m and o & m == m for o in masks.values())
    )


def minimal_cover(spec: SpecPoset, open_set) -> list[tuple[int, ...]]:
    """
    One support per maximal prime of the open set, ordered by the maximal
    primes as sorted index tuples.
    """
    open_set = check_open(spec, open_set)
    cover = [minimal_neighborhood(spec, p) for p in maximal_primes(open_set)]
    logging.debug(f"Minimal cover: {', '.join(spec.support_text(s) for s in cover)}")
    return cover


def nerve(spec: SpecPoset, cover, labels=None) -> SimplicialComplex:
    """D(F) ∩ D(G) = D(F ∪ G), so J is a face iff D of the union over J is nonempty."""
    cover = [set(s) for s in cover]

    def meets(indices: tuple) -> bool:
        merged = set().union(*(cover[k] for k in indices))
        return bool(open_subset(spec, merged))

    return index_complex(len(cover), meets, labels)


def connected_components(spec: SpecPoset, open_set) -> int:
    open_set = sorted(check_open(spec, open_set))
    parent = list(range(len(open_set)))

    def root(k: int) -> int:
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for i, j in combinations(range(len(open_set)), 2):
        p, q = set(open_set[i]), set(open_set[j])
        if p <= q or q <= p:
            parent[root(i)] = root(j)

    return len({root(k) for k in range(len(open_set))})


def to_dot(spec: SpecPoset) -> str:
    """Hasse diagram, bottom to top, one node per prime in enumeration order."""
    lines = ["digraph spec {", "  rankdir=BT;"]
    for k, prime in enumerate(spec.primes):
        lines.append(f'  p{k} [label="{spec.prime_text(prime)}"];')
    for i, j in spec.covers:
        lines.append(f"  p{i} -> p{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
