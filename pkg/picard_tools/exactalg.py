"""
Exact integer linear algebra.

Matrices are numpy arrays of dtype=object holding Python ints, so entries
never overflow and nothing is rounded. Everything here is a pure function
on values the caller owns.
"""

from dataclasses import dataclass
from math import gcd

import numpy as np

from picard_tools.errors import CompositionNonzero, NoIntegerSolution

IntMatrix = np.ndarray


def zeros(rows: int, cols: int) -> IntMatrix:
    return np.zeros((rows, cols), dtype=object)


def identity(size: int) -> IntMatrix:
    matrix = zeros(size, size)
    for i in range(size):
        matrix[i, i] = 1
    return matrix


def int_matrix(entries=(), shape: tuple[int, int] | None = None) -> IntMatrix:
    """
    Build an exact integer matrix from nested rows.
    `shape` is needed to keep the column count of an empty matrix.
    """
    if isinstance(entries, np.ndarray):
        matrix = np.empty(entries.shape, dtype=object)
        for index, value in np.ndenumerate(entries):
            matrix[index] = int(value)
        return matrix

    rows = [[int(x) for x in row] for row in entries]
    if not rows or not rows[0]:
        if shape is None:
            shape = (len(rows), 0)
        if shape[0] * shape[1] and rows:
            raise ValueError(f"entries do not fill a {shape[0]}x{shape[1]} matrix")
        return zeros(*shape)

    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise ValueError("rows of an integer matrix must have equal length")
    if shape is not None and shape != (len(rows), width):
        raise ValueError(f"entries have shape {(len(rows), width)}, expected {shape}")

    matrix = zeros(len(rows), width)
    for i, row in enumerate(rows):
        for j, value in enumerate(row):
            matrix[i, j] = value
    return matrix


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    if 0 in (a.shape[0], a.shape[1], b.shape[1]):
        return zeros(a.shape[0], b.shape[1])
    return a.dot(b)


def is_zero(matrix: IntMatrix) -> bool:
    return all(x == 0 for x in matrix.flat)


########## Smith normal form

@dataclass(frozen=True, eq=False)
class SmithDecomposition:
    """U·A·V = S with U, V unimodular and S diagonal in invariant-factor order."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.S[i, i] for i in range(min(self.S.shape)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _smallest_entry(s: list[list[int]], cells) -> tuple[int, int] | None:
    best = None
    for i, j in cells:
        value = s[i][j]
        if value and (best is None or abs(value) < best[0]):
            best = (abs(value), i, j)
    return None if best is None else (best[1], best[2])


def smith_normal_form(matrix: IntMatrix) -> SmithDecomposition:
    """
    Smith normal form with transforms, by smallest-pivot elimination.

    Pivots are chosen by smallest absolute value in the remaining block and
    moved to the diagonal by row and column swaps; a pivot that does not
    divide the rest of the block absorbs the offending row and is reduced
    again, which keeps the diagonal a divisibility chain.
    """
    m, n = matrix.shape
    s = [[int(x) for x in row] for row in matrix.tolist()]
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i: int, k: int) -> None:
        s[i], s[k] = s[k], s[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j: int, k: int) -> None:
        for rows in (s, v):
            for row in rows:
                row[j], row[k] = row[k], row[j]

    def add_row(target: int, source: int, factor: int) -> None:
        for rows in (s, u):
            rows[target] = [a + factor * b for a, b in zip(rows[target], rows[source])]

    def add_col(target: int, source: int, factor: int) -> None:
        for rows in (s, v):
            for row in rows:
                row[target] += factor * row[source]

    for t in range(min(m, n)):
        block = [(i, j) for i in range(t, m) for j in range(t, n)]
        pivot = _smallest_entry(s, block)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])

        while True:
            for i in range(t + 1, m):
                if s[i][t]:
                    add_row(i, t, -(s[i][t] // s[t][t]))
            for j in range(t + 1, n):
                if s[t][j]:
                    add_col(j, t, -(s[t][j] // s[t][t]))

            cross = [(i, t) for i in range(t + 1, m)] + [(t, j) for j in range(t + 1, n)]
            leftover = _smallest_entry(s, cross)
            if leftover is not None:
                if leftover[1] == t:
                    swap_rows(t, leftover[0])
                else:
                    swap_cols(t, leftover[1])
                continue

            stray = next(
                (
                    i
                    for i in range(t + 1, m)
                    for j in range(t + 1, n)
                    if s[i][j] % s[t][t]
                ),
                None,
            )
            if stray is None:
                break
            add_row(t, stray, 1)

        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]

    return SmithDecomposition(
        U=int_matrix(u, shape=(m, m)),
        S=int_matrix(s, shape=(m, n)),
        V=int_matrix(v, shape=(n, n)),
    )


def matrix_rank(matrix: IntMatrix) -> int:
    return smith_normal_form(matrix).rank


def kernel_basis(matrix: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of the kernel of `matrix`."""
    decomposition = smith_normal_form(matrix)
    return decomposition.V[:, decomposition.rank:]


def image_basis(matrix: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of the subgroup spanned by the columns of `matrix`."""
    decomposition = smith_normal_form(matrix)
    return matmul(matrix, decomposition.V)[:, : decomposition.rank]


def solve_integer(matrix: IntMatrix, rhs: IntMatrix) -> IntMatrix:
    """Return X with matrix·X = rhs, column by column."""
    m, n = matrix.shape
    decomposition = smith_normal_form(matrix)
    diagonal = decomposition.diagonal
    target = matmul(decomposition.U, rhs)
    solution = zeros(n, rhs.shape[1])

    for i in range(m):
        d = diagonal[i] if i < len(diagonal) else 0
        for c in range(rhs.shape[1]):
            value = target[i, c]
            if d == 0:
                if value != 0:
                    raise NoIntegerSolution(f"column {c} is not in the span of the matrix")
            elif value % d:
                raise NoIntegerSolution(f"column {c} is not in the integer span of the matrix")
            else:
                solution[i, c] = value // d

    return matmul(decomposition.V, solution)


########## finitely generated abelian groups

@dataclass(frozen=True)
class FinAbGroup:
    """Z^free_rank + Z/d_1 + ... + Z/d_k with d_1 | d_2 | ... and every d_i >= 2."""

    free_rank: int = 0
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError(f"negative free rank {self.free_rank}")
        factors = self.invariant_factors
        if any(d < 2 for d in factors) or any(b % a for a, b in zip(factors, factors[1:])):
            raise ValueError(f"{factors} is not an invariant-factor chain")

    @classmethod
    def trivial(cls) -> "FinAbGroup":
        return cls()

    @classmethod
    def free(cls, rank: int) -> "FinAbGroup":
        return cls(free_rank=rank)

    @classmethod
    def from_cyclic(cls, free_rank: int, orders) -> "FinAbGroup":
        """Canonical form of Z^free_rank plus cyclic groups of the given orders (0 means Z)."""
        orders = [abs(int(d)) for d in orders]
        finite = [d for d in orders if d != 0]
        diagonal = zeros(len(finite), len(finite))
        for i, d in enumerate(finite):
            diagonal[i, i] = d
        return cls(
            free_rank=free_rank + orders.count(0),
            invariant_factors=cokernel(diagonal).invariant_factors,
        )

    def direct_sum(self, other: "FinAbGroup") -> "FinAbGroup":
        return FinAbGroup.from_cyclic(
            self.free_rank + other.free_rank,
            self.invariant_factors + other.invariant_factors,
        )

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.invariant_factors)}

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " + ".join(parts) if parts else "0"


def direct_sum(groups) -> FinAbGroup:
    total = FinAbGroup.trivial()
    for group in groups:
        total = total.direct_sum(group)
    return total


@dataclass(frozen=True)
class GroupExpr:
    """
    G^free_power + sum G/dG + sum G[b] for an abstract coefficient group G.

    G/dG and G[b] stay symbolic: for G = K* their structure depends on K.
    """

    symbol: str
    free_power: int = 0
    cotorsion: tuple[int, ...] = ()
    torsion_sub: tuple[int, ...] = ()

    @property
    def is_trivial(self) -> bool:
        return self.free_power == 0 and not self.cotorsion and not self.torsion_sub

    def evaluate(self, modulus: int = 0) -> FinAbGroup:
        """Substitute G = Z (modulus 0) or G = Z/modulus."""
        if modulus == 0:
            return FinAbGroup.from_cyclic(self.free_power, self.cotorsion)
        orders = [modulus] * self.free_power
        orders += [gcd(d, modulus) for d in self.cotorsion]
        orders += [gcd(b, modulus) for b in self.torsion_sub]
        return FinAbGroup.from_cyclic(0, orders)

    def to_dict(self) -> dict:
        return {
            "symbol": self.symbol,
            "free": self.free_power,
            "cotorsion": list(self.cotorsion),
            "torsion_sub": list(self.torsion_sub),
        }

    def __str__(self) -> str:
        parts = []
        if self.free_power == 1:
            parts.append(self.symbol)
        elif self.free_power > 1:
            parts.append(f"({self.symbol})^{self.free_power}")
        parts.extend(f"{self.symbol}/{d}{self.symbol}" for d in self.cotorsion)
        parts.extend(f"{self.symbol}[{b}]" for b in self.torsion_sub)
        return " + ".join(parts) if parts else "0"


########## cokernels and cohomology

def cokernel(matrix: IntMatrix) -> FinAbGroup:
    """Z^rows / image of the map Z^cols -> Z^rows given by `matrix`."""
    decomposition = smith_normal_form(matrix)
    return FinAbGroup(
        free_rank=matrix.shape[0] - decomposition.rank,
        invariant_factors=tuple(d for d in decomposition.diagonal if d > 1),
    )


def complex_cohomology(d_in: IntMatrix, d_out: IntMatrix) -> FinAbGroup:
    """
    ker(d_out) / im(d_in) at the middle group of d_in followed by d_out.

    The torsion of ker/im equals the torsion of coker(d_in), because
    Z^n / ker(d_out) embeds in a free group.
    """
    width = d_in.shape[0]
    if d_out.shape[1] != width:
        raise ValueError(f"differentials {d_in.shape} and {d_out.shape} do not compose")
    if not is_zero(matmul(d_out, d_in)):
        raise CompositionNonzero("consecutive differentials do not compose to zero")

    incoming = smith_normal_form(d_in)
    return FinAbGroup(
        free_rank=width - matrix_rank(d_out) - incoming.rank,
        invariant_factors=tuple(d for d in incoming.diagonal if d > 1),
    )


def coefficient_cohomology(h_here: FinAbGroup, h_next: FinAbGroup, symbol: str) -> GroupExpr:
    """H^j(C; G) = H^j(C) (x) G + Tor(H^{j+1}(C), G) for a complex C of free groups."""
    return GroupExpr(
        symbol=symbol,
        free_power=h_here.free_rank,
        cotorsion=h_here.invariant_factors,
        torsion_sub=h_next.invariant_factors,
    )


@dataclass(frozen=True, eq=False)
class CochainComplex:
    """Free groups Z^ranks[k] in degree start + k, with differentials[k] leaving position k."""

    start: int
    ranks: tuple[int, ...]
    differentials: tuple[IntMatrix, ...]

    def __post_init__(self):
        if len(self.differentials) != max(len(self.ranks) - 1, 0):
            raise ValueError("a cochain complex needs one differential between consecutive groups")
        for k, differential in enumerate(self.differentials):
            expected = (self.ranks[k + 1], self.ranks[k])
            if differential.shape != expected:
                raise ValueError(f"differential {k} has shape {differential.shape}, expected {expected}")

    @property
    def degrees(self) -> range:
        return range(self.start, self.start + len(self.ranks))

    def cohomology(self) -> list[FinAbGroup]:
        groups = []
        for k, rank in enumerate(self.ranks):
            d_in = self.differentials[k - 1] if k > 0 else zeros(rank, 0)
            d_out = self.differentials[k] if k < len(self.differentials) else zeros(0, rank)
            groups.append(complex_cohomology(d_in, d_out))
        return groups

    def euler_characteristic(self) -> int:
        return sum((-1) ** (degree % 2) * rank for degree, rank in zip(self.degrees, self.ranks))
