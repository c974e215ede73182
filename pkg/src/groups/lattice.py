from typing import Dict, Iterable, Iterator, List, NamedTuple, Sequence, Tuple
import itertools
import math

from src.groups.grid_algebra import SignedPermutation, Vector


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b) up to sign."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    return x, y, g


def hermite_normal_form(vectors: Iterable[Sequence[int]], dim: int) -> Tuple[Vector, ...]:
    """Row Hermite normal form of the lattice spanned by ``vectors``.

    Rows are in echelon order with positive pivots; entries above each pivot
    lie in [0, pivot).
    """
    rows: Dict[int, List[int]] = {}
    for vec0 in vectors:
        vec = list(vec0)
        if len(vec) != dim:
            raise ValueError(f"Vector {tuple(vec0)} is not of dimension {dim}")
        for j in range(dim):
            if vec[j] == 0:
                continue
            row = rows.get(j)
            if row is None:
                rows[j] = vec
                break
            a, b = row[j], vec[j]
            if b % a == 0:
                q = b // a
                vec = [v - q * r for r, v in zip(row, vec)]
                continue
            x, y, g = xgcd(a, b)
            ag, bg = a // g, b // g
            rows[j] = [x * r + y * v for r, v in zip(row, vec)]
            vec = [ag * v - bg * r for r, v in zip(row, vec)]
    pivots = sorted(rows)
    basis = []
    for j in pivots:
        row = rows[j]
        if row[j] < 0:
            row = [-c for c in row]
        basis.append(row)
    for p, j in enumerate(pivots):
        a = basis[p][j]
        for q in range(p):
            f = basis[q][j] // a
            if f:
                basis[q] = [c - f * r for c, r in zip(basis[q], basis[p])]
    return tuple(tuple(row) for row in basis)


class Lattice(NamedTuple):
    """Sublattice of Z^d in row Hermite normal form."""
    dim: int
    basis: Tuple[Vector, ...]

    @classmethod
    def from_vectors(cls, vectors: Iterable[Sequence[int]], dim: int) -> "Lattice":
        return cls(dim, hermite_normal_form(vectors, dim))

    @classmethod
    def zero(cls, dim: int) -> "Lattice":
        return cls(dim, ())

    @classmethod
    def standard(cls, dim: int) -> "Lattice":
        return cls(dim, tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(next(j for j, c in enumerate(row) if c) for row in self.basis)

    def is_full_rank(self) -> bool:
        return self.rank == self.dim

    def determinant(self) -> int:
        """Index in Z^d; 0 when the lattice is not of full rank."""
        if not self.is_full_rank():
            return 0
        return math.prod(row[j] for row, j in zip(self.basis, self.pivots))

    def reduce(self, v: Sequence[int]) -> Vector:
        """Canonical representative of v modulo the lattice."""
        out = list(v)
        for row, j in zip(self.basis, self.pivots):
            q = out[j] // row[j]
            if q:
                out = [c - q * r for c, r in zip(out, row)]
        return tuple(out)

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def extended(self, vectors: Iterable[Sequence[int]]) -> "Lattice":
        return Lattice.from_vectors(itertools.chain(self.basis, vectors), self.dim)

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(row) for row in other.basis)

    def transform(self, w: SignedPermutation) -> "Lattice":
        """Image of the lattice under v -> v·w."""
        return Lattice.from_vectors((w.apply(row) for row in self.basis), self.dim)

    def is_invariant(self, points: Iterable[SignedPermutation]) -> bool:
        return all(self.contains(w.apply(row)) for w in points for row in self.basis)

    def fundamental_domain(self) -> Iterator[Vector]:
        """Complete residue system of Z^d modulo a full-rank lattice."""
        if not self.is_full_rank():
            raise ValueError("Fundamental domain requested for a lattice of deficient rank")
        diagonal = [row[j] for row, j in zip(self.basis, self.pivots)]
        return itertools.product(*(range(a) for a in diagonal))

    def axis_periods(self) -> Tuple[int, ...]:
        """Least p_i > 0 with p_i·e_i in the lattice, per axis."""
        det = self.determinant()
        if not det:
            raise ValueError("Axis periods requested for a lattice of deficient rank")
        periods = []
        for i in range(self.dim):
            for p in divisors(det):
                v = [0] * self.dim
                v[i] = p
                if self.contains(v):
                    periods.append(p)
                    break
        return tuple(periods)

    def to_text(self) -> str:
        if not self.basis:
            return "-"
        return "|".join("[" + ",".join(str(c) for c in row) + "]" for row in self.basis)


def divisors(n: int) -> List[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


def sublattices(dim: int, index: int) -> Iterator[Lattice]:
    """All sublattices of Z^dim of the given index, each once."""
    for diagonal in _ordered_factorizations(index, dim):
        free = [(q, p) for p in range(dim) for q in range(p)]
        ranges = [range(diagonal[p]) for q, p in free]
        for values in itertools.product(*ranges):
            rows = [[0] * dim for _ in range(dim)]
            for p in range(dim):
                rows[p][p] = diagonal[p]
            for (q, p), value in zip(free, values):
                rows[q][p] = value
            yield Lattice(dim, tuple(tuple(r) for r in rows))


def _ordered_factorizations(n: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (n,)
        return
    for k in divisors(n):
        for rest in _ordered_factorizations(n // k, parts - 1):
            yield (k,) + rest
