"""Deterministic linear algebra over prime fields F_q: echelon forms, subspaces, enumeration."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import AmbientMismatch, DependentInput, EnumerationCapExceeded, SingularMatrix

Row = tuple[int, ...]

# Refuse enumerations beyond this many items unless the caller overrides.
DEFAULT_ENUM_CAP = 1 << 30


def _inv_mod(a: int, q: int) -> int:
    return pow(a, q - 2, q)


def rref(rows: Sequence[Sequence[int]], q: int) -> list[Row]:
    """Reduced row-echelon form over F_q; zero rows dropped, row space preserved."""
    work = [list(r) for r in rows]
    if not work:
        return []
    ncols = len(work[0])
    pivot_row = 0
    for col in range(ncols):
        pivot = None
        for r in range(pivot_row, len(work)):
            if work[r][col] % q != 0:
                pivot = r
                break
        if pivot is None:
            continue
        work[pivot_row], work[pivot] = work[pivot], work[pivot_row]
        inv = _inv_mod(work[pivot_row][col] % q, q)
        work[pivot_row] = [(v * inv) % q for v in work[pivot_row]]
        prow = work[pivot_row]
        for r in range(len(work)):
            if r != pivot_row and work[r][col] % q != 0:
                c = work[r][col] % q
                work[r] = [(a - c * b) % q for a, b in zip(work[r], prow)]
        pivot_row += 1
        if pivot_row == len(work):
            break
    return [tuple(r) for r in work[:pivot_row]]


def rank(rows: Sequence[Sequence[int]], q: int) -> int:
    """F_q-rank; equals the number of nonzero rows of rref."""
    return len(rref(rows, q))


def pivot_columns(echelon: Sequence[Row]) -> list[int]:
    return [next(j for j, v in enumerate(r) if v) for r in echelon]


def nullspace(rows: Sequence[Sequence[int]], q: int, ncols: int) -> list[Row]:
    """RREF basis of {x in F_q^ncols : sum_j M[i][j] x_j = 0 for all i}."""
    ech = rref(rows, q)
    pivots = pivot_columns(ech)
    pivot_set = set(pivots)
    free = [j for j in range(ncols) if j not in pivot_set]
    basis = []
    for f in free:
        vec = [0] * ncols
        vec[f] = 1
        for i, p in enumerate(pivots):
            vec[p] = (-ech[i][f]) % q
        basis.append(tuple(vec))
    return rref(basis, q)


def left_nullspace(rows: Sequence[Sequence[int]], q: int) -> list[Row]:
    """RREF basis of {a : a . M = 0} for M given by rows."""
    nrows = len(rows)
    if nrows == 0:
        return []
    transposed = list(zip(*rows))
    return nullspace(transposed, q, nrows)


@dataclass(frozen=True)
class FqSubspace:
    """An F_q-subspace of F_q^ambient_dim held as its canonical rref basis."""

    q: int
    ambient_dim: int
    basis: tuple[Row, ...]

    @classmethod
    def from_vectors(cls, q: int, ambient_dim: int, vectors: Sequence[Sequence[int]]) -> "FqSubspace":
        for v in vectors:
            if len(v) != ambient_dim:
                raise AmbientMismatch(f"vector length {len(v)} != ambient {ambient_dim}")
        return cls(q=q, ambient_dim=ambient_dim, basis=tuple(rref(vectors, q)))

    @classmethod
    def zero(cls, q: int, ambient_dim: int) -> "FqSubspace":
        return cls(q=q, ambient_dim=ambient_dim, basis=())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _check_ambient(self, other: "FqSubspace") -> None:
        if self.ambient_dim != other.ambient_dim or self.q != other.q:
            raise AmbientMismatch(
                f"ambient mismatch: ({self.q},{self.ambient_dim}) vs ({other.q},{other.ambient_dim})"
            )

    def contains(self, vec: Sequence[int]) -> bool:
        if len(vec) != self.ambient_dim:
            raise AmbientMismatch(f"vector length {len(vec)} != ambient {self.ambient_dim}")
        residue = [v % self.q for v in vec]
        pivots = pivot_columns(self.basis)
        for row, p in zip(self.basis, pivots):
            c = residue[p]
            if c:
                residue = [(a - c * b) % self.q for a, b in zip(residue, row)]
        return not any(residue)

    def sum(self, other: "FqSubspace") -> "FqSubspace":
        self._check_ambient(other)
        return FqSubspace.from_vectors(self.q, self.ambient_dim, list(self.basis) + list(other.basis))

    def intersect(self, other: "FqSubspace") -> "FqSubspace":
        """U cap W via the kernel of the stacked-basis system."""
        self._check_ambient(other)
        if not self.basis or not other.basis:
            return FqSubspace.zero(self.q, self.ambient_dim)
        stacked = list(self.basis) + [tuple((-v) % self.q for v in row) for row in other.basis]
        kernel = left_nullspace(stacked, self.q)
        du = len(self.basis)
        vectors = []
        for coeffs in kernel:
            vec = [0] * self.ambient_dim
            for c, row in zip(coeffs[:du], self.basis):
                if c:
                    vec = [(a + c * b) % self.q for a, b in zip(vec, row)]
            vectors.append(tuple(vec))
        return FqSubspace.from_vectors(self.q, self.ambient_dim, vectors)

    def dual(self) -> "FqSubspace":
        """Orthogonal complement under the standard dot product."""
        if not self.basis:
            # dual of {0} is everything
            eye = [tuple(1 if i == j else 0 for j in range(self.ambient_dim)) for i in range(self.ambient_dim)]
            return FqSubspace(self.q, self.ambient_dim, tuple(eye))
        return FqSubspace(self.q, self.ambient_dim, tuple(nullspace(self.basis, self.q, self.ambient_dim)))

    def enumerate_vectors(self, cap: int = DEFAULT_ENUM_CAP) -> Iterator[Row]:
        """All q^dim - 1 nonzero vectors, in coefficient-counter order over the echelon basis.

        Counter digit i (base q, little-endian) is the coefficient of basis row i.
        """
        total = self.q ** self.dim - 1
        if total > cap:
            raise EnumerationCapExceeded(f"{total} vectors exceeds cap {cap}")
        q = self.q
        for counter in range(1, total + 1):
            vec = [0] * self.ambient_dim
            c = counter
            i = 0
            while c:
                digit = c % q
                if digit:
                    row = self.basis[i]
                    vec = [(a + digit * b) % q for a, b in zip(vec, row)]
                c //= q
                i += 1
            yield tuple(vec)


def complete_basis(vectors: Sequence[Sequence[int]], ambient_dim: int, q: int) -> list[Row]:
    """Extend independent vectors to a basis of F_q^ambient_dim.

    Greedy: appends the smallest-index standard vector not in the current span.
    """
    current = [tuple(v % q for v in vec) for vec in vectors]
    if rank(current, q) != len(current):
        raise DependentInput("input vectors are linearly dependent")
    space = FqSubspace.from_vectors(q, ambient_dim, current)
    for j in range(ambient_dim):
        if space.dim == ambient_dim:
            break
        e = tuple(1 if i == j else 0 for i in range(ambient_dim))
        if not space.contains(e):
            current.append(e)
            space = FqSubspace.from_vectors(q, ambient_dim, current)
    return current


def invert_matrix(rows: Sequence[Sequence[int]], q: int) -> list[Row]:
    """Inverse of a square matrix over F_q, via elimination on the augmented matrix."""
    n = len(rows)
    augmented = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(rows)]
    ech = rref(augmented, q)
    if len(ech) != n or pivot_columns(ech) != list(range(n)):
        raise SingularMatrix("matrix is not invertible")
    return [tuple(r[n:]) for r in ech]


def projective_reps(field, k: int, cap: int = DEFAULT_ENUM_CAP) -> Iterator[tuple[int, ...]]:
    """One representative per projective point of F_{q^m}^k, first nonzero coordinate 1.

    Ordered by ascending big-endian integer encoding (first coordinate most
    significant), so (0,...,0,1) comes first.
    """
    order = field.order
    total = (order ** k - 1) // (order - 1) if order > 1 else k
    if total > cap:
        raise EnumerationCapExceeded(f"{total} projective points exceeds cap {cap}")
    for lead in range(k - 1, -1, -1):
        tail = k - 1 - lead
        for suffix in range(order ** tail):
            vec = [0] * k
            vec[lead] = 1
            s = suffix
            for j in range(k - 1, lead, -1):
                vec[j] = s % order
                s //= order
            yield tuple(vec)


def hyperplane_duals(field, k: int, cap: int = DEFAULT_ENUM_CAP) -> Iterator[tuple[int, ...]]:
    """One normalized dual vector u per hyperplane u-perp of F_{q^m}^k.

    Count is (q^{mk}-1)/(q^m-1); for k=1 the single hyperplane is {0} with dual (1,).
    """
    yield from projective_reps(field, k, cap=cap)
