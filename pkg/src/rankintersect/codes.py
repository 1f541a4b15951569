"""Rank-metric codes over F_{q^m}: codeword rank/support, distance, spectra, equivalence."""

from __future__ import annotations

from typing import Iterator, Sequence

from . import linalg
from .errors import RankDeficientGenerator, SingularMatrix
from .fields import ExtField
from .linalg import DEFAULT_ENUM_CAP, FqSubspace

Vector = tuple[int, ...]


def rank_over_extension(field: ExtField, rows: Sequence[Sequence[int]]) -> int:
    """F_{q^m}-rank via Gaussian elimination with the extension-field arithmetic."""
    work = [list(r) for r in rows]
    if not work:
        return 0
    ncols = len(work[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(work)) if work[i][c]), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = field.inv(work[r][c])
        work[r] = [field.mul(inv, v) for v in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c]:
                coef = work[i][c]
                work[i] = [field.sub(a, field.mul(coef, b)) for a, b in zip(work[i], work[r])]
        r += 1
        if r == len(work):
            break
    return r


def codeword_matrix(field: ExtField, x: Sequence[int]) -> list[tuple[int, ...]]:
    """The m x n coordinate matrix of x: column j holds expand(x_j)."""
    cols = [field.expand(v) for v in x]
    return [tuple(col[i] for col in cols) for i in range(field.m)]


def rank_of(field: ExtField, x: Sequence[int]) -> int:
    """Rank of a vector: the F_q-rank of its coordinate matrix (basis independent)."""
    return linalg.rank(codeword_matrix(field, x), field.q)


def support(field: ExtField, x: Sequence[int]) -> FqSubspace:
    """The support: row space of the coordinate matrix, a subspace of F_q^n."""
    return FqSubspace.from_vectors(field.q, len(x), codeword_matrix(field, x))


class RankCode:
    """A k x n generator matrix over F_{q^m} plus lazily cached rank statistics."""

    def __init__(self, field: ExtField, generator: Sequence[Sequence[int]], name: str | None = None):
        rows = tuple(tuple(int(v) % field.order for v in row) for row in generator)
        if not rows or not rows[0]:
            raise RankDeficientGenerator("generator matrix is empty")
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise RankDeficientGenerator("generator rows have unequal lengths")
        k = len(rows)
        if k > n:
            raise RankDeficientGenerator(f"k = {k} exceeds n = {n}")
        if rank_over_extension(field, rows) != k:
            raise RankDeficientGenerator("generator matrix is not of full row rank")
        self.field = field
        self.generator = rows
        self.n = n
        self.k = k
        self.name = name
        self._spectrum: dict[int, int] | None = None

    # -- codewords

    def codeword(self, u: Sequence[int]) -> Vector:
        f = self.field
        out = [0] * self.n
        for ui, row in zip(u, self.generator):
            if ui:
                out = [f.add(o, f.mul(ui, g)) for o, g in zip(out, row)]
        return tuple(out)

    def projective_messages(self, cap: int = DEFAULT_ENUM_CAP) -> Iterator[Vector]:
        """One message per projective point of F_{q^m}^k, first nonzero coordinate 1."""
        return linalg.projective_reps(self.field, self.k, cap=cap)

    def message_count(self) -> int:
        q_m = self.field.order
        return (q_m**self.k - 1) // (q_m - 1)

    # -- cached statistics

    def weight_spectrum(self, cap: int = DEFAULT_ENUM_CAP) -> dict[int, int]:
        """Counts of projective codewords per rank value."""
        if self._spectrum is None:
            spectrum: dict[int, int] = {}
            for u in self.projective_messages(cap=cap):
                r = rank_of(self.field, self.codeword(u))
                spectrum[r] = spectrum.get(r, 0) + 1
            self._spectrum = dict(sorted(spectrum.items()))
        return self._spectrum

    def min_distance(self, cap: int = DEFAULT_ENUM_CAP) -> int:
        return min(self.weight_spectrum(cap=cap))

    # -- structural predicates

    def expanded_columns(self) -> list[tuple[int, ...]]:
        """Column j of G flattened to an mk-vector over F_q."""
        f = self.field
        out = []
        for j in range(self.n):
            flat: list[int] = []
            for i in range(self.k):
                flat.extend(f.expand(self.generator[i][j]))
            out.append(tuple(flat))
        return out

    def is_nondegenerate(self) -> bool:
        """True iff the F_q-span of the generator columns has dimension n."""
        return linalg.rank(self.expanded_columns(), self.field.q) == self.n

    # -- equivalence action

    def apply_equivalence(self, a_matrix: Sequence[Sequence[int]]) -> "RankCode":
        """The GL(n, q) action C . A; preserves n, k and the whole weight spectrum."""
        q = self.field.q
        rows = [tuple(int(v) % q for v in row) for row in a_matrix]
        if len(rows) != self.n or any(len(r) != self.n for r in rows):
            raise SingularMatrix(f"equivalence matrix must be {self.n} x {self.n}")
        linalg.invert_matrix(rows, q)  # raises SingularMatrix if not invertible
        f = self.field
        new_rows = []
        for grow in self.generator:
            new_rows.append(
                tuple(
                    _dot_scalar(f, grow, [rows[l][j] for l in range(self.n)])
                    for j in range(self.n)
                )
            )
        return RankCode(self.field, new_rows)

    def parameters(self) -> tuple[int, int, int, int]:
        return (self.field.q, self.field.m, self.n, self.k)

    def __repr__(self) -> str:
        f = self.field
        return f"RankCode([{self.n},{self.k}]_{{{f.q}^{f.m}/{f.q}}})"


def _dot_scalar(field: ExtField, elems: Sequence[int], scalars: Sequence[int]) -> int:
    acc = 0
    for e, s in zip(elems, scalars):
        if s and e:
            acc = field.add(acc, field.mul(e, s % field.q))
    return acc


def apply_to_vector(field: ExtField, x: Sequence[int], a_matrix: Sequence[Sequence[int]]) -> Vector:
    """Right action x . A for an F_q matrix A lifted entrywise into F_{q^m}."""
    n = len(x)
    return tuple(
        _dot_scalar(field, x, [a_matrix[l][j] for l in range(n)]) for j in range(n)
    )
