"""The q-system side: subspace weights, rank/weight duality, scatteredness, 2-spannability."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from . import linalg
from .codes import RankCode, rank_of
from .errors import (
    AmbientMismatch,
    DegenerateCode,
    EnumerationCapExceeded,
    InvalidParameters,
    NoIntegralSolution,
    ZeroMessage,
)
from .fields import ExtField
from .linalg import DEFAULT_ENUM_CAP, FqSubspace

KVector = tuple[int, ...]


def expand_vector(field: ExtField, vec: Sequence[int]) -> tuple[int, ...]:
    """Flatten a vector of F_{q^m}^k into F_q^{mk} coordinates."""
    flat: list[int] = []
    for v in vec:
        flat.extend(field.expand(v))
    return tuple(flat)


def lift_vector(field: ExtField, flat: Sequence[int], k: int) -> KVector:
    m = field.m
    return tuple(field.lift(flat[i * m : (i + 1) * m]) for i in range(k))


def spans_ambient(field: ExtField, k: int, vectors: Sequence[Sequence[int]]) -> bool:
    """The system condition: the F_{q^m}-span of the vectors is all of F_{q^m}^k."""
    from .codes import rank_over_extension

    return rank_over_extension(field, list(vectors)) == k


class QSystem:
    """An n-dimensional F_q-subspace of F_{q^m}^k spanning F_{q^m}^k.

    The basis keeps the construction order (so generator columns round-trip);
    equality and hashing go through the canonical echelon form.
    """

    def __init__(self, field: ExtField, k: int, vectors: Sequence[Sequence[int]],
                 source: RankCode | None = None, validate: bool = True):
        basis = tuple(tuple(int(v) % field.order for v in vec) for vec in vectors)
        if any(len(v) != k for v in basis):
            raise AmbientMismatch(f"vectors must live in F_{{q^m}}^{k}")
        flat = [expand_vector(field, v) for v in basis]
        if linalg.rank(flat, field.q) != len(basis):
            raise InvalidParameters("basis vectors are F_q-dependent")
        if validate and not spans_ambient(field, k, basis):
            raise InvalidParameters(
                f"vectors span a proper F_{{q^m}}-subspace of dimension < {k}"
            )
        self.field = field
        self.k = k
        self.n = len(basis)
        self.basis = basis
        self.source = source
        self._expanded: FqSubspace | None = None

    @classmethod
    def from_spanning(cls, field: ExtField, k: int, vectors: Sequence[Sequence[int]],
                      source: RankCode | None = None, validate: bool = True) -> "QSystem":
        """Build from a possibly dependent spanning set (reduced to canonical form)."""
        flat = [expand_vector(field, v) for v in vectors]
        echelon = linalg.rref(flat, field.q)
        basis = [lift_vector(field, row, k) for row in echelon]
        return cls(field, k, basis, source=source, validate=validate)

    @property
    def ambient_flat_dim(self) -> int:
        return self.field.m * self.k

    def expanded(self) -> FqSubspace:
        """The system as an F_q-subspace of F_q^{mk} (canonical echelon basis)."""
        if self._expanded is None:
            flat = [expand_vector(self.field, v) for v in self.basis]
            self._expanded = FqSubspace.from_vectors(self.field.q, self.ambient_flat_dim, flat)
        return self._expanded

    def canonical_basis(self) -> tuple[KVector, ...]:
        return tuple(lift_vector(self.field, row, self.k) for row in self.expanded().basis)

    def enumerate_vectors(self, cap: int = DEFAULT_ENUM_CAP) -> Iterator[KVector]:
        """All q^n - 1 nonzero vectors, coefficient-counter order over the basis."""
        total = self.field.q**self.n - 1
        if total > cap:
            raise EnumerationCapExceeded(f"{total} vectors exceeds cap {cap}")
        f, q = self.field, self.field.q
        for counter in range(1, total + 1):
            vec = [0] * self.k
            c = counter
            i = 0
            while c:
                digit = c % q
                if digit:
                    row = self.basis[i]
                    vec = [f.add(a, f.mul(digit, b)) for a, b in zip(vec, row)]
                c //= q
                i += 1
            yield tuple(vec)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QSystem)
            and (self.field, self.k) == (other.field, other.k)
            and self.expanded().basis == other.expanded().basis
        )

    def __hash__(self) -> int:
        return hash((self.field, self.k, self.expanded().basis))

    def __repr__(self) -> str:
        f = self.field
        return f"QSystem([{self.n},{self.k}]_{{{f.q}^{f.m}/{f.q}}})"


def q_system_of(code: RankCode) -> QSystem:
    """The q-system spanned by the generator columns; requires a nondegenerate code."""
    if not code.is_nondegenerate():
        raise DegenerateCode("q-system is only defined for nondegenerate codes")
    columns = [tuple(code.generator[i][j] for i in range(code.k)) for j in range(code.n)]
    system = QSystem(code.field, code.k, columns, source=code)
    # nondegeneracy makes the columns F_q-independent, so dimensions agree
    assert system.n == code.n
    return system


# --- weights ---------------------------------------------------------------


def _dual_condition_rows(field: ExtField, k: int, duals: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Rows (indexed by the mk F_q-generators of F_{q^m}^k) of the dual condition matrix."""
    rows = []
    for i in range(k):
        for g in field.basis:
            row: list[int] = []
            for d in duals:
                row.extend(field.expand(field.mul(g, d[i])))
            rows.append(tuple(row))
    return rows


def subspace_from_dual(field: ExtField, k: int, duals: Sequence[Sequence[int]]) -> FqSubspace:
    """The F_q-expansion of {v in F_{q^m}^k : <v, d> = 0 for all given duals}."""
    rows = _dual_condition_rows(field, k, duals)
    kernel = linalg.left_nullspace(rows, field.q)
    return FqSubspace(field.q, field.m * k, tuple(kernel))


def subspace_from_spanning(field: ExtField, k: int, vectors: Sequence[Sequence[int]]) -> FqSubspace:
    """The F_q-expansion of the F_{q^m}-span of the given vectors."""
    flat = []
    for v in vectors:
        for g in field.basis:
            flat.append(expand_vector(field, [field.mul(g, x) for x in v]))
    return FqSubspace.from_vectors(field.q, field.m * k, flat)


def weight_of(system: QSystem, spanning: Sequence[Sequence[int]] | None = None,
              dual: Sequence[Sequence[int]] | None = None) -> int:
    """dim_{F_q}(U cap W) for W an F_{q^m}-subspace, given by spanning set or duals.

    Both descriptions are normalized to an F_q-expanded echelon form in mk
    coordinates and intersected there.
    """
    if (spanning is None) == (dual is None):
        raise InvalidParameters("give exactly one of spanning= or dual=")
    field, k = system.field, system.k
    vecs = spanning if spanning is not None else dual
    for v in vecs:
        if len(v) != k:
            raise AmbientMismatch(f"vector length {len(v)} != ambient dimension {k}")
    if spanning is not None:
        w = subspace_from_spanning(field, k, spanning)
    else:
        w = subspace_from_dual(field, k, dual)
    return system.expanded().intersect(w).dim


def hyperplane_weight(system: QSystem, u: Sequence[int]) -> int:
    """Weight of the hyperplane u-perp: nullity of the evaluation map on U's coefficients."""
    f = system.field
    rows = []
    for b in system.basis:
        acc = 0
        for bi, ui in zip(b, u):
            if bi and ui:
                acc = f.add(acc, f.mul(bi, ui))
        rows.append(f.expand(acc))
    return system.n - linalg.rank(rows, f.q)


def hyperplane_kernel_coeffs(system: QSystem, u: Sequence[int]) -> list[tuple[int, ...]]:
    """Coefficient-space basis (in F_q^n over U's basis) of U cap u-perp."""
    f = system.field
    rows = []
    for b in system.basis:
        acc = 0
        for bi, ui in zip(b, u):
            if bi and ui:
                acc = f.add(acc, f.mul(bi, ui))
        rows.append(f.expand(acc))
    return linalg.left_nullspace(rows, f.q)


def rank_weight_duality_check(code: RankCode, u: Sequence[int]) -> tuple[int, int]:
    """Return (rk(uG), n - wt(<u>-perp)), computed by two independent routes."""
    if not any(v % code.field.order for v in u):
        raise ZeroMessage("duality check needs a nonzero message")
    system = q_system_of(code)
    rank_side = rank_of(code.field, code.codeword(u))
    weight_side = code.n - weight_of(system, dual=[tuple(u)])
    return rank_side, weight_side


# --- point spectra and scatteredness ---------------------------------------


def point_weights(system: QSystem, cap: int = DEFAULT_ENUM_CAP) -> dict[KVector, int]:
    """Map from normalized point representative to its weight in the system."""
    f = system.field
    counts: dict[KVector, int] = {}
    for vec in system.enumerate_vectors(cap=cap):
        lead = next(v for v in vec if v)
        inv = f.inv(lead)
        key = tuple(f.mul(inv, v) for v in vec)
        counts[key] = counts.get(key, 0) + 1
    weights = {}
    for key, count in counts.items():
        w = 0
        total = count + 1
        while total > 1:
            if total % f.q:
                raise AssertionError("point vector count is not q^w - 1")
            total //= f.q
            w += 1
        weights[key] = w
    return weights


def point_weight_spectrum(system: QSystem, cap: int = DEFAULT_ENUM_CAP) -> dict[int, int]:
    """Counts of linear-set points per weight value."""
    spectrum: dict[int, int] = {}
    for w in point_weights(system, cap=cap).values():
        spectrum[w] = spectrum.get(w, 0) + 1
    return dict(sorted(spectrum.items()))


def is_scattered(system: QSystem, cap: int = DEFAULT_ENUM_CAP) -> bool:
    """True iff every point of the linear set has weight 1."""
    spectrum = point_weight_spectrum(system, cap=cap)
    return set(spectrum) <= {1}


def is_scattered_wrt_hyperplanes(system: QSystem, cap: int = DEFAULT_ENUM_CAP) -> bool:
    """True iff every hyperplane weight is at most k - 1."""
    if system.k == 1:
        return True  # the only hyperplane is {0}
    limit = system.k - 1
    for u in linalg.hyperplane_duals(system.field, system.k, cap=cap):
        if hyperplane_weight(system, u) > limit:
            return False
    return True


def max_hyperplane_weight(system: QSystem, cap: int = DEFAULT_ENUM_CAP) -> int:
    if system.k == 1:
        return 0
    return max(hyperplane_weight(system, u) for u in linalg.hyperplane_duals(system.field, system.k, cap=cap))


# --- 2-spannability ---------------------------------------------------------


@dataclass(frozen=True)
class SpannabilityWitness:
    """Two hyperplane duals whose intersections with the system sum to the system."""

    h1: KVector
    h2: KVector
    w1: int
    w2: int


def _vec_encode(field: ExtField, vec: Sequence[int]) -> int:
    value = 0
    for v in vec:
        value = value * field.order + v
    return value


def validate_witness(system: QSystem, witness: SpannabilityWitness) -> bool:
    """Generic sum test: U = (U cap h1-perp) + (U cap h2-perp)."""
    k1 = hyperplane_kernel_coeffs(system, witness.h1)
    k2 = hyperplane_kernel_coeffs(system, witness.h2)
    return linalg.rank(list(k1) + list(k2), system.field.q) == system.n


def is_2_spannable(system: QSystem, cap: int = DEFAULT_ENUM_CAP) -> tuple[bool, SpannabilityWitness | None]:
    """Decide whether U is the sum of its intersections with two hyperplanes.

    Hyperplanes are scanned by descending weight; a pair can only span when
    wt1 + wt2 >= n, and the heavier member of any witness pair has weight at
    least ceil(n/2). H1 = H2 is formally allowed but can never span for k >= 2
    (it would force wt = n, contradicting the system condition), so the scan
    covers distinct pairs only.
    """
    if system.k == 1:
        raise InvalidParameters("2-spannability is not defined for k = 1 systems")
    f, n = system.field, system.n
    weighted = []
    for u in linalg.hyperplane_duals(f, system.k, cap=cap):
        weighted.append((hyperplane_weight(system, u), _vec_encode(f, u), u))
    weighted.sort(key=lambda t: (-t[0], t[1]))
    kernels: dict[int, list[tuple[int, ...]]] = {}

    def kernel_of(idx: int) -> list[tuple[int, ...]]:
        if idx not in kernels:
            kernels[idx] = hyperplane_kernel_coeffs(system, weighted[idx][2])
        return kernels[idx]

    for i in range(len(weighted)):
        wi = weighted[i][0]
        if 2 * wi < n:
            break  # the heavier member of any witness pair has weight >= n/2
        for j in range(i + 1, len(weighted)):
            wj = weighted[j][0]
            if wi + wj < n:
                break
            if linalg.rank(kernel_of(i) + kernel_of(j), f.q) == n:
                witness = SpannabilityWitness(
                    h1=weighted[i][2], h2=weighted[j][2], w1=wi, w2=wj
                )
                assert validate_witness(system, witness)
                return True, witness
    return False, None


def hyperplanes_through(field: ExtField, k: int, point: Sequence[int],
                        cap: int = DEFAULT_ENUM_CAP) -> Iterator[KVector]:
    """Normalized duals of the q^m + 1 hyperplanes containing the given point (k = 3)."""
    for u in linalg.hyperplane_duals(field, k, cap=cap):
        acc = 0
        for p, c in zip(point, u):
            if p and c:
                acc = field.add(acc, field.mul(p, c))
        if acc == 0:
            yield u


# --- the codim-2 hyperplane-weight counting solution ------------------------


def hyperplane_weight_partition_solution(q: int, m: int) -> tuple[int, int]:
    """Solve a(q^{m-1}-1) + b(q^{m-2}-1) = q^{2m-2}-1, a + b = q^m + 1 exactly.

    The unique solution is (q+1, q^m - q); integrality is asserted, not assumed.
    """
    if q < 2 or m < 2:
        raise InvalidParameters("need q >= 2 and m >= 2")
    c1 = Fraction(q ** (m - 1) - 1)
    c2 = Fraction(q ** (m - 2) - 1)
    rhs = Fraction(q ** (2 * m - 2) - 1)
    total = Fraction(q**m + 1)
    # a*c1 + (total - a)*c2 = rhs
    denom = c1 - c2
    if denom == 0:
        raise NoIntegralSolution("degenerate system")
    a = (rhs - total * c2) / denom
    b = total - a
    if a.denominator != 1 or b.denominator != 1 or a < 0 or b < 0:
        raise NoIntegralSolution(f"non-integral solution a={a}, b={b}")
    a_int, b_int = int(a), int(b)
    if (a_int, b_int) != (q + 1, q**m - q):
        raise NoIntegralSolution(f"solver disagrees with closed form: {(a_int, b_int)}")
    return a_int, b_int
