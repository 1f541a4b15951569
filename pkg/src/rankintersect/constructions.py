"""Code and q-system constructions: Gabidulin, simplex, club codes, scattered extensions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import linalg
from .codes import RankCode
from .errors import (
    DegreeTooSmall,
    DependentPoints,
    ExtensionTooLarge,
    InvalidParameters,
    LengthExceedsDegree,
    NotHyperplaneScattered,
    UnknownExample,
)
from .fields import ExtField, make_extension_field
from .geometry import QSystem, max_hyperplane_weight, is_scattered_wrt_hyperplanes


def gabidulin(field: ExtField, points: Sequence[int], k: int) -> RankCode:
    """The Gabidulin code evaluated at F_q-independent points: a Moore-matrix generator."""
    n = len(points)
    if n > field.m:
        raise LengthExceedsDegree(f"n = {n} exceeds extension degree m = {field.m}")
    expanded = [field.expand(a) for a in points]
    if linalg.rank(expanded, field.q) != n:
        raise DependentPoints(f"evaluation points are F_{field.q}-dependent")
    rows = [tuple(field.frobenius(a, i) for a in points) for i in range(k)]
    return RankCode(field, rows)


def default_gabidulin(field: ExtField, n: int, k: int) -> RankCode:
    """Gabidulin code on the default evaluation points 1, alpha, ..., alpha^(n-1)."""
    points = [field.pow(field.alpha, j) for j in range(n)]
    return gabidulin(field, points, k)


def simplex(field: ExtField, k: int) -> RankCode:
    """The [km, k] simplex code with generator (I_k | alpha I_k | ... | alpha^(m-1) I_k)."""
    if k < 1:
        raise InvalidParameters("simplex needs k >= 1")
    m = field.m
    rows = []
    for i in range(k):
        row = [0] * (k * m)
        for t in range(m):
            row[t * k + i] = field.pow(field.alpha, t)
        rows.append(tuple(row))
    return RankCode(field, rows)


def club_code(field: ExtField) -> RankCode:
    """The [h,2,2] code whose linear set is an (h-2)-club on a projective line (h = m >= 3)."""
    h = field.m
    if h < 3:
        raise DegreeTooSmall(f"club codes need extension degree >= 3, got {h}")
    a = field.alpha
    row1 = tuple(field.pow(a, j) for j in range(1, h)) + (0,)
    row2 = tuple([0] * (h - 2)) + (1, a)
    return RankCode(field, [row1, row2])


def system_code(system: QSystem) -> RankCode:
    """The code whose generator columns are the system's canonical basis vectors."""
    rows = [tuple(system.basis[j][i] for j in range(system.n)) for i in range(system.k)]
    return RankCode(system.field, rows)


def _decode_vector_big_endian(field: ExtField, value: int, k: int) -> tuple[int, ...]:
    digits = []
    for _ in range(k):
        digits.append(value % field.order)
        value //= field.order
    return tuple(reversed(digits))


def extend_to_intersecting(system: QSystem, r: int) -> QSystem:
    """Extend a hyperplane-scattered [m,k] system by r greedily chosen direct summands.

    Vectors of F_{q^m}^k are tried in ascending big-endian integer encoding and
    appended whenever they keep the F_q-sum direct. The resulting [m+r, k]
    system is re-verified to have every hyperplane weight < n/2 (which makes
    the associated code rank-metric intersecting with all ranks > n/2).
    """
    field, k, m = system.field, system.k, system.field.m
    if system.n != m:
        raise InvalidParameters(f"extension expects an [m,k] system, got n = {system.n}")
    if r < 0:
        raise InvalidParameters("r must be non-negative")
    if r > m - 2 * k + 1:
        raise ExtensionTooLarge(
            f"r = {r} exceeds m - 2k + 1 = {m - 2 * k + 1}; the non-spannability "
            "guarantee only holds up to that bound"
        )
    if not is_scattered_wrt_hyperplanes(system):
        raise NotHyperplaneScattered("base system is not scattered with respect to hyperplanes")
    vectors = list(system.basis)
    space = system.expanded()
    from .geometry import expand_vector

    added = 0
    value = 1
    while added < r:
        if value >= field.order**k:
            raise ExtensionTooLarge("exhausted the ambient space while extending")
        vec = _decode_vector_big_endian(field, value, k)
        flat = expand_vector(field, vec)
        if not space.contains(flat):
            vectors.append(vec)
            space = space.sum(linalg.FqSubspace.from_vectors(field.q, len(flat), [flat]))
            added += 1
        value += 1
    extended = QSystem(field, k, vectors)
    n = extended.n
    if not 2 * max_hyperplane_weight(extended) < n:
        raise AssertionError(
            "extension produced a hyperplane of weight >= n/2; this contradicts "
            "the construction guarantee and indicates a bug"
        )
    return extended


# --- named worked examples ---------------------------------------------------


@dataclass(frozen=True)
class ConstructionRecipe:
    """A named construction plus the property verdicts it is expected to satisfy."""

    name: str
    parameters: dict
    expected_properties: tuple[tuple[str, object, str], ...]


def _gab_3_2_f8() -> RankCode:
    field = make_extension_field(2, 3)
    return gabidulin(field, [1, field.alpha, field.pow(field.alpha, 2)], 2)


def _club_4_2_f16() -> RankCode:
    return club_code(make_extension_field(2, 4))


def _minimal_9_3_f128() -> RankCode:
    field = make_extension_field(2, 7)
    a = field.alpha
    rows = []
    for i in range(3):
        row = [field.pow(a, j * (2**i)) for j in range(7)]
        row += [1 if i == 1 else 0, 1 if i == 2 else 0]
        rows.append(tuple(row))
    return RankCode(field, rows)


def _quasimrd_6_2_f32() -> RankCode:
    field = make_extension_field(2, 5)
    base = gabidulin(field, [field.pow(field.alpha, j) for j in range(5)], 2)
    from .geometry import q_system_of

    return system_code(extend_to_intersecting(q_system_of(base), 1))


def _gab_5_3_f32() -> RankCode:
    field = make_extension_field(2, 5)
    return gabidulin(field, [field.pow(field.alpha, j) for j in range(5)], 3)


_RECIPES: dict[str, ConstructionRecipe] = {
    "gab_3_2_f8": ConstructionRecipe(
        name="gab_3_2_f8",
        parameters={"q": 2, "m": 3, "n": 3, "k": 2},
        expected_properties=(
            ("nondegenerate", True, "gabidulin-moore-full-rank"),
            ("distance", 2, "gabidulin-singleton-optimal"),
            ("intersecting", True, "distance-exceeds-half-length"),
            ("mrd", True, "gabidulin-mrd"),
            ("spannable", False, "intersecting-geometric-equivalence"),
        ),
    ),
    "club_4_2_f16": ConstructionRecipe(
        name="club_4_2_f16",
        parameters={"q": 2, "m": 4, "n": 4, "k": 2},
        expected_properties=(
            ("nondegenerate", True, "club-columns-independent"),
            ("distance", 2, "club-min-distance"),
            ("intersecting", True, "club-not-spannable"),
            ("spannable", False, "club-unique-heavy-point"),
            ("scattered", False, "club-weight-2-point"),
        ),
    ),
    "minimal_9_3_f128": ConstructionRecipe(
        name="minimal_9_3_f128",
        parameters={"q": 2, "m": 7, "n": 9, "k": 3},
        expected_properties=(
            ("nondegenerate", True, "scattered-plus-extension"),
            ("distance", 5, "direct-enumeration"),
            ("minimal", True, "pairwise-support-scan"),
            ("intersecting", True, "distance-exceeds-half-length"),
            ("scattered", True, "all-point-weights-one"),
            ("separating", True, "intersecting-implies-separating"),
        ),
    ),
    "quasimrd_6_2_f32": ConstructionRecipe(
        name="quasimrd_6_2_f32",
        parameters={"q": 2, "m": 5, "n": 6, "k": 2},
        expected_properties=(
            ("nondegenerate", True, "direct-sum-extension"),
            ("distance", 4, "singleton-optimal-length-6"),
            ("mrd", False, "divisibility-fails"),
            ("intersecting", True, "hyperplane-weights-below-half"),
        ),
    ),
    "gab_5_3_f32": ConstructionRecipe(
        name="gab_5_3_f32",
        parameters={"q": 2, "m": 5, "n": 5, "k": 3},
        expected_properties=(
            ("nondegenerate", True, "gabidulin-moore-full-rank"),
            ("distance", 3, "gabidulin-singleton-optimal"),
            ("mrd", True, "gabidulin-mrd"),
            ("intersecting", True, "distance-exceeds-half-length"),
        ),
    ),
}


def _simplex_recipe(k: int, m: int, q: int) -> ConstructionRecipe:
    return ConstructionRecipe(
        name=f"simplex_{k}_{m}",
        parameters={"q": q, "m": m, "n": k * m, "k": k},
        expected_properties=(
            ("nondegenerate", True, "simplex-spans"),
            ("distance", m, "simplex-constant-weight"),
            ("minimal", True, "constant-weight-implies-minimal"),
            ("intersecting", k == 1, "simplex-disjoint-unit-supports"),
            ("separating", True, "rank-sum-exceeds-degree"),
        ),
    )


def named_code(name: str, q: int = 2) -> tuple[RankCode, ConstructionRecipe]:
    """Instantiate one of the named worked examples under the default modulus."""
    if name in _RECIPES:
        builders = {
            "gab_3_2_f8": _gab_3_2_f8,
            "club_4_2_f16": _club_4_2_f16,
            "minimal_9_3_f128": _minimal_9_3_f128,
            "quasimrd_6_2_f32": _quasimrd_6_2_f32,
            "gab_5_3_f32": _gab_5_3_f32,
        }
        code = builders[name]()
        code.name = name
        return code, _RECIPES[name]
    if name.startswith("simplex_"):
        parts = name.split("_")
        if len(parts) == 3 and parts[1].isdigit() and parts[2].isdigit():
            k, m = int(parts[1]), int(parts[2])
            field = make_extension_field(q, m)
            code = simplex(field, k)
            code.name = name
            return code, _simplex_recipe(k, m, q)
    raise UnknownExample(
        f"unknown example {name!r}; known: {sorted(_RECIPES)} plus simplex_<k>_<m>"
    )


NAMED_EXAMPLE_IDS = tuple(sorted(_RECIPES)) + ("simplex_2_3",)
