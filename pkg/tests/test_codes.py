"""RankCode behavior: codeword matrices, supports, distance, spectra, equivalence."""

from __future__ import annotations

import random

import pytest

from rankintersect import linalg
from rankintersect.codes import (
    RankCode,
    apply_to_vector,
    codeword_matrix,
    rank_of,
    rank_over_extension,
    support,
)
from rankintersect.constructions import default_gabidulin, simplex
from rankintersect.errors import RankDeficientGenerator, SingularMatrix
from rankintersect.fields import ExtField, make_extension_field
from rankintersect.linalg import FqSubspace


def random_invertible(rng, n, q):
    while True:
        rows = [[rng.randrange(q) for _ in range(n)] for _ in range(n)]
        if linalg.rank(rows, q) == n:
            return rows


def random_code(rng, field, n, k):
    while True:
        rows = [[rng.randrange(field.order) for _ in range(n)] for _ in range(k)]
        if rank_over_extension(field, rows) == k:
            return RankCode(field, rows)


F8 = make_extension_field(2, 3)
F16 = make_extension_field(2, 4)


def test_code_new_validation():
    assert RankCode(F8, [(1,)]).parameters() == (2, 3, 1, 1)
    with pytest.raises(RankDeficientGenerator):
        RankCode(F8, [(1, 2, 3), (1, 2, 3)])
    with pytest.raises(RankDeficientGenerator):
        RankCode(F8, [(1, 2), (3, 4), (5, 6)])  # k > n
    a = F16.alpha
    club_matrix = RankCode(F16, [(a, F16.pow(a, 2), F16.pow(a, 3), 0), (0, 0, 1, a)])
    assert club_matrix.parameters() == (2, 4, 4, 2)


def test_codeword_matrix_examples():
    a = F8.alpha
    assert codeword_matrix(F8, (0, 0)) == [(0, 0), (0, 0), (0, 0)]
    assert codeword_matrix(F8, (1, 1, 1)) == [(1, 1, 1), (0, 0, 0), (0, 0, 0)]
    eye = codeword_matrix(F8, (1, a, F8.mul(a, a)))
    assert eye == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_rank_of_examples():
    a = F8.alpha
    assert rank_of(F8, (0, 0, 0)) == 0
    assert rank_of(F8, (1, 1, 1, 1)) == 1
    assert rank_of(F8, (1, a, F8.mul(a, a))) == 3


def test_support_examples_and_scalar_invariance():
    a = F8.alpha
    assert support(F8, (0, 0)).dim == 0
    s = support(F8, (1, 0, a))
    assert s == FqSubspace.from_vectors(2, 3, [(1, 0, 0), (0, 0, 1)])
    rng = random.Random(21)
    for _ in range(200):
        x = tuple(rng.randrange(8) for _ in range(4))
        lam = rng.randrange(1, 8)
        scaled = tuple(F8.mul(lam, v) for v in x)
        assert support(F8, scaled) == support(F8, x)
        assert rank_of(F8, x) == support(F8, x).dim


def test_rank_is_basis_independent():
    alt = ExtField(2, 3, basis=(1, F8.alpha, 5))
    rng = random.Random(3)
    for _ in range(200):
        x = tuple(rng.randrange(8) for _ in range(4))
        assert rank_of(F8, x) == rank_of(alt, x)


def test_min_distance_gabidulin_f8():
    code = default_gabidulin(F8, 3, 2)
    assert code.min_distance() == 2


def test_weight_spectrum_examples():
    trivial = RankCode(F8, [(1,)])
    assert trivial.weight_spectrum() == {1: 1}

    spx = simplex(F8, 2)
    assert spx.parameters() == (2, 3, 6, 2)
    assert spx.weight_spectrum() == {3: 9}
    assert spx.min_distance() == 3

    gab = default_gabidulin(F8, 3, 2)
    spectrum = gab.weight_spectrum()
    assert min(spectrum) == 2
    # oracle: rank counts over all 63 nonzero codewords collapse 7-to-1 projectively
    full_counts: dict[int, int] = {}
    for value in range(1, 64):
        u = (value % 8, value // 8)
        r = rank_of(F8, gab.codeword(u))
        full_counts[r] = full_counts.get(r, 0) + 1
    assert {r: c // 7 for r, c in full_counts.items()} == spectrum


def test_is_nondegenerate():
    assert default_gabidulin(F8, 3, 2).is_nondegenerate()
    zero_col = RankCode(F8, [(1, 0, 0), (0, 1, 0)])
    assert not zero_col.is_nondegenerate()
    f4 = make_extension_field(2, 2)
    a = f4.alpha
    thin = RankCode(f4, [(1, a, f4.add(a, 1))])
    assert not thin.is_nondegenerate()


def test_apply_equivalence_identity_and_spectrum():
    rng = random.Random(8)
    code = default_gabidulin(F16, 4, 2)
    eye = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    assert code.apply_equivalence(eye).generator == code.generator
    for _ in range(10):
        a = random_invertible(rng, 4, 2)
        moved = code.apply_equivalence(a)
        assert moved.weight_spectrum() == code.weight_spectrum()


def test_apply_equivalence_rejects_singular():
    code = default_gabidulin(F8, 3, 2)
    with pytest.raises(SingularMatrix):
        code.apply_equivalence([[1, 0, 0], [0, 1, 0], [1, 1, 0]])


def test_support_transforms_with_equivalence():
    rng = random.Random(13)
    code = default_gabidulin(F16, 4, 2)
    for _ in range(20):
        a = random_invertible(rng, 4, 2)
        u = (rng.randrange(1, 16), rng.randrange(16))
        c = code.codeword(u)
        lhs = support(code.field, apply_to_vector(code.field, c, a))
        moved = [
            tuple(sum(v[l] * a[l][j] for l in range(4)) % 2 for j in range(4))
            for v in support(code.field, c).basis
        ]
        assert lhs == FqSubspace.from_vectors(2, 4, moved)


def test_equivalence_composes():
    rng = random.Random(5)
    code = default_gabidulin(F8, 3, 2)
    for _ in range(10):
        a = random_invertible(rng, 3, 2)
        b = random_invertible(rng, 3, 2)
        ab = [
            tuple(sum(a[i][l] * b[l][j] for l in range(3)) % 2 for j in range(3))
            for i in range(3)
        ]
        assert code.apply_equivalence(a).apply_equivalence(b).generator == \
            code.apply_equivalence(ab).generator


def test_distance_bounds_and_singleton_on_random_codes():
    from rankintersect.properties import singleton_bound

    rng = random.Random(99)
    for _ in range(30):
        field = make_extension_field(2, rng.choice((3, 4)))
        n = rng.randint(1, 5)
        k = rng.randint(1, n)
        code = random_code(rng, field, n, k)
        d = code.min_distance()
        q, m, n_, k_ = code.parameters()
        assert 1 <= d <= min(n_, m)
        assert k_ * m <= max(m, n_) * (min(n_, m) - d + 1)
        assert d <= singleton_bound(q, m, n_, k_)


def test_projective_message_count():
    code = default_gabidulin(F8, 3, 2)
    msgs = list(code.projective_messages())
    assert len(msgs) == code.message_count() == 9
