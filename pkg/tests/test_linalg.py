"""F_q linear algebra: echelon forms, subspace lattice, enumeration orders."""

from __future__ import annotations

import random

import pytest

from rankintersect import linalg
from rankintersect.errors import (
    AmbientMismatch,
    DependentInput,
    EnumerationCapExceeded,
    SingularMatrix,
)
from rankintersect.fields import make_extension_field
from rankintersect.linalg import FqSubspace, complete_basis, rank, rref


def brute_force_span(rows, q):
    """Oracle: materialize the full row space by enumerating all combinations."""
    n = len(rows[0]) if rows else 0
    span = {tuple([0] * n)}
    for _ in range(len(rows)):
        pass
    vectors = [tuple(r) for r in rows]
    frontier = list(span)
    for vec in vectors:
        new_span = set()
        for base in span:
            for c in range(q):
                new_span.add(tuple((b + c * v) % q for b, v in zip(base, vec)))
        span = new_span
    return span


def random_subspace(rng, q, n, max_dim):
    vecs = [[rng.randrange(q) for _ in range(n)] for _ in range(rng.randint(0, max_dim))]
    return FqSubspace.from_vectors(q, n, vecs)


def test_rref_trivial_cases():
    assert rref([[0, 0], [0, 0]], 2) == []
    eye = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert rref(eye, 2) == [tuple(r) for r in eye]
    assert rref(rref(eye, 3), 3) == [tuple(r) for r in eye]


def test_rref_rank_against_span_oracle():
    rows = [(1, 1, 0), (0, 1, 1), (1, 0, 1)]
    span = brute_force_span(rows, 2)
    assert len(span) == 4  # dimension 2
    assert rank(rows, 2) == 2
    assert len(rref(rows, 2)) == 2


def test_rank_trivial():
    assert rank([[0] * 4 for _ in range(3)], 2) == 0
    assert rank([[1 if i == j else 0 for j in range(5)] for i in range(5)], 2) == 5


def test_rref_idempotent_and_canonical():
    rng = random.Random(42)
    for q in (2, 3):
        for _ in range(200):
            n = rng.randint(1, 6)
            rows = [[rng.randrange(q) for _ in range(n)] for _ in range(rng.randint(1, 6))]
            ech = rref(rows, q)
            assert rref(ech, q) == ech
            # a shuffled, rescaled basis of the same space gives the same canonical form
            mixed = [list(r) for r in ech]
            rng.shuffle(mixed)
            if mixed and q > 2:
                mixed[0] = [(2 * v) % q for v in mixed[0]]
            if len(mixed) >= 2:
                mixed[0] = [(a + b) % q for a, b in zip(mixed[0], mixed[-1])]
            assert rref(mixed, q) == ech


def test_grassmann_identity_random_pairs():
    rng = random.Random(7)
    checked = 0
    for q in (2, 3):
        for _ in range(600):
            n = rng.randint(1, 6)
            u = random_subspace(rng, q, n, 4)
            w = random_subspace(rng, q, n, 4)
            inter = u.intersect(w)
            total = u.sum(w)
            assert u.dim + w.dim == total.dim + inter.dim
            checked += 1
    assert checked >= 1000


def test_intersect_examples():
    e = lambda i: tuple(1 if j == i else 0 for j in range(4))
    u = FqSubspace.from_vectors(2, 4, [e(0), e(1)])
    w = FqSubspace.from_vectors(2, 4, [e(1), e(2)])
    assert u.intersect(u) == u
    zero = FqSubspace.zero(2, 4)
    assert u.intersect(zero) == zero
    assert u.intersect(w) == FqSubspace.from_vectors(2, 4, [e(1)])


def test_sum_examples():
    e = lambda i: tuple(1 if j == i else 0 for j in range(3))
    u = FqSubspace.from_vectors(2, 3, [e(0)])
    w = FqSubspace.from_vectors(2, 3, [e(1)])
    assert u.sum(FqSubspace.zero(2, 3)) == u
    assert u.sum(u) == u
    assert u.sum(w) == FqSubspace.from_vectors(2, 3, [e(0), e(1)])


def test_ambient_mismatch():
    u = FqSubspace.from_vectors(2, 3, [(1, 0, 0)])
    w = FqSubspace.from_vectors(2, 4, [(1, 0, 0, 0)])
    with pytest.raises(AmbientMismatch):
        u.intersect(w)
    with pytest.raises(AmbientMismatch):
        u.sum(w)


def test_complete_basis():
    assert complete_basis([], 3, 2) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert complete_basis([(0, 0, 1)], 3, 2) == [(0, 0, 1), (1, 0, 0), (0, 1, 0)]
    full = [(1, 0), (0, 1)]
    assert complete_basis(full, 2, 2) == full
    with pytest.raises(DependentInput):
        complete_basis([(1, 1, 0), (1, 1, 0)], 3, 2)
    rng = random.Random(3)
    for _ in range(100):
        q = rng.choice((2, 3))
        n = rng.randint(1, 6)
        space = random_subspace(rng, q, n, n)
        result = complete_basis(list(space.basis), n, q)
        assert rank(result, q) == n


def test_enumerate_vectors_counts():
    zero = FqSubspace.zero(2, 4)
    assert list(zero.enumerate_vectors()) == []
    line = FqSubspace.from_vectors(2, 4, [(1, 1, 0, 0)])
    assert list(line.enumerate_vectors()) == [(1, 1, 0, 0)]
    space = FqSubspace.from_vectors(2, 5, [(1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0)])
    vecs = list(space.enumerate_vectors())
    assert len(vecs) == 7
    assert len(set(vecs)) == 7
    with pytest.raises(EnumerationCapExceeded):
        list(space.enumerate_vectors(cap=3))


def test_enumeration_order_is_deterministic():
    space = FqSubspace.from_vectors(3, 2, [(1, 0), (0, 1)])
    vecs = list(space.enumerate_vectors())
    # counter digits are little-endian coefficients of the echelon basis rows
    assert vecs[:4] == [(1, 0), (2, 0), (0, 1), (1, 1)]


def test_hyperplane_counts():
    f8 = make_extension_field(2, 3)
    assert len(list(linalg.hyperplane_duals(f8, 2))) == 9
    assert list(linalg.hyperplane_duals(f8, 1)) == [(1,)]
    f32 = make_extension_field(2, 5)
    assert len(list(linalg.hyperplane_duals(f32, 3))) == 1057
    assert len(list(linalg.hyperplane_duals(f32, 2))) == 33


def test_projective_reps_normalized_and_ordered():
    f = make_extension_field(2, 2)
    reps = list(linalg.projective_reps(f, 2))
    assert reps[0] == (0, 1)
    assert all(next(v for v in rep if v) == 1 for rep in reps)
    assert len(reps) == len(set(reps)) == 5


def test_invert_matrix():
    rng = random.Random(11)
    for q in (2, 3, 5):
        for _ in range(50):
            n = rng.randint(1, 5)
            rows = [[rng.randrange(q) for _ in range(n)] for _ in range(n)]
            if rank(rows, q) < n:
                with pytest.raises(SingularMatrix):
                    linalg.invert_matrix(rows, q)
                continue
            inv = linalg.invert_matrix(rows, q)
            prod = [
                tuple(sum(rows[i][l] * inv[l][j] for l in range(n)) % q for j in range(n))
                for i in range(n)
            ]
            assert prod == [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]


def test_nullspace_rank_nullity():
    rng = random.Random(13)
    for q in (2, 3):
        for _ in range(100):
            n = rng.randint(1, 6)
            rows = [[rng.randrange(q) for _ in range(n)] for _ in range(rng.randint(1, 5))]
            ns = linalg.nullspace(rows, q, n)
            assert len(ns) == n - rank(rows, q)
            for vec in ns:
                for row in rows:
                    assert sum(a * b for a, b in zip(row, vec)) % q == 0


def test_dual_dimensions_and_double_dual():
    rng = random.Random(17)
    for _ in range(50):
        q = rng.choice((2, 3))
        n = rng.randint(1, 6)
        u = random_subspace(rng, q, n, n)
        d = u.dual()
        assert d.dim == n - u.dim
        assert d.dual() == u
