"""Rational matrix and subspace algebra."""

from __future__ import annotations

import random

from dirac_kit.exact_linalg import (
    Mat,
    Subspace,
    annihilator,
    contains,
    dot,
    equal,
    image,
    intersect,
    kernel,
    kernel_mat,
    map_subspace,
    preimage,
    quotient_map,
    rat,
    rat_str,
    rref,
    solve,
    sum_,
)


def _random_mat(rng: random.Random, nrows: int, ncols: int, lo: int = -5, hi: int = 5) -> Mat:
    return Mat([[rng.randint(lo, hi) for _ in range(ncols)] for _ in range(nrows)])


def _random_subspace(rng: random.Random, ambient: int) -> Subspace:
    nrows = rng.randint(0, ambient)
    return Subspace(ambient, _random_mat(rng, nrows, ambient) if nrows else Mat([], ambient))


def test_rat_roundtrip():
    assert rat_str(rat("3/4")) == "3/4"
    assert rat_str(rat(-7)) == "-7"
    assert rat("2/4") == rat("1/2")


def test_rref_identity():
    i3 = Mat.identity(3)
    assert rref(i3) == i3


def test_rref_dependent_rows():
    assert rref(Mat([[2, 4], [1, 2]])) == Mat([[1, 2]])


def test_rref_zero_matrix_drops_rows():
    assert rref(Mat.zeros(3, 2)).nrows == 0


def test_rref_idempotent_random():
    rng = random.Random(7)
    for _ in range(50):
        m = _random_mat(rng, rng.randint(1, 5), rng.randint(1, 5))
        r = rref(m)
        assert rref(r) == r


def test_kernel_identity_is_zero():
    assert kernel(Mat.identity(4)) == Subspace.zero(4)


def test_kernel_direct_solve():
    assert kernel(Mat([[1, 1]])) == Subspace(2, [[1, -1]])


def test_kernel_zero_map_is_everything():
    assert kernel(Mat.zeros(2, 2)) == Subspace.full(2)


def test_kernel_rank_nullity_random():
    rng = random.Random(11)
    for _ in range(100):
        m = _random_mat(rng, rng.randint(1, 6), rng.randint(1, 6))
        assert kernel(m).dim == m.ncols - m.rank()
        for row in kernel_mat(m).data:
            assert all(x == 0 for x in m.apply(row))


def test_annihilator_of_axis():
    assert annihilator(Subspace(2, [[1, 0]])) == Subspace(2, [[0, 1]])


def test_intersect_hand_case():
    a = Subspace(3, [[1, 0, 0], [0, 1, 0]])
    b = Subspace(3, [[0, 1, 0], [0, 0, 1]])
    assert intersect(a, b) == Subspace(3, [[0, 1, 0]])


def test_sum_with_zero():
    rng = random.Random(3)
    a = _random_subspace(rng, 4)
    assert sum_(a, Subspace.zero(4)) == a


def test_contains_and_equal():
    assert equal(Subspace(2, [[1, 1]]), Subspace(2, [[2, 2]]))
    assert contains(Subspace.full(2), Subspace(2, [[1, 0]]))
    assert not contains(Subspace(2, [[1, 0]]), Subspace(2, [[0, 1]]))


def test_dimension_formula_random():
    # dim(a+b) + dim(a∩b) = dim a + dim b
    rng = random.Random(23)
    for _ in range(200):
        ambient = rng.randint(1, 8)
        a = _random_subspace(rng, ambient)
        b = _random_subspace(rng, ambient)
        assert sum_(a, b).dim + intersect(a, b).dim == a.dim + b.dim


def test_double_annihilator_random():
    rng = random.Random(29)
    for _ in range(200):
        a = _random_subspace(rng, rng.randint(1, 8))
        assert annihilator(annihilator(a)) == a


def test_solve_particular():
    m = Mat([[1, 2], [0, 1]])
    x = solve(m, [rat(5), rat(2)])
    assert x is not None and m.apply(x) == (rat(5), rat(2))
    assert solve(Mat([[1, 1], [1, 1]]), [rat(0), rat(1)]) is None


def test_inverse():
    m = Mat([[1, 2], [3, 5]])
    inv = m.inverse()
    assert inv is not None and m @ inv == Mat.identity(2)
    assert Mat([[1, 2], [2, 4]]).inverse() is None


def test_image_and_map_subspace():
    m = Mat([[1, 0], [0, 0]])
    assert image(m) == Subspace(2, [[1, 0]])
    s = Subspace(2, [[0, 1]])
    assert map_subspace(m, s) == Subspace.zero(2)


def test_preimage_random_membership():
    rng = random.Random(31)
    for _ in range(100):
        n, p = rng.randint(1, 5), rng.randint(1, 5)
        m = _random_mat(rng, p, n)
        s = _random_subspace(rng, p)
        pre = preimage(m, s)
        for row in pre.basis.data:
            assert s.contains_vector(m.apply(row))
        assert pre.dim >= n - p + intersect(image(m), s).dim


def test_quotient_map_kills_exactly_kernel():
    rng = random.Random(37)
    for _ in range(100):
        n = rng.randint(1, 6)
        k = _random_subspace(rng, n)
        q = quotient_map(k)
        assert q.shape == (n - k.dim, n)
        assert kernel(q) == k
        assert q.rank() == n - k.dim


def test_quotient_map_section_roundtrip():
    k = Subspace(3, [[1, 2, 0]])
    q = quotient_map(k)
    # standard vectors on complement coordinates map to the standard basis
    comp = k.complement_coords()
    for t, j in enumerate(comp):
        e = [0] * 3
        e[j] = 1
        out = q.apply([rat(x) for x in e])
        assert [int(x) for x in out] == [1 if s == t else 0 for s in range(len(comp))]


def test_dot_exact():
    assert dot((rat(1), rat("1/2")), (rat(2), rat(4))) == rat(4)
