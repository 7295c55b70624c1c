"""Seeded random generators shared by the test modules.

Everything takes an explicit random.Random so failures reproduce; no
test entropy comes from global state.
"""

import random

from dirac_kit import exact_linalg as xl
from dirac_kit.exact_linalg import Mat, Subspace
from dirac_kit.dirac import (
    Bivector,
    LinearDualPairData,
    LinearMap,
    SkewForm,
    dirac_from_form,
    dirac_from_range_form,
    forward,
    presymp_orthogonal,
)


def rand_mat(rng: random.Random, rows: int, cols: int, lo: int = -3, hi: int = 3) -> Mat:
    return Mat([[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)], cols)


def rand_skew_mat(rng: random.Random, n: int) -> Mat:
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = rng.randint(-3, 3)
            m[i][j] = v
            m[j][i] = -v
    return Mat(m, n)


def rand_skew(rng: random.Random, n: int) -> SkewForm:
    return SkewForm(rand_skew_mat(rng, n))


def rand_bivector(rng: random.Random, n: int) -> Bivector:
    return Bivector(rand_skew_mat(rng, n))


def rand_subspace(rng: random.Random, ambient: int, dim_hint: int | None = None) -> Subspace:
    rows = rng.randint(0, ambient) if dim_hint is None else dim_hint
    return Subspace(ambient, rand_mat(rng, rows, ambient, -2, 2))


def rand_dirac(rng: random.Random, n: int):
    """Uniform over ranges: every structure is (range, leaf form) for one pair."""
    r = rand_subspace(rng, n)
    return dirac_from_range_form(r, rand_skew(rng, r.dim))


def rand_invertible(rng: random.Random, n: int) -> Mat:
    while True:
        m = rand_mat(rng, n, n)
        if m.inverse() is not None:
            return m


def rand_injective(rng: random.Random, target: int, source: int) -> LinearMap:
    """Full column rank; requires target >= source."""
    while True:
        m = rand_mat(rng, target, source)
        if m.rank() == source:
            return LinearMap(m)


def rand_surjective(rng: random.Random, target: int, source: int) -> LinearMap:
    """Full row rank; requires source >= target."""
    while True:
        m = rand_mat(rng, target, source)
        if m.rank() == target:
            return LinearMap(m)


def rand_nondegenerate(rng: random.Random, two_m: int) -> SkewForm:
    """Standard symplectic blocks conjugated by a random invertible matrix."""
    if two_m % 2:
        raise ValueError("nondegenerate skew forms need even dimension")
    std = [[0] * two_m for _ in range(two_m)]
    for i in range(two_m // 2):
        std[2 * i][2 * i + 1] = 1
        std[2 * i + 1][2 * i] = -1
    t = rand_invertible(rng, two_m)
    return SkewForm(t.transpose() @ Mat(std, two_m) @ t)


def rand_dual_pair(rng: random.Random, two_m: int) -> LinearDualPairData:
    """Full dual pair: legs are the quotients by a subspace and its orthogonal."""
    om = rand_nondegenerate(rng, two_m)
    c = rand_subspace(rng, two_m)
    j2 = LinearMap(xl.quotient_map(c))
    j1 = LinearMap(xl.quotient_map(presymp_orthogonal(c, om)))
    l_om = dirac_from_form(om)
    return LinearDualPairData(om, j1, j2, forward(j1, l_om), forward(j2, l_om))
