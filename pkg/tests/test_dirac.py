"""Constructors, functoriality, gauge action, and dual pairs."""

import random

import pytest

from dirac_kit import exact_linalg as xl
from dirac_kit.exact_linalg import DimensionError, Mat, Subspace
from dirac_kit.dirac import (
    Bivector,
    LinearDirac,
    LinearDualPairData,
    LinearMap,
    PreconditionError,
    SkewForm,
    apply_relation,
    backward,
    backward_relation,
    check_dual_pair,
    compose,
    conormal,
    diagonal_relation,
    dirac_from_bivector,
    dirac_from_form,
    dirac_from_kernel_bivector,
    dirac_from_range_form,
    form_kernel,
    forward,
    forward_relation,
    gauge,
    gauge_bivector,
    gauge_dual_pair,
    is_forward_dirac,
    kernel_vectors,
    leaf_form,
    presymp_orthogonal,
    pullback_form,
    pushforward_bivector,
    quotient_bivector,
    reduce_predual,
    rho_range,
    symplectic_bivector,
)

from helpers import (
    rand_bivector,
    rand_dirac,
    rand_dual_pair,
    rand_injective,
    rand_mat,
    rand_nondegenerate,
    rand_skew,
    rand_subspace,
    rand_surjective,
)

OM2 = SkewForm([[0, 1], [-1, 0]])
PI2 = Bivector([[0, 1], [-1, 0]])


def tangent(n):
    """V + 0 as a Dirac structure."""
    return LinearDirac(n, Subspace(2 * n, Mat.identity(n).hstack(Mat.zeros(n, n))))


def cotangent(n):
    """0 + V* as a Dirac structure."""
    return LinearDirac(n, Subspace(2 * n, Mat.zeros(n, n).hstack(Mat.identity(n))))


# ---------------------------------------------------------------------------
# constructors


def test_from_form_zero():
    assert dirac_from_form(SkewForm.zero(2)) == tangent(2)


def test_from_form_standard():
    l = dirac_from_form(OM2)
    assert l.space == Subspace(4, [[1, 0, 0, 1], [0, 1, -1, 0]])


def test_from_form_projects_onto_v():
    rng = random.Random(1)
    for _ in range(25):
        n = rng.randint(1, 5)
        assert rho_range(dirac_from_form(rand_skew(rng, n))) == Subspace.full(n)


def test_from_bivector_zero():
    assert dirac_from_bivector(Bivector.zero(2)) == cotangent(2)


def test_from_bivector_standard():
    # bivectors eat the right slot, so the vector block is P.T, not P
    l = dirac_from_bivector(PI2)
    assert l.space == Subspace(4, [[0, -1, 1, 0], [1, 0, 0, 1]])
    mirrored = Subspace(4, [[0, 1, 1, 0], [-1, 0, 0, 1]])
    assert dirac_from_bivector(-PI2).space == mirrored


def test_from_bivector_trivial_kernel():
    rng = random.Random(2)
    for _ in range(25):
        n = rng.randint(1, 5)
        assert kernel_vectors(dirac_from_bivector(rand_bivector(rng, n))).dim == 0


def test_from_range_form_full_range():
    assert dirac_from_range_form(Subspace.full(2), OM2) == dirac_from_form(OM2)


def test_from_range_form_zero_range():
    assert dirac_from_range_form(Subspace.zero(2), SkewForm.zero(0)) == cotangent(2)


def test_from_range_form_line():
    l = dirac_from_range_form(Subspace(2, [[1, 0]]), SkewForm.zero(1))
    assert l.space == Subspace(4, [[1, 0, 0, 0], [0, 0, 0, 1]])


def test_from_range_form_recovers_data():
    rng = random.Random(3)
    for _ in range(25):
        n = rng.randint(1, 5)
        r = rand_subspace(rng, n)
        a = rand_skew(rng, r.dim)
        l = dirac_from_range_form(r, a)
        r2, a2 = leaf_form(l)
        assert r2 == r and a2 == a


def test_from_kernel_bivector_trivial_kernel():
    assert dirac_from_kernel_bivector(Subspace.zero(2), PI2) == dirac_from_bivector(PI2)


def test_from_kernel_bivector_full_kernel():
    assert dirac_from_kernel_bivector(Subspace.full(2), Bivector.zero(0)) == tangent(2)


def test_kernel_bivector_round_trip():
    rng = random.Random(4)
    for _ in range(40):
        l = rand_dirac(rng, rng.randint(1, 5))
        k, pi = quotient_bivector(l)
        assert dirac_from_kernel_bivector(k, pi) == l


def test_constructor_rejects_bad_input():
    with pytest.raises(ValueError, match="skew-symmetry violated"):
        SkewForm([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        LinearDirac(2, Subspace(4, [[1, 0, 0, 0]]))  # not half-dimensional
    with pytest.raises(ValueError):
        LinearDirac(2, Subspace(4, [[1, 0, 1, 0], [0, 1, 0, 1]]))  # not isotropic
    with pytest.raises(DimensionError):
        dirac_from_range_form(Subspace(2, [[1, 0]]), SkewForm.zero(2))


# ---------------------------------------------------------------------------
# distinguished subspaces


def test_kernel_of_nondegenerate_graph_is_zero():
    rng = random.Random(5)
    for _ in range(10):
        om = rand_nondegenerate(rng, 4)
        assert kernel_vectors(dirac_from_form(om)).dim == 0


def test_tangent_extremes():
    assert conormal(tangent(3)) == Subspace.zero(3)
    assert rho_range(tangent(3)) == Subspace.full(3)
    assert kernel_vectors(cotangent(3)) == Subspace.zero(3)


def test_range_annihilator_identities():
    """ann(range) is the conormal and ann(covector range) is the kernel."""
    rng = random.Random(6)
    for _ in range(50):
        n = rng.randint(1, 6)
        l = rand_dirac(rng, n)
        _, y = l.halves()
        assert xl.annihilator(rho_range(l)) == conormal(l)
        assert xl.annihilator(Subspace(n, y)) == kernel_vectors(l)


# ---------------------------------------------------------------------------
# leaf form and quotient bivector


def test_leaf_form_of_form_graph():
    r, a = leaf_form(dirac_from_form(OM2))
    assert r == Subspace.full(2) and a == OM2


def test_leaf_form_of_bivector_graph_is_symplectic():
    rng = random.Random(7)
    for _ in range(25):
        n = rng.randint(1, 5)
        pi = rand_bivector(rng, n)
        r, a = leaf_form(dirac_from_bivector(pi))
        assert r == xl.image(pi.m)
        assert a.m.rank() == r.dim  # nondegenerate on the range


def test_leaf_form_of_cotangent():
    r, a = leaf_form(cotangent(3))
    assert r.dim == 0 and a.m.shape == (0, 0)


def test_leaf_form_kernel_matches_kernel_vectors():
    rng = random.Random(8)
    for _ in range(40):
        n = rng.randint(1, 5)
        l = rand_dirac(rng, n)
        r, a = leaf_form(l)
        coeffs = xl.kernel_mat(a.m)
        assert Subspace(n, coeffs @ r.basis) == kernel_vectors(l)


def test_quotient_bivector_of_bivector_graph():
    k, pi = quotient_bivector(dirac_from_bivector(PI2))
    assert k.dim == 0 and pi == PI2


def test_quotient_bivector_of_symplectic_graph():
    # invert the 2x2 block by hand: the induced bivector of graph(OM2)
    k, pi = quotient_bivector(dirac_from_form(OM2))
    assert k.dim == 0
    assert pi == Bivector([[0, 1], [-1, 0]])
    assert pi == symplectic_bivector(OM2)


def test_quotient_bivector_of_tangent():
    k, pi = quotient_bivector(tangent(2))
    assert k == Subspace.full(2) and pi.dim == 0


def test_symplectic_bivector_graph_identity():
    rng = random.Random(9)
    for _ in range(10):
        om = rand_nondegenerate(rng, 4)
        assert dirac_from_bivector(symplectic_bivector(om)) == dirac_from_form(om)
    with pytest.raises(PreconditionError):
        symplectic_bivector(SkewForm.zero(2))


# ---------------------------------------------------------------------------
# relations


def test_identity_relations_are_diagonal():
    d = diagonal_relation(3)
    assert forward_relation(LinearMap.identity(3)) == d
    assert backward_relation(LinearMap.identity(3)) == d


def test_relation_of_zero_map():
    phi = LinearMap(Mat.zeros(2, 2))
    expected = Subspace(
        8,
        [
            [0, 0, 1, 0, 0, 0, 0, 0],
            [0, 0, 0, 1, 0, 0, 0, 0],
            [0, 0, 0, 0, 1, 0, 0, 0],
            [0, 0, 0, 0, 0, 1, 0, 0],
        ],
    )
    assert forward_relation(phi).space == expected


def test_relation_dimension():
    rng = random.Random(10)
    for _ in range(20):
        n, m = rng.randint(1, 4), rng.randint(1, 4)
        r = forward_relation(LinearMap(rand_mat(rng, m, n)))
        assert r.space.dim == n + m


def test_compose_with_diagonal():
    rng = random.Random(11)
    for _ in range(15):
        n, m = rng.randint(1, 4), rng.randint(1, 4)
        r = forward_relation(LinearMap(rand_mat(rng, m, n)))
        assert compose(diagonal_relation(m), r) == r
        assert compose(r, diagonal_relation(n)) == r


def test_compose_matches_map_composition():
    rng = random.Random(12)
    for _ in range(25):
        n, m, p = rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 4)
        phi = LinearMap(rand_mat(rng, m, n))
        psi = LinearMap(rand_mat(rng, n, p))
        lhs = compose(forward_relation(phi), forward_relation(psi))
        assert lhs == forward_relation(LinearMap(phi.m @ psi.m))


def test_backward_then_forward_of_injective_is_identity():
    rng = random.Random(13)
    for _ in range(20):
        n = rng.randint(1, 3)
        phi = rand_injective(rng, n + rng.randint(0, 2), n)
        assert compose(backward_relation(phi), forward_relation(phi)) == diagonal_relation(n)


def test_compose_dimension_mismatch():
    with pytest.raises(DimensionError):
        compose(forward_relation(LinearMap(Mat.zeros(2, 3))), diagonal_relation(2))


# ---------------------------------------------------------------------------
# forward and backward images


def test_forward_identity():
    rng = random.Random(14)
    for _ in range(15):
        l = rand_dirac(rng, rng.randint(1, 5))
        assert forward(LinearMap.identity(l.dim_v), l) == l


def test_forward_of_bivector_graph_is_pushforward():
    rng = random.Random(15)
    for _ in range(25):
        n = rng.randint(1, 4)
        m = rng.randint(1, n)
        phi = rand_surjective(rng, m, n)
        pi = rand_bivector(rng, n)
        lhs = forward(phi, dirac_from_bivector(pi))
        assert lhs == dirac_from_bivector(pushforward_bivector(phi, pi))


def test_backward_of_form_graph_is_pullback():
    rng = random.Random(16)
    for _ in range(25):
        n, m = rng.randint(1, 4), rng.randint(1, 4)
        phi = LinearMap(rand_mat(rng, m, n))
        om = rand_skew(rng, m)
        lhs = backward(phi, dirac_from_form(om))
        assert lhs == dirac_from_form(pullback_form(phi, om))


def test_functor_laws():
    rng = random.Random(17)
    for _ in range(25):
        n, m, p = rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 4)
        phi = LinearMap(rand_mat(rng, m, n))
        psi = LinearMap(rand_mat(rng, n, p))
        l = rand_dirac(rng, p)
        assert forward(LinearMap(phi.m @ psi.m), l) == forward(phi, forward(psi, l))
    for _ in range(15):
        n = rng.randint(1, 3)
        inj = rand_injective(rng, n + rng.randint(0, 2), n)
        l = rand_dirac(rng, n)
        assert backward(inj, forward(inj, l)) == l
        m = rng.randint(1, 3)
        sur = rand_surjective(rng, m, m + rng.randint(0, 2))
        lw = rand_dirac(rng, m)
        assert forward(sur, backward(sur, lw)) == lw


def test_images_agree_with_relations():
    rng = random.Random(18)
    for _ in range(30):
        n, m = rng.randint(1, 4), rng.randint(1, 4)
        phi = LinearMap(rand_mat(rng, m, n))
        l = rand_dirac(rng, n)
        assert apply_relation(forward_relation(phi), l) == forward(phi, l)
        lw = rand_dirac(rng, m)
        assert apply_relation(backward_relation(phi), lw) == backward(phi, lw)


def test_kernel_pushes_and_range_pulls():
    rng = random.Random(19)
    for _ in range(50):
        n, m = rng.randint(1, 5), rng.randint(1, 5)
        phi = LinearMap(rand_mat(rng, m, n))
        l = rand_dirac(rng, n)
        assert kernel_vectors(forward(phi, l)) == xl.map_subspace(phi.m, kernel_vectors(l))
        lw = rand_dirac(rng, m)
        assert rho_range(backward(phi, lw)) == xl.preimage(phi.m, rho_range(lw))


# ---------------------------------------------------------------------------
# gauge action


def test_gauge_zero_and_inverse():
    rng = random.Random(20)
    for _ in range(20):
        n = rng.randint(1, 5)
        l = rand_dirac(rng, n)
        b = rand_skew(rng, n)
        assert gauge(SkewForm.zero(n), l) == l
        assert gauge(SkewForm(-b.m), gauge(b, l)) == l


def test_gauge_of_form_graph():
    rng = random.Random(21)
    for _ in range(20):
        n = rng.randint(1, 5)
        om, b = rand_skew(rng, n), rand_skew(rng, n)
        assert gauge(b, dirac_from_form(om)) == dirac_from_form(om + b)


def test_gauge_preserves_range_and_shears_leaf_form():
    rng = random.Random(22)
    for _ in range(30):
        n = rng.randint(1, 5)
        l = rand_dirac(rng, n)
        b = rand_skew(rng, n)
        g = gauge(b, l)
        assert rho_range(g) == rho_range(l)
        r, a0 = leaf_form(l)
        _, a1 = leaf_form(g)
        assert a1.m == a0.m + r.basis @ b.m @ r.basis.transpose()


def test_gauge_bivector_instances():
    # shear coefficient -1/2 halves the covector block, doubling the bivector
    b = SkewForm([["0", "-1/2"], ["1/2", "0"]])
    assert gauge_bivector(b, PI2) == Bivector([[0, 2], [-2, 0]])
    # coefficient -1 collapses it entirely
    assert gauge_bivector(SkewForm([[0, -1], [1, 0]]), PI2) is None
    assert gauge_bivector(SkewForm.zero(2), PI2) == PI2


def test_gauge_bivector_matches_graph_gauge():
    rng = random.Random(23)
    present = absent = 0
    for _ in range(60):
        n = rng.randint(1, 5)
        pi, b = rand_bivector(rng, n), rand_skew(rng, n)
        out = gauge_bivector(b, pi)
        sheared = gauge(b, dirac_from_bivector(pi))
        if out is None:
            absent += 1
            assert kernel_vectors(sheared).dim > 0
        else:
            present += 1
            assert dirac_from_bivector(out) == sheared
    assert present and absent  # both branches exercised


def test_equivariance_of_forward_under_gauge():
    rng = random.Random(24)
    for _ in range(50):
        n, m = rng.randint(1, 5), rng.randint(1, 5)
        phi = LinearMap(rand_mat(rng, m, n))
        l = rand_dirac(rng, n)
        b = rand_skew(rng, m)
        assert forward(phi, gauge(pullback_form(phi, b), l)) == gauge(b, forward(phi, l))


# ---------------------------------------------------------------------------
# Dirac maps


def test_quotient_projection_is_dirac_map():
    rng = random.Random(25)
    for _ in range(25):
        l = rand_dirac(rng, rng.randint(1, 5))
        k, pi = quotient_bivector(l)
        q = LinearMap(xl.quotient_map(k))
        assert is_forward_dirac(q, l, dirac_from_bivector(pi))


def test_identity_not_dirac_between_different_structures():
    assert not is_forward_dirac(
        LinearMap.identity(2), dirac_from_form(OM2), dirac_from_form(SkewForm.zero(2))
    )


def test_poisson_map_criterion():
    rng = random.Random(26)
    hit_false = False
    for _ in range(30):
        n, m = rng.randint(1, 4), rng.randint(1, 4)
        phi = LinearMap(rand_mat(rng, m, n))
        pi1 = rand_bivector(rng, n)
        push = pushforward_bivector(phi, pi1)
        assert is_forward_dirac(phi, dirac_from_bivector(pi1), dirac_from_bivector(push))
        other = rand_bivector(rng, m)
        if other != push:
            hit_false = True
            assert not is_forward_dirac(
                phi, dirac_from_bivector(pi1), dirac_from_bivector(other)
            )
    assert hit_false


# ---------------------------------------------------------------------------
# presymplectic orthogonals


def test_orthogonal_of_zero_is_everything():
    assert presymp_orthogonal(Subspace.zero(3), SkewForm.zero(3)) == Subspace.full(3)


def test_orthogonal_hand_example():
    om = SkewForm(
        [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]
    )
    got = presymp_orthogonal(Subspace(4, [[1, 0, 0, 0]]), om)
    assert got == Subspace(4, [[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


def test_double_orthogonal():
    rng = random.Random(27)
    for _ in range(30):
        n = rng.randint(1, 6)
        w = rand_subspace(rng, n)
        om = rand_skew(rng, n)
        ww = presymp_orthogonal(presymp_orthogonal(w, om), om)
        assert ww.contains(w)
    for _ in range(15):
        w = rand_subspace(rng, 4)
        om = rand_nondegenerate(rng, 4)
        assert presymp_orthogonal(presymp_orthogonal(w, om), om) == w


# ---------------------------------------------------------------------------
# supporting identities behind the dual-pair verdict


def test_gauged_kernel_isomorphism():
    """A Poisson map restricts to an isomorphism between the sheared kernels."""
    rng = random.Random(28)
    for _ in range(40):
        two_m = rng.choice([2, 4])
        w = rng.randint(1, 3)
        om = rand_nondegenerate(rng, two_m)
        phi = LinearMap(rand_mat(rng, w, two_m))
        pi = pushforward_bivector(phi, symplectic_bivector(om))
        b = rand_skew(rng, w)
        sheared_form = SkewForm(om.m + pullback_form(phi, b).m)
        target_kernel = kernel_vectors(gauge(b, dirac_from_bivector(pi)))
        assert xl.map_subspace(phi.m, form_kernel(sheared_form)) == target_kernel
        assert xl.intersect(xl.kernel(phi.m), form_kernel(sheared_form)).dim == 0
        assert (form_kernel(sheared_form).dim == 0) == (target_kernel.dim == 0)


def _leaf_orthogonal(l, s):
    """Orthogonal of s inside the range, for the leaf form."""
    r, a = leaf_form(l)
    w = xl.intersect(s, r)
    coeffs = []
    for i in range(w.dim):
        c = xl.solve(r.basis.transpose(), w.basis.row(i))
        assert c is not None
        coeffs.append(c)
    sols = xl.kernel_mat(Mat(coeffs, r.dim) @ a.m.transpose())
    return Subspace(l.dim_v, sols @ r.basis)


def _pullback_support(phi, l):
    """{x : some covector of the target pulls back to pair with x in l}."""
    n, m = phi.source_dim, phi.target_dim
    ann = xl.annihilator(l.space).basis
    nx, neta = ann.cols(range(n)), ann.cols(range(n, 2 * n))
    sols = xl.kernel_mat(nx.hstack(neta @ phi.m.transpose()))
    return Subspace(n, sols.cols(range(n)))


def test_fiberwise_orthogonal_identity():
    rng = random.Random(29)
    for _ in range(40):
        n, m = rng.randint(1, 5), rng.randint(1, 4)
        l = rand_dirac(rng, n)
        phi = LinearMap(rand_mat(rng, m, n))
        lhs = _leaf_orthogonal(l, xl.kernel(phi.m))
        assert lhs == _pullback_support(phi, l)


def test_leg_stays_dirac_after_other_leg_shear():
    rng = random.Random(30)
    for _ in range(25):
        d = rand_dual_pair(rng, rng.choice([2, 4, 6]))
        b = rand_skew(rng, d.j2.target_dim)
        sheared = gauge(pullback_form(d.j2, b), dirac_from_form(d.omega))
        assert forward(d.j1, sheared) == d.l1


def test_orthogonals_after_one_leg_shear():
    rng = random.Random(31)
    for _ in range(25):
        d = rand_dual_pair(rng, rng.choice([2, 4, 6]))
        b = rand_skew(rng, d.j2.target_dim)
        om2 = SkewForm(d.omega.m + pullback_form(d.j2, b).m)
        k1 = xl.kernel(d.j1.m)
        k2 = xl.kernel(d.j2.m)
        assert presymp_orthogonal(k2, om2) == presymp_orthogonal(k2, d.omega)
        assert presymp_orthogonal(k2, d.omega) == k1
        assert presymp_orthogonal(k1, om2) == xl.sum_(
            presymp_orthogonal(k1, d.omega), form_kernel(om2)
        )


# ---------------------------------------------------------------------------
# dual pairs


def _pair_groupoid_dual_pair():
    a = OM2.m
    og = SkewForm(
        a.hstack(Mat.zeros(2, 2)).vstack(Mat.zeros(2, 2).hstack(-a))
    )
    pr1 = LinearMap(Mat.identity(2).hstack(Mat.zeros(2, 2)))
    pr2 = LinearMap(Mat.zeros(2, 2).hstack(Mat.identity(2)))
    pi = symplectic_bivector(OM2)
    return LinearDualPairData(
        og, pr1, pr2, dirac_from_bivector(pi), dirac_from_bivector(-pi)
    )


def test_product_projections_form_dual_pair():
    d = _pair_groupoid_dual_pair()
    v = check_dual_pair(d, "dual")
    assert v.ok, v.failed()
    # the second projection lands on the opposite bivector
    assert forward(d.j2, dirac_from_form(d.omega)) == d.l2


def test_dual_pairs_are_predual_pairs():
    rng = random.Random(32)
    for _ in range(15):
        d = rand_dual_pair(rng, rng.choice([2, 4, 6]))
        assert check_dual_pair(d, "dual").ok
        assert check_dual_pair(d, "predual").ok


def test_broken_pair_names_the_axiom():
    d = _pair_groupoid_dual_pair()
    broken = LinearDualPairData(d.omega, d.j2, d.j2, d.l2, d.l2)
    v = check_dual_pair(broken, "dual")
    assert not v.ok
    assert "kernel_orthogonality" in v.failed()
    assert check_dual_pair(d, "dual").ok
    with pytest.raises(ValueError):
        check_dual_pair(d, "sideways")


def test_gauge_dual_pair_zero_forms():
    d = _pair_groupoid_dual_pair()
    oh, v = gauge_dual_pair(d, SkewForm.zero(2), SkewForm.zero(2))
    assert oh == d.omega and v.ok


def test_gauge_dual_pair_degenerate_case():
    """A shear that kills one target reports degenerate and non-graph together."""
    d = _pair_groupoid_dual_pair()
    b2 = SkewForm([[0, 1], [-1, 0]])
    assert gauge_bivector(b2, quotient_bivector(d.l2)[1]) is None
    oh, v = gauge_dual_pair(d, SkewForm.zero(2), b2)
    assert v.ok, v.failed()
    info = dict(v.info)
    assert not info["omega_hat_nondegenerate"]
    assert not info["gauged_targets_bivector_graphs"]
    assert form_kernel(oh).dim > 0


def test_gauge_dual_pair_random_property():
    rng = random.Random(33)
    for _ in range(25):
        d = rand_dual_pair(rng, rng.choice([2, 4, 6]))
        b1 = rand_skew(rng, d.j1.target_dim)
        b2 = rand_skew(rng, d.j2.target_dim)
        _, v = gauge_dual_pair(d, b1, b2)
        assert v.ok, v.failed()


def test_gauge_dual_pair_rejects_non_pairs():
    d = _pair_groupoid_dual_pair()
    broken = LinearDualPairData(d.omega, d.j2, d.j2, d.l2, d.l2)
    with pytest.raises(PreconditionError, match="kernel_orthogonality"):
        gauge_dual_pair(broken, SkewForm.zero(2), SkewForm.zero(2))


def test_reduce_predual_of_dual_pair_is_identity():
    d = _pair_groupoid_dual_pair()
    red = reduce_predual(d)
    assert red == d


def _gauge_then_reduce(d, b1, b2):
    oh, _ = gauge_dual_pair(d, b1, b2)
    gauged = LinearDualPairData(oh, d.j1, d.j2, gauge(b1, d.l1), gauge(b2, d.l2))
    assert check_dual_pair(gauged, "predual").ok
    red = reduce_predual(gauged)
    assert check_dual_pair(red, "dual").ok, check_dual_pair(red, "dual").failed()
    assert red.omega.dim == oh.dim - form_kernel(oh).dim
    return form_kernel(oh).dim


def test_reduce_predual_after_degenerate_gauge():
    # a twist that collapses one target forces a genuine quotient
    d = _pair_groupoid_dual_pair()
    dropped = _gauge_then_reduce(d, SkewForm.zero(2), SkewForm([[0, 1], [-1, 0]]))
    assert dropped > 0
    rng = random.Random(34)
    for _ in range(20):
        d = rand_dual_pair(rng, rng.choice([2, 4]))
        b1 = rand_skew(rng, d.j1.target_dim)
        b2 = rand_skew(rng, d.j2.target_dim)
        _gauge_then_reduce(d, b1, b2)


def test_reduce_predual_rejects_non_pairs():
    d = _pair_groupoid_dual_pair()
    broken = LinearDualPairData(d.omega, d.j2, d.j2, d.l2, d.l2)
    with pytest.raises(PreconditionError):
        reduce_predual(broken)
