"""Pair groupoids V x V over a symplectic vector space.

The product carries the difference form Omega (+) -Omega, the two
projections as source and target, and the multiplication relation
{((a,b),(b,c),(a,c))}.  This is the linear model in which the gauge
and Morita statements of the package are exactly checkable: twisting
by a form on the base keeps the multiplication graph lagrangian, and
the shifted form Omega_G - beta*B turns the two projections into a
dual pair between a structure and its gauge transform.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import exact_linalg as xl
from .exact_linalg import Mat, Subspace
from .dirac import (
    Bivector,
    LinearDualPairData,
    LinearMap,
    PreconditionError,
    SkewForm,
    Verdict,
    check_dual_pair,
    dirac_from_bivector,
    gauge_bivector,
    pullback_form,
    symplectic_bivector,
)


@dataclass(frozen=True)
class LinearPairGroupoid:
    base_dim: int
    omega: SkewForm
    omega_g: SkewForm
    alpha: LinearMap
    beta: LinearMap
    mult_graph: Subspace


def make_pair_groupoid(omega: SkewForm) -> LinearPairGroupoid:
    """Assemble V x V with the difference form; rejects degenerate omega."""
    n = omega.dim
    if omega.m.inverse() is None:
        raise PreconditionError("base form is degenerate")
    omega_g = SkewForm(xl.block_diag(omega.m, -omega.m))
    alpha = LinearMap(Mat.identity(n).hstack(Mat.zeros(n, n)))
    beta = LinearMap(Mat.zeros(n, n).hstack(Mat.identity(n)))
    ident = Mat.identity(n)
    zero = Mat.zeros(n, n)
    # rows parametrized by the three slot values a, b, c
    a_rows = ident.hstack(zero).hstack(zero).hstack(zero).hstack(ident).hstack(zero)
    b_rows = zero.hstack(ident).hstack(ident).hstack(zero).hstack(zero).hstack(zero)
    c_rows = zero.hstack(zero).hstack(zero).hstack(ident).hstack(zero).hstack(ident)
    mult = Subspace(6 * n, a_rows.vstack(b_rows).vstack(c_rows))
    return LinearPairGroupoid(n, omega, omega_g, alpha, beta, mult)


def gauge_groupoid_form(g: LinearPairGroupoid, b: SkewForm) -> SkewForm:
    """Omega_G + alpha*B - beta*B, which is (Omega+B) (+) -(Omega+B)."""
    return SkewForm(
        g.omega_g.m + pullback_form(g.alpha, b).m - pullback_form(g.beta, b).m
    )


def check_multiplicative(g: LinearPairGroupoid, form: SkewForm) -> bool:
    """Whether the multiplication graph is lagrangian for form x form x -form."""
    if form.dim != 2 * g.base_dim:
        raise xl.DimensionError("form does not live on the groupoid space")
    big = xl.block_diag(form.m, form.m, -form.m)
    m = g.mult_graph.basis
    half = 3 * g.base_dim
    return g.mult_graph.dim == half and (m @ big @ m.transpose()).is_zero()


def morita_bimodule_form(
    g: LinearPairGroupoid, b: SkewForm
) -> tuple[SkewForm, Verdict]:
    """The shifted form Omega_G - beta*B and its dual-pair verdict.

    The projections relate the base structure to its gauge transform
    (negated on the beta side, which reverses sign conventions); the
    precondition is that the gauge transform exists as a bivector.
    """
    pi = symplectic_bivector(g.omega)
    twisted = gauge_bivector(b, pi)
    if twisted is None:
        raise PreconditionError("gauged structure is not a bivector graph")
    omega_hat = SkewForm(g.omega_g.m - pullback_form(g.beta, b).m)
    data = LinearDualPairData(
        omega=omega_hat,
        j1=g.alpha,
        j2=g.beta,
        l1=dirac_from_bivector(pi),
        l2=dirac_from_bivector(-twisted),
        full=True,
    )
    return omega_hat, check_dual_pair(data, "dual")
