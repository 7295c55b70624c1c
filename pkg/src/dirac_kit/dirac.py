"""Linear Dirac structures on Q^n in exact arithmetic.

A Dirac structure here is a subspace L of V + V* (coordinates ordered
x | eta) that is maximally isotropic for the pairing
<(x, omega), (y, mu)> = (omega(y) + mu(x)) / 2.  Everything in this
module follows from two matrix conventions, fixed once:

  * a skew form B with matrix A takes the vector u to the covector
    row(u) @ A, so B(u, v) = row(u) @ A @ col(v) and graph(B) has
    basis [I | A];
  * a bivector pi with matrix P takes the covector nu to the vector
    row(nu) @ P.T, so pi(eta, nu) = row(eta) @ P @ col(nu) and
    graph(pi) has basis [P.T | I].

The asymmetry (forms eat the left slot, bivectors the right) is what
makes the push/pull and gauge identities below come out sign-free;
getting it backwards silently breaks the Poisson-map criterion, which
the tests pin down.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import exact_linalg as xl
from .exact_linalg import DimensionError, Mat, Subspace


class PreconditionError(ValueError):
    """A mathematical precondition of an operation is violated."""


class SkewForm:
    """Skew-symmetric bilinear form; B(u, v) = row(u) @ m @ col(v)."""

    __slots__ = ("m",)

    def __init__(self, m):
        if not isinstance(m, Mat):
            m = Mat(m)
        if not m.is_skew():
            raise ValueError("skew-symmetry violated")
        self.m = m

    @classmethod
    def zero(cls, n: int) -> "SkewForm":
        return cls(Mat.zeros(n, n))

    @property
    def dim(self) -> int:
        return self.m.ncols

    def __add__(self, other: "SkewForm") -> "SkewForm":
        return SkewForm(self.m + other.m)

    def __neg__(self) -> "SkewForm":
        return SkewForm(-self.m)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SkewForm) and self.m == other.m

    def __hash__(self) -> int:
        return hash(("SkewForm", self.m))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"SkewForm({self.m!r})"


class Bivector:
    """Skew bivector; pi(eta, nu) = row(eta) @ m @ col(nu)."""

    __slots__ = ("m",)

    def __init__(self, m):
        if not isinstance(m, Mat):
            m = Mat(m)
        if not m.is_skew():
            raise ValueError("skew-symmetry violated")
        self.m = m

    @classmethod
    def zero(cls, n: int) -> "Bivector":
        return cls(Mat.zeros(n, n))

    @property
    def dim(self) -> int:
        return self.m.ncols

    def __neg__(self) -> "Bivector":
        return Bivector(-self.m)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Bivector) and self.m == other.m

    def __hash__(self) -> int:
        return hash(("Bivector", self.m))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Bivector({self.m!r})"


class LinearMap:
    """Linear map acting on coordinate columns; m is target x source."""

    __slots__ = ("m",)

    def __init__(self, m):
        self.m = m if isinstance(m, Mat) else Mat(m)

    @classmethod
    def identity(cls, n: int) -> "LinearMap":
        return cls(Mat.identity(n))

    @property
    def source_dim(self) -> int:
        return self.m.ncols

    @property
    def target_dim(self) -> int:
        return self.m.nrows

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LinearMap) and self.m == other.m

    def __hash__(self) -> int:
        return hash(("LinearMap", self.m))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"LinearMap({self.m!r})"


def _halves(basis: Mat, n: int) -> tuple[Mat, Mat]:
    return basis.cols(range(n)), basis.cols(range(n, 2 * n))


class LinearDirac:
    """Maximally isotropic subspace of V + V*, validated on construction."""

    __slots__ = ("dim_v", "space")

    def __init__(self, dim_v: int, space: Subspace):
        if space.ambient != 2 * dim_v:
            raise DimensionError(
                f"ambient {space.ambient} does not match 2*{dim_v}"
            )
        if space.dim != dim_v:
            raise ValueError(
                f"subspace of dimension {space.dim} is not maximal in V+V* over Q^{dim_v}"
            )
        x, y = _halves(space.basis, dim_v)
        if not (x @ y.transpose() + y @ x.transpose()).is_zero():
            raise ValueError("subspace is not isotropic for the canonical pairing")
        self.dim_v = dim_v
        self.space = space

    def halves(self) -> tuple[Mat, Mat]:
        """Basis split into vector and covector blocks [X | Y]."""
        return _halves(self.space.basis, self.dim_v)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, LinearDirac)
            and self.dim_v == other.dim_v
            and self.space == other.space
        )

    def __hash__(self) -> int:
        return hash(("LinearDirac", self.dim_v, self.space))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"LinearDirac(dim_v={self.dim_v}, {self.space!r})"


class LinearRelation:
    """Lagrangian relation between V + V* spaces.

    Coordinates are ordered (target x | target eta | source x | source
    eta); lagrangian means half-dimensional and isotropic for the
    pairing that flips sign on the source factor.
    """

    __slots__ = ("source_dim", "target_dim", "space")

    def __init__(self, source_dim: int, target_dim: int, space: Subspace):
        if space.ambient != 2 * (source_dim + target_dim):
            raise DimensionError("relation ambient does not match its dims")
        if space.dim != source_dim + target_dim:
            raise ValueError("relation subspace is not half-dimensional")
        b = space.basis
        xt, yt = _halves(b.cols(range(2 * target_dim)), target_dim)
        xs, ys = _halves(
            b.cols(range(2 * target_dim, 2 * (target_dim + source_dim))), source_dim
        )
        skew = (
            xt @ yt.transpose()
            + yt @ xt.transpose()
            - xs @ ys.transpose()
            - ys @ xs.transpose()
        )
        if not skew.is_zero():
            raise ValueError("relation is not isotropic for the twisted pairing")
        self.source_dim = source_dim
        self.target_dim = target_dim
        self.space = space

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, LinearRelation)
            and (self.source_dim, self.target_dim) == (other.source_dim, other.target_dim)
            and self.space == other.space
        )

    def __hash__(self) -> int:
        return hash(("LinearRelation", self.source_dim, self.target_dim, self.space))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"LinearRelation({self.source_dim}->{self.target_dim}, {self.space!r})"


@dataclass(frozen=True)
class Verdict:
    """Named axiom outcomes; ok only when every check passes.

    info entries are observations (reported, never failed) so bulk
    property tests can assert ok even on degenerate instances.
    """

    checks: tuple[tuple[str, bool], ...]
    info: tuple[tuple[str, bool], ...] = ()

    @property
    def ok(self) -> bool:
        return all(v for _, v in self.checks)

    def failed(self) -> tuple[str, ...]:
        return tuple(name for name, v in self.checks if not v)

    def check(self, name: str) -> bool:
        for k, v in self.checks:
            if k == name:
                return v
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": {k: v for k, v in self.checks},
            "info": {k: v for k, v in self.info},
        }


@dataclass(frozen=True)
class LinearDualPairData:
    """Two maps out of a common presymplectic space with Dirac targets."""

    omega: SkewForm
    j1: LinearMap
    j2: LinearMap
    l1: LinearDirac
    l2: LinearDirac
    full: bool = True

    def __post_init__(self):
        s = self.omega.dim
        if self.j1.source_dim != s or self.j2.source_dim != s:
            raise DimensionError("leg sources do not match the central space")
        if self.j1.target_dim != self.l1.dim_v or self.j2.target_dim != self.l2.dim_v:
            raise DimensionError("leg targets do not match their Dirac structures")


# ---------------------------------------------------------------------------
# constructors


def dirac_from_form(omega: SkewForm) -> LinearDirac:
    """Graph {(x, B(x))} of a skew form; basis [I | A]."""
    n = omega.dim
    basis = Mat.identity(n).hstack(omega.m)
    return LinearDirac(n, Subspace(2 * n, basis))


def dirac_from_bivector(pi: Bivector) -> LinearDirac:
    """Graph {(pi(nu), nu)} of a bivector; basis [P.T | I]."""
    n = pi.dim
    basis = pi.m.transpose().hstack(Mat.identity(n))
    return LinearDirac(n, Subspace(2 * n, basis))


def dirac_from_range_form(r: Subspace, omega_r: SkewForm) -> LinearDirac:
    """The structure with range r and leaf form omega_r (in r's rref basis).

    Every Dirac structure arises this way exactly once, so this doubles
    as the uniform random generator for property tests.
    """
    n = r.ambient
    k = r.dim
    if omega_r.dim != k:
        raise DimensionError("leaf form size does not match range dimension")
    etas = []
    for i in range(k):
        eta = xl.solve(r.basis, omega_r.m.row(i))
        assert eta is not None  # r.basis has full row rank
        etas.append(eta)
    graph_rows = r.basis.hstack(Mat(etas, n))
    ann_rows = Mat.zeros(n - k, n).hstack(xl.annihilator(r).basis)
    return LinearDirac(n, Subspace(2 * n, graph_rows.vstack(ann_rows)))


def dirac_from_kernel_bivector(k: Subspace, pi_q: Bivector) -> LinearDirac:
    """The structure with kernel k and induced bivector pi_q on the quotient.

    pi_q lives on the complement coordinates picked by quotient_map(k),
    so this inverts quotient_bivector exactly.
    """
    n = k.ambient
    q = xl.quotient_map(k)
    if pi_q.dim != q.nrows:
        raise DimensionError("quotient bivector size does not match codim of k")
    return backward(LinearMap(q), dirac_from_bivector(pi_q))


# ---------------------------------------------------------------------------
# the three distinguished subspaces and the two classifying datums


def rho_range(l: LinearDirac) -> Subspace:
    """Projection of L to V."""
    x, _ = l.halves()
    return Subspace(l.dim_v, x)


def kernel_vectors(l: LinearDirac) -> Subspace:
    """L intersected with V: the kernel of the leaf form."""
    x, y = l.halves()
    coeffs = xl.kernel_mat(y.transpose())
    return Subspace(l.dim_v, coeffs @ x)


def conormal(l: LinearDirac) -> Subspace:
    """L intersected with V*: the annihilator of the range."""
    x, y = l.halves()
    coeffs = xl.kernel_mat(x.transpose())
    return Subspace(l.dim_v, coeffs @ y)


def leaf_form(l: LinearDirac) -> tuple[Subspace, SkewForm]:
    """Range R plus the skew form eta|_R it carries, in R's rref basis.

    The form is well defined because any two covectors paired with the
    same vector differ by an annihilator of R.
    """
    x, y = l.halves()
    r = rho_range(l)
    rows = []
    for i in range(r.dim):
        c = xl.solve(x.transpose(), r.basis.row(i))
        assert c is not None  # basis rows lie in the row space of x
        eta = Mat([c]) @ y
        rows.append(tuple(xl.dot(eta.row(0), r.basis.row(j)) for j in range(r.dim)))
    return r, SkewForm(Mat(rows, r.dim))


def quotient_bivector(l: LinearDirac) -> tuple[Subspace, Bivector]:
    """Kernel K plus the bivector induced on V/K (complement coordinates)."""
    k = kernel_vectors(l)
    q = LinearMap(xl.quotient_map(k))
    lq = forward(q, l)
    xq, yq = lq.halves()
    inv = yq.inverse()
    assert inv is not None  # the quotient kills the kernel, so lq is a graph
    return k, Bivector((inv @ xq).transpose())


# ---------------------------------------------------------------------------
# functoriality


def forward(phi: LinearMap, l: LinearDirac) -> LinearDirac:
    """Push l through phi: {(phi(x), eta) : (x, phi^T eta) in l}."""
    n, m = phi.source_dim, phi.target_dim
    if l.dim_v != n:
        raise DimensionError("map source does not match the structure")
    ann = xl.annihilator(l.space).basis
    nx, neta = _halves(ann, n)
    constraints = nx.hstack(neta @ phi.m.transpose())
    sols = xl.kernel_mat(constraints)
    sx = sols.cols(range(n))
    se = sols.cols(range(n, n + m))
    return LinearDirac(m, Subspace(2 * m, (sx @ phi.m.transpose()).hstack(se)))


def backward(phi: LinearMap, l: LinearDirac) -> LinearDirac:
    """Pull l back through phi: {(x, phi^T eta) : (phi(x), eta) in l}."""
    n, m = phi.source_dim, phi.target_dim
    if l.dim_v != m:
        raise DimensionError("map target does not match the structure")
    ann = xl.annihilator(l.space).basis
    mx, meta = _halves(ann, m)
    constraints = (mx @ phi.m).hstack(meta)
    sols = xl.kernel_mat(constraints)
    sx = sols.cols(range(n))
    se = sols.cols(range(n, n + m))
    return LinearDirac(n, Subspace(2 * n, sx.hstack(se @ phi.m)))


def forward_relation(phi: LinearMap) -> LinearRelation:
    """The relation {(phi(x), eta, x, phi^T eta)}."""
    n, m = phi.source_dim, phi.target_dim
    ft = phi.m.transpose()
    top = ft.hstack(Mat.zeros(n, m)).hstack(Mat.identity(n)).hstack(Mat.zeros(n, n))
    bot = (
        Mat.zeros(m, m)
        .hstack(Mat.identity(m))
        .hstack(Mat.zeros(m, n))
        .hstack(phi.m)
    )
    return LinearRelation(n, m, Subspace(2 * (n + m), top.vstack(bot)))


def backward_relation(phi: LinearMap) -> LinearRelation:
    """The relation {(x, phi^T eta, phi(x), eta)}."""
    n, m = phi.source_dim, phi.target_dim
    top = (
        Mat.identity(n)
        .hstack(Mat.zeros(n, n))
        .hstack(phi.m.transpose())
        .hstack(Mat.zeros(n, m))
    )
    bot = Mat.zeros(m, n).hstack(phi.m).hstack(Mat.zeros(m, m)).hstack(Mat.identity(m))
    return LinearRelation(m, n, Subspace(2 * (n + m), top.vstack(bot)))


def diagonal_relation(n: int) -> LinearRelation:
    """Identity relation on Q^n + its dual."""
    return forward_relation(LinearMap.identity(n))


def compose(r1: LinearRelation, r2: LinearRelation) -> LinearRelation:
    """Relation composition r1 after r2 (existentially over the middle)."""
    if r1.source_dim != r2.target_dim:
        raise DimensionError("inner dimensions of the relations do not match")
    t, mid, s = r1.target_dim, r1.source_dim, r2.source_dim
    a1 = xl.annihilator(r1.space).basis
    a2 = xl.annihilator(r2.space).basis
    e1 = a1.hstack(Mat.zeros(a1.nrows, 2 * s))
    e2 = Mat.zeros(a2.nrows, 2 * t).hstack(a2)
    sols = xl.kernel_mat(e1.vstack(e2))
    keep = list(range(2 * t)) + list(range(2 * (t + mid), 2 * (t + mid + s)))
    return LinearRelation(s, t, Subspace(2 * (t + s), sols.cols(keep)))


def apply_relation(r: LinearRelation, l: LinearDirac) -> LinearDirac:
    """Image of l under the relation r."""
    if r.source_dim != l.dim_v:
        raise DimensionError("relation source does not match the structure")
    t, s = r.target_dim, r.source_dim
    a1 = xl.annihilator(r.space).basis
    a2 = Mat.zeros(s, 2 * t).hstack(xl.annihilator(l.space).basis)
    sols = xl.kernel_mat(a1.vstack(a2))
    return LinearDirac(t, Subspace(2 * t, sols.cols(range(2 * t))))


def is_forward_dirac(phi: LinearMap, lv: LinearDirac, lw: LinearDirac) -> bool:
    """Whether phi pushes lv exactly onto lw."""
    if phi.target_dim != lw.dim_v:
        raise DimensionError("map target does not match the target structure")
    return forward(phi, lv) == lw


# ---------------------------------------------------------------------------
# gauge action


def gauge(b: SkewForm, l: LinearDirac) -> LinearDirac:
    """Shear {(x, eta + B(x)) : (x, eta) in l}; the range is untouched."""
    if b.dim != l.dim_v:
        raise DimensionError("form size does not match the structure")
    x, y = l.halves()
    return LinearDirac(l.dim_v, Subspace(2 * l.dim_v, x.hstack(y + x @ b.m)))


def gauge_bivector(b: SkewForm, pi: Bivector) -> Optional[Bivector]:
    """Gauge a bivector through its graph; None when the shear is not a graph.

    With the conventions above the covector-side endomorphism of the
    shear is I - A @ P, so presence is exactly its invertibility.
    """
    if b.dim != pi.dim:
        raise DimensionError("form and bivector sizes do not match")
    shear = Mat.identity(pi.dim) - b.m @ pi.m
    inv = shear.inverse()
    if inv is None:
        return None
    return Bivector(pi.m @ inv)


def pullback_form(phi: LinearMap, b: SkewForm) -> SkewForm:
    """(phi^* B)(u, v) = B(phi(u), phi(v)); matrix F.T @ A @ F."""
    if b.dim != phi.target_dim:
        raise DimensionError("form does not live on the map target")
    return SkewForm(phi.m.transpose() @ b.m @ phi.m)


def pushforward_bivector(phi: LinearMap, pi: Bivector) -> Bivector:
    """(phi_* pi)(eta, nu) = pi(phi^T eta, phi^T nu); matrix F @ P @ F.T."""
    if pi.dim != phi.source_dim:
        raise DimensionError("bivector does not live on the map source")
    return Bivector(phi.m @ pi.m @ phi.m.transpose())


def symplectic_bivector(omega: SkewForm) -> Bivector:
    """The bivector whose graph coincides with the graph of a nondegenerate form."""
    inv = omega.m.inverse()
    if inv is None:
        raise PreconditionError("form is degenerate")
    return Bivector(-inv)


def form_kernel(omega: SkewForm) -> Subspace:
    """Radical {u : B(u, .) = 0}."""
    return xl.kernel(omega.m)


# ---------------------------------------------------------------------------
# presymplectic orthogonals and dual pairs


def presymp_orthogonal(w: Subspace, omega: SkewForm) -> Subspace:
    """{x : B(x, y) = 0 for all y in w}."""
    if w.ambient != omega.dim:
        raise DimensionError("subspace and form ambient mismatch")
    return xl.kernel(w.basis @ omega.m)


def _surjective(phi: LinearMap) -> bool:
    return phi.m.rank() == phi.target_dim


def check_dual_pair(d: LinearDualPairData, mode: str = "dual") -> Verdict:
    """Axioms of a (pre-)dual pair, each reported by name.

    mode="dual": the central form is nondegenerate, the leg kernels are
    each other's orthogonals, and each leg pushes the central graph
    onto its target.  mode="predual" relaxes orthogonality by the
    radical of the central form, symmetrically in the two legs.
    """
    if mode not in ("dual", "predual"):
        raise ValueError(f"unknown mode {mode!r}")
    ker1 = xl.kernel(d.j1.m)
    ker2 = xl.kernel(d.j2.m)
    l_omega = dirac_from_form(d.omega)
    checks = []
    if mode == "dual":
        checks.append(("omega_nondegenerate", form_kernel(d.omega).dim == 0))
        checks.append(
            ("kernel_orthogonality", ker1 == presymp_orthogonal(ker2, d.omega))
        )
    else:
        rad = form_kernel(d.omega)
        checks.append(
            (
                "kernel_orthogonality_1",
                presymp_orthogonal(ker1, d.omega) == xl.sum_(ker2, rad),
            )
        )
        checks.append(
            (
                "kernel_orthogonality_2",
                presymp_orthogonal(ker2, d.omega) == xl.sum_(ker1, rad),
            )
        )
    checks.append(("j1_forward_dirac", forward(d.j1, l_omega) == d.l1))
    checks.append(("j2_forward_dirac", forward(d.j2, l_omega) == d.l2))
    if d.full:
        checks.append(("j1_surjective", _surjective(d.j1)))
        checks.append(("j2_surjective", _surjective(d.j2)))
    return Verdict(tuple(checks))


def gauge_dual_pair(
    d: LinearDualPairData, b1: SkewForm, b2: SkewForm
) -> tuple[SkewForm, Verdict]:
    """Twist a full dual pair by forms on the two legs.

    Returns the twisted central form together with the three facts it
    satisfies: each leg is forward Dirac onto its gauged target, the
    twisted form is nondegenerate exactly when both gauged targets are
    bivector graphs, and the leg-kernel orthogonality holds modulo the
    new radical.
    """
    pre = check_dual_pair(d, "dual")
    if not pre.ok:
        raise PreconditionError(
            "not a full dual pair: " + ", ".join(pre.failed())
        )
    omega_hat = SkewForm(
        d.omega.m + pullback_form(d.j1, b1).m + pullback_form(d.j2, b2).m
    )
    l_hat = dirac_from_form(omega_hat)
    g1 = gauge(b1, d.l1)
    g2 = gauge(b2, d.l2)
    rad = form_kernel(omega_hat)
    nondeg = rad.dim == 0
    graphs = kernel_vectors(g1).dim == 0 and kernel_vectors(g2).dim == 0
    checks = (
        ("j1_forward_dirac_gauged", forward(d.j1, l_hat) == g1),
        ("j2_forward_dirac_gauged", forward(d.j2, l_hat) == g2),
        ("nondegenerate_iff_bivector_graphs", nondeg == graphs),
        (
            "kernel_orthogonality_modulo_radical",
            presymp_orthogonal(xl.kernel(d.j1.m), omega_hat)
            == xl.sum_(xl.kernel(d.j2.m), rad),
        ),
    )
    info = (
        ("omega_hat_nondegenerate", nondeg),
        ("gauged_targets_bivector_graphs", graphs),
    )
    return omega_hat, Verdict(checks, info)


def _section(k: Subspace) -> Mat:
    """Right inverse of quotient_map(k): unit columns at the complement coords."""
    comp = k.complement_coords()
    return Mat(
        [[1 if j == c else 0 for c in comp] for j in range(k.ambient)], len(comp)
    )


def reduce_predual(d: LinearDualPairData) -> LinearDualPairData:
    """Quotient a full predual pair to a genuine dual pair.

    The central space is divided by the radical of its form, each leg
    target by the kernel of its structure; the legs descend because a
    forward-Dirac leg maps the radical into that kernel.
    """
    pre = check_dual_pair(d, "predual")
    if not pre.ok:
        raise PreconditionError(
            "not a full predual pair: " + ", ".join(pre.failed())
        )
    rad = form_kernel(d.omega)
    sec = _section(rad)
    omega_red = SkewForm(sec.transpose() @ d.omega.m @ sec)
    q1 = LinearMap(xl.quotient_map(kernel_vectors(d.l1)))
    q2 = LinearMap(xl.quotient_map(kernel_vectors(d.l2)))
    return LinearDualPairData(
        omega=omega_red,
        j1=LinearMap(q1.m @ d.j1.m @ sec),
        j2=LinearMap(q2.m @ d.j2.m @ sec),
        l1=forward(q1, d.l1),
        l2=forward(q2, d.l2),
        full=d.full,
    )
