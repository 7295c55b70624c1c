"""Exact rational dense matrices and subspace algebra.

Every linear-Dirac statement in this package reduces to an equality of
subspaces of some Q^n, which floating point cannot certify, so this
module is exact: scalars are arbitrary-precision rationals, a Subspace
is stored as the reduced row-echelon form of any spanning set, and
subspace equality is literal comparison of canonical bases.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence, Union

try:
    from gmpy2 import mpq as Rat  # several-fold faster than Fraction
except ImportError:  # pragma: no cover - exercised where gmpy2 is absent
    from fractions import Fraction as Rat

RatLike = Union[int, str, "Rat"]

_ZERO = Rat(0)
_ONE = Rat(1)


class DimensionError(ValueError):
    """Shapes or ambient dimensions do not match."""


def rat(x: RatLike) -> Rat:
    """Coerce an int, 'p/q' string, or rational to the scalar type."""
    if isinstance(x, (int, str)):
        return Rat(x)
    if type(x) is type(_ZERO):
        return x
    return Rat(str(x))  # foreign rational type (e.g. Fraction under gmpy2)


def rat_str(x: RatLike) -> str:
    """Serialize a rational as 'p' or 'p/q'."""
    return str(rat(x))


Vec = tuple  # coordinate tuples of Rat


def vec(entries: Iterable[RatLike]) -> Vec:
    return tuple(rat(x) for x in entries)


def dot(u: Sequence, v: Sequence) -> Rat:
    if len(u) != len(v):
        raise DimensionError("vector length mismatch")
    return sum((a * b for a, b in zip(u, v)), _ZERO)


class Mat:
    """Immutable dense matrix over Q.

    Zero-row matrices are legal (empty bases, maps out of Q^0) and need
    an explicit column count.
    """

    __slots__ = ("data", "ncols")

    def __init__(self, rows: Iterable[Iterable[RatLike]], ncols: int | None = None):
        data = tuple(tuple(rat(x) for x in row) for row in rows)
        widths = {len(r) for r in data}
        if len(widths) > 1:
            raise DimensionError("ragged matrix rows")
        if widths:
            (w,) = widths
            if ncols is not None and ncols != w:
                raise DimensionError(f"rows have width {w}, expected {ncols}")
            ncols = w
        elif ncols is None:
            raise DimensionError("a matrix with no rows needs an explicit ncols")
        self.data = data
        self.ncols = ncols

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Mat":
        return cls([[_ZERO] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls([[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[RatLike]], ncols: int | None = None) -> "Mat":
        return cls(rows, ncols)

    @property
    def nrows(self) -> int:
        return len(self.data)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.data), self.ncols)

    def row(self, i: int) -> Vec:
        return self.data[i]

    def __getitem__(self, ij: tuple[int, int]) -> Rat:
        i, j = ij
        return self.data[i][j]

    def transpose(self) -> "Mat":
        return Mat(
            [tuple(r[j] for r in self.data) for j in range(self.ncols)], self.nrows
        )

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in addition")
        return Mat(
            [tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)],
            self.ncols,
        )

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def __neg__(self) -> "Mat":
        return Mat([tuple(-a for a in r) for r in self.data], self.ncols)

    def scale(self, c: RatLike) -> "Mat":
        c = rat(c)
        return Mat([tuple(c * a for a in r) for r in self.data], self.ncols)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise DimensionError(
                f"cannot multiply {self.shape} by {other.shape}"
            )
        cols = other.ncols
        out = []
        for r in self.data:
            row = [_ZERO] * cols
            for a, orow in zip(r, other.data):
                if a:
                    for j, b in enumerate(orow):
                        if b:
                            row[j] = row[j] + a * b
            out.append(tuple(row))
        return Mat(out, cols)

    def apply(self, v: Sequence[RatLike]) -> Vec:
        """Matrix times coordinate column, returned as a tuple."""
        if len(v) != self.ncols:
            raise DimensionError("vector length does not match column count")
        w = vec(v)
        return tuple(dot(r, w) for r in self.data)

    def hstack(self, other: "Mat") -> "Mat":
        if self.nrows != other.nrows:
            raise DimensionError("row count mismatch in hstack")
        return Mat(
            [a + b for a, b in zip(self.data, other.data)], self.ncols + other.ncols
        )

    def vstack(self, other: "Mat") -> "Mat":
        if self.ncols != other.ncols:
            raise DimensionError("column count mismatch in vstack")
        return Mat(self.data + other.data, self.ncols)

    def cols(self, indices: Sequence[int]) -> "Mat":
        return Mat([tuple(r[j] for j in indices) for r in self.data], len(indices))

    def is_zero(self) -> bool:
        return all(not x for r in self.data for x in r)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_skew(self) -> bool:
        if not self.is_square():
            return False
        n = self.ncols
        return all(self.data[i][j] == -self.data[j][i] for i in range(n) for j in range(i, n))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Mat)
            and self.ncols == other.ncols
            and self.data == other.data
        )

    def __hash__(self) -> int:
        return hash((self.ncols, self.data))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        rows = "; ".join(" ".join(str(x) for x in r) for r in self.data)
        return f"Mat[{self.nrows}x{self.ncols}: {rows}]"

    def rref_pivots(self) -> tuple["Mat", tuple[int, ...]]:
        """Reduced row-echelon form with zero rows dropped, plus pivot columns."""
        m = [list(r) for r in self.data]
        nrows, ncols = len(m), self.ncols
        pivots: list[int] = []
        prow = 0
        for c in range(ncols):
            sel = None
            for i in range(prow, nrows):
                if m[i][c]:
                    sel = i
                    break
            if sel is None:
                continue
            m[prow], m[sel] = m[sel], m[prow]
            inv = _ONE / m[prow][c]
            if inv != _ONE:
                m[prow] = [x * inv for x in m[prow]]
            lead = m[prow]
            for i in range(nrows):
                if i != prow and m[i][c]:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], lead)]
            pivots.append(c)
            prow += 1
            if prow == nrows:
                break
        return Mat(m[:prow], ncols), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref_pivots()[1])

    def inverse(self) -> Optional["Mat"]:
        """Inverse of a square matrix, or None when singular."""
        if not self.is_square():
            raise DimensionError("inverse of a non-square matrix")
        n = self.ncols
        aug = self.hstack(Mat.identity(n))
        red, piv = aug.rref_pivots()
        if piv != tuple(range(n)):
            return None
        return red.cols(range(n, 2 * n))

    def to_lists(self) -> list[list[Rat]]:
        return [list(r) for r in self.data]


def block_diag(*mats: Mat) -> Mat:
    """Direct sum: blocks along the diagonal, zeros elsewhere."""
    total_cols = sum(m.ncols for m in mats)
    rows: list[tuple] = []
    offset = 0
    for m in mats:
        for r in m.data:
            row = [_ZERO] * total_cols
            row[offset : offset + m.ncols] = r
            rows.append(tuple(row))
        offset += m.ncols
    return Mat(rows, total_cols)


def rref(m: Mat) -> Mat:
    """Canonical reduced row-echelon form; zero rows dropped."""
    return m.rref_pivots()[0]


def kernel_mat(m: Mat) -> Mat:
    """Rows spanning {x : m @ x = 0}."""
    red, pivots = m.rref_pivots()
    n = m.ncols
    pivset = set(pivots)
    free = [j for j in range(n) if j not in pivset]
    rows = []
    for j in free:
        v = [_ZERO] * n
        v[j] = _ONE
        for t, p in enumerate(pivots):
            v[p] = -red.data[t][j]
        rows.append(tuple(v))
    return Mat(rows, n)


def solve(m: Mat, b: Sequence[RatLike]) -> Optional[Vec]:
    """One particular solution of m @ x = b (free coordinates zero), or None."""
    if len(b) != m.nrows:
        raise DimensionError("right-hand side length mismatch")
    aug = m.hstack(Mat([[x] for x in b], 1) if m.nrows else Mat([], 1))
    red, pivots = aug.rref_pivots()
    if m.ncols in pivots:
        return None
    x = [_ZERO] * m.ncols
    for t, p in enumerate(pivots):
        x[p] = red.data[t][m.ncols]
    return tuple(x)


class Subspace:
    """A subspace of Q^n, canonically represented.

    The basis is the rref of whatever spanning rows were supplied, so
    two Subspace values are equal iff they are the same subspace.
    """

    __slots__ = ("ambient", "basis")

    def __init__(self, ambient: int, rows: Union[Mat, Iterable[Iterable[RatLike]]]):
        m = rows if isinstance(rows, Mat) else Mat(rows, ncols=ambient)
        if m.ncols != ambient:
            raise DimensionError(
                f"spanning rows live in Q^{m.ncols}, expected Q^{ambient}"
            )
        self.ambient = ambient
        self.basis = rref(m)

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(ambient, Mat([], ambient))

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        return cls(ambient, Mat.identity(ambient))

    @property
    def dim(self) -> int:
        return self.basis.nrows

    @property
    def pivots(self) -> tuple[int, ...]:
        out = []
        for r in self.basis.data:
            out.append(next(j for j, x in enumerate(r) if x))
        return tuple(out)

    def complement_coords(self) -> tuple[int, ...]:
        """Non-pivot coordinates; the standard vectors there complement self."""
        pivset = set(self.pivots)
        return tuple(j for j in range(self.ambient) if j not in pivset)

    def contains_vector(self, v: Sequence[RatLike]) -> bool:
        if len(v) != self.ambient:
            raise DimensionError("vector ambient mismatch")
        w = list(vec(v))
        for r, p in zip(self.basis.data, self.pivots):
            if w[p]:
                f = w[p]
                w = [a - f * b for a, b in zip(w, r)]
        return not any(w)

    def contains(self, other: "Subspace") -> bool:
        if self.ambient != other.ambient:
            raise DimensionError("ambient mismatch")
        return all(self.contains_vector(r) for r in other.basis.data)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __hash__(self) -> int:
        return hash((self.ambient, self.basis))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Subspace(dim {self.dim} of Q^{self.ambient})"


def image(m: Mat) -> Subspace:
    """Column space of m, i.e. the image of x -> m @ x."""
    return Subspace(m.nrows, m.transpose())


def kernel(m: Mat) -> Subspace:
    return Subspace(m.ncols, kernel_mat(m))


def sum_(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient != b.ambient:
        raise DimensionError("ambient mismatch")
    return Subspace(a.ambient, a.basis.vstack(b.basis))


def annihilator(a: Subspace) -> Subspace:
    """{eta : eta(x) = 0 for all x in a}, in dual coordinates."""
    return kernel(a.basis)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection via the kernel of stacked annihilators."""
    if a.ambient != b.ambient:
        raise DimensionError("ambient mismatch")
    stacked = annihilator(a).basis.vstack(annihilator(b).basis)
    return kernel(stacked)


def contains(a: Subspace, b: Subspace) -> bool:
    return a.contains(b)


def equal(a: Subspace, b: Subspace) -> bool:
    return a == b


def map_subspace(m: Mat, s: Subspace) -> Subspace:
    """Image {m @ x : x in s} under the linear map with matrix m."""
    if m.ncols != s.ambient:
        raise DimensionError("map source does not match subspace ambient")
    return Subspace(m.nrows, s.basis @ m.transpose())


def preimage(m: Mat, s: Subspace) -> Subspace:
    """{x : m @ x in s}."""
    if m.nrows != s.ambient:
        raise DimensionError("map target does not match subspace ambient")
    return kernel(annihilator(s).basis @ m)


def quotient_map(k: Subspace) -> Mat:
    """Projection matrix Q^n -> Q^(n-dim k) with kernel exactly k.

    Coordinates on the quotient are the non-pivot coordinates of the
    rref basis of k, so the section j -> e_j over those coordinates is
    a complement of k and round-trips are exact.
    """
    n = k.ambient
    comp = k.complement_coords()
    rows = []
    lookup = {p: t for t, p in enumerate(k.pivots)}
    for j in range(n):
        if j in lookup:
            krow = k.basis.data[lookup[j]]
            rows.append(tuple(-krow[c] for c in comp))
        else:
            rows.append(tuple(_ONE if c == j else _ZERO for c in comp))
    # rows currently express pr(e_j); the matrix acts on columns, so transpose.
    return Mat(rows, len(comp)).transpose()
