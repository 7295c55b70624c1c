"""Scaled Poisson structures f*(dz^dtheta)^-1 on the sphere and torus.

Everything happens in a cylinder chart with area form dz^dtheta: for the
sphere that is the equal-area projection z in (-1,1), theta in [0,2pi),
with a margin around the poles where the input must not vanish; for the
torus z lives in [0,1) periodically.  The pipeline extracts the zero set
of f as closed polylines, checks that f vanishes linearly there, measures
the modular period of each curve, builds the signed region graph, and
computes a principal-value regularized volume.  Gauge operations twist f
by a 2-form coefficient b and compare two structures for equivalence.

Sign convention: the modular vector field of f is (dz, dtheta) =
(-f_theta, f_z), so for f = f(z) it reduces to f_z * d/dtheta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._scan import BACKEND, label_nodes, marching_cells
from .expr import (
    Expr,
    PoleError,
    const,
    differentiate,
    evaluate,
    evaluate_grid,
    simplify,
)

__all__ = [
    "NonGenericError",
    "SurfaceSpec",
    "ZeroCurve",
    "RegionVertex",
    "GraphEdge",
    "SignedWeightedGraph",
    "ClassifierReport",
    "WitnessReport",
    "extract_zero_curves",
    "modular_period",
    "period_by_flow",
    "region_graph",
    "regularized_volume",
    "gauge_forward",
    "gauge_witness",
    "classify",
    "curves_to_csv",
    "graph_to_dot",
]

TWO_PI = 2.0 * math.pi


class NonGenericError(ValueError):
    """The input lies outside the generic class the pipeline handles."""


@dataclass(frozen=True)
class SurfaceSpec:
    """Chart description: surface kind, node resolution, pole margin."""

    kind: str
    grid_n: int = 512
    pole_margin: float = 0.05

    def __post_init__(self):
        if self.kind not in ("sphere", "torus"):
            raise ValueError(f"unknown surface kind {self.kind!r}")
        if self.grid_n < 64:
            raise ValueError("grid_n must be at least 64")
        if not 0.0 < self.pole_margin < 0.5:
            raise ValueError("pole_margin must lie in (0, 0.5)")

    @property
    def wrap_z(self) -> bool:
        return self.kind == "torus"

    @property
    def z_period(self) -> float | None:
        return 1.0 if self.kind == "torus" else None

    def curve_grid(self) -> tuple[np.ndarray, np.ndarray]:
        """Node coordinates for zero-set scanning (sphere: margin-clipped)."""
        n = self.grid_n
        if self.kind == "sphere":
            zs = np.linspace(-1.0 + self.pole_margin, 1.0 - self.pole_margin, n)
        else:
            zs = np.arange(n) / n
        return zs, np.arange(n) * (TWO_PI / n)

    def chart_grid(self) -> tuple[np.ndarray, np.ndarray]:
        """Coordinates covering the whole open chart, pole margins included.

        Sphere samples sit at cell centers so z stays strictly inside
        (-1, 1); z = +-1 are chart boundary points, not chart points.
        """
        n = self.grid_n
        if self.kind == "sphere":
            zs = -1.0 + (np.arange(n) + 0.5) * (2.0 / n)
        else:
            zs = np.arange(n) / n
        return zs, np.arange(n) * (TWO_PI / n)


@dataclass(frozen=True, eq=False)
class ZeroCurve:
    """Closed polyline on the zero set, with gradient samples.

    points run along the modular field; closure (last to first point) is
    implied.  orientation is the chart winding sense of that traversal:
    the sign of the net theta winding, falling back to the sign of the
    enclosed area for contractible curves.  z_period is None on the
    sphere chart and the period length on the torus.  edges lists the
    grid edge ids the points interpolate, in point order; the region
    graph uses them to read off which labels the curve separates.
    """

    points: np.ndarray
    grad_norm: np.ndarray
    orientation: int
    z_period: float | None = None
    edges: tuple = ()


@dataclass(frozen=True)
class RegionVertex:
    id: int
    sign: int
    point: tuple[float, float]


@dataclass(frozen=True)
class GraphEdge:
    u: int
    v: int
    curve: int
    period: float


@dataclass(frozen=True)
class SignedWeightedGraph:
    vertices: tuple[RegionVertex, ...]
    edges: tuple[GraphEdge, ...]


@dataclass(frozen=True)
class ClassifierReport:
    curves: tuple[ZeroCurve, ...]
    graph: SignedWeightedGraph
    periods: tuple[float, ...]
    regularized_volume: float
    diagnostics: dict = field(compare=False)


@dataclass(frozen=True)
class WitnessReport:
    """Outcome of comparing two structures for gauge equivalence."""

    verdict: str  # gauge_equivalent_up_to_diffeo | periods_differ | zero_sets_differ
    witness: np.ndarray
    collar_max: float
    bounded: bool
    period_pairs: tuple[tuple[float, float], ...]
    detail: str


# ---------------------------------------------------------------------------
# zero-set extraction

def _wrap_dtheta(d):
    return (d + math.pi) % TWO_PI - math.pi


def _wrap_dz(d, z_period):
    if z_period is None:
        return d
    half = 0.5 * z_period
    return (d + half) % z_period - half


def _gradient_asts(f: Expr) -> tuple[Expr, Expr]:
    return differentiate(f, "z"), differentiate(f, "theta")


def _check_pole_bands(f: Expr, s: SurfaceSpec) -> None:
    # the scan never sees |z| > 1 - pole_margin, so guard that band here;
    # z = +-1 themselves are chart boundary and stay excluded
    rows = 8
    thetas = np.arange(s.grid_n) * (TWO_PI / s.grid_n)
    frac = np.arange(1, rows + 1) / rows
    for zs in (-1.0 + s.pole_margin * frac, 1.0 - s.pole_margin * frac):
        vals = evaluate_grid(f, zs[:, None], thetas[None, :])
        if np.any(vals == 0.0) or (np.any(vals > 0.0) and np.any(vals < 0.0)):
            raise NonGenericError("zero set enters the pole margin")


def _edge_nodes(edge, nz, nt):
    kind, i, j = edge
    if kind == 0:
        return (i, j), ((i + 1) % nz, j)
    return (i, j), (i, (j + 1) % nt)


def _edge_point(edge, F, zs, thetas, s: SurfaceSpec):
    kind, i, j = edge
    (ia, ja), (ib, jb) = _edge_nodes(edge, len(zs), len(thetas))
    fa = F[ia, ja]
    fb = F[ib, jb]
    t = fa / (fa - fb)
    if kind == 0:
        step = zs[1] - zs[0]
        return zs[i] + t * step, thetas[j]
    return zs[i], thetas[j] + t * (TWO_PI / len(thetas))


def extract_zero_curves(f: Expr, s: SurfaceSpec) -> list[ZeroCurve]:
    """Trace the zero set of f as closed, field-oriented polylines.

    Rejects inputs whose zero set reaches the sphere's pole margin, fails
    the linear-vanishing gradient threshold, or does not close up at this
    resolution.
    """
    if s.kind == "sphere":
        _check_pole_bands(f, s)
    zs, thetas = s.curve_grid()
    F = evaluate_grid(f, zs[:, None], thetas[None, :])
    segs = marching_cells(F, s.wrap_z)
    if segs.shape[0] == 0:
        return []

    adj: dict[tuple, list[int]] = {}
    seg_edges = []
    for k in range(segs.shape[0]):
        e1 = (int(segs[k, 0]), int(segs[k, 1]), int(segs[k, 2]))
        e2 = (int(segs[k, 3]), int(segs[k, 4]), int(segs[k, 5]))
        seg_edges.append((e1, e2))
        adj.setdefault(e1, []).append(k)
        adj.setdefault(e2, []).append(k)

    nz = len(zs)
    for edge, incident in adj.items():
        if len(incident) != 2:
            if edge[0] == 1 and not s.wrap_z and edge[1] in (0, nz - 1):
                raise NonGenericError("zero set enters the pole margin")
            raise NonGenericError("open zero-set chain at this resolution")

    fz_ast, ft_ast = _gradient_asts(f)
    delta = 1e-6 * max(1.0, float(np.max(np.abs(F))))
    used_seg = [False] * len(seg_edges)
    curves = []
    for start in sorted(adj):
        if not adj[start]:
            continue
        first_seg = min(adj[start])
        if used_seg[first_seg]:
            continue
        chain = [start]
        current = start
        seg = first_seg
        while True:
            used_seg[seg] = True
            e1, e2 = seg_edges[seg]
            nxt = e2 if e1 == current else e1
            if nxt == start:
                break
            chain.append(nxt)
            current = nxt
            cands = [k for k in adj[nxt] if not used_seg[k]]
            if not cands:
                raise NonGenericError("open zero-set chain at this resolution")
            seg = cands[0]
        pts = np.array([_edge_point(e, F, zs, thetas, s) for e in chain])
        curves.append(_finish_curve(pts, tuple(chain), fz_ast, ft_ast, delta, s))
    return curves


def _finish_curve(pts, chain, fz_ast, ft_ast, delta, s: SurfaceSpec) -> ZeroCurve:
    fz = evaluate_grid(fz_ast, pts[:, 0], pts[:, 1])
    ft = evaluate_grid(ft_ast, pts[:, 0], pts[:, 1])
    grad = np.hypot(fz, ft)
    if not np.all(np.isfinite(grad)) or float(grad.min()) < delta:
        raise NonGenericError("gradient below the linear-vanishing threshold on a zero curve")

    dz = _wrap_dz(np.roll(pts[:, 0], -1) - pts[:, 0], s.z_period)
    dth = _wrap_dtheta(np.roll(pts[:, 1], -1) - pts[:, 1])
    # field alignment: X = (-f_theta, f_z) in (z, theta)
    along = float(np.sum(dz * (-ft) + dth * fz))
    if along == 0.0:
        raise NonGenericError("zero curve is not transverse to the modular field")
    if along < 0.0:
        pts = pts[::-1].copy()
        grad = grad[::-1].copy()
        chain = chain[::-1]
        dz = _wrap_dz(np.roll(pts[:, 0], -1) - pts[:, 0], s.z_period)
        dth = _wrap_dtheta(np.roll(pts[:, 1], -1) - pts[:, 1])
    winding = round(float(np.sum(dth)) / TWO_PI)
    if winding != 0:
        orientation = 1 if winding > 0 else -1
    else:
        area = float(np.sum(pts[:, 0] * dth))
        orientation = 1 if area > 0 else -1
    return ZeroCurve(
        points=pts,
        grad_norm=grad,
        orientation=orientation,
        z_period=s.z_period,
        edges=chain,
    )


# ---------------------------------------------------------------------------
# modular periods

def _arc_lengths(pts, z_period):
    dz = _wrap_dz(np.roll(pts[:, 0], -1) - pts[:, 0], z_period)
    dth = _wrap_dtheta(np.roll(pts[:, 1], -1) - pts[:, 1])
    return np.hypot(dz, dth), dz, dth


def _trapezoid_period(pts, grad, z_period):
    dl, _, _ = _arc_lengths(pts, z_period)
    w = 1.0 / grad
    return float(np.sum(dl * 0.5 * (w + np.roll(w, -1))))


def modular_period(f: Expr, c: ZeroCurve) -> float:
    """Return period of the modular flow around the curve.

    Computed as the loop integral of dl/|grad f| by composite trapezoid
    over the polyline, with one Richardson step against a 2x resampling
    (chord midpoints).
    """
    fz_ast, ft_ast = _gradient_asts(f)
    pts = c.points
    coarse = _trapezoid_period(pts, c.grad_norm, c.z_period)

    dl, dz, dth = _arc_lengths(pts, c.z_period)
    mids = np.empty_like(pts)
    mids[:, 0] = pts[:, 0] + 0.5 * dz
    mids[:, 1] = pts[:, 1] + 0.5 * dth
    fine_pts = np.empty((2 * len(pts), 2))
    fine_pts[0::2] = pts
    fine_pts[1::2] = mids
    gz = evaluate_grid(fz_ast, fine_pts[:, 0], fine_pts[:, 1])
    gt = evaluate_grid(ft_ast, fine_pts[:, 0], fine_pts[:, 1])
    fine_grad = np.hypot(gz, gt)
    if np.any(fine_grad == 0.0) or not np.all(np.isfinite(fine_grad)):
        raise NonGenericError("non-finite period integrand")
    fine = _trapezoid_period(fine_pts, fine_grad, c.z_period)
    return (4.0 * fine - coarse) / 3.0


def period_by_flow(f: Expr, c: ZeroCurve, steps: int = 20000) -> float:
    """First-return time of the modular field, integrated with RK4.

    Independent cross-check for modular_period: starts at a curve point,
    follows X = (-f_theta, f_z), and bisects the Poincare-section
    crossing inside the final step.
    """
    fz_ast, ft_ast = _gradient_asts(f)

    def vel(p):
        z, th = float(p[0]), float(p[1])
        return np.array([-evaluate(ft_ast, z, th), evaluate(fz_ast, z, th)])

    def rk4(p, h):
        k1 = vel(p)
        k2 = vel(p + 0.5 * h * k1)
        k3 = vel(p + 0.5 * h * k2)
        k4 = vel(p + h * k3)
        return p + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    p0 = c.points[0].copy()
    t_est = _trapezoid_period(c.points, c.grad_norm, c.z_period)
    dt = t_est / steps
    v0 = vel(p0)
    speed0 = float(np.hypot(*v0))
    if speed0 == 0.0 or not math.isfinite(speed0):
        raise NonGenericError("modular field vanishes at the start point")
    u = v0 / speed0
    r_detect = max(8.0 * speed0 * dt, 1e-9)

    def section(p):
        d = np.array(
            [_wrap_dz(p[0] - p0[0], c.z_period), _wrap_dtheta(p[1] - p0[1])]
        )
        return float(d @ u), float(np.hypot(*d))

    p = p0.copy()
    left = False
    g_prev = 0.0
    for k in range(10 * steps):
        p_next = rk4(p, dt)
        g, dist = section(p_next)
        if not left:
            if dist > 2.0 * r_detect:
                left = True
        elif dist < r_detect and g_prev < 0.0 <= g:
            lo, hi = 0.0, 1.0
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                gm, _ = section(rk4(p, mid * dt))
                if gm < 0.0:
                    lo = mid
                else:
                    hi = mid
            return (k + 0.5 * (lo + hi)) * dt
        g_prev = g
        p = p_next
    raise NonGenericError("modular flow did not return to its start")


# ---------------------------------------------------------------------------
# region graph

def region_graph(f: Expr, s: SurfaceSpec, curves: list[ZeroCurve] | None = None) -> SignedWeightedGraph:
    """Signed regions of the complement, with period-weighted edges.

    Vertices are connected components of {f != 0} at grid resolution,
    signed by a sample of f; each zero curve contributes one edge joining
    the two regions it separates.  On the sphere the result must be a
    tree.
    """
    if curves is None or any(not c.edges for c in curves):
        curves = extract_zero_curves(f, s)
    zs, thetas = s.curve_grid()
    F = evaluate_grid(f, zs[:, None], thetas[None, :])
    labels = label_nodes(F, s.wrap_z)
    n_regions = int(labels.max()) + 1

    flat = labels.ravel()
    first_idx = np.full(n_regions, -1, dtype=np.int64)
    seen, idx = np.unique(flat, return_index=True)
    first_idx[seen] = idx
    vertices = []
    for r in range(n_regions):
        i, j = divmod(int(first_idx[r]), labels.shape[1])
        sign = 1 if F[i, j] >= 0.0 else -1
        vertices.append(RegionVertex(id=r, sign=sign, point=(float(zs[i]), float(thetas[j]))))

    edges = []
    nz, nt = F.shape
    for ci, c in enumerate(curves):
        period = modular_period(f, c)
        pair = None
        for edge in c.edges:
            (ia, ja), (ib, jb) = _edge_nodes(edge, nz, nt)
            la, lb = int(labels[ia, ja]), int(labels[ib, jb])
            if F[ia, ja] < 0.0:
                la, lb = lb, la
            if pair is None:
                pair = (la, lb)
            elif pair != (la, lb):
                raise NonGenericError("curve separates inconsistent regions at this resolution")
        edges.append(GraphEdge(u=pair[0], v=pair[1], curve=ci, period=period))

    for e in edges:
        if vertices[e.u].sign == vertices[e.v].sign:
            raise NonGenericError("regions across a zero curve carry equal signs")
    if s.kind == "sphere":
        if len(vertices) != len(edges) + 1 or not _connected(n_regions, edges):
            raise NonGenericError("region graph is not a tree at this resolution")
    return SignedWeightedGraph(vertices=tuple(vertices), edges=tuple(edges))


def _connected(n, edges) -> bool:
    if n == 0:
        return False
    nbrs: dict[int, list[int]] = {i: [] for i in range(n)}
    for e in edges:
        nbrs[e.u].append(e.v)
        nbrs[e.v].append(e.u)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in nbrs[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == n


# ---------------------------------------------------------------------------
# regularized volume

def _volume_detail(f: Expr, s: SurfaceSpec) -> tuple[float, dict]:
    n = max(2 * s.grid_n, 512)
    if s.kind == "sphere":
        hz = 2.0 / n
        zc = -1.0 + (np.arange(n) + 0.5) * hz
    else:
        hz = 1.0 / n
        zc = (np.arange(n) + 0.5) * hz
    hth = TWO_PI / n
    thc = (np.arange(n) + 0.5) * hth
    cell = hz * hth
    F = evaluate_grid(f, zc[:, None], thc[None, :])
    absF = np.abs(F)
    # median, not max: a gauged f may blow up near the chart boundary and
    # the shells must stay scaled to the bulk of |f|, not its extremes
    eps0 = 0.05 * float(np.median(absF))
    if eps0 == 0.0:
        raise NonGenericError("function vanishes on half the chart")
    with np.errstate(divide="ignore"):
        inv = np.where(absF > 0.0, 1.0 / np.where(absF > 0.0, F, 1.0), 0.0)
    # per-cell quadrature in f-space: treat f as linear across the cell
    # (exact gradient, L1 width) and integrate 1/f over the part of the
    # cell's f-range lying outside the shell in closed form; plain
    # midpoint sampling of 1/f jumps too hard where the shell edge sits
    # a few cells from the zero set
    fz = evaluate_grid(differentiate(f, "z"), zc[:, None], thc[None, :])
    ft = evaluate_grid(differentiate(f, "theta"), zc[:, None], thc[None, :])
    span = np.abs(fz) * hz + np.abs(ft) * hth
    lo = F - 0.5 * span
    hi = F + 0.5 * span
    flat = span <= 1e-6 * (absF + eps0)
    span_safe = np.where(flat, 1.0, span)
    values = []
    epsilons = [eps0, eps0 / 2.0, eps0 / 4.0]
    for eps in epsilons:
        pos = np.log(np.maximum(hi, eps) / np.maximum(lo, eps))
        neg = np.log(np.maximum(-lo, eps) / np.maximum(-hi, eps))
        mass = np.where(flat, inv * (absF > eps), (pos - neg) / span_safe)
        values.append(float(np.sum(mass) * cell))
    v_extrap = 2.0 * values[2] - values[1]
    residual = abs(v_extrap - (2.0 * values[1] - values[0]))
    detail = {
        "epsilons": epsilons,
        "shell_values": values,
        "residual": residual,
        "volume_grid_n": n,
    }
    if residual > 0.25 * max(1.0, abs(v_extrap)):
        raise NonGenericError("regularized volume did not converge under shell refinement")
    return v_extrap, detail


def regularized_volume(f: Expr, s: SurfaceSpec) -> float:
    """Principal-value integral of 1/f over the chart.

    Shells |f| > eps at eps0, eps0/2, eps0/4 with linear extrapolation to
    eps = 0; the linear zero set makes the leading divergence cancel.
    """
    return _volume_detail(f, s)[0]


# ---------------------------------------------------------------------------
# gauge operations

def gauge_forward(f: Expr, b: Expr, s: SurfaceSpec) -> tuple[Expr, bool]:
    """Twist by the 2-form coefficient b: returns f/(1+f*b) and validity.

    The flag is true when 1 + f*b keeps one sign across the whole open
    chart grid, pole margins included, i.e. the twisted structure stays
    of bivector type everywhere the chart sees.
    """
    denom = Expr("add", (const(1), Expr("mul", (f, b))))
    fp = simplify(Expr("div", (f, denom)))
    zs, thetas = s.chart_grid()
    try:
        d = evaluate_grid(denom, zs[:, None], thetas[None, :])
    except PoleError:
        return fp, False
    valid = bool(np.all(d > 0.0) or np.all(d < 0.0))
    return fp, valid


def _directed_gap(a: np.ndarray, b: np.ndarray, z_period) -> float:
    dz = _wrap_dz(a[:, None, 0] - b[None, :, 0], z_period)
    dth = _wrap_dtheta(a[:, None, 1] - b[None, :, 1])
    return float(np.hypot(dz, dth).min(axis=1).max())


def gauge_witness(f: Expr, f2: Expr, s: SurfaceSpec) -> WitnessReport:
    """Decide gauge-up-to-diffeomorphism equivalence of f and f2.

    Matches the two zero sets curve by curve within grid tolerance, then
    compares corresponding modular periods (1e-3 relative).  When both
    agree the structures are equivalent; the sampled coefficient
    1/f2 - 1/f is returned with a boundedness probe on a collar around
    the zero set as supporting evidence.
    """
    curves1 = extract_zero_curves(f, s)
    curves2 = extract_zero_curves(f2, s)
    zs, thetas = s.chart_grid()
    F1 = evaluate_grid(f, zs[:, None], thetas[None, :])
    F2 = evaluate_grid(f2, zs[:, None], thetas[None, :])
    ok1 = np.abs(F1) > 0.0
    ok2 = np.abs(F2) > 0.0
    witness = np.where(
        ok1 & ok2, 1.0 / np.where(ok2, F2, 1.0) - 1.0 / np.where(ok1, F1, 1.0), np.nan
    )
    collar_lvl = 0.1 * max(float(np.abs(F1).max()), float(np.abs(F2).max()))
    near = (np.minimum(np.abs(F1), np.abs(F2)) <= collar_lvl) & ok1 & ok2
    collar_max = float(np.nanmax(np.abs(np.where(near, witness, np.nan)))) if near.any() else 0.0
    far = ~near & ok1 & ok2
    far_max = float(np.nanmax(np.abs(np.where(far, witness, np.nan)))) if far.any() else 0.0
    bounded = math.isfinite(collar_max) and collar_max <= 100.0 * max(1.0, far_max)

    def report(verdict, pairs, detail):
        return WitnessReport(
            verdict=verdict,
            witness=witness,
            collar_max=collar_max,
            bounded=bounded,
            period_pairs=tuple(pairs),
            detail=detail,
        )

    if len(curves1) != len(curves2):
        return report(
            "zero_sets_differ", (), f"{len(curves1)} vs {len(curves2)} zero curves"
        )
    zc, _ = s.curve_grid()
    tol = 3.0 * max(float(zc[1] - zc[0]), TWO_PI / s.grid_n)
    taken = [False] * len(curves2)
    matched = []
    for c1 in curves1:
        best, best_gap = -1, math.inf
        for k, c2 in enumerate(curves2):
            if taken[k]:
                continue
            gap = max(
                _directed_gap(c1.points, c2.points, s.z_period),
                _directed_gap(c2.points, c1.points, s.z_period),
            )
            if gap < best_gap:
                best, best_gap = k, gap
        if best < 0 or best_gap > tol:
            return report("zero_sets_differ", (), f"unmatched curve (gap {best_gap:.3g})")
        taken[best] = True
        matched.append((c1, curves2[best]))

    pairs = []
    mismatches = []
    for idx, (c1, c2) in enumerate(matched):
        t1 = modular_period(f, c1)
        t2 = modular_period(f2, c2)
        pairs.append((t1, t2))
        if abs(t1 - t2) > 1e-3 * max(abs(t1), abs(t2)):
            mismatches.append(f"curve {idx}: {t1:.6g} vs {t2:.6g}")
    if mismatches:
        return report("periods_differ", pairs, "; ".join(mismatches))
    return report(
        "gauge_equivalent_up_to_diffeo",
        pairs,
        f"{len(matched)} curves matched; collar witness max {collar_max:.3g}",
    )


# ---------------------------------------------------------------------------
# classification report

def classify(f: Expr, s: SurfaceSpec) -> ClassifierReport:
    """Full pipeline: curves, signed region graph, periods, volume."""
    curves = extract_zero_curves(f, s)
    graph = region_graph(f, s, curves)
    periods = tuple(e.period for e in graph.edges)
    if any(not math.isfinite(t) or t <= 0.0 for t in periods):
        raise NonGenericError("modular periods must be positive and finite")
    volume, vol_detail = _volume_detail(f, s)
    min_grad = min((float(c.grad_norm.min()) for c in curves), default=math.inf)
    diagnostics = {
        "backend": BACKEND,
        "grid_n": s.grid_n,
        "curve_count": len(curves),
        "min_grad_norm": min_grad,
        **vol_detail,
    }
    return ClassifierReport(
        curves=tuple(curves),
        graph=graph,
        periods=periods,
        regularized_volume=volume,
        diagnostics=diagnostics,
    )


# ---------------------------------------------------------------------------
# export

def curves_to_csv(curves) -> str:
    lines = ["curve_id,point_index,z,theta,grad_norm"]
    for ci, c in enumerate(curves):
        for k in range(len(c.points)):
            z, th = c.points[k]
            lines.append(
                f"{ci},{k},{format(z, '.12g')},{format(th, '.12g')},{format(c.grad_norm[k], '.12g')}"
            )
    return "\n".join(lines) + "\n"


def graph_to_dot(g: SignedWeightedGraph) -> str:
    lines = ["graph regions {"]
    for v in g.vertices:
        label = "+" if v.sign > 0 else "-"
        lines.append(f'  {v.id} [label="{label}"];')
    for e in g.edges:
        lines.append(f'  {e.u} -- {e.v} [label="{format(e.period, ".12g")}", curve={e.curve}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
