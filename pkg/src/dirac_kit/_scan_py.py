"""Pure-Python fallbacks for the grid-scan kernels.

Contracts, cell/edge conventions, and output ordering are documented in
dirac_kit/_scan_core.pyx; the two implementations must produce
identical arrays so that results do not depend on whether the compiled
extension built.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

_CROSS = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=np.uint8)


def marching_cells(f: np.ndarray, wrap_z: bool) -> np.ndarray:
    nz, nt = f.shape
    ncz = nz if wrap_z else nz - 1
    pos = f >= 0.0
    i1s = (np.arange(ncz) + 1) % nz
    j1s = (np.arange(nt) + 1) % nt
    pa = pos[:ncz, :]
    pb = pos[i1s, :]
    pd = pa[:, j1s]
    pc = pb[:, j1s]
    mixed = ~((pa == pb) & (pb == pc) & (pc == pd))
    segs: list[tuple[int, int, int, int, int, int]] = []
    for i, j in np.argwhere(mixed):
        i = int(i)
        j = int(j)
        i1 = (i + 1) % nz
        j1 = (j + 1) % nt
        a, b, c, d = f[i, j], f[i1, j], f[i1, j1], f[i, j1]
        qa, qb, qc, qd = a >= 0.0, b >= 0.0, c >= 0.0, d >= 0.0
        edges = []  # fixed order L, B, T, R
        if qa != qb:
            edges.append((0, i, j))
        if qa != qd:
            edges.append((1, i, j))
        if qb != qc:
            edges.append((1, i1, j))
        if qd != qc:
            edges.append((0, i, j1))
        if len(edges) == 2:
            segs.append(edges[0] + edges[1])
        else:
            if ((a + b + c + d) >= 0.0) == qa:
                segs.append((0, i, j, 1, i1, j))
                segs.append((1, i, j, 0, i, j1))
            else:
                segs.append((0, i, j, 1, i, j))
                segs.append((1, i1, j, 0, i, j1))
    if not segs:
        return np.empty((0, 6), dtype=np.int64)
    return np.asarray(segs, dtype=np.int64)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


def label_nodes(f: np.ndarray, wrap_z: bool) -> np.ndarray:
    nz, nt = f.shape
    pos = f >= 0.0
    lab_pos, n_pos = ndimage.label(pos, structure=_CROSS)
    lab_neg, n_neg = ndimage.label(~pos, structure=_CROSS)
    comb = np.where(pos, lab_pos - 1, n_pos + lab_neg - 1).astype(np.int64)

    uf = _UnionFind(n_pos + n_neg)
    # theta is always periodic: stitch first and last columns
    same = pos[:, 0] == pos[:, -1]
    for i in np.nonzero(same)[0]:
        uf.union(int(comb[i, 0]), int(comb[i, -1]))
    if wrap_z:
        same = pos[0, :] == pos[-1, :]
        for j in np.nonzero(same)[0]:
            uf.union(int(comb[0, j]), int(comb[-1, j]))

    roots = np.array([uf.find(k) for k in range(n_pos + n_neg)], dtype=np.int64)
    rooted = roots[comb.ravel()]
    # canonical labels: order of first appearance in row-major scan
    _, first_idx = np.unique(rooted, return_index=True)
    order = rooted[np.sort(first_idx)]
    lut = np.full(n_pos + n_neg, -1, dtype=np.int32)
    lut[order] = np.arange(len(order), dtype=np.int32)
    return lut[rooted].reshape(nz, nt)
