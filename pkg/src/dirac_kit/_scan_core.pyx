# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled grid-scan kernels for the surface pipeline.

Conventions shared with dirac_kit._scan_py (the pure fallback), which
must produce bit-identical output:

* node grid f[i, j]: i indexes z, j indexes theta; theta always wraps,
  z wraps only when wrap_z (torus).
* sign of a node is f >= 0 (exact zeros count as positive).
* cell (i, j) has corners a=f[i,j], b=f[i+1,j], c=f[i+1,j+1], d=f[i,j+1]
  (indices wrapped); its edges are identified as
      L = (0, i, j)    z-run edge between nodes (i,j)-(i+1,j)
      R = (0, i, j+1)
      B = (1, i, j)    theta-run edge between nodes (i,j)-(i,j+1)
      T = (1, i+1, j)
* marching_cells emits one row (kind1, i1, j1, kind2, i2, j2) per zero
  crossing segment, cells scanned in row-major order, crossed edges
  paired in the fixed order L, B, T, R; four-crossing saddles split by
  the sign of the corner average.
* label_nodes labels same-sign 4-connected node components; labels are
  assigned in row-major first-occurrence order.
"""

import numpy as np


def marching_cells(double[:, ::1] f, bint wrap_z):
    cdef Py_ssize_t nz = f.shape[0]
    cdef Py_ssize_t nt = f.shape[1]
    cdef Py_ssize_t ncz = nz if wrap_z else nz - 1
    cdef Py_ssize_t i, j, i1, j1
    cdef double a, b, c, d
    cdef bint pa, pb, pc, pd
    cdef bint eL, eB, eT, eR
    cdef int ncross
    segs = []
    for i in range(ncz):
        i1 = i + 1
        if i1 == nz:
            i1 = 0
        for j in range(nt):
            j1 = j + 1
            if j1 == nt:
                j1 = 0
            a = f[i, j]
            b = f[i1, j]
            c = f[i1, j1]
            d = f[i, j1]
            pa = a >= 0.0
            pb = b >= 0.0
            pc = c >= 0.0
            pd = d >= 0.0
            if pa == pb and pb == pc and pc == pd:
                continue
            eL = pa != pb
            eB = pa != pd
            eT = pb != pc
            eR = pd != pc
            ncross = (1 if eL else 0) + (1 if eB else 0) \
                + (1 if eT else 0) + (1 if eR else 0)
            if ncross == 2:
                if eL:
                    if eB:
                        segs.append((0, i, j, 1, i, j))
                    elif eT:
                        segs.append((0, i, j, 1, i1, j))
                    else:
                        segs.append((0, i, j, 0, i, j1))
                elif eB:
                    if eT:
                        segs.append((1, i, j, 1, i1, j))
                    else:
                        segs.append((1, i, j, 0, i, j1))
                else:
                    segs.append((1, i1, j, 0, i, j1))
            else:
                # saddle: a,c share one sign, b,d the other
                if ((a + b + c + d) >= 0.0) == pa:
                    # center joins the a-c diagonal: cut around b and d
                    segs.append((0, i, j, 1, i1, j))
                    segs.append((1, i, j, 0, i, j1))
                else:
                    # center joins b-d: cut around a and c
                    segs.append((0, i, j, 1, i, j))
                    segs.append((1, i1, j, 0, i, j1))
    if not segs:
        return np.empty((0, 6), dtype=np.int64)
    return np.asarray(segs, dtype=np.int64)


def label_nodes(double[:, ::1] f, bint wrap_z):
    cdef Py_ssize_t nz = f.shape[0]
    cdef Py_ssize_t nt = f.shape[1]
    cdef Py_ssize_t total = nz * nt
    labels_arr = np.full((nz, nt), -1, dtype=np.int32)
    cdef int[:, ::1] lab = labels_arr
    queue_arr = np.empty(total, dtype=np.intp)
    cdef Py_ssize_t[::1] q = queue_arr
    cdef Py_ssize_t si, sj, head, tail, cur, ci, cj, ni, nj
    cdef int next_label = 0
    cdef bint sign_cur
    for si in range(nz):
        for sj in range(nt):
            if lab[si, sj] != -1:
                continue
            lab[si, sj] = next_label
            q[0] = si * nt + sj
            head = 0
            tail = 1
            while head < tail:
                cur = q[head]
                head += 1
                ci = cur // nt
                cj = cur % nt
                sign_cur = f[ci, cj] >= 0.0
                # z - 1
                ni = ci - 1
                if ni >= 0 or wrap_z:
                    if ni < 0:
                        ni = nz - 1
                    if lab[ni, cj] == -1 and (f[ni, cj] >= 0.0) == sign_cur:
                        lab[ni, cj] = next_label
                        q[tail] = ni * nt + cj
                        tail += 1
                # z + 1
                ni = ci + 1
                if ni < nz or wrap_z:
                    if ni == nz:
                        ni = 0
                    if lab[ni, cj] == -1 and (f[ni, cj] >= 0.0) == sign_cur:
                        lab[ni, cj] = next_label
                        q[tail] = ni * nt + cj
                        tail += 1
                # theta - 1
                nj = cj - 1
                if nj < 0:
                    nj = nt - 1
                if lab[ci, nj] == -1 and (f[ci, nj] >= 0.0) == sign_cur:
                    lab[ci, nj] = next_label
                    q[tail] = ci * nt + nj
                    tail += 1
                # theta + 1
                nj = cj + 1
                if nj == nt:
                    nj = 0
                if lab[ci, nj] == -1 and (f[ci, nj] >= 0.0) == sign_cur:
                    lab[ci, nj] = next_label
                    q[tail] = ci * nt + nj
                    tail += 1
            next_label += 1
    return labels_arr
