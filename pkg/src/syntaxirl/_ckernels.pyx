# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``; same signatures."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, isfinite, INFINITY

cnp.import_array()


def soft_backward(reward, const cnp.int64_t[:, ::1] succ, const cnp.int64_t[::1] n_actions, Py_ssize_t horizon):
    cdef double[::1] r = np.ascontiguousarray(reward, dtype=np.float64)
    cdef Py_ssize_t n = succ.shape[0], amax = succ.shape[1]
    cdef Py_ssize_t t, s, a, na
    out = np.zeros((horizon, n, amax), dtype=np.float64)
    cdef double[:, :, ::1] probs = out
    cdef double[::1] v = np.array(r, dtype=np.float64)
    cdef double[::1] v_new = np.empty(n, dtype=np.float64)
    cdef double[::1] q = np.empty(amax, dtype=np.float64)
    cdef double top, acc, val
    cdef bint ok = True
    for t in range(horizon - 1, -1, -1):
        for s in range(n):
            na = n_actions[s]
            top = -INFINITY
            for a in range(na):
                q[a] = r[s] + v[succ[s, a]]
                if q[a] > top:
                    top = q[a]
            if not isfinite(top):
                ok = False
                break
            acc = 0.0
            for a in range(na):
                acc += exp(q[a] - top)
            val = top + log(acc)
            v_new[s] = val
            for a in range(na):
                probs[t, s, a] = exp(q[a] - val)
        if not ok:
            break
        v[:] = v_new
    for s in range(n):
        if not isfinite(v[s]):
            ok = False
    return out, np.asarray(v), ok


def forward_svf(probs_in, const cnp.int64_t[:, ::1] succ, const cnp.int64_t[::1] n_actions, p0):
    cdef double[:, :, ::1] probs = np.ascontiguousarray(probs_in, dtype=np.float64)
    cdef Py_ssize_t horizon = probs.shape[0], n = probs.shape[1]
    cdef Py_ssize_t t, s, a
    d_arr = np.array(p0, dtype=np.float64)
    cdef double[::1] d = d_arr
    cdef double[::1] d_next = np.empty(n, dtype=np.float64)
    svf_arr = d_arr.copy()
    cdef double[::1] svf = svf_arr
    cdef double mass
    for t in range(horizon):
        d_next[:] = 0.0
        for s in range(n):
            mass = d[s]
            if mass == 0.0:
                continue
            for a in range(n_actions[s]):
                d_next[succ[s, a]] += probs[t, s, a] * mass
        for s in range(n):
            d[s] = d_next[s]
            svf[s] += d[s]
    return svf_arr


def local_depth_sums(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices, Py_ssize_t radius):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    td_arr = np.zeros(n, dtype=np.int64)
    kl_arr = np.ones(n, dtype=np.int64)
    cdef cnp.int64_t[::1] td = td_arr, kl = kl_arr
    cdef cnp.int64_t[::1] depth = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] queue = np.empty(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t s, head, tail, u, v, j, i
    for s in range(n):
        depth[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            if depth[u] >= radius:
                continue
            for j in range(indptr[u], indptr[u + 1]):
                v = indices[j]
                if depth[v] < 0:
                    depth[v] = depth[u] + 1
                    td[s] += depth[v]
                    kl[s] += 1
                    queue[tail] = v
                    tail += 1
        for i in range(tail):
            depth[queue[i]] = -1
    return td_arr, kl_arr
