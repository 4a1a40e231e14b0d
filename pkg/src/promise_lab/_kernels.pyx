# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.  Signatures mirror ``promise_lab._fallback``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64


cdef inline i64 _gcd(i64 a, i64 b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


def lkn_labels(const i64[:] primes, i64 start, i64 count):
    cdef Py_ssize_t k = primes.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] out = np.zeros(count, dtype=np.uint8)
    cdef i64[:] res = np.empty(k, dtype=np.int64)
    cdef Py_ssize_t j
    cdef i64 i, p, r, zeros, sat
    for j in range(k):
        res[j] = start % primes[j]
    with nogil:
        for i in range(count):
            zeros = 0
            sat = 0
            for j in range(k):
                p = primes[j]
                r = res[j]
                if r == 0:
                    zeros += 1
                elif (8 * r >= p and 8 * r <= 3 * p) or (8 * r >= 5 * p and 8 * r <= 7 * p):
                    sat += 1
                r += 1
                if r == p:
                    r = 0
                res[j] = r
            if zeros == k:
                out[i] = 1
            elif 3 * sat >= 2 * k:
                out[i] = 2
    return out


def divisor_counts(const i64[:] primes, i64 start, i64 count):
    cdef Py_ssize_t k = primes.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.zeros(count, dtype=np.int64)
    cdef i64[:] res = np.empty(k, dtype=np.int64)
    cdef Py_ssize_t j
    cdef i64 i, c
    for j in range(k):
        res[j] = start % primes[j]
    with nogil:
        for i in range(count):
            c = 0
            for j in range(k):
                if res[j] == 0:
                    c += 1
                res[j] += 1
                if res[j] == primes[j]:
                    res[j] = 0
            out[i] = c
    return out


def dfa_trace(const i64[:] nxt, i64 start_state, const cnp.uint8_t[:] accepting, i64 count):
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] out = np.zeros(count, dtype=np.uint8)
    cdef i64 i, q = start_state
    with nogil:
        for i in range(count):
            out[i] = accepting[q]
            q = nxt[q]
    return out


def bottom_sccs(const i64[:] indptr, const i64[:] indices):
    """Iterative Tarjan; returns (component id per node, bottom flag per component)."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef i64[:] index = np.full(n, -1, dtype=np.int64)
    cdef i64[:] low = np.zeros(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] comp_arr = np.full(n, -1, dtype=np.int64)
    cdef i64[:] comp = comp_arr
    cdef cnp.uint8_t[:] onstack = np.zeros(n, dtype=np.uint8)
    cdef i64[:] stack = np.empty(n, dtype=np.int64)
    cdef i64[:] call_node = np.empty(n, dtype=np.int64)
    cdef i64[:] call_edge = np.empty(n, dtype=np.int64)
    cdef i64 sp = 0, cp = 0, counter = 0, ncomp = 0
    cdef i64 root, v, w, e
    for root in range(n):
        if index[root] != -1:
            continue
        call_node[0] = root
        call_edge[0] = indptr[root]
        cp = 1
        index[root] = counter
        low[root] = counter
        counter += 1
        stack[sp] = root
        sp += 1
        onstack[root] = 1
        while cp > 0:
            v = call_node[cp - 1]
            e = call_edge[cp - 1]
            if e < indptr[v + 1]:
                call_edge[cp - 1] = e + 1
                w = indices[e]
                if index[w] == -1:
                    index[w] = counter
                    low[w] = counter
                    counter += 1
                    stack[sp] = w
                    sp += 1
                    onstack[w] = 1
                    call_node[cp] = w
                    call_edge[cp] = indptr[w]
                    cp += 1
                elif onstack[w] and index[w] < low[v]:
                    low[v] = index[w]
            else:
                if low[v] == index[v]:
                    while True:
                        sp -= 1
                        w = stack[sp]
                        onstack[w] = 0
                        comp[w] = ncomp
                        if w == v:
                            break
                    ncomp += 1
                cp -= 1
                if cp > 0:
                    w = call_node[cp - 1]
                    if low[v] < low[w]:
                        low[w] = low[v]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] bottom = np.ones(ncomp, dtype=np.uint8)
    for v in range(n):
        for e in range(indptr[v], indptr[v + 1]):
            if comp[indices[e]] != comp[v]:
                bottom[comp[v]] = 0
    return comp_arr, bottom


def component_period(const i64[:] indptr, const i64[:] indices, const i64[:] comp, i64 root):
    """BFS levels inside root's component; period = gcd(level[u] + 1 - level[v])."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef cnp.ndarray[cnp.int64_t, ndim=1] level_arr = np.full(n, -1, dtype=np.int64)
    cdef i64[:] level = level_arr
    cdef i64[:] queue = np.empty(n, dtype=np.int64)
    cdef i64 head = 0, tail = 0, g = 0, u, v, e, c = comp[root]
    level[root] = 0
    queue[tail] = root
    tail += 1
    with nogil:
        while head < tail:
            u = queue[head]
            head += 1
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                if comp[v] != c:
                    continue
                if level[v] == -1:
                    level[v] = level[u] + 1
                    queue[tail] = v
                    tail += 1
                else:
                    g = _gcd(g, level[u] + 1 - level[v])
    return g, level_arr
