"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``.

Same signatures and return types (numpy arrays), so callers cannot tell
which backend answered.
"""

from __future__ import annotations

import math

import numpy as np


def lkn_labels(primes, start: int, count: int) -> np.ndarray:
    primes = [int(p) for p in primes]
    k = len(primes)
    out = np.zeros(count, dtype=np.uint8)
    res = [start % p for p in primes]
    for i in range(count):
        zeros = sat = 0
        for j, p in enumerate(primes):
            r = res[j]
            if r == 0:
                zeros += 1
            elif p <= 8 * r <= 3 * p or 5 * p <= 8 * r <= 7 * p:
                sat += 1
            r += 1
            res[j] = 0 if r == p else r
        if zeros == k:
            out[i] = 1
        elif 3 * sat >= 2 * k:
            out[i] = 2
    return out


def divisor_counts(primes, start: int, count: int) -> np.ndarray:
    primes = [int(p) for p in primes]
    out = np.zeros(count, dtype=np.int64)
    res = [start % p for p in primes]
    for i in range(count):
        c = 0
        for j, p in enumerate(primes):
            if res[j] == 0:
                c += 1
            res[j] = 0 if res[j] + 1 == p else res[j] + 1
        out[i] = c
    return out


def dfa_trace(nxt, start_state: int, accepting, count: int) -> np.ndarray:
    nxt = [int(x) for x in nxt]
    acc = [bool(x) for x in accepting]
    out = np.zeros(count, dtype=np.uint8)
    q = int(start_state)
    for i in range(count):
        out[i] = acc[q]
        q = nxt[q]
    return out


def bottom_sccs(indptr, indices):
    indptr = [int(x) for x in indptr]
    indices = [int(x) for x in indices]
    n = len(indptr) - 1
    index = [-1] * n
    low = [0] * n
    comp = np.full(n, -1, dtype=np.int64)
    onstack = [False] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        onstack[root] = True
        calls = [[root, indptr[root]]]
        while calls:
            frame = calls[-1]
            v, e = frame
            if e < indptr[v + 1]:
                frame[1] = e + 1
                w = indices[e]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    onstack[w] = True
                    calls.append([w, indptr[w]])
                elif onstack[w] and index[w] < low[v]:
                    low[v] = index[w]
            else:
                if low[v] == index[v]:
                    while True:
                        w = stack.pop()
                        onstack[w] = False
                        comp[w] = ncomp
                        if w == v:
                            break
                    ncomp += 1
                calls.pop()
                if calls:
                    u = calls[-1][0]
                    low[u] = min(low[u], low[v])
    bottom = np.ones(ncomp, dtype=np.uint8)
    for v in range(n):
        for e in range(indptr[v], indptr[v + 1]):
            if comp[indices[e]] != comp[v]:
                bottom[comp[v]] = 0
    return comp, bottom


def component_period(indptr, indices, comp, root: int):
    indptr = [int(x) for x in indptr]
    indices = [int(x) for x in indices]
    n = len(indptr) - 1
    level = np.full(n, -1, dtype=np.int64)
    c = comp[root]
    level[root] = 0
    queue = [root]
    head = 0
    g = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            if comp[v] != c:
                continue
            if level[v] == -1:
                level[v] = level[u] + 1
                queue.append(v)
            else:
                g = math.gcd(g, int(level[u] + 1 - level[v]))
    return g, level
