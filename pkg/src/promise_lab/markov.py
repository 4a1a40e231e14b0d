"""Markov-chain structure of unary PFAs.

Ergodic sets are the bottom strongly connected components of the support
graph (``i -> j`` whenever ``A[j][i] != 0``); everything else is transient.
The period of an ergodic set is the gcd of its cycle lengths, read off BFS
levels as ``gcd(level[u] + 1 - level[v])`` over its internal edges.  The
cyclic subsets are the level classes modulo that period.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .automata import StochasticMatrix, UnaryPFA, float_shadow, pfa_outcome, pfa_outcomes
from .numtheory import lcm_list


@dataclass(frozen=True)
class ChainStructure:
    transient: frozenset[int]
    ergodic_sets: tuple[frozenset[int], ...]
    periods: tuple[int, ...]
    D: int
    cyclic_subsets: tuple[tuple[frozenset[int], ...], ...]

    def to_dict(self) -> dict:
        return {
            "transient": sorted(self.transient),
            "ergodic": [
                {"states": sorted(s), "period": t}
                for s, t in zip(self.ergodic_sets, self.periods)
            ],
            "D": self.D,
        }


@dataclass(frozen=True)
class LimitProfile:
    per_residue: tuple[float, ...]
    stable: tuple[bool, ...]

    @property
    def all_stable(self) -> bool:
        return all(self.stable)


def analyze_support(indptr: Sequence[int], indices: Sequence[int]) -> ChainStructure:
    """Structure of the chain whose support graph is given in CSR form."""
    n = len(indptr) - 1
    comp, bottom = kernels.bottom_sccs(indptr, indices)
    comp_list = comp.tolist()
    members: dict[int, list[int]] = {}
    for v, c in enumerate(comp_list):
        members.setdefault(c, []).append(v)
    ergodic = sorted(
        (sorted(vs) for c, vs in members.items() if bottom[c]), key=lambda vs: vs[0]
    )
    transient = frozenset(v for v in range(n) if not bottom[comp_list[v]])
    periods = []
    subsets = []
    for states in ergodic:
        root = states[0]
        g, level = kernels.component_period(indptr, indices, comp, root)
        # every state has a successor, so a bottom component always holds a cycle
        t = int(g) or 1
        periods.append(t)
        classes: list[set[int]] = [set() for _ in range(t)]
        for v in states:
            classes[int(level[v]) % t].add(v)
        subsets.append(tuple(frozenset(c) for c in classes))
    return ChainStructure(
        transient=transient,
        ergodic_sets=tuple(frozenset(s) for s in ergodic),
        periods=tuple(periods),
        D=lcm_list(periods),
        cyclic_subsets=tuple(subsets),
    )


def analyze_chain(matrix: StochasticMatrix) -> ChainStructure:
    indptr, indices = matrix.csr()
    return analyze_support(indptr, indices)


def period_certificate(structure: ChainStructure, ergodic_index: int) -> list[frozenset[int]]:
    """Cyclic subsets of one ergodic set, in the order the chain visits them."""
    if not 0 <= ergodic_index < len(structure.ergodic_sets):
        raise IndexError(
            f"ergodic index {ergodic_index} out of range (have {len(structure.ergodic_sets)})"
        )
    return list(structure.cyclic_subsets[ergodic_index])


# -- support-graph algebra ----------------------------------------------------


def _succ_sets(indptr, indices) -> list[frozenset[int]]:
    return [frozenset(indices[indptr[i] : indptr[i + 1]]) for i in range(len(indptr) - 1)]


def _to_csr(succ: Sequence[frozenset[int]]) -> tuple[list[int], list[int]]:
    indptr = [0]
    indices: list[int] = []
    for s in succ:
        indices.extend(sorted(s))
        indptr.append(len(indices))
    return indptr, indices


def support_power(matrix: StochasticMatrix, e: int) -> tuple[list[int], list[int]]:
    """Support of ``A^e``.  Exact: entries are nonnegative, so nothing cancels."""
    if e < 0:
        raise ValueError("exponent must be nonnegative")
    base = _succ_sets(*matrix.csr())
    n = len(base)
    result = [frozenset([i]) for i in range(n)]

    def compose(first, then):
        # paths of `first` followed by `then`
        return [frozenset().union(*(then[j] for j in first[i])) for i in range(n)]

    while e:
        if e & 1:
            result = compose(result, base)
        e >>= 1
        if e:
            base = compose(base, base)
    return _to_csr(result)


def restrict_support(indptr, indices, subset) -> tuple[list[int], list[int]]:
    """Support graph induced on ``subset``, states renumbered in sorted order."""
    order = sorted(subset)
    pos = {v: i for i, v in enumerate(order)}
    succ = [
        frozenset(pos[w] for w in indices[indptr[v] : indptr[v + 1]] if w in pos)
        for v in order
    ]
    return _to_csr(succ)


# -- limiting acceptance ------------------------------------------------------


def dense_float(matrix: StochasticMatrix) -> np.ndarray:
    a = np.zeros((matrix.dimension, matrix.dimension))
    for i, col in enumerate(matrix.columns):
        for j, w in col:
            a[j, i] = float(w)
    return a


def acceptance_series(pfa: UnaryPFA, count: int) -> np.ndarray:
    """Acceptance probability for m in ``[0, count)`` as doubles.

    Deterministic chains are stepped exactly and rounded at the end; others
    are stepped in floating point.
    """
    if pfa.transition.is_deterministic():
        return np.array(
            [float_shadow(o.accept) for _, o in pfa_outcomes(pfa, 0, count, None)]
        )
    a = dense_float(pfa.transition)
    acc = np.zeros(pfa.size)
    acc[list(pfa.accepting)] = 1.0
    v = np.array([float(x) for x in pfa.initial])
    out = np.empty(count)
    for m in range(count):
        out[m] = acc @ v
        v = a @ v
    return out


def _values_at(pfa: UnaryPFA, lengths: Sequence[int]) -> dict[int, float]:
    """Acceptance at the given lengths, as doubles."""
    if pfa.transition.is_deterministic():
        return {m: float_shadow(pfa_outcome(pfa, m, None).accept) for m in lengths}
    a = dense_float(pfa.transition)
    acc = np.zeros(pfa.size)
    acc[list(pfa.accepting)] = 1.0
    v0 = np.array([float(x) for x in pfa.initial])
    out = {}
    for m in sorted(set(lengths)):
        out[m] = float(acc @ (np.linalg.matrix_power(a, m) @ v0))
    return out


def limit_profile(
    pfa: UnaryPFA,
    structure: ChainStructure,
    r_max: int = 256,
    tol: float = 1e-9,
    window: int = 8,
) -> LimitProfile:
    """Estimate ``lim_r f(r*D + j)`` for each residue ``j``.

    Rungs ``r = 16, 32, ...`` up to ``r_max``; at each rung the estimate is
    the mean over ``r..r+window-1``.  A residue is flagged stable when the
    last two rung estimates differ by less than ``tol``.  The flag is a
    heuristic: no convergence rate is known in general.
    """
    if r_max < 16:
        raise ValueError("r_max must be at least 16")
    D = structure.D
    rungs = []
    r = 16
    while r <= r_max:
        rungs.append(r)
        r *= 2
    lengths = [
        (rr + w) * D + j for rr in rungs for w in range(window) for j in range(D)
    ]
    values = _values_at(pfa, lengths)
    means = []
    for rr in rungs:
        means.append(
            [
                sum(values[(rr + w) * D + j] for w in range(window)) / window
                for j in range(D)
            ]
        )
    final = means[-1]
    if len(means) >= 2:
        stable = tuple(abs(a - b) < tol for a, b in zip(means[-1], means[-2]))
    else:
        stable = tuple(False for _ in range(D))
    final = tuple(min(1.0, max(0.0, x)) for x in final)
    return LimitProfile(final, stable)


def stationary_accepting_mass(pfa: UnaryPFA, iterations: int = 10_000, tol: float = 1e-14) -> float:
    """Power iteration to a fixed point; only meaningful for regular chains."""
    a = dense_float(pfa.transition)
    v = np.array([float(x) for x in pfa.initial])
    for _ in range(iterations):
        w = a @ v
        if np.abs(w - v).max() < tol:
            v = w
            break
        v = w
    return float(sum(v[i] for i in pfa.accepting))

