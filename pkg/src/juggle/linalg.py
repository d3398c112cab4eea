"""Exact linear-algebra oracle for stationary distributions.

Nothing in this module knows about juggling: it only sees a row-stochastic
``SparseKernel`` with rational entries.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .chains import Distribution, SparseKernel, state_text
from .errors import DomainError


@dataclass(frozen=True)
class CommClass:
    states: tuple  # state indices, sorted
    closed: bool


@dataclass(frozen=True)
class NonUnique:
    """Returned when the stationary equations have more than one solution."""

    nullity: int
    closed_classes: tuple  # tuples of state indices
    labels: tuple = ()

    def to_json(self) -> dict:
        return {"unique": False, "nullity": self.nullity, "closed_classes": [list(c) for c in self.labels]}


def _check_exact(kernel: SparseKernel) -> None:
    for row in kernel.rows:
        for _, p in row:
            if not isinstance(p, (int, Fraction)):
                raise DomainError("exact oracle needs int/Fraction entries")
            if p < 0:
                raise DomainError("negative transition probability")
        if sum((p for _, p in row), Fraction(0)) != 1:
            raise DomainError("kernel is not row-stochastic")


def communicating_classes(kernel: SparseKernel) -> list[CommClass]:
    """Strongly connected components of the positive-edge graph (Tarjan).

    Iterative to stay clear of the recursion limit on a few hundred states.
    """
    n = kernel.n
    adj = [[j for j, p in row if p != 0] for row in kernel.rows]
    index = [None] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list = []
    comps: list = []
    counter = 0
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for t in range(pos, len(adj[v])):
                w = adj[v][t]
                if index[w] is None:
                    work.append((v, t + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    out = []
    for comp in comps:
        members = set(comp)
        closed = all(w in members for v in comp for w in adj[v])
        out.append(CommClass(tuple(comp), closed))
    out.sort(key=lambda c: c.states)
    return out


def closed_classes(kernel: SparseKernel) -> list[tuple]:
    return [c.states for c in communicating_classes(kernel) if c.closed]


def _nullspace_basis(kernel: SparseKernel) -> list[list[Fraction]]:
    """Basis of ``{pi : pi (P - I) = 0}`` by sparse Gaussian elimination.

    Equation ``j`` reads ``sum_i pi_i P_ij - pi_j = 0``.  Pivots are chosen
    Markowitz-style (short equation, rare variable) to limit fill-in.
    """
    n = kernel.n
    eqs: list[dict] = [dict() for _ in range(n)]
    for i, row in enumerate(kernel.rows):
        for j, p in row:
            eqs[j][i] = eqs[j].get(i, 0) + Fraction(p)
    for j in range(n):
        eqs[j][j] = eqs[j].get(j, 0) - 1
        if eqs[j][j] == 0:
            del eqs[j][j]
    cols: dict = {}
    for r, eq in enumerate(eqs):
        for v in eq:
            cols.setdefault(v, set()).add(r)
    active = {r for r in range(n) if eqs[r]}
    heap = [(len(eqs[r]), r) for r in active]
    heapq.heapify(heap)
    pivots: list = []  # (var, eq) in elimination order
    while active:
        size, r = heapq.heappop(heap)
        if r not in active or size != len(eqs[r]):
            continue  # stale entry
        eq = eqs[r]
        v = min(eq, key=lambda v: (len(cols[v]), v))
        active.discard(r)
        for u in eq:
            cols[u].discard(r)
        pv = eq[v]
        for r2 in list(cols[v]):
            other = eqs[r2]
            factor = other[v] / pv
            for u, c in eq.items():
                new = other.get(u, 0) - factor * c
                if new == 0:
                    if u in other:
                        del other[u]
                        cols[u].discard(r2)
                else:
                    if u not in other:
                        cols.setdefault(u, set()).add(r2)
                    other[u] = new
            if not other:
                active.discard(r2)
            else:
                heapq.heappush(heap, (len(other), r2))
        pivots.append((v, eq))
    pivot_vars = {v for v, _ in pivots}
    free = [v for v in range(n) if v not in pivot_vars]
    basis = []
    for f in free:
        sol = [Fraction(0)] * n
        sol[f] = Fraction(1)
        known = {u: Fraction(0) for u in free}
        known[f] = Fraction(1)
        for v, eq in reversed(pivots):
            acc = sum((c * known[u] for u, c in eq.items() if u != v), Fraction(0))
            val = -acc / eq[v]
            known[v] = val
            sol[v] = val
        basis.append(sol)
    return basis


def solve_stationary(kernel: SparseKernel):
    """Stationary ``Distribution`` of ``kernel``, or a ``NonUnique`` report."""
    _check_exact(kernel)
    basis = _nullspace_basis(kernel)
    if len(basis) != 1:
        closed = closed_classes(kernel)
        labels = tuple(tuple(state_text(kernel.states[i]) for i in c) for c in closed)
        return NonUnique(len(basis), tuple(closed), labels)
    vec = basis[0]
    total = sum(vec, Fraction(0))
    return Distribution(kernel.states, tuple(v / total for v in vec), True)


def is_stationary(kernel: SparseKernel, weights: Sequence) -> bool:
    out = [Fraction(0)] * kernel.n
    for i, row in enumerate(kernel.rows):
        for j, p in row:
            out[j] += weights[i] * p
    return all(a == b for a, b in zip(out, weights))


# -- sparse rational matrices -----------------------------------------------


@dataclass(frozen=True)
class RationalMatrix:
    """Sparse exact matrix: ``rows[i]`` maps column index to a nonzero entry."""

    nrows: int
    ncols: int
    rows: tuple

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, tuple({i: Fraction(1)} for i in range(n)))

    @classmethod
    def from_kernel(cls, kernel: SparseKernel) -> "RationalMatrix":
        return cls(kernel.n, kernel.n, tuple({j: p for j, p in row} for row in kernel.rows))

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence]) -> "RationalMatrix":
        ncols = len(dense[0]) if dense else 0
        return cls(len(dense), ncols, tuple({j: v for j, v in enumerate(r) if v != 0} for r in dense))

    def dense(self) -> list[list]:
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                out[i][j] = v
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and all(
            a == b for a, b in zip(self.rows, other.rows)
        )

    def row(self, i: int) -> list:
        r = self.rows[i]
        return [r.get(j, Fraction(0)) for j in range(self.ncols)]


def matmul(A: RationalMatrix, B: RationalMatrix) -> RationalMatrix:
    if A.ncols != B.nrows:
        raise DomainError("dimension mismatch")
    rows = []
    for ra in A.rows:
        acc: dict = {}
        for k, a in ra.items():
            for j, b in B.rows[k].items():
                acc[j] = acc.get(j, 0) + a * b
        rows.append({j: v for j, v in acc.items() if v != 0})
    return RationalMatrix(A.nrows, B.ncols, tuple(rows))


def powers(kernel, exponents: Sequence[int]) -> list[RationalMatrix]:
    """``[P^n for n in exponents]`` from a single sweep.

    Exact kernels are rescaled to an integer matrix ``Q = D P`` so the
    products run on Python ints; entries are turned back into fractions only
    for the requested exponents.
    """
    if any(n < 0 for n in exponents):
        raise DomainError("negative power")
    P = kernel if isinstance(kernel, RationalMatrix) else RationalMatrix.from_kernel(kernel)
    entries = [v for row in P.rows for v in row.values()]
    if not all(isinstance(v, (int, Fraction)) for v in entries):
        raise DomainError("exact powers need int/Fraction entries")
    D = 1
    for v in entries:
        D = math.lcm(D, Fraction(v).denominator)
    Q = [{j: int(v * D) for j, v in row.items()} for row in P.rows]
    wanted = set(exponents)
    found = {}
    cur = [{i: 1} for i in range(P.nrows)]
    for n in range(max(exponents, default=0) + 1):
        if n in wanted:
            scale = D**n
            found[n] = RationalMatrix(P.nrows, P.ncols, tuple({j: Fraction(v, scale) for j, v in r.items()} for r in cur))
        if n == max(exponents):
            break
        nxt = []
        for r in cur:
            acc: dict = {}
            for k, a in r.items():
                for j, b in Q[k].items():
                    acc[j] = acc.get(j, 0) + a * b
            nxt.append({j: v for j, v in acc.items() if v != 0})
        cur = nxt
    return [found[n] for n in exponents]


def matpow(kernel, n: int) -> RationalMatrix:
    return powers(kernel, [n])[0]


def rows_all_equal(m: RationalMatrix) -> bool:
    return all(r == m.rows[0] for r in m.rows[1:])


def propagate(kernel: SparseKernel, start: int, steps: int) -> dict:
    """Exact law after ``steps`` moves from the point mass at ``start``."""
    law = {start: Fraction(1)}
    for _ in range(steps):
        nxt: dict = {}
        for i, w in law.items():
            for j, p in kernel.rows[i]:
                nxt[j] = nxt.get(j, 0) + w * p
        law = {j: v for j, v in nxt.items() if v != 0}
    return law
