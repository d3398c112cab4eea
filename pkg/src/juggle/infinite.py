"""Unbounded-height (UMJMC) and infinitely-many-balls (IMJMC) chains.

Both live on integer partitions.  Infinite sums and products are only
evaluated for parameter families that come with a certified tail bound on
``y_m = x_m + x_{m+1} + ...``; the finiteness condition ``sum i x_i < inf``
cannot be decided from finitely many terms otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import combinat as cb
from .errors import DomainError
from .symfun import complete_homogeneous, h_from_power_sums


class NotCertified(DomainError):
    pass


@dataclass
class TailParams:
    """Insertion law ``x_0, x_1, ...`` with an optional certified tail bound.

    ``tail_bound(m)`` must return an upper bound for ``y_m`` that is summable
    over ``m``; ``tail_sum_bound(M)`` bounds ``y_{M+1} + y_{M+2} + ...``.
    """

    x_fn: Callable[[int], object]
    family: str
    support: Optional[int] = None  # largest i with x_i > 0, if finite
    y_fn: Optional[Callable[[int], object]] = None
    tail_bound: Optional[Callable[[int], object]] = None
    tail_sum_bound: Optional[Callable[[int], object]] = None
    spec: dict = field(default_factory=dict)
    _prefix: list = field(default_factory=lambda: [Fraction(0)], repr=False)

    def x(self, i: int):
        if i < 0:
            raise DomainError("negative index")
        if self.support is not None and i > self.support:
            return Fraction(0)
        return self.x_fn(i)

    def y(self, m: int):
        """Tail mass ``y_m``; ``y_0 = 1``."""
        if self.y_fn is not None:
            return self.y_fn(m)
        if self.support is not None and m > self.support:
            return Fraction(0)
        while len(self._prefix) <= m:
            self._prefix.append(self._prefix[-1] + self.x(len(self._prefix) - 1))
        return 1 - self._prefix[m]

    def ys(self, upto: int) -> list:
        return [self.y(m) for m in range(upto + 1)]

    @property
    def certified(self) -> bool:
        return self.support is not None or self.tail_sum_bound is not None

    def tail_sum(self, M: int):
        """Upper bound for ``sum_{m > M} y_m``."""
        if self.support is not None:
            return Fraction(0) if M >= self.support else sum(self.y(m) for m in range(M + 1, self.support + 1))
        if self.tail_sum_bound is None:
            raise NotCertified("finiteness not certified: no tail bound for this parameter family")
        return self.tail_sum_bound(M)

    def truncated(self, k: int) -> list:
        """``x_0..x_{k-1}, y_k``: the finite chain whose box weights agree."""
        return [self.x(i) for i in range(k)] + [self.y(k)]

    # families
    @classmethod
    def geometric(cls, q) -> "TailParams":
        q = Fraction(q) if not isinstance(q, float) else q
        if not 0 < q < 1:
            raise DomainError("geometric parameter must lie in (0, 1)")
        return cls(
            x_fn=lambda i: (1 - q) * q**i,
            family="geometric",
            y_fn=lambda m: q**m,
            tail_bound=lambda m: q**m,
            tail_sum_bound=lambda M: q ** (M + 1) / (1 - q),
            spec={"family": "geometric", "q": str(q)},
        )

    @classmethod
    def finite(cls, xs: Sequence) -> "TailParams":
        xs = list(xs)
        if any(x < 0 for x in xs) or sum(xs) != 1:
            raise DomainError("finite-support law must be nonnegative and sum to 1")
        k = len(xs) - 1
        while k > 0 and xs[k] == 0:
            k -= 1
        return cls(
            x_fn=lambda i: xs[i],
            family="finite",
            support=k,
            spec={"family": "finite", "xs": [str(x) for x in xs]},
        )

    @classmethod
    def dominated(cls, x_fn: Callable[[int], object], C, r) -> "TailParams":
        """Tabulated law with caller-supplied bound ``x_i <= C r^i`` for all ``i``."""
        C, r = Fraction(C), Fraction(r)
        if not 0 < r < 1:
            raise DomainError("dominating ratio must lie in (0, 1)")
        return cls(
            x_fn=x_fn,
            family="dominated",
            tail_bound=lambda m: C * r**m / (1 - r),
            tail_sum_bound=lambda M: C * r ** (M + 1) / (1 - r) ** 2,
            spec={"family": "dominated", "C": str(C), "r": str(r)},
        )

    @classmethod
    def from_spec(cls, spec: dict) -> "TailParams":
        fam = spec.get("family")
        if fam == "geometric":
            return cls.geometric(Fraction(spec["q"]))
        if fam == "finite":
            return cls.finite([Fraction(x) for x in spec["xs"]])
        raise DomainError(f"unknown parameter family {fam!r}")


def umjmc_weight(lam: Sequence[int], params: TailParams):
    w = 1
    for part in cb.normalize_partition(lam):
        w = w * params.y(part)
    return w


imjmc_weight = umjmc_weight


@dataclass(frozen=True)
class MassReport:
    value: object  # truncated sum or product
    terms: int  # number of y's (or factors) used
    bound: object  # certified upper bound on |exact - value|

    def to_json(self) -> dict:
        return {"value": str(self.value), "value_float": float(self.value), "terms": self.terms, "bound": float(self.bound)}


def umjmc_mass(l: int, params: TailParams, tol=Fraction(1, 10**12), max_terms: int = 100000) -> MassReport:
    """``h_l(y_0, y_1, ...)`` truncated at ``y_K`` once the error bound is below ``tol``.

    Multisets that use some index beyond ``K`` contribute at most
    ``T_K * (S_K + T_K)^(l-1)`` where ``S_K = y_0 + ... + y_K`` and ``T_K``
    bounds the remaining tail sum.
    """
    if l < 0:
        raise DomainError("negative ball count")
    if l == 0:
        return MassReport(Fraction(1), 0, Fraction(0))
    if not params.certified:
        raise NotCertified("finiteness not certified: no tail bound for this parameter family")
    K = 0
    S = params.y(0)
    while True:
        T = params.tail_sum(K)
        bound = T * (S + T) ** (l - 1)
        if bound < tol or (params.support is not None and K >= params.support):
            return MassReport(complete_homogeneous(l, params.ys(K)), K + 1, bound)
        K += 1
        if K > max_terms:
            raise NotCertified(f"tail bound not below {tol} after {max_terms} terms")
        S = S + params.y(K)


def geometric_umjmc_mass(l: int, q) -> Fraction:
    """Closed form for the geometric family via power sums ``p_m = 1/(1 - q^m)``."""
    return h_from_power_sums(l, [1 / (1 - q**m) for m in range(1, l + 1)])


def imjmc_step(lam: Sequence[int], i: int) -> tuple:
    """Insert part ``i`` at the first ``j`` with ``lam_j <= i``, decrementing the parts before it."""
    if i < 0:
        raise DomainError("insertion index must be nonnegative")
    p = list(cb.normalize_partition(lam))
    j = next((j for j, v in enumerate(p) if v <= i), len(p))
    return cb.normalize_partition([v - 1 for v in p[:j]] + [i] + p[j:])


def umjmc_step(lam: Sequence[int], l: int, i: int) -> tuple:
    """One move of the ``l``-ball chain given insertion index ``i``.

    With ``l`` nonzero parts the first site is empty and every part drops by
    one regardless of ``i``.
    """
    p = cb.normalize_partition(lam)
    if len(p) > l:
        raise DomainError(f"{p} has more than {l} parts")
    if len(p) == l and l > 0:
        return cb.normalize_partition(v - 1 for v in p)
    if l == 0:
        return ()
    return imjmc_step(p, i)


def imjmc_mass(params: TailParams, tol=Fraction(1, 10**12), terms: Optional[int] = None, max_terms: int = 100000) -> MassReport:
    """``prod_{m>=1} 1/(1 - y_m)`` truncated after ``terms`` factors.

    With ``eps = T_M / (1 - y_{M+1})`` the relative truncation error is at most
    ``eps / (1 - eps)``.
    """
    if not params.certified:
        raise NotCertified("finiteness not certified: no tail bound for this parameter family")
    if params.y(1) >= 1:
        raise DomainError("x_0 must be positive")
    value = Fraction(1) if not isinstance(params.y(1), float) else 1.0
    M = 0
    while True:
        if terms is not None and M >= terms:
            break
        T = params.tail_sum(M)
        y_next = params.y(M + 1)
        eps = T / (1 - y_next)
        if terms is None and eps < 1 and value * eps / (1 - eps) < tol:
            break
        M += 1
        if M > max_terms:
            raise NotCertified(f"product not converged after {max_terms} factors")
        value = value / (1 - params.y(M))
    T = params.tail_sum(M)
    eps = T / (1 - params.y(M + 1))
    bound = value * eps / (1 - eps) if eps < 1 else float("inf")
    return MassReport(value, M, bound)


# -- invariance checks ------------------------------------------------------


def _close(a, b) -> bool:
    if isinstance(a, float) or isinstance(b, float):
        return abs(a - b) <= 1e-10
    return a == b


def verify_umjmc_invariance(l: int, params: TailParams, part_cap: int) -> bool:
    """Balance equations for every partition with ``<= l`` parts, each ``<= part_cap``.

    Inflow is accumulated by running the forward dynamics from every state in
    the box enlarged by one, which contains all predecessors.
    """
    target = cb.enumerate_box_partitions(part_cap, l)
    inflow = {lam: 0 for lam in target}
    for mu in cb.enumerate_box_partitions(part_cap + 1, l):
        w = umjmc_weight(mu, params)
        if len(mu) == l:  # forced move, including the empty chain l = 0
            nxt = umjmc_step(mu, l, 0)
            if nxt in inflow:
                inflow[nxt] = inflow[nxt] + w
            continue
        for i in range(part_cap + 1):
            nxt = umjmc_step(mu, l, i)
            if nxt in inflow:
                inflow[nxt] = inflow[nxt] + w * params.x(i)
    return all(_close(inflow[lam], umjmc_weight(lam, params)) for lam in target)


def imjmc_predecessors(lam: Sequence[int]) -> list[tuple]:
    """Pairs ``(mu, i)`` with ``imjmc_step(mu, i) == lam`` and ``i >= 1``.

    For ``i = 0`` the predecessors are ``(lam + 1, 1^n)`` for every ``n >= 0``,
    an infinite family handled separately by the caller.
    """
    p = cb.normalize_partition(lam)
    out = []
    for j, v in enumerate(p):
        if v >= 1:
            mu = cb.normalize_partition([u + 1 for u in p[:j]] + list(p[j + 1:]))
            if imjmc_step(mu, v) == p:
                out.append((mu, v))
    return sorted(set(out))


def verify_imjmc_invariance(params: TailParams, size_cap: int) -> bool:
    """Balance equations for every partition of size ``<= size_cap``.

    Inflow through ``i = 0`` sums ``w(lam + 1) y_1^n`` over ``n``, which is
    ``w(lam + 1) / (1 - y_1)``.
    """
    y1 = params.y(1)
    for lam in cb.partitions_up_to(size_cap):
        shifted = tuple(v + 1 for v in lam)
        inflow = params.x(0) * imjmc_weight(shifted, params) / (1 - y1)
        for mu, i in imjmc_predecessors(lam):
            inflow = inflow + imjmc_weight(mu, params) * params.x(i)
        if not _close(inflow, imjmc_weight(lam, params)):
            return False
    return True


def path_law(t: int, nu: Sequence[int], l: Optional[int], params: TailParams) -> dict:
    """Exact law of ``(Lambda_0, ..., Lambda_t)`` started at ``nu``.

    ``l=None`` is the infinite-ball chain.  Needs finite-support parameters.
    """
    if params.support is None:
        raise DomainError("exhaustive expansion needs finite-support parameters")
    nu = cb.normalize_partition(nu)
    paths = {(nu,): Fraction(1)}
    for _ in range(t):
        nxt: dict = {}
        for path, pr in paths.items():
            lam = path[-1]
            if l is not None and len(lam) == l and l > 0:
                moves = [(umjmc_step(lam, l, 0), 1)]
            elif l == 0:
                moves = [((), 1)]
            else:
                moves = [(imjmc_step(lam, i), params.x(i)) for i in range(params.support + 1)]
            for mu, p in moves:
                if p == 0:
                    continue
                key = path + (mu,)
                nxt[key] = nxt.get(key, 0) + pr * p
        paths = nxt
    return paths


def verify_l_to_infinity(t: int, nu: Sequence[int], l_values: Sequence[Optional[int]], params: TailParams) -> bool:
    """Path laws over ``t`` steps agree for every ``l`` listed and for ``l = inf``.

    Each finite ``l`` must satisfy ``l >= parts(nu) + t`` so that no state
    visited before time ``t`` has ``l`` nonzero parts.
    """
    nu = cb.normalize_partition(nu)
    for l in l_values:
        if l is not None and l < len(nu) + t:
            raise DomainError(f"l={l} too small for t={t} from a partition with {len(nu)} parts")
    ref = path_law(t, nu, None, params)
    return all(path_law(t, nu, l, params) == ref for l in l_values)
