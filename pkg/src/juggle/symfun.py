"""Normalization factors as complete homogeneous symmetric polynomials.

Everything here is generic over the scalar type: pass ``Fraction`` for exact
results, ``float`` for quick numerics (rounding error grows roughly like
1e-12 per elementary operation in that case).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .combinat import BALL, enumerate_words, empties_left
from .errors import DomainError


def complete_homogeneous(l: int, ys: Sequence) -> Fraction:
    """``h_l(ys)``, built one variable at a time.

    Uses ``h_l(y_0..y_m) = h_l(y_0..y_{m-1}) + y_m * h_{l-1}(y_0..y_m)``.
    """
    if l < 0:
        raise DomainError("degree must be nonnegative")
    table = [1] + [0] * l
    for y in ys:
        for d in range(1, l + 1):
            table[d] = table[d] + y * table[d - 1]
    return table[l]


def complete_homogeneous_all(l: int, ys: Sequence) -> list:
    """``[h_0(ys), ..., h_l(ys)]``."""
    table = [1] + [0] * l
    for y in ys:
        for d in range(1, l + 1):
            table[d] = table[d] + y * table[d - 1]
    return table


def h_from_power_sums(l: int, power_sums: Sequence) -> Fraction:
    """``h_l`` from ``p_1..p_l`` by Newton's identity ``n h_n = sum p_i h_{n-i}``."""
    hs = [Fraction(1)]
    for n in range(1, l + 1):
        hs.append(sum(power_sums[i - 1] * hs[n - i] for i in range(1, n + 1)) / n)
    return hs[l]


def tail_sums(xs: Sequence) -> list:
    """``y_m = x_m + ... + x_k`` for ``m = 0..k``."""
    ys = []
    acc = 0
    for x in reversed(xs):
        acc = acc + x
        ys.append(acc)
    return ys[::-1]


def prefix_sums(zs: Sequence) -> list:
    """``[z_1, z_1+z_2, ...]``."""
    out, acc = [], 0
    for z in zs:
        acc = acc + z
        out.append(acc)
    return out


@dataclass(frozen=True)
class ParamVector:
    """Insertion probabilities ``x_0..x_k``; normalization checked on demand."""

    xs: tuple

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(self.xs))

    @property
    def k(self) -> int:
        return len(self.xs) - 1

    def is_normalized(self) -> bool:
        return sum(self.xs) == 1

    def ys(self) -> list:
        return tail_sums(self.xs)

    def zs(self) -> list:
        """``z_i = x_{K-i}`` for ``i = 1..K``."""
        return list(reversed(self.xs))

    # named families
    @classmethod
    def uniform(cls, k: int) -> "ParamVector":
        return cls([Fraction(1, k + 1)] * (k + 1))

    @classmethod
    def bounded_geometric(cls, k: int, q) -> "ParamVector":
        """Geometric conditioned on ``<= k``: ``x_i = (1-q) q^i / (1 - q^{k+1})``."""
        norm = 1 - q ** (k + 1)
        return cls([(1 - q) * q**i / norm for i in range(k + 1)])

    @classmethod
    def truncated_geometric(cls, k: int, q) -> "ParamVector":
        """``x_i = (1-q) q^i`` for ``i < k`` and ``x_k = q^k``."""
        return cls([(1 - q) * q**i for i in range(k)] + [q**k])


def Z_mjmc(h: int, k: int, xs: Sequence, method: str = "h") -> Fraction:
    """Normalization ``Z_{h,k}(x_0..x_k)``; vanishes for ``h < k``.

    ``method="h"`` evaluates ``h_{h-k}(y_0..y_k)``; ``method="words"`` sums
    the product weights over all words, which is exponential but independent.
    """
    xs = list(xs)
    if len(xs) != k + 1:
        raise DomainError(f"expected {k + 1} parameters, got {len(xs)}")
    if h < k:
        return 0
    ys = tail_sums(xs)
    if method == "h":
        return complete_homogeneous(h - k, ys)
    if method == "words":
        total = 0
        for w in enumerate_words(h, k):
            total = total + mjmc_word_weight(w, ys)
        return total
    raise DomainError(f"unknown method {method!r}")


def mjmc_word_weight(w: str, ys: Sequence):
    """Product over balls at ``i`` of ``y_{E_i}``."""
    weight = 1
    for c, e in zip(w, empties_left(w)):
        if c == BALL:
            weight = weight * ys[e]
    return weight


def Z_boundary(h: int, k: int, xs: Sequence):
    """``Z_{h,k}`` extended by ``Z = delta_{h,k}`` when ``h = -1`` or ``k = -1``."""
    if h == -1 or k == -1:
        return 1 if h == k else 0
    return Z_mjmc(h, k, xs)


def q_int(n: int, q):
    """``[n]_q = 1 + q + ... + q^{n-1}``."""
    if n < 0:
        raise DomainError("negative index")
    return sum((q**i for i in range(n)), 0 * q)


def stirling2(n: int, k: int) -> int:
    return q_stirling2(n, k, 1)


def q_stirling2(n: int, k: int, q):
    """``S_q(n,k) = S_q(n-1,k-1) + [k]_q S_q(n-1,k)`` with ``S_q(0,0) = 1``."""
    if n < 0 or k < 0:
        raise DomainError("negative index")
    if k > n:
        return 0 * q
    row = [1 + 0 * q] + [0 * q] * k  # S(0, j)
    for m in range(1, n + 1):
        new = [0 * q] * (k + 1)
        for j in range(1, min(m, k) + 1):
            new[j] = row[j - 1] + q_int(j, q) * row[j]
        row = new
    return row[k]


def q_binomial(n: int, k: int, q):
    """Gaussian binomial via ``[n,k] = [n-1,k-1] + q^k [n-1,k]``."""
    if n < 0 or k < 0:
        raise DomainError("negative index")
    if k > n:
        return 0 * q
    row = [1 + 0 * q]  # n = 0
    for m in range(1, n + 1):
        new = [1 + 0 * q] * (m + 1)
        for j in range(1, m):
            new[j] = row[j - 1] + q**j * row[j]
        row = new
    return row[k]


def bell(n: int) -> int:
    return sum(stirling2(n, k) for k in range(n + 1))


def specializations(h: int, k: int, q) -> list[tuple]:
    """The four closed-form specializations of ``Z_{h,k}`` at ``q``.

    Returns ``(name, Z value, closed form)`` triples.
    """
    ones = [1] * (k + 1)
    desc = [q ** (k - i) for i in range(k + 1)]
    asc = [q**i for i in range(k + 1)]
    trunc = [(1 - q) * q**i for i in range(k)] + [q**k]
    return [
        ("stirling", Z_mjmc(h, k, ones), stirling2(h + 1, k + 1)),
        ("q-stirling", Z_mjmc(h, k, desc), q_stirling2(h + 1, k + 1, q)),
        ("q-stirling-inverse", Z_mjmc(h, k, asc), q ** (k * (h - k)) * q_stirling2(h + 1, k + 1, 1 / q)),
        ("q-binomial", Z_mjmc(h, k, trunc), q_binomial(h, k, q)),
    ]


def zrecur_rhs(h: int, k: int, xs: Sequence):
    """Right side of the recursion that strips ``x_k``."""
    xs = list(xs)
    return sum(
        (comb(h, n) * xs[k] ** n * Z_boundary(h - n - 1, k - 1, xs[:k]) for n in range(h - k + 1)),
        0,
    )


def zsetrec_rhs(h: int, k: int, xs: Sequence):
    """Right side of the recursion that strips ``x_0``."""
    xs = list(xs)
    return Z_boundary(h - 1, k - 1, xs[1:]) + sum(xs) * Z_boundary(h - 1, k, xs)


def Z_adddrop(h: int, a, zs: Sequence):
    """``sum_k a^k h_{h-k}(z_1, z_1+z_2, ..., z_1+...+z_{k+1})``."""
    zs = list(zs)
    if len(zs) < h:
        raise DomainError(f"need at least {h} z-parameters")
    ps = prefix_sums(zs)
    total = 0
    for k in range(h + 1):
        if k == h:
            total = total + a**h
        else:
            total = total + a**k * complete_homogeneous(h - k, ps[: k + 1])
    return total
