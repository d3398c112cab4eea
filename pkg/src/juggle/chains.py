"""Transition kernels of the juggling chains and their stationary laws.

Seven finite chains are built here:

* ``mjmc`` on words with a fixed number of balls, and its partition form;
* ``enriched`` on set partitions with a fixed number of blocks;
* ``adddrop`` / ``enriched_adddrop`` on all words / all set partitions;
* ``annihilation`` / ``enriched_annihilation`` / ``doubly_enriched``.

Kernels store exact probabilities when given ``Fraction`` parameters.
Closed-form stationary laws are computed as unnormalized weights and then
normalized; the annihilation family carries no normalization constant, so
there we only assert that the weights already sum to one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Optional, Sequence

from . import combinat as cb
from .combinat import BALL, EMPTY, SetPartition
from .errors import DomainError
from .symfun import Z_adddrop, Z_mjmc, complete_homogeneous, prefix_sums, tail_sums

FLOAT_TOL = 1e-12


def state_text(s) -> str:
    if isinstance(s, str):
        return s
    if isinstance(s, SetPartition):
        return s.text()
    if isinstance(s, tuple) and s and s[0] is ALPHA:
        return alpha_text(s[1:])
    if isinstance(s, tuple):
        return cb.partition_text(s)
    raise TypeError(f"no text form for {s!r}")


class _Alpha:
    def __repr__(self):
        return "ALPHA"


# tag for doubly-enriched states so they are not confused with partitions
ALPHA = _Alpha()


def alpha_word(letters: Iterable[int]) -> tuple:
    return (ALPHA,) + tuple(letters)


def alpha_letters(s: tuple) -> tuple:
    return s[1:]


def alpha_text(letters: Sequence[int]) -> str:
    if all(x < 10 for x in letters):
        return "".join(str(x) for x in letters)
    return ".".join(str(x) for x in letters)


def parse_alpha(text: str) -> tuple:
    text = text.strip()
    if "." in text:
        return alpha_word(int(x) for x in text.split("."))
    return alpha_word(int(c) for c in text)


def _is_one(s) -> bool:
    if isinstance(s, float):
        return abs(s - 1) <= FLOAT_TOL
    return s == 1


def _is_zero(s) -> bool:
    if isinstance(s, float):
        return abs(s) <= FLOAT_TOL
    return s == 0


@dataclass(frozen=True)
class SparseKernel:
    """Row-stochastic matrix indexed by an ordered state list.

    ``rows[i]`` is a tuple of ``(j, p)`` pairs sorted by ``j`` with ``p != 0``.
    """

    states: tuple
    rows: tuple
    name: str = ""
    _index: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.states)})

    @property
    def n(self) -> int:
        return len(self.states)

    def index(self, state) -> int:
        return self._index[state]

    def labels(self) -> list[str]:
        return [state_text(s) for s in self.states]

    def entry(self, i: int, j: int):
        for jj, p in self.rows[i]:
            if jj == j:
                return p
        return 0

    def row_dict(self, i: int) -> dict:
        return dict(self.rows[i])

    def dense(self) -> list[list]:
        out = [[0] * self.n for _ in range(self.n)]
        for i, row in enumerate(self.rows):
            for j, p in row:
                out[i][j] = p
        return out

    def row_sums(self) -> list:
        return [sum((p for _, p in row), 0) for row in self.rows]

    def is_stochastic(self) -> bool:
        return all(p >= 0 for row in self.rows for _, p in row) and all(_is_one(s) for s in self.row_sums())

    def permuted(self, order: Sequence) -> "SparseKernel":
        """Same chain re-indexed by ``order`` (a permutation of ``states``)."""
        pos = {s: i for i, s in enumerate(order)}
        rows = []
        for s in order:
            row = self.rows[self.index(s)]
            rows.append(tuple(sorted((pos[self.states[j]], p) for j, p in row)))
        return SparseKernel(tuple(order), tuple(rows), self.name)

    def to_json(self) -> dict:
        return {
            "model": self.name,
            "states": self.labels(),
            "rows": [[[j, fmt_scalar(p)] for j, p in row] for row in self.rows],
        }


def fmt_scalar(x) -> str:
    if isinstance(x, float):
        return repr(x)
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def build_kernel(states: Sequence, successors: Callable, name: str = "") -> SparseKernel:
    """Tabulate ``successors(state) -> iterable of (target, prob)``.

    Parallel edges are merged by summing; zero-probability edges are dropped.
    """
    index = {s: i for i, s in enumerate(states)}
    rows = []
    for s in states:
        acc: dict = {}
        for t, p in successors(s):
            if t not in index:
                raise DomainError(f"transition from {state_text(s)} leaves the state space: {state_text(t)}")
            j = index[t]
            acc[j] = acc.get(j, 0) + p
        rows.append(tuple(sorted((j, p) for j, p in acc.items() if not _is_zero(p))))
    return SparseKernel(tuple(states), tuple(rows), name)


@dataclass(frozen=True)
class Distribution:
    states: tuple
    weights: tuple
    normalized: bool = True

    def total(self):
        return sum(self.weights, 0)

    def normalize(self) -> "Distribution":
        z = self.total()
        if _is_zero(z):
            raise DomainError("cannot normalize a zero measure")
        return Distribution(self.states, tuple(w / z for w in self.weights), True)

    def as_dict(self) -> dict:
        return dict(zip(self.states, self.weights))

    def labels(self) -> list[str]:
        return [state_text(s) for s in self.states]

    def reordered(self, order: Sequence) -> "Distribution":
        d = self.as_dict()
        return Distribution(tuple(order), tuple(d[s] for s in order), self.normalized)

    def to_json(self) -> dict:
        return {
            "states": self.labels(),
            "weights": [fmt_scalar(w) for w in self.weights],
            "floats": [float(w) for w in self.weights],
            "normalized": self.normalized,
        }

    def to_csv(self) -> str:
        lines = ["state,exact,float"]
        lines += [f"{s},{fmt_scalar(w)},{float(w)!r}" for s, w in zip(self.labels(), self.weights)]
        return "\n".join(lines) + "\n"


# -- parameter validation ---------------------------------------------------


def check_xs(xs: Sequence, k: int, allow_unnormalized=False, allow_reducible=False) -> list:
    xs = list(xs)
    if len(xs) != k + 1:
        raise DomainError(f"expected {k + 1} insertion probabilities, got {len(xs)}")
    if any(x < 0 for x in xs):
        raise DomainError("insertion probabilities must be nonnegative")
    if not allow_unnormalized and not _is_one(sum(xs, 0)):
        raise DomainError(f"insertion probabilities sum to {sum(xs, 0)}, not 1")
    if _is_zero(xs[0]) and not allow_reducible:
        raise DomainError("x_0 = 0: the chain may have several closed classes (pass allow_reducible)")
    return xs


@dataclass(frozen=True)
class AddDropParams:
    """Fugacity ``a`` and insertion weights ``z_1, z_2, ...``.

    For the annihilation models ``zs`` holds ``z_1..z_h`` and ``a`` plays the
    role of ``z_{h+1}``.
    """

    a: object
    zs: tuple

    def __post_init__(self):
        object.__setattr__(self, "zs", tuple(self.zs))
        if self.a < 0 or any(z < 0 for z in self.zs):
            raise DomainError("parameters must be nonnegative")

    def z(self, i: int):
        """``z_0 = a``, then ``z_1, z_2, ...``; zero past the end."""
        if i == 0:
            return self.a
        return self.zs[i - 1] if i <= len(self.zs) else 0

    def full(self, h: int) -> list:
        """``z_1..z_h`` followed by ``a`` (the annihilation convention)."""
        if len(self.zs) != h:
            raise DomainError(f"annihilation model needs exactly {h} z-parameters, got {len(self.zs)}")
        return list(self.zs) + [self.a]

    @classmethod
    def from_alphabet(cls, h: int, zs: Sequence) -> "AddDropParams":
        """Annihilation parameters for a letter distribution on ``{1..L}``.

        Letters past ``h+1`` behave like ``h+1``; missing letters get weight 0.
        """
        zs = list(zs)
        if len(zs) <= h + 1:
            zs = zs + [0] * (h + 1 - len(zs))
        else:
            zs = zs[:h] + [sum(zs[h:], 0)]
        return cls(zs[h], zs[:h])


def check_adddrop(p: AddDropParams, h: int, allow_reducible=False) -> None:
    if len(p.zs) < h:
        raise DomainError(f"add-drop model needs at least {h} z-parameters")
    if _is_zero(p.a) and not allow_reducible:
        raise DomainError("a = 0: the stationary law need not be unique (pass allow_reducible)")


def check_annihilation(p: AddDropParams, h: int, allow_unnormalized=False) -> list:
    full = p.full(h)
    if not allow_unnormalized and not _is_one(sum(full, 0)):
        raise DomainError(f"annihilation parameters sum to {sum(full, 0)}, not 1")
    return full


# -- MJMC -------------------------------------------------------------------


def build_mjmc(h: int, k: int, xs: Sequence, allow_unnormalized=False, allow_reducible=False) -> SparseKernel:
    xs = check_xs(xs, k, allow_unnormalized, allow_reducible)
    states = cb.enumerate_words(h, k)

    def succ(a):
        if not a:
            yield a, 1
            return
        shifted = a[1:] + EMPTY
        if a[0] == EMPTY:
            yield shifted, 1
        else:
            for i in range(k + 1):
                yield cb.replace_T(shifted, i), xs[i]

    return build_kernel(states, succ, "mjmc")


def partition_step(lam: Sequence[int], l: int, i: int) -> tuple:
    """Insertion move of the partition-form chain (last part must be 0)."""
    q = cb.pad(lam, l)
    j = next(j for j in range(l) if q[j] <= i)
    return cb.normalize_partition([x - 1 for x in q[:j]] + [i] + list(q[j:l - 1]))


def build_mjmc_partition_form(k: int, l: int, xs: Sequence, allow_unnormalized=False, allow_reducible=False) -> SparseKernel:
    xs = check_xs(xs, k, allow_unnormalized, allow_reducible)
    states = cb.enumerate_box_partitions(k, l)

    def succ(lam):
        if l == 0:
            yield lam, 1
            return
        q = cb.pad(lam, l)
        if q[-1] != 0:
            yield cb.normalize_partition(x - 1 for x in q), 1
        else:
            for i in range(k + 1):
                yield partition_step(q, l, i), xs[i]

    return build_kernel(states, succ, "mjmc-partition")


def build_enriched(H: int, K: int, xs: Sequence, allow_unnormalized=False, allow_reducible=False) -> SparseKernel:
    xs = check_xs(xs, K - 1, allow_unnormalized, allow_reducible)
    states = cb.enumerate_set_partitions(H, K)

    def succ(s):
        down = cb.down_shift(s)
        if s.has_singleton(1):
            yield cb.add_singleton(down), 1
        else:
            for i in range(K):
                yield cb.insert_I(down, i), xs[i]

    return build_kernel(states, succ, "enriched")


def mjmc_weights(h: int, k: int, xs: Sequence) -> Distribution:
    ys = tail_sums(xs)
    states = cb.enumerate_words(h, k)
    weights = []
    for w in states:
        prod_ = 1
        for c, e in zip(w, cb.empties_left(w)):
            if c == BALL:
                prod_ = prod_ * ys[e]
        weights.append(prod_)
    return Distribution(tuple(states), tuple(weights), False)


def _normalized_by(dist: Distribution, z) -> Distribution:
    if _is_zero(z):
        raise DomainError("normalization factor vanishes")
    return Distribution(dist.states, tuple(w / z for w in dist.weights), True)


def stationary_mjmc(h: int, k: int, xs: Sequence) -> Distribution:
    xs = check_xs(xs, k, allow_reducible=True)
    if _is_zero(xs[0]):
        raise DomainError("x_0 = 0: stationary distribution may be non-unique; use the linear solver")
    return _normalized_by(mjmc_weights(h, k, xs), Z_mjmc(h, k, xs))


def partition_weights(k: int, l: int, xs: Sequence) -> Distribution:
    ys = tail_sums(xs)
    states = cb.enumerate_box_partitions(k, l)
    weights = []
    for lam in states:
        prod_ = 1
        for part in cb.pad(lam, l):
            prod_ = prod_ * ys[part]
        weights.append(prod_)
    return Distribution(tuple(states), tuple(weights), False)


def stationary_mjmc_partition(k: int, l: int, xs: Sequence) -> Distribution:
    xs = check_xs(xs, k, allow_reducible=True)
    if _is_zero(xs[0]):
        raise DomainError("x_0 = 0: stationary distribution may be non-unique; use the linear solver")
    return _normalized_by(partition_weights(k, l, xs), Z_mjmc(k + l, k, xs))


def enriched_weight(s: SetPartition, xs: Sequence):
    K = s.K
    w = 1
    for arch in s.arches():
        w = w * xs[K - arch.cover_count]
    return w


def enriched_weights(H: int, K: int, xs: Sequence) -> Distribution:
    states = cb.enumerate_set_partitions(H, K)
    return Distribution(tuple(states), tuple(enriched_weight(s, xs) for s in states), False)


def stationary_enriched(H: int, K: int, xs: Sequence) -> Distribution:
    xs = check_xs(xs, K - 1, allow_reducible=True)
    if _is_zero(xs[0]):
        raise DomainError("x_0 = 0: stationary distribution may be non-unique; use the linear solver")
    return _normalized_by(enriched_weights(H, K, xs), Z_mjmc(H - 1, K - 1, xs))


def marginal_part(j: int, n: int, k: int, l: int, xs: Sequence):
    """Stationary probability that the ``j``-th part equals ``n``."""
    if not (1 <= j <= l and 0 <= n <= k):
        raise DomainError("need 1 <= j <= l and 0 <= n <= k")
    ys = tail_sums(xs)
    return ys[n] * complete_homogeneous(j - 1, ys[n:]) * complete_homogeneous(l - j, ys[: n + 1]) / complete_homogeneous(l, ys)


def joint_parts(constraints: Sequence[tuple], k: int, l: int, xs: Sequence):
    """Stationary probability of ``{lambda_{j_s} = n_s for all s}``.

    ``constraints`` is a list of ``(j, n)`` with ``j`` strictly increasing
    and ``n`` nonincreasing.
    """
    cons = list(constraints)
    js = [j for j, _ in cons]
    ns = [n for _, n in cons]
    if any(not (1 <= j <= l) for j in js) or any(not (0 <= n <= k) for n in ns):
        raise DomainError("constraint out of range")
    if any(a >= b for a, b in zip(js, js[1:])) or any(a < b for a, b in zip(ns, ns[1:])):
        raise DomainError("constraints must be strictly increasing in j and nonincreasing in n")
    ys = tail_sums(xs)
    js = [0] + js + [l + 1]
    ns = [k] + ns + [0]
    num = 1
    for s in range(1, len(js)):
        num = num * ys[ns[s]] * complete_homogeneous(js[s] - js[s - 1] - 1, ys[ns[s]: ns[s - 1] + 1])
    return num / complete_homogeneous(l, ys)


# -- lumping maps -----------------------------------------------------------


@dataclass(frozen=True)
class LumpingMap:
    """Total map between ordered state spaces, i.e. a 0/1 matrix with one 1 per row."""

    source: tuple
    target: tuple
    image: tuple  # image[i] = target index of source[i]
    name: str = ""

    @classmethod
    def from_function(cls, source: Sequence, target: Sequence, f: Callable, name: str = "") -> "LumpingMap":
        pos = {t: j for j, t in enumerate(target)}
        return cls(tuple(source), tuple(target), tuple(pos[f(s)] for s in source), name)

    def matrix(self) -> list[list[int]]:
        out = [[0] * len(self.target) for _ in self.source]
        for i, j in enumerate(self.image):
            out[i][j] = 1
        return out

    def fibers(self) -> list[list[int]]:
        out = [[] for _ in self.target]
        for i, j in enumerate(self.image):
            out[j].append(i)
        return out

    def push(self, dist: Distribution) -> Distribution:
        """Row vector times the map: sum weights over each fiber."""
        if tuple(dist.states) != self.source:
            raise DomainError("distribution is not on the source space")
        acc = [0] * len(self.target)
        for i, j in enumerate(self.image):
            acc[j] = acc[j] + dist.weights[i]
        return Distribution(self.target, tuple(acc), dist.normalized)


def lumping_psi(H: int, K: Optional[int] = None) -> LumpingMap:
    source = cb.enumerate_set_partitions(H, K)
    if K is None:
        target = cb.enumerate_all_words(H - 1)
    else:
        target = cb.enumerate_words(H - 1, K - 1)
    return LumpingMap.from_function(source, target, cb.psi, "psi")


def identity_map(states: Sequence) -> LumpingMap:
    return LumpingMap(tuple(states), tuple(states), tuple(range(len(states))), "id")


def verify_intertwining(A: SparseKernel, M: LumpingMap, B: SparseKernel) -> bool:
    """Exact check of ``A M = M B``."""
    if tuple(A.states) != M.source or tuple(B.states) != M.target:
        raise DomainError("dimension mismatch between kernels and map")
    for i in range(A.n):
        lhs: dict = {}
        for t, p in A.rows[i]:
            j = M.image[t]
            lhs[j] = lhs.get(j, 0) + p
        rhs = B.row_dict(M.image[i])
        keys = set(lhs) | set(rhs)
        if any(not _is_zero(lhs.get(j, 0) - rhs.get(j, 0)) for j in keys):
            return False
    return True


# -- add-drop ---------------------------------------------------------------


def build_adddrop(h: int, p: AddDropParams, allow_reducible=False) -> SparseKernel:
    check_adddrop(p, h, allow_reducible)
    states = cb.enumerate_all_words(h)

    def succ(a):
        if h == 0:
            yield a, 1
            return
        shifted = a[1:] + EMPTY
        k = shifted.count(EMPTY)
        denom = sum((p.z(i) for i in range(k + 1)), 0)
        for i in range(k + 1):
            yield cb.replace_S(shifted, i), p.z(i) / denom

    return build_kernel(states, succ, "adddrop")


def build_enriched_adddrop(H: int, p: AddDropParams, allow_reducible=False) -> SparseKernel:
    check_adddrop(p, H - 1, allow_reducible)
    states = cb.enumerate_set_partitions(H)

    def succ(s):
        down = cb.down_shift(s)
        k = down.K
        denom = sum((p.z(i) for i in range(k + 1)), 0)
        for i in range(k + 1):
            yield cb.insert_J(down, i), p.z(i) / denom

    return build_kernel(states, succ, "enriched-adddrop")


def adddrop_weights(h: int, p: AddDropParams) -> Distribution:
    zpre = prefix_sums(p.zs)
    states = cb.enumerate_all_words(h)
    weights = []
    for w in states:
        val = p.a ** w.count(EMPTY)
        for c, r in zip(w, cb.empties_right(w)):
            if c == BALL:
                val = val * zpre[r]
        weights.append(val)
    return Distribution(tuple(states), tuple(weights), False)


def stationary_adddrop(h: int, p: AddDropParams) -> Distribution:
    check_adddrop(p, h)
    return _normalized_by(adddrop_weights(h, p), Z_adddrop(h, p.a, p.zs))


def enriched_adddrop_weight(s: SetPartition, p: AddDropParams):
    w = p.a ** (s.K - 1)
    for arch in s.arches():
        w = w * p.z(arch.cover_count)
    return w


def stationary_enriched_adddrop(H: int, p: AddDropParams) -> Distribution:
    check_adddrop(p, H - 1)
    states = cb.enumerate_set_partitions(H)
    dist = Distribution(tuple(states), tuple(enriched_adddrop_weight(s, p) for s in states), False)
    return _normalized_by(dist, Z_adddrop(H - 1, p.a, p.zs))


# -- annihilation -----------------------------------------------------------


def build_annihilation(h: int, p: AddDropParams, allow_unnormalized=False) -> SparseKernel:
    z = check_annihilation(p, h, allow_unnormalized)
    states = cb.enumerate_all_words(h)

    def succ(a):
        if h == 0:
            yield a, 1
            return
        shifted = a[1:] + EMPTY
        for i in range(1, h + 2):
            yield cb.replace_S(shifted, i), z[i - 1]

    return build_kernel(states, succ, "annihilation")


def build_enriched_annihilation(H: int, p: AddDropParams, allow_unnormalized=False) -> SparseKernel:
    h = H - 1
    z = check_annihilation(p, h, allow_unnormalized)
    states = cb.enumerate_set_partitions(H)

    def succ(s):
        down = cb.down_shift(s)
        for i in range(1, h + 2):
            yield cb.insert_J(down, i), z[i - 1]

    return build_kernel(states, succ, "enriched-annihilation")


def _letter_probs(h: int, zs: Optional[Sequence], p: Optional[AddDropParams]) -> list:
    if zs is None:
        if p is None:
            raise DomainError("need letter probabilities")
        zs = p.full(h)
    zs = list(zs)
    if any(z < 0 for z in zs):
        raise DomainError("letter probabilities must be nonnegative")
    return zs


def build_doubly_enriched(h: int, p: Optional[AddDropParams] = None, zs: Optional[Sequence] = None,
                          allow_unnormalized=False) -> SparseKernel:
    """Sliding window of ``h`` i.i.d. letters; alphabet ``{1..len(zs)}``.

    By default the alphabet is ``{1..h+1}`` with ``z_{h+1} = a``.
    """
    zs = _letter_probs(h, zs, p)
    if not allow_unnormalized and not _is_one(sum(zs, 0)):
        raise DomainError(f"letter probabilities sum to {sum(zs, 0)}, not 1")
    L = len(zs)
    states = [alpha_word(w) for w in product(range(1, L + 1), repeat=h)]

    def succ(s):
        letters = alpha_letters(s)
        if h == 0:
            yield s, 1
            return
        for i in range(1, L + 1):
            yield alpha_word(letters[1:] + (i,)), zs[i - 1]

    return build_kernel(states, succ, "doubly-enriched")


def annihilation_weight(w: str, full: Sequence):
    """Product formula on a word; ``full`` is ``z_1..z_{h+1}`` (zeros allowed)."""
    h = len(w)
    zpre = prefix_sums(full)
    val = 1
    for c, r in zip(w, cb.empties_right(w)):
        if c == BALL:
            val = val * zpre[r]
    total = zpre[-1] if full else 0
    for j in range(1, w.count(EMPTY) + 1):
        # z_{j+1} + ... + z_{h+1}
        val = val * (total - zpre[j - 1])
    return val


def stationary_annihilation(h: int, p: AddDropParams, allow_unnormalized=False) -> Distribution:
    full = check_annihilation(p, h, allow_unnormalized)
    states = cb.enumerate_all_words(h)
    dist = Distribution(tuple(states), tuple(annihilation_weight(w, full) for w in states), True)
    if not allow_unnormalized and not _is_one(dist.total()):
        raise AssertionError("annihilation weights fail to sum to 1")
    return dist if not allow_unnormalized else Distribution(dist.states, dist.weights, False)


def enriched_annihilation_weight(s: SetPartition, full: Sequence):
    zpre = prefix_sums(full)
    total = zpre[-1] if full else 0
    val = 1
    for arch in s.arches():
        val = val * full[arch.cover_count - 1]
    for i in range(1, s.K):
        # z_{i+1} + ... + z_H
        val = val * (total - zpre[i - 1])
    return val


def stationary_enriched_annihilation(H: int, p: AddDropParams, allow_unnormalized=False) -> Distribution:
    full = check_annihilation(p, H - 1, allow_unnormalized)
    states = cb.enumerate_set_partitions(H)
    dist = Distribution(tuple(states), tuple(enriched_annihilation_weight(s, full) for s in states), True)
    if not allow_unnormalized and not _is_one(dist.total()):
        raise AssertionError("enriched annihilation weights fail to sum to 1")
    return dist if not allow_unnormalized else Distribution(dist.states, dist.weights, False)


def stationary_doubly(h: int, p: Optional[AddDropParams] = None, zs: Optional[Sequence] = None) -> Distribution:
    zs = _letter_probs(h, zs, p)
    states = [alpha_word(w) for w in product(range(1, len(zs) + 1), repeat=h)]
    weights = []
    for s in states:
        val = 1
        for letter in alpha_letters(s):
            val = val * zs[letter - 1]
        weights.append(val)
    dist = Distribution(tuple(states), tuple(weights), True)
    if not _is_one(dist.total()):
        raise AssertionError("doubly enriched weights fail to sum to 1")
    return dist


def stationary_annihilation_restricted(h: int, zs: Sequence) -> Distribution:
    """Annihilation law when letters are drawn from ``{1..L}`` with ``L <= h``.

    Words with at least ``L`` empty sites get probability zero.
    """
    zs = list(zs)
    L = len(zs)
    if L > h:
        raise DomainError("restricted formula applies to alphabets of size <= h")
    zpre = prefix_sums(zs)
    states = cb.enumerate_all_words(h)
    weights = []
    for w in states:
        k = w.count(EMPTY)
        if k >= L:
            weights.append(0)
            continue
        val = 1
        for c, r in zip(w, cb.empties_right(w)):
            if c == BALL:
                val = val * zpre[min(r, L - 1)]
        for j in range(1, k + 1):
            val = val * (zpre[-1] - zpre[j - 1])
        weights.append(val)
    return Distribution(tuple(states), tuple(weights), True)


def stationary_enriched_annihilation_restricted(H: int, zs: Sequence) -> Distribution:
    zs = list(zs)
    L = len(zs)
    if L > H - 1:
        raise DomainError("restricted formula applies to alphabets of size <= h")
    zpre = prefix_sums(zs)
    states = cb.enumerate_set_partitions(H)
    weights = []
    for s in states:
        if s.K > L:
            weights.append(0)
            continue
        val = 1
        for arch in s.arches():
            val = val * zs[arch.cover_count - 1]
        for i in range(1, s.K):
            val = val * (zpre[-1] - zpre[i - 1])
        weights.append(val)
    return Distribution(tuple(states), tuple(weights), True)


# -- projections of the doubly enriched chain -------------------------------


def phi(letters: Sequence[int]) -> str:
    w = ""
    for x in letters:
        w = cb.replace_S(w + EMPTY, x)
    return w


def phi_tilde(letters: Sequence[int]) -> SetPartition:
    s = SetPartition(1, ((1,),))
    for x in letters:
        s = cb.insert_J(s, x)
    return s


def phi_map(h: int, alphabet: Optional[int] = None) -> LumpingMap:
    L = h + 1 if alphabet is None else alphabet
    source = [alpha_word(w) for w in product(range(1, L + 1), repeat=h)]
    return LumpingMap.from_function(source, cb.enumerate_all_words(h), lambda s: phi(alpha_letters(s)), "phi")


def phi_tilde_map(h: int, alphabet: Optional[int] = None) -> LumpingMap:
    L = h + 1 if alphabet is None else alphabet
    source = [alpha_word(w) for w in product(range(1, L + 1), repeat=h)]
    return LumpingMap.from_function(
        source, cb.enumerate_set_partitions(h + 1), lambda s: phi_tilde(alpha_letters(s)), "phi-tilde"
    )
