"""Juggling words, integer partitions and set partitions.

Words are plain strings over ``'b'`` (ball) and ``'o'`` (empty site), so the
lexicographic order of Python strings is the state order used everywhere.
Integer partitions are tuples with trailing zeros stripped.  Set partitions
carry their ground-set size explicitly so that the empty set partition of
``{}`` is representable.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

from .errors import DomainError

BALL = "b"
EMPTY = "o"

Word = str
Partition = tuple


def check_word(w: str) -> str:
    if any(c not in (BALL, EMPTY) for c in w):
        raise DomainError(f"not a juggling word: {w!r}")
    return w


def enumerate_words(h: int, k: int) -> list[str]:
    """All words of length ``h`` with exactly ``k`` empty sites, sorted."""
    if h < 0 or k < 0 or k > h:
        raise DomainError(f"need 0 <= k <= h, got h={h}, k={k}")
    words = []
    for empties in combinations(range(h), k):
        letters = [BALL] * h
        for i in empties:
            letters[i] = EMPTY
        words.append("".join(letters))
    words.sort()
    return words


def enumerate_all_words(h: int) -> list[str]:
    """All ``2**h`` words of length ``h``, sorted."""
    if h < 0:
        raise DomainError("h must be nonnegative")
    return sorted(w for k in range(h + 1) for w in enumerate_words(h, k))


# -- integer partitions -----------------------------------------------------


def normalize_partition(parts: Iterable[int]) -> tuple:
    p = tuple(int(x) for x in parts)
    if any(x < 0 for x in p):
        raise DomainError(f"negative part in {p}")
    if any(p[i] < p[i + 1] for i in range(len(p) - 1)):
        raise DomainError(f"parts must be nonincreasing: {p}")
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def pad(p: Sequence[int], length: int) -> tuple:
    if len(p) > length:
        raise DomainError(f"{tuple(p)} has more than {length} parts")
    return tuple(p) + (0,) * (length - len(p))


def in_box(p: Sequence[int], k: int, l: int) -> bool:
    p = normalize_partition(p)
    return len(p) <= l and (not p or p[0] <= k)


def enumerate_box_partitions(k: int, l: int) -> list[tuple]:
    """Partitions with at most ``l`` parts, each at most ``k``.

    Ordered lexicographically on the length-``l`` zero-padded tuples.
    """
    if k < 0 or l < 0:
        raise DomainError("k and l must be nonnegative")
    out = []

    def rec(prefix, bound, remaining):
        if remaining == 0:
            out.append(normalize_partition(prefix))
            return
        for v in range(bound + 1):
            rec(prefix + [v], v, remaining - 1)

    rec([], k, l)
    return out


def partitions_of(n: int, max_part: Optional[int] = None) -> Iterator[tuple]:
    """Partitions of ``n`` in reverse-lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions_of(n - first, first):
            yield (first,) + rest


def partitions_up_to(size: int) -> list[tuple]:
    return [p for n in range(size + 1) for p in partitions_of(n)]


def word_to_partition(w: str) -> tuple:
    check_word(w)
    balls = [i + 1 for i, c in enumerate(w) if c == BALL]
    l = len(balls)
    return normalize_partition(balls[l - 1 - j] - (l - j) for j in range(l))


def partition_to_word(p: Sequence[int], k: int, l: int) -> str:
    p = normalize_partition(p)
    if not in_box(p, k, l):
        raise DomainError(f"{p} does not fit in a {k}x{l} box")
    q = pad(p, l)
    # ball positions s_1 < ... < s_l with s_j = q_{l+1-j} + j
    letters = [EMPTY] * (k + l)
    for j in range(1, l + 1):
        letters[q[l - j] + j - 1] = BALL
    return "".join(letters)


def partition_text(p: Sequence[int]) -> str:
    return "[" + ",".join(str(x) for x in normalize_partition(p)) + "]"


def parse_partition(text: str) -> tuple:
    body = text.strip().strip("[]()").strip()
    if not body:
        return ()
    return normalize_partition(int(x) for x in body.split(","))


# -- set partitions ---------------------------------------------------------


class Arch(NamedTuple):
    s: int
    t: int
    cover_count: int


@dataclass(frozen=True)
class SetPartition:
    """Partition of ``{1..H}``; blocks are kept sorted by ascending maxima."""

    H: int
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[-1] if b else 0))
        if any(not b for b in blocks):
            raise DomainError("empty block")
        elems = [x for b in blocks for x in b]
        if sorted(elems) != list(range(1, self.H + 1)):
            raise DomainError(f"blocks {blocks} do not partition 1..{self.H}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], H: Optional[int] = None) -> "SetPartition":
        bl = [tuple(b) for b in blocks]
        if H is None:
            H = sum(len(b) for b in bl)
        return cls(H, tuple(bl))

    @classmethod
    def parse(cls, text: str) -> "SetPartition":
        """Parse ``"3,5|2,6,7|1,4,8"``; block order in the input is irrelevant."""
        text = text.strip()
        if text in ("", "{}", "()"):
            return cls(0, ())
        blocks = [tuple(int(x) for x in part.split(",")) for part in text.split("|")]
        return cls.from_blocks(blocks)

    @classmethod
    def from_rgs(cls, rgs: Sequence[int]) -> "SetPartition":
        groups: dict = {}
        for i, g in enumerate(rgs, start=1):
            groups.setdefault(g, []).append(i)
        return cls(len(rgs), tuple(tuple(v) for v in groups.values()))

    def rgs(self) -> tuple:
        label = {}
        out = []
        owner = self.block_of()
        for x in range(1, self.H + 1):
            b = owner[x]
            if b not in label:
                label[b] = len(label)
            out.append(label[b])
        return tuple(out)

    @property
    def K(self) -> int:
        return len(self.blocks)

    def block_of(self) -> dict:
        return {x: i for i, b in enumerate(self.blocks) for x in b}

    def maxima(self) -> set:
        return {b[-1] for b in self.blocks}

    def has_singleton(self, x: int) -> bool:
        return (x,) in self.blocks

    def text(self) -> str:
        return "|".join(",".join(str(x) for x in b) for b in self.blocks)

    def __str__(self) -> str:
        return self.text()

    def cover_count(self, s: int, t: int) -> int:
        """Number of blocks meeting ``{s, ..., t}``."""
        owner = self.block_of()
        return len({owner[x] for x in range(s, t + 1)})

    def arches(self) -> list[Arch]:
        out = []
        for b in self.blocks:
            for s, t in zip(b, b[1:]):
                out.append(Arch(s, t, self.cover_count(s, t)))
        out.sort()
        return out


def enumerate_set_partitions(H: int, K: Optional[int] = None) -> list[SetPartition]:
    """Set partitions of ``{1..H}`` (with exactly ``K`` blocks if given).

    Ordered lexicographically by restricted growth string.
    """
    if H < 0:
        raise DomainError("H must be nonnegative")
    if K is not None and (K < 0 or K > H or (K == 0 and H > 0)):
        raise DomainError(f"need 1 <= K <= H, got H={H}, K={K}")
    if H == 0:
        return [SetPartition(0, ())]
    out = []

    def rec(rgs, top):
        n = len(rgs)
        if n == H:
            if K is None or top + 1 == K:
                out.append(SetPartition.from_rgs(rgs))
            return
        # prune: remaining positions cannot open enough blocks
        if K is not None and top + 1 + (H - n) < K:
            return
        for g in range(top + 2):
            if K is not None and g > K - 1:
                break
            rec(rgs + [g], max(top, g))

    rec([0], 0)
    return out


def psi(s: SetPartition) -> str:
    """Word of length ``H - 1``: empty at ``i`` iff ``i`` is a block maximum."""
    maxima = s.maxima()
    return "".join(EMPTY if i in maxima else BALL for i in range(1, s.H))


def down_shift(s: SetPartition) -> SetPartition:
    if s.H < 1:
        raise DomainError("cannot shift the empty set partition")
    blocks = []
    for b in s.blocks:
        nb = tuple(x - 1 for x in b if x != 1)
        if nb:
            blocks.append(nb)
    return SetPartition(s.H - 1, tuple(blocks))


def up_remove_top(s: SetPartition) -> SetPartition:
    """Remove the element ``H`` (dropping its block if it becomes empty)."""
    blocks = [tuple(x for x in b if x != s.H) for b in s.blocks]
    return SetPartition(s.H - 1, tuple(b for b in blocks if b))


def add_singleton(t: SetPartition) -> SetPartition:
    return SetPartition(t.H + 1, t.blocks + ((t.H + 1,),))


def insert_I(t: SetPartition, i: int) -> SetPartition:
    """Insert ``H+1`` into the ``(i+1)``-th block by ascending maxima."""
    if not 0 <= i < t.K:
        raise DomainError(f"insertion index {i} out of range for {t.K} blocks")
    blocks = list(t.blocks)
    blocks[i] = blocks[i] + (t.H + 1,)
    return SetPartition(t.H + 1, tuple(blocks))


def insert_J(t: SetPartition, i: int) -> SetPartition:
    """Insert ``H+1`` into the ``i``-th block by decreasing maxima.

    ``i = 0`` or ``i`` beyond the block count opens a new singleton.
    """
    if i < 0:
        raise DomainError("J index must be nonnegative")
    if 1 <= i <= t.K:
        return insert_I(t, t.K - i)
    return add_singleton(t)


def replace_T(w: str, i: int) -> str:
    """Replace the ``(i+1)``-th empty site from the left by a ball."""
    pos = [j for j, c in enumerate(w) if c == EMPTY]
    if not 0 <= i < len(pos):
        raise DomainError(f"T index {i} out of range for {len(pos)} empty sites")
    j = pos[i]
    return w[:j] + BALL + w[j + 1:]


def replace_S(w: str, i: int) -> str:
    """Replace the ``i``-th empty site from the right; identity if out of range."""
    if i < 0:
        raise DomainError("S index must be nonnegative")
    pos = [j for j, c in enumerate(w) if c == EMPTY]
    if i == 0 or i > len(pos):
        return w
    j = pos[-i]
    return w[:j] + BALL + w[j + 1:]


def empties_left(w: str) -> list[int]:
    """``E_i``: number of empty sites strictly left of position ``i``."""
    out, seen = [], 0
    for c in w:
        out.append(seen)
        seen += c == EMPTY
    return out


def empties_right(w: str) -> list[int]:
    """``psi_i``: number of empty sites strictly right of position ``i``."""
    return list(reversed(empties_left(w[::-1])))


def statistics(w: str) -> dict:
    return {"E": empties_left(w), "psi": empties_right(w)}


def mahonian_N(s: SetPartition) -> int:
    return sum(a.cover_count - 1 for a in s.arches())


def lowest_word(h: int, k: int) -> str:
    return BALL * (h - k) + EMPTY * k


def lowest_set_partition(H: int, K: int) -> SetPartition:
    """Residue classes ``{j, j+K, j+2K, ...}``; weight ``x_0**(H-K)``."""
    return SetPartition(H, tuple(tuple(range(j, H + 1, K)) for j in range(1, K + 1)))
