"""Chain specifications: model name, sizes and a parameter family."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import chains as ch
from . import combinat as cb
from .errors import DomainError
from .infinite import TailParams
from .symfun import ParamVector

MODELS = (
    "mjmc",
    "mjmc-partition",
    "enriched",
    "adddrop",
    "enriched-adddrop",
    "annihilation",
    "enriched-annihilation",
    "doubly-enriched",
    "umjmc",
    "imjmc",
)
FAMILIES = ("explicit", "uniform", "geometric", "truncated-geometric", "bounded-geometric", "finite")

XS_MODELS = ("mjmc", "mjmc-partition", "enriched")
Z_MODELS = ("adddrop", "enriched-adddrop", "annihilation", "enriched-annihilation", "doubly-enriched")
INFINITE_MODELS = ("umjmc", "imjmc")


def parse_scalar(text, exact: bool = True):
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        return text if not exact else Fraction(text)
    s = str(text).strip()
    if exact:
        try:
            return Fraction(s)
        except ValueError as e:
            raise DomainError(f"not a rational number: {s!r}") from e
    return float(Fraction(s)) if "/" in s else float(s)


def parse_vector(text, exact: bool = True) -> list:
    if text is None:
        return None
    if isinstance(text, str):
        items = [t for t in text.replace(" ", "").split(",") if t]
    else:
        items = list(text)
    return [parse_scalar(t, exact) for t in items]


@dataclass
class ChainSpec:
    model: str
    h: Optional[int] = None
    k: Optional[int] = None
    l: Optional[int] = None
    xs: Optional[list] = None
    params: Optional[ch.AddDropParams] = None
    letters: Optional[list] = None  # doubly enriched alphabet weights
    tail: Optional[TailParams] = None
    allow_reducible: bool = False
    description: dict = field(default_factory=dict)

    @property
    def H(self) -> int:
        return self.h + 1

    @property
    def K(self) -> int:
        return self.k + 1

    def build(self) -> ch.SparseKernel:
        m = self.model
        ar = self.allow_reducible
        if m == "mjmc":
            return ch.build_mjmc(self.h, self.k, self.xs, allow_reducible=ar)
        if m == "mjmc-partition":
            return ch.build_mjmc_partition_form(self.k, self.h - self.k, self.xs, allow_reducible=ar)
        if m == "enriched":
            return ch.build_enriched(self.H, self.K, self.xs, allow_reducible=ar)
        if m == "adddrop":
            return ch.build_adddrop(self.h, self.params, allow_reducible=ar)
        if m == "enriched-adddrop":
            return ch.build_enriched_adddrop(self.H, self.params, allow_reducible=ar)
        if m == "annihilation":
            return ch.build_annihilation(self.h, self.params)
        if m == "enriched-annihilation":
            return ch.build_enriched_annihilation(self.H, self.params)
        if m == "doubly-enriched":
            return ch.build_doubly_enriched(self.h, zs=self.letters)
        raise DomainError(f"{m} has an infinite state space; no kernel to tabulate")

    def exact(self) -> ch.Distribution:
        """Closed-form stationary law."""
        m = self.model
        if m == "mjmc":
            return ch.stationary_mjmc(self.h, self.k, self.xs)
        if m == "mjmc-partition":
            return ch.stationary_mjmc_partition(self.k, self.h - self.k, self.xs)
        if m == "enriched":
            return ch.stationary_enriched(self.H, self.K, self.xs)
        if m == "adddrop":
            return ch.stationary_adddrop(self.h, self.params)
        if m == "enriched-adddrop":
            return ch.stationary_enriched_adddrop(self.H, self.params)
        if m == "annihilation":
            return ch.stationary_annihilation(self.h, self.params)
        if m == "enriched-annihilation":
            return ch.stationary_enriched_annihilation(self.H, self.params)
        if m == "doubly-enriched":
            return ch.stationary_doubly(self.h, zs=self.letters)
        raise DomainError(f"{m}: stationary law is an infinite measure; use the infinite module")

    def states(self) -> list:
        m = self.model
        if m == "mjmc":
            return cb.enumerate_words(self.h, self.k)
        if m == "mjmc-partition":
            return cb.enumerate_box_partitions(self.k, self.h - self.k)
        if m == "enriched":
            return cb.enumerate_set_partitions(self.H, self.K)
        if m in ("adddrop", "annihilation"):
            return cb.enumerate_all_words(self.h)
        if m in ("enriched-adddrop", "enriched-annihilation"):
            return cb.enumerate_set_partitions(self.H)
        if m == "doubly-enriched":
            return self.build().states
        raise DomainError(f"{m} has an infinite state space")

    def lowest(self):
        m = self.model
        if m == "mjmc":
            return cb.lowest_word(self.h, self.k)
        if m in ("mjmc-partition", "umjmc", "imjmc"):
            return ()
        if m == "enriched":
            return cb.lowest_set_partition(self.H, self.K)
        return self.states()[0]

    def parse_state(self, text: str):
        m = self.model
        if m in ("mjmc", "adddrop", "annihilation"):
            return cb.check_word(text)
        if m in ("mjmc-partition", "umjmc", "imjmc"):
            return cb.parse_partition(text)
        if m in ("enriched", "enriched-adddrop", "enriched-annihilation"):
            return cb.SetPartition.parse(text)
        return ch.parse_alpha(text)


def _xs_family(family: str, k: int, q, xs):
    if family == "explicit":
        if xs is None:
            raise DomainError("explicit family needs --xs")
        return list(xs)
    if family == "uniform":
        return list(ParamVector.uniform(k).xs)
    if q is None:
        raise DomainError(f"{family} family needs q")
    if family in ("geometric", "bounded-geometric"):
        return list(ParamVector.bounded_geometric(k, q).xs)
    if family == "truncated-geometric":
        return list(ParamVector.truncated_geometric(k, q).xs)
    raise DomainError(f"family {family!r} does not apply to finite insertion laws")


def make_spec(
    model: str,
    h: Optional[int] = None,
    k: Optional[int] = None,
    H: Optional[int] = None,
    K: Optional[int] = None,
    l: Optional[int] = None,
    family: Optional[str] = None,
    q=None,
    xs: Optional[Sequence] = None,
    a=None,
    zs: Optional[Sequence] = None,
    allow_reducible: bool = False,
    exact: bool = True,
) -> ChainSpec:
    """Validate sizes and parameters for ``model`` and return a ``ChainSpec``.

    Sizes may be given as ``(h, k)``, ``(H, K)`` or, where it makes sense,
    ``(k, l)``; they are converted to ``h`` and ``k``.
    """
    if model not in MODELS:
        raise DomainError(f"unknown model {model!r}; choose from {', '.join(MODELS)}")
    if h is None and H is not None:
        h = H - 1
    if k is None and K is not None:
        k = K - 1
    if h is None and k is not None and l is not None:
        h = k + l
    xs = parse_vector(xs, exact)
    zs = parse_vector(zs, exact)
    q = parse_scalar(q, exact) if q is not None else None
    a = parse_scalar(a, exact) if a is not None else None
    if family is None:
        family = "explicit" if (xs is not None or zs is not None) else "uniform"
    desc = {"model": model, "family": family}

    if model in INFINITE_MODELS:
        if family in ("geometric",):
            tail = TailParams.geometric(q)
        elif family in ("finite", "explicit"):
            if xs is None:
                raise DomainError("finite family needs --xs")
            tail = TailParams.finite(xs)
        else:
            raise DomainError(f"family {family!r} not supported for {model}")
        if model == "umjmc" and l is None:
            raise DomainError("umjmc needs the ball count l")
        desc.update(tail.spec)
        return ChainSpec(model, l=l, tail=tail, description=desc)

    if h is None:
        raise DomainError(f"{model} needs a size (-h or -H)")
    if h < 0:
        raise DomainError("size must be nonnegative")

    if model in XS_MODELS:
        if k is None:
            if xs is not None:
                k = len(xs) - 1
            else:
                raise DomainError(f"{model} needs -k (or -K)")
        if not 0 <= k <= h:
            raise DomainError(f"need 0 <= k <= h, got h={h}, k={k}")
        xs = _xs_family(family, k, q, xs)
        ch.check_xs(xs, k, allow_reducible=allow_reducible)
        desc.update({"h": h, "k": k, "xs": [ch.fmt_scalar(x) for x in xs]})
        return ChainSpec(model, h=h, k=k, l=h - k, xs=xs, allow_reducible=allow_reducible, description=desc)

    # models parametrised by a and z's
    if model == "adddrop" or model == "enriched-adddrop":
        if family == "uniform":
            a, zs = Fraction(1), [Fraction(1)] * (h + 1)
        elif family == "geometric":
            if q is None:
                raise DomainError("geometric family needs q")
            a = Fraction(1) if a is None else a
            zs = [q**i for i in range(1, h + 2)]
        elif zs is None or a is None:
            raise DomainError(f"{model} needs --a and --zs")
        params = ch.AddDropParams(a, zs)
        ch.check_adddrop(params, h, allow_reducible)
    else:
        if family == "uniform":
            a, zs = Fraction(1, h + 1), [Fraction(1, h + 1)] * h
        elif family == "geometric":
            if q is None:
                raise DomainError("geometric family needs q")
            # truncated geometric over the h+1 letters
            full = [(1 - q) * q ** (i - 1) for i in range(1, h + 1)] + [q**h]
            a, zs = full[-1], full[:-1]
        elif zs is None:
            raise DomainError(f"{model} needs --zs (and --a)")
        if model == "doubly-enriched" and a is None:
            # zs is the full letter distribution, possibly over a restricted alphabet
            letters = list(zs)
            if not ch._is_one(sum(letters, 0)):
                raise DomainError("letter probabilities must sum to 1")
            desc.update({"h": h, "letters": [ch.fmt_scalar(z) for z in letters]})
            return ChainSpec(model, h=h, letters=letters, description=desc)
        if a is None:
            raise DomainError(f"{model} needs --a")
        params = ch.AddDropParams(a, zs)
        ch.check_annihilation(params, h)
    desc.update({"h": h, "a": ch.fmt_scalar(params.a), "zs": [ch.fmt_scalar(z) for z in params.zs]})
    spec = ChainSpec(model, h=h, params=params, allow_reducible=allow_reducible, description=desc)
    if model == "doubly-enriched":
        spec.letters = params.full(h)
    return spec
