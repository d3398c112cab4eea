"""Invariant suites: every closed form checked against exact enumeration or the solver.

Each suite returns a list of ``CheckResult``.  Random parameter points are
positive rationals drawn from ``random.Random(seed)``, so a suite run is
reproducible from its seed.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Optional

from . import chains as ch
from . import combinat as cb
from . import infinite as inf
from . import symfun as sf
from .linalg import NonUnique, closed_classes, communicating_classes, is_stationary, matpow, powers, propagate, solve_stationary

DEFAULT_QS = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(3, 4), Fraction(5, 7))


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "seconds": round(self.seconds, 4)}


def _run(results: list, name: str, fn: Callable) -> CheckResult:
    t0 = time.perf_counter()
    try:
        out = fn()
        ok, detail = out if isinstance(out, tuple) else (bool(out), "")
    except Exception as e:  # a crashing check is a failed check
        ok, detail = False, f"{type(e).__name__}: {e}"
    res = CheckResult(name, bool(ok), detail, time.perf_counter() - t0)
    results.append(res)
    return res


def random_simplex(rng: random.Random, n: int, denom: int = 24) -> list[Fraction]:
    """``n`` positive rationals summing to 1."""
    raw = [rng.randint(1, denom) for _ in range(n)]
    tot = sum(raw)
    return [Fraction(r, tot) for r in raw]


def random_positive(rng: random.Random, n: int, denom: int = 12) -> list[Fraction]:
    return [Fraction(rng.randint(1, 3 * denom), rng.randint(1, denom)) for _ in range(n)]


def _first_failure(items, pred) -> tuple[bool, str]:
    n = 0
    for item in items:
        n += 1
        if not pred(item):
            return False, f"fails at {item!r}"
    return True, f"{n} cases"


# -- combinatorics ----------------------------------------------------------


def combinat_suite(h_max: int = 10, j_max: int = 6, H_max: int = 8, **_) -> list[CheckResult]:
    out: list = []

    def roundtrip():
        cases = 0
        for h in range(h_max + 1):
            for k in range(h + 1):
                for w in cb.enumerate_words(h, k):
                    lam = cb.word_to_partition(w)
                    if not cb.in_box(lam, k, h - k) or cb.partition_to_word(lam, k, h - k) != w:
                        return False, f"round trip fails at {w}"
                    cases += 1
        return True, f"{cases} words"

    _run(out, f"word/partition round trip, h <= {h_max}", roundtrip)
    _run(out, f"|St_(h,k)| = C(h,k), h <= {h_max}", lambda: _first_failure(
        [(h, k) for h in range(h_max + 1) for k in range(h + 1)],
        lambda hk: len(cb.enumerate_words(*hk)) == comb(*hk)))
    _run(out, f"|S(H,K)| = Stirling2 and sum = Bell, H <= {H_max}", lambda: _first_failure(
        range(1, H_max + 1),
        lambda H: all(len(cb.enumerate_set_partitions(H, K)) == sf.stirling2(H, K) for K in range(1, H + 1))
        and len(cb.enumerate_set_partitions(H)) == sf.bell(H)))

    def psi_onto():
        for H in range(1, j_max + 2):
            for K in range(1, H + 1):
                words = cb.enumerate_words(H - 1, K - 1)
                fib = ch.lumping_psi(H, K).fibers()
                if any(len(f) == 0 for f in fib) or sum(map(len, fib)) != sf.stirling2(H, K) or len(fib) != len(words):
                    return False, f"H={H}, K={K}"
        return True, ""

    _run(out, f"psi maps S(H,K) onto St_(h,k), H <= {j_max + 1}", psi_onto)

    def j_intertwin():
        n = 0
        for h in range(1, j_max + 1):
            for tau in cb.enumerate_set_partitions(h):
                for i in range(1, tau.K + 1):
                    if cb.psi(cb.insert_J(tau, i)) != cb.replace_S(cb.psi(tau) + cb.EMPTY, i):
                        return False, f"tau={tau.text()}, i={i}"
                    n += 1
        return True, f"{n} cases"

    _run(out, f"psi(J_i(tau)) = S_i(psi(tau) o), h <= {j_max}", j_intertwin)

    def j_commute():
        n = 0
        for h in range(1, j_max + 1):
            for tau in cb.enumerate_set_partitions(h):
                for i in range(tau.K + 3):
                    if cb.down_shift(cb.insert_J(tau, i)) != cb.insert_J(cb.down_shift(tau), i):
                        return False, f"tau={tau.text()}, i={i}"
                    n += 1
        return True, f"{n} cases"

    _run(out, f"J_i commutes with the down shift, h <= {j_max}", j_commute)

    def arches():
        for H in range(1, H_max + 1):
            for s in cb.enumerate_set_partitions(H):
                arcs = s.arches()
                if len(arcs) != H - s.K or any(not 1 <= a.cover_count <= s.K for a in arcs):
                    return False, s.text()
        return True, ""

    _run(out, f"arch count H - K and cover counts in 1..K, H <= {H_max}", arches)

    def s_vs_t():
        for h in range(0, 7):
            for k in range(h + 1):
                for w in cb.enumerate_words(h, k):
                    if any(cb.replace_S(w, i) != cb.replace_T(w, k - i) for i in range(1, k + 1)):
                        return False, w
                    if cb.replace_S(w, 0) != w or cb.replace_S(w, k + 1) != w:
                        return False, w
        return True, ""

    _run(out, "S_i = T_(k-i) and S_i total", s_vs_t)
    return out


# -- normalization factors --------------------------------------------------


def symfun_suite(h_max: int = 8, seed: int = 0, qs=DEFAULT_QS, **_) -> list[CheckResult]:
    rng = random.Random(seed)
    out: list = []
    pairs = [(h, k) for h in range(h_max + 1) for k in range(h + 1)]
    xs_for = {(h, k): random_positive(rng, k + 1) for h, k in pairs}

    _run(out, f"word sum of Z equals h_l(y), h <= {h_max}", lambda: _first_failure(
        pairs, lambda hk: sf.Z_mjmc(*hk, xs_for[hk], method="words") == sf.Z_mjmc(*hk, xs_for[hk])))

    def recursions():
        for h in range(1, h_max + 1):
            xs = random_positive(rng, h + 1)
            for k in range(h + 1):
                sub = xs[: k + 1]
                if sf.Z_mjmc(h, k, sub) != sf.zrecur_rhs(h, k, sub):
                    return False, f"first recursion at h={h}, k={k}"
                if sf.Z_mjmc(h, k, sub) != sf.zsetrec_rhs(h, k, sub):
                    return False, f"second recursion at h={h}, k={k}"
        return True, ""

    _run(out, f"both recursions for Z, h <= {h_max}", recursions)

    def homogeneity():
        for h, k in pairs:
            c = Fraction(rng.randint(1, 9), rng.randint(1, 9))
            xs = xs_for[(h, k)]
            if sf.Z_mjmc(h, k, [c * x for x in xs]) != c ** (h - k) * sf.Z_mjmc(h, k, xs):
                return False, f"h={h}, k={k}"
        return True, ""

    _run(out, "homogeneity of degree l", homogeneity)

    def specs():
        n = 0
        for q in qs:
            for h, k in pairs:
                for name, z, closed in sf.specializations(h, k, q):
                    if z != closed:
                        return False, f"{name} at h={h}, k={k}, q={q}"
                    n += 1
        return True, f"{n} identities"

    _run(out, f"four specializations at {len(qs)} values of q, h <= {h_max}", specs)
    _run(out, "Z_(4,2)(1,1,1) = 25", lambda: (sf.Z_mjmc(4, 2, [1, 1, 1]) == 25, str(sf.Z_mjmc(4, 2, [1, 1, 1]))))

    def adddrop_z():
        for h in range(0, 7):
            a, *zs = random_positive(rng, h + 2)
            by_k = sum(a**k * sf.Z_mjmc(h, k, [zs[k - i] for i in range(k + 1)]) for k in range(h + 1))
            if sf.Z_adddrop(h, a, zs) != by_k:
                return False, f"h={h}"
        a, z1, z2 = random_positive(rng, 3)
        if sf.Z_adddrop(2, a, [z1, z2]) != a**2 + a * z2 + 2 * a * z1 + z1**2:
            return False, "h=2 closed form"
        return True, ""

    _run(out, "add-drop Z as a sum over k of MJMC factors", adddrop_z)
    return out


def mahonian_suite(H_max: int = 8, qs=DEFAULT_QS, **_) -> list[CheckResult]:
    out: list = []

    def gen():
        n = 0
        for H in range(1, H_max + 1):
            stats: dict = {}
            for s in cb.enumerate_set_partitions(H):
                key = (s.K, cb.mahonian_N(s))
                stats[key] = stats.get(key, 0) + 1
            for K in range(1, H + 1):
                for q in qs:
                    lhs = sum(c * q**N for (KK, N), c in stats.items() if KK == K)
                    if lhs != sf.q_stirling2(H, K, q):
                        return False, f"H={H}, K={K}, q={q}"
                    n += 1
        return True, f"{n} evaluations"

    _run(out, f"sum of q^N over S(H,K) is the q-Stirling number, H <= {H_max}", gen)
    _run(out, "N vanishes on the all-singletons partition", lambda: all(
        cb.mahonian_N(cb.SetPartition.from_blocks([[i] for i in range(1, H + 1)])) == 0 for H in range(1, 8)))
    return out


# -- MJMC and its partition form -------------------------------------------


def mjmc_suite(h_max: int = 7, points: int = 3, seed: int = 0, k_min: int = 0, **_) -> list[CheckResult]:
    rng = random.Random(seed)
    out: list = []
    cases = [(h, k, random_simplex(rng, k + 1)) for h in range(1, h_max + 1) for k in range(k_min, h + 1) for _ in range(points)]

    def stochastic():
        return _first_failure(cases, lambda c: ch.build_mjmc(*c).is_stochastic())

    def oracle():
        return _first_failure(cases, lambda c: solve_stationary(ch.build_mjmc(*c)).weights == ch.stationary_mjmc(*c).weights)

    def partition_form():
        def ok(c):
            h, k, xs = c
            P = ch.build_mjmc(h, k, xs)
            Q = ch.build_mjmc_partition_form(k, h - k, xs)
            conj = Q.permuted([cb.word_to_partition(w) for w in P.states])
            same = [tuple(r) for r in conj.rows] == [tuple(r) for r in P.rows]
            pi = ch.stationary_mjmc_partition(k, h - k, xs)
            return same and solve_stationary(Q).weights == pi.weights
        return _first_failure(cases, ok)

    def self_consistent():
        return _first_failure(cases[:: max(1, points)], lambda c: is_stationary(ch.build_mjmc(*c), ch.stationary_mjmc(*c).weights))

    _run(out, f"MJMC kernels are stochastic, h <= {h_max}", stochastic)
    _run(out, f"MJMC closed form equals solver, h <= {h_max}, {points} points", oracle)
    _run(out, f"partition form is conjugate and matches its closed form, h <= {h_max}", partition_form)
    _run(out, "closed form satisfies pi P = pi", self_consistent)

    def parts():
        n = 0
        for k in range(0, 4):
            for l in range(1, 4):
                xs = random_simplex(rng, k + 1)
                pi = ch.stationary_mjmc_partition(k, l, xs)
                for j in range(1, l + 1):
                    tot = 0
                    for v in range(k + 1):
                        brute = sum(w for lam, w in zip(pi.states, pi.weights) if cb.pad(lam, l)[j - 1] == v)
                        if ch.marginal_part(j, v, k, l, xs) != brute:
                            return False, f"marginal j={j}, n={v}, k={k}, l={l}"
                        tot += brute
                        n += 1
                    if tot != 1:
                        return False, "marginals do not sum to 1"
                for js in _increasing_subsets(l):
                    for ns in _nonincreasing(len(js), k):
                        cons = list(zip(js, ns))
                        brute = sum(w for lam, w in zip(pi.states, pi.weights)
                                    if all(cb.pad(lam, l)[j - 1] == v for j, v in cons))
                        if ch.joint_parts(cons, k, l, xs) != brute:
                            return False, f"joint {cons}, k={k}, l={l}"
                        n += 1
        return True, f"{n} events"

    _run(out, "marginal and joint part laws match enumeration", parts)
    return out


def _increasing_subsets(l: int):
    from itertools import combinations
    for r in range(1, l + 1):
        yield from combinations(range(1, l + 1), r)


def _nonincreasing(r: int, k: int):
    from itertools import combinations_with_replacement
    for c in combinations_with_replacement(range(k, -1, -1), r):
        yield c


# -- enriched chain ---------------------------------------------------------


def enriched_suite(H_max: int = 6, points: int = 3, seed: int = 0, **_) -> list[CheckResult]:
    rng = random.Random(seed)
    out: list = []
    cases = [(H, K, random_simplex(rng, K)) for H in range(1, H_max + 1) for K in range(1, H + 1) for _ in range(points)]

    def intertwin():
        return _first_failure(cases, lambda c: ch.verify_intertwining(
            ch.build_enriched(*c), ch.lumping_psi(c[0], c[1]), ch.build_mjmc(c[0] - 1, c[1] - 1, c[2])))

    def oracle():
        return _first_failure(cases, lambda c: solve_stationary(ch.build_enriched(*c)).weights == ch.stationary_enriched(*c).weights)

    def lumped():
        def ok(c):
            H, K, xs = c
            tilde = ch.stationary_enriched(H, K, xs)
            if ch.lumping_psi(H, K).push(tilde).weights != ch.stationary_mjmc(H - 1, K - 1, xs).weights:
                return False
            # unnormalized: fiber sums of arch monomials give the ball-product weights
            fib = ch.lumping_psi(H, K).push(ch.enriched_weights(H, K, xs))
            return fib.weights == ch.mjmc_weights(H - 1, K - 1, xs).weights
        return _first_failure(cases, ok)

    _run(out, f"enriched P Psi = Psi P, H <= {H_max}", intertwin)
    _run(out, f"enriched closed form equals solver, H <= {H_max}, {points} points", oracle)
    _run(out, f"pi = pi~ Psi and fiber sums give the product formula, H <= {H_max}", lumped)
    return out


# -- add-drop ---------------------------------------------------------------


def adddrop_suite(h_max: int = 7, H_max: int = 6, points: int = 3, seed: int = 0, **_) -> list[CheckResult]:
    rng = random.Random(seed)
    out: list = []

    def params(h):
        a, *zs = random_positive(rng, h + 2)
        return ch.AddDropParams(a, zs)

    words = [(h, params(h)) for h in range(0, h_max + 1) for _ in range(points)]
    parts = [(H, params(H - 1)) for H in range(1, H_max + 1) for _ in range(points)]

    _run(out, f"add-drop closed form equals solver, h <= {h_max}", lambda: _first_failure(
        words, lambda c: ch.build_adddrop(*c).is_stochastic()
        and solve_stationary(ch.build_adddrop(*c)).weights == ch.stationary_adddrop(*c).weights))
    _run(out, f"enriched add-drop closed form equals solver, H <= {H_max}", lambda: _first_failure(
        parts, lambda c: solve_stationary(ch.build_enriched_adddrop(*c)).weights == ch.stationary_enriched_adddrop(*c).weights))
    _run(out, f"enriched add-drop lumps onto add-drop, H <= {H_max}", lambda: _first_failure(
        parts, lambda c: ch.verify_intertwining(ch.build_enriched_adddrop(*c), ch.lumping_psi(c[0]), ch.build_adddrop(c[0] - 1, c[1]))
        and ch.lumping_psi(c[0]).push(ch.stationary_enriched_adddrop(*c)).weights == ch.stationary_adddrop(c[0] - 1, c[1]).weights))
    return out


# -- annihilation -----------------------------------------------------------


def _annihilation_params(rng, h):
    full = random_simplex(rng, h + 1)
    return ch.AddDropParams(full[-1], full[:-1])


def annihilation_suite(h_max: int = 7, H_max: Optional[int] = None, doubly_max: int = 5, proj_max: int = 4,
                       points: int = 3, seed: int = 0, **_) -> list[CheckResult]:
    rng = random.Random(seed)
    H_max = min(h_max + 1, 6) if H_max is None else H_max
    out: list = []
    words = [(h, _annihilation_params(rng, h)) for h in range(0, h_max + 1) for _ in range(points)]
    parts = [(H, _annihilation_params(rng, H - 1)) for H in range(1, H_max + 1) for _ in range(points)]
    doubly = [(h, _annihilation_params(rng, h)) for h in range(0, doubly_max + 1) for _ in range(points)]

    _run(out, f"annihilation closed form equals solver and sums to 1, h <= {h_max}", lambda: _first_failure(
        words, lambda c: solve_stationary(ch.build_annihilation(*c)).weights == ch.stationary_annihilation(*c).weights))
    _run(out, f"enriched annihilation closed form equals solver, H <= {H_max}", lambda: _first_failure(
        parts, lambda c: solve_stationary(ch.build_enriched_annihilation(*c)).weights
        == ch.stationary_enriched_annihilation(*c).weights))
    _run(out, f"doubly enriched closed form equals solver, h <= {doubly_max}", lambda: _first_failure(
        doubly, lambda c: solve_stationary(ch.build_doubly_enriched(*c)).weights == ch.stationary_doubly(*c).weights))

    def projections():
        def ok(c):
            h, p = c
            D = ch.build_doubly_enriched(h, p)
            E = ch.build_enriched_annihilation(h + 1, p)
            A = ch.build_annihilation(h, p)
            fm, ftm, pm = ch.phi_map(h), ch.phi_tilde_map(h), ch.lumping_psi(h + 1)
            hat = ch.stationary_doubly(h, p)
            return (ch.verify_intertwining(D, ftm, E) and ch.verify_intertwining(D, fm, A)
                    and ch.verify_intertwining(E, pm, A)
                    and ftm.push(hat).weights == ch.stationary_enriched_annihilation(h + 1, p).weights
                    and fm.push(hat).weights == ch.stationary_annihilation(h, p).weights
                    and all(cb.psi(ch.phi_tilde(ch.alpha_letters(s))) == ch.phi(ch.alpha_letters(s)) for s in D.states))
        return _first_failure([c for c in doubly if c[0] <= proj_max], ok)

    _run(out, f"phi and phi~ intertwine and push the laws forward, h <= {proj_max}", projections)

    def total_mass():
        for h in range(0, min(h_max, 6) + 1):
            a, *zs = random_positive(rng, h + 1)
            p = ch.AddDropParams(a, zs)
            tot = sum(zs, a) ** h
            if ch.stationary_annihilation(h, p, allow_unnormalized=True).total() != tot:
                return False, f"h={h}"
            if h + 1 <= 6 and ch.stationary_enriched_annihilation(h + 1, p, allow_unnormalized=True).total() != tot:
                return False, f"enriched h={h}"
        return True, ""

    _run(out, "unnormalized total mass is (z_1 + ... + z_h + a)^h", total_mass)

    def restricted():
        n = 0
        for h in range(1, min(h_max, 5) + 1):
            for L in range(1, h + 1):
                zs = random_simplex(rng, L)
                D = ch.build_doubly_enriched(h, zs=zs)
                A = ch.build_annihilation(h, ch.AddDropParams.from_alphabet(h, zs), allow_unnormalized=False)
                E = ch.build_enriched_annihilation(h + 1, ch.AddDropParams.from_alphabet(h, zs))
                pi = ch.stationary_annihilation_restricted(h, zs)
                pt = ch.stationary_enriched_annihilation_restricted(h + 1, zs)
                hat = ch.stationary_doubly(h, zs=zs)
                if ch.phi_map(h, L).push(hat).weights != pi.weights or ch.phi_tilde_map(h, L).push(hat).weights != pt.weights:
                    return False, f"projection h={h}, L={L}"
                if not is_stationary(A, pi.weights) or not is_stationary(E, pt.weights) or not is_stationary(D, hat.weights):
                    return False, f"stationarity h={h}, L={L}"
                n += 1
        return True, f"{n} cases"

    _run(out, "restricted alphabets: degenerate formulas", restricted)
    return out


# -- solver diagnostics -----------------------------------------------------


def linalg_suite(seed: int = 0, **_) -> list[CheckResult]:
    rng = random.Random(seed)
    out: list = []

    def reducible():
        xs = [Fraction(0), Fraction(0), Fraction(1)]
        P = ch.build_mjmc(4, 2, xs, allow_reducible=True)
        res = solve_stationary(P)
        if not isinstance(res, NonUnique):
            return False, "solver claims a unique law"
        return len(res.closed_classes) >= 2, f"{len(res.closed_classes)} closed classes, nullity {res.nullity}"

    _run(out, "x_0 = x_1 = 0 gives several closed classes", reducible)

    def unique_closed():
        for h in range(1, 7):
            for k in range(h + 1):
                xs = random_simplex(rng, k + 1)
                xs[1:] = [Fraction(0)] * k if rng.random() < 0.3 else xs[1:]
                xs[0] = 1 - sum(xs[1:])
                P = ch.build_mjmc(h, k, xs)
                closed = closed_classes(P)
                E = P.index(cb.lowest_word(h, k))
                if len(closed) != 1 or E not in closed[0] or P.entry(E, E) == 0:
                    return False, f"h={h}, k={k}"
        return True, ""

    _run(out, "x_0 > 0: one closed class, containing the lowest state with a self-loop", unique_closed)

    def enriched_irreducible():
        for H in range(2, 6):
            for K in range(2, H + 1):
                xs = random_simplex(rng, K)
                cls = communicating_classes(ch.build_enriched(H, K, xs))
                if len(cls) != 1:
                    return False, f"H={H}, K={K} all positive"
                xs = xs[:-1] + [Fraction(0)]
                xs[0] += 1 - sum(xs)
                P = ch.build_enriched(H, K, xs)
                closed = closed_classes(P)
                if H > K and (len(closed) != 1 or len(closed[0]) == P.n):
                    return False, f"H={H}, K={K} with x_k = 0"
        return True, ""

    _run(out, "enriched chain irreducible iff all x_i > 0", enriched_irreducible)
    _run(out, "1x1 kernel", lambda: solve_stationary(ch.build_mjmc(3, 3, [0, 0, 0, 1], allow_reducible=True)).weights == (1,))
    return out


# -- bounded strong stationary time ----------------------------------------


def mixing_suite(h_max: int = 4, points: int = 3, seed: int = 0, **_) -> list[CheckResult]:
    rng = random.Random(seed)
    out: list = []
    cases = [(h, _annihilation_params(rng, h)) for h in range(0, h_max + 1) for _ in range(points)]

    def rows_are(P, h, dist):
        M, M1 = powers(P, [h, h + 1])
        row = {j: w for j, w in enumerate(dist.weights) if w != 0}
        return all(r == row for r in M.rows) and M1 == M

    _run(out, f"annihilation P^h has every row equal to Pi, h <= {h_max}", lambda: _first_failure(
        cases, lambda c: rows_are(ch.build_annihilation(*c), c[0], ch.stationary_annihilation(*c))))
    _run(out, f"enriched annihilation P~^h rows equal Pi~, h <= {h_max}", lambda: _first_failure(
        cases, lambda c: rows_are(ch.build_enriched_annihilation(c[0] + 1, c[1]), c[0],
                                  ch.stationary_enriched_annihilation(c[0] + 1, c[1]))))
    _run(out, f"doubly enriched P^^h rows equal Pi^, h <= {h_max}", lambda: _first_failure(
        cases, lambda c: rows_are(ch.build_doubly_enriched(*c), c[0], ch.stationary_doubly(*c))))

    def control():
        xs = [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)]
        bad = []
        for h, k in [(4, 2), (3, 1), (5, 2)]:
            M = matpow(ch.build_mjmc(h, k, xs[: k + 1] if k == 2 else [Fraction(1, 2), Fraction(1, 2)]), h)
            if all(r == M.rows[0] for r in M.rows):
                bad.append((h, k))
        return not bad, "MJMC P^h rows differ" if not bad else f"rows all equal at {bad}"

    _run(out, "negative control: generic MJMC P^h rows differ", control)
    return out


def exact_law_at_h(kernel, h: int, start_indices) -> list[dict]:
    """Law at time ``h`` from each start, by sparse propagation (for chains too big for ``P^h``)."""
    return [propagate(kernel, s, h) for s in start_indices]


# -- infinite chains --------------------------------------------------------


def infinite_suite(l_max: int = 3, part_cap: int = 6, size_cap: int = 8, t_max: int = 3,
                   qs=(Fraction(1, 4), Fraction(1, 3), Fraction(1, 2)), **_) -> list[CheckResult]:
    out: list = []

    def umjmc_balance():
        n = 0
        for q in qs:
            g = inf.TailParams.geometric(q)
            for l in range(0, l_max + 1):
                if not inf.verify_umjmc_invariance(l, g, part_cap):
                    return False, f"q={q}, l={l}"
                n += 1
        return True, f"{n} chains"

    def imjmc_balance():
        return _first_failure(qs, lambda q: inf.verify_imjmc_invariance(inf.TailParams.geometric(q), size_cap))

    def geometric_weights():
        for q in qs:
            g = inf.TailParams.geometric(q)
            for lam in cb.partitions_up_to(7):
                if inf.umjmc_weight(lam, g) != q ** sum(lam):
                    return False, f"q={q}, lam={lam}"
        return True, ""

    def convergence():
        worst = 0.0
        for q in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
            g = inf.TailParams.geometric(q)
            for l in range(0, l_max + 1):
                rep = inf.umjmc_mass(l, g, tol=Fraction(1, 10**10))
                if rep.bound > Fraction(1, 10**9):
                    return False, f"bound {float(rep.bound)} at q={q}, l={l}"
                K = max(rep.terms - 1, 0)
                seq = [sf.Z_mjmc(k + l, k, g.truncated(k)) for k in range(0, K + 1)]
                if any(a > b for a, b in zip(seq, seq[1:])):
                    return False, f"not monotone at q={q}, l={l}"
                if seq[-1] != rep.value:
                    return False, "truncated Z differs from the reported mass"
                exact = inf.geometric_umjmc_mass(l, q)
                if not rep.value <= exact <= rep.value + rep.bound:
                    return False, f"closed form outside the bound at q={q}, l={l}"
                worst = max(worst, float(exact - rep.value))
        return True, f"largest gap {worst:.3g}"

    def imjmc_mass():
        for q in qs:
            rep = inf.imjmc_mass(inf.TailParams.geometric(q), tol=Fraction(1, 10**10))
            prod_ = Fraction(1)
            for m in range(1, rep.terms + 1):
                prod_ /= 1 - q**m
            if prod_ != rep.value or rep.bound > Fraction(1, 10**9):
                return False, f"q={q}"
        return True, ""

    def reduction():
        rng = random.Random(1)
        for k in range(0, 4):
            xs = random_simplex(rng, k + 1)
            t = inf.TailParams.finite(xs)
            for l in range(0, 4):
                if inf.umjmc_mass(l, t).value != sf.Z_mjmc(k + l, k, xs):
                    return False, f"mass k={k}, l={l}"
                pw = ch.partition_weights(k, l, xs)
                if any(inf.umjmc_weight(lam, t) != w for lam, w in zip(pw.states, pw.weights)):
                    return False, f"weights k={k}, l={l}"
                if l and not inf.verify_umjmc_invariance(l, t, k):
                    return False, f"balance k={k}, l={l}"
        return True, ""

    def l_independence():
        t_params = inf.TailParams.finite([Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)])
        n = 0
        for t in range(0, t_max + 1):
            for nu in [(), (1,), (2, 1), (3, 3, 1)]:
                base = len(nu) + t
                if not inf.verify_l_to_infinity(t, nu, [base, base + 1, base + 2, None], t_params):
                    return False, f"t={t}, nu={nu}"
                n += 1
        return True, f"{n} starts"

    _run(out, f"UMJMC balance equations, l <= {l_max}, parts <= {part_cap}", umjmc_balance)
    _run(out, f"IMJMC balance equations, size <= {size_cap}", imjmc_balance)
    _run(out, "geometric weights are q^|lambda|", geometric_weights)
    _run(out, f"Z_(k+l,k) increases to h_l(y_0, y_1, ...) within the bound, l <= {l_max}", convergence)
    _run(out, "IMJMC mass is the truncated partition product", imjmc_mass)
    _run(out, "finite support reduces to the finite MJMC", reduction)
    _run(out, f"t-step laws do not depend on l, t <= {t_max}", l_independence)
    return out


# -- registry ---------------------------------------------------------------


def _with_cap(fn, key):
    def run(cap: Optional[int] = None, **kw):
        if cap is not None:
            kw[key] = cap
        return fn(**kw)
    return run


def annihilation_family(cap: Optional[int] = None, **kw) -> list[CheckResult]:
    """Annihilation chains: stationary laws, projections and mixing in ``h`` steps."""
    h = 4 if cap is None else cap
    res = annihilation_suite(h_max=h, doubly_max=h, proj_max=h, H_max=min(h + 1, 6), **kw)
    return res + mixing_suite(h_max=h, **kw)


SUITES: dict[str, Callable[..., list]] = {
    "combinat": _with_cap(combinat_suite, "j_max"),
    "symfun": _with_cap(symfun_suite, "h_max"),
    "mahonian": _with_cap(mahonian_suite, "H_max"),
    "mjmc": _with_cap(mjmc_suite, "h_max"),
    "enriched": _with_cap(enriched_suite, "H_max"),
    "adddrop": _with_cap(adddrop_suite, "h_max"),
    "annihilation": annihilation_family,
    "mixing": _with_cap(mixing_suite, "h_max"),
    "linalg": lambda cap=None, **kw: linalg_suite(**kw),
    "infinite": _with_cap(infinite_suite, "l_max"),
}


def run_suites(names, cap: Optional[int] = None, seed: int = 0, points: int = 3) -> list[tuple[str, CheckResult]]:
    out = []
    for name in names:
        for r in SUITES[name](cap=cap, seed=seed, points=points):
            out.append((name, r))
    return out
