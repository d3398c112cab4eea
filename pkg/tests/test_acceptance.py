"""Acceptance suite: one test per criterion, each reporting a single PASS/FAIL line.

The lines are collected and printed in the pytest terminal summary.
"""

import time
from fractions import Fraction as F

from juggle import chains as ch
from juggle import combinat as cb
from juggle import sim
from juggle import verify as vf
from juggle.linalg import NonUnique, solve_stationary
from juggle.models import make_spec

SP = cb.SetPartition.parse


def _report(log, number, title, budget, checks):
    """Run ``checks`` (a callable returning a list of ``(ok, detail)``), print one line, then assert."""
    t0 = time.perf_counter()
    try:
        results = checks()
    except Exception as e:  # reported as a failure rather than a crash
        results = [(False, f"{type(e).__name__}: {e}")]
    elapsed = time.perf_counter() - t0
    failed = [d for ok, d in results if not ok]
    in_time = elapsed < budget
    verdict = "PASS" if not failed and in_time else "FAIL"
    note = f"{len(results) - len(failed)}/{len(results)} checks"
    if failed:
        note += f"; first failure: {failed[0]}"
    if not in_time:
        note += f"; over the {budget}s budget"
    line = f"[{verdict}] {number}. {title} ({elapsed:.2f}s, budget {budget}s) {note}"
    log.append(line)
    assert not failed, line
    assert in_time, line


def _suite(results):
    return [(r.passed, f"{r.name}: {r.detail}") for r in results]


# -- the criteria ------------------------------------------------------------


def test_1_oracle_equivalence(acceptance_log):
    _report(acceptance_log, 1, "closed-form MJMC law equals the exact solver, 1 <= k <= h <= 7, 3 points", 30,
            lambda: _suite(vf.mjmc_suite(h_max=7, points=3, seed=0, k_min=1)))


def test_2_enriched_and_lumping(acceptance_log):
    _report(acceptance_log, 2, "enriched chain: P~ Psi = Psi P, solver, pi = pi~ Psi, fiber sums, H <= 6", 60,
            lambda: _suite(vf.enriched_suite(H_max=6, points=3, seed=0)))


def test_3_normalization_identities(acceptance_log):
    _report(acceptance_log, 3, "Z as h_l(y), word sums, both recursions, four specializations, Z_(4,2)(1,1,1) = 25", 10,
            lambda: _suite(vf.symfun_suite(h_max=8, seed=0)))


def _worked_examples():
    out = []
    x0, x1, x2 = F(1, 7), F(2, 7), F(4, 7)
    P = ch.build_mjmc(4, 2, [x0, x1, x2])
    out.append((P.dense() == [
        [x0, x1, x2, 0, 0, 0],
        [x0, 0, 0, x1, x2, 0],
        [0, x0, 0, x1, 0, x2],
        [1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
    ], "6x6 MJMC matrix"))
    y1 = x1 + x2
    vec = [1, y1, x2, y1**2, x2 * y1, x2**2]
    out.append((list(ch.mjmc_weights(4, 2, [x0, x1, x2]).weights) == vec, "6x6 MJMC eigenvector"))

    xs = [F(1, 3), F(2, 3)]
    w = ch.mjmc_weights(3, 1, xs).as_dict()
    out.append((w["obb"] == xs[1] ** 2 and w["bob"] == xs[1] and w["bbo"] == 1, "lumped weights h=3, k=1"))
    lumped = ch.lumping_psi(4, 2).push(ch.enriched_weights(4, 2, xs)).as_dict()
    out.append((lumped == w, "lumped weights are fiber sums"))

    words = ["bb", "ob", "bo", "oo"]
    setps = [SP(t) for t in ("1,2,3", "1|2,3", "2|1,3", "1,2|3", "1|2|3")]
    a, z1, z2 = F(2), F(3), F(5)
    p = ch.AddDropParams(a, [z1, z2])
    d1, d2 = a + z1, a + z1 + z2
    out.append((ch.build_adddrop(2, p).permuted(words).dense() == [
        [z1 / d1, 0, a / d1, 0],
        [z1 / d1, 0, a / d1, 0],
        [0, z1 / d2, z2 / d2, a / d2],
        [0, z1 / d2, z2 / d2, a / d2],
    ], "add-drop 4x4 matrix"))
    vec = [z1**2, a * z1, a * (z1 + z2), a**2]
    Z2 = sum(vec)
    out.append((list(ch.stationary_adddrop(2, p).reordered(words).weights) == [v / Z2 for v in vec],
                "add-drop eigenvector"))
    from juggle.symfun import Z_adddrop
    out.append((Z_adddrop(2, a, [z1, z2]) == Z2, "add-drop Z_2"))
    r1 = [z1 / d1, 0, 0, a / d1, 0]
    r2 = [0, z1 / d2, z2 / d2, 0, a / d2]
    out.append((ch.build_enriched_adddrop(3, p).permuted(setps).dense() == [r1, r1, r2, r2, r2],
                "enriched add-drop 5x5 matrix"))
    vec = [z1**2, a * z1, a * z2, a * z1, a**2]
    out.append((list(ch.stationary_enriched_adddrop(3, p).reordered(setps).weights) == [v / sum(vec) for v in vec],
                "enriched add-drop eigenvector"))

    z1, z2, a = F(1, 5), F(3, 10), F(1, 2)
    p = ch.AddDropParams(a, [z1, z2])
    out.append((ch.build_annihilation(2, p).permuted(words).dense() == [
        [z1, 0, z2 + a, 0],
        [z1, 0, z2 + a, 0],
        [0, z1, z2, a],
        [0, z1, z2, a],
    ], "annihilation 4x4 matrix"))
    out.append((list(ch.stationary_annihilation(2, p).reordered(words).weights) ==
                [z1**2, z1 * (z2 + a), (z1 + z2) * (z2 + a), a * (z2 + a)], "annihilation eigenvector"))
    r1 = [z1, 0, 0, z2 + a, 0]
    r2 = [0, z1, z2, 0, a]
    out.append((ch.build_enriched_annihilation(3, p).permuted(setps).dense() == [r1, r1, r2, r2, r2],
                "enriched annihilation 5x5 matrix"))
    out.append((list(ch.stationary_enriched_annihilation(3, p).reordered(setps).weights) ==
                [z1**2, z1 * (z2 + a), z2 * (z2 + a), z1 * (z2 + a), a * (z2 + a)],
                "enriched annihilation eigenvector"))

    imgs = {w: (ch.phi_tilde(w).text(), ch.phi(w)) for w in [(1, 2), (1, 3), (2, 2), (3, 2)]}
    out.append((imgs == {
        (1, 2): ("1,2|3", "bo"),
        (1, 3): ("1,2|3", "bo"),
        (2, 2): ("2|1,3", "bo"),
        (3, 2): ("2|1,3", "bo"),
    }, "phi~ and phi on 12, 13, 22, 32"))
    return out


def test_4_worked_examples(acceptance_log):
    _report(acceptance_log, 4, "worked examples reproduced exactly", 5, _worked_examples)


def test_5_mahonian(acceptance_log):
    _report(acceptance_log, 5, "sum of q^N over S(H,K) equals the q-Stirling number, H <= 8, 5 values of q", 20,
            lambda: _suite(vf.mahonian_suite(H_max=8)))


def test_6_strong_stationary_time(acceptance_log):
    _report(acceptance_log, 6, "P^h, P~^h, P^^h rows all equal the stationary law, h <= 4, 3 points; MJMC control", 60,
            lambda: _suite(vf.mixing_suite(h_max=4, points=3, seed=0)))


def test_7_infinite_extensions(acceptance_log):
    _report(acceptance_log, 7, "UMJMC/IMJMC balance, Z_(k+l,k) convergence within 1e-9, l-independence", 60,
            lambda: _suite(vf.infinite_suite()))


def _monte_carlo():
    out = []
    spec = make_spec("mjmc", h=4, k=2, xs="1/2,1/4,1/4")
    cfg = sim.SimConfig(spec, seed=20240601, steps=10**6, record="path")
    rep = sim.report(cfg)
    bound = 3 * (6 / 10**6) ** 0.5
    out.append((rep["tv"] < bound, f"MJMC TV {rep['tv']:.5f} < {bound:.5f} over {rep['empirical']['total']} samples"))

    ann = make_spec("annihilation", h=3, a="1/4", zs="1/4,1/4,1/4")
    cfg = sim.SimConfig(ann, seed=20240602, steps=0, burn_in=3, replicas=10**5)
    rep = sim.report(cfg)
    bound = 3 * (8 / 10**5) ** 0.5
    out.append((rep["tv"] < bound, f"annihilation TV at step 3 {rep['tv']:.5f} < {bound:.5f}"))
    return out


def test_8_monte_carlo(acceptance_log):
    _report(acceptance_log, 8, "Monte-Carlo: MJMC 10^6 samples and annihilation at step h over 10^5 replicas", 120, _monte_carlo)


def _reducible():
    P = ch.build_mjmc(4, 2, [0, 0, 1], allow_reducible=True)
    res = solve_stationary(P)
    ok = isinstance(res, NonUnique) and len(res.closed_classes) >= 2
    detail = f"{len(res.closed_classes)} closed classes" if isinstance(res, NonUnique) else "unique"
    return [(ok, detail)]


def test_9_reducibility(acceptance_log):
    _report(acceptance_log, 9, "x_0 = x_1 = 0 at h=4, k=2 gives a NonUnique report with >= 2 closed classes", 1, _reducible)
