"""Seeded Monte-Carlo runs of the juggling chains.

Random numbers come from NumPy's PCG64 bit generator.  Replica ``r`` of a
run with seed ``s`` draws from ``PCG64(SeedSequence(s, spawn_key=(r,)))``,
which is also what ``SeedSequence(s).spawn(n)[r]`` gives, so replicas are
independent substreams and results do not depend on how they are scheduled.
Successors are drawn by inverse CDF on each row, with the exact row
probabilities converted to floats once.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import chains as ch
from .chains import Distribution, SparseKernel, state_text
from .errors import DomainError
from .infinite import TailParams, imjmc_step, umjmc_step
from .linalg import powers, rows_all_equal
from .models import ChainSpec

PRNG_NAME = "numpy.random.PCG64"


def replica_rng(seed: int, replica: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(replica,))))


@dataclass(frozen=True)
class SimConfig:
    spec: ChainSpec
    seed: int = 0
    steps: int = 0
    burn_in: Optional[int] = None  # default 10*h, or h for the annihilation family
    replicas: int = 1
    record: str = "final"  # "final": state after burn_in+steps; "path": every state after burn_in
    initial: object = "lowest"

    def __post_init__(self):
        if self.steps < 0 or self.replicas < 1:
            raise DomainError("need steps >= 0 and replicas >= 1")
        if self.record not in ("final", "path"):
            raise DomainError("record must be 'final' or 'path'")

    def effective_burn_in(self) -> int:
        if self.burn_in is not None:
            return self.burn_in
        h = self.spec.h or 0
        if self.spec.model in ("annihilation", "enriched-annihilation", "doubly-enriched"):
            return h
        return 10 * h

    def to_json(self) -> dict:
        return {
            "chain": self.spec.description,
            "seed": self.seed,
            "steps": self.steps,
            "burn_in": self.effective_burn_in(),
            "replicas": self.replicas,
            "record": self.record,
            "initial": self.initial if isinstance(self.initial, (str, int)) else state_text(self.initial),
            "prng": PRNG_NAME,
        }


@dataclass
class EmpiricalDistribution:
    states: tuple  # ordered support; finite chains use the kernel's order
    counts: list
    total: int = 0

    def freq(self) -> list[float]:
        return [c / self.total for c in self.counts] if self.total else [0.0] * len(self.counts)

    def as_dict(self) -> dict:
        return {s: c for s, c in zip(self.states, self.counts)}

    def to_json(self) -> dict:
        return {"states": [state_text(s) for s in self.states], "counts": list(self.counts), "total": self.total}

    def to_csv(self) -> str:
        lines = ["state,count,freq"]
        lines += [f"{state_text(s)},{c},{f!r}" for s, c, f in zip(self.states, self.counts, self.freq())]
        return "\n".join(lines) + "\n"


class KernelSampler:
    def __init__(self, kernel: SparseKernel):
        self.kernel = kernel
        self.targets = [[j for j, _ in row] for row in kernel.rows]
        self.cum = []
        for row in kernel.rows:
            acc, cum = 0.0, []
            for _, p in row:
                acc += float(p)
                cum.append(acc)
            self.cum.append(cum)

    def step(self, i: int, u: float) -> int:
        cum = self.cum[i]
        pos = bisect_right(cum, u * cum[-1])
        return self.targets[i][min(pos, len(cum) - 1)]


@dataclass
class SimResult:
    config: SimConfig
    empirical: EmpiricalDistribution
    final_states: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"config": self.config.to_json(), "empirical": self.empirical.to_json()}


def _initial_index(kernel: SparseKernel, spec: ChainSpec, initial) -> int:
    if isinstance(initial, int):
        if not 0 <= initial < kernel.n:
            raise DomainError("initial index out of range")
        return initial
    if initial == "lowest":
        return kernel.index(spec.lowest())
    if isinstance(initial, str):
        return kernel.index(spec.parse_state(initial))
    return kernel.index(initial)


def run(cfg: SimConfig, kernel: Optional[SparseKernel] = None) -> SimResult:
    if cfg.spec.model in ("umjmc", "imjmc"):
        return _run_infinite(cfg)
    kernel = kernel or cfg.spec.build()
    sampler = KernelSampler(kernel)
    start = _initial_index(kernel, cfg.spec, cfg.initial)
    burn = cfg.effective_burn_in()
    counts = np.zeros(kernel.n, dtype=np.int64)
    finals = []
    for r in range(cfg.replicas):
        rng = replica_rng(cfg.seed, r)
        us = rng.random(burn + cfg.steps)
        s = start
        for t in range(burn):
            s = sampler.step(s, us[t])
        if cfg.record == "path":
            visits = np.empty(cfg.steps, dtype=np.int64)
            for t in range(cfg.steps):
                s = sampler.step(s, us[burn + t])
                visits[t] = s
            counts += np.bincount(visits, minlength=kernel.n)
        else:
            for t in range(cfg.steps):
                s = sampler.step(s, us[burn + t])
            counts[s] += 1
        finals.append(s)
    emp = EmpiricalDistribution(tuple(kernel.states), [int(c) for c in counts], int(counts.sum()))
    return SimResult(cfg, emp, finals)


def sample_insertion(tail: TailParams, u: float) -> int:
    """Inverse CDF of the insertion index; geometric tails are sampled in closed form."""
    if tail.family == "geometric":
        q = float(Fraction(tail.spec["q"]))
        # P(i >= n) = q^n
        return int(math.floor(math.log1p(-u) / math.log(q))) if u > 0 else 0
    if tail.support is None:
        raise DomainError("simulation needs finite-support or geometric parameters")
    acc = 0.0
    for i in range(tail.support + 1):
        acc += float(tail.x(i))
        if u < acc:
            return i
    return tail.support


def _run_infinite(cfg: SimConfig) -> SimResult:
    spec = cfg.spec
    l = spec.l if spec.model == "umjmc" else None
    start = () if cfg.initial == "lowest" else spec.parse_state(cfg.initial) if isinstance(cfg.initial, str) else tuple(cfg.initial)
    burn = cfg.burn_in or 0
    counts: dict = {}
    finals = []
    for r in range(cfg.replicas):
        rng = replica_rng(cfg.seed, r)
        us = rng.random(burn + cfg.steps)
        s = start
        for t in range(burn + cfg.steps):
            i = sample_insertion(spec.tail, us[t])
            s = umjmc_step(s, l, i) if l is not None else imjmc_step(s, i)
            if cfg.record == "path" and t >= burn:
                counts[s] = counts.get(s, 0) + 1
        if cfg.record == "final":
            counts[s] = counts.get(s, 0) + 1
        finals.append(s)
    order = sorted(counts, key=lambda p: (sum(p), p))
    emp = EmpiricalDistribution(tuple(order), [counts[p] for p in order], sum(counts.values()))
    return SimResult(cfg, emp, finals)


def tv_distance(a, b) -> float:
    """Total variation ``(1/2) sum |a_i - b_i|``; empirical inputs are normalized first."""
    pa, sa = _as_probs(a)
    pb, sb = _as_probs(b)
    if sa != sb:
        raise DomainError("distributions live on different state spaces")
    return 0.5 * sum(abs(x - y) for x, y in zip(pa, pb))


def _as_probs(d):
    if isinstance(d, EmpiricalDistribution):
        return d.freq(), tuple(d.states)
    if isinstance(d, Distribution):
        z = float(d.total())
        return [float(w) / z for w in d.weights], tuple(d.states)
    raise TypeError(f"cannot compare {type(d).__name__}")


def tv_to_measure(emp: EmpiricalDistribution, prob) -> float:
    """TV between an empirical law on a countable space and ``prob(state)``.

    Mass of the exact law outside the observed support counts fully.
    """
    freq = emp.freq()
    seen = sum(float(prob(s)) for s in emp.states)
    return 0.5 * (sum(abs(f - float(prob(s))) for s, f in zip(emp.states, freq)) + max(0.0, 1.0 - seen))


def stderr_bound(n_states: int, samples: int) -> float:
    """Three-sigma style tolerance ``3 sqrt(n/samples)`` for TV of i.i.d. samples."""
    return 3 * math.sqrt(n_states / samples)


def report(cfg: SimConfig, result: Optional[SimResult] = None) -> dict:
    """Simulation report with the exact law and TV distance where available."""
    result = result or run(cfg)
    out = {"config": cfg.to_json(), "empirical": result.empirical.to_json()}
    if cfg.spec.model in ("umjmc", "imjmc"):
        return out
    exact = cfg.spec.exact()
    out["exact"] = exact.to_json()
    out["tv"] = tv_distance(result.empirical, exact)
    out["stderr_bound"] = stderr_bound(len(exact.states), max(result.empirical.total, 1))
    return out


def strong_stationary_check(spec: ChainSpec, trials: int = 2000, seed: int = 0, max_starts: int = 16) -> dict:
    """Is the law at time ``h`` the stationary law, whatever the start?

    The exact part compares every row of ``P^h`` with the closed-form law.
    The empirical part runs ``trials`` replicas for exactly ``h`` steps from
    up to ``max_starts`` initial states.
    """
    kernel = spec.build()
    h = spec.h
    exact = spec.exact()
    Ph, Ph1 = powers(kernel, [h, h + 1])
    stationary_row = {j: Fraction(w) for j, w in enumerate(exact.weights) if w != 0}
    rows_equal = rows_all_equal(Ph)
    rows_match = all(r == stationary_row for r in Ph.rows)
    idempotent = Ph1 == Ph
    starts = list(range(kernel.n))
    if len(starts) > max_starts:
        step = len(starts) / max_starts
        starts = [int(i * step) for i in range(max_starts)]
    bound = stderr_bound(kernel.n, trials)
    empirical = []
    for idx, s in enumerate(starts):
        cfg = SimConfig(spec, seed=seed + idx, steps=h, burn_in=0, replicas=trials, initial=s)
        res = run(cfg, kernel)
        tv = tv_distance(res.empirical, exact)
        empirical.append({"start": state_text(kernel.states[s]), "tv": tv, "ok": tv < bound})
    return {
        "model": spec.model,
        "h": h,
        "rows_all_equal": rows_equal,
        "rows_equal_stationary": rows_match,
        "P_h_plus_1_equals_P_h": idempotent,
        "empirical_bound": bound,
        "empirical": empirical,
        "passed": rows_match and idempotent and all(e["ok"] for e in empirical),
    }
