"""``juggle`` command line.

``-h`` is the word length, so help lives on ``--help`` only.  Exit codes:
0 success, 1 a verification or equality check failed, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import chains as ch
from . import combinat as cb
from . import infinite as inf
from . import symfun as sf
from .errors import DomainError
from .linalg import NonUnique, solve_stationary
from .models import FAMILIES, MODELS, ChainSpec, make_spec, parse_scalar, parse_vector

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("add_help", False)
        super().__init__(*args, **kwargs)
        self.add_argument("--help", action="help", help="show this message and exit")

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_output(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true", help="machine-readable JSON")
    g.add_argument("--csv", action="store_true", help="CSV (where tabular)")


def _add_chain(p, default_model: Optional[str] = None):
    p.add_argument("--model", choices=MODELS, default=default_model, required=default_model is None)
    p.add_argument("-h", dest="h", type=int, help="word length h")
    p.add_argument("-k", dest="k", type=int, help="number of empty sites k")
    p.add_argument("-H", dest="H", type=int, help="ground set size H = h + 1")
    p.add_argument("-K", dest="K", type=int, help="number of blocks K = k + 1")
    p.add_argument("-l", dest="l", type=int, help="number of balls l")
    p.add_argument("--family", choices=FAMILIES, help="parameter family (default: explicit if given, else uniform)")
    p.add_argument("--q", help="geometric parameter, e.g. 1/2")
    p.add_argument("--xs", help="comma-separated x_0,...,x_k")
    p.add_argument("--a", help="fugacity a")
    p.add_argument("--zs", help="comma-separated z_1,z_2,...")
    p.add_argument("--allow-reducible", action="store_true", help="accept x_0 = 0 or a = 0")
    p.add_argument("--float", dest="use_float", action="store_true", help="parse parameters as floats")
    _add_output(p)


def _spec(args) -> ChainSpec:
    return make_spec(
        args.model, h=args.h, k=args.k, H=args.H, K=args.K, l=args.l, family=args.family, q=args.q,
        xs=args.xs, a=args.a, zs=args.zs, allow_reducible=args.allow_reducible, exact=not args.use_float,
    )


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="juggle", description="Multivariate juggling Markov chains: kernels, stationary laws, checks.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")
    sub.required = True

    s = sub.add_parser("states", help="list the ordered state space")
    _add_chain(s)

    s = sub.add_parser("matrix", help="print the transition kernel")
    _add_chain(s)

    s = sub.add_parser("stationary", help="closed-form stationary law, optionally checked by the solver")
    _add_chain(s)
    s.add_argument("--oracle", action="store_true", help="also solve pi P = pi exactly and compare")

    s = sub.add_parser("z", help="normalization factor")
    _add_chain(s, default_model="mjmc")
    s.add_argument("--method", choices=("h", "words"), default="h", help="MJMC: h_l(y) or the word sum")
    s.add_argument("--tol", default="1/1000000000000", help="truncation tolerance for infinite chains")

    s = sub.add_parser("special", help="Stirling, q-Stirling and q-binomial specializations of Z")
    s.add_argument("-h", dest="h", type=int, required=True)
    s.add_argument("-k", dest="k", type=int, help="default: all 0 <= k <= h")
    s.add_argument("--q", required=True)
    _add_output(s)

    s = sub.add_parser("verify", help="run invariant suites; exit 1 on any failure")
    from .verify import SUITES

    s.add_argument("--suite", action="append", choices=sorted(SUITES) + ["all"], help="repeatable; default all")
    s.add_argument("-h", dest="h", type=int, help="size cap passed to each suite")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--points", type=int, default=3, help="random parameter points per size")
    _add_output(s)

    s = sub.add_parser("simulate", help="Monte-Carlo run with exact comparison")
    _add_chain(s)
    s.add_argument("--seed", type=int, default=0, help="overridden by JUGGLE_SEED")
    s.add_argument("--steps", type=int, default=1000)
    s.add_argument("--burn-in", type=int, help="default 10h, or h for annihilation chains")
    s.add_argument("--replicas", type=int, default=1)
    s.add_argument("--record", choices=("final", "path"), default="final")
    s.add_argument("--initial", default="lowest", help="state text or 'lowest'")
    s.add_argument("--strong", action="store_true", help="law at exactly h steps from many starts")
    s.add_argument("--trials", type=int, default=2000, help="replicas per start with --strong")

    s = sub.add_parser("project", help="apply psi, phi or phi~ and check intertwining")
    s.add_argument("--map", dest="map_name", choices=("psi", "phi", "phi-tilde"), required=True)
    s.add_argument("--state", help="apply the map to this state only")
    s.add_argument("--check", action="store_true", help="check the intertwining relation")
    _add_chain(s, default_model="mjmc")
    return p


# -- output helpers ---------------------------------------------------------


def _emit(args, payload: dict, table: Sequence[Sequence] = (), csv_text: Optional[str] = None, text: str = ""):
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2))
    elif getattr(args, "csv", False):
        if csv_text is None:
            csv_text = "\n".join(",".join(str(c) for c in row) for row in table) + "\n"
        sys.stdout.write(csv_text)
    else:
        if text:
            print(text)
        if table:
            widths = [max(len(str(r[i])) for r in table) for i in range(len(table[0]))]
            for row in table:
                print("  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip())


# -- commands ---------------------------------------------------------------


def cmd_states(args) -> int:
    spec = _spec(args)
    states = spec.states()
    labels = [ch.state_text(s) for s in states]
    _emit(args, {"command": "states", "chain": spec.description, "count": len(labels), "states": labels},
          [("index", "state")] + list(enumerate(labels)))
    return EXIT_OK


def cmd_matrix(args) -> int:
    spec = _spec(args)
    P = spec.build()
    labels = P.labels()
    dense = P.dense()
    table = [[""] + labels] + [[labels[i]] + [ch.fmt_scalar(v) if v else "0" for v in row] for i, row in enumerate(dense)]
    payload = {"command": "matrix", "chain": spec.description, **P.to_json()}
    _emit(args, payload, table, text=f"{P.n} states")
    return EXIT_OK


def cmd_stationary(args) -> int:
    spec = _spec(args)
    payload: dict = {"command": "stationary", "chain": spec.description}
    code = EXIT_OK
    closed = None
    try:
        closed = spec.exact()
        payload["closed_form"] = closed.to_json()
    except DomainError as e:
        if not args.oracle:
            raise
        payload["closed_form"] = None
        payload["closed_form_error"] = str(e)
    rows = [("state", "closed form", "float")]
    if closed is not None:
        rows += [(s, ch.fmt_scalar(w), f"{float(w):.10g}") for s, w in zip(closed.labels(), closed.weights)]
    text = ""
    if args.oracle:
        res = solve_stationary(spec.build())
        if isinstance(res, NonUnique):
            payload["oracle"] = res.to_json()
            payload["equal"] = False
            text = f"not unique: nullity {res.nullity}, closed classes " + "; ".join(
                "{" + ", ".join(c) + "}" for c in res.labels)
            code = EXIT_FAIL if closed is not None else EXIT_OK
        else:
            payload["oracle"] = res.to_json()
            equal = closed is not None and tuple(res.weights) == tuple(closed.weights)
            payload["equal"] = equal
            text = f"equal={str(equal).lower()}"
            code = EXIT_OK if equal else EXIT_FAIL
    csv_text = closed.to_csv() if closed is not None else ""
    _emit(args, payload, rows if closed is not None else (), csv_text, text)
    return code


def cmd_z(args) -> int:
    m = args.model
    tol = parse_scalar(args.tol)
    if m in ("umjmc", "imjmc"):
        spec = _spec(args)
        rep = inf.umjmc_mass(spec.l, spec.tail, tol) if m == "umjmc" else inf.imjmc_mass(spec.tail, tol)
        payload = {"command": "z", "chain": spec.description, **rep.to_json()}
        _emit(args, payload, text=f"{float(rep.value):.15g} ({rep.terms} terms, error <= {float(rep.bound):.3g}; exact value in --json)")
        return EXIT_OK
    if m in ("mjmc", "mjmc-partition", "enriched"):
        xs = parse_vector(args.xs, not args.use_float)
        h = args.h if args.h is not None else (args.H - 1 if args.H is not None else None)
        k = args.k if args.k is not None else (args.K - 1 if args.K is not None else None)
        if xs is None:
            spec = _spec(args)
            h, k, xs = spec.h, spec.k, spec.xs
        if h is None:
            raise DomainError("z needs -h")
        k = len(xs) - 1 if k is None else k
        if len(xs) != k + 1:
            raise DomainError(f"expected {k + 1} values in --xs")
        value = sf.Z_mjmc(h, k, xs, method=args.method)
        desc = {"model": "mjmc", "h": h, "k": k, "xs": [ch.fmt_scalar(x) for x in xs]}
    elif m in ("adddrop", "enriched-adddrop"):
        spec = _spec(args)
        value = sf.Z_adddrop(spec.h, spec.params.a, spec.params.zs)
        desc = spec.description
    else:
        spec = _spec(args)
        value = spec.exact().total()
        desc = spec.description
    _emit(args, {"command": "z", "chain": desc, "value": ch.fmt_scalar(value), "float": float(value)},
          text=_plain(value))
    return EXIT_OK


def _plain(x) -> str:
    x = Fraction(x) if not isinstance(x, float) else x
    if isinstance(x, Fraction) and x.denominator == 1:
        return str(x.numerator)
    return str(x)


def cmd_special(args) -> int:
    q = parse_scalar(args.q)
    ks = [args.k] if args.k is not None else list(range(args.h + 1))
    rows = [("k", "identity", "Z", "closed form", "ok")]
    items = []
    ok_all = True
    for k in ks:
        if not 0 <= k <= args.h:
            raise DomainError("need 0 <= k <= h")
        for name, z, closed in sf.specializations(args.h, k, q):
            ok = z == closed
            ok_all &= ok
            rows.append((k, name, _plain(z), _plain(closed), "yes" if ok else "NO"))
            items.append({"k": k, "identity": name, "Z": ch.fmt_scalar(z), "closed_form": ch.fmt_scalar(closed), "ok": ok})
    _emit(args, {"command": "special", "h": args.h, "q": ch.fmt_scalar(q), "results": items, "passed": ok_all}, rows)
    return EXIT_OK if ok_all else EXIT_FAIL


def cmd_verify(args) -> int:
    from .verify import SUITES, run_suites

    names = args.suite or ["all"]
    if "all" in names:
        names = list(SUITES)
    results = run_suites(names, cap=args.h, seed=args.seed, points=args.points)
    passed = all(r.passed for _, r in results)
    rows = [("suite", "result", "check", "detail", "seconds")]
    rows += [(s, "pass" if r.passed else "FAIL", r.name, r.detail, f"{r.seconds:.2f}") for s, r in results]
    payload = {
        "command": "verify",
        "suites": names,
        "cap": args.h,
        "seed": args.seed,
        "passed": passed,
        "results": [dict(suite=s, **r.to_json()) for s, r in results],
    }
    n_fail = sum(not r.passed for _, r in results)
    _emit(args, payload, rows, text=f"{len(results) - n_fail}/{len(results)} checks passed")
    return EXIT_OK if passed else EXIT_FAIL


def cmd_simulate(args) -> int:
    from . import sim

    spec = _spec(args)
    seed = int(os.environ["JUGGLE_SEED"]) if os.environ.get("JUGGLE_SEED") else args.seed
    if args.strong:
        rep = sim.strong_stationary_check(spec, trials=args.trials, seed=seed)
        rows = [("start", "tv", "ok")] + [(e["start"], f"{e['tv']:.5f}", e["ok"]) for e in rep["empirical"]]
        text = (f"P^h rows equal stationary law: {rep['rows_equal_stationary']}; "
                f"P^(h+1) = P^h: {rep['P_h_plus_1_equals_P_h']}; empirical bound {rep['empirical_bound']:.4f}")
        _emit(args, {"command": "simulate", "mode": "strong", "seed": seed, **rep}, rows, text=text)
        return EXIT_OK
    cfg = sim.SimConfig(spec, seed=seed, steps=args.steps, burn_in=args.burn_in, replicas=args.replicas,
                        record=args.record, initial=args.initial)
    result = sim.run(cfg)
    rep = sim.report(cfg, result)
    emp = result.empirical
    text = ""
    if "tv" in rep:
        text = f"tv={rep['tv']:.6f} bound={rep['stderr_bound']:.6f} samples={emp.total}"
    rows = [("state", "count", "freq")] + [(ch.state_text(s), c, f"{f:.6f}") for s, c, f in zip(emp.states, emp.counts, emp.freq())]
    _emit(args, {"command": "simulate", **rep}, rows, emp.to_csv(), text)
    return EXIT_OK


def cmd_project(args) -> int:
    name = args.map_name
    if args.state is not None:
        if name == "psi":
            out = cb.psi(cb.SetPartition.parse(args.state))
        else:
            letters = ch.alpha_letters(ch.parse_alpha(args.state))
            out = ch.phi(letters) if name == "phi" else ch.phi_tilde(letters)
        text = ch.state_text(out)
        _emit(args, {"command": "project", "map": name, "state": args.state, "image": text}, text=text)
        return EXIT_OK
    h = args.h if args.h is not None else (args.H - 1 if args.H is not None else None)
    if h is None:
        raise DomainError("project needs -h or -H (or --state)")
    if name == "psi":
        K = args.K if args.K is not None else (args.k + 1 if args.k is not None else None)
        M = ch.lumping_psi(h + 1, K)
    else:
        M = ch.phi_map(h) if name == "phi" else ch.phi_tilde_map(h)
    payload = {
        "command": "project",
        "map": name,
        "pairs": [[ch.state_text(s), ch.state_text(M.target[j])] for s, j in zip(M.source, M.image)],
    }
    rows = [("source", "image")] + payload["pairs"]
    code = EXIT_OK
    text = ""
    if args.check:
        A, B = _intertwining_pair(args, name, h, K if name == "psi" else None)
        ok = ch.verify_intertwining(A, M, B)
        payload["intertwining"] = ok
        text = f"intertwining {A.name} -> {B.name}: {str(ok).lower()}"
        code = EXIT_OK if ok else EXIT_FAIL
    _emit(args, payload, rows, text=text)
    return code


def _intertwining_pair(args, name, h, K):
    if name == "psi":
        if K is not None:
            spec = make_spec("enriched", H=h + 1, K=K, family=args.family, q=args.q, xs=args.xs, exact=not args.use_float)
            low = make_spec("mjmc", h=h, k=K - 1, xs=spec.xs)
            return spec.build(), low.build()
        model = args.model if args.model in ("annihilation", "adddrop") else "annihilation"
        top = make_spec("enriched-" + model, H=h + 1, family=args.family, q=args.q, a=args.a, zs=args.zs, exact=not args.use_float)
        low = make_spec(model, h=h, a=ch.fmt_scalar(top.params.a), zs=[ch.fmt_scalar(z) for z in top.params.zs],
                        family="explicit")
        return top.build(), low.build()
    spec = make_spec("annihilation", h=h, family=args.family, q=args.q, a=args.a, zs=args.zs, exact=not args.use_float)
    D = ch.build_doubly_enriched(h, spec.params)
    B = ch.build_annihilation(h, spec.params) if name == "phi" else ch.build_enriched_annihilation(h + 1, spec.params)
    return D, B


COMMANDS = {
    "states": cmd_states,
    "matrix": cmd_matrix,
    "stationary": cmd_stationary,
    "z": cmd_z,
    "special": cmd_special,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "project": cmd_project,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ValueError, ZeroDivisionError) as e:
        print(f"juggle: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
