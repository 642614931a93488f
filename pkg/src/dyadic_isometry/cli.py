"""Command-line front end.

Exit codes: 0 ran successfully (the verdict is in the JSON body), 1 a
self-test check failed, 2 malformed input or mismatched field/rank,
3 precision exhausted after one guard doubling, 4 the deciders disagree.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field as dc_field
from typing import Callable

from .bong import BongSymbol, binary_isometric, g_membership, good_bong
from .classify import (binary_transform_reachable, isometric_2adic, isometric_bong,
                       isometric_jordan, reachable_states)
from .errors import (DyadicError, FieldMismatch, InsufficientPrecision,
                     InternalVerificationFailure, MalformedInput, RankError)
from .field import FAULTS, INF, DyadicField, hilbert
from .invariants import alpha_vector, bong_weight_orders
from .lattice import GramLattice
from .search import isotropy_search

METHODS = {"bong": isometric_bong, "jordan": isometric_jordan, "2adic": isometric_2adic}


@dataclass
class RunConfig:
    command: str
    inputs: list = dc_field(default_factory=list)
    method: str = "all"
    guard: int = 12
    seed: int = 0
    trials: int = 20
    output: str | None = None
    faults: list = dc_field(default_factory=list)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from exc


def load_lattice(path: str, guard: int) -> GramLattice:
    return GramLattice.from_json(_load_json(path), guard)


def load_symbol(path: str, guard: int) -> BongSymbol:
    """A symbol file ({"field", "values"}) or a lattice file (its good BONG)."""
    obj = _load_json(path)
    if isinstance(obj, dict) and "values" in obj:
        f = DyadicField.from_descriptor(obj.get("field", {"e": 1}), guard)
        return BongSymbol([f.element(v) for v in obj["values"]])
    return good_bong(GramLattice.from_json(obj, guard))


def _num(x):
    return "inf" if x == INF else x


# -- commands ---------------------------------------------------------------

def cmd_classify(cfg: RunConfig) -> tuple[int, dict]:
    if len(cfg.inputs) != 2:
        raise MalformedInput("classify needs two lattice files")
    L, K = (load_lattice(p, cfg.guard) for p in cfg.inputs)
    if L.field != K.field:
        raise FieldMismatch("lattices live over different fields")
    if cfg.method != "all":
        return 0, METHODS[cfg.method](L, K).to_json()
    names = ["bong", "jordan"] + (["2adic"] if L.field.e == 1 else [])
    verdicts = {m: METHODS[m](L, K) for m in names}
    answers = {v.isometric for v in verdicts.values()}
    out = {
        "isometric": verdicts["bong"].isometric,
        "failing_condition": verdicts["bong"].failing_condition,
        "methods": {m: v.to_json() for m, v in verdicts.items()},
    }
    if len(answers) > 1:
        out["error"] = "deciders disagree"
        return 4, out
    return 0, out


def cmd_bong(cfg: RunConfig) -> tuple[int, dict]:
    if len(cfg.inputs) != 1:
        raise MalformedInput("bong needs one lattice file")
    return 0, good_bong(load_lattice(cfg.inputs[0], cfg.guard)).to_json()


def cmd_invariants(cfg: RunConfig) -> tuple[int, dict]:
    if len(cfg.inputs) != 1:
        raise MalformedInput("invariants needs one lattice file")
    s = good_bong(load_lattice(cfg.inputs[0], cfg.guard))
    alpha = alpha_vector(s)
    ws, fs = bong_weight_orders(s, alpha)
    return 0, {
        "R": s.R,
        "alpha2": [_num(a) for a in alpha.alpha2],
        "w_ord": [w for _, w in ws],
        "f_ord": [f.value for f in fs],
    }


def cmd_reachable(cfg: RunConfig) -> tuple[int, dict]:
    if len(cfg.inputs) != 2:
        raise MalformedInput("reachable needs two files")
    s, t = (load_symbol(p, cfg.guard) for p in cfg.inputs)
    if s.n != t.n:
        raise RankError("symbols have different lengths")
    return 0, {"reachable": binary_transform_reachable(s, t),
               "states": len(reachable_states(s))}


# -- self-test --------------------------------------------------------------

def _diag(field: DyadicField, values) -> GramLattice:
    return GramLattice.diagonal(field, [field.element(v) for v in values])


def _check_counterexample() -> str | None:
    f = DyadicField(1)
    L, K = _diag(f, [1, 1, 1, 1]), _diag(f, [7, 7, 7, 7])
    for name, fn in METHODS.items():
        if not fn(L, K).isometric:
            return f"{name} rejects <1,1,1,1> vs <7,7,7,7>"
    s, t = BongSymbol.of(f, [1, 1, 1, 1]), BongSymbol.of(f, [7, 7, 7, 7])
    if binary_transform_reachable(s, t):
        return "<7,7,7,7> reachable by binary transformations"
    states = reachable_states(s)
    five = f.class_key(f.element(5))
    if len(states) != 8 or any(set(st) - {0, five} or st.count(five) % 2 for st in states):
        return f"unexpected reachable set {sorted(states)}"
    return None


def _check_g_group() -> str | None:
    f = DyadicField(1)
    for a in (1, 5):
        got = {u: g_membership(f.element(u), f.element(a)) for u in (1, 3, 5, 7)}
        if got != {1: True, 3: False, 5: True, 7: False}:
            return f"g({a}) membership {got}"
    return None


def _check_binary() -> str | None:
    f = DyadicField(1)
    cases = [([1, 1], [5, 5], True), ([1, 5], [5, 1], True), ([1, 1], [3, 3], False)]
    for a, b, want in cases:
        if binary_isometric(BongSymbol.of(f, a), BongSymbol.of(f, b)) != want:
            return f"<{a}> vs <{b}> should be {want}"
    return None


def _check_hilbert_table() -> str | None:
    f = DyadicField(1)
    cls = [f.element(x) for x in (1, 3, 5, 7, 2, 6, 10, 14)]
    for a in cls:
        for b in cls:
            if (hilbert(a, b) == 1) != isotropy_search([a, b, -f.one]):
                return f"({a.literal()},{b.literal()}) disagrees with the isotropy search"
    return None


def _check_good_bong() -> str | None:
    s = good_bong(_diag(DyadicField(1), [1, 2, 8]))
    return None if s.R == [0, 1, 3] else f"R of <1,2,8> is {s.R}"


def _fuzz_check(field: DyadicField, seed: int, trials: int) -> Callable[[], str | None]:
    from .sampling import random_pair

    def run():
        for i in range(trials):
            rng = random.Random(f"{seed}:{field.e}:{i}")
            L, K, _ = random_pair(rng, field, max_rank=4)
            answers = {isometric_bong(L, K).isometric, isometric_jordan(L, K).isometric}
            if field.e == 1:
                answers.add(isometric_2adic(L, K).isometric)
            if len(answers) > 1:
                return f"trial {i} disagrees"
        return None
    return run


def cmd_selftest(cfg: RunConfig) -> tuple[int, dict]:
    checks = [
        ("counterexample <1,1,1,1> ~ <7,7,7,7>", _check_counterexample),
        ("g(1) = g(5) = {1,5} squares", _check_g_group),
        ("binary isometry fixtures", _check_binary),
        ("Hilbert table vs isotropy search", _check_hilbert_table),
        ("good BONG of <1,2,8>", _check_good_bong),
        ("decider agreement over Q2", _fuzz_check(DyadicField(1), cfg.seed, cfg.trials)),
        ("decider agreement over x^2+2", _fuzz_check(DyadicField(2), cfg.seed, cfg.trials)),
    ]
    results = {}
    for name, fn in checks:
        try:
            problem = fn()
        except DyadicError as exc:
            problem = f"{type(exc).__name__}: {exc}"
        results[name] = problem
        line = "PASS " + name if problem is None else f"FAIL {name}: {problem}"
        print(line, file=sys.stderr)
    failed = sorted(k for k, v in results.items() if v is not None)
    return (1 if failed else 0), {"passed": len(checks) - len(failed), "failed": failed}


COMMANDS = {"classify": cmd_classify, "bong": cmd_bong, "invariants": cmd_invariants,
            "reachable": cmd_reachable, "selftest": cmd_selftest}


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Run one command, retrying once with a doubled guard on precision loss."""
    FAULTS.clear()
    FAULTS.update(cfg.faults)
    try:
        guard = cfg.guard
        for attempt in range(2):
            try:
                return COMMANDS[cfg.command](cfg)
            except InsufficientPrecision:
                if attempt:
                    raise
                cfg.guard = 2 * cfg.guard
        raise AssertionError("unreachable")
    except InsufficientPrecision as exc:
        return 3, {"error": f"precision exhausted: {exc}"}
    except (MalformedInput, FieldMismatch, RankError) as exc:
        return 2, {"error": f"{type(exc).__name__}: {exc}"}
    except InternalVerificationFailure as exc:
        return 4, {"error": f"internal check failed: {exc}"}
    finally:
        cfg.guard = guard
        FAULTS.clear()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dyadic-iso",
                                description="Decide isometry of lattices over dyadic fields.")
    p.add_argument("--output", "-o", help="write JSON here instead of standard output")
    p.add_argument("--inject-fault", action="append", default=[], choices=["hilbert"],
                   help=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="decide whether two lattices are isometric")
    c.add_argument("inputs", nargs=2, metavar="LATTICE")
    c.add_argument("--method", choices=["bong", "jordan", "2adic", "all"], default="all")
    c.add_argument("--guard", type=int, default=12)

    for name, text in (("bong", "print a good BONG"), ("invariants", "print R, alpha, w and f")):
        b = sub.add_parser(name, help=text)
        b.add_argument("inputs", nargs=1, metavar="LATTICE")
        b.add_argument("--guard", type=int, default=12)

    r = sub.add_parser("reachable", help="binary-transformation reachability of two symbols")
    r.add_argument("inputs", nargs=2, metavar="FILE")
    r.add_argument("--guard", type=int, default=12)

    t = sub.add_parser("selftest", help="run built-in fixtures and a small fuzz")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--trials", type=int, default=20)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(command=args.command, inputs=list(getattr(args, "inputs", [])),
                    method=getattr(args, "method", "all"), guard=getattr(args, "guard", 12),
                    seed=getattr(args, "seed", 0), trials=getattr(args, "trials", 20),
                    output=args.output, faults=args.inject_fault)
    status, payload = run(cfg)
    text = _dump(payload)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
