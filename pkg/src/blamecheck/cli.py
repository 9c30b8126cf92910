"""Command-line front end.

Exit codes: 0 claim holds / proof OK / all repro records pass, 1 semantic
negative (UNSAT, countermodel found, proof rejected, repro failure), 2 usage
or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .formula import FormulaSyntaxError, parse, render
from .game import (IllegalProfileError, InvalidGameError, PayoffSpec, Profile, SecurityGame,
                   build_game)
from .modelsearch import BudgetExceeded, SearchBounds, check_validity, default_budget, random_game
from .prover import ProofError, parse_proof, verify
from .semantics import Evaluator, explain
from . import repro


class UsageError(Exception):
    pass


def _bounds(text: str) -> tuple[int, int]:
    try:
        d, a = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bounds must look like 'D,A', got {text!r}") from None
    if d < 1 or a < 1:
        raise argparse.ArgumentTypeError("bounds must be at least 1")
    return d, a


def load_game(path: str) -> SecurityGame:
    """A game file, or a payoff-spec file (recognised by its ``targets`` key)."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    try:
        g = build_game(PayoffSpec.from_dict(data)) if "targets" in data \
            else SecurityGame.from_dict(data)
        g.check()
    except (InvalidGameError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{path}: {exc}") from None
    return g


def cmd_check(args) -> int:
    g = load_game(args.game)
    try:
        f = parse(args.formula)
        pr = g.require_legal(Profile.parse(args.profile))
    except (FormulaSyntaxError, IllegalProfileError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    ok = Evaluator(g).holds(pr, f)
    verdict = "SAT" if ok else "UNSAT"
    if args.json:
        out = {"verdict": verdict, "profile": list(pr), "formula": render(f)}
        if args.explain:
            out["explain"] = explain(g, pr, f)
        print(json.dumps(out))
    else:
        print(verdict)
        if args.explain:
            print("\n".join(explain(g, pr, f)))
    return 0 if ok else 1


def cmd_valid(args) -> int:
    try:
        f = parse(args.formula)
    except FormulaSyntaxError as exc:
        raise UsageError(str(exc)) from None
    d, a = args.bounds
    bounds = SearchBounds(d, a, budget=args.budget, canonical=args.canonical)
    try:
        v = check_validity(f, bounds)
    except BudgetExceeded as exc:
        raise UsageError(str(exc)) from None
    if not v:
        if args.json:
            print(json.dumps({"verdict": "no-countermodel", "games_checked": v.games_checked,
                              "bounds": [d, a]}))
        else:
            print(f"{v} [bounds {d},{a}; {v.games_checked} games]")
        return 0
    v.game.dump(args.out, {"profile": list(v.profile)})
    if args.json:
        print(json.dumps({"verdict": "countermodel", "profile": list(v.profile),
                          "file": args.out, "game": v.to_dict()}))
    else:
        print(f"COUNTERMODEL at {v.profile.defender},{v.profile.attacker} written to {args.out}")
    return 1


def cmd_prove(args) -> int:
    try:
        text = Path(args.proof).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {args.proof}: {exc}") from None
    try:
        proof = parse_proof(text, Path(args.proof).stem)
    except ProofError as exc:
        raise UsageError(f"malformed proof file: {exc}") from None
    try:
        concl = verify(proof)
    except ProofError as exc:
        for k, s in enumerate(proof.steps[:max(exc.line - 1, 0)], start=1):
            if not args.json:
                print(f"  {k}: ok ({s.rule})")
        if args.json:
            print(json.dumps({"verdict": "FAIL", "line": exc.line, "reason": exc.reason}))
        else:
            print(f"FAIL line {exc.line}: {exc.reason}")
        return 1
    if args.json:
        print(json.dumps({"verdict": "OK", "conclusion": render(concl), "lines": len(proof)}))
    else:
        for k, s in enumerate(proof.steps, start=1):
            print(f"  {k}: ok ({s.rule})")
        print(f"OK {render(concl)}")
    return 0


def cmd_repro(args) -> int:
    records = repro.run(args.suite)
    for r in records:
        print(json.dumps(r.to_dict()) if args.json else r.line())
    failed = sum(not r.passed for r in records)
    if not args.json:
        print(f"{len(records) - failed}/{len(records)} claims pass")
    return 1 if failed else 0


def cmd_gen(args) -> int:
    d, a = args.bounds
    vs = [v.strip() for v in args.vars.split(",") if v.strip()]
    g = random_game(args.seed, d, a, vs)
    if args.out:
        g.dump(args.out)
    else:
        print(g.to_json(indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="blamecheck",
        description="Model checking, countermodel search and proof checking for "
                    "blameworthiness in security games.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate a formula at a profile of a game")
    p.add_argument("game", help="game JSON file (or payoff-spec JSON)")
    p.add_argument("formula")
    p.add_argument("--profile", required=True, help="defender,attacker")
    p.add_argument("--explain", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("valid", help="bounded countermodel search")
    p.add_argument("formula")
    p.add_argument("--bounds", type=_bounds, default=(2, 2), help="D,A (default 2,2)")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--canonical", action="store_true", help="skip isomorphic games")
    p.add_argument("--out", default="countermodel.json")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_valid)

    p = sub.add_parser("prove", help="verify a proof file")
    p.add_argument("proof")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_prove)

    p = sub.add_parser("repro", help="re-run the claims about the example games")
    p.add_argument("suite", nargs="?", default="all", choices=repro.SUITES + ("all",))
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_repro)

    p = sub.add_parser("gen", help="write a random game")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bounds", type=_bounds, default=(3, 3))
    p.add_argument("--vars", default="p,q")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_gen)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if getattr(args, "budget", 0) is None:
        args.budget = default_budget()
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
