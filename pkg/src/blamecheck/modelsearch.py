"""Bounded countermodel search over small games, random games, and soundness fuzzing.

Enumeration order (deterministic):

* shapes are tuples of response counts, one per defender action, ordered by
  total profile count and then lexicographically; defender actions are named
  ``d1, d2, ...`` and the responses of each ``a1, a2, ...``;
* for each shape, valuations are integers ``m = 0, 1, ...``; bit
  ``i * P + j`` of ``m`` says whether variable ``i`` (sorted order) holds at
  profile ``j`` (defender-major order), ``P`` being the number of profiles;
* within a game, profiles are tried in defender-major order.

A ``NoCountermodel`` verdict only covers the enumerated games.  It is not a
validity proof.
"""
from __future__ import annotations

import itertools
import json
import os
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .formula import (AttackerBlame, DefenderBlame, Formula, Implies, Necessary, Not, Var,
                      iff, rbox, render, translate_D, variables)
from .game import Profile, SecurityGame
from .prover import SCHEMAS, Meta, instantiate
from .semantics import Evaluator

__all__ = [
    "SearchBounds", "Countermodel", "NoCountermodel", "BudgetExceeded",
    "enumerate_shapes", "enumerate_games", "canonical_key", "check_validity",
    "find_model", "schema_countermodel", "random_game", "random_formula",
    "fuzz_axioms", "FuzzReport",
]

DEFAULT_BUDGET = 2 ** 24


def default_budget() -> int:
    env = os.environ.get("BLAMECHECK_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


class BudgetExceeded(RuntimeError):
    def __init__(self, shape, total, budget):
        self.shape = shape
        self.total = total
        self.budget = budget
        super().__init__(f"enumeration budget {budget} exceeded at shape {list(shape)} "
                         f"({total} games needed so far)")


@dataclass
class SearchBounds:
    max_defender_actions: int = 2
    max_responses: int = 2
    variables: Sequence[str] | None = None
    budget: int = field(default_factory=default_budget)
    canonical: bool = False  # skip games isomorphic to an earlier one
    shapes: Sequence[tuple[int, ...]] | None = None  # explicit shapes override the bounds

    def __post_init__(self):
        if self.max_defender_actions < 1 or self.max_responses < 1:
            raise ValueError("search bounds must be at least 1")


@dataclass(frozen=True)
class Countermodel:
    game: SecurityGame
    profile: Profile
    formula: Formula | None = None

    def to_dict(self) -> dict:
        data = self.game.to_dict()
        data["profile"] = list(self.profile)
        return data

    def __bool__(self):
        return True


@dataclass(frozen=True)
class NoCountermodel:
    games_checked: int

    def __bool__(self):
        return False

    def __str__(self):
        return "NO COUNTERMODEL WITHIN BOUNDS (not a proof of validity)"


# -- enumeration ---------------------------------------------------------------

def enumerate_shapes(bounds: SearchBounds) -> list[tuple[int, ...]]:
    if bounds.shapes is not None:
        return [tuple(s) for s in bounds.shapes]
    shapes = [s for k in range(1, bounds.max_defender_actions + 1)
              for s in itertools.product(range(1, bounds.max_responses + 1), repeat=k)]
    return sorted(shapes, key=lambda s: (sum(s), s))


def _shape_skeleton(shape) -> tuple[list[str], dict[str, list[str]], list[Profile]]:
    actions = [f"d{i}" for i in range(1, len(shape) + 1)]
    responses = {d: [f"a{j}" for j in range(1, c + 1)] for d, c in zip(actions, shape)}
    profiles = [Profile(d, a) for d in actions for a in responses[d]]
    return actions, responses, profiles


def _check_budget(shapes, nvars, budget):
    total = 0
    for s in shapes:
        total += 2 ** (sum(s) * nvars)
        if total > budget:
            raise BudgetExceeded(s, total, budget)
    return total


def canonical_key(g: SecurityGame) -> tuple:
    """Isomorphism invariant: equal keys iff the games differ only by renaming
    defender actions and, separately for each, the responses."""
    names = sorted(g.valuation)
    blocks = []
    for d in g.defender_actions:
        sig = sorted(tuple(Profile(d, a) in g.valuation[v] for v in names)
                     for a in g.responses[d])
        blocks.append(tuple(sig))
    return (tuple(names), tuple(sorted(blocks)))


def enumerate_games(bounds: SearchBounds, variables_: Sequence[str]) -> Iterator[SecurityGame]:
    """All games within ``bounds`` over ``variables_`` in the documented order."""
    variables_ = sorted(variables_)
    shapes = enumerate_shapes(bounds)
    _check_budget(shapes, len(variables_), bounds.budget)
    seen = set()
    for shape in shapes:
        actions, responses, profiles = _shape_skeleton(shape)
        P = len(profiles)
        for m in range(2 ** (P * len(variables_))):
            val = {v: frozenset(pr for j, pr in enumerate(profiles) if m >> (i * P + j) & 1)
                   for i, v in enumerate(variables_)}
            g = SecurityGame(actions, responses, val)
            if bounds.canonical:
                key = canonical_key(g)
                if key in seen:
                    continue
                seen.add(key)
            yield g


def check_validity(f: Formula, bounds: SearchBounds | None = None) -> Countermodel | NoCountermodel:
    """First (game, profile) in enumeration order where ``f`` fails."""
    bounds = bounds or SearchBounds()
    vs = bounds.variables if bounds.variables is not None else variables(f)
    count = 0
    for g in enumerate_games(bounds, vs):
        count += 1
        ev = Evaluator(g, validate=False)
        ext = ev.extension(f)
        for pr in g.profiles():
            if pr not in ext:
                # independent re-check with a fresh, validating evaluator
                assert not Evaluator(g).holds(pr, f), "countermodel failed re-check"
                return Countermodel(g, pr, f)
    return NoCountermodel(count)


def find_model(f: Formula, bounds: SearchBounds | None = None) -> Countermodel | NoCountermodel:
    """First (game, profile) where ``f`` holds (a countermodel to ``!f``)."""
    cm = check_validity(Not(f), bounds)
    return Countermodel(cm.game, cm.profile, f) if cm else cm


def schema_countermodel(template: Formula, fillers: Sequence[Formula],
                        bounds: SearchBounds | None = None):
    """Search for a countermodel to any instance of ``template`` whose
    metavariables are filled from ``fillers``.

    Truth of an instance in a game depends on its fillers only through their
    extensions, so per game one representative filler per distinct extension
    is enough.  Returns ``(Countermodel, instance)`` or ``(NoCountermodel, None)``.
    """
    bounds = bounds or SearchBounds()
    metas = sorted({n.name for n in template.walk() if isinstance(n, Meta)})
    vs = bounds.variables
    if vs is None:
        vs = sorted({v for f in fillers for v in variables(f)})
    count = 0
    for g in enumerate_games(bounds, vs):
        count += 1
        ev = Evaluator(g, validate=False)
        reps: dict[frozenset, Formula] = {}
        for f in fillers:
            reps.setdefault(ev.extension(f), f)
        for combo in itertools.product(list(reps.values()), repeat=len(metas)):
            inst = instantiate(template, dict(zip(metas, combo)))
            ext = ev.extension(inst)
            if len(ext) != len(ev.all):
                pr = next(p for p in g.profiles() if p not in ext)
                return Countermodel(g, pr, inst), inst
    return NoCountermodel(count), None


# -- random generation ---------------------------------------------------------

def random_game(seed: int | random.Random, max_defender_actions: int = 3,
                max_responses: int = 3, variables_: Sequence[str] = ("p", "q")) -> SecurityGame:
    """Uniform shape within bounds, each (variable, profile) membership a fair coin."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    k = rng.randint(1, max_defender_actions)
    shape = [rng.randint(1, max_responses) for _ in range(k)]
    actions, responses, profiles = _shape_skeleton(shape)
    val = {v: [pr for pr in profiles if rng.random() < 0.5] for v in variables_}
    return SecurityGame(actions, responses, val)


# modalities weighted up: violations, if any, show up in shallow modal nesting
_OPS = ("var", "not", "imp", "N", "A", "D")
_WEIGHTS = (2, 2, 2, 3, 4, 0)


def random_formula(rng: random.Random, variables_: Sequence[str] = ("p", "q"),
                   depth: int = 3, allow_D: bool = False) -> Formula:
    if depth <= 0:
        return Var(rng.choice(list(variables_)))
    weights = list(_WEIGHTS)
    if allow_D:
        weights[-1] = 2
    op = rng.choices(_OPS, weights)[0]
    sub = lambda: random_formula(rng, variables_, depth - 1, allow_D)  # noqa: E731
    if op == "var":
        return Var(rng.choice(list(variables_)))
    if op == "not":
        return Not(sub())
    if op == "imp":
        return Implies(sub(), sub())
    return {"N": Necessary, "A": AttackerBlame, "D": DefenderBlame}[op](sub())


# -- soundness fuzzing ---------------------------------------------------------

HoldsFn = Callable[[SecurityGame, Profile, Formula], bool]


@dataclass
class FuzzReport:
    seed: int
    cases: int = 0
    checks: int = 0
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def count(self, check: str) -> int:
        return sum(1 for v in self.violations if v["check"] == check)

    def to_jsonl(self) -> str:
        return "".join(json.dumps(v, sort_keys=True) + "\n" for v in self.violations)


def fuzz_checks(phi: Formula, psi: Formula, phi_plus: Formula) -> Iterable[tuple[str, Formula]]:
    """Formulas that must hold everywhere: every schema instance, Fairness for D,
    and the D-elimination equivalence (on a D-containing ``phi_plus``)."""
    for name, template in SCHEMAS.items():
        yield name, instantiate(template, {"phi": phi, "psi": psi})
    yield "FairnessD", Implies(DefenderBlame(phi_plus),
                               Necessary(Implies(phi_plus, DefenderBlame(phi_plus))))
    yield "DElimination", iff(DefenderBlame(phi_plus), translate_D(DefenderBlame(phi_plus)))


def fuzz_axioms(n_cases: int, seed: int = 0, holds: HoldsFn | None = None,
                max_defender_actions: int = 3, max_responses: int = 3,
                depth: int = 3) -> FuzzReport:
    """Random games, profiles and depth-bounded fillers; every check must hold.

    Besides the formula checks of ``fuzz_checks`` this compares ``R phi``
    against its unfolded reading (phi at every response to the same defender
    action).  ``holds`` swaps in another evaluator, e.g. a broken one to test
    the harness.
    """
    rng = random.Random(seed)
    report = FuzzReport(seed)
    for case in range(n_cases):
        g = random_game(rng, max_defender_actions, max_responses, ("p", "q"))
        pr = rng.choice(g.profiles())
        phi = random_formula(rng, ("p", "q"), rng.randint(0, depth))
        psi = random_formula(rng, ("p", "q"), rng.randint(0, depth))
        phi_plus = random_formula(rng, ("p", "q"), rng.randint(0, depth), allow_D=True)
        report.cases += 1
        if holds is None:
            ev = Evaluator(g)
            check_fn = lambda _g, at, f: at in ev.extension(f)  # noqa: E731
        else:
            check_fn = holds

        def fail(check, formula):
            report.violations.append({
                "seed": seed, "case": case, "check": check, "game": g.to_dict(),
                "profile": list(pr), "formula": render(formula),
            })

        for check, f in fuzz_checks(phi, psi, phi_plus):
            report.checks += 1
            if not check_fn(g, pr, f):
                fail(check, f)
        report.checks += 1
        unfolded = all(check_fn(g, Profile(pr.defender, a), phi) for a in g.responses[pr.defender])
        if check_fn(g, pr, rbox(phi)) != unfolded:
            fail("RCollapse", rbox(phi))
    return report

