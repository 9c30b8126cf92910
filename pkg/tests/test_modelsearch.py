import json
import math
import random
from collections import Counter

import pytest

from blamecheck.formula import Var, parse
from blamecheck.game import Profile, SecurityGame, example_game, validate
from blamecheck.modelsearch import (BudgetExceeded, Countermodel, NoCountermodel, SearchBounds,
                                    canonical_key, check_validity, enumerate_games,
                                    enumerate_shapes, find_model, fuzz_axioms, random_game,
                                    schema_countermodel)
from blamecheck.prover import SCHEMAS
from blamecheck.semantics import holds
from oracles import naive_holds


def test_shapes_order():
    assert enumerate_shapes(SearchBounds(2, 2)) == [(1,), (1, 1), (2,), (1, 2), (2, 1), (2, 2)]


def test_enumeration_count_one_variable():
    # (1): 2^1, (2): 2^2, (1,1): 2^2, (1,2): 2^3, (2,1): 2^3, (2,2): 2^4
    by_hand = 2 + 4 + 4 + 8 + 8 + 16
    games = list(enumerate_games(SearchBounds(2, 2), ["p"]))
    assert len(games) == by_hand == 42
    assert len(set(games)) == 42
    assert all(not validate(g) for g in games)


def test_enumeration_count_two_variables():
    assert sum(1 for _ in enumerate_games(SearchBounds(2, 2), ["p", "q"])) \
        == sum(4 ** n for n in (1, 2, 2, 3, 3, 4))


def test_fairness_A_countermodel():
    v = check_validity(parse("A p -> N(p -> A p)"), SearchBounds(2, 2))
    assert isinstance(v, Countermodel)
    assert v.profile == Profile("d2", "a1")
    assert not naive_holds(v.game, v.profile, parse("A p -> N(p -> A p)"))


def test_conjunction_D_countermodel():
    f = parse("D(p & q) -> (D p | D q)")
    v = check_validity(f, SearchBounds(2, 2))
    assert v and not naive_holds(v.game, v.profile, f)
    # G2 itself is a countermodel at (d1,a1)
    assert not naive_holds(example_game("G2"), ("d1", "a1"), f)


def test_no_blame_D_model():
    f = parse("D(p -> D p)")
    m = find_model(f, SearchBounds(2, 2))
    assert m and m.profile == Profile("d2", "a2")
    assert naive_holds(m.game, m.profile, f)


def test_no_blame_no_countermodel_3x3():
    v = check_validity(parse("!A(p -> A p)"), SearchBounds(3, 3))
    assert isinstance(v, NoCountermodel) and not v
    assert v.games_checked == sum(1 for _ in enumerate_games(SearchBounds(3, 3), ["p"]))
    assert "not a proof of validity" in str(v)


def test_deterministic():
    f = parse("D(p & q) -> (D p | D q)")
    a = check_validity(f, SearchBounds(2, 2))
    b = check_validity(f, SearchBounds(2, 2))
    assert a == b and a.game.to_dict() == b.game.to_dict()


@pytest.mark.parametrize("text", ["A p -> N(p -> A p)", "D(p & q) -> (D p | D q)",
                                  "N p -> !A p", "A A p", "p -> D p"])
def test_canonical_filter_same_verdict(text):
    f = parse(text)
    plain = check_validity(f, SearchBounds(2, 2))
    canon = check_validity(f, SearchBounds(2, 2, canonical=True))
    assert bool(plain) == bool(canon)
    if plain:
        assert plain == canon


def test_canonical_key_renaming():
    g = SecurityGame(["d1", "d2"], {"d1": ["a1", "a2"], "d2": ["a1"]},
                     {"p": [("d1", "a1"), ("d2", "a1")]})
    h = SecurityGame(["d1", "d2"], {"d1": ["a1"], "d2": ["a1", "a2"]},
                     {"p": [("d1", "a1"), ("d2", "a2")]})
    assert canonical_key(g) == canonical_key(h)
    assert canonical_key(g) != canonical_key(g.with_valuation({"p": [("d1", "a1")]}))
    games = list(enumerate_games(SearchBounds(2, 2, canonical=True), ["p"]))
    assert len({canonical_key(x) for x in games}) == len(games) < 42


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded) as exc:
        check_validity(parse("p"), SearchBounds(3, 3, budget=100))
    assert exc.value.budget == 100
    assert "exceeded at shape" in str(exc.value)


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("BLAMECHECK_BUDGET", "10")
    with pytest.raises(BudgetExceeded):
        check_validity(parse("p"), SearchBounds(2, 2))
    monkeypatch.delenv("BLAMECHECK_BUDGET")
    assert not check_validity(parse("p -> p"), SearchBounds(2, 2))


def test_bounds_validated():
    with pytest.raises(ValueError):
        SearchBounds(0, 2)


def test_countermodel_serialization():
    v = check_validity(parse("A p -> N(p -> A p)"), SearchBounds(2, 2))
    data = v.to_dict()
    assert data["profile"] == ["d2", "a1"]
    back = SecurityGame.from_dict(data)
    assert back == v.game


def test_schema_search_catches_non_axiom():
    # Fairness for A is not a theorem, so the schema search must fall over
    from blamecheck.formula import AttackerBlame, Implies, Necessary
    from blamecheck.prover import PHI
    template = Implies(AttackerBlame(PHI), Necessary(Implies(PHI, AttackerBlame(PHI))))
    v, inst = schema_countermodel(template, [Var("p")], SearchBounds(2, 2))
    assert v and not holds(v.game, v.profile, inst)


def test_schema_search_axioms_small():
    fillers = [Var("p"), parse("!p"), parse("A p"), parse("N p")]
    for name, t in SCHEMAS.items():
        v, _ = schema_countermodel(t, fillers, SearchBounds(2, 2, variables=["p"]))
        assert not v, name


# -- random generation ---------------------------------------------------------

def test_random_game_deterministic():
    assert random_game(42) == random_game(42)
    assert random_game(42).to_dict() == random_game(42).to_dict()


def test_random_games_valid():
    rng = random.Random(0)
    for _ in range(1000):
        g = random_game(rng, 3, 3, ("p", "q"))
        assert validate(g) == []
        assert 1 <= len(g.defender_actions) <= 3
        assert all(1 <= len(r) <= 3 for r in g.responses.values())


def test_random_game_coin_frequency():
    seen, hits = Counter(), Counter()
    for seed in range(10_000):
        g = random_game(seed, 3, 3, ("p",))
        for pr in g.profiles():
            seen[pr] += 1
            hits[pr] += pr in g.valuation["p"]
    for pr, n in seen.items():
        assert abs(hits[pr] - n / 2) <= 3 * math.sqrt(n) / 2, pr


def test_random_game_shape_uniform():
    counts = Counter(len(random_game(s, 3, 3).defender_actions) for s in range(3000))
    for k in (1, 2, 3):
        assert abs(counts[k] - 1000) <= 3 * math.sqrt(3000 * (1 / 3) * (2 / 3))


# -- fuzzing -------------------------------------------------------------------

def test_fuzz_clean():
    report = fuzz_axioms(2000, seed=1)
    assert report.ok and report.cases == 2000
    assert report.checks == 2000 * (len(SCHEMAS) + 3)


def broken_holds(g, pr, f):
    """Naive semantics with A's 'some response refutes' clause dropped."""
    from blamecheck.formula import AttackerBlame, Implies, Necessary, Not
    if isinstance(f, AttackerBlame):
        return broken_holds(g, pr, f.child)
    if isinstance(f, Var):
        return tuple(pr) in {tuple(x) for x in g.valuation.get(f.name, ())}
    if isinstance(f, Not):
        return not broken_holds(g, pr, f.child)
    if isinstance(f, Implies):
        return not broken_holds(g, pr, f.left) or broken_holds(g, pr, f.right)
    if isinstance(f, Necessary):
        return all(broken_holds(g, x, f.child) for x in g.profiles())
    return naive_holds(g, pr, f)


def test_fuzz_reports_broken_semantics():
    report = fuzz_axioms(300, seed=2, holds=broken_holds)
    assert not report.ok
    assert report.count("NoBlame") > 0
    rows = [json.loads(line) for line in report.to_jsonl().splitlines()]
    assert len(rows) == len(report.violations)
    first = rows[0]
    assert {"seed", "case", "check", "game", "profile", "formula"} <= set(first)
    g = SecurityGame.from_dict(first["game"])
    assert not broken_holds(g, tuple(first["profile"]), parse(first["formula"]))


def test_fuzz_deterministic():
    a = fuzz_axioms(200, seed=9, holds=broken_holds)
    b = fuzz_axioms(200, seed=9, holds=broken_holds)
    assert a.to_jsonl() == b.to_jsonl()
