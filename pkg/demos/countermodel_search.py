# Bounded search: non-theorems fall to small games, axioms survive.
from blamecheck import parse
from blamecheck.modelsearch import SearchBounds, check_validity, fuzz_axioms

for text in ["A p -> N(p -> A p)", "D(p & q) -> (D p | D q)", "N p -> !A p", "!A(p -> A p)"]:
    v = check_validity(parse(text), SearchBounds(2, 2))
    if v:
        print(f"{text:26} countermodel at {v.profile}: {v.game.to_json()}")
    else:
        print(f"{text:26} {v} ({v.games_checked} games)")

# random instances of every axiom schema on random games
report = fuzz_axioms(2000, seed=1)
print()
print(f"{report.cases} fuzz cases, {report.checks} checks, {len(report.violations)} violations")
