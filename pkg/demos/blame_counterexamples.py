# Principles that look natural but fail for defender blame, checked on a 2x2 game.
from blamecheck import example_game, explain, extension, parse

g = example_game("G2")
print("p holds at", sorted(map(str, extension(g, parse("p")))))
print("q holds at", sorted(map(str, extension(g, parse("q")))))

cases = [
    ("D(p & q) -> (D p | D q)", ("d1", "a1")),  # blame for a conjunction need not split
    ("D(p -> D p)", ("d2", "a2")),  # the D analogue of the no-blame axiom fails
    ("A p -> N(p -> A p)", ("d2", "a1")),  # fairness holds for D but not for A
]
for text, pr in cases:
    print()
    print("\n".join(explain(g, pr, parse(text))))

# neither atom is ever blamable on the defender
print()
print("D p anywhere:", bool(extension(g, parse("D p"))))
print("D q anywhere:", bool(extension(g, parse("D q"))))
