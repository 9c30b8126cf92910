# Two terminals, a defender who mixes patrols and an attacker who sees the mix.
from blamecheck import build_game, expected_payoffs, explain, g1_spec, holds, parse

spec = g1_spec()
print("strategy  target  defender  attacker")
for s in spec.strategies:
    for t in spec.targets:
        d, a = expected_payoffs(spec, s, t)
        print(f"{s:>8}  {t:>6}  {str(d):>8}  {str(a):>8}")

game = build_game(spec)

# the attacker hit T2 under the even mix and got less than 98;
# T1 would have paid 98, so a choice existed
print()
for line in explain(game, ("50_50", "T2"), parse("A att_lt_98")):
    print(line)

# at T1 the attacker got 98 < 143, but nothing better was available
print()
print("A att_lt_143 at (50_50,T1):", holds(game, ("50_50", "T1"), parse("A att_lt_143")))

# the defender loses more than 101 and only the 75/25 mix avoids that
print()
for line in explain(game, ("25_75", "T1"), parse("D def_lt_m101")):
    print(line)
