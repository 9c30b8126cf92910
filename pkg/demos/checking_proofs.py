# Hilbert-style derivations: check the bundled ones, then break one on purpose.
import random

from blamecheck import builtin_derivations, parse, render_proof, verify
from blamecheck.formula import Var, disj
from blamecheck.prover import Proof, ProofError, Step, derive_superdistributivity

lib = builtin_derivations()
for name, proof in lib.items():
    print(f"{name:16} {len(proof):3} lines  {verify(proof)}")

print()
print(render_proof(lib["N_to_R"]))

# swap the operands of a modus ponens step
steps = list(lib["R_K"].steps)
k = next(i for i, s in enumerate(steps) if s.rule == "mp")
steps[k] = Step(steps[k].formula, "mp", steps[k].args[::-1])
try:
    verify(Proof(steps))
except ProofError as exc:
    print("corrupted R_K:", exc)

# from R p derive R(p | q), given only the tautology p -> p | q
p, q = Var("p"), Var("q")
chain = Proof([Step(parse("p -> p | q"), "taut")])
out = derive_superdistributivity("R", [p], disj(p, q), chain)
print()
print(render_proof(out))
print("verified:", verify(out))
