"""Random mutation and case generation shared by the prover and acceptance tests."""
import random

from blamecheck.formula import AttackerBlame, Implies, Necessary, Not, Var, conj, disj, variables
from blamecheck.modelsearch import random_formula, random_game
from blamecheck.prover import Proof, Step, curry, is_tautology
from blamecheck.semantics import Evaluator

_UNARY = (Not, Necessary, AttackerBlame)


def _mutate_node(node, rng, pool):
    if isinstance(node, Var):
        return Var(rng.choice([v for v in pool if v != node.name]))
    if isinstance(node, Implies):
        if node.left != node.right and rng.random() < 0.5:
            return Implies(node.right, node.left)
        return rng.choice(_UNARY)(node.left)
    other = [c for c in _UNARY if not isinstance(node, c)]
    if rng.random() < 0.25:
        return node.child  # drop the operator
    return rng.choice(other)(node.child)


def mutate_formula(f, rng, pool=("p", "q", "r")):
    """Change exactly one node of ``f`` chosen uniformly in preorder."""
    nodes = list(f.walk())
    target = rng.randrange(len(nodes))
    counter = [0]

    def go(n):
        k = counter[0]
        counter[0] += 1
        if k == target:
            return _mutate_node(n, rng, pool)
        if isinstance(n, Implies):
            left = go(n.left)
            return Implies(left, go(n.right))
        if n.children:
            return type(n)(go(n.child))
        return n

    return go(f)


def rename(f, old, new):
    """Replace every occurrence of variable ``old`` by ``new``."""
    if isinstance(f, Var):
        return Var(new) if f.name == old else f
    if isinstance(f, Implies):
        return Implies(rename(f.left, old, new), rename(f.right, old, new))
    return type(f)(rename(f.child, old, new))


def mutate_proof(proof, rng):
    k = rng.randrange(len(proof.steps))
    steps = list(proof.steps)
    s = steps[k]
    steps[k] = Step(mutate_formula(s.formula, rng), s.rule, s.args)
    return Proof(tuple(steps), proof.hypotheses, proof.mode, proof.name)


def semantically_valid(f, n_games=200, seed=0):
    """No refutation among ``n_games`` random games (a fuzz check, not a proof)."""
    rng = random.Random(seed)
    vs = variables(f) or ["p"]
    for _ in range(n_games):
        g = random_game(rng, 3, 3, vs)
        if len(Evaluator(g).extension(f)) != len(g.profiles()):
            return False
    return True


def random_superdistributivity_case(rng):
    """(box, premises, conclusion) with ``curry(premises, conclusion)`` a tautology."""
    box = rng.choice(["N", "R"])
    n = rng.randint(1, 3)
    vs = ("p", "q")
    premises = [random_formula(rng, vs, rng.randint(0, 2)) for _ in range(n)]
    kind = rng.randrange(3) if n > 1 else rng.randrange(2)
    if kind == 0:
        conclusion = premises[0]
        for p in premises[1:]:
            conclusion = conj(conclusion, p)
    elif kind == 1:
        conclusion = disj(rng.choice(premises), random_formula(rng, vs, 2))
    else:
        x = random_formula(rng, vs, 2)
        premises[-1] = Implies(premises[0], x)
        conclusion = x
    assert is_tautology(curry(premises, conclusion))
    return box, premises, conclusion
