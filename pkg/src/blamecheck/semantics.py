"""Satisfaction of formulas at action profiles of a security game.

Evaluation is bottom-up over extensions: every subformula is mapped once to
the set of profiles where it holds, so nested N (which quantifies over the
whole game) costs one pass per subformula rather than one per profile.
D is evaluated natively, not through ``translate_D``.
"""
from __future__ import annotations

from .formula import (AttackerBlame, DefenderBlame, Formula, Implies, Necessary, Not,
                      Var, render, rbox)
from .game import Profile, SecurityGame

__all__ = ["Evaluator", "holds", "extension", "r_holds", "explain"]


class Evaluator:
    """Memoized evaluator bound to one (validated) game.

    ``cache`` maps each evaluated formula to its extension.  Entries never
    change; one evaluator may be reused for any number of formulas.
    """

    def __init__(self, game: SecurityGame, validate: bool = True):
        if validate:
            game.check()
        self.game = game
        self.all = frozenset(game.profiles())
        self.by_defender = {d: frozenset(Profile(d, a) for a in game.responses[d])
                            for d in game.defender_actions}
        self.cache: dict[Formula, frozenset[Profile]] = {}

    def extension(self, f: Formula) -> frozenset[Profile]:
        cache = self.cache
        hit = cache.get(f)
        if hit is not None:
            return hit
        # explicit stack: deep formulas would overflow the recursion limit
        stack = [f]
        while stack:
            node = stack[-1]
            if node in cache:
                stack.pop()
                continue
            pending = [c for c in node.children if c not in cache]
            if pending:
                stack.extend(pending)
                continue
            stack.pop()
            cache[node] = self._step(node)
        return cache[f]

    def _step(self, node: Formula) -> frozenset[Profile]:
        if isinstance(node, Var):
            return self.game.extension_of(node.name) & self.all
        if isinstance(node, Implies):
            return (self.all - self.cache[node.left]) | self.cache[node.right]
        child = self.cache[node.child]
        if isinstance(node, Not):
            return self.all - child
        if isinstance(node, Necessary):
            return self.all if child == self.all else frozenset()
        if isinstance(node, AttackerBlame):
            # some response to the same defender action refutes the child
            out = set()
            for d, block in self.by_defender.items():
                inside = block & child
                if inside and inside != block:
                    out |= inside
            return frozenset(out)
        if isinstance(node, DefenderBlame):
            # some defender action makes the child false under every response
            if any(not (block & child) for block in self.by_defender.values()):
                return child
            return frozenset()
        raise TypeError(f"not a formula: {node!r}")

    def holds(self, pr, f: Formula) -> bool:
        pr = self.game.require_legal(pr)
        return pr in self.extension(f)


def holds(g: SecurityGame, pr, f: Formula) -> bool:
    """``pr |= f`` in game ``g``."""
    return Evaluator(g).holds(pr, f)


def extension(g: SecurityGame, f: Formula) -> frozenset[Profile]:
    """All profiles of ``g`` where ``f`` holds."""
    return Evaluator(g).extension(f)


def r_holds(g: SecurityGame, pr, f: Formula) -> bool:
    """Truth of ``R f``, i.e. of ``!(f -> A f)``."""
    return holds(g, pr, rbox(f))


def explain(g: SecurityGame, pr, f: Formula) -> list[str]:
    """Indented trace, one subformula per line, with witnessing profiles.

    A shows the dissenting response, D the preventing defender action and
    N a falsifying profile.  Below N the trace moves to that profile.
    """
    ev = Evaluator(g)
    pr = g.require_legal(pr)
    lines: list[str] = []

    def show(node, at, indent):
        val = at in ev.extension(node)
        note = ""
        pad = "  " * indent
        if isinstance(node, Necessary):
            if not val:
                bad = next(q for q in g.profiles() if q not in ev.extension(node.child))
                note = f"  refuted at {bad}"
                at_child = bad
            else:
                note = "  holds at every profile"
                at_child = at
        elif isinstance(node, AttackerBlame):
            child = ev.extension(node.child)
            dissent = [Profile(at.defender, a) for a in g.responses[at.defender]
                       if Profile(at.defender, a) not in child]
            if at not in child:
                note = "  argument false here"
            elif dissent:
                note = f"  dissenting response {dissent[0].attacker} {dissent[0]}"
            else:
                note = "  no response refutes the argument"
            at_child = at
        elif isinstance(node, DefenderBlame):
            child = ev.extension(node.child)
            preventing = [d for d in g.defender_actions
                          if not (ev.by_defender[d] & child)]
            if at not in child:
                note = "  argument false here"
            elif preventing:
                note = f"  preventing defender action {preventing[0]}"
            else:
                note = "  no defender action prevents the argument"
            at_child = at
        else:
            at_child = at
        lines.append(f"{pad}{render(node)}: {'true' if val else 'false'} at {at}{note}")
        for c in node.children:
            show(c, at_child, indent + 1)

    show(f, pr, 0)
    return lines
