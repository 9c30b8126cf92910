"""Two-level security games, the payoff-table game builder, and the two example games.

A game is a set of defender actions, a nonempty response set for each
defender action, and a valuation sending each propositional variable to the
set of action profiles where it is true.  Payoff games (``PayoffSpec``) are
compiled into such games by turning threshold statements about expected
payoffs into propositional variables.
"""
from __future__ import annotations

import json
import operator
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

__all__ = [
    "Profile", "SecurityGame", "InvalidGameError", "IllegalProfileError",
    "validate", "PayoffSpec", "ThresholdProposition", "cell_utilities",
    "expected_payoffs", "build_game", "example_game", "g1_spec", "action_id",
    "format_rational", "parse_rational",
]


class InvalidGameError(ValueError):
    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("invalid game: " + "; ".join(violations))


class IllegalProfileError(ValueError):
    pass


class Profile(NamedTuple):
    defender: str
    attacker: str

    def __str__(self):
        return f"({self.defender},{self.attacker})"

    @classmethod
    def parse(cls, text: str) -> Profile:
        parts = [s.strip() for s in text.strip().strip("()").split(",")]
        if len(parts) != 2 or not all(parts):
            raise ValueError(f"profile must look like 'defender,attacker', got {text!r}")
        return cls(*parts)


@dataclass(frozen=True, eq=False)
class SecurityGame:
    """A game ``(D, {A_d}, pi)``.

    Construction does not validate, so that ``validate`` can report every
    problem with a malformed game; evaluators call ``check`` first.
    """

    defender_actions: tuple[str, ...]
    responses: Mapping[str, tuple[str, ...]]
    valuation: Mapping[str, frozenset[Profile]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "defender_actions", tuple(self.defender_actions))
        object.__setattr__(self, "responses",
                           {d: tuple(rs) for d, rs in self.responses.items()})
        object.__setattr__(self, "valuation",
                           {v: frozenset(Profile(*pr) for pr in prs)
                            for v, prs in self.valuation.items()})

    def __eq__(self, other):
        if not isinstance(other, SecurityGame):
            return NotImplemented
        return (self.defender_actions == other.defender_actions
                and self.responses == other.responses
                and self._nonempty_valuation() == other._nonempty_valuation())

    def __hash__(self):
        return hash((self.defender_actions,
                     tuple(sorted(self.responses.items())),
                     tuple(sorted(self._nonempty_valuation().items()))))

    def _nonempty_valuation(self):
        return {v: s for v, s in self.valuation.items() if s}

    # -- structure -------------------------------------------------------

    def profiles(self) -> list[Profile]:
        """All legal profiles, defender-major in declaration order."""
        return [Profile(d, a) for d in self.defender_actions for a in self.responses.get(d, ())]

    def is_legal(self, pr: Profile) -> bool:
        return pr[0] in self.responses and pr[1] in self.responses[pr[0]] \
            and pr[0] in self.defender_actions

    def require_legal(self, pr) -> Profile:
        pr = Profile(*pr)
        if pr.defender not in self.defender_actions:
            raise IllegalProfileError(f"unknown defender action {pr.defender!r}")
        if pr.attacker not in self.responses.get(pr.defender, ()):
            raise IllegalProfileError(
                f"{pr.attacker!r} is not a response to defender action {pr.defender!r}")
        return pr

    def extension_of(self, var: str) -> frozenset[Profile]:
        return self.valuation.get(var, frozenset())

    def check(self) -> None:
        problems = validate(self)
        if problems:
            raise InvalidGameError(problems)

    def with_valuation(self, valuation: Mapping[str, Iterable]) -> SecurityGame:
        return SecurityGame(self.defender_actions, self.responses, valuation)

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        order = {pr: i for i, pr in enumerate(self.profiles())}
        return {
            "defender_actions": list(self.defender_actions),
            "responses": {d: list(self.responses[d]) for d in self.defender_actions
                          if d in self.responses},
            "valuation": {
                v: [list(pr) for pr in sorted(prs, key=lambda p: (order.get(p, len(order)), p))]
                for v, prs in sorted(self.valuation.items())
            },
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> SecurityGame:
        try:
            return cls(
                defender_actions=list(data["defender_actions"]),
                responses={d: list(rs) for d, rs in data["responses"].items()},
                valuation={v: [tuple(pr) for pr in prs]
                           for v, prs in data.get("valuation", {}).items()},
            )
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValueError(f"malformed game data: {exc}") from None

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def load(cls, path) -> SecurityGame:
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def dump(self, path, extra: Mapping | None = None) -> None:
        data = self.to_dict()
        if extra:
            data.update(extra)
        text = json.dumps(data, indent=2)
        # keep flat lists of names on one line
        text = re.sub(r"\[\s*((?:\"[^\"]*\",\s*)*\"[^\"]*\")\s*\]",
                      lambda m: "[" + re.sub(r",\s+", ", ", m.group(1)) + "]", text)
        Path(path).write_text(text + "\n", encoding="utf-8")


def validate(g: SecurityGame) -> list[str]:
    """Return every violated game invariant; an empty list means the game is valid."""
    out = []
    if not g.defender_actions:
        out.append("empty defender action set")
    seen = set()
    for d in g.defender_actions:
        if d in seen:
            out.append(f"duplicate defender action {d!r}")
        seen.add(d)
        rs = g.responses.get(d)
        if rs is None:
            out.append(f"missing response set for {d!r}")
        elif not rs:
            out.append(f"empty response set for {d!r}")
        elif len(set(rs)) != len(rs):
            out.append(f"duplicate response in response set for {d!r}")
    for d in g.responses:
        if d not in seen:
            out.append(f"response set for unknown defender action {d!r}")
    for v, prs in sorted(g.valuation.items()):
        for pr in sorted(prs):
            if not g.is_legal(pr):
                out.append(f"illegal profile {pr} in valuation of {v!r}")
    return out


# -- payoff games --------------------------------------------------------------

_COMPARATORS = {
    "<": operator.lt, "<=": operator.le, ">": operator.gt, ">=": operator.ge,
    "=": operator.eq, "≤": operator.le, "≥": operator.ge,
}


def parse_rational(x) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"rationals must be integers or 'p/q' strings, got {x!r}")
    return Fraction(x)


def format_rational(x: Fraction) -> str | int:
    x = Fraction(x)
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def action_id(name: str) -> str:
    """Shell-friendly identifier for a strategy display name: ``50/50`` -> ``50_50``."""
    return name.replace("/", "_").replace(" ", "_")


@dataclass(frozen=True)
class ThresholdProposition:
    name: str
    player: str  # "defender" or "attacker"
    cmp: str
    threshold: Fraction

    def __post_init__(self):
        if self.player not in ("defender", "attacker"):
            raise ValueError(f"player must be 'defender' or 'attacker', got {self.player!r}")
        if self.cmp not in _COMPARATORS:
            raise ValueError(f"unknown comparator {self.cmp!r}")
        object.__setattr__(self, "threshold", parse_rational(self.threshold))

    def test(self, defender_payoff: Fraction, attacker_payoff: Fraction) -> bool:
        value = defender_payoff if self.player == "defender" else attacker_payoff
        return _COMPARATORS[self.cmp](value, self.threshold)


@dataclass(frozen=True)
class PayoffSpec:
    """Loss matrix, per-target costs, the defender's candidate mixed strategies
    and threshold propositions.  ``losses[i][j]`` is the expected human loss when
    target ``i`` is patrolled and target ``j`` attacked.
    """

    targets: tuple[str, ...]
    defender_cost: Mapping[str, Fraction]
    attacker_cost: Mapping[str, Fraction]
    losses: tuple[tuple[Fraction, ...], ...]
    strategies: Mapping[str, tuple[Fraction, ...]]
    propositions: tuple[ThresholdProposition, ...] = ()

    def __post_init__(self):
        fix = lambda name, value: object.__setattr__(self, name, value)  # noqa: E731
        fix("targets", tuple(self.targets))
        fix("defender_cost", {t: parse_rational(c) for t, c in self.defender_cost.items()})
        fix("attacker_cost", {t: parse_rational(c) for t, c in self.attacker_cost.items()})
        fix("losses", tuple(tuple(parse_rational(x) for x in row) for row in self.losses))
        fix("strategies", {s: tuple(parse_rational(x) for x in vec)
                           for s, vec in self.strategies.items()})
        fix("propositions", tuple(p if isinstance(p, ThresholdProposition)
                                  else ThresholdProposition(**p) for p in self.propositions))
        n = len(self.targets)
        if len(set(self.targets)) != n or n == 0:
            raise ValueError("targets must be a nonempty list of distinct names")
        for t in self.targets:
            if t not in self.defender_cost or t not in self.attacker_cost:
                raise ValueError(f"missing cost for target {t!r}")
        if len(self.losses) != n or any(len(row) != n for row in self.losses):
            raise ValueError("loss matrix must be square over the targets")
        for s, vec in self.strategies.items():
            if len(vec) != n:
                raise ValueError(f"strategy {s!r} has {len(vec)} entries, expected {n}")
            if any(x < 0 for x in vec) or sum(vec) != 1:
                raise ValueError(f"strategy {s!r} is not a probability vector")
        if len({action_id(s) for s in self.strategies}) != len(self.strategies):
            raise ValueError("strategy names collide after identifier mapping")

    def target_index(self, target: str) -> int:
        try:
            return self.targets.index(target)
        except ValueError:
            raise KeyError(f"unknown target {target!r}") from None

    def strategy(self, name: str) -> tuple[Fraction, ...]:
        if name in self.strategies:
            return self.strategies[name]
        for s, vec in self.strategies.items():
            if action_id(s) == name:
                return vec
        raise KeyError(f"unknown strategy {name!r}")

    def to_dict(self) -> dict:
        return {
            "targets": list(self.targets),
            "defender_cost": [format_rational(self.defender_cost[t]) for t in self.targets],
            "attacker_cost": [format_rational(self.attacker_cost[t]) for t in self.targets],
            "losses": [[format_rational(x) for x in row] for row in self.losses],
            "strategies": {s: [format_rational(x) for x in vec] for s, vec in self.strategies.items()},
            "propositions": [
                {"name": p.name, "player": p.player, "cmp": p.cmp,
                 "threshold": format_rational(p.threshold)}
                for p in self.propositions
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> PayoffSpec:
        targets = list(data["targets"])

        def costs(key):
            c = data[key]
            return dict(c) if isinstance(c, Mapping) else dict(zip(targets, c))

        return cls(
            targets=targets,
            defender_cost=costs("defender_cost"),
            attacker_cost=costs("attacker_cost"),
            losses=data["losses"],
            strategies=data["strategies"],
            propositions=tuple(ThresholdProposition(**p) for p in data.get("propositions", [])),
        )

    @classmethod
    def load(cls, path) -> PayoffSpec:
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def cell_utilities(spec: PayoffSpec, patrolled: str, attacked: str) -> tuple[Fraction, Fraction]:
    """Pure-strategy utilities ``(defender, attacker)``."""
    i, j = spec.target_index(patrolled), spec.target_index(attacked)
    loss = spec.losses[i][j]
    return -loss - spec.defender_cost[patrolled], loss - spec.attacker_cost[attacked]


def expected_payoffs(spec: PayoffSpec, strategy: str, attack: str) -> tuple[Fraction, Fraction]:
    """Exact expected ``(defender, attacker)`` payoffs when the defender plays the
    named mixed strategy and the attacker hits ``attack``."""
    weights = spec.strategy(strategy)
    spec.target_index(attack)
    dpay = apay = Fraction(0)
    for w, patrolled in zip(weights, spec.targets):
        du, au = cell_utilities(spec, patrolled, attack)
        dpay += w * du
        apay += w * au
    return dpay, apay


def build_game(spec: PayoffSpec) -> SecurityGame:
    """Extensive-form game: one defender action per strategy, every target a response."""
    actions = [action_id(s) for s in spec.strategies]
    responses = {d: list(spec.targets) for d in actions}
    valuation: dict[str, set[Profile]] = {p.name: set() for p in spec.propositions}
    for s, d in zip(spec.strategies, actions):
        for t in spec.targets:
            dpay, apay = expected_payoffs(spec, s, t)
            for p in spec.propositions:
                if p.test(dpay, apay):
                    valuation[p.name].add(Profile(d, t))
    g = SecurityGame(actions, responses, valuation)
    g.check()
    return g


def g1_spec() -> PayoffSpec:
    """The two-terminal airport game with strategies 75/25, 50/50 and 25/75."""
    return PayoffSpec(
        targets=("T1", "T2"),
        defender_cost={"T1": 8, "T2": 4},
        attacker_cost={"T1": 12, "T2": 8},
        losses=((20, 120), (200, 16)),
        strategies={
            "75/25": (Fraction(3, 4), Fraction(1, 4)),
            "50/50": (Fraction(1, 2), Fraction(1, 2)),
            "25/75": (Fraction(1, 4), Fraction(3, 4)),
        },
        propositions=(
            ThresholdProposition("att_lt_98", "attacker", "<", 98),
            ThresholdProposition("att_lt_143", "attacker", "<", 143),
            ThresholdProposition("def_lt_m101", "defender", "<", -101),
            ThresholdProposition("def_neg", "defender", "<", 0),
        ),
    )


def example_game(name: str, q_d1_a2: bool = False) -> SecurityGame:
    """``"G1"`` (built from ``g1_spec``) or ``"G2"``.

    In G2 the truth of ``q`` at ``(d1, a2)`` is not pinned down by any claim
    about the game; it defaults to false and ``q_d1_a2`` flips it.
    """
    if name == "G1":
        return build_game(g1_spec())
    if name == "G2":
        q = [("d1", "a1"), ("d2", "a2")] + ([("d1", "a2")] if q_d1_a2 else [])
        return SecurityGame(
            ["d1", "d2"],
            {"d1": ["a1", "a2"], "d2": ["a1", "a2"]},
            {"p": [("d1", "a1"), ("d1", "a2"), ("d2", "a1")], "q": q},
        )
    raise KeyError(f"unknown example game {name!r}; expected 'G1' or 'G2'")
