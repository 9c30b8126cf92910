"""Reproduction suite: every claim about the example games, axioms and derivations.

Each record compares an expected verdict against the computed one.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction

from .formula import Var, Implies, Not, Necessary, AttackerBlame, parse
from .game import Profile, expected_payoffs, g1_spec, example_game
from .modelsearch import SearchBounds, check_validity, find_model, fuzz_axioms, schema_countermodel
from .prover import SCHEMAS, builtin_derivations, verify
from .semantics import Evaluator

SUITES = ("g1", "g2", "axioms", "proofs")


@dataclass
class ReproRecord:
    claim: str
    location: str
    formula: str
    profile: str
    expected: str
    actual: str

    @property
    def passed(self) -> bool:
        return self.expected == self.actual

    def to_dict(self) -> dict:
        return {**asdict(self), "pass": self.passed}

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        where = f" at {self.profile}" if self.profile else ""
        return (f"{status} {self.claim} [{self.location}] {self.formula}{where}: "
                f"expected {self.expected}, got {self.actual}")


def _sat(value: bool) -> str:
    return "SAT" if value else "UNSAT"


# (defender, attacker) expected payoffs for each strategy and target
G1_PAYOFFS = {
    ("75/25", "T1"): (Fraction(-72), Fraction(53)),
    ("75/25", "T2"): (Fraction(-101), Fraction(86)),
    ("50/50", "T1"): (Fraction(-116), Fraction(98)),
    ("50/50", "T2"): (Fraction(-74), Fraction(60)),
    ("25/75", "T1"): (Fraction(-160), Fraction(143)),
    ("25/75", "T2"): (Fraction(-47), Fraction(34)),
}


def g1_records() -> list[ReproRecord]:
    spec = g1_spec()
    out = []
    for (s, t), (dexp, aexp) in G1_PAYOFFS.items():
        dpay, apay = expected_payoffs(spec, s, t)
        out.append(ReproRecord(f"g1.payoff.defender.{s}.{t}", "G1 expected payoffs", "", f"({s},{t})",
                               str(dexp), str(dpay)))
        out.append(ReproRecord(f"g1.payoff.attacker.{s}.{t}", "G1 expected payoffs", "", f"({s},{t})",
                               str(aexp), str(apay)))
    g = example_game("G1")
    ev = Evaluator(g)
    claims = [
        ("g1.attacker_blamed_lt_98", "50_50", "T2", "A att_lt_98", True),
        ("g1.attacker_not_blamed_lt_143", "50_50", "T1", "!A att_lt_143", True),
        ("g1.defender_blamed_lt_m101", "25_75", "T1", "D def_lt_m101", True),
        ("g1.defender_blamed_lt_m101_displayed", "50_50", "T1", "D def_lt_m101", True),
        ("g1.defender_payoff_always_negative", "50_50", "T1", "N def_neg", True),
    ]
    for cid, d, a, text, expected in claims:
        out.append(ReproRecord(cid, "G1 blame claims", text, f"({d},{a})", _sat(expected),
                               _sat(ev.holds((d, a), parse(text)))))
    child = ev.extension(Var("def_lt_m101"))
    preventing = [d for d in g.defender_actions
                  if not any(Profile(d, a) in child for a in g.responses[d])]
    out.append(ReproRecord("g1.unique_preventing_action", "G1 blame claims", "D def_lt_m101", "",
                           "['75_25']", str(preventing)))
    return out


def g2_records() -> list[ReproRecord]:
    out = []
    for q_extra in (False, True):
        tag = "q(d1,a2)=" + ("T" if q_extra else "F")
        ev = Evaluator(example_game("G2", q_d1_a2=q_extra))
        claims = [
            ("g2.conjunction_fails_for_D", "G2 conjunction for D", "D(p & q) -> (D p | D q)",
             ("d1", "a1"), False),
            ("g2.no_blame_fails_for_D", "G2 no blame for D", "D(p -> D p)", ("d2", "a2"), True),
            ("g2.fairness_fails_for_A", "G2 fairness for A",
             "A p -> N(p -> A p)", ("d2", "a1"), False),
        ]
        for cid, loc, text, pr, expected in claims:
            out.append(ReproRecord(f"{cid}[{tag}]", loc, text, str(Profile(*pr)),
                                   _sat(expected), _sat(ev.holds(pr, parse(text)))))
        for pr in ev.game.profiles():
            out.append(ReproRecord(f"g2.aux_no_Dp_no_Dq[{tag}]", "G2 no D blame for atoms",
                                   "!D p & !D q", str(pr), "SAT",
                                   _sat(ev.holds(pr, parse("!D p & !D q")))))
    return out


def _depth2_fillers():
    p = Var("p")
    s1 = [p, Not(p), Implies(p, p), Necessary(p), AttackerBlame(p)]
    s2 = [p] + [op(x) for op in (Not, Necessary, AttackerBlame) for x in s1] \
        + [Implies(x, y) for x in s1 for y in s1]
    return list(dict.fromkeys(s2))


def axiom_records(n_cases: int = 10_000, seed: int = 2019) -> list[ReproRecord]:
    out = []
    report = fuzz_axioms(n_cases, seed)
    checks = list(SCHEMAS) + ["FairnessD", "DElimination", "RCollapse"]
    for check in checks:
        out.append(ReproRecord(f"fuzz.{check}", "axiom soundness fuzz", check, "",
                               "0 violations", f"{report.count(check)} violations"))
    b22 = SearchBounds(2, 2)
    for cid, text, loc in [
        ("search.fairness_A_countermodel", "A p -> N(p -> A p)", "fairness for A"),
        ("search.conjunction_D_countermodel", "D(p & q) -> (D p | D q)", "conjunction for D"),
    ]:
        v = check_validity(parse(text), b22)
        out.append(ReproRecord(cid, loc, text, str(v.profile) if v else "",
                               "countermodel", "countermodel" if v else "none"))
    m = find_model(parse("D(p -> D p)"), b22)
    out.append(ReproRecord("search.no_blame_D_model", "no blame for D", "D(p -> D p)",
                           str(m.profile) if m else "", "model", "model" if m else "none"))
    fillers = _depth2_fillers()
    b33 = SearchBounds(3, 3, variables=["p"])
    for name, template in SCHEMAS.items():
        v, _ = schema_countermodel(template, fillers, b33)
        out.append(ReproRecord(f"search.schema.{name}", "axiom schema search", name, "",
                               "none", "countermodel" if v else "none"))
    return out


def proof_records() -> list[ReproRecord]:
    out = []
    for name, proof in builtin_derivations().items():
        try:
            verify(proof)
            actual = "OK"
        except ValueError as exc:
            actual = f"FAIL {exc}"
        out.append(ReproRecord(f"proofs.{name}", "derived theorems",
                               str(proof.conclusion), "", "OK", actual))
    return out


def run(suite: str = "all") -> list[ReproRecord]:
    if suite == "all":
        return [r for s in SUITES for r in run(s)]
    fn = {"g1": g1_records, "g2": g2_records, "axioms": axiom_records,
          "proofs": proof_records}.get(suite)
    if fn is None:
        raise KeyError(f"unknown suite {suite!r}; expected one of {SUITES + ('all',)}")
    return fn()
