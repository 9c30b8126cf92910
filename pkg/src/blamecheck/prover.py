"""Hilbert-style proof checking for the N/A blameworthiness logic.

Axiom schemas (metavariables ``phi``, ``psi``)::

    Truth-N                 N phi -> phi
    Truth-A                 A phi -> phi
    NegativeIntrospection   !N phi -> N !N phi
    Distributivity          N(phi -> psi) -> (N phi -> N psi)
    Unavoidability          N phi -> !A phi
    StrictConditional       N(phi -> psi) -> (A psi -> (phi -> A phi))
    Conjunction             A(phi & psi) -> (A phi | A psi)
    NoBlame                 !A(phi -> A phi)

Rules: Modus Ponens and Necessitation.  Propositional tautologies (modal
subformulas treated as atoms) are admitted as ``taut`` lines.  A proof is in
theorem mode (plain provability) or hypothetical mode (extra hypotheses,
where Necessitation may not touch anything that depends on a hypothesis).
``thm`` lines cite a library theorem; any uniform substitution instance of
its conclusion may be cited.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .formula import (AttackerBlame, DefenderBlame, Formula, Implies, Necessary, Not, Var,
                      conj, disj, iff, parse, rbox, render)

__all__ = [
    "Meta", "SCHEMAS", "ProofError", "TautologyLimitError", "Step", "Proof",
    "match_axiom", "instantiate", "is_tautology", "tautology_atoms", "verify",
    "derive_superdistributivity", "r_necessitation", "builtin_derivations",
    "parse_proof", "render_proof", "curry",
]

MAX_TAUT_ATOMS = 20


class ProofError(ValueError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class TautologyLimitError(ValueError):
    pass


@dataclass(frozen=True, repr=False)
class Meta(Formula):
    """Schema metavariable; matches any formula."""

    name: str
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("Meta", self.name)))

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Meta({self.name!r})"


PHI, PSI = Meta("phi"), Meta("psi")
N, A = Necessary, AttackerBlame

SCHEMAS: dict[str, Formula] = {
    "Truth-N": Implies(N(PHI), PHI),
    "Truth-A": Implies(A(PHI), PHI),
    "NegativeIntrospection": Implies(Not(N(PHI)), N(Not(N(PHI)))),
    "Distributivity": Implies(N(Implies(PHI, PSI)), Implies(N(PHI), N(PSI))),
    "Unavoidability": Implies(N(PHI), Not(A(PHI))),
    "StrictConditional": Implies(N(Implies(PHI, PSI)),
                                 Implies(A(PSI), Implies(PHI, A(PHI)))),
    "Conjunction": Implies(A(conj(PHI, PSI)), disj(A(PHI), A(PSI))),
    "NoBlame": Not(A(Implies(PHI, A(PHI)))),
}


# -- matching ------------------------------------------------------------------

def _match(pattern: Formula, f: Formula, subst: dict) -> bool:
    if isinstance(pattern, Meta):
        bound = subst.get(pattern.name)
        if bound is None:
            subst[pattern.name] = f
            return True
        return bound == f
    if type(pattern) is not type(f):
        return False
    if isinstance(pattern, Var):
        return pattern == f
    return all(_match(p, c, subst) for p, c in zip(pattern.children, f.children))


def match(pattern: Formula, f: Formula) -> dict[str, Formula] | None:
    subst: dict[str, Formula] = {}
    return subst if _match(pattern, f, subst) else None


def instantiate(pattern: Formula, subst: Mapping[str, Formula]) -> Formula:
    if isinstance(pattern, Meta):
        return subst[pattern.name]
    if isinstance(pattern, Var):
        return pattern
    if isinstance(pattern, Implies):
        return Implies(instantiate(pattern.left, subst), instantiate(pattern.right, subst))
    return type(pattern)(instantiate(pattern.child, subst))


def _as_pattern(f: Formula) -> Formula:
    """Turn every variable of ``f`` into a metavariable of the same name."""
    if isinstance(f, Var):
        return Meta(f.name)
    if isinstance(f, Implies):
        return Implies(_as_pattern(f.left), _as_pattern(f.right))
    return type(f)(_as_pattern(f.child))


def _reject_D(f: Formula):
    if f.has_D():
        raise ValueError("formula contains D, which the proof system does not cover; "
                         "eliminate it with translate_D first")


def match_axiom(f: Formula) -> list[tuple[str, dict[str, Formula]]]:
    """All ``(schema name, substitution)`` pairs under which ``f`` is an axiom."""
    _reject_D(f)
    out = []
    for name, template in SCHEMAS.items():
        subst = match(template, f)
        if subst is not None:
            out.append((name, subst))
    return out


# -- tautologies ---------------------------------------------------------------

def tautology_atoms(f: Formula) -> list[Formula]:
    """Variables and maximal modal subformulas, in first-occurrence order."""
    atoms: dict[Formula, None] = {}
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, (Var, Necessary, AttackerBlame, Meta)):
            atoms.setdefault(node)
        elif isinstance(node, DefenderBlame):
            _reject_D(node)
        else:
            stack.extend(reversed(node.children))
    return list(atoms)


def _prop_value(f: Formula, val: Mapping[Formula, bool]) -> bool:
    if isinstance(f, Not):
        return not _prop_value(f.child, val)
    if isinstance(f, Implies):
        return (not _prop_value(f.left, val)) or _prop_value(f.right, val)
    return val[f]


def is_tautology(f: Formula) -> bool:
    """Truth-table check with modal subformulas as opaque atoms."""
    _reject_D(f)
    atoms = tautology_atoms(f)
    if len(atoms) > MAX_TAUT_ATOMS:
        raise TautologyLimitError(
            f"{len(atoms)} propositional atoms exceed the limit of {MAX_TAUT_ATOMS}")
    for bits in itertools.product((False, True), repeat=len(atoms)):
        if not _prop_value(f, dict(zip(atoms, bits))):
            return False
    return True


# -- proofs --------------------------------------------------------------------

RULES = ("axiom", "taut", "hyp", "mp", "nec", "thm")


@dataclass(frozen=True)
class Step:
    """One proof line.  ``args`` by rule: axiom -> (schema,), hyp -> (k,),
    mp -> (i, j) with line j being ``line_i -> formula``, nec -> (i,),
    thm -> (name,); line numbers are 1-based."""

    formula: Formula
    rule: str
    args: tuple = ()


@dataclass(frozen=True)
class Proof:
    steps: tuple[Step, ...]
    hypotheses: tuple[Formula, ...] = ()
    mode: str = "theorem"
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "hypotheses", tuple(self.hypotheses))

    @property
    def conclusion(self) -> Formula:
        return self.steps[-1].formula

    def __len__(self):
        return len(self.steps)


def verify(proof: Proof, library: Mapping[str, Formula] | None = None) -> Formula:
    """Check every line of ``proof`` and return its conclusion (the last line).

    ``library`` maps theorem names to conclusions that ``thm`` lines may cite;
    by default the bundled derivations.  Raises ``ProofError`` at the first
    bad line (line 0 for problems with the proof header).
    """
    if library is None:
        library = builtin_library()
    if proof.mode not in ("theorem", "hypothetical"):
        raise ProofError(0, f"unknown mode {proof.mode!r}")
    if proof.mode == "theorem" and proof.hypotheses:
        raise ProofError(0, "theorem-mode proofs take no hypotheses")
    if not proof.steps:
        raise ProofError(0, "empty proof")
    for h in proof.hypotheses:
        if h.has_D():
            raise ProofError(0, "hypothesis contains D; eliminate it with translate_D first")

    uses_hyp: list[bool] = []
    for k, step in enumerate(proof.steps, start=1):
        f = step.formula

        def ref(i) -> int:
            if not isinstance(i, int) or not 1 <= i < k:
                raise ProofError(k, f"reference {i!r} does not point to an earlier line")
            return i

        if f.has_D():
            raise ProofError(k, "formula contains D; eliminate it with translate_D first")
        rule, args = step.rule, tuple(step.args)
        dep = False
        if rule == "axiom":
            if len(args) != 1 or args[0] not in SCHEMAS:
                raise ProofError(k, f"unknown axiom schema {args!r}")
            if match(SCHEMAS[args[0]], f) is None:
                raise ProofError(k, f"not an instance of {args[0]}")
        elif rule == "taut":
            try:
                ok = is_tautology(f)
            except TautologyLimitError as exc:
                raise ProofError(k, str(exc)) from None
            if not ok:
                raise ProofError(k, "not a propositional tautology")
        elif rule == "hyp":
            if proof.mode != "hypothetical":
                raise ProofError(k, "hypotheses are only available in hypothetical mode")
            if len(args) != 1 or not isinstance(args[0], int) \
                    or not 1 <= args[0] <= len(proof.hypotheses):
                raise ProofError(k, f"no hypothesis {args!r}")
            if proof.hypotheses[args[0] - 1] != f:
                raise ProofError(k, f"formula differs from hypothesis {args[0]}")
            dep = True
        elif rule == "mp":
            if len(args) != 2:
                raise ProofError(k, "mp needs two line references")
            i, j = ref(args[0]), ref(args[1])
            if proof.steps[j - 1].formula != Implies(proof.steps[i - 1].formula, f):
                raise ProofError(k, f"line {j} is not 'line {i} -> this line'")
            dep = uses_hyp[i - 1] or uses_hyp[j - 1]
        elif rule == "nec":
            if len(args) != 1:
                raise ProofError(k, "nec needs one line reference")
            i = ref(args[0])
            if f != Necessary(proof.steps[i - 1].formula):
                raise ProofError(k, f"not N applied to line {i}")
            if uses_hyp[i - 1]:
                raise ProofError(k, f"necessitation of line {i}, which depends on a hypothesis")
        elif rule == "thm":
            if len(args) != 1 or args[0] not in library:
                raise ProofError(k, f"unknown theorem {args!r}")
            if match(_as_pattern(library[args[0]]), f) is None:
                raise ProofError(k, f"not a substitution instance of theorem {args[0]}")
        else:
            raise ProofError(k, f"unknown rule {rule!r}")
        uses_hyp.append(dep)
    return proof.conclusion


# -- building derivations ------------------------------------------------------

class _Builder:
    """Appends lines and computes MP / Nec results so derivations stay short."""

    def __init__(self):
        self.steps: list[Step] = []

    def _add(self, f, rule, *args) -> int:
        self.steps.append(Step(f, rule, args))
        return len(self.steps)

    def f(self, line: int) -> Formula:
        return self.steps[line - 1].formula

    def axiom(self, schema: str, **subst) -> int:
        return self._add(instantiate(SCHEMAS[schema], subst), "axiom", schema)

    def taut(self, f) -> int:
        return self._add(f, "taut")

    def thm(self, name: str, f) -> int:
        return self._add(f, "thm", name)

    def hyp(self, k: int, f) -> int:
        return self._add(f, "hyp", k)

    def mp(self, i: int, j: int) -> int:
        imp = self.f(j)
        assert isinstance(imp, Implies) and imp.left == self.f(i), (i, j)
        return self._add(imp.right, "mp", i, j)

    def nec(self, i: int) -> int:
        return self._add(Necessary(self.f(i)), "nec", i)

    def prop(self, goal: Formula, *lines: int) -> int:
        """``goal`` from earlier lines by propositional reasoning: one tautology
        ``l1 -> (l2 -> ... -> goal)`` followed by Modus Ponens steps."""
        t = self.taut(curry([self.f(i) for i in lines], goal))
        for i in lines:
            t = self.mp(i, t)
        return t

    def embed(self, proof: Proof) -> int:
        """Copy a theorem-mode proof, renumbering references."""
        off = len(self.steps)
        for s in proof.steps:
            args = tuple(a + off for a in s.args) if s.rule in ("mp", "nec") else s.args
            self.steps.append(Step(s.formula, s.rule, args))
        return len(self.steps)

    def proof(self, name="", mode="theorem", hypotheses=()) -> Proof:
        return Proof(tuple(self.steps), tuple(hypotheses), mode, name)


def curry(premises: Sequence[Formula], conclusion: Formula) -> Formula:
    """``p1 -> (p2 -> ... (pn -> conclusion))``."""
    out = conclusion
    for p in reversed(premises):
        out = Implies(p, out)
    return out


def _n_to_r(phi) -> Proof:
    b = _Builder()
    l1 = b.axiom("Unavoidability", phi=phi)
    l2 = b.axiom("Truth-N", phi=phi)
    l3 = b.prop(Implies(N(phi), conj(phi, Not(A(phi)))), l1, l2)
    b.prop(Implies(N(phi), rbox(phi)), l3)
    return b.proof("N_to_R")


def _r_truth(phi) -> Proof:
    b = _Builder()
    b.taut(Implies(rbox(phi), phi))
    return b.proof("R_truth")


def _r_k(phi, psi) -> Proof:
    chi = Implies(phi, psi)
    both = conj(chi, phi)
    Rchi, Rphi = rbox(chi), rbox(phi)
    b = _Builder()
    l1 = b.taut(curry([Rchi, Rphi], conj(Not(A(chi)), Not(A(phi)))))
    l2 = b.axiom("Conjunction", phi=chi, psi=phi)
    l3 = b.prop(Implies(conj(Not(A(chi)), Not(A(phi))), Not(A(both))), l2)
    alpha = b.prop(curry([Rchi, Rphi], Not(A(both))), l1, l3)
    l5 = b.taut(Implies(both, psi))
    l6 = b.nec(l5)
    l7 = b.axiom("StrictConditional", phi=both, psi=psi)
    l8 = b.mp(l6, l7)
    l9 = b.prop(Implies(Not(A(both)), Implies(both, Not(A(psi)))), l8)
    beta = b.prop(curry([Rchi, Rphi], Implies(both, Not(A(psi)))), alpha, l9)
    gamma = b.taut(curry([Rchi, Rphi], both))
    delta = b.prop(curry([Rchi, Rphi], Not(A(psi))), gamma, beta)
    l13 = b.prop(curry([Rchi, Rphi], psi), gamma)
    l14 = b.prop(curry([Rchi, Rphi], conj(psi, Not(A(psi)))), l13, delta)
    b.prop(curry([Rchi, Rphi], rbox(psi)), l14)
    return b.proof("R_K")


def biconditional_rule(phi, psi, iff_proof: Proof | None = None, name="biconditional") -> Proof:
    """From a theorem-mode proof of ``phi <-> psi`` derive ``A phi -> A psi``.

    Without ``iff_proof`` the biconditional must be a tautology and is
    admitted as a single ``taut`` line.
    """
    b = _Builder()
    if iff_proof is None:
        bic = b.taut(iff(phi, psi))
    else:
        if verify(iff_proof) != iff(phi, psi) or iff_proof.mode != "theorem":
            raise ValueError("iff_proof must be a theorem-mode proof of phi <-> psi")
        bic = b.embed(iff_proof)
    sc = b.axiom("StrictConditional", phi=psi, psi=phi)
    back = b.prop(Implies(psi, phi), bic)
    nec = b.nec(back)
    l5 = b.mp(nec, sc)
    sofia = b.prop(Implies(Implies(A(phi), psi), Implies(A(phi), A(psi))), l5)
    truth = b.axiom("Truth-A", phi=phi)
    l8 = b.prop(Implies(A(phi), psi), truth, bic)
    b.mp(l8, sofia)
    return b.proof(name)


def _neg_intro_r(phi) -> Proof:
    x = Implies(phi, A(phi))
    nnx = Not(Not(x))
    b = _Builder()
    l1 = b.thm("biconditional", Implies(A(nnx), A(x)))
    l2 = b.prop(Implies(Not(A(x)), Not(A(nnx))), l1)
    l3 = b.axiom("NoBlame", phi=phi)
    l4 = b.mp(l3, l2)
    l5 = b.prop(Implies(x, Not(Implies(x, A(nnx)))), l4)
    # !R phi is literally !!x, so the target is !R phi -> R !R phi
    b.prop(Implies(nnx, Not(Implies(nnx, A(nnx)))), l5)
    return b.proof("neg_intro_R")


def _pos_intro_n(phi) -> Proof:
    nphi = N(phi)
    b = _Builder()
    l1 = b.axiom("Truth-N", phi=Not(nphi))
    l2 = b.prop(Implies(nphi, Not(N(Not(nphi)))), l1)
    l3 = b.axiom("NegativeIntrospection", phi=Not(nphi))
    eq2 = b.prop(Implies(nphi, N(Not(N(Not(nphi))))), l2, l3)
    l5 = b.axiom("NegativeIntrospection", phi=phi)
    l6 = b.prop(Implies(Not(N(Not(nphi))), nphi), l5)
    l7 = b.nec(l6)
    l8 = b.axiom("Distributivity", phi=Not(N(Not(nphi))), psi=nphi)
    l9 = b.mp(l7, l8)
    b.prop(Implies(nphi, N(nphi)), eq2, l9)
    return b.proof("pos_intro_N")


def _r_nec_steps(b: _Builder, line: int) -> int:
    """Derived rule phi / R phi: Necessitation, then N_to_R and Modus Ponens."""
    phi = b.f(line)
    l1 = b.nec(line)
    l2 = b.thm("N_to_R", Implies(N(phi), rbox(phi)))
    return b.mp(l1, l2)


def _pos_intro_r(phi) -> Proof:
    R = rbox
    rphi = R(phi)
    b = _Builder()
    l1 = b.thm("R_truth", Implies(R(Not(rphi)), Not(rphi)))
    l2 = b.prop(Implies(rphi, Not(R(Not(rphi)))), l1)
    l3 = b.thm("neg_intro_R", Implies(Not(R(Not(rphi))), R(Not(R(Not(rphi))))))
    eq2 = b.prop(Implies(rphi, R(Not(R(Not(rphi))))), l2, l3)
    l5 = b.thm("neg_intro_R", Implies(Not(rphi), R(Not(rphi))))
    l6 = b.prop(Implies(Not(R(Not(rphi))), rphi), l5)
    l7 = _r_nec_steps(b, l6)
    l8 = b.thm("R_K", Implies(b.f(l7), Implies(R(Not(R(Not(rphi)))), R(rphi))))
    l9 = b.mp(l7, l8)
    b.prop(Implies(rphi, R(rphi)), eq2, l9)
    return b.proof("pos_intro_R")


def r_necessitation(proof: Proof) -> Proof:
    """Extend a theorem-mode proof of ``phi`` to a proof of ``R phi``."""
    if proof.mode != "theorem":
        raise ValueError("R-necessitation applies to theorem-mode proofs only")
    verify(proof)
    b = _Builder()
    b.embed(proof)
    _r_nec_steps(b, len(b.steps))
    return b.proof(proof.name + "_R" if proof.name else "")


def derive_superdistributivity(box: str, premises: Sequence[Formula], conclusion: Formula,
                               chain: Proof) -> Proof:
    """From ``|- p1 -> (... -> (pn -> c))`` build ``box p1, ..., box pn |- box c``.

    ``box`` is ``"N"`` or ``"R"``.  The chain is necessitated (for R via the
    derived rule) while it is still hypothesis-free, then each premise is
    discharged with Distributivity (for R the ``R_K`` theorem) and Modus Ponens.
    """
    if box not in ("N", "R"):
        raise ValueError(f"box must be 'N' or 'R', got {box!r}")
    if chain.mode != "theorem":
        raise ValueError("chain must be a theorem-mode proof")
    target = curry(premises, conclusion)
    try:
        got = verify(chain)
    except ProofError as exc:
        raise ValueError(f"chain does not verify: {exc}") from None
    if got != target:
        raise ValueError(f"chain proves {render(got)}, expected {render(target)}")
    wrap = Necessary if box == "N" else rbox
    b = _Builder()
    cur = b.embed(chain)
    cur = b.nec(cur) if box == "N" else _r_nec_steps(b, cur)
    for k, p in enumerate(premises, start=1):
        rest = curry(premises[k:], conclusion)
        if box == "N":
            dist = b.axiom("Distributivity", phi=p, psi=rest)
        else:
            dist = b.thm("R_K", Implies(rbox(Implies(p, rest)), Implies(rbox(p), rbox(rest))))
        cur = b.mp(cur, dist)
        h = b.hyp(k, wrap(p))
        cur = b.mp(h, cur)
    return b.proof(f"superdistributivity_{box}", "hypothetical", [wrap(p) for p in premises])


# -- library -------------------------------------------------------------------

@lru_cache(maxsize=1)
def _library() -> tuple[tuple[str, Proof], ...]:
    p, q = Var("p"), Var("q")
    out: dict[str, Proof] = {}
    lib: dict[str, Formula] = {}

    def add(proof: Proof):
        lib[proof.name] = verify(proof, lib)
        out[proof.name] = proof

    add(biconditional_rule(Not(Not(p)), p))
    add(_n_to_r(p))
    b = _Builder()
    b.taut(Implies(p, p))
    _r_nec_steps(b, 1)
    add(b.proof("R_necessitation"))
    add(_r_truth(p))
    add(_r_k(p, q))
    add(_neg_intro_r(p))
    add(_pos_intro_n(p))
    add(_pos_intro_r(p))
    return tuple(out.items())


def builtin_derivations() -> dict[str, Proof]:
    """The bundled derivations, each verified, instantiated at ``p`` (and ``q``)."""
    return dict(_library())


def builtin_library() -> dict[str, Formula]:
    """Theorem name -> conclusion, for ``thm`` citations."""
    return {name: proof.conclusion for name, proof in _library()}


# -- proof files ---------------------------------------------------------------

_LINE_RE = re.compile(r"^\s*(\d+)\s*:\s*(.*)$")


def render_proof(proof: Proof) -> str:
    out = [f"mode: {proof.mode}"]
    if proof.name:
        out.insert(0, f"# {proof.name}")
    out += [f"hyp: {render(h)}" for h in proof.hypotheses]
    for k, s in enumerate(proof.steps, start=1):
        just = " ".join([s.rule, *map(str, s.args)])
        out.append(f"{k}: {render(s.formula)} | {just}")
    return "\n".join(out) + "\n"


def parse_proof(text: str, name: str = "") -> Proof:
    """Read the line-oriented proof format; raises ``ProofError`` with the
    offending file line on malformed input."""
    mode = "theorem"
    hyps: list[Formula] = []
    steps: list[Step] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("mode:"):
                mode = line[5:].strip()
                continue
            if line.startswith("hyp:"):
                hyps.append(parse(line[4:]))
                continue
            m = _LINE_RE.match(line)
            if not m or "|" not in m.group(2):
                raise ValueError("expected '<n>: <formula> | <justification>'")
            num = int(m.group(1))
            if num != len(steps) + 1:
                raise ValueError(f"line number {num} out of sequence, expected {len(steps) + 1}")
            ftext, just = m.group(2).rsplit("|", 1)
            words = just.split()
            if not words or words[0] not in RULES:
                raise ValueError(f"unknown justification {just.strip()!r}")
            rule, rest = words[0], words[1:]
            if rule in ("hyp", "mp", "nec"):
                args = tuple(int(w) for w in rest)
            else:
                args = tuple(rest)
            steps.append(Step(parse(ftext), rule, args))
        except ValueError as exc:
            if isinstance(exc, ProofError):
                raise
            raise ProofError(len(steps) + 1, f"file line {lineno}: {exc}") from None
    return Proof(tuple(steps), tuple(hyps), mode, name)

