"""Blameworthiness in two-player security games: model checking, bounded
countermodel search and Hilbert-proof verification."""
from .formula import (AttackerBlame, DefenderBlame, Formula, Implies, Necessary, Not, Var,
                      parse, render, subformulas, translate_D)
from .game import (PayoffSpec, Profile, SecurityGame, build_game, expected_payoffs,
                   example_game, g1_spec, validate)
from .modelsearch import SearchBounds, check_validity, find_model, fuzz_axioms, random_game
from .prover import (Proof, ProofError, Step, builtin_derivations, derive_superdistributivity,
                     is_tautology, match_axiom, parse_proof, render_proof, verify)
from .semantics import Evaluator, explain, extension, holds, r_holds

__version__ = "0.1.0"
