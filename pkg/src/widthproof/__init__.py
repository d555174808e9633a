"""Width-parameterized model checking and conjecture proving over instructive tree decompositions."""

from .terms import RankedSymbol, Term, TreeAutomaton, accepts as automaton_accepts, enumerate_terms, format_term, parse_term, run
from .graphs import BoundariedGraph, Multigraph, canonical_form, isomorphic, join
from .itd import (
    ActiveSetAutomaton,
    ExtractionResult,
    InstructiveAlphabet,
    NiceTreeDecomposition,
    extract,
    from_nice_decomposition,
    is_path_decomposition,
    validate,
    width,
)
from .dpcore import DPCore, WitnessSet, accepts, dynamize, measure_complexity, model_check, step

__all__ = [
    "RankedSymbol", "Term", "TreeAutomaton", "automaton_accepts", "enumerate_terms", "format_term",
    "parse_term", "run", "BoundariedGraph", "Multigraph", "canonical_form", "isomorphic", "join",
    "ActiveSetAutomaton", "ExtractionResult", "InstructiveAlphabet", "NiceTreeDecomposition", "extract",
    "from_nice_decomposition", "is_path_decomposition", "validate", "width", "DPCore", "WitnessSet",
    "accepts", "dynamize", "measure_complexity", "model_check", "step",
]
