"""Rewriting of circuits modulo isotopy, with termination certificates from
current/heat interpretations."""
from .checker import (AffineExact, BoundedGrid, Overall, RuleVerdict, VerificationReport,
                      audit_heat_descent, check_polygraph, check_rule)
from .circuit import (Circuit, CircuitError, GeneratorDecl, Interface, Signature, Slice,
                      canonicalize, equals, from_generator, hcomp, identity, vcomp, whisker)
from .formats import PolyError, PolyFile, load_example, parse, parse_term, render, render_circuit
from .interpretation import (GeneratorInterpretation, HeatExpr, InterpretationAssignment,
                             eval_down, eval_heat, eval_up)
from .multiset import Multiset, Order, mcompare, msum
from .rewrite import (Occurrence, Polygraph, ReductionTrace, Rule, Status, apply_at,
                      find_matches, normalize, rewrite_once)

__all__ = [
    "AffineExact", "BoundedGrid", "Circuit", "CircuitError", "GeneratorDecl",
    "GeneratorInterpretation", "HeatExpr", "Interface", "InterpretationAssignment",
    "Multiset", "Occurrence", "Order", "Overall", "PolyError", "PolyFile", "Polygraph",
    "ReductionTrace", "Rule", "RuleVerdict", "Signature", "Slice", "Status",
    "VerificationReport", "apply_at", "audit_heat_descent", "canonicalize",
    "check_polygraph", "check_rule", "equals", "eval_down", "eval_heat", "eval_up",
    "find_matches", "from_generator", "hcomp", "identity", "load_example", "mcompare",
    "msum", "normalize", "parse", "parse_term", "render", "render_circuit", "rewrite_once",
    "vcomp", "whisker",
]
