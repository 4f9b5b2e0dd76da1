"""Decomposition engine for finitely presented multiparameter persistence modules.

Given a graded presentation matrix over a prime field F_q, compute its
direct-sum decomposition into indecomposable summands, certified by tracked
invertible graded transformations.
"""

from .fields import FieldConfig
from .grading import GradedMatrix, TransformPair, leq, join, minimize, sort_and_batch
from .sccio import parse_scc2020, write_scc2020
from .decomposer import decompose, DecompositionReport

__all__ = [
    "FieldConfig",
    "GradedMatrix",
    "TransformPair",
    "leq",
    "join",
    "minimize",
    "sort_and_batch",
    "parse_scc2020",
    "write_scc2020",
    "decompose",
    "DecompositionReport",
]

__version__ = "0.1.0"
