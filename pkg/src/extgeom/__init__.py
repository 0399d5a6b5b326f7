"""Lie-algebra extensions of vector-field algebras on a bundle chart."""
from .expr import Chart, Expr, parse, render, differentiate, evaluate, evaluate_many, is_zero, sample_points
from .report import ResidualReport
from .algebra import StructureConstants, GroupPreset, preset, check_structure_constants

__version__ = "0.1.0"
