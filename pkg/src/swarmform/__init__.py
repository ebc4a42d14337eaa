"""Probabilistic arbitrary pattern formation for oblivious robots under ASYNC."""
from .geometry import Tolerance, smallest_enclosing_circle, weber_point, similar
from .pattern import GatheringExcluded, preprocess_pattern
from .protocol import classify_phase, compute
from .simulator import Policy, run, draw_bit, check_termination

__all__ = ["Tolerance", "smallest_enclosing_circle", "weber_point", "similar", "GatheringExcluded",
           "preprocess_pattern", "classify_phase", "compute", "Policy", "run", "draw_bit",
           "check_termination"]
