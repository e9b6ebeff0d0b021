"""Weighted Lorentz spaces: rearrangements, Boyd-type indices, weight-class
certifications, extremal constructions, and exact operator evaluation."""

from .intervals import Interval, IntervalUnion, normalize
from .rearrangement import DecreasingStep, StepFunction, indicator, make_step
from .weights import ClassVerdict, WeightModel

__all__ = [
    "Interval",
    "IntervalUnion",
    "normalize",
    "DecreasingStep",
    "StepFunction",
    "indicator",
    "make_step",
    "ClassVerdict",
    "WeightModel",
]

__version__ = "0.1.0"
