"""Exact laws of the running maximum and position of the symmetric
telegraph process, with a Monte Carlo simulator and verification harness."""
from .conditional import Atom
from .laws import LawSelector, MixedLaw, resolve
from .paths import ProcessParams, SamplePath, sample_path, sample_path_conditional

__all__ = ["Atom", "LawSelector", "MixedLaw", "ProcessParams", "SamplePath",
           "resolve", "sample_path", "sample_path_conditional"]
__version__ = "0.1.0"
