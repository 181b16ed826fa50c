"""
Toupie: classifier and representation toolkit for toupie algebras

A toupie algebra is a bound quiver algebra whose quiver has a unique source 0,
a unique sink inf, and every other vertex on exactly one branch from 0 to inf.
The package:
1. Parses and validates presentations (branch lengths, monomial and combination relations)
2. Closes the ideal and catalogs the minimal relations between branches
3. Classifies the algebra as hereditary, tilted, quasitilted, weakly shod or laura
4. Builds witness modules and checks their homological contracts
5. Computes projective resolutions, Auslander-Reiten translates and corner algebras
"""

__version__ = "1.0.1"

from .classification_pipeline import (
    ClassificationResult, ClassifierConfig, ClassLabel, Evidence, FiredCase, ToupieClassifier, classify,
)
from .tools.quiver_model import ToupiePresentation, load_presentation, make_presentation, parse

__all__ = [
    "ClassificationResult",
    "ClassifierConfig",
    "ClassLabel",
    "Evidence",
    "FiredCase",
    "ToupieClassifier",
    "ToupiePresentation",
    "classify",
    "load_presentation",
    "make_presentation",
    "parse",
    "__version__",
]
