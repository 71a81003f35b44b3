"""
Positive-unlabeled learning via semi-supervised metric-based fuzzy
clustering, with classic PU baselines and a cross-validation experiment
harness.
"""
from . import baselines, classifiers, dataset, evaluation, pipeline, smuc

__all__ = ["baselines", "classifiers", "dataset", "evaluation", "pipeline", "smuc"]
__version__ = "0.1.0"
