"""Classifying cue phrases as discourse or sentential uses.

Modules: ``schema`` (features and feature sets), ``corpus`` (files, subsets,
synthetic data), ``tones`` (intonation grammar), ``baselines`` (hand-built
models), ``tree`` and ``rules`` (the two learners), ``evaluator``
(error rates and cross-validation), ``cli``.
"""

from .schema import CATALOG, FEATURES, NA, Example, FeatureSet, Judge, Label, feature_set

__version__ = "0.1.0"

__all__ = ["CATALOG", "FEATURES", "NA", "Example", "FeatureSet", "Judge", "Label", "feature_set"]
