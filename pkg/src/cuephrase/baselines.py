"""The hand-built classifiers used as benchmarks.

``prosodic_model`` and ``textual_model`` are the two decision-list models
built manually from earlier studies; ``majority_model`` always predicts
the most frequent class. Each returns the prediction together with the
line of the model that fired, numbered as in the original listing.
"""

from typing import Callable, NamedTuple

from .schema import NA, Example, Label

LINES = ("1", "4", "5", "6", "7", "8", "9", "10", "majority", "fallback")

_PROSODIC_FIRST_POSITION = {
    "deaccented": (Label.DISCOURSE, "4"),
    "L*": (Label.DISCOURSE, "5"),
    "H*": (Label.SENTENTIAL, "6"),
    "L*+H": (Label.SENTENTIAL, "7"),
    "L+H*": (Label.SENTENTIAL, "7"),
    "H*+L": (Label.SENTENTIAL, "7"),
    "H+L*": (Label.SENTENTIAL, "7"),
    # not covered by the original model; majority class
    "ambiguous": (Label.SENTENTIAL, "fallback"),
}


class Prediction(NamedTuple):
    label: Label
    line: str


def prosodic_model(example: Example) -> Prediction:
    """Composition, position and accent of the intermediate phrase."""
    if example["I-C"] in ("only", "only_cue"):
        return Prediction(Label.DISCOURSE, "1")
    if example["I-P"] == 1:
        return Prediction(*_PROSODIC_FIRST_POSITION[example["A"]])
    return Prediction(Label.SENTENTIAL, "8")


def textual_model(example: Example) -> Prediction:
    """Preceding orthography; untranscribed tokens count as discourse."""
    orth = example["O-P*"]
    if orth is NA:
        return Prediction(Label.DISCOURSE, "fallback")
    if orth == "true":
        return Prediction(Label.DISCOURSE, "9")
    return Prediction(Label.SENTENTIAL, "10")


def majority_model(example: Example) -> Prediction:
    return Prediction(Label.SENTENTIAL, "majority")


MODELS = {
    "prosodic": prosodic_model,
    "textual": textual_model,
    "majority": majority_model,
}


def classifier(name: str) -> Callable[[Example], Label]:
    """Wrap a baseline as a plain example -> label function."""
    model = MODELS[name]

    def classify(example):
        return model(example).label

    classify.__name__ = f"{name}_classifier"
    return classify
