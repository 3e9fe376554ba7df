"""Builders shared by the test modules."""

from cuephrase.corpus import Corpus
from cuephrase.schema import Label, make_example

BASE_VALUES = {
    "P-L": 5, "P-P": 2, "I-L": 3, "I-P": 1, "I-C": "other", "A": "H*",
    "C-P": "false", "C-S": "false", "O-P": "false", "O-S": "false",
    "POS": "adverb", "T": "now",
}


def example(label=None, **overrides):
    """A full example; keyword names use underscores for dashes (I_P=2)."""
    values = dict(BASE_VALUES)
    for key, value in overrides.items():
        values[key.replace("_star", "*").replace("_", "-")] = value
    return make_example(values, label=label)


def corpus_of(rows):
    """rows: iterable of (overrides dict, label)."""
    return Corpus([example(Label(lab), **ov) for ov, lab in rows])
