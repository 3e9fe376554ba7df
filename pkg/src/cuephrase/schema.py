"""Feature universe for cue phrase tokens.

Fourteen prosodic and textual features plus the lexical feature ``T``.
Values are plain Python objects: ``int`` for the four numeric features,
``str`` tags for the symbolic ones, and the :data:`NA` singleton for
"not applicable" on textual features.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from .errors import (
    AbstractionError,
    EmptyFeatureSet,
    MissingFeature,
    NaNotAllowed,
    NonPositive,
    NumericExpected,
    UnknownTag,
)


class _NAType:
    """Singleton for the "not applicable" value of textual features."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NA"

    __str__ = __repr__

    def __reduce__(self):
        return (_NAType, ())


NA = _NAType()

Value = Union[int, str, _NAType]


class Label(str, enum.Enum):
    """Combined classification of a token. Declaration order is the tie-break order."""

    DISCOURSE = "discourse"
    SENTENTIAL = "sentential"

    def __str__(self):
        return self.value

    @property
    def other(self) -> "Label":
        return Label.SENTENTIAL if self is Label.DISCOURSE else Label.DISCOURSE


class Judge(str, enum.Enum):
    DISCOURSE = "discourse"
    SENTENTIAL = "sentential"
    AMBIGUOUS = "ambiguous"

    def __str__(self):
        return self.value


LABELS = (Label.DISCOURSE, Label.SENTENTIAL)

# Listing order doubles as the learners' tie-break order.
FEATURES = (
    "P-L", "P-P", "I-L", "I-P", "I-C", "A", "A*",
    "C-P", "C-S", "O-P", "O-P*", "O-S", "O-S*", "POS", "T",
)
BASE_FEATURES = FEATURES[:-1]
FEATURE_INDEX = {f: i for i, f in enumerate(FEATURES)}

NUMERIC = frozenset({"P-L", "P-P", "I-L", "I-P"})
PROSODIC = ("P-L", "P-P", "I-L", "I-P", "I-C", "A", "A*")
TEXTUAL = ("C-P", "C-S", "O-P", "O-P*", "O-S", "O-S*", "POS")
NA_ALLOWED = frozenset(TEXTUAL)

CSV_NAMES = {
    "P-L": "p_len",
    "P-P": "p_pos",
    "I-L": "i_len",
    "I-P": "i_pos",
    "I-C": "i_comp",
    "A": "accent",
    "A*": "accent_abs",
    "C-P": "cue_prec",
    "C-S": "cue_succ",
    "O-P": "orth_prec",
    "O-P*": "orth_prec_abs",
    "O-S": "orth_succ",
    "O-S*": "orth_succ_abs",
    "POS": "pos",
    "T": "token",
}
BY_CSV_NAME = {v: k for k, v in CSV_NAMES.items()}

DESCRIPTIONS = {
    "P-L": "length of intonational phrase",
    "P-P": "position in intonational phrase",
    "I-L": "length of intermediate phrase",
    "I-P": "position in intermediate phrase",
    "I-C": "composition of intermediate phrase",
    "A": "accent",
    "A*": "accent*",
    "C-P": "preceding cue phrase",
    "C-S": "succeeding cue phrase",
    "O-P": "preceding orthography",
    "O-P*": "preceding orthography*",
    "O-S": "succeeding orthography",
    "O-S*": "succeeding orthography*",
    "POS": "part-of-speech",
    "T": "token",
}

ACCENTS = ("H*", "L*", "L*+H", "L+H*", "H*+L", "H+L*", "deaccented", "ambiguous")
COMPLEX_ACCENTS = frozenset({"L*+H", "L+H*", "H*+L", "H+L*"})
BOOL_TAGS = ("true", "false")

POS_TAGS = (
    "article",
    "coordinating_conjunction",
    "cardinal_numeral",
    "subordinating_conjunction",
    "preposition",
    "adjective",
    "singular_or_mass_noun",
    "singular_proper_noun",
    "intensifier",
    "adverb",
    "verb_base_form",
)

TOKENS = (
    "actually", "also", "although", "and", "basically", "because", "but",
    "essentially", "except", "finally", "first", "further", "generally",
    "however", "indeed", "like", "look", "next", "no", "now", "ok", "or",
    "otherwise", "right", "say", "second", "see", "similarly", "since", "so",
    "then", "therefore", "well", "yes",
)

CONJUNCTS = frozenset({"and", "or", "but"})

# Symbolic vocabularies, NA excluded (NA_ALLOWED says where it may appear).
VOCABULARY = {
    "I-C": ("only", "only_cue", "other"),
    "A": ACCENTS,
    "A*": ("H*", "L*", "complex", "deaccented", "ambiguous"),
    "C-P": BOOL_TAGS,
    "C-S": BOOL_TAGS,
    "O-P": ("comma", "dash", "period", "paragraph", "false"),
    "O-P*": BOOL_TAGS,
    "O-S": ("comma", "dash", "period", "false"),
    "O-S*": BOOL_TAGS,
    "POS": POS_TAGS,
    "T": TOKENS,
}

# Non-canonical spellings accepted on input.
ALIASES = {
    "t": "true",
    "f": "false",
    "par.": "paragraph",
    "deaccent": "deaccented",
}


def feature_values(feature: str) -> tuple:
    """Symbolic values of ``feature`` in declaration order, NA last when allowed."""
    vocab = VOCABULARY[feature]
    return vocab + (NA,) if feature in NA_ALLOWED else vocab


def value_order(feature: str, value: Value) -> int:
    """Sort key placing symbolic values in declaration order (NA last)."""
    if feature in NUMERIC:
        return value
    return feature_values(feature).index(value)


def check_feature(feature: str) -> str:
    if feature not in FEATURE_INDEX:
        raise UnknownTag(f"unknown feature {feature!r}")
    return feature


def parse_feature(name: str) -> str:
    """Accept either a feature id (``P-P``) or its CSV column name (``p_pos``)."""
    if name in FEATURE_INDEX:
        return name
    if name in BY_CSV_NAME:
        return BY_CSV_NAME[name]
    raise UnknownTag(f"unknown feature {name!r}")


def parse_value(feature: str, text: str) -> Value:
    """Parse one value token for ``feature``.

    >>> parse_value("A", "H*+L")
    'H*+L'
    >>> parse_value("P-L", "9")
    9
    """
    check_feature(feature)
    text = text.strip()
    if not text:
        raise UnknownTag(f"empty value for {feature}")
    if text == "NA":
        if feature not in NA_ALLOWED:
            raise NaNotAllowed(f"NA is not allowed for {feature}")
        return NA
    if feature in NUMERIC:
        try:
            n = int(text)
        except ValueError:
            raise NumericExpected(f"{feature} expects an integer, got {text!r}") from None
        if n < 1:
            raise NonPositive(f"{feature} must be >= 1, got {n}")
        return n
    tag = ALIASES.get(text, text)
    if tag not in VOCABULARY[feature]:
        raise UnknownTag(f"{text!r} is not a value of {feature}")
    return tag


def check_value(feature: str, value: Value) -> Value:
    """Validate an already-typed value; returns it unchanged."""
    check_feature(feature)
    if value is NA:
        if feature not in NA_ALLOWED:
            raise NaNotAllowed(f"NA is not allowed for {feature}")
        return value
    if feature in NUMERIC:
        if isinstance(value, bool) or not isinstance(value, int):
            raise NumericExpected(f"{feature} expects an integer, got {value!r}")
        if value < 1:
            raise NonPositive(f"{feature} must be >= 1, got {value}")
        return value
    if value not in VOCABULARY[feature]:
        raise UnknownTag(f"{value!r} is not a value of {feature}")
    return value


def render_value(value: Value) -> str:
    return str(value)


def abstract_accent(accent: str) -> str:
    """Collapse the four bitonal accents into ``complex``."""
    if accent in COMPLEX_ACCENTS:
        return "complex"
    if accent not in ACCENTS and accent not in VOCABULARY["A*"]:
        raise UnknownTag(f"{accent!r} is not an accent")
    return accent


def abstract_orthography(value: Value) -> Value:
    """Any punctuation or paragraph boundary becomes ``true``."""
    if value is NA or value in BOOL_TAGS:
        return value
    if value in VOCABULARY["O-P"]:
        return "true"
    raise UnknownTag(f"{value!r} is not an orthography value")


def combine_judgments(j1: Judge, j2: Judge) -> Optional[Label]:
    """Both judges must agree on discourse or sentential; otherwise None."""
    j1, j2 = Judge(j1), Judge(j2)
    if j1 is j2 and j1 is not Judge.AMBIGUOUS:
        return Label(j1.value)
    return None


@dataclass(frozen=True)
class Example:
    """One cue phrase token.

    ``values`` maps feature ids to values. A labeled example has ``label``;
    an example straight from annotation carries ``judges`` instead.
    """

    values: Mapping[str, Value]
    label: Optional[Label] = None
    judges: Optional[tuple] = None

    def __getitem__(self, feature):
        try:
            return self.values[feature]
        except KeyError:
            raise MissingFeature(feature) from None

    def features(self):
        return tuple(self.values)

    def unlabeled(self) -> "Example":
        return Example(dict(self.values))

    def with_label(self, label: Optional[Label]) -> "Example":
        return Example(dict(self.values), label=label, judges=self.judges)


def make_example(values: Mapping[str, Value], label=None, judges=None) -> Example:
    """Build a full 15-feature example, deriving the starred features.

    Any starred value supplied must agree with its base feature.
    """
    vals = {}
    for f in FEATURES:
        if f in ("A*", "O-P*", "O-S*"):
            continue
        if f not in values:
            raise MissingFeature(f)
        vals[f] = check_value(f, values[f])
    derived = {
        "A*": abstract_accent(vals["A"]),
        "O-P*": abstract_orthography(vals["O-P"]),
        "O-S*": abstract_orthography(vals["O-S"]),
    }
    for f, v in derived.items():
        if f in values and values[f] != v:
            raise AbstractionError(
                f"{f}={values[f]} contradicts its base feature (expected {v})"
            )
        vals[f] = v
    ordered = {f: vals[f] for f in FEATURES}
    if label is not None:
        label = Label(label)
    return Example(ordered, label=label, judges=judges)


@dataclass(frozen=True)
class FeatureSet:
    name: str
    members: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not self.members:
            raise EmptyFeatureSet(f"feature set {self.name!r} is empty")
        for f in self.members:
            check_feature(f)
        if len(set(self.members)) != len(self.members):
            raise EmptyFeatureSet(f"feature set {self.name!r} has duplicate members")
        ordered = tuple(sorted(self.members, key=FEATURE_INDEX.__getitem__))
        object.__setattr__(self, "members", ordered)

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, feature):
        return feature in self.members

    def plus(self) -> "FeatureSet":
        return FeatureSet(self.name + "+", self.members + ("T",))


_MULTIPLE = {
    "prosody": PROSODIC,
    "hl93features": ("I-P", "I-C", "A", "A*"),
    "phrasing": ("P-L", "P-P", "I-L", "I-P", "I-C"),
    "length": ("P-L", "I-L"),
    "position": ("P-P", "I-P"),
    "intonational": ("P-L", "P-P"),
    "intermediate": ("I-L", "I-P", "I-C"),
    "text": TEXTUAL,
    "adjacency": ("C-P", "C-S"),
    "orthography": ("O-P", "O-P*", "O-S", "O-S*"),
    "preceding": ("C-P", "O-P", "O-P*"),
    "succeeding": ("C-S", "O-S", "O-S*"),
    "speech-text": BASE_FEATURES,
    "speech-adj": PROSODIC + ("C-P", "C-S"),
}


def _build_catalog():
    singles = [FeatureSet(f, (f,)) for f in BASE_FEATURES]
    multiples = [FeatureSet(name, members) for name, members in _MULTIPLE.items()]
    base = singles + multiples
    sets = base + [s.plus() for s in base]
    return {s.name: s for s in sets}


CATALOG = _build_catalog()
_CATALOG_LOWER = {name.lower(): s for name, s in CATALOG.items()}


def feature_set(name: str) -> FeatureSet:
    """Look up a catalog set by name; case-insensitive (``p-p+`` works)."""
    try:
        return _CATALOG_LOWER[name.strip().lower()]
    except KeyError:
        raise UnknownTag(f"unknown feature set {name!r}") from None


def project(example: Example, fset: FeatureSet) -> Example:
    """Restrict ``example`` to the members of ``fset``, keeping its label."""
    if fset is None or not len(fset):
        raise EmptyFeatureSet("cannot project onto an empty feature set")
    values = {f: example[f] for f in fset}
    return Example(values, label=example.label, judges=example.judges)
