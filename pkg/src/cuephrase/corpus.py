"""Corpus files, the two evaluation subsets, and the synthetic generator.

File layout: one header row of CSV column names followed by one row per
token. The last columns are either ``class`` (a combined label) or
``judge1,judge2`` (the two raw annotations).
"""

from __future__ import annotations

import io
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .errors import AbstractionError, AbstractionMismatch, CuePhraseError, ParseError, SchemaError
from .schema import (
    CONJUNCTS,
    CSV_NAMES,
    FEATURES,
    NA,
    NA_ALLOWED,
    NUMERIC,
    VOCABULARY,
    Example,
    Judge,
    Label,
    check_value,
    combine_judgments,
    make_example,
    parse_value,
)

FEATURE_COLUMNS = tuple(CSV_NAMES[f] for f in FEATURES)
CLASS_HEADER = FEATURE_COLUMNS + ("class",)
JUDGES_HEADER = FEATURE_COLUMNS + ("judge1", "judge2")


class MissingJudges(CuePhraseError, ValueError):
    pass


class InvalidSpec(CuePhraseError, ValueError):
    pass


@dataclass
class Corpus:
    examples: list = field(default_factory=list)
    provenance: str = field(default="", compare=False)

    def __len__(self):
        return len(self.examples)

    def __iter__(self):
        return iter(self.examples)

    def __getitem__(self, i):
        return self.examples[i]

    @property
    def judged(self) -> bool:
        return bool(self.examples) and self.examples[0].judges is not None

    def count(self, label: Label) -> int:
        return sum(1 for e in self.examples if e.label is label)


# ---------------------------------------------------------------------------
# File I/O


def _parse_row(fields, lineno, judged):
    ncols = len(JUDGES_HEADER if judged else CLASS_HEADER)
    if len(fields) != ncols:
        raise ParseError(lineno, f"expected {ncols} fields, found {len(fields)}")
    values = {}
    for col, (feature, text) in enumerate(zip(FEATURES, fields), start=1):
        try:
            values[feature] = parse_value(feature, text)
        except SchemaError as exc:
            raise ParseError(lineno, str(exc), column=col) from None
    try:
        if judged:
            judges = []
            for col in (ncols - 1, ncols):
                text = fields[col - 1]
                try:
                    judges.append(Judge(text))
                except ValueError:
                    raise ParseError(lineno, f"bad judge label {text!r}", column=col) from None
            return make_example(values, judges=tuple(judges))
        text = fields[-1]
        try:
            label = Label(text)
        except ValueError:
            raise ParseError(lineno, f"bad class {text!r}", column=ncols) from None
        return make_example(values, label=label)
    except AbstractionError as exc:
        raise AbstractionMismatch(lineno, str(exc)) from None


def loads(text: str, provenance: str = "") -> Corpus:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError(1, "missing header row")
    header = tuple(lines[0].rstrip("\r").split(","))
    if header == CLASS_HEADER:
        judged = False
    elif header == JUDGES_HEADER:
        judged = True
    else:
        raise ParseError(1, "unrecognized header row")
    examples = []
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.rstrip("\r")
        if not line.strip():
            raise ParseError(lineno, "blank line")
        examples.append(_parse_row(line.split(","), lineno, judged))
    return Corpus(examples, provenance)


def load(path) -> Corpus:
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as fh:
        return loads(fh.read(), provenance=f"file:{path}")


def _row(example: Example, judged: bool) -> str:
    cells = [str(example[f]) for f in FEATURES]
    if judged:
        if example.judges is None:
            raise MissingJudges("example has no judge labels")
        cells += [str(Judge(j)) for j in example.judges]
    else:
        if example.label is None:
            raise CuePhraseError("example has no class label")
        cells.append(str(example.label))
    return ",".join(cells)


def dumps(corpus: Corpus) -> str:
    judged = corpus.judged
    out = io.StringIO()
    out.write(",".join(JUDGES_HEADER if judged else CLASS_HEADER) + "\n")
    for e in corpus:
        out.write(_row(e, judged) + "\n")
    return out.getvalue()


def save(corpus: Corpus, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(corpus))


# ---------------------------------------------------------------------------
# Subsets


def combine_and_filter_classifiable(corpus: Corpus) -> Corpus:
    """Keep the tokens both judges agree on, labeled with that agreement."""
    out = []
    for i, e in enumerate(corpus):
        if e.judges is None:
            raise MissingJudges(f"example {i + 1} has no judge labels")
        label = combine_judgments(*e.judges)
        if label is not None:
            out.append(Example(e.values, label=label))
    return Corpus(out, _note(corpus, "classifiable"))


def filter_non_conjuncts(corpus: Corpus) -> Corpus:
    out = [e for e in corpus if e["T"] not in CONJUNCTS]
    return Corpus(out, _note(corpus, "non-conjuncts"))


def _note(corpus, what):
    return f"{corpus.provenance}; {what}" if corpus.provenance else what


# ---------------------------------------------------------------------------
# Synthetic corpora

Marginal = Mapping[object, float]


def default_marginals() -> dict:
    """Uniform symbolic marginals; textual features give NA weight 0.05.

    The four numeric features are handled by :func:`_sample_numeric` unless
    overridden.
    """
    out = {}
    for feature, vocab in VOCABULARY.items():
        if feature in ("A*", "O-P*", "O-S*"):
            continue
        if feature in NA_ALLOWED:
            w = 0.95 / len(vocab)
            dist = {v: w for v in vocab}
            dist[NA] = 0.05
        else:
            dist = {v: 1.0 / len(vocab) for v in vocab}
        out[feature] = dist
    return out


@dataclass(frozen=True)
class SyntheticSpec:
    n: int
    labeler: Callable[[Example], Label]
    noise: float = 0.0
    marginals: Optional[Mapping[str, Marginal]] = None
    seed: int = 0
    max_length: int = 12

    def validate(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidSpec(f"n must be a positive integer, got {self.n!r}")
        if not 0.0 <= self.noise <= 1.0:
            raise InvalidSpec(f"noise must lie in [0, 1], got {self.noise}")
        if self.max_length < 1:
            raise InvalidSpec("max_length must be >= 1")
        for feature, dist in (self.marginals or {}).items():
            if feature in ("A*", "O-P*", "O-S*"):
                raise InvalidSpec(f"{feature} is derived and cannot be sampled")
            if feature not in FEATURES:
                raise InvalidSpec(f"unknown feature {feature!r}")
            if not dist or sum(dist.values()) <= 0:
                raise InvalidSpec(f"marginal for {feature} has no mass")
            for value, weight in dist.items():
                if weight < 0:
                    raise InvalidSpec(f"negative weight for {feature}={value}")
                if weight > 0:
                    try:
                        check_value(feature, value)
                    except SchemaError as exc:
                        raise InvalidSpec(str(exc)) from None


def _draw(rng: random.Random, dist: Marginal):
    values = list(dist)
    weights = [dist[v] for v in values]
    return rng.choices(values, weights=weights)[0]


def _sample_numeric(rng, marginals, max_length):
    vals = {}
    for length, pos in (("P-L", "P-P"), ("I-L", "I-P")):
        if length in marginals:
            vals[length] = _draw(rng, marginals[length])
        else:
            vals[length] = rng.randint(1, max_length)
        if pos in marginals:
            vals[pos] = _draw(rng, marginals[pos])
        else:
            vals[pos] = rng.randint(1, vals[length])
    return vals


def generate(spec: SyntheticSpec) -> Corpus:
    """Draw ``spec.n`` labeled examples.

    Features are sampled independently (positions conditioned on their
    phrase length), starred features are derived, then each label is the
    labeler's prediction flipped with probability ``spec.noise``.
    """
    spec.validate()
    rng = random.Random(spec.seed)
    marginals = default_marginals()
    marginals.update(spec.marginals or {})
    examples = []
    for _ in range(spec.n):
        values = _sample_numeric(rng, marginals, spec.max_length)
        for feature in FEATURES:
            if feature in NUMERIC or feature in ("A*", "O-P*", "O-S*"):
                continue
            values[feature] = _draw(rng, marginals[feature])
        e = make_example(values)
        label = Label(spec.labeler(e))
        if spec.noise and rng.random() < spec.noise:
            label = label.other
        examples.append(e.with_label(label))
    return Corpus(examples, f"synthetic n={spec.n} noise={spec.noise} seed={spec.seed}")


def relabel_with_prior(corpus: Corpus, prior: float, seed: int = 0) -> Corpus:
    """Assign exactly ``round(prior * n)`` discourse labels at random positions."""
    n = len(corpus)
    if not 0.0 <= prior <= 1.0:
        raise InvalidSpec(f"prior must lie in [0, 1], got {prior}")
    k = round(prior * n)
    chosen = set(random.Random(seed).sample(range(n), k))
    out = [
        e.with_label(Label.DISCOURSE if i in chosen else Label.SENTENTIAL)
        for i, e in enumerate(corpus)
    ]
    return Corpus(out, _note(corpus, f"prior={prior}"))


def with_judges(corpus: Corpus, n_agreeing: int, seed: int = 0) -> Corpus:
    """Replace labels by judge pairs; exactly ``n_agreeing`` pairs agree.

    Agreeing pairs repeat the example's label. The rest get a disagreement
    or an ``ambiguous`` vote, chosen at random.
    """
    n = len(corpus)
    if not 0 <= n_agreeing <= n:
        raise InvalidSpec(f"n_agreeing must lie in [0, {n}]")
    rng = random.Random(seed)
    agree = set(rng.sample(range(n), n_agreeing))
    splits = [
        (Judge.DISCOURSE, Judge.SENTENTIAL),
        (Judge.SENTENTIAL, Judge.DISCOURSE),
        (Judge.AMBIGUOUS, Judge.DISCOURSE),
        (Judge.SENTENTIAL, Judge.AMBIGUOUS),
        (Judge.AMBIGUOUS, Judge.AMBIGUOUS),
    ]
    out = []
    for i, e in enumerate(corpus):
        if i in agree:
            j = Judge(e.label.value)
            judges = (j, j)
        else:
            judges = rng.choice(splits)
        out.append(Example(e.values, judges=judges))
    return Corpus(out, _note(corpus, f"judged agree={n_agreeing}"))


def from_rows(rows: Iterable[Sequence[str]], labels: Iterable[str]) -> Corpus:
    """Build a corpus from raw value tokens, e.g. a table typed in a test."""
    examples = []
    for lineno, (row, label) in enumerate(zip(rows, labels), start=1):
        examples.append(_parse_row(list(row) + [label], lineno, judged=False))
    return Corpus(examples)
