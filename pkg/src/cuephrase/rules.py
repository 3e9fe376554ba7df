"""Ordered rule lists learned by separate-and-conquer.

Each rule is a conjunction of conditions predicting the target class; the
first rule that fires wins, and the default class covers everything else.
Rules are grown greedily with FOIL gain on a grow split and shortened on a
held-out prune split, in the manner of IREP.

Text form::

    if accent = L* then discourse
    if accent = deaccented and token = say then discourse
    default is sentential
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional

from .errors import CuePhraseError, EmptyCorpus, EmptyFeatureSet, ParseError, SchemaError
from .schema import (
    CSV_NAMES,
    DESCRIPTIONS,
    FEATURE_INDEX,
    NUMERIC,
    Example,
    FeatureSet,
    Label,
    parse_feature,
    parse_value,
    value_order,
)

OPS = ("=", "<=", ">=")


class ZeroCoverageBefore(CuePhraseError, ValueError):
    pass


class NoTargetExamples(CuePhraseError, ValueError):
    pass


@dataclass(frozen=True)
class Condition:
    feature: str
    op: str
    value: object

    def __post_init__(self):
        if self.op not in OPS:
            raise ValueError(f"unknown operator {self.op!r}")
        if (self.op == "=") == (self.feature in NUMERIC):
            raise ValueError(f"operator {self.op} cannot be applied to {self.feature}")

    def holds(self, example) -> bool:
        v = example[self.feature]
        if self.op == "=":
            return v == self.value
        if self.op == "<=":
            return v <= self.value
        return v >= self.value

    def render(self, long_names=False) -> str:
        name = DESCRIPTIONS[self.feature] if long_names else CSV_NAMES[self.feature]
        return f"{name} {self.op} {self.value}"


@dataclass(frozen=True)
class Rule:
    conditions: tuple
    label: Label

    def covers(self, example) -> bool:
        return all(c.holds(example) for c in self.conditions)

    @property
    def empty_coverage(self) -> bool:
        """True when two conditions on one feature exclude each other."""
        lo, hi, eq = {}, {}, {}
        for c in self.conditions:
            if c.op == "=":
                if c.feature in eq and eq[c.feature] != c.value:
                    return True
                eq[c.feature] = c.value
            elif c.op == "<=":
                hi[c.feature] = min(hi.get(c.feature, c.value), c.value)
            else:
                lo[c.feature] = max(lo.get(c.feature, c.value), c.value)
        return any(lo[f] > hi[f] for f in lo if f in hi)


@dataclass(frozen=True)
class RuleList:
    rules: tuple
    default: Label

    def __post_init__(self):
        for r in self.rules:
            if r.label is self.default:
                raise ValueError("every rule must predict the class opposite the default")
            if not r.conditions:
                raise ValueError("only the default may have no conditions")

    def firing(self, example) -> Optional[int]:
        """Index of the first rule that fires, or None when the default applies."""
        for i, rule in enumerate(self.rules):
            if rule.covers(example):
                return i
        return None

    def classify(self, example) -> Label:
        i = self.firing(example)
        return self.default if i is None else self.rules[i].label

    def features(self) -> set:
        return {c.feature for r in self.rules for c in r.conditions}


def classify_rules(rl: RuleList, example: Example) -> Label:
    return rl.classify(example)


@dataclass(frozen=True)
class RuleParams:
    grow_fraction: float = 2 / 3
    min_coverage: int = 1
    seed: int = 0
    prune: bool = True

    def __post_init__(self):
        if not 0.0 < self.grow_fraction <= 1.0:
            raise ValueError("grow_fraction must lie in (0, 1]")
        if self.grow_fraction == 1.0 and self.prune:
            raise ValueError("pruning needs grow_fraction < 1")
        if self.min_coverage < 1:
            raise ValueError("min_coverage must be >= 1")


# ---------------------------------------------------------------------------
# Growing and pruning single rules


def foil_gain(p_before: int, n_before: int, p_after: int, n_after: int) -> float:
    """FOIL information gain of refining a rule.

    ``p``/``n`` count covered target and non-target examples before and
    after adding a condition.
    """
    if p_before <= 0:
        raise ZeroCoverageBefore("the rule before refinement covers no target examples")
    if p_after == 0:
        return 0.0
    return p_after * (
        math.log2(p_after / (p_after + n_after)) - math.log2(p_before / (p_before + n_before))
    )


def _coverage(examples, target):
    p = sum(1 for e in examples if e.label is target)
    return p, len(examples) - p


def _candidates(feature, covered, target, used):
    """Yield (condition, p, n) for every refinement on ``feature``."""
    table = {}
    for e in covered:
        cell = table.setdefault(e[feature], [0, 0])
        cell[0 if e.label is target else 1] += 1
    if feature not in NUMERIC:
        if (feature, "=") in used:
            return
        for v in sorted(table, key=lambda v: value_order(feature, v)):
            yield Condition(feature, "=", v), table[v][0], table[v][1]
        return
    values = sorted(table)
    if (feature, "<=") not in used:
        p = n = 0
        for v in values:
            p += table[v][0]
            n += table[v][1]
            yield Condition(feature, "<=", v), p, n
    if (feature, ">=") not in used:
        p = n = 0
        for v in reversed(values):
            p += table[v][0]
            n += table[v][1]
            yield Condition(feature, ">=", v), p, n


def _cond_key(gain, cond):
    threshold = cond.value if cond.op != "=" else 0
    return (
        -round(gain, 12),
        threshold,
        FEATURE_INDEX[cond.feature],
        OPS.index(cond.op),
        value_order(cond.feature, cond.value),
    )


def grow_rule(grow, target: Label, fset: FeatureSet, params: Optional[RuleParams] = None) -> Rule:
    """Greedily add the condition with the best FOIL gain.

    Stops once the rule covers no non-target example or no refinement has
    positive gain. A grow set with no non-target examples gives the empty
    rule.
    """
    grow = list(grow)
    if not any(e.label is target for e in grow):
        raise NoTargetExamples(f"grow set has no {target} examples")
    covered = grow
    conditions = []
    used = set()
    while True:
        p, n = _coverage(covered, target)
        if n == 0:
            break
        best_key, best = None, None
        for feature in fset:
            for cond, p1, n1 in _candidates(feature, covered, target, used):
                gain = foil_gain(p, n, p1, n1)
                if gain <= 0:
                    continue
                key = _cond_key(gain, cond)
                if best_key is None or key < best_key:
                    best_key, best = key, cond
        if best is None:
            break
        conditions.append(best)
        used.add((best.feature, best.op))
        covered = [e for e in covered if best.holds(e)]
    return Rule(tuple(conditions), target)


def rule_value(p: int, n: int) -> float:
    """Prune-set score (p - n) / (p + n); zero for a rule covering nothing."""
    if p + n == 0:
        return 0.0
    return (p - n) / (p + n)


def prune_rule(rule: Rule, prune_set) -> Rule:
    """Drop a final run of conditions, keeping the best-scoring prefix.

    Every prefix with at least one condition is scored on the prune set;
    ties go to the shorter rule.
    """
    prune_set = list(prune_set)
    if len(rule.conditions) <= 1:
        return rule
    best_k, best_v = None, None
    for k in range(len(rule.conditions), 0, -1):
        candidate = Rule(rule.conditions[:k], rule.label)
        covered = [e for e in prune_set if candidate.covers(e)]
        v = rule_value(*_coverage(covered, rule.label))
        if best_v is None or v >= best_v:
            best_k, best_v = k, v
    return Rule(rule.conditions[:best_k], rule.label)


# ---------------------------------------------------------------------------
# Rule lists


def target_class(examples) -> Label:
    """The minority class; discourse on a tie."""
    d = sum(1 for e in examples if e.label is Label.DISCOURSE)
    return Label.DISCOURSE if d <= len(examples) - d else Label.SENTENTIAL


def _rule_rng(seed, k):
    return random.Random(seed * 1_000_003 + k)


def learn_rules(corpus, fset: FeatureSet, params: Optional[RuleParams] = None) -> RuleList:
    """Separate-and-conquer over ``corpus`` restricted to ``fset``.

    Rules predict the minority class; the majority class is the default.
    A rule is accepted only if its precision beats both one half and the
    share of target examples still uncovered, and every accepted rule
    removes the examples it covers.
    """
    params = params or RuleParams()
    examples = list(corpus)
    if not examples:
        raise EmptyCorpus("cannot learn rules from an empty corpus")
    if fset is None or not len(fset):
        raise EmptyFeatureSet("cannot learn rules without features")
    labels = {e.label for e in examples}
    if len(labels) == 1:
        return RuleList((), labels.pop())
    target = target_class(examples)
    remaining = examples
    rules = []
    k = 0
    while True:
        n_target = sum(1 for e in remaining if e.label is target)
        if n_target == 0:
            break
        if params.prune:
            shuffled = list(remaining)
            _rule_rng(params.seed, k).shuffle(shuffled)
            cut = round(params.grow_fraction * len(shuffled))
            grow, prune_set = shuffled[:cut], shuffled[cut:]
            if not any(e.label is target for e in grow):
                grow, prune_set = shuffled, []
        else:
            grow, prune_set = remaining, []
        rule = grow_rule(grow, target, fset, params)
        if prune_set:
            rule = prune_rule(rule, prune_set)
        # an empty rule would swallow every remaining example
        if not rule.conditions:
            break
        grow_p = sum(1 for e in grow if e.label is target and rule.covers(e))
        if grow_p < params.min_coverage:
            break
        judged = [e for e in prune_set if rule.covers(e)]
        if not judged:
            judged = [e for e in grow if rule.covers(e)]
        p, n = _coverage(judged, target)
        # below 0.5 the rule errs more often than the default on what it covers
        if p / (p + n) <= max(0.5, n_target / len(remaining)):
            break
        rest = [e for e in remaining if not rule.covers(e)]
        if len(rest) == len(remaining):
            break
        rules.append(rule)
        remaining = rest
        k += 1
    return RuleList(tuple(rules), target.other)


# ---------------------------------------------------------------------------
# Text form


def render_rules(rl: RuleList, long_names: bool = False) -> str:
    lines = []
    for rule in rl.rules:
        body = " and ".join(c.render(long_names) for c in rule.conditions)
        lines.append(f"if {body} then {rule.label}")
    lines.append(f"default is {rl.default}")
    return "\n".join(lines) + "\n"


def _parse_condition(parts, lineno):
    if len(parts) != 3 or parts[1] not in OPS:
        raise ParseError(lineno, f"malformed condition {' '.join(parts)!r}")
    try:
        feature = parse_feature(parts[0])
        value = parse_value(feature, parts[2])
        return Condition(feature, parts[1], value)
    except (SchemaError, ValueError) as exc:
        raise ParseError(lineno, str(exc)) from None


def _parse_rule(words, lineno):
    # "and" and "then" are also cue tokens, so read fixed-width triples
    conds = []
    i = 0
    while True:
        conds.append(_parse_condition(words[i:i + 3], lineno))
        i += 3
        if i < len(words) and words[i] == "and":
            i += 1
            continue
        break
    if len(words) != i + 2 or words[i] != "then":
        raise ParseError(lineno, "expected 'then <class>' after the conditions")
    return Rule(tuple(conds), _parse_label(words[i + 1], lineno))


def _parse_label(text, lineno):
    try:
        return Label(text.strip())
    except ValueError:
        raise ParseError(lineno, f"expected a class name, found {text.strip()!r}") from None


def parse_rules(text: str) -> RuleList:
    rules = []
    default = None
    last = 0
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line:
            continue
        last = lineno
        if default is not None:
            raise ParseError(lineno, "text after the default rule")
        if line.startswith("default is "):
            default = _parse_label(line[len("default is "):], lineno)
            continue
        if not line.startswith("if "):
            raise ParseError(lineno, "expected 'if <conditions> then <class>' or 'default is <class>'")
        rules.append((lineno, _parse_rule(line.split()[1:], lineno)))
    if default is None:
        raise ParseError(last + 1, "missing 'default is <class>'")
    for lineno, rule in rules:
        if rule.label is default:
            raise ParseError(lineno, "rule predicts the default class")
    return RuleList(tuple(r for _, r in rules), default)
