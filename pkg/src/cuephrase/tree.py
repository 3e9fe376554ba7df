"""Decision tree induction in the style of C4.5.

Growth picks the test with the largest information gain. Numeric features
are split as ``x <= v`` with ``v`` an observed value; symbolic features
(NA included) get one branch per value seen at the node. Trees are then
simplified bottom-up with pessimistic error pruning.

Text format, two spaces per level, leaves carrying optional
``(discourse/sentential)`` training counts::

    if p_pos <= 1 then discourse (91/3)
    elseif p_pos > 1 then
      if accent = H* then sentential (0/40)
      elseif accent = L* then discourse (12/2)
      else sentential
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

from scipy.special import betaincinv

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


class EmptyDistribution(CuePhraseError, ValueError):
    pass


class PartitionMismatch(CuePhraseError, ValueError):
    pass


# ---------------------------------------------------------------------------
# Information measures


def entropy(counts) -> float:
    """Class entropy in bits of a (discourse, sentential) count pair."""
    n = sum(counts)
    if n <= 0:
        raise EmptyDistribution("entropy of an empty distribution")
    h = 0.0
    for c in counts:
        if c:
            p = c / n
            h -= p * math.log2(p)
    return h


def info_gain(parent, partition) -> float:
    """Entropy reduction from splitting ``parent`` counts into ``partition``."""
    total = [sum(col) for col in zip(*partition)] if partition else [0] * len(parent)
    if list(total) != list(parent):
        raise PartitionMismatch(f"children sum to {tuple(total)}, parent is {tuple(parent)}")
    n = sum(parent)
    remainder = sum(sum(child) / n * entropy(child) for child in partition if sum(child))
    return entropy(parent) - remainder


def _entropy2(d, s):
    # hot path of growth; d + s > 0 guaranteed by callers
    n = d + s
    h = 0.0
    if d:
        h -= d / n * math.log2(d / n)
    if s:
        h -= s / n * math.log2(s / n)
    return h


def pessimistic_rate(errors: int, n: int, confidence: float = 0.25) -> float:
    """Upper confidence limit on the error rate of a leaf.

    The binomial ``p`` with ``P(X <= errors; n, p) = confidence``.
    """
    if n <= 0:
        return 0.0
    if errors >= n:
        return 1.0
    return float(betaincinv(errors + 1, n - errors, 1.0 - confidence))


# ---------------------------------------------------------------------------
# Tree nodes


def majority(counts) -> Label:
    d, s = counts
    return Label.SENTENTIAL if s > d else Label.DISCOURSE


@dataclass(frozen=True)
class Leaf:
    label: Label
    counts: tuple = (0, 0)

    def classify(self, example):
        return self.label


@dataclass(frozen=True)
class NumericTest:
    feature: str
    threshold: int
    le: "Node"
    gt: "Node"
    counts: tuple = (0, 0)

    def classify(self, example):
        child = self.le if example[self.feature] <= self.threshold else self.gt
        return child.classify(example)


@dataclass(frozen=True)
class SymbolicTest:
    feature: str
    branches: dict = field(default_factory=dict)
    absent: Label = Label.DISCOURSE
    counts: tuple = (0, 0)

    def classify(self, example):
        child = self.branches.get(example[self.feature])
        if child is None:
            return self.absent
        return child.classify(example)


Node = Union[Leaf, NumericTest, SymbolicTest]


@dataclass(frozen=True)
class TreeParams:
    min_leaf: int = 2
    prune: bool = True
    confidence: float = 0.25

    def __post_init__(self):
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")
        if not 0.0 < self.confidence < 1.0:
            raise ValueError("confidence must lie strictly between 0 and 1")


def children(node):
    if isinstance(node, NumericTest):
        return [node.le, node.gt]
    if isinstance(node, SymbolicTest):
        return list(node.branches.values())
    return []


def leaves(node):
    if isinstance(node, Leaf):
        return [node]
    return [leaf for c in children(node) for leaf in leaves(c)]


def leaf_count(node) -> int:
    return len(leaves(node))


def tested_features(node) -> set:
    if isinstance(node, Leaf):
        return set()
    out = {node.feature}
    for c in children(node):
        out |= tested_features(c)
    return out


def classify_tree(tree: Node, example: Example) -> Label:
    return tree.classify(example)


# ---------------------------------------------------------------------------
# Growth


def _split_key(gain, threshold, feature_index):
    # max gain, then smaller threshold, then schema order
    return (-round(gain, 12), threshold, feature_index)


class _Grower:
    def __init__(self, examples, features, params):
        self.features = list(features)
        self.columns = {f: [e[f] for e in examples] for f in self.features}
        self.is_disc = [e.label is Label.DISCOURSE for e in examples]
        self.min_leaf = params.min_leaf

    def counts(self, idx):
        d = sum(1 for i in idx if self.is_disc[i])
        return d, len(idx) - d

    def tally(self, feature, idx):
        col, disc = self.columns[feature], self.is_disc
        table = {}
        for i in idx:
            cell = table.setdefault(col[i], [0, 0])
            cell[0 if disc[i] else 1] += 1
        return table

    def best_split(self, idx, counts):
        n = len(idx)
        d0, s0 = counts
        h0 = _entropy2(d0, s0)
        best_key, best = None, None
        for feature in self.features:
            fi = FEATURE_INDEX[feature]
            table = self.tally(feature, idx)
            if len(table) < 2:
                continue
            if feature in NUMERIC:
                values = sorted(table)
                ld = ls = 0
                for v in values[:-1]:
                    ld += table[v][0]
                    ls += table[v][1]
                    nl = ld + ls
                    nr = n - nl
                    if nl < self.min_leaf or nr < self.min_leaf:
                        continue
                    rd, rs = d0 - ld, s0 - ls
                    gain = h0 - (nl / n) * _entropy2(ld, ls) - (nr / n) * _entropy2(rd, rs)
                    key = _split_key(gain, v, fi)
                    if best_key is None or key < best_key:
                        best_key, best = key, (feature, v)
            else:
                if sum(1 for c in table.values() if sum(c) >= self.min_leaf) < 2:
                    continue
                rem = sum((c[0] + c[1]) / n * _entropy2(c[0], c[1]) for c in table.values())
                key = _split_key(h0 - rem, 0, fi)
                if best_key is None or key < best_key:
                    best_key, best = key, (feature, None)
        return best

    def build(self, idx):
        counts = self.counts(idx)
        d, s = counts
        if d == 0 or s == 0 or len(idx) < 2 * self.min_leaf:
            return Leaf(majority(counts), counts)
        split = self.best_split(idx, counts)
        if split is None:
            return Leaf(majority(counts), counts)
        feature, threshold = split
        col = self.columns[feature]
        if threshold is not None:
            le = [i for i in idx if col[i] <= threshold]
            gt = [i for i in idx if col[i] > threshold]
            return NumericTest(feature, threshold, self.build(le), self.build(gt), counts)
        groups = {}
        for i in idx:
            groups.setdefault(col[i], []).append(i)
        branches = {
            v: self.build(groups[v]) for v in sorted(groups, key=lambda v: value_order(feature, v))
        }
        return SymbolicTest(feature, branches, majority(counts), counts)


def grow(corpus, fset: FeatureSet, params: Optional[TreeParams] = None) -> Node:
    """Grow an unpruned tree over the features of ``fset``.

    A node becomes a leaf when it is pure, holds fewer than
    ``2 * min_leaf`` examples, or admits no split leaving at least two
    children with ``min_leaf`` examples each.
    """
    params = params or TreeParams()
    examples = list(corpus)
    if not examples:
        raise EmptyCorpus("cannot grow a tree from an empty corpus")
    if fset is None or not len(fset):
        raise EmptyFeatureSet("cannot grow a tree without features")
    grower = _Grower(examples, fset, params)
    return grower.build(list(range(len(examples))))


# ---------------------------------------------------------------------------
# Pruning


def _leaf_estimate(counts, confidence):
    n = sum(counts)
    return n * pessimistic_rate(min(counts), n, confidence)


def _estimate(node, confidence):
    return sum(_leaf_estimate(leaf.counts, confidence) for leaf in leaves(node))


def prune(tree: Node, params: Optional[TreeParams] = None) -> Node:
    """Collapse subtrees whose pessimistic error is no better than a leaf's."""
    params = params or TreeParams()
    cf = params.confidence
    if isinstance(tree, Leaf):
        return tree
    if isinstance(tree, NumericTest):
        node = NumericTest(tree.feature, tree.threshold, prune(tree.le, params),
                           prune(tree.gt, params), tree.counts)
    else:
        branches = {v: prune(c, params) for v, c in tree.branches.items()}
        node = SymbolicTest(tree.feature, branches, tree.absent, tree.counts)
    if _leaf_estimate(node.counts, cf) <= _estimate(node, cf) + 1e-9:
        return Leaf(majority(node.counts), node.counts)
    return node


def learn_tree(corpus, fset: FeatureSet, params: Optional[TreeParams] = None) -> Node:
    params = params or TreeParams()
    tree = grow(corpus, fset, params)
    return prune(tree, params) if params.prune else tree


def training_error(tree: Node, corpus) -> float:
    examples = list(corpus)
    wrong = sum(1 for e in examples if tree.classify(e) is not e.label)
    return wrong / len(examples)


# ---------------------------------------------------------------------------
# Text form


def _leaf_text(leaf, counts):
    if counts:
        return f"{leaf.label} ({leaf.counts[0]}/{leaf.counts[1]})"
    return str(leaf.label)


def _name(feature, long_names):
    return DESCRIPTIONS[feature] if long_names else CSV_NAMES[feature]


def render_tree(tree: Node, counts: bool = True, long_names: bool = False) -> str:
    """Render as nested if/elseif lines.

    ``long_names`` spells features out (``position in intonational
    phrase``); such text is for reading only and does not parse back.
    """
    if isinstance(tree, Leaf):
        return f"class: {_leaf_text(tree, counts)}\n"
    lines = []
    _render(tree, 0, lines, counts, long_names)
    return "\n".join(lines) + "\n"


def _clause(head, child, depth, lines, counts, long_names):
    if isinstance(child, Leaf):
        lines.append(f"{head} {_leaf_text(child, counts)}")
    else:
        lines.append(head)
        _render(child, depth + 1, lines, counts, long_names)


def _render(node, depth, lines, counts, long_names):
    pad = "  " * depth
    name = _name(node.feature, long_names)
    if isinstance(node, NumericTest):
        _clause(f"{pad}if {name} <= {node.threshold} then", node.le, depth, lines, counts, long_names)
        _clause(f"{pad}elseif {name} > {node.threshold} then", node.gt, depth, lines, counts, long_names)
        return
    for k, (value, child) in enumerate(node.branches.items()):
        kw = "if" if k == 0 else "elseif"
        _clause(f"{pad}{kw} {name} = {value} then", child, depth, lines, counts, long_names)
    lines.append(f"{pad}else {node.absent}")


def _parse_leaf(text, lineno):
    parts = text.split(None, 1)
    try:
        label = Label(parts[0])
    except (ValueError, IndexError):
        raise ParseError(lineno, f"expected a class name, found {text!r}") from None
    if len(parts) == 1:
        return Leaf(label, (0, 0))
    rest = parts[1].strip()
    try:
        d, s = rest.strip("()").split("/")
        counts = (int(d), int(s))
    except ValueError:
        raise ParseError(lineno, f"bad leaf counts {rest!r}") from None
    if not (rest.startswith("(") and rest.endswith(")")) or min(counts) < 0:
        raise ParseError(lineno, f"bad leaf counts {rest!r}")
    return Leaf(label, counts)


class _TreeParser:
    def __init__(self, text):
        self.lines = []
        for lineno, raw in enumerate(text.split("\n"), start=1):
            if not raw.strip():
                continue
            stripped = raw.lstrip(" ")
            indent = len(raw) - len(stripped)
            if indent % 2:
                raise ParseError(lineno, "indentation must be a multiple of two spaces")
            self.lines.append((lineno, indent // 2, stripped.rstrip()))
        self.pos = 0

    def peek(self):
        return self.lines[self.pos] if self.pos < len(self.lines) else None

    def take(self, depth, keyword):
        line = self.peek()
        if line is None:
            raise ParseError(self.lines[-1][0] if self.lines else 1, f"expected '{keyword}', found end of input")
        lineno, d, text = line
        if d != depth or not text.startswith(keyword + " "):
            raise ParseError(lineno, f"expected '{keyword}' at depth {depth}")
        self.pos += 1
        return lineno, text[len(keyword) + 1:]

    def test(self, body, lineno):
        """Split ``<feature> <op> <value> then [leaf]`` into its parts."""
        # values never contain spaces, so split on words; "then" is also a token
        parts = body.split(None, 4)
        if len(parts) < 4 or parts[3] != "then":
            raise ParseError(lineno, f"malformed test {body!r}")
        try:
            feature = parse_feature(parts[0])
        except SchemaError as exc:
            raise ParseError(lineno, str(exc)) from None
        tail = parts[4] if len(parts) == 5 else ""
        return feature, parts[1], parts[2], tail.strip()

    def child(self, tail, depth, lineno):
        if tail:
            return _parse_leaf(tail, lineno)
        return self.node(depth + 1)

    def value(self, feature, text, lineno):
        try:
            return parse_value(feature, text)
        except SchemaError as exc:
            raise ParseError(lineno, str(exc)) from None

    def node(self, depth):
        lineno, body = self.take(depth, "if")
        feature, op, raw, tail = self.test(body, lineno)
        if op == "<=":
            if feature not in NUMERIC:
                raise ParseError(lineno, f"{feature} is not numeric")
            threshold = self.value(feature, raw, lineno)
            le = self.child(tail, depth, lineno)
            lineno, body = self.take(depth, "elseif")
            f2, op2, raw2, tail2 = self.test(body, lineno)
            if f2 != feature or op2 != ">" or self.value(feature, raw2, lineno) != threshold:
                raise ParseError(lineno, f"expected '{CSV_NAMES[feature]} > {threshold}'")
            gt = self.child(tail2, depth, lineno)
            counts = _sum_counts([le, gt])
            return NumericTest(feature, threshold, le, gt, counts)
        if op != "=" or feature in NUMERIC:
            raise ParseError(lineno, f"unsupported test operator {op!r} for {feature}")
        branches = {}
        while True:
            value = self.value(feature, raw, lineno)
            if value in branches:
                raise ParseError(lineno, f"duplicate branch {value}")
            branches[value] = self.child(tail, depth, lineno)
            line = self.peek()
            if line is None or line[1] != depth or not line[2].startswith("elseif "):
                break
            lineno, body = self.take(depth, "elseif")
            f2, op, raw, tail = self.test(body, lineno)
            if f2 != feature or op != "=":
                raise ParseError(lineno, f"branch must test {CSV_NAMES[feature]} = <value>")
        counts = _sum_counts(branches.values())
        absent = majority(counts)
        line = self.peek()
        if line is not None and line[1] == depth and line[2].startswith("else "):
            lineno, body = self.take(depth, "else")
            absent = _parse_leaf(body, lineno).label
        return SymbolicTest(feature, branches, absent, counts)


def _sum_counts(nodes):
    d = s = 0
    for n in nodes:
        d += n.counts[0]
        s += n.counts[1]
    return (d, s)


def parse_tree(text: str) -> Node:
    stripped = text.strip()
    if stripped.startswith("class:"):
        if "\n" in stripped:
            raise ParseError(2, "unexpected text after single-leaf tree")
        return _parse_leaf(stripped[len("class:"):].strip(), 1)
    parser = _TreeParser(text)
    if not parser.lines:
        raise ParseError(1, "empty tree text")
    tree = parser.node(0)
    line = parser.peek()
    if line is not None:
        raise ParseError(line[0], "unexpected trailing line")
    return tree
