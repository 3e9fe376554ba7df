"""Uniform front for the two learners and their model files."""

from __future__ import annotations

from typing import Union

from .errors import ParseError
from .rules import RuleList, RuleParams, learn_rules, parse_rules, render_rules
from .schema import FeatureSet
from .tree import Leaf, NumericTest, SymbolicTest, TreeParams, learn_tree, parse_tree, render_tree

Model = Union[RuleList, Leaf, NumericTest, SymbolicTest]


def tree_learner(train, fset: FeatureSet, seed: int = 0, prune: bool = True) -> Model:
    # growth is deterministic; the seed is accepted for a uniform signature
    return learn_tree(train, fset, TreeParams(prune=prune))


def rules_learner(train, fset: FeatureSet, seed: int = 0, prune: bool = True) -> Model:
    params = RuleParams(seed=seed) if prune else RuleParams(grow_fraction=1.0, prune=False, seed=seed)
    return learn_rules(train, fset, params)


LEARNERS = {"tree": tree_learner, "rules": rules_learner}


def render_model(model: Model, long_names: bool = False) -> str:
    if isinstance(model, RuleList):
        return render_rules(model, long_names=long_names)
    return render_tree(model, counts=not long_names, long_names=long_names)


def parse_model(text: str) -> Model:
    """Read a tree or a rule list; rule lists end with a ``default is`` line."""
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise ParseError(1, "empty model file")
    if lines[-1].strip().startswith("default is"):
        return parse_rules(text)
    return parse_tree(text)
