import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuephrase.corpus import Corpus, SyntheticSpec, generate
from cuephrase.baselines import classifier
from cuephrase.errors import EmptyCorpus, ParseError
from cuephrase.schema import CATALOG, FeatureSet, Label, project
from cuephrase.tree import (
    EmptyDistribution,
    Leaf,
    NumericTest,
    PartitionMismatch,
    SymbolicTest,
    TreeParams,
    entropy,
    grow,
    info_gain,
    leaf_count,
    learn_tree,
    parse_tree,
    pessimistic_rate,
    prune,
    render_tree,
    tested_features as features_tested,
    training_error,
)

from helpers import corpus_of, example

D, S = Label.DISCOURSE, Label.SENTENTIAL


def binomial_upper(errors, n, cf):
    """p with P(X <= errors; n, p) = cf, by bisection."""
    def cdf(p):
        return sum(math.comb(n, k) * p**k * (1 - p) ** (n - k) for k in range(errors + 1))

    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if cdf(mid) > cf:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def pp_corpus(limit=20, copies=3):
    rows = [({"P_P": v, "P_L": limit}, "sentential" if v >= 2 else "discourse")
            for v in range(1, limit + 1) for _ in range(copies)]
    return corpus_of(rows)


class TestMeasures:
    def test_entropy_9_5(self):
        assert entropy((9, 5)) == pytest.approx(0.940285958670631, abs=1e-12)

    def test_entropy_pure_and_even(self):
        assert entropy((7, 0)) == 0.0
        assert entropy((4, 4)) == 1.0

    def test_gain(self):
        assert info_gain((9, 5), [(6, 2), (3, 3)]) == pytest.approx(0.0481270304082694, abs=1e-12)

    def test_gain_perfect_split(self):
        assert info_gain((4, 4), [(4, 0), (0, 4)]) == 1.0

    def test_mismatch(self):
        with pytest.raises(PartitionMismatch):
            info_gain((9, 5), [(6, 2), (3, 2)])

    def test_empty(self):
        with pytest.raises(EmptyDistribution):
            entropy((0, 0))

    @given(st.integers(0, 30), st.integers(0, 30), st.integers(0, 30), st.integers(0, 30))
    def test_gain_bounds(self, a, b, c, d):
        if a + b == 0 or c + d == 0:
            return
        parent = (a + c, b + d)
        g = info_gain(parent, [(a, b), (c, d)])
        assert -1e-12 <= g <= entropy(parent) + 1e-12


class TestPessimistic:
    @pytest.mark.parametrize("e,n", [(0, 1), (0, 10), (1, 10), (2, 10), (3, 20), (7, 40)])
    def test_matches_bisection(self, e, n):
        assert pessimistic_rate(e, n) == pytest.approx(binomial_upper(e, n, 0.25), abs=1e-9)

    def test_worked_example_collapses(self):
        leaf_est = 20 * binomial_upper(3, 20, 0.25)
        subtree_est = 10 * binomial_upper(1, 10, 0.25) + 10 * binomial_upper(2, 10, 0.25)
        assert leaf_est == pytest.approx(4.84211072156015, abs=1e-9)
        assert subtree_est == pytest.approx(6.02814837711812, abs=1e-9)
        node = NumericTest("P-P", 1, Leaf(D, (9, 1)), Leaf(D, (8, 2)), (17, 3))
        assert prune(node) == Leaf(D, (17, 3))

    def test_single_leaf_unchanged(self):
        assert prune(Leaf(S, (3, 9))) == Leaf(S, (3, 9))

    def test_separating_split_kept(self):
        tree = learn_tree(pp_corpus(), CATALOG["P-P"])
        assert prune(tree) == tree
        assert leaf_count(tree) == 2


class TestGrow:
    def test_pp_tree_text(self):
        tree = learn_tree(pp_corpus(), CATALOG["P-P"])
        assert render_tree(tree, counts=False) == (
            "if p_pos <= 1 then discourse\nelseif p_pos > 1 then sentential\n"
        )
        assert render_tree(tree) == (
            "if p_pos <= 1 then discourse (3/0)\nelseif p_pos > 1 then sentential (0/57)\n"
        )

    def test_pure_corpus_single_leaf(self):
        c = corpus_of([({"P_P": v}, "sentential") for v in range(1, 6)])
        assert learn_tree(c, CATALOG["P-P"]) == Leaf(S, (0, 5))
        assert render_tree(Leaf(D, (2, 1)), counts=False) == "class: discourse\n"

    def test_xor(self):
        rows = []
        for cp in ("true", "false"):
            for cs in ("true", "false"):
                label = "discourse" if (cp == "true") != (cs == "true") else "sentential"
                rows += [({"C_P": cp, "C_S": cs}, label)] * 2
        c = corpus_of(rows)
        fset = FeatureSet("xor", ("C-P", "C-S"))
        tree = learn_tree(c, fset, TreeParams(min_leaf=1, prune=False))
        assert training_error(tree, c) == 0
        assert features_tested(tree) == {"C-P", "C-S"}
        assert best_depth2_error(c, fset.members) == 0

    def test_min_leaf_respected(self):
        c = generate(SyntheticSpec(300, classifier("prosodic"), noise=0.2, seed=4))
        tree = grow(c, CATALOG["speech-adj"], TreeParams(min_leaf=5))
        for node in walk(tree):
            if isinstance(node, NumericTest):
                assert sum(node.le.counts) >= 5 and sum(node.gt.counts) >= 5

    def test_unseen_value_goes_to_absent(self):
        rows = [({"A": "H*"}, "sentential")] * 3 + [({"A": "L*"}, "discourse")] * 4
        tree = learn_tree(corpus_of(rows), CATALOG["A"], TreeParams(prune=False))
        assert isinstance(tree, SymbolicTest)
        assert tree.absent is D
        assert tree.classify(example(A="L+H*")) is D

    def test_empty(self):
        with pytest.raises(EmptyCorpus):
            learn_tree(Corpus([]), CATALOG["A"])

    def test_deterministic(self):
        c = generate(SyntheticSpec(200, classifier("prosodic"), noise=0.1, seed=8))
        fset = CATALOG["speech-text+"]
        assert learn_tree(c, fset) == learn_tree(c, fset)

    def test_order_invariant(self):
        c = generate(SyntheticSpec(200, classifier("textual"), noise=0.1, seed=8))
        shuffled = list(c)
        random.Random(1).shuffle(shuffled)
        fset = CATALOG["text"]
        assert learn_tree(c, fset) == learn_tree(shuffled, fset)

    def test_feature_locality(self):
        c = generate(SyntheticSpec(300, classifier("prosodic"), noise=0.1, seed=2))
        for name in ("P-L", "hl93features", "text", "speech-adj+"):
            fset = CATALOG[name]
            projected = [project(e, fset) for e in c]
            assert features_tested(learn_tree(projected, fset, TreeParams(prune=False))) <= set(fset.members)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(10, 80))
def test_zero_training_error_without_contradictions(seed, n):
    c = generate(SyntheticSpec(n, classifier("majority"), noise=0.5, seed=seed))
    fset = CATALOG["speech-text+"]
    seen = {}
    for e in c:
        seen.setdefault(tuple(sorted(e.values.items(), key=str)), e)
    clean = list(seen.values())
    tree = learn_tree(clean, fset, TreeParams(min_leaf=1, prune=False))
    assert training_error(tree, clean) == 0


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_prune_never_grows(seed):
    c = generate(SyntheticSpec(150, classifier("prosodic"), noise=0.2, seed=seed))
    fset = CATALOG["speech-adj"]
    full = grow(c, fset)
    pruned = prune(full)
    assert leaf_count(pruned) <= leaf_count(full)
    assert training_error(pruned, c) >= training_error(full, c)


class TestText:
    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10**6), st.sampled_from(["speech-text+", "hl93features", "P-P", "text+"]))
    def test_round_trip(self, seed, name):
        c = generate(SyntheticSpec(120, classifier("prosodic"), noise=0.15, seed=seed))
        tree = learn_tree(c, CATALOG[name], TreeParams(prune=seed % 2 == 0))
        assert parse_tree(render_tree(tree)) == tree
        plain = parse_tree(render_tree(tree, counts=False))
        assert all(plain.classify(e) is tree.classify(e) for e in c)

    def test_leaf_round_trip(self):
        assert parse_tree("class: sentential (2/5)\n") == Leaf(S, (2, 5))

    @pytest.mark.parametrize("text", [
        "if p_pos <= 1 then maybe\nelseif p_pos > 1 then sentential\n",
        "if bogus <= 1 then discourse\nelseif bogus > 1 then sentential\n",
        "if p_pos <= 1 then discourse\n",
        "",
    ])
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            parse_tree(text)


def walk(node):
    yield node
    if isinstance(node, NumericTest):
        yield from walk(node.le)
        yield from walk(node.gt)
    elif isinstance(node, SymbolicTest):
        for child in node.branches.values():
            yield from walk(child)


def best_depth2_error(corpus, features):
    """Brute force over every symbolic tree of depth at most two."""
    examples = list(corpus)

    def leaf_err(group):
        d = sum(1 for e in group if e.label is D)
        return min(d, len(group) - d)

    best = leaf_err(examples)
    for f1 in features:
        groups = {}
        for e in examples:
            groups.setdefault(e[f1], []).append(e)
        total = 0
        for g in groups.values():
            sub = leaf_err(g)
            for f2 in features:
                parts = {}
                for e in g:
                    parts.setdefault(e[f2], []).append(e)
                sub = min(sub, sum(leaf_err(p) for p in parts.values()))
            total += sub
        best = min(best, total)
    return best
