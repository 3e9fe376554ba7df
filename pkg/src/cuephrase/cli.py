"""Command-line front end.

Subcommands: gen, prepare, baseline, train, eval, crossval, explain.
Human-readable tables go to stdout, machine-readable output to files.
Exit status is 0 on success, 1 on a data or model error, 2 on bad usage.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from pathlib import Path

from . import corpus as corpus_mod
from .baselines import LINES, MODELS, classifier
from .errors import CuePhraseError
from .evaluator import cross_validate_many, error_rate, render_report, report_records
from .learners import LEARNERS, parse_model, render_model
from .schema import CATALOG, feature_set, project


def _read_corpus(path):
    c = corpus_mod.load(path)
    if c.judged:
        raise CuePhraseError(f"{path}: corpus has judge labels; run 'prepare --combine-judges' first")
    return c


def _labeler(spec):
    if spec in MODELS:
        return classifier(spec)
    if spec.startswith("rules:"):
        rl = parse_model(Path(spec[len("rules:"):]).read_text(encoding="utf-8"))
        return rl.classify
    raise CuePhraseError(f"unknown labeler {spec!r}")


def _summary(result):
    return (
        f"n={result.n} errors={result.errors} error={100 * result.error:.1f}%"
        f" (discourse->sentential {result.miscls_discourse},"
        f" sentential->discourse {result.miscls_sentential})"
    )


def cmd_gen(args):
    spec = corpus_mod.SyntheticSpec(
        n=args.n, labeler=_labeler(args.labeler), noise=args.noise, seed=args.seed
    )
    c = corpus_mod.generate(spec)
    corpus_mod.save(c, args.out)
    print(f"wrote {len(c)} examples to {args.out}")


def cmd_prepare(args):
    c = corpus_mod.load(args.inp)
    if args.combine_judges:
        c = corpus_mod.combine_and_filter_classifiable(c)
    elif c.judged:
        raise CuePhraseError(f"{args.inp}: corpus has judge labels; pass --combine-judges")
    if args.drop_conjuncts:
        c = corpus_mod.filter_non_conjuncts(c)
    corpus_mod.save(c, args.out)
    print(f"wrote {len(c)} examples to {args.out}")


def cmd_baseline(args):
    c = _read_corpus(args.inp)
    model = MODELS[args.model]
    fired = Counter(model(e).line for e in c)
    print(f"{args.model}: {_summary(error_rate(classifier(args.model), c))}")
    for line in LINES:
        if fired[line]:
            print(f"  line {line}: {fired[line]}")


def cmd_train(args):
    c = _read_corpus(args.inp)
    fset = feature_set(args.set)
    train = [project(e, fset) for e in c]
    model = LEARNERS[args.learner](train, fset, args.seed, not args.no_prune)
    Path(args.out).write_text(render_model(model), encoding="utf-8")
    print(f"wrote {args.learner} model for {fset.name} to {args.out}")


def _load_model(path):
    return parse_model(Path(path).read_text(encoding="utf-8"))


def cmd_eval(args):
    model = _load_model(args.model)
    c = _read_corpus(args.inp)
    print(_summary(error_rate(model, c)))


def cmd_crossval(args):
    c = _read_corpus(args.inp)
    if args.sets == "all":
        sets = list(CATALOG.values())
    else:
        sets = [feature_set(name) for name in args.sets.split(",")]
    learners = ["rules", "tree"] if args.learner == "both" else [args.learner]
    report = cross_validate_many(
        c, sets, learners, runs=args.runs, seed=args.seed,
        prune=not args.no_prune, jobs=args.jobs,
    )
    sys.stdout.write(render_report(report))
    Path(args.report).write_text(report_records(report), encoding="utf-8")


def cmd_explain(args):
    sys.stdout.write(render_model(_load_model(args.model), long_names=True))


def build_parser():
    parser = argparse.ArgumentParser(prog="cuephrase", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a synthetic labeled corpus")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--labeler", required=True, help="prosodic, textual, majority or rules:<path>")
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("prepare", help="combine judges and/or drop conjuncts")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--combine-judges", action="store_true")
    p.add_argument("--drop-conjuncts", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("baseline", help="score a hand-built model")
    p.add_argument("--model", choices=sorted(MODELS), required=True)
    p.add_argument("--in", dest="inp", required=True)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("train", help="learn a tree or rule list")
    p.add_argument("--learner", choices=sorted(LEARNERS), required=True)
    p.add_argument("--set", required=True, help="catalog set name, e.g. hl93features+")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="score a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--in", dest="inp", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("crossval", help="repeated 90/10 cross-validation")
    p.add_argument("--learner", choices=["tree", "rules", "both"], required=True)
    p.add_argument("--sets", default="all", help="'all' or comma-separated set names")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--report", default="crossval.jsonl", help="JSON Lines output path")
    p.set_defaults(func=cmd_crossval)

    p = sub.add_parser("explain", help="print a saved model with spelled-out feature names")
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_explain)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (CuePhraseError, OSError) as exc:
        print(f"cuephrase {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
