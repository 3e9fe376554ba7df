"""Error rates, repeated 90/10 cross-validation, and result tables."""

from __future__ import annotations

import json
import math
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Sequence, Union

from .errors import CuePhraseError, EmptyCorpus
from .learners import LEARNERS
from .schema import CATALOG, FeatureSet, Label, project


class TooFewExamples(CuePhraseError, ValueError):
    pass


@dataclass(frozen=True)
class EvalResult:
    n: int
    miscls_discourse: int
    miscls_sentential: int

    @property
    def errors(self) -> int:
        return self.miscls_discourse + self.miscls_sentential

    @property
    def error(self) -> float:
        return self.errors / self.n


def _predictor(model):
    return getattr(model, "classify", model)


def error_rate(model, corpus) -> EvalResult:
    """Discourse tokens called sentential plus the reverse, over all tokens.

    ``model`` is an object with ``classify(example)`` or a plain callable.
    """
    predict = _predictor(model)
    n = md = ms = 0
    for e in corpus:
        n += 1
        guess = predict(e)
        if e.label is Label.DISCOURSE and guess is not Label.DISCOURSE:
            md += 1
        elif e.label is Label.SENTENTIAL and guess is not Label.SENTENTIAL:
            ms += 1
    if n == 0:
        raise EmptyCorpus("error rate of an empty corpus")
    return EvalResult(n, md, ms)


def run_seed(seed: int, run: int) -> random.Random:
    """Per-run generator depending only on (seed, run index)."""
    return random.Random(f"cv:{seed}:{run}")


def split_indices(n: int, seed: int, run: int, train_frac: float = 0.9):
    idx = list(range(n))
    run_seed(seed, run).shuffle(idx)
    cut = math.ceil(train_frac * n)
    return idx[:cut], idx[cut:]


@dataclass
class CvRow:
    set: str
    learner: str
    runs: List[float] = field(default_factory=list)

    @property
    def mean_error(self) -> float:
        return statistics.fmean(self.runs)

    @property
    def stderr(self) -> float:
        if len(self.runs) < 2:
            return 0.0
        return statistics.stdev(self.runs) / math.sqrt(len(self.runs))

    @property
    def mean_error_percent(self) -> float:
        return 100.0 * self.mean_error

    @property
    def stderr_percent(self) -> float:
        return 100.0 * self.stderr

    def record(self) -> dict:
        return {
            "set": self.set,
            "learner": self.learner,
            "mean_error": self.mean_error,
            "stderr": self.stderr,
            "runs": list(self.runs),
        }


@dataclass
class CvReport:
    rows: List[CvRow] = field(default_factory=list)


def _resolve(learner):
    if callable(learner):
        return learner
    return LEARNERS[learner]


def _one_run(corpus, learner, fset, run, train_frac, seed, prune):
    examples = list(corpus)
    train_idx, test_idx = split_indices(len(examples), seed, run, train_frac)
    train = [project(examples[i], fset) for i in train_idx]
    model = _resolve(learner)(train, fset, seed * 100 + run, prune)
    predict = _predictor(model)
    wrong = 0
    for i in test_idx:
        gold = examples[i].label
        # the learner only ever sees unlabeled test projections
        if predict(project(examples[i], fset).unlabeled()) is not gold:
            wrong += 1
    return wrong / len(test_idx)


def cross_validate(
    corpus,
    learner: Union[str, Callable],
    fset: FeatureSet,
    runs: int = 10,
    train_frac: float = 0.9,
    seed: int = 0,
    prune: bool = True,
) -> CvRow:
    """Average test error over ``runs`` independent random splits.

    Run ``i`` shuffles with a generator seeded by ``(seed, i)`` alone, so
    runs may be computed in any order.
    """
    n = len(corpus)
    if n - math.ceil(train_frac * n) < 1 or math.ceil(train_frac * n) < 1:
        raise TooFewExamples(f"{n} examples cannot be split {train_frac:.0%}/{1 - train_frac:.0%}")
    name = learner if isinstance(learner, str) else getattr(learner, "__name__", "custom")
    errors = [_one_run(corpus, learner, fset, i, train_frac, seed, prune) for i in range(runs)]
    return CvRow(fset.name, name, errors)


_WORKER_CORPUS = None


def _init_worker(corpus):
    global _WORKER_CORPUS
    _WORKER_CORPUS = corpus


def _task(args):
    learner, set_name, run, train_frac, seed, prune = args
    return _one_run(_WORKER_CORPUS, learner, CATALOG[set_name], run, train_frac, seed, prune)


def cross_validate_many(
    corpus,
    sets: Sequence[FeatureSet],
    learners: Sequence[str],
    runs: int = 10,
    train_frac: float = 0.9,
    seed: int = 0,
    prune: bool = True,
    jobs: int = 1,
) -> CvReport:
    """Cross-validate every (set, learner) pair; rows follow ``sets`` order.

    With ``jobs > 1`` the individual runs are spread over worker processes;
    results do not depend on ``jobs``.
    """
    n = len(corpus)
    if n - math.ceil(train_frac * n) < 1:
        raise TooFewExamples(f"{n} examples leave an empty test split")
    corpus = list(corpus)
    pairs = [(s.name, lr) for s in sets for lr in learners]
    tasks = [(lr, s, i, train_frac, seed, prune) for s, lr in pairs for i in range(runs)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(corpus,)) as pool:
            results = list(pool.map(_task, tasks, chunksize=max(1, len(tasks) // (jobs * 4))))
    else:
        results = [_one_run(corpus, lr, CATALOG[s], i, tf, sd, pr) for lr, s, i, tf, sd, pr in tasks]
    rows = []
    for k, (s, lr) in enumerate(pairs):
        rows.append(CvRow(s, lr, results[k * runs:(k + 1) * runs]))
    return CvReport(rows)


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def render_report(report: CvReport) -> str:
    """Fixed-width table: set, learner, mean error %, standard error %."""
    header = ("set", "learner", "mean%", "stderr%")
    body = [
        (r.set, r.learner, str(_round_half_up(r.mean_error_percent)), f"{r.stderr_percent:.1f}")
        for r in report.rows
    ]
    widths = [max(len(row[i]) for row in [header] + body) for i in range(4)]
    lines = []
    for row in [header] + body:
        cells = [row[0].ljust(widths[0]), row[1].ljust(widths[1]),
                 row[2].rjust(widths[2]), row[3].rjust(widths[3])]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def report_records(report: CvReport) -> str:
    """JSON Lines, one record per row, unrounded."""
    return "".join(json.dumps(r.record(), sort_keys=False) + "\n" for r in report.rows)


def load_records(text: str) -> CvReport:
    rows = []
    for line in text.splitlines():
        if line.strip():
            rec = json.loads(line)
            rows.append(CvRow(rec["set"], rec["learner"], list(rec["runs"])))
    return CvReport(rows)
