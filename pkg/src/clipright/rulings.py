"""Copyright-rulings dataset: loading, statistics, threshold bands.

The bundled dataset covers 10 U.S. fair-use rulings over contested image
pairs, each row recording the ruling outcome and the similarity score for
the original/derivative pair. Per-class statistics use the sample (n-1)
standard deviation, the usual convention when quoting a "+/-" spread for
small samples.

Band semantics (defaults safe_max=0.6, fair_use_max=0.7):

    value <= safe_max                copyright_safe
    safe_max < value <= fair_use_max likely_fair_use
    fair_use_max < value             likely_infringement

Boundaries belong to the lower band. The shipped defaults are the
published thresholds; ``calibrate`` derives midpoint-based alternatives
from a labeled dataset (which land at 0.55/0.68 on the bundled data).
"""

from __future__ import annotations

import csv
import enum
import itertools
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .embedstore import EmbeddingStore
from .errors import (
    DuplicatePairIdError,
    EmptyDatasetError,
    InsufficientClassesError,
    LengthMismatchError,
    MalformedRowError,
    MissingFileError,
    MissingReportedMetricError,
    OutOfRangeError,
    UnknownLabelError,
)
from .metric import clip_metric

_CSV_HEADER = [
    "case_id",
    "case_name",
    "original_id",
    "derivative_id",
    "label",
    "reported_metric",
    "year",
    "notes",
]


class RulingLabel(enum.Enum):
    FAIR_USE = "fair_use"
    NOT_FAIR_USE = "not_fair_use"
    PROBABLY_NOT_FAIR_USE = "probably_not_fair_use"
    UNCONTESTED = "uncontested"


#: canonical reporting order for per-class tables
LABEL_ORDER = [
    RulingLabel.FAIR_USE,
    RulingLabel.NOT_FAIR_USE,
    RulingLabel.PROBABLY_NOT_FAIR_USE,
    RulingLabel.UNCONTESTED,
]


class Verdict(enum.Enum):
    COPYRIGHT_SAFE = "copyright_safe"
    LIKELY_FAIR_USE = "likely_fair_use"
    LIKELY_INFRINGEMENT = "likely_infringement"


#: verdict rank used by the monotonicity property (safe < fair use < infringement)
VERDICT_RANK = {
    Verdict.COPYRIGHT_SAFE: 0,
    Verdict.LIKELY_FAIR_USE: 1,
    Verdict.LIKELY_INFRINGEMENT: 2,
}


def parse_label(token: str) -> RulingLabel:
    try:
        return RulingLabel(token)
    except ValueError:
        raise UnknownLabelError(f"unknown ruling label: {token!r}") from None


@dataclass(frozen=True)
class CasePair:
    """One contested original/derivative pair and its ruling."""

    case_id: str
    case_name: str
    original_id: str
    derivative_id: str
    label: RulingLabel
    reported_metric: float | None = None
    year: int | None = None
    notes: str | None = None

    def __post_init__(self):
        if self.original_id == self.derivative_id:
            raise ValueError(f"{self.case_id}: original and derivative must differ")
        if self.reported_metric is not None and not -1.0 <= self.reported_metric <= 1.0:
            raise ValueError(
                f"{self.case_id}: reported_metric {self.reported_metric} outside [-1, 1]"
            )


class MetricSource(enum.Enum):
    """Where a pair's scalar comes from: the dataset's recorded value, or a
    fresh computation from an embedding store."""

    STORED = "stored"
    COMPUTED = "computed"


@dataclass(frozen=True)
class ClassStats:
    label: RulingLabel
    count: int
    mean: float
    std_dev: float | None  # sample std; None when count < 2


@dataclass(frozen=True)
class Thresholds:
    safe_max: float
    fair_use_max: float

    def __post_init__(self):
        if not (-1.0 <= self.safe_max < self.fair_use_max <= 1.0):
            raise ValueError(
                f"need -1 <= safe_max < fair_use_max <= 1, "
                f"got ({self.safe_max}, {self.fair_use_max})"
            )


DEFAULT_THRESHOLDS = Thresholds(safe_max=0.6, fair_use_max=0.7)


def load_cases(path: str | Path) -> list[CasePair]:
    """Parse the rulings CSV; validates header, labels and pair-id uniqueness."""
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"cases file not found: {path}")
    pairs: list[CasePair] = []
    seen: set[str] = set()
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedRowError(1, "missing header") from None
        if header != _CSV_HEADER:
            raise MalformedRowError(1, f"bad header {header!r}")
        for line_number, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(_CSV_HEADER):
                raise MalformedRowError(line_number, f"expected {len(_CSV_HEADER)} fields")
            case_id, case_name, original_id, derivative_id, label_tok, metric_tok, year_tok, notes = row
            if not case_id:
                raise MalformedRowError(line_number, "empty case_id")
            if case_id in seen:
                raise DuplicatePairIdError(f"duplicate case_id: {case_id}")
            label = parse_label(label_tok)
            reported = None
            if metric_tok != "":
                try:
                    reported = float(metric_tok)
                except ValueError:
                    raise MalformedRowError(line_number, f"bad metric {metric_tok!r}") from None
            year = None
            if year_tok != "":
                try:
                    year = int(year_tok)
                except ValueError:
                    raise MalformedRowError(line_number, f"bad year {year_tok!r}") from None
            try:
                pair = CasePair(
                    case_id=case_id,
                    case_name=case_name,
                    original_id=original_id,
                    derivative_id=derivative_id,
                    label=label,
                    reported_metric=reported,
                    year=year,
                    notes=notes or None,
                )
            except ValueError as e:
                raise MalformedRowError(line_number, str(e)) from None
            seen.add(case_id)
            pairs.append(pair)
    return pairs


def metric_for_pair(pair: CasePair, store: EmbeddingStore | None, source: MetricSource) -> float:
    """The scalar used in statistics for one pair.

    STORED returns the dataset's recorded value (ground truth for golden
    comparisons); COMPUTED re-derives it from the embedding store and thus
    depends on whichever model produced the store.
    """
    if source is MetricSource.STORED:
        if pair.reported_metric is None:
            raise MissingReportedMetricError(f"{pair.case_id} has no recorded metric")
        return pair.reported_metric
    if store is None:
        raise ValueError("computed source requires an embedding store")
    return clip_metric(store.get(pair.original_id), store.get(pair.derivative_id))


def class_stats(pairs: Sequence[CasePair], values: Sequence[float]) -> list[ClassStats]:
    """Per-label count / mean / sample std over parallel pairs+values lists."""
    if len(pairs) != len(values):
        raise LengthMismatchError(f"{len(pairs)} pairs vs {len(values)} values")
    by_label: dict[RulingLabel, list[float]] = {}
    for pair, value in zip(pairs, values):
        by_label.setdefault(pair.label, []).append(value)
    out = []
    for label in LABEL_ORDER:
        if label not in by_label:
            continue
        vals = by_label[label]
        std = statistics.stdev(vals) if len(vals) >= 2 else None
        out.append(ClassStats(label, len(vals), statistics.fmean(vals), std))
    return out


def classify(value: float, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> Verdict:
    """Map a similarity value into a verdict band (boundaries go to the lower band)."""
    if not -1.0 <= value <= 1.0:
        raise OutOfRangeError(f"metric value {value} outside [-1, 1]")
    if value <= thresholds.safe_max:
        return Verdict.COPYRIGHT_SAFE
    if value <= thresholds.fair_use_max:
        return Verdict.LIKELY_FAIR_USE
    return Verdict.LIKELY_INFRINGEMENT


def calibrate(pairs: Sequence[CasePair], values: Sequence[float]) -> Thresholds:
    """Midpoint calibration of the two band boundaries, rounded to 2 decimals.

    safe_max     = midpoint(uncontested mean, fair-use mean)
    fair_use_max = midpoint(fair-use mean, not-fair-use mean)

    Needs at least one pair in each of the fair_use, not_fair_use and
    uncontested classes, with distinct class means in increasing order.
    """
    if len(pairs) != len(values):
        raise LengthMismatchError(f"{len(pairs)} pairs vs {len(values)} values")
    means: dict[RulingLabel, float] = {}
    for stat in class_stats(pairs, values):
        means[stat.label] = stat.mean
    for needed in (RulingLabel.FAIR_USE, RulingLabel.NOT_FAIR_USE, RulingLabel.UNCONTESTED):
        if needed not in means:
            raise InsufficientClassesError(f"no {needed.value} pairs to calibrate from")
    safe_max = round((means[RulingLabel.UNCONTESTED] + means[RulingLabel.FAIR_USE]) / 2, 2)
    fair_use_max = round((means[RulingLabel.FAIR_USE] + means[RulingLabel.NOT_FAIR_USE]) / 2, 2)
    if not -1.0 <= safe_max < fair_use_max <= 1.0:
        raise InsufficientClassesError(
            f"class means too close to calibrate: bands ({safe_max}, {fair_use_max})"
        )
    return Thresholds(safe_max=safe_max, fair_use_max=fair_use_max)


#: verdicts counted as consistent with each ruling label
_CONSISTENT = {
    RulingLabel.FAIR_USE: {Verdict.COPYRIGHT_SAFE, Verdict.LIKELY_FAIR_USE},
    RulingLabel.NOT_FAIR_USE: {Verdict.LIKELY_INFRINGEMENT},
    RulingLabel.PROBABLY_NOT_FAIR_USE: {Verdict.LIKELY_INFRINGEMENT},
    RulingLabel.UNCONTESTED: {Verdict.COPYRIGHT_SAFE},
}


@dataclass(frozen=True)
class EvaluationSummary:
    """Confusion counts per ruling label, plus ruling-consistency accuracy.

    Accuracy counts fair_use pairs as correct when classified safe or
    likely-fair-use, and (probably-)not-fair-use pairs when classified
    likely-infringement. Uncontested pairs appear in the counts but are
    excluded from the accuracy denominator: they carry no ruling.
    """

    counts: dict[RulingLabel, dict[Verdict, int]]
    correct: int
    total: int

    @property
    def accuracy(self) -> float:
        return self.correct / self.total if self.total else 0.0


def evaluate(
    pairs: Sequence[CasePair],
    values: Sequence[float],
    thresholds: Thresholds = DEFAULT_THRESHOLDS,
) -> EvaluationSummary:
    """Classify every pair and summarize agreement with the rulings."""
    if len(pairs) != len(values):
        raise LengthMismatchError(f"{len(pairs)} pairs vs {len(values)} values")
    if not pairs:
        raise EmptyDatasetError("nothing to evaluate")
    counts: dict[RulingLabel, dict[Verdict, int]] = {}
    correct = 0
    total = 0
    for pair, value in zip(pairs, values):
        verdict = classify(value, thresholds)
        row = counts.setdefault(pair.label, {v: 0 for v in Verdict})
        row[verdict] += 1
        if pair.label is not RulingLabel.UNCONTESTED:
            total += 1
            if verdict in _CONSISTENT[pair.label]:
                correct += 1
    return EvaluationSummary(counts=counts, correct=correct, total=total)


def expand_uncontested(pairs: Sequence[CasePair], work_ids: Iterable[str]) -> list[CasePair]:
    """Generate uncontested pairs: every cross-combination of works that was
    never litigated against each other.

    These form the background population for histograms and calibration.
    Output order is deterministic (sorted ids, combinations in order).
    """
    contested = {frozenset((p.original_id, p.derivative_id)) for p in pairs}
    out = []
    for a, b in itertools.combinations(sorted(set(work_ids)), 2):
        if frozenset((a, b)) in contested:
            continue
        out.append(
            CasePair(
                case_id=f"uncontested__{a}__{b}",
                case_name="",
                original_id=a,
                derivative_id=b,
                label=RulingLabel.UNCONTESTED,
            )
        )
    return out
