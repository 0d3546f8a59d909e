"""Classification and ranking metrics for one (concept, group) batch of rows.

Undefined values (e.g. precision with no predicted positives, AUC with a
degenerate class) are returned as ``None`` and must be handled explicitly by
callers; they are never silently coerced to 0 or NaN.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import AbstractSet, Mapping, Sequence

import numpy as np

from .errors import DataError

log = logging.getLogger("disparity_audit.metrics")


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "fp", "tn", "fn"):
            if getattr(self, name) < 0:
                raise DataError(f"confusion count {name} must be >= 0")

    @property
    def positives(self) -> int:
        return self.tp + self.fn

    @property
    def negatives(self) -> int:
        return self.fp + self.tn

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def prevalence(self) -> float:
        if self.total == 0:
            raise DataError("prevalence of an empty confusion matrix is undefined")
        return self.positives / self.total


@dataclass(frozen=True)
class RateBundle:
    """Confusion-derived rates; ``None`` marks an undefined rate."""

    tpr: float | None
    fpr: float | None
    precision: float | None
    recall: float | None
    accuracy: float | None
    f1: float | None
    prevalence: float


@dataclass(frozen=True)
class ThresholdChoice:
    """Decision threshold for one concept and the validation F1 it achieved."""

    concept: str
    threshold: float
    f1: float


def confusion_at_threshold(
    scores: Sequence[float], labels: Sequence[int], threshold: float
) -> ConfusionCounts:
    """Counts with the rule: predict positive iff score >= threshold."""
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels)
    pred = s >= threshold
    pos = y == 1
    return ConfusionCounts(
        tp=int(np.sum(pred & pos)),
        fp=int(np.sum(pred & ~pos)),
        tn=int(np.sum(~pred & ~pos)),
        fn=int(np.sum(~pred & pos)),
    )


def rates_from_confusion(c: ConfusionCounts) -> RateBundle:
    tpr = c.tp / c.positives if c.positives > 0 else None
    fpr = c.fp / c.negatives if c.negatives > 0 else None
    precision = c.tp / (c.tp + c.fp) if (c.tp + c.fp) > 0 else None
    accuracy = (c.tp + c.tn) / c.total if c.total > 0 else None
    recall = tpr
    if precision is None or recall is None:
        f1 = None
    elif precision + recall == 0:
        f1 = 0.0
    else:
        f1 = 2 * precision * recall / (precision + recall)
    return RateBundle(
        tpr=tpr, fpr=fpr, precision=precision, recall=recall,
        accuracy=accuracy, f1=f1, prevalence=c.prevalence,
    )


def precision_from_rates(prevalence: float, tpr: float, fpr: float) -> float | None:
    """Precision from prevalence and the class-conditional rates:

        precision = a*TPR / (a*TPR + (1-a)*FPR)

    Undefined (``None``) when the denominator is zero.
    """
    if not 0 <= prevalence <= 1:
        raise DataError(f"prevalence must be in [0, 1], got {prevalence}")
    denom = prevalence * tpr + (1 - prevalence) * fpr
    if denom <= 0:
        return None
    return prevalence * tpr / denom


def accuracy_from_rates(prevalence: float, tpr: float, fpr: float) -> float:
    """Accuracy identity: a*TPR + (1-a)*(1-FPR)."""
    if not 0 <= prevalence <= 1:
        raise DataError(f"prevalence must be in [0, 1], got {prevalence}")
    return prevalence * tpr + (1 - prevalence) * (1 - fpr)


def _ranking_order(
    scores: np.ndarray, tiebreak: Sequence | None
) -> np.ndarray:
    """Indices sorting scores descending; ties broken by the tiebreak key
    ascending (row position when no key is given)."""
    if tiebreak is None:
        tb = np.arange(scores.shape[0])
    else:
        tb = np.asarray(tiebreak)
    return np.lexsort((tb, -scores))


def average_precision(
    scores: Sequence[float], labels: Sequence[int], tiebreak: Sequence | None = None
) -> float | None:
    """Non-interpolated AP: mean over positives of precision at their rank.

    Equals the mean precision at each threshold where recall increments when
    scores are distinct. ``None`` with zero positive rows.
    """
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels)
    n_pos = int(np.sum(y == 1))
    if n_pos == 0:
        return None
    order = _ranking_order(s, tiebreak)
    y_sorted = (y[order] == 1)
    cum_pos = np.cumsum(y_sorted)
    ranks = np.arange(1, s.shape[0] + 1)
    prec_at_pos = cum_pos[y_sorted] / ranks[y_sorted]
    return float(prec_at_pos.sum() / n_pos)


def _average_ranks(s: np.ndarray) -> np.ndarray:
    """1-based ranks with ties sharing their average rank."""
    _, inverse, counts = np.unique(s, return_inverse=True, return_counts=True)
    ends = np.cumsum(counts)
    starts = ends - counts + 1
    return ((starts + ends) / 2.0)[inverse]


def auc_roc(scores: Sequence[float], labels: Sequence[int]) -> float | None:
    """Area under the ROC curve via the rank-sum identity.

    Equals the fraction of (positive, negative) pairs ranked correctly, ties
    counting one half. ``None`` when either class is empty.
    """
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels)
    pos = y == 1
    n_pos = int(pos.sum())
    n_neg = int(s.shape[0] - n_pos)
    if n_pos == 0 or n_neg == 0:
        return None
    ranks = _average_ranks(s)
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def select_threshold(
    scores: Sequence[float], labels: Sequence[int], concept: str = ""
) -> ThresholdChoice:
    """F1-maximizing decision threshold over the given validation rows.

    Candidates are the midpoints between consecutive distinct scores plus one
    value below the minimum (predict everything positive); the all-negative
    candidate above the maximum is disallowed. Ties go to the lowest
    threshold.
    """
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels)
    if s.shape[0] == 0:
        raise DataError("select_threshold needs at least one row")
    if int(np.sum(y == 1)) == 0:
        raise DataError("select_threshold needs at least one positive row")
    distinct = np.unique(s)
    candidates = [float(distinct[0]) - 1.0]
    candidates.extend(
        float((a + b) / 2.0) for a, b in zip(distinct[:-1], distinct[1:])
    )
    best_t = None
    best_f1 = -1.0
    for t in candidates:
        bundle = rates_from_confusion(confusion_at_threshold(s, y, t))
        f1 = bundle.f1 if bundle.f1 is not None else 0.0
        if f1 > best_f1:
            best_f1 = f1
            best_t = t
    return ThresholdChoice(concept=concept, threshold=best_t, f1=best_f1)


def split_validation_test(
    labels: Sequence[int], fraction: float, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Disjoint (validation, test) row indices, stratified by label.

    ``fraction`` of each stratum (rounded to nearest) goes to validation. If
    rounding would put no positive row in validation, falls back to an
    unstratified split with a warning. Deterministic per seed.
    """
    if not 0 < fraction < 1:
        raise DataError(f"fraction must be in (0, 1), got {fraction}")
    y = np.asarray(labels)
    n = y.shape[0]
    rng = np.random.default_rng(seed)
    pos_idx = np.flatnonzero(y == 1)
    neg_idx = np.flatnonzero(y != 1)
    n_val_pos = int(np.floor(fraction * pos_idx.size + 0.5))
    n_val_neg = int(np.floor(fraction * neg_idx.size + 0.5))
    if pos_idx.size > 0 and n_val_pos == 0:
        log.warning(
            "stratum too small for a stratified split (%d positives); "
            "falling back to an unstratified split", pos_idx.size,
        )
        perm = rng.permutation(n)
        n_val = int(np.floor(fraction * n + 0.5))
        val = np.sort(perm[:n_val])
        test = np.sort(perm[n_val:])
        return val, test
    val_parts = [
        rng.permutation(pos_idx)[:n_val_pos],
        rng.permutation(neg_idx)[:n_val_neg],
    ]
    val = np.sort(np.concatenate(val_parts).astype(np.int64))
    mask = np.ones(n, dtype=bool)
    mask[val] = False
    test = np.flatnonzero(mask)
    return val, test


def top_k_concepts(scores: Mapping[str, float], k: int) -> list[str]:
    """The k highest-scored concepts; score ties broken by concept id."""
    if k < 1:
        raise DataError(f"k must be >= 1, got {k}")
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return [concept for concept, _ in ranked[:k]]


def hit_vector(
    score_maps: Mapping[str, Mapping[str, float]],
    target_sets: Mapping[str, AbstractSet[str]],
    k: int,
) -> tuple[list[str], np.ndarray]:
    """Per-image top-k hit indicators over images with usable targets/scores.

    Images with an empty target set or no scores are excluded with a warning.
    Returns the kept image ids (sorted) and their 0/1 hit values.
    """
    ids: list[str] = []
    hits: list[int] = []
    skipped_empty = 0
    skipped_unscored = 0
    short_of_k = 0
    for image_id in sorted(target_sets):
        targets = target_sets[image_id]
        if not targets:
            skipped_empty += 1
            continue
        scores = score_maps.get(image_id)
        if not scores:
            skipped_unscored += 1
            continue
        if len(scores) < k:
            short_of_k += 1
        top = top_k_concepts(scores, k)
        ids.append(image_id)
        hits.append(1 if set(top) & set(targets) else 0)
    if skipped_empty:
        log.warning("hit rate: %d image(s) with empty target sets excluded", skipped_empty)
    if skipped_unscored:
        log.warning("hit rate: %d image(s) without scores excluded", skipped_unscored)
    if short_of_k:
        log.warning("hit rate: %d image(s) scored for fewer than k concepts", short_of_k)
    return ids, np.asarray(hits, dtype=float)


def hit_rate_at_k(
    score_maps: Mapping[str, Mapping[str, float]],
    target_sets: Mapping[str, AbstractSet[str]],
    k: int,
) -> float | None:
    """Fraction of images whose top-k predictions intersect their target set."""
    _, hits = hit_vector(score_maps, target_sets, k)
    if hits.size == 0:
        return None
    return float(hits.mean())
