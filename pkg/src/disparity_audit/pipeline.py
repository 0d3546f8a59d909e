"""Pipeline orchestration: assign groups, map concepts, filter and sample,
compute metrics, reduce to disparities, and write deterministic artifacts.

Every stage is a pure function of (inputs, config, seed); output files are
byte-identical across runs with the same inputs.
"""

from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import __version__
from .concepts import (
    ConceptEvalTable,
    build_concept_tables,
    image_target_set,
)
from .config import RANKING_METRICS, THRESHOLD_METRICS, RunConfig, config_hash
from .data import (
    AnnotatedImage,
    GroupAssignment,
    PredictionRecord,
    load_annotations,
    load_predictions,
    validate_dataset,
)
from .disparity import (
    MetricEstimate,
    aggregate_disparity,
    per_concept_disparity,
    significance_flag,
)
from .errors import DataError
from .groups import (
    assign_group_from_boxes,
    assign_group_from_captions,
    assign_group_from_metadata,
    assignment_summary,
)
from .metrics import (
    auc_roc,
    average_precision,
    confusion_at_threshold,
    hit_vector,
    rates_from_confusion,
    select_threshold,
    split_validation_test,
)
from .sampling import (
    compute_budget,
    derive_rng,
    derive_seed,
    draw_baseline_bootstrap,
    draw_bootstrap,
    draw_rows,
    filter_rare_concepts,
)

log = logging.getLogger("disparity_audit.pipeline")

RESULT_COLUMNS = [
    "metric", "concept", "group_a", "group_b", "point", "ci_low", "ci_high",
    "significant", "n_pos_per_group", "n_neg_per_group", "bootstraps_used",
    "evaluation_version", "full_sample",
]


def assign_groups(
    images: Sequence[AnnotatedImage], cfg: RunConfig
) -> list[GroupAssignment]:
    """Dispatch to the configured group operationalization method."""
    if cfg.group_method == "boxes":
        return [assign_group_from_boxes(img, cfg.terms, cfg.box_filter) for img in images]
    if cfg.group_method == "captions":
        return [assign_group_from_captions(img, cfg.terms) for img in images]
    return [
        assign_group_from_metadata(img, cfg.region, cfg.metadata_key) for img in images
    ]


@dataclass
class LoadedDataset:
    images: list[AnnotatedImage]
    predictions: list[PredictionRecord]
    validation: dict
    images_loaded: int
    unlabeled: list[str]


def load_dataset(cfg: RunConfig) -> LoadedDataset:
    """Load and cross-validate both files, then apply the unlabeled-image drop.

    Predictions are resolved against the full ingested set first (referential
    integrity is a property of the files), and records for dropped images are
    discarded alongside them.
    """
    images = load_annotations(cfg.annotations)
    predictions = load_predictions(cfg.predictions, images)
    validation = validate_dataset(images, predictions)
    n_loaded = len(images)
    unlabeled = validation["images_without_labels"]
    if cfg.drop_unlabeled and unlabeled:
        dropped = set(unlabeled)
        images = [img for img in images if img.image_id not in dropped]
        predictions = [p for p in predictions if p.image_id not in dropped]
        log.info("dropped %d image(s) without labels", len(dropped))
    return LoadedDataset(
        images=images, predictions=predictions, validation=validation,
        images_loaded=n_loaded, unlabeled=unlabeled,
    )


@dataclass
class ConceptEvaluation:
    """Per-bootstrap metric values for one concept, keyed (metric, group)."""

    concept: str
    values: dict[tuple[str, str], np.ndarray]
    full_sample: dict[tuple[str, str], float | None]
    sample_sizes: dict[str, tuple[int, int]]
    thresholds: dict[str, float]


def _metric_values(
    metric: str,
    scores: np.ndarray,
    labels: np.ndarray,
    ids: np.ndarray,
    threshold: float | None,
) -> float | None:
    if metric == "ap":
        return average_precision(scores, labels, tiebreak=ids)
    if metric == "auc_roc":
        return auc_roc(scores, labels)
    bundle = rates_from_confusion(confusion_at_threshold(scores, labels, threshold))
    return getattr(bundle, metric)


def evaluate_concept(
    table: ConceptEvalTable,
    *,
    metrics: Sequence[str],
    mode: str,
    ratio: tuple[int, int],
    bootstraps: int,
    seed: int,
    validation_fraction: float,
    threshold_scope: str,
) -> ConceptEvaluation:
    """Bootstrap one concept's metrics for every group.

    When threshold metrics are requested, a stratified validation/test split
    is made per group, thresholds are selected on validation rows (pooled
    across groups or per group), and all metrics are evaluated on the test
    portion. Ranking-only runs use the full pools.

    Raises:
        DataError: when the concept cannot be evaluated (budget or threshold
            preconditions); callers skip the concept with a report entry.
    """
    concept = table.concept
    groups = table.groups
    threshold_metrics = [m for m in metrics if m in THRESHOLD_METRICS]
    point_metrics = [m for m in metrics if m in THRESHOLD_METRICS + RANKING_METRICS]

    thresholds: dict[str, float] = {}
    if threshold_metrics:
        val_rows: dict[str, tuple[np.ndarray, np.ndarray]] = {}
        eval_indices: dict[str, tuple[np.ndarray, np.ndarray]] = {}
        for g in groups:
            pool = table.pools[g]
            scores, labels, _ = pool.all_rows()
            split_seed = derive_seed(seed, "split", concept, g)
            val_idx, test_idx = split_validation_test(
                labels, validation_fraction, split_seed
            )
            val_rows[g] = (scores[val_idx], labels[val_idx])
            pos_test = test_idx[test_idx < pool.n_pos]
            neg_test = test_idx[test_idx >= pool.n_pos] - pool.n_pos
            eval_indices[g] = (pos_test, neg_test)
        if threshold_scope == "pooled":
            pooled_scores = np.concatenate([val_rows[g][0] for g in groups])
            pooled_labels = np.concatenate([val_rows[g][1] for g in groups])
            choice = select_threshold(pooled_scores, pooled_labels, concept=concept)
            thresholds = {g: choice.threshold for g in groups}
        else:
            for g in groups:
                choice = select_threshold(val_rows[g][0], val_rows[g][1], concept=concept)
                thresholds[g] = choice.threshold
        eval_table = table.restrict(eval_indices)
    else:
        eval_table = table

    plan = None
    if mode == "reliable":
        plan = compute_budget(eval_table, ratio, seed=seed, bootstrap_count=bootstraps)
        sizes = {
            g: (plan.positives_per_group, plan.negatives_per_group) for g in groups
        }
    else:
        sizes = {
            g: (eval_table.pools[g].n_pos, eval_table.pools[g].n_neg) for g in groups
        }

    values: dict[tuple[str, str], np.ndarray] = {
        (m, g): np.full(bootstraps, np.nan) for m in point_metrics for g in groups
    }
    for b in range(bootstraps):
        if plan is not None:
            draws = draw_bootstrap(eval_table, plan, b)
        else:
            draws = draw_baseline_bootstrap(eval_table, seed, b)
        for g in groups:
            scores, labels, ids = draw_rows(eval_table, draws[g])
            for m in point_metrics:
                v = _metric_values(m, scores, labels, ids, thresholds.get(g))
                if v is not None:
                    values[(m, g)][b] = v

    full_sample: dict[tuple[str, str], float | None] = {}
    for g in groups:
        scores, labels, ids = eval_table.pools[g].all_rows()
        for m in point_metrics:
            full_sample[(m, g)] = _metric_values(m, scores, labels, ids, thresholds.get(g))

    return ConceptEvaluation(
        concept=concept,
        values=values,
        full_sample=full_sample,
        sample_sizes=sizes,
        thresholds=thresholds,
    )


def _pairs(groups: Sequence[str]) -> list[tuple[str, str]]:
    return [(a, b) for i, a in enumerate(groups) for b in groups[i + 1:]]


def evaluate_tables(
    tables: Mapping[str, ConceptEvalTable],
    concepts: Sequence[str],
    groups: Sequence[str],
    cfg: RunConfig,
    jobs: int = 1,
) -> tuple[list[MetricEstimate], dict]:
    """Evaluate retained concepts and reduce to per-concept and aggregate
    disparity estimates for every group pair."""
    point_metrics = [m for m in cfg.metrics if m != "hit_rate"]
    skipped: dict[str, str] = {}
    evaluations: dict[str, ConceptEvaluation] = {}

    def _one(concept: str) -> tuple[str, ConceptEvaluation | None, str | None]:
        table = tables[concept]
        missing = [g for g in groups if g not in table.pools]
        if missing:
            return concept, None, f"no rows for group(s): {', '.join(missing)}"
        try:
            ev = evaluate_concept(
                table,
                metrics=point_metrics,
                mode=cfg.sampling_mode,
                ratio=cfg.ratio,
                bootstraps=cfg.bootstraps,
                seed=cfg.seed,
                validation_fraction=cfg.validation_fraction,
                threshold_scope=cfg.threshold_scope,
            )
            return concept, ev, None
        except DataError as e:
            return concept, None, str(e)

    if jobs > 1 and len(concepts) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_one, concepts))
    else:
        outcomes = [_one(c) for c in concepts]
    for concept, ev, reason in outcomes:
        if ev is None:
            skipped[concept] = reason
            log.warning("skipping concept %s: %s", concept, reason)
        else:
            evaluations[concept] = ev

    estimates: list[MetricEstimate] = []
    evaluated = [c for c in concepts if c in evaluations]
    for metric in point_metrics:
        for a, b in _pairs(groups):
            for concept in evaluated:
                ev = evaluations[concept]
                fs_a = ev.full_sample[(metric, a)]
                fs_b = ev.full_sample[(metric, b)]
                full = None if fs_a is None or fs_b is None else fs_a - fs_b
                estimates.append(
                    per_concept_disparity(
                        ev.values[(metric, a)], ev.values[(metric, b)],
                        metric=metric, concept=concept, group_a=a, group_b=b,
                        sample_sizes=ev.sample_sizes, full_sample=full,
                    )
                )
            if evaluated:
                estimates.append(
                    aggregate_disparity(
                        {c: evaluations[c].values[(metric, a)] for c in evaluated},
                        {c: evaluations[c].values[(metric, b)] for c in evaluated},
                        metric=metric, group_a=a, group_b=b,
                    )
                )
    diagnostics = {
        "concepts_evaluated": evaluated,
        "concepts_skipped": skipped,
        "thresholds": {
            c: evaluations[c].thresholds for c in evaluated if evaluations[c].thresholds
        },
    }
    return estimates, diagnostics


def evaluate_hit_rate(
    images: Sequence[AnnotatedImage],
    assignments: Sequence[GroupAssignment],
    predictions: Sequence[PredictionRecord],
    groups: Sequence[str],
    cfg: RunConfig,
) -> list[MetricEstimate]:
    """Top-k hit rate per group with full-pool bootstrap CIs on pair differences."""
    group_of = {a.image_id: a.group for a in assignments if a.assigned}
    scores_of = {p.image_id: p.scores for p in predictions}
    hit_values: dict[str, np.ndarray] = {}
    n_images: dict[str, int] = {}
    for g in groups:
        targets = {}
        score_maps = {}
        for img in images:
            if group_of.get(img.image_id) != g:
                continue
            targets[img.image_id] = image_target_set(
                img, cfg.mapping, strict=cfg.strict_mapping
            )
            if img.image_id in scores_of:
                score_maps[img.image_id] = scores_of[img.image_id]
        _, hits = hit_vector(score_maps, targets, cfg.k)
        hit_values[g] = hits
        n_images[g] = int(hits.size)

    estimates: list[MetricEstimate] = []
    for a, b in _pairs(groups):
        if hit_values[a].size == 0 or hit_values[b].size == 0:
            log.warning("hit rate: empty pool for pair (%s, %s); skipped", a, b)
            continue
        boots: dict[str, np.ndarray] = {}
        for g in (a, b):
            hits = hit_values[g]
            draws = np.empty(cfg.bootstraps)
            for i in range(cfg.bootstraps):
                rng = derive_rng(cfg.seed, "hit_rate", g, i)
                draws[i] = hits[rng.integers(0, hits.size, size=hits.size)].mean()
            boots[g] = draws
        estimates.append(
            per_concept_disparity(
                boots[a], boots[b],
                metric="hit_rate", concept="aggregate", group_a=a, group_b=b,
                sample_sizes={a: (n_images[a], 0), b: (n_images[b], 0)},
                full_sample=float(hit_values[a].mean() - hit_values[b].mean()),
            )
        )
    return estimates


@dataclass
class PipelineResult:
    estimates: list[MetricEstimate]
    assignments: list[GroupAssignment]
    manifest: dict
    validation: dict


def run_pipeline(cfg: RunConfig, jobs: int = 1) -> PipelineResult:
    """Execute the full audit pipeline in memory."""
    loaded = load_dataset(cfg)
    images = loaded.images
    predictions = loaded.predictions
    validation = loaded.validation
    n_loaded = loaded.images_loaded
    unlabeled = loaded.unlabeled

    assignments = assign_groups(images, cfg)
    groups = list(cfg.group_order())
    summary = assignment_summary(assignments, groups=groups)

    group_of = {a.image_id: a.group for a in assignments if a.assigned}
    scored_concepts: set[str] = set()
    for p in predictions:
        scored_concepts.update(p.scores)
    target_universe: set[str] = set()
    for img in images:
        if img.image_id in group_of:
            target_universe.update(
                image_target_set(img, cfg.mapping, strict=cfg.strict_mapping)
            )
    eval_concepts = sorted(target_universe & scored_concepts)
    unscored_targets = sorted(target_universe - scored_concepts)
    if unscored_targets:
        log.warning(
            "%d target concept(s) have no scores and were dropped: %s",
            len(unscored_targets), ", ".join(unscored_targets[:10]),
        )

    estimates: list[MetricEstimate] = []
    eval_diag: dict = {"concepts_evaluated": [], "concepts_skipped": {}}
    retained: list[str] = []
    if eval_concepts and any(m != "hit_rate" for m in cfg.metrics):
        tables = build_concept_tables(
            images, assignments, predictions, eval_concepts,
            mapping=cfg.mapping, strict=cfg.strict_mapping,
        )
        retained = filter_rare_concepts(tables, cfg.min_per_group, groups=groups)
        point_estimates, eval_diag = evaluate_tables(
            tables, retained, groups, cfg, jobs=jobs
        )
        estimates.extend(point_estimates)
    if "hit_rate" in cfg.metrics:
        estimates.extend(
            evaluate_hit_rate(images, assignments, predictions, groups, cfg)
        )

    manifest = {
        "tool": "disparity-audit",
        "version": __version__,
        "config_hash": config_hash(cfg.raw),
        "config": cfg.raw,
        "seed": cfg.seed,
        "stages": {
            "ingest": {
                "images_loaded": n_loaded,
                "images_without_labels": len(unlabeled),
                "images_dropped_unlabeled": len(unlabeled) if cfg.drop_unlabeled else 0,
                "images_used": len(images),
                "prediction_records": len(predictions),
                "score_coverage_gaps": len(validation["unscored"]),
                "zero_positive_concepts": len(validation["zero_positive_concepts"]),
            },
            "group_assignment": {
                "method": cfg.group_method,
                "groups": groups,
                "summary": summary,
                "assigned_total": sum(1 for a in assignments if a.assigned),
                "excluded_total": sum(1 for a in assignments if not a.assigned),
            },
            "concepts": {
                "candidates": len(eval_concepts),
                "unscored_targets": len(unscored_targets),
                "retained_after_rare_filter": len(retained),
                "rare_filter_min_per_group": cfg.min_per_group,
                "skipped": eval_diag.get("concepts_skipped", {}),
            },
            "evaluation": {
                "metrics": list(cfg.metrics),
                "mode": cfg.sampling_mode,
                "ratio": list(cfg.ratio),
                "bootstraps": cfg.bootstraps,
                "evaluation_version": cfg.evaluation_version,
            },
        },
    }
    return PipelineResult(
        estimates=estimates, assignments=assignments,
        manifest=manifest, validation=validation,
    )


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _fmt_sizes(sizes: Mapping[str, tuple[int, int]], which: int) -> str:
    if not sizes:
        return ""
    values = {g: s[which] for g, s in sizes.items()}
    distinct = set(values.values())
    if len(distinct) == 1:
        return str(next(iter(distinct)))
    return ";".join(f"{g}={values[g]}" for g in sorted(values))


def estimate_to_row(est: MetricEstimate, evaluation_version: str) -> dict[str, str]:
    return {
        "metric": est.metric,
        "concept": est.concept,
        "group_a": est.group_a,
        "group_b": est.group_b,
        "point": _fmt(est.point),
        "ci_low": _fmt(est.ci_low),
        "ci_high": _fmt(est.ci_high),
        "significant": _fmt(significance_flag(est)),
        "n_pos_per_group": _fmt_sizes(est.sample_sizes, 0),
        "n_neg_per_group": _fmt_sizes(est.sample_sizes, 1),
        "bootstraps_used": str(est.bootstraps_used),
        "evaluation_version": evaluation_version,
        "full_sample": _fmt(est.full_sample),
    }


def write_results_csv(
    estimates: Sequence[MetricEstimate], evaluation_version: str, path: Path
) -> None:
    rows = [estimate_to_row(e, evaluation_version) for e in estimates]
    rows.sort(key=lambda r: (r["metric"], r["concept"], r["group_a"], r["group_b"]))
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=RESULT_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def read_results_csv(path: str | Path) -> list[dict]:
    path = Path(path)
    if not path.exists():
        raise DataError(f"results file not found: {path}")
    out: list[dict] = []
    with path.open(encoding="utf-8", newline="") as f:
        for row in csv.DictReader(f):
            parsed = dict(row)
            for key in ("point", "ci_low", "ci_high", "full_sample"):
                parsed[key] = float(row[key]) if row.get(key) else None
            parsed["significant"] = row.get("significant") == "true"
            out.append(parsed)
    return out


def write_assignments_csv(
    assignments: Sequence[GroupAssignment], path: Path, only_excluded: bool = False
) -> None:
    rows = [a for a in assignments if not (only_excluded and a.assigned)]
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["image_id", "outcome", "group_or_reason"])
        for a in sorted(rows, key=lambda a: a.image_id):
            writer.writerow(
                [a.image_id, "assigned" if a.assigned else "excluded", a.group_or_reason]
            )


def _safe_name(text: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-._" else "_" for ch in text)


def write_plot_data(rows: Sequence[dict], out_dir: Path) -> list[Path]:
    """One CSV per (metric, group pair): (concept, point, ci_low, ci_high)
    sorted by point; the data behind ranked-disparity charts."""
    out_dir.mkdir(parents=True, exist_ok=True)
    by_key: dict[tuple[str, str, str], list[dict]] = {}
    for row in rows:
        if row["concept"] == "aggregate" or row["point"] is None:
            continue
        by_key.setdefault((row["metric"], row["group_a"], row["group_b"]), []).append(row)
    written: list[Path] = []
    for (metric, a, b), items in sorted(by_key.items()):
        items.sort(key=lambda r: (r["point"], r["concept"]))
        path = out_dir / f"{_safe_name(metric)}__{_safe_name(a)}_vs_{_safe_name(b)}.csv"
        with path.open("w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["concept", "point", "ci_low", "ci_high"])
            for r in items:
                writer.writerow([r["concept"], _fmt(r["point"]), _fmt(r["ci_low"]), _fmt(r["ci_high"])])
        written.append(path)
    return written


def compare_results(rows_a: Sequence[dict], rows_b: Sequence[dict]) -> list[dict]:
    """Join two results tables on (metric, concept, group pair) and diff them."""
    def key(r):
        return (r["metric"], r["concept"], r["group_a"], r["group_b"])

    index_a = {key(r): r for r in rows_a}
    index_b = {key(r): r for r in rows_b}
    shared = sorted(set(index_a) & set(index_b))
    concepts_a = {k[1] for k in index_a}
    concepts_b = {k[1] for k in index_b}
    if not concepts_a & concepts_b:
        raise DataError("results share no concepts; nothing to compare")
    out: list[dict] = []
    for k in shared:
        pa = index_a[k]["point"]
        pb = index_b[k]["point"]
        if pa is None or pb is None:
            continue
        out.append(
            {
                "metric": k[0], "concept": k[1], "group_a": k[2], "group_b": k[3],
                "point_a": pa, "point_b": pb,
                "sign_flip": (pa > 0 > pb) or (pa < 0 < pb),
                "magnitude_delta": abs(pb) - abs(pa),
            }
        )
    return out


def write_compare_csv(rows: Sequence[dict], path: Path) -> None:
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(
            ["metric", "concept", "group_a", "group_b", "point_a", "point_b",
             "sign_flip", "magnitude_delta"]
        )
        for r in rows:
            writer.writerow(
                [r["metric"], r["concept"], r["group_a"], r["group_b"],
                 _fmt(r["point_a"]), _fmt(r["point_b"]), _fmt(r["sign_flip"]),
                 _fmt(r["magnitude_delta"])]
            )


def render_report(rows: Sequence[dict], top_n: int = 5, manifest: dict | None = None) -> str:
    """Human-readable summary: largest per-concept disparities per metric and
    group pair, aggregate rows, and exclusion accounting when available."""
    lines: list[str] = []
    if not rows:
        return "no results to report (empty results table)\n"
    by_metric_pair: dict[tuple[str, str, str], list[dict]] = {}
    aggregates: list[dict] = []
    for row in rows:
        if row["concept"] == "aggregate":
            aggregates.append(row)
        elif row["point"] is not None:
            by_metric_pair.setdefault(
                (row["metric"], row["group_a"], row["group_b"]), []
            ).append(row)

    for (metric, a, b), items in sorted(by_metric_pair.items()):
        items.sort(key=lambda r: (-abs(r["point"]), r["concept"]))
        lines.append(f"== {metric}: {a} vs {b} (positive favors {a}) ==")
        for r in items[:top_n]:
            star = " *" if r["significant"] else ""
            lines.append(
                f"  {r['concept']:<30} {r['point']:+.4f}  "
                f"[{r['ci_low']:+.4f}, {r['ci_high']:+.4f}]{star}"
            )
        lines.append("")

    if aggregates:
        lines.append("== aggregate disparities ==")
        for r in sorted(aggregates, key=lambda r: (r["metric"], r["group_a"], r["group_b"])):
            if r["point"] is None:
                continue
            star = " *" if r["significant"] else ""
            lines.append(
                f"  {r['metric']:<10} {r['group_a']} vs {r['group_b']}: "
                f"{r['point']:+.4f}  [{r['ci_low']:+.4f}, {r['ci_high']:+.4f}]{star}"
            )
        lines.append("")

    if manifest:
        ga = manifest.get("stages", {}).get("group_assignment", {})
        summary = ga.get("summary", {})
        if summary:
            lines.append("== image accounting ==")
            for key in sorted(summary):
                lines.append(f"  {key:<22} {summary[key]}")
            lines.append("")
    return "\n".join(lines) + "\n"


def write_outputs(result: PipelineResult, cfg: RunConfig) -> dict[str, Path]:
    """Write results.csv, plotdata/, manifest.json, and exclusions.csv."""
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    results_path = out / "results.csv"
    write_results_csv(result.estimates, cfg.evaluation_version, results_path)
    rows = read_results_csv(results_path)
    plot_dir = out / "plotdata"
    write_plot_data(rows, plot_dir)
    manifest_path = out / "manifest.json"
    with manifest_path.open("w", encoding="utf-8") as f:
        json.dump(result.manifest, f, sort_keys=True, indent=2)
        f.write("\n")
    exclusions_path = out / "exclusions.csv"
    write_assignments_csv(result.assignments, exclusions_path, only_excluded=True)
    report_path = out / "report.txt"
    report_path.write_text(
        render_report(rows, top_n=cfg.top_n, manifest=result.manifest), encoding="utf-8"
    )
    return {
        "results": results_path,
        "plotdata": plot_dir,
        "manifest": manifest_path,
        "exclusions": exclusions_path,
        "report": report_path,
    }
