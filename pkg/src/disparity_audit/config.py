"""Run configuration: a single JSON document, with named evaluation-version
presets expanded into concrete parameter sets.

Preset values fill in only keys the user's config does not set explicitly,
so every preset is overridable.
"""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

from .concepts import ClassMapping
from .errors import ConfigError, DataError
from .groups import BoxFilterRule, GroupTermConfig, RegionGroupConfig, parse_box_filter

THRESHOLD_METRICS = ("tpr", "fpr", "precision", "recall", "accuracy", "f1")
RANKING_METRICS = ("ap", "auc_roc")
KNOWN_METRICS = THRESHOLD_METRICS + RANKING_METRICS + ("hit_rate",)

DEFAULTS: dict[str, Any] = {
    "group_method": "boxes",
    "metadata_key": "country",
    "box_filter": {"variant": "none"},
    "apply_term_exclusions": False,
    "mapping": None,
    "strict_mapping": True,
    "metrics": ["ap", "tpr", "fpr"],
    "k": 5,
    "validation_fraction": 0.2,
    "threshold_scope": "pooled",
    "sampling": {
        "ratio": [1, 5],
        "bootstraps": 250,
        "seed": 0,
        "min_per_group": 50,
        "mode": "baseline",
    },
    "evaluation_version": "custom",
    "drop_unlabeled": True,
    "top_n": 5,
    "output_dir": "out",
}

# Evaluation-version presets: the group-filter ladder plus the
# prevalence-controlled "reliable" protocol.
PRESETS: dict[str, dict[str, Any]] = {
    "baseline": {
        "box_filter": {"variant": "none"},
        "apply_term_exclusions": False,
        "sampling": {"mode": "baseline", "min_per_group": 50, "bootstraps": 250},
    },
    "v1": {
        "box_filter": {"variant": "min_area_pixels", "threshold": 600},
        "apply_term_exclusions": False,
        "sampling": {"mode": "baseline", "min_per_group": 50, "bootstraps": 250},
    },
    "v2": {
        "box_filter": {"variant": "relative_area", "use_min": 0.05, "ignore_max": 0.02},
        "apply_term_exclusions": False,
        "sampling": {"mode": "baseline", "min_per_group": 50, "bootstraps": 250},
    },
    "v3": {
        "box_filter": {"variant": "relative_area", "use_min": 0.05, "ignore_max": 0.02},
        "apply_term_exclusions": True,
        "sampling": {"mode": "baseline", "min_per_group": 50, "bootstraps": 250},
    },
    "reliable": {
        "box_filter": {"variant": "relative_area", "use_min": 0.05, "ignore_max": 0.02},
        "apply_term_exclusions": True,
        "sampling": {
            "mode": "reliable", "ratio": [1, 5], "min_per_group": 50, "bootstraps": 250,
        },
    },
}


def _deep_merge(base: dict, override: Mapping) -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, Mapping) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def resolve_config_dict(
    user: Mapping[str, Any], preset: str | None = None, seed: int | None = None
) -> dict[str, Any]:
    """DEFAULTS, then the preset's expansion, then the user's explicit keys."""
    version = preset or user.get("evaluation_version") or "custom"
    if version != "custom" and version not in PRESETS:
        raise ConfigError(
            f"unknown evaluation version {version!r}; expected one of "
            f"{sorted(PRESETS)} or 'custom'"
        )
    resolved = copy.deepcopy(DEFAULTS)
    if version != "custom":
        resolved = _deep_merge(resolved, PRESETS[version])
    resolved = _deep_merge(resolved, user)
    resolved["evaluation_version"] = version
    if seed is not None:
        resolved.setdefault("sampling", {})
        resolved["sampling"]["seed"] = int(seed)
    return resolved


def config_hash(resolved: Mapping[str, Any]) -> str:
    canonical = json.dumps(resolved, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass
class RunConfig:
    """Validated, fully resolved run configuration with loaded config objects."""

    raw: dict[str, Any]
    base_dir: Path
    annotations: Path
    predictions: Path
    group_method: str
    metadata_key: str
    terms: GroupTermConfig | None
    region: RegionGroupConfig | None
    box_filter: BoxFilterRule
    mapping: ClassMapping | None
    strict_mapping: bool
    metrics: tuple[str, ...]
    k: int
    validation_fraction: float
    threshold_scope: str
    ratio: tuple[int, int]
    bootstraps: int
    seed: int
    min_per_group: int
    sampling_mode: str
    evaluation_version: str
    drop_unlabeled: bool
    top_n: int
    output_dir: Path

    @property
    def threshold_metrics_requested(self) -> tuple[str, ...]:
        return tuple(m for m in self.metrics if m in THRESHOLD_METRICS)

    def group_order(self) -> tuple[str, ...]:
        if self.group_method in ("boxes", "captions"):
            return self.terms.group_order
        return self.region.groups()


def _path(resolved: Mapping, key: str, base: Path) -> Path:
    value = resolved.get(key)
    if not isinstance(value, str) or not value:
        raise ConfigError(f"config requires a {key!r} file path")
    p = Path(value)
    if not p.is_absolute():
        p = base / p
    if not p.exists():
        raise ConfigError(f"{key} file does not exist: {p}")
    return p


def load_config(
    path: str | Path, preset: str | None = None, seed: int | None = None,
    output_dir: str | None = None,
) -> RunConfig:
    """Load, resolve, and validate a run config file.

    Raises ConfigError for structural problems and missing referenced files.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file does not exist: {path}")
    try:
        with path.open(encoding="utf-8") as f:
            user = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}") from e
    if not isinstance(user, dict):
        raise ConfigError(f"config file {path} must contain a JSON object")
    resolved = resolve_config_dict(user, preset=preset, seed=seed)
    if output_dir is not None:
        # CLI-provided paths are CWD-relative, unlike config-file paths
        resolved["output_dir"] = str(Path(output_dir).absolute())
    base = path.parent
    return build_config(resolved, base)


def build_config(resolved: dict[str, Any], base: Path) -> RunConfig:
    group_method = resolved.get("group_method")
    if group_method not in ("boxes", "captions", "metadata"):
        raise ConfigError(
            f"group_method must be one of boxes/captions/metadata, got {group_method!r}"
        )

    annotations = _path(resolved, "annotations", base)
    predictions = _path(resolved, "predictions", base)

    terms = None
    region = None
    try:
        if group_method in ("boxes", "captions"):
            terms = GroupTermConfig.from_file(_path(resolved, "terms", base))
            if not resolved.get("apply_term_exclusions", False):
                terms = terms.without_exclusions()
        else:
            region = RegionGroupConfig.from_file(_path(resolved, "region", base))
        box_filter = parse_box_filter(resolved.get("box_filter"))
        mapping = None
        if resolved.get("mapping"):
            mapping = ClassMapping.from_file(_path(resolved, "mapping", base))
    except DataError as e:
        raise ConfigError(str(e)) from e

    metrics = tuple(resolved.get("metrics") or ())
    if not metrics:
        raise ConfigError("config requires a non-empty 'metrics' list")
    unknown = [m for m in metrics if m not in KNOWN_METRICS]
    if unknown:
        raise ConfigError(f"unknown metrics: {unknown}; expected among {KNOWN_METRICS}")

    k = int(resolved.get("k", 5))
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    vfrac = float(resolved.get("validation_fraction", 0.2))
    if not 0 < vfrac < 1:
        raise ConfigError(f"validation_fraction must be in (0, 1), got {vfrac}")
    scope = resolved.get("threshold_scope", "pooled")
    if scope not in ("pooled", "per_group"):
        raise ConfigError(f"threshold_scope must be pooled or per_group, got {scope!r}")

    sampling = resolved.get("sampling") or {}
    mode = sampling.get("mode", "baseline")
    if mode not in ("baseline", "reliable"):
        raise ConfigError(f"sampling mode must be baseline or reliable, got {mode!r}")
    ratio_raw = sampling.get("ratio", [1, 5])
    if (
        not isinstance(ratio_raw, (list, tuple)) or len(ratio_raw) != 2
        or any(not isinstance(x, int) or isinstance(x, bool) or x < 1 for x in ratio_raw)
    ):
        raise ConfigError(f"sampling ratio must be two positive integers, got {ratio_raw!r}")
    bootstraps = int(sampling.get("bootstraps", 250))
    if bootstraps < 1:
        raise ConfigError(f"bootstraps must be >= 1, got {bootstraps}")
    min_per_group = int(sampling.get("min_per_group", 50))
    if min_per_group < 1:
        raise ConfigError(f"min_per_group must be >= 1, got {min_per_group}")
    seed = int(sampling.get("seed", 0))

    out_dir = resolved.get("output_dir") or "out"
    output_dir = Path(out_dir)
    if not output_dir.is_absolute():
        output_dir = base / output_dir

    return RunConfig(
        raw=resolved,
        base_dir=base,
        annotations=annotations,
        predictions=predictions,
        group_method=group_method,
        metadata_key=str(resolved.get("metadata_key", "country")),
        terms=terms,
        region=region,
        box_filter=box_filter,
        mapping=mapping,
        strict_mapping=bool(resolved.get("strict_mapping", True)),
        metrics=metrics,
        k=k,
        validation_fraction=vfrac,
        threshold_scope=scope,
        ratio=(int(ratio_raw[0]), int(ratio_raw[1])),
        bootstraps=bootstraps,
        seed=seed,
        min_per_group=min_per_group,
        sampling_mode=mode,
        evaluation_version=str(resolved.get("evaluation_version", "custom")),
        drop_unlabeled=bool(resolved.get("drop_unlabeled", True)),
        top_n=int(resolved.get("top_n", 5)),
        output_dir=output_dir,
    )
