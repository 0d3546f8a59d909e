"""Rare-label filtering and prevalence-controlled bootstrap sampling.

Every draw's RNG stream is derived from (seed, concept, group, bootstrap
index), so results are identical regardless of evaluation order or
parallelism.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .concepts import ConceptEvalTable
from .errors import DataError, InvariantError


def _part_hash(part) -> int:
    if isinstance(part, (int, np.integer)):
        return int(part) & 0xFFFFFFFFFFFFFFFF
    digest = hashlib.blake2b(str(part).encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from a mixed tuple of ints and strings."""
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        h.update(_part_hash(part).to_bytes(8, "big"))
    return int.from_bytes(h.digest(), "big")


def derive_rng(*parts) -> np.random.Generator:
    """Deterministic generator keyed on the given parts; platform-independent."""
    return np.random.default_rng(np.random.SeedSequence(derive_seed(*parts)))


@dataclass(frozen=True)
class SamplingPlan:
    """Fixed-prevalence per-group budget for one concept's bootstrap draws.

    The budget is identical for every group: ``positives_per_group``
    positives and ``negatives_per_group`` negatives per draw, realizing the
    pos:neg ratio exactly.
    """

    concept: str
    pos_parts: int
    neg_parts: int
    positives_per_group: int
    negatives_per_group: int
    groups: tuple[str, ...]
    seed: int
    bootstrap_count: int

    def __post_init__(self):
        if self.positives_per_group < 1:
            raise DataError("sampling plan needs at least one positive per group")
        if self.bootstrap_count < 1:
            raise DataError("bootstrap_count must be >= 1")

    @property
    def prevalence(self) -> float:
        return self.pos_parts / (self.pos_parts + self.neg_parts)


@dataclass(frozen=True)
class BootstrapDraw:
    """Row indices (with repetition) into one group's positive/negative pools."""

    concept: str
    group: str
    bootstrap_index: int
    positive_indices: np.ndarray
    negative_indices: np.ndarray


def filter_rare_concepts(
    tables: Mapping[str, ConceptEvalTable],
    k: int,
    groups: Iterable[str] | None = None,
) -> list[str]:
    """Concepts retained under the rare-label rule: every group has >= k positives.

    ``groups`` defaults to the union of groups seen across all tables, so a
    concept missing a group entirely is removed.
    """
    if k < 1:
        raise DataError(f"rare-label threshold must be >= 1, got {k}")
    if groups is None:
        required = sorted({g for t in tables.values() for g in t.pools})
    else:
        required = sorted(groups)
    retained = [
        c for c in sorted(tables)
        if all(tables[c].n_pos(g) >= k for g in required)
    ]
    return retained


def compute_budget(
    table: ConceptEvalTable,
    ratio: tuple[int, int],
    *,
    seed: int = 0,
    bootstrap_count: int = 1,
) -> SamplingPlan:
    """Largest per-group budget achieving the exact pos:neg ratio in every group.

    With ratio 1:r this is p* = min over groups of min(P_g, floor(N_g / r)),
    and each draw takes (p*, r*p*) rows.

    Raises:
        DataError: naming the first group whose pool cannot host even one
            ratio unit.
    """
    pos_parts, neg_parts = int(ratio[0]), int(ratio[1])
    if pos_parts < 1 or neg_parts < 1:
        raise DataError(f"ratio parts must be positive integers, got {ratio}")
    units = None
    for g in table.groups:
        pool = table.pools[g]
        if pool.n_pos < pos_parts:
            raise DataError(
                f"concept {table.concept!r}: group {g!r} has {pool.n_pos} positive(s), "
                f"fewer than the {pos_parts} required per ratio unit"
            )
        if pool.n_neg < neg_parts:
            raise DataError(
                f"concept {table.concept!r}: group {g!r} has {pool.n_neg} negative(s), "
                f"fewer than the {neg_parts} required per ratio unit"
            )
        g_units = min(pool.n_pos // pos_parts, pool.n_neg // neg_parts)
        units = g_units if units is None else min(units, g_units)
    if units is None:
        raise DataError(f"concept {table.concept!r} has no groups to sample")
    return SamplingPlan(
        concept=table.concept,
        pos_parts=pos_parts,
        neg_parts=neg_parts,
        positives_per_group=units * pos_parts,
        negatives_per_group=units * neg_parts,
        groups=table.groups,
        seed=seed,
        bootstrap_count=bootstrap_count,
    )


def draw_bootstrap(
    table: ConceptEvalTable, plan: SamplingPlan, bootstrap_index: int
) -> dict[str, BootstrapDraw]:
    """One fixed-prevalence draw per group: uniform with replacement from each pool."""
    draws: dict[str, BootstrapDraw] = {}
    for g in plan.groups:
        pool = table.pools[g]
        rng = derive_rng(plan.seed, "draw", plan.concept, g, bootstrap_index)
        pos = rng.integers(0, pool.n_pos, size=plan.positives_per_group)
        neg = rng.integers(0, pool.n_neg, size=plan.negatives_per_group)
        draws[g] = BootstrapDraw(
            concept=plan.concept, group=g, bootstrap_index=bootstrap_index,
            positive_indices=pos, negative_indices=neg,
        )
    return draws


def draw_baseline_bootstrap(
    table: ConceptEvalTable, seed: int, bootstrap_index: int
) -> dict[str, BootstrapDraw]:
    """Standard bootstrap draw per group: the full pool resampled at its own size.

    Prevalence is not controlled; the positive count of a draw is random
    with expectation P_g / (P_g + N_g).
    """
    draws: dict[str, BootstrapDraw] = {}
    for g in table.groups:
        pool = table.pools[g]
        n = pool.n_pos + pool.n_neg
        if n == 0:
            raise InvariantError(f"empty pool for concept {table.concept!r} group {g!r}")
        rng = derive_rng(seed, "baseline", table.concept, g, bootstrap_index)
        idx = rng.integers(0, n, size=n)
        draws[g] = BootstrapDraw(
            concept=table.concept, group=g, bootstrap_index=bootstrap_index,
            positive_indices=idx[idx < pool.n_pos],
            negative_indices=idx[idx >= pool.n_pos] - pool.n_pos,
        )
    return draws


def baseline_full_sample(table: ConceptEvalTable) -> dict[str, BootstrapDraw]:
    """The identity draw: every row of every group's pool exactly once."""
    return {
        g: BootstrapDraw(
            concept=table.concept, group=g, bootstrap_index=-1,
            positive_indices=np.arange(table.pools[g].n_pos),
            negative_indices=np.arange(table.pools[g].n_neg),
        )
        for g in table.groups
    }


def draw_rows(
    table: ConceptEvalTable, draw: BootstrapDraw
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Materialize (scores, labels, ids) for one draw."""
    pool = table.pools[draw.group]
    scores = np.concatenate(
        [pool.pos_scores[draw.positive_indices], pool.neg_scores[draw.negative_indices]]
    )
    labels = np.concatenate(
        [
            np.ones(draw.positive_indices.shape[0], dtype=np.int8),
            np.zeros(draw.negative_indices.shape[0], dtype=np.int8),
        ]
    )
    ids = np.concatenate(
        [pool.pos_ids[draw.positive_indices], pool.neg_ids[draw.negative_indices]]
    )
    return scores, labels, ids
