"""Concurrence scoring of predicted interest points against annotations.

A predicted point is a true positive when an annotated feature lies within
the match radius; one feature may absorb several predictions (a localized
physical feature can correspond to more than one reported point), so TP is
counted per prediction. Unmatched predictions are false positives and
features that attracted no prediction are false negatives.

All three rates share the TP + FP denominator. That makes tpr + fpr sum to
exactly 1, and it means fnr is not a conventional miss rate and can exceed
1 when there are more unmatched features than predictions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import UndefinedRatesError


@dataclass(frozen=True)
class AnnotatedFeature:
    x: float
    y: float
    label: str = ""


@dataclass(frozen=True)
class MatchResult:
    tp: int
    fp: int
    fn: int
    # one (prediction_index, feature_index or None) entry per prediction
    pairing: tuple[tuple[int, int | None], ...]


@dataclass(frozen=True)
class ConcurrenceRates:
    tpr: float
    fpr: float
    fnr: float


def match_points(
    predicted: Sequence,
    features: Sequence,
    match_radius: float = 10.0,
) -> MatchResult:
    """Pair predictions with their nearest annotated feature within radius.

    `predicted` and `features` are sequences of objects with x / y attributes
    or (x, y, ...) tuples. Distance ties between features resolve to the
    smaller feature index.
    """
    if match_radius <= 0:
        raise ValueError(f"match_radius must be positive, got {match_radius}")
    pred_xy = [_point_xy(p) for p in predicted]
    feat_xy = [_point_xy(f) for f in features]
    radius_sq = float(match_radius) ** 2

    matched_features: set[int] = set()
    pairing: list[tuple[int, int | None]] = []
    tp = fp = 0
    for pi, (px, py) in enumerate(pred_xy):
        best_index = None
        best_dist = None
        for fi, (fx, fy) in enumerate(feat_xy):
            dist = (px - fx) ** 2 + (py - fy) ** 2
            if dist <= radius_sq and (best_dist is None or dist < best_dist):
                best_index, best_dist = fi, dist
        if best_index is None:
            fp += 1
            pairing.append((pi, None))
        else:
            tp += 1
            matched_features.add(best_index)
            pairing.append((pi, best_index))
    fn = len(feat_xy) - len(matched_features)
    return MatchResult(tp=tp, fp=fp, fn=fn, pairing=tuple(pairing))


def compute_rates(tp: int, fp: int, fn: int) -> ConcurrenceRates:
    """Turn TP / FP / FN counts into tpr / fpr / fnr.

    tpr = TP / (TP + FP) and fnr = FN / (TP + FP); fpr is computed as
    1 - tpr, which equals FP / (TP + FP) up to one rounding unit and makes
    tpr + fpr == 1.0 hold exactly. Raises UndefinedRatesError when no
    predictions were scored (TP + FP == 0) rather than reporting zeros.
    """
    if tp < 0 or fp < 0 or fn < 0:
        raise ValueError("counts must be non-negative")
    denominator = tp + fp
    if denominator == 0:
        raise UndefinedRatesError("no predictions scored: TP + FP is zero")
    tpr = tp / denominator
    return ConcurrenceRates(tpr=tpr, fpr=1.0 - tpr, fnr=fn / denominator)


def format_rates_line(rates: ConcurrenceRates) -> str:
    """Render rates the way the CLI prints them: integer percentages."""
    return (
        f"tpr={round(rates.tpr * 100)}% "
        f"fpr={round(rates.fpr * 100)}% "
        f"fnr={round(rates.fnr * 100)}%"
    )


def evaluate_images(
    predictions: dict[str, Sequence],
    annotations: dict[str, Sequence],
    match_radius: float = 10.0,
) -> dict:
    """Score every image and build the concurrence report structure.

    `predictions` and `annotations` map image ids to point sequences and
    must cover the same ids; the report carries per-image counts (so rate
    curves can be derived later), aggregate counts, aggregate rates and
    per-image means.
    """
    pred_ids = set(predictions)
    truth_ids = set(annotations)
    if pred_ids != truth_ids:
        missing = sorted(pred_ids - truth_ids)
        extra = sorted(truth_ids - pred_ids)
        raise ValueError(
            f"image ids differ between records and annotations: "
            f"without annotations {missing}, without records {extra}"
        )

    per_image = []
    total_tp = total_fp = total_fn = 0
    for image_id in sorted(predictions):
        result = match_points(predictions[image_id], annotations[image_id], match_radius)
        total_tp += result.tp
        total_fp += result.fp
        total_fn += result.fn
        entry = {
            "image_id": image_id,
            "tp": result.tp,
            "fp": result.fp,
            "fn": result.fn,
            "pairing": [[pi, fi] for pi, fi in result.pairing],
        }
        if result.tp + result.fp > 0:
            rates = compute_rates(result.tp, result.fp, result.fn)
            entry.update(tpr=rates.tpr, fpr=rates.fpr, fnr=rates.fnr)
        else:
            entry.update(tpr=None, fpr=None, fnr=None)
        per_image.append(entry)

    n_images = len(per_image)
    aggregate = {
        "n_images": n_images,
        "tp": total_tp,
        "fp": total_fp,
        "fn": total_fn,
        "mean_tp": total_tp / n_images if n_images else None,
        "mean_fp": total_fp / n_images if n_images else None,
        "mean_fn": total_fn / n_images if n_images else None,
    }
    if total_tp + total_fp > 0:
        rates = compute_rates(total_tp, total_fp, total_fn)
        aggregate.update(tpr=rates.tpr, fpr=rates.fpr, fnr=rates.fnr)
    else:
        aggregate.update(tpr=None, fpr=None, fnr=None)

    return {
        "match_radius": float(match_radius),
        "per_image": per_image,
        "aggregate": aggregate,
    }


def load_annotations(path: str | Path) -> dict[str, list[AnnotatedFeature]]:
    """Load annotation documents from a file or a directory of files.

    Each document is {"image_id": str, "features": [{"x", "y", "label"}]};
    a file may hold one document or a list of them, a directory is scanned
    for *.json files.
    """
    p = Path(path)
    documents: list[dict] = []
    if p.is_dir():
        for child in sorted(p.glob("*.json")):
            documents.extend(_as_documents(json.loads(child.read_text()), child))
    else:
        documents.extend(_as_documents(json.loads(p.read_text()), p))

    annotations: dict[str, list[AnnotatedFeature]] = {}
    for doc in documents:
        image_id = doc["image_id"]
        if image_id in annotations:
            raise ValueError(f"duplicate annotations for image id {image_id!r}")
        annotations[image_id] = [
            AnnotatedFeature(x=float(f["x"]), y=float(f["y"]), label=str(f.get("label", "")))
            for f in doc.get("features", [])
        ]
    return annotations


def _as_documents(payload, source) -> list[dict]:
    if isinstance(payload, dict):
        payload = [payload]
    if not isinstance(payload, list) or not all(
        isinstance(doc, dict) and "image_id" in doc for doc in payload
    ):
        raise ValueError(f"{source}: expected annotation documents with an image_id")
    return payload


def _point_xy(point) -> tuple[float, float]:
    if hasattr(point, "x") and hasattr(point, "y"):
        return float(point.x), float(point.y)
    return float(point[0]), float(point[1])
