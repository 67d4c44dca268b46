"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines as they complete.
"""

from __future__ import annotations

import json
import time
from pathlib import Path

import numpy as np
from click.testing import CliRunner

from uncommonmap import (
    analyze,
    blur_interest,
    build_cooccurrence,
    compute_rates,
    evaluate_images,
    extract_points,
    fuse_interest,
    save_image,
    segment_plane,
    uncommon_map,
)
from uncommonmap.cli import main
from uncommonmap.evaluation import AnnotatedFeature, format_rates_line

from .conftest import build_red_bed
from .oracles import (
    cooccurrence_reference,
    gaussian_smooth_reference,
    greedy_points_reference,
)


def _check(criterion: str, passed: bool, detail: str = "") -> None:
    status = "PASS" if passed else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"acceptance {criterion}: {status}{suffix}")
    assert passed, f"{criterion} failed{suffix}"


def test_criterion_1_metric_fidelity():
    started = time.perf_counter()

    rates = compute_rates(69, 32, 32)
    line = format_rates_line(rates)

    predictions = {}
    annotations = {}
    for i in range(32):
        image_id = f"img{i:02d}"
        preds = [(10.0, 10.0), (30.0, 10.0), (200.0, 200.0)]
        feats = [AnnotatedFeature(10, 10), AnnotatedFeature(30, 10), AnnotatedFeature(150, 40)]
        if i < 5:
            preds.append((50.0, 10.0))
            feats.append(AnnotatedFeature(50, 10))
        predictions[image_id] = preds
        annotations[image_id] = feats
    report = evaluate_images(predictions, annotations, match_radius=10.0)
    aggregate = report["aggregate"]

    elapsed = time.perf_counter() - started
    mean_tp = aggregate["mean_tp"]
    ok = (
        line == "tpr=68% fpr=32% fnr=32%"
        and (aggregate["tp"], aggregate["fp"], aggregate["fn"]) == (69, 32, 32)
        and mean_tp == 69 / 32 == 2.15625
        and f"{mean_tp:.1f}" == "2.2"
        and aggregate["mean_fp"] == 1.0
        and aggregate["mean_fn"] == 1.0
        and elapsed < 1.0
    )
    _check(
        "criterion 1 (metric fidelity)",
        ok,
        f"{line}; mean_tp={mean_tp}; {elapsed:.3f}s",
    )


def test_criterion_2_desk_scale_detection():
    started = time.perf_counter()
    hits = 0
    seeds = 100
    for seed in range(seeds):
        img, (wx, wy), _ = build_red_bed(seed=seed)
        result = analyze(img)
        if any(
            (p.x - wx) ** 2 + (p.y - wy) ** 2 <= 10**2
            for p in result.points.blurred_points
        ):
            hits += 1
    elapsed = time.perf_counter() - started
    _check(
        "criterion 2 (desk-scale detection)",
        hits >= 95 and elapsed < 60.0,
        f"{hits}/100 seeds hit within 10 px, {elapsed:.1f}s",
    )


def test_criterion_3_oracle_equivalence():
    rng = np.random.default_rng(2024)

    blur_worst = 0.0
    for _ in range(50):
        grid = rng.random((16, 16)) * 24.0
        got = blur_interest(grid, blur_width=10)
        want = gaussian_smooth_reference(grid, sigma=5.0)
        blur_worst = max(blur_worst, float(np.max(np.abs(got - want))))

    points_exact = True
    for _ in range(50):
        grid = rng.random((32, 32))
        points, _ = extract_points(grid, k=3, suppression_radius=10.0)
        want = greedy_points_reference(grid, k=3, suppression_radius=10.0)
        if [(p.x, p.y, p.score) for p in points] != want:
            points_exact = False
            break

    histogram_exact = True
    for _ in range(50):
        grid = rng.integers(0, 8, size=(8, 8))
        hist = build_cooccurrence(grid, bins=8)
        if not np.array_equal(hist.bins, cooccurrence_reference(grid, 8)):
            histogram_exact = False
            break

    _check(
        "criterion 3 (oracle equivalence)",
        blur_worst < 1e-9 and points_exact and histogram_exact,
        f"blur max abs err {blur_worst:.2e}; greedy exact {points_exact}; "
        f"histogram exact {histogram_exact}",
    )


def test_criterion_4_invariant_suite():
    rng = np.random.default_rng(99)
    cases = 200
    failures = []

    for case in range(cases):
        grid = rng.integers(0, 8, size=(int(rng.integers(1, 9)), int(rng.integers(1, 9))))
        hist = build_cooccurrence(grid, bins=8)
        if not np.array_equal(hist.bins, hist.bins.T):
            failures.append(("histogram symmetry", case))
            break

    for case in range(cases):
        plane = rng.random((int(rng.integers(4, 13)), int(rng.integers(4, 13))))
        try:
            seg = segment_plane(plane, quantization_bins=8)
        except Exception:
            continue
        values = uncommon_map(seg)
        pops = seg.populations
        if np.any(np.diff(pops) > 0):
            failures.append(("anti-monotonicity", case))
            break
        for a in range(1, seg.n_classes + 1):
            for b in range(a + 1, seg.n_classes + 1):
                ua = a if a <= 8 else 0
                ub = b if b <= 8 else 0
                if pops[a - 1] > pops[b - 1] and ua and ub and not ua < ub:
                    failures.append(("anti-monotonicity", case))

    for case in range(cases):
        maps = [rng.integers(0, 9, size=(6, 6)) for _ in range(3)]
        fused = fuse_interest(*maps)
        if fused.min() < 0 or fused.max() > 24:
            failures.append(("raw bounds", case))
            break

    for case in range(cases):
        raw = rng.random((int(rng.integers(2, 13)), int(rng.integers(2, 13)))) * 24.0
        width = int(rng.integers(1, 13))
        blurred = blur_interest(raw, blur_width=width)
        if blurred.min() < raw.min() - 1e-12 or blurred.max() > raw.max() + 1e-12:
            failures.append(("blur convexity", case))
            break

    for case in range(cases):
        grid = rng.random((int(rng.integers(4, 17)), int(rng.integers(4, 17))))
        radius = float(rng.uniform(1.0, 8.0))
        points, _ = extract_points(grid, k=4, suppression_radius=radius)
        for i in range(len(points)):
            for j in range(i + 1, len(points)):
                dist_sq = (points[i].x - points[j].x) ** 2 + (points[i].y - points[j].y) ** 2
                if dist_sq < radius**2 - 1e-9:
                    failures.append(("point separation", case))

    for case in range(cases):
        tp, fp = int(rng.integers(0, 300)), int(rng.integers(0, 300))
        if tp + fp == 0:
            continue
        rates = compute_rates(tp, fp, int(rng.integers(0, 300)))
        if rates.tpr + rates.fpr != 1.0:
            failures.append(("tpr+fpr", case))
            break

    _check(
        "criterion 4 (invariant suite)",
        not failures,
        f"{cases} cases per property, failures: {failures or 'none'}",
    )


def test_criterion_5_determinism(tmp_path):
    source = tmp_path / "mission"
    source.mkdir()
    for i in range(3):
        img, _, _ = build_red_bed(seed=i, height=48, width=64)
        save_image(source / f"frame{i}.png", img)
    save_image(source / "flat.png", np.full((48, 64, 3), 0.5))

    flags = ["--downsample-factor", "1", "--crop-width", "64", "--crop-height", "48"]
    runner = CliRunner()
    payloads = []
    for run in ("first", "second"):
        out = tmp_path / run
        result = runner.invoke(main, ["batch", str(source), "-o", str(out), *flags])
        assert result.exit_code == 0, result.output
        chunks = []
        for record_path in sorted(out.glob("*.json")):
            document = json.loads(record_path.read_text())
            document.pop("timing", None)
            chunks.append(json.dumps(document, sort_keys=True).encode())
        payloads.append(b"\n".join(chunks))
    _check(
        "criterion 5 (determinism)",
        payloads[0] == payloads[1] and len(payloads[0]) > 0,
        f"{len(payloads[0])} payload bytes compared",
    )


def test_criterion_6_performance(tmp_path):
    source = tmp_path / "one"
    source.mkdir()
    img, _, _ = build_red_bed(seed=0)
    save_image(source / "frame.png", img)

    runner = CliRunner()
    out = tmp_path / "out"
    result = runner.invoke(
        main,
        ["batch", str(source), "-o", str(out), "--downsample-factor", "1"],
    )
    assert result.exit_code == 0, result.output
    summary = json.loads((out / "batch_summary.json").read_text())
    mean_ms = summary["timing"]["mean_ms"]
    _check(
        "criterion 6 (performance)",
        summary["count"] == 1 and mean_ms is not None and mean_ms <= 1000.0,
        f"192x144 analyze mean {mean_ms:.0f} ms per batch summary (budget 1000 ms)",
    )


def test_criterion_7_reproducible_core_documented():
    # Field-survey concurrence rates cannot be recomputed without the
    # original imagery and annotations; what this repository verifies is the
    # metric arithmetic (criterion 1) and the method behavior on synthetic
    # fixtures (criteria 2-4). The README must say so instead of promising
    # headline rates.
    readme = (Path(__file__).parent.parent / "README.md").read_text()
    documented = "synthetic" in readme and "annotation" in readme.lower()
    _check(
        "criterion 7 (reproducible core)",
        documented,
        "README scopes verification to metric arithmetic and synthetic fixtures",
    )
