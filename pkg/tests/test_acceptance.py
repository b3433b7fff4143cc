"""Acceptance criteria, one test each.

Every test records a single PASS/FAIL line; the lines are printed in the
terminal summary (see conftest.py) and when the module is run directly.
"""

import itertools
import math
import operator
import time
from datetime import timedelta

import networkx as nx
import numpy as np
import pytest

from proxnet.analyze import coverage_summary, device_scan_rates, severity_histogram, summarize_scan_rates
from proxnet.backbone import extract_backbone
from proxnet.export import read_graphml, to_networkx, write_graphml
from proxnet.ingest import filter_to_participants, parse_scan_log, serialize_scan_log
from proxnet.layout import fruchterman_reingold
from proxnet.model import DEFAULT_GAD7_BANDS, DEFAULT_PHQ9_BANDS, StudyConfig, SurveyResponse
from proxnet.proximity import ScanTally, WeightedNetwork, build_weighted_network, edge_weight, tally_scans
from proxnet.sim import (
    CohortSpec,
    OsProfile,
    cohort_roster,
    generate_office_schedule,
    ground_truth_network,
    os_cohort,
    simulate_scans,
)

from conftest import STUDY_END, STUDY_START
from oracles import brute_backbone, direct_weight, random_weights

RESULTS: list[str] = []
WINDOW = (STUDY_START, STUDY_END)
MIN = timedelta(minutes=1)


def verdict(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def run_cohort(spec, schedule):
    """Simulate, then push the log through the real ingest path."""
    config = StudyConfig(spec.study_start, spec.study_end, salt=spec.salt, mac_prehashed=True)
    roster = cohort_roster(spec)
    lines = list(serialize_scan_log(simulate_scans(spec, schedule)))
    events, report = parse_scan_log(lines, config, roster)
    events = filter_to_participants(events, roster, report)
    return roster, lines, tally_scans(events, spec.window, roster.participants, spec.window)


# --------------------------------------------------------------------------


def test_criterion_1_edge_weight_contract():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20160328)
    checked = 0
    worst = 0.0
    bad = []
    for _ in range(10_000):
        n = int(rng.integers(2, 6))
        ids = [f"n{k}" for k in range(n)]
        scans = {p: int(rng.integers(0, 8065)) for p in ids}
        det = {(i, j): int(rng.integers(0, scans[i] + 1)) for i, j in itertools.permutations(ids, 2)}
        tally = ScanTally(WINDOW, scans, det)
        for i, j in itertools.combinations(ids, 2):
            w, w_rev = edge_weight(tally, i, j), edge_weight(tally, j, i)
            ref = direct_weight(det[(i, j)], det[(j, i)], scans[i], scans[j])
            worst = max(worst, abs(w - ref))
            if not (0.0 <= w <= 1.0 and w == w_rev and abs(w - ref) <= 1e-12):
                bad.append((i, j))
            checked += 1
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 5.0
    verdict(1, ok, f"{checked} pairs over 10000 tallies, {len(bad)} violations, max |R - direct| = {worst:.1e}, {elapsed:.2f}s (< 5s)")


def test_criterion_2_candidate_edges():
    spec = os_cohort(47, 7, STUDY_START, STUDY_END)
    roster = cohort_roster(spec)
    net = build_weighted_network(tally_scans([], WINDOW, roster.participants))
    verdict(2, net.n_candidate_edges == 1431, f"54-participant roster -> {net.n_candidate_edges} candidate edges (expected 1431)")


def test_criterion_3_disparity_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    mismatched_sets = 0
    worst = 0.0
    for g in range(200):
        n = int(rng.integers(2, 8))
        ids, weights = random_weights(rng, n, density=float(rng.uniform(0.3, 1.0)))
        net = WeightedNetwork(tuple(ids), weights)
        bb = extract_backbone(net, 0.05)
        kept, alphas = brute_backbone(weights, 0.05)
        mismatched_sets += bb.edges != kept
        for key, (a_i, a_j) in alphas.items():
            s = bb.significance[key]
            worst = max(worst, abs(s.alpha_at_i - a_i), abs(s.alpha_at_j - a_j))
    elapsed = time.perf_counter() - t0
    ok = mismatched_sets == 0 and worst <= 1e-9 and elapsed < 30.0
    verdict(3, ok, f"200 graphs (<= 7 nodes): {mismatched_sets} retained-set mismatches, max |alpha - quadrature| = {worst:.1e} (<= 1e-9), {elapsed:.2f}s (< 30s)")


def test_criterion_4_backbone_properties():
    rng = np.random.default_rng(4)
    thresholds = [0.001, 0.01, 0.05, 0.1, 0.2, 0.5, 0.9]
    scale_fail = mono_fail = 0
    for _ in range(100):
        ids, weights = random_weights(rng, 50, density=float(rng.uniform(0.05, 0.3)))
        net = WeightedNetwork(tuple(ids), weights)
        c = float(10 ** rng.uniform(-3, 3))
        base = extract_backbone(net, 0.05).edges
        scale_fail += extract_backbone(net.scaled(c), 0.05).edges != base
        sets = [extract_backbone(net, t).edges for t in thresholds]
        mono_fail += any(not a <= b for a, b in zip(sets, sets[1:]))
    ok = scale_fail == 0 and mono_fail == 0
    verdict(4, ok, f"100 graphs of 50 nodes: {scale_fail} scale-invariance failures, {mono_fail} threshold-monotonicity failures")


def rate_cohort(seed=0):
    spec = os_cohort(56, 7, STUDY_START, STUDY_END, rng_seed=seed)
    ids = spec.ids
    groups = [ids[k::5] for k in range(5)]
    return spec, generate_office_schedule(spec, groups, overlap_fraction=[0.5, 0.4, 0.6, 0.3, 0.45])


def test_criterion_5_rate_reproduction():
    t0 = time.perf_counter()
    spec, schedule = rate_cohort()
    roster, _, tally = run_cohort(spec, schedule)
    summary = summarize_scan_rates(device_scan_rates(tally, spec.scan_interval), roster.os_map())
    ios = summary["by_group"]["IOS"]["mean_rate"]
    android = summary["by_group"]["ANDROID"]["mean_rate"]
    pooled = summary["mean_rate"]
    elapsed = time.perf_counter() - t0
    ok = abs(ios - 0.29) <= 0.02 and abs(android - 0.55) <= 0.02 and abs(pooled - 0.32) <= 0.02 and elapsed < 60
    verdict(5, ok, f"iOS {ios:.4f} (0.29+-0.02), Android {android:.4f} (0.55+-0.02), pooled {pooled:.4f} (0.32+-0.02), {elapsed:.1f}s (< 60s)")


def test_criterion_6_coverage_semantics():
    thresholds = [MIN * 2.5, MIN * 5, MIN * 10, MIN * 30, MIN * 60]
    notes = []
    ok = True

    full = CohortSpec(tuple((f"f{k}", OsProfile("IOS", 1.0)) for k in range(12)), STUDY_START, STUDY_END)
    sched = generate_office_schedule(full, [full.ids[:6], full.ids[6:]], overlap_fraction=0.5)
    _, _, tally = run_cohort(full, sched)
    fractions = coverage_summary(tally, thresholds).fraction_covered
    full_ok = all(v == 1.0 for v in fractions.values())
    notes.append(f"full compliance 100% at >= 2.5 min: {full_ok}")
    ok &= full_ok

    runs = [fractions]
    profile_cov = None
    for seed in range(3):
        spec, schedule = rate_cohort(seed)
        _, _, tally = run_cohort(spec, schedule)
        runs.append(coverage_summary(tally, thresholds).fraction_covered)
        if profile_cov is None:
            profile_cov = coverage_summary(tally, [MIN * 10, MIN * 30]).fraction_covered
            gap = coverage_summary(tally, [MIN * 10, MIN * 30], method="max_gap").fraction_covered
    mono_ok = all([r[t] for t in thresholds] == sorted(r[t] for t in thresholds) for r in runs)
    notes.append(f"non-decreasing on {len(runs)} simulated runs: {mono_ok}")
    ok &= mono_ok

    hand = ScanTally(WINDOW, {"a": 2016, "b": 2016})
    boundary_ok = coverage_summary(hand, [MIN * 10]).fraction_covered[MIN * 10] == 1.0
    notes.append(f"4032 scans / 40320 min covered at 10 min: {boundary_ok}")
    ok &= boundary_ok

    c10, c30 = profile_cov[MIN * 10], profile_cov[MIN * 30]
    strict_ok = c30 > c10 and 0 < c10 <= 1 and 0 < c30 <= 1
    notes.append(
        f"default OS profile cov(30) > cov(10) in (0,1]: {strict_ok} "
        f"(mean-interval {c10:.3f} / {c30:.3f}; max-gap variant {gap[MIN * 10]:.3f} / {gap[MIN * 30]:.3f})"
    )
    ok &= strict_ok
    verdict(6, ok, "; ".join(notes))


def test_criterion_7_end_to_end_reconstruction():
    t0 = time.perf_counter()
    per_seed = []
    for seed in range(5):
        spec = os_cohort(18, 2, STUDY_START, STUDY_END, rng_seed=seed, detection_probability=1.0)
        groups = [spec.ids[0::2], spec.ids[1::2]]
        schedule = generate_office_schedule(spec, groups, overlap_fraction=0.3)
        truth = {k for k, f in ground_truth_network(schedule).items() if f > 0}
        _, _, tally = run_cohort(spec, schedule)
        bb = extract_backbone(build_weighted_network(tally), 0.05)
        tp = len(bb.edges & truth)
        precision = tp / len(bb.edges) if bb.edges else float("nan")
        recall = tp / len(truth)
        per_seed.append((precision, recall, len(bb.edges)))
    elapsed = time.perf_counter() - t0
    ok = all(p >= 0.9 and r >= 0.9 for p, r, _ in per_seed) and elapsed < 120
    shown = ", ".join(f"seed {s}: P={p:.2f} R={r:.2f} ({n} edges)" for s, (p, r, n) in enumerate(per_seed))
    verdict(7, ok, f"backbone at alpha=0.05 vs 90 within-group pairs: {shown}; {elapsed:.1f}s (< 120s)")


def survey_set(instrument, totals):
    n = 9 if instrument == "PHQ9" else 7
    out = []
    for k, total in enumerate(totals):
        items = [3] * (total // 3) + ([total % 3] if total % 3 else [])
        out.append(SurveyResponse(f"p{k:02d}", instrument, tuple(items + [0] * (n - len(items))), STUDY_START))
    return out


def test_criterion_8_survey_banding():
    phq = severity_histogram(survey_set("PHQ9", [2] * 38 + [7] * 12 + [12] * 4 + [22] * 2), DEFAULT_PHQ9_BANDS)
    gad = severity_histogram(survey_set("GAD7", [1] * 44 + [6] * 10 + [12] + [17]), DEFAULT_GAD7_BANDS)
    ok = list(phq.values()) == [38, 12, 4, 0, 2] and list(gad.values()) == [44, 10, 1, 1]
    verdict(8, ok, f"PHQ-9 {list(phq.values())} (expected [38, 12, 4, 0, 2]), GAD-7 {list(gad.values())} (expected [44, 10, 1, 1])")


def test_criterion_9_layout():
    ids, weights = random_weights(np.random.default_rng(9), 40, density=0.1)
    net = WeightedNetwork(tuple(ids), weights)
    same = fruchterman_reingold(net, seed=7).coordinates == fruchterman_reingold(net, seed=7).coordinates
    pair = WeightedNetwork(("a", "b"), {("a", "b"): 1.0})
    k = math.sqrt(1.0 / 2)
    dists = []
    for seed in range(10):
        c = fruchterman_reingold(pair, seed=seed, iterations=200).coordinates
        dists.append(math.dist(c["a"], c["b"]))
    worst = max(abs(d - k) / k for d in dists)
    verdict(9, same and worst <= 0.2, f"bit-identical reruns: {same}; 2-node distance within {worst:.1%} of k over 10 seeds (<= 20%)")


def test_criterion_10_round_trips(tmp_path):
    spec = os_cohort(56, 7, STUDY_START, STUDY_START + timedelta(days=7), rng_seed=10)
    schedule = generate_office_schedule(spec, [spec.ids[k::5] for k in range(5)], overlap_fraction=0.4)
    config = StudyConfig(spec.study_start, spec.study_end, salt=spec.salt, mac_prehashed=True)
    lines = list(serialize_scan_log(simulate_scans(spec, schedule)))
    events, _ = parse_scan_log(lines, config)
    log_ok = list(serialize_scan_log(events)) == lines and parse_scan_log(serialize_scan_log(events), config)[0] == events

    _, _, tally = run_cohort(spec, schedule)
    net = build_weighted_network(tally)
    bb = extract_backbone(net, 0.3)
    bands = {p: ("minimal" if k % 2 else "mild") for k, p in enumerate(net.nodes)}
    graph_ok = True
    for name, graph in (("net", net), ("bb", bb)):
        path = tmp_path / f"{name}.graphml"
        write_graphml(graph, path, bands)
        back = read_graphml(path)
        original = to_networkx(graph, bands)
        graph_ok &= nx.is_isomorphic(original, back, node_match=operator.eq, edge_match=operator.eq)
        graph_ok &= back.graph == original.graph
        graph_ok &= all(back.edges[e] == original.edges[e] for e in original.edges)
    verdict(
        10,
        log_ok and graph_ok,
        f"scan log of {len(lines)} lines parse/serialize identity: {log_ok}; GraphML network ({len(net.weights)} edges) "
        f"and backbone export/import isomorphic with attributes: {graph_ok}",
    )


if __name__ == "__main__":  # pragma: no cover
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
