from datetime import time, timedelta

import numpy as np
import pytest

from proxnet.analyze import coverage_summary
from proxnet.exceptions import ConfigError, ValidationError
from proxnet.ingest import filter_to_participants
from proxnet.proximity import build_weighted_network, edge_weight, tally_scans
from proxnet.sim import (
    ANDROID,
    IOS,
    CohortSpec,
    ContactSchedule,
    OsProfile,
    cohort_roster,
    device_mac,
    generate_office_schedule,
    ground_truth_network,
    load_scenario,
    os_cohort,
    simulate_scans,
)

from conftest import STUDY_END, STUDY_START

WINDOW = (STUDY_START, STUDY_END)
FULL = OsProfile("IOS", 1.0)


def cohort(profiles, **kw):
    return CohortSpec(tuple((f"p{k}", prof) for k, prof in enumerate(profiles)), STUDY_START, STUDY_END, **kw)


def always(spec, *pairs):
    return ContactSchedule(spec.window, tuple((pair, *spec.window) for pair in pairs))


def test_office_full_overlap_covers_every_workday():
    spec = cohort([IOS] * 3)
    sched = generate_office_schedule(spec, [spec.ids], overlap_fraction=1.0)
    spans = sched.pair_intervals()
    assert set(spans) == {("p0", "p1"), ("p0", "p2"), ("p1", "p2")}
    for blocks in spans.values():
        assert len(blocks) == 20
        assert all(e - s == timedelta(hours=8) and s.time() == time(9) for s, e in blocks)
        assert all(s.weekday() < 5 for s, _ in blocks)


def test_office_zero_overlap_is_empty():
    spec = cohort([IOS] * 3)
    assert generate_office_schedule(spec, [spec.ids], overlap_fraction=0.0).pair_intervals() == {}


def test_office_groups_never_cross():
    spec = cohort([IOS] * 4)
    sched = generate_office_schedule(spec, [["p0", "p1"], ["p2", "p3"]], overlap_fraction=0.5)
    assert set(sched.pair_intervals()) == {("p0", "p1"), ("p2", "p3")}


def test_office_requires_partition():
    spec = cohort([IOS] * 3)
    with pytest.raises(ValidationError):
        generate_office_schedule(spec, [["p0", "p1"]])
    with pytest.raises(ValidationError):
        generate_office_schedule(spec, [["p0", "p1"], ["p1", "p2"]])


def test_schedule_merges_and_validates():
    spec = cohort([IOS] * 2)
    t = STUDY_START
    sched = ContactSchedule(
        spec.window,
        ((("p1", "p0"), t, t + timedelta(hours=2)), (("p0", "p1"), t + timedelta(hours=1), t + timedelta(hours=3))),
    )
    assert sched.pair_intervals() == {("p0", "p1"): [(t, t + timedelta(hours=3))]}
    with pytest.raises(ValidationError):
        ContactSchedule(spec.window, ((("p0", "p1"), t - timedelta(hours=1), t),))
    with pytest.raises(ValidationError):
        ContactSchedule(spec.window, ((("p0", "p1"), t, t),))


def test_ground_truth_examples():
    spec = cohort([IOS] * 4)
    office = generate_office_schedule(spec, [["p0", "p1"], ["p2"], ["p3"]], overlap_fraction=1.0)
    truth = ground_truth_network(office, spec.ids)
    assert truth[("p0", "p1")] == pytest.approx(8 * 20 / (24 * 28))
    assert truth[("p0", "p2")] == 0.0
    assert ground_truth_network(always(spec, ("p2", "p3")))[("p2", "p3")] == 1.0


def test_full_compliance_always_together_gives_weight_one():
    spec = cohort([FULL, OsProfile("ANDROID", 1.0)])
    events = filter_to_participants(simulate_scans(spec, always(spec, ("p0", "p1"))), cohort_roster(spec))
    t = tally_scans(events, WINDOW, spec.ids)
    assert t.n_scans("p0") == t.n_detections("p0", "p1") == 8064
    assert edge_weight(t, "p0", "p1") == 1.0


def test_zero_compliance_emits_nothing():
    spec = cohort([OsProfile("IOS", 0.0)] * 3)
    assert simulate_scans(spec, always(spec, ("p0", "p1"))) == []


def test_performed_scans_binomial():
    spec = cohort([IOS] * 20, rng_seed=17)
    events = simulate_scans(spec, always(spec))
    t = tally_scans(events, WINDOW, spec.ids)
    mean, sd = 0.29 * 8064, np.sqrt(8064 * 0.29 * 0.71)
    for pid in spec.ids:
        assert abs(t.n_scans(pid) - mean) <= 3 * sd


def test_deterministic_and_seed_sensitive():
    spec = os_cohort(3, 2, STUDY_START, STUDY_START + timedelta(days=7), rng_seed=4)
    sched = generate_office_schedule(spec, [spec.ids], overlap_fraction=0.5)
    assert simulate_scans(spec, sched) == simulate_scans(spec, sched)
    other = os_cohort(3, 2, STUDY_START, STUDY_START + timedelta(days=7), rng_seed=5)
    assert simulate_scans(other, sched) != simulate_scans(spec, sched)


def test_no_false_positives():
    spec = os_cohort(6, 2, STUDY_START, STUDY_END, rng_seed=2, detection_probability=0.7)
    sched = generate_office_schedule(spec, [spec.ids[:4], spec.ids[4:]], overlap_fraction=[0.3, 0.6])
    spans = sched.pair_intervals()
    for e in simulate_scans(spec, sched):
        if e.peer is None:
            continue
        key = tuple(sorted((e.scanner, e.peer)))
        assert any(s <= e.timestamp < end for s, end in spans[key])


def test_weight_tracks_co_presence_fraction():
    spec = os_cohort(2, 2, STUDY_START, STUDY_END, rng_seed=8)
    sched = generate_office_schedule(spec, [spec.ids], overlap_fraction=0.75)
    f = ground_truth_network(sched)
    net = build_weighted_network(tally_scans(simulate_scans(spec, sched), WINDOW, spec.ids))
    for key, frac in f.items():
        assert net.weight(*key) == pytest.approx(frac, abs=0.02)


def test_always_co_present_pair_has_max_weight():
    spec = os_cohort(5, 1, STUDY_START, STUDY_END, rng_seed=3)
    office = generate_office_schedule(spec, [spec.ids], overlap_fraction=0.4)
    sched = ContactSchedule(spec.window, office.intervals + ((("p1", "p2"), *spec.window),))
    net = build_weighted_network(tally_scans(simulate_scans(spec, sched), WINDOW, spec.ids))
    assert max(net.weights, key=net.weights.get) == ("p1", "p2")


def test_device_stream_independent_of_cohort():
    a = os_cohort(2, 0, STUDY_START, STUDY_START + timedelta(days=2), rng_seed=1)
    b = os_cohort(3, 0, STUDY_START, STUDY_START + timedelta(days=2), rng_seed=1)
    ea = [e for e in simulate_scans(a, always(a)) if e.scanner == "p1"]
    eb = [e for e in simulate_scans(b, always(b)) if e.scanner == "p1"]
    assert ea == eb


def test_macs_locally_administered_and_distinct():
    spec = os_cohort(40, 14, STUDY_START, STUDY_END)
    macs = {device_mac(spec, p) for p in spec.ids}
    assert len(macs) == 54
    assert all(int(m[:2], 16) & 0x03 == 0x02 for m in macs)


def test_phase_offsets_shift_scan_times():
    spec = cohort([FULL, FULL], phase_offsets=True, rng_seed=1)
    events = simulate_scans(spec, always(spec))
    offsets = {}
    for e in events:
        offsets.setdefault(e.scanner, set()).add(int(e.timestamp.timestamp()) % 300)
    assert all(len(v) == 1 for v in offsets.values())
    assert any(v != {0} for v in offsets.values())


def test_cohort_validation():
    with pytest.raises(ValidationError):
        cohort([IOS])
    with pytest.raises(ValueError):
        OsProfile("IOS", 1.5)
    with pytest.raises(ValidationError):
        cohort([IOS, ANDROID], detection_probability=-0.1)


def test_load_scenario(tmp_path):
    spec_file = tmp_path / "s.toml"
    spec_file.write_text(
        'start = "2016-03-28T00:00:00Z"\nend = "2016-03-30T00:00:00Z"\nseed = 3\n'
        "[cohort]\nios = 3\nandroid = 1\n"
        '[office]\nworkday_start = "09:00"\nworkday_end = "17:00"\n'
        '[[office.groups]]\nmembers = ["p1", "p2", "p3", "p4"]\noverlap_fraction = 0.5\n'
    )
    scenario = load_scenario(spec_file)
    assert scenario.spec.rng_seed == 3 and len(scenario.spec.ids) == 4
    assert len(scenario.schedule.pair_intervals()) == 6


def test_load_scenario_errors(tmp_path):
    with pytest.raises(ConfigError, match="nope.toml"):
        load_scenario(tmp_path / "nope.toml")
    bad = tmp_path / "bad.toml"
    bad.write_text('start = "2016-03-28T00:00:00Z"\nend = "2016-03-30T00:00:00Z"\n[cohort]\nios = "many"\n')
    with pytest.raises(ConfigError):
        load_scenario(bad)


def test_per_device_compliance_spread_separates_coverage_thresholds():
    rng = np.random.default_rng(0)
    parts = [(f"i{k:02d}", OsProfile("IOS", float(rng.uniform(0.02, 0.56)))) for k in range(56)]
    parts += [(f"a{k}", OsProfile("ANDROID", float(rng.uniform(0.3, 0.8)))) for k in range(7)]
    spec = CohortSpec(tuple(parts), STUDY_START, STUDY_END)
    sched = generate_office_schedule(spec, [spec.ids[k::5] for k in range(5)], overlap_fraction=0.4)
    tally = tally_scans(simulate_scans(spec, sched), WINDOW, spec.ids)
    ten, thirty = timedelta(minutes=10), timedelta(minutes=30)
    cov = coverage_summary(tally, [ten, thirty]).fraction_covered
    assert 0 < cov[ten] < cov[thirty] <= 1
