"""Command-line entry point.

Exit codes: 0 success, 1 pipeline/domain error, 2 usage or configuration
error. Flags override values from the TOML config.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import platform
import sys
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence

import networkx as nx
import numpy as np

from . import __version__
from .analyze import (
    attribute_assortativity,
    coverage_summary,
    device_scan_rates,
    edge_coverage,
    severity_histogram,
    summarize_scan_rates,
    survey_scores,
)
from .backbone import BackboneNetwork, extract_backbone
from .exceptions import ConfigError, ProxnetError
from .export import read_network_json, to_networkx
from .ingest import (
    IngestReport,
    Roster,
    filter_to_participants,
    parse_scan_log,
    read_roster,
    read_scan_log,
    read_surveys,
    serialize_scan_log,
)
from .layout import fruchterman_reingold, render_figure_data
from .model import DEFAULT_BAND_TABLES, Instrument, StudyConfig, band_score, format_timestamp, score_survey
from .proximity import WeightedNetwork, build_weighted_network, tally_scans
from .sim import Scenario, cohort_roster, ground_truth_network, load_scenario

try:  # Python < 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

logger = logging.getLogger("proxnet")

REPORT_SCHEMA_VERSION = 1


class UsageError(ConfigError):
    """Bad paths or flag combinations (exit code 2)."""


# --------------------------------------------------------------------------
# config helpers


def load_config(path: str | Path) -> StudyConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        data = tomllib.loads(path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return StudyConfig.from_mapping(data)


def config_from_scenario(scenario: Scenario) -> StudyConfig:
    spec = scenario.spec
    return StudyConfig(
        study_start=spec.study_start,
        study_end=spec.study_end,
        scan_interval=spec.scan_interval,
        salt=spec.salt,
        mac_prehashed=True,
        seed=spec.rng_seed,
    )


def render_config_toml(config: StudyConfig) -> str:
    """Minimal TOML for a config; salts must be valid UTF-8."""
    m = config.to_mapping()
    lines = [
        "[study]",
        f'start = "{m["study"]["start"]}"',
        f'end = "{m["study"]["end"]}"',
        f"scan_interval = {int(config.scan_interval.total_seconds())}",
        f"salt = {json.dumps(config.salt.decode('utf-8'))}",
        f'digest = "{config.digest}"',
        f"mac_prehashed = {str(config.mac_prehashed).lower()}",
        f"retain_nonparticipant_scans = {str(config.retain_nonparticipant_scans).lower()}",
        f"seed = {config.seed}",
        "",
        "[backbone]",
        f"alpha = {config.backbone_alpha}",
        f'rule = "{config.retention_rule}"',
        "",
        "[coverage]",
        f"thresholds_minutes = {m['coverage']['thresholds_minutes']}",
        f'method = "{config.coverage_method}"',
        "",
        "[layout]",
        f"iterations = {config.layout_iterations}",
        "",
    ]
    for inst, rows in m["bands"].items():
        for row in rows:
            lines += [f"[[bands.{inst}]]", f'label = "{row["label"]}"', f'min = {row["min"]}', f'max = {row["max"]}', ""]
    return "\n".join(lines)


def apply_overrides(config: StudyConfig, args: argparse.Namespace) -> StudyConfig:
    changes = {}
    if getattr(args, "alpha", None) is not None:
        changes["backbone_alpha"] = args.alpha
    if getattr(args, "rule", None) is not None:
        changes["retention_rule"] = args.rule
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    if getattr(args, "coverage_method", None) is not None:
        changes["coverage_method"] = args.coverage_method
    if getattr(args, "iterations", None) is not None:
        changes["layout_iterations"] = args.iterations
    if getattr(args, "retain_nonparticipant_scans", False):
        changes["retain_nonparticipant_scans"] = True
    if not changes:
        return config
    try:
        return replace(config, **changes)
    except ProxnetError as exc:
        raise ConfigError(str(exc)) from None


def _require_file(path: Optional[str], what: str) -> Path:
    if path is None:
        raise UsageError(f"--{what} is required")
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{what} file not found: {p}")
    return p


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


# --------------------------------------------------------------------------
# stages


class Inputs:
    """Everything the analysis stages need, loaded from files or a scenario."""

    def __init__(self, config, roster, events, ingest_report, responses, sources, scenario=None,
                 scan_lines=None):
        self.config: StudyConfig = config
        self.roster: Roster = roster
        self.events = events
        self.ingest_report: IngestReport = ingest_report
        self.responses = responses
        self.sources: dict = sources
        self.scenario: Optional[Scenario] = scenario
        self.scan_lines = scan_lines


def load_inputs(args: argparse.Namespace, need_surveys: bool = False) -> Inputs:
    scenario = None
    lines = None
    sources: dict = {}
    if getattr(args, "scenario", None):
        scenario = load_scenario(args.scenario)
        config = load_config(args.config) if args.config else config_from_scenario(scenario)
        config = apply_overrides(config, args)
        roster = cohort_roster(scenario.spec)
        lines = list(serialize_scan_log(scenario.run()))
        events, report = parse_scan_log(lines, config, roster)
        sources["scenario"] = {"name": Path(args.scenario).name, "sha256": _sha256(Path(args.scenario))}
    else:
        config = apply_overrides(load_config(_require_file(args.config, "config")), args)
        roster_path = _require_file(args.roster, "roster")
        scans_path = _require_file(args.scans, "scans")
        try:
            roster = read_roster(roster_path)
        except ProxnetError as exc:
            raise ConfigError(str(exc)) from None
        events, report = read_scan_log(scans_path, config, roster)
        for key, p in (("roster", roster_path), ("scans", scans_path)):
            sources[key] = {"name": p.name, "sha256": _sha256(p)}
    events = filter_to_participants(
        events, roster, report, retain_scans=config.retain_nonparticipant_scans
    )
    responses = []
    surveys = getattr(args, "surveys", None)
    if surveys:
        p = _require_file(surveys, "surveys")
        responses = read_surveys(p)
        sources["surveys"] = {"name": p.name, "sha256": _sha256(p)}
    elif need_surveys:
        raise UsageError("--surveys is required")
    return Inputs(config, roster, events, report, responses, sources, scenario, lines)


def build_network(inputs: Inputs):
    tally = tally_scans(
        inputs.events, inputs.config.window, inputs.roster.participants, inputs.config.window
    )
    return tally, build_weighted_network(tally)


def severity_section(inputs: Inputs) -> dict:
    present = {r.instrument for r in inputs.responses}
    if not present:
        return {"status": "absent"}
    out: dict = {"status": "present", "instruments": {}}
    for inst in Instrument:
        if inst not in present:
            continue
        table = inputs.config.band_tables[inst]
        out["instruments"][inst.value] = {
            "histogram": severity_histogram(inputs.responses, table),
            "n_respondents": len(survey_scores(inputs.responses, inst)),
        }
    return out


def phq9_bands(inputs: Inputs) -> dict:
    table = inputs.config.band_tables[Instrument.PHQ9]
    return {pid: band_score(s, table) for pid, s in survey_scores(inputs.responses, Instrument.PHQ9).items()}


def assortativity_section(inputs: Inputs, bb: BackboneNetwork) -> dict:
    present = {r.instrument for r in inputs.responses}
    if not present:
        return {"status": "absent"}
    out: dict = {"status": "present", "coefficients": {}}
    for inst in Instrument:
        if inst in present:
            out["coefficients"][inst.value] = attribute_assortativity(bb, survey_scores(inputs.responses, inst))
    return out


def reconstruction_section(scenario: Scenario, network: WeightedNetwork, bb: BackboneNetwork) -> dict:
    truth = ground_truth_network(scenario.schedule, scenario.spec.ids)
    positives = {k for k, f in truth.items() if f > 0}

    def scores(predicted: set) -> dict:
        tp = len(predicted & positives)
        return {
            "predicted": len(predicted),
            "true_positives": tp,
            "precision": tp / len(predicted) if predicted else None,
            "recall": tp / len(positives) if positives else None,
        }

    return {
        "ground_truth_pairs": len(positives),
        "weighted": scores(set(network.weights)),
        "backbone": scores(set(bb.edges)),
    }


def _csv_text(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _graphml_text(graph, bands=None) -> str:
    return "\n".join(nx.generate_graphml(to_networkx(graph, bands))) + "\n"


def _json_text(data) -> str:
    return json.dumps(data, indent=2, allow_nan=False) + "\n"


def run_analysis(inputs: Inputs) -> tuple[dict, dict]:
    """Run every stage; return (report, {filename: text}) without touching disk."""
    config = inputs.config
    tally, network = build_network(inputs)
    bb = extract_backbone(network, config.backbone_alpha, config.retention_rule)
    rates = device_scan_rates(tally, config.scan_interval)
    os_map = inputs.roster.os_map()
    other = "max_gap" if config.coverage_method == "mean" else "mean"
    coverage = coverage_summary(tally, config.coverage_thresholds, config.coverage_method)
    sensitivity = coverage_summary(tally, config.coverage_thresholds, other)
    bands = phq9_bands(inputs)
    layout = fruchterman_reingold(bb, seed=config.seed, iterations=config.layout_iterations)
    figure = render_figure_data(layout, bands, bb)

    report = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "generated_at": format_timestamp(datetime.now(timezone.utc)),
        "tool": {
            "name": "proxnet",
            "version": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "networkx": nx.__version__,
        },
        "seed": config.seed,
        "config": config.to_mapping(),
        "inputs": inputs.sources,
        "counts": {
            "ingest": inputs.ingest_report.to_mapping(),
            "participants": len(network.nodes),
            "events": len(inputs.events),
            "candidate_edges": network.n_candidate_edges,
            "weighted_edges": len(network.weights),
            "backbone_edges": len(bb.edges),
            "survey_responses": len(inputs.responses),
        },
        "device_rates": {
            "summary": summarize_scan_rates(rates, os_map),
            "devices": [
                {"participant": r.participant, "os": os_map.get(r.participant), "performed": r.performed,
                 "scheduled": r.scheduled, "rate": r.rate}
                for r in rates
            ],
        },
        "coverage": {"primary": coverage.to_mapping(), "sensitivity": sensitivity.to_mapping()},
        "backbone": {
            "alpha_threshold": bb.alpha_threshold,
            "rule": bb.rule,
            "n_edges": len(bb.edges),
            "n_isolated_nodes": sum(1 for d in bb.degree().values() if d == 0),
        },
        "severity": severity_section(inputs),
        "assortativity": assortativity_section(inputs, bb),
    }
    if inputs.scenario is not None:
        report["reconstruction"] = reconstruction_section(inputs.scenario, network, bb)

    cov_rows = [
        (e.pair[0], e.pair[1], e.combined_scans,
         "" if e.combined_scans == 0 else round(e.mean_interscan_interval / 60, 6),
         "" if e.max_gap is None or e.max_gap == float("inf") else round(e.max_gap / 60, 6))
        for e in edge_coverage(tally)
    ]
    files = {
        "report.json": _json_text(report),
        "ingest_report.json": _json_text(inputs.ingest_report.to_mapping()),
        "network.json": _json_text(network.to_mapping()),
        "network.graphml": _graphml_text(network, bands),
        "backbone.json": _json_text(bb.to_mapping()),
        "backbone.graphml": _graphml_text(bb, bands),
        "layout.json": figure.to_json() + "\n",
        "layout_nodes.csv": _csv_text(["id", "x", "y", "band"], [(r["id"], r["x"], r["y"], r["band"]) for r in figure.nodes]),
        "layout_edges.csv": _csv_text(["i", "j"], [(r["i"], r["j"]) for r in figure.edges]),
        "device_rates.csv": _csv_text(
            ["participant", "os", "performed", "scheduled", "rate"],
            [(r.participant, os_map.get(r.participant), r.performed, r.scheduled, r.rate) for r in rates],
        ),
        "edge_coverage.csv": _csv_text(["i", "j", "combined_scans", "mean_interval_min", "max_gap_min"], cov_rows),
    }
    sev = report["severity"]
    if sev["status"] == "present":
        for inst, block in sev["instruments"].items():
            files[f"severity_{inst}.csv"] = _csv_text(["band", "count"], block["histogram"].items())
        totals = sorted(
            (r.participant, r.instrument.value, score_survey(r))
            for r in inputs.responses
        )
        files["survey_scores.csv"] = _csv_text(["participant", "instrument", "total"], totals)
    if inputs.scenario is not None:
        files["ground_truth.json"] = _json_text(_ground_truth_doc(inputs.scenario))
    return report, files


def _ground_truth_doc(scenario: Scenario) -> dict:
    truth = ground_truth_network(scenario.schedule, scenario.spec.ids)
    return {
        "participants": [
            {"id": pid, "os": prof.name.value, "compliance": prof.compliance}
            for pid, prof in scenario.spec.participants
        ],
        "pairs": [{"i": i, "j": j, "co_presence": f} for (i, j), f in truth.items() if f > 0],
        "schedule": scenario.schedule.to_mapping(),
    }


def write_outputs(out_dir: Path, files: dict) -> None:
    """Write all files; on failure rename what was written to ``*.partial``."""
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    try:
        for name, text in files.items():
            path = out_dir / name
            path.write_text(text, encoding="utf-8")
            written.append(path)
    except OSError:
        for path in written:
            path.replace(path.with_name(path.name + ".partial"))
        raise


# --------------------------------------------------------------------------
# commands


def cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario)
    events = scenario.run()
    files = {
        "scans.jsonl": "".join(line + "\n" for line in serialize_scan_log(events)),
        "roster.csv": _csv_text(
            ["participant_id", "mac_pseudonym", "os"],
            [(pid, r.pseudonym_of(pid), r.os_of(pid).value)
             for r in [cohort_roster(scenario.spec)] for pid in r.participants],
        ),
        "ground_truth.json": _json_text(_ground_truth_doc(scenario)),
        "study.toml": render_config_toml(config_from_scenario(scenario)),
    }
    write_outputs(Path(args.out), files)
    print(f"wrote {len(events)} scan records for {len(scenario.spec.ids)} devices to {args.out}")
    return 0


def cmd_ingest(args) -> int:
    inputs = load_inputs(args)
    write_outputs(Path(args.out), {
        "events.jsonl": "".join(line + "\n" for line in serialize_scan_log(inputs.events)),
        "ingest_report.json": _json_text(inputs.ingest_report.to_mapping()),
    })
    print(json.dumps(inputs.ingest_report.to_mapping()))
    return 0


def cmd_weights(args) -> int:
    inputs = load_inputs(args)
    _, network = build_network(inputs)
    files = {"network.json": _json_text(network.to_mapping())}
    if args.graphml:
        files["network.graphml"] = _graphml_text(network)
    write_outputs(Path(args.out), files)
    print(f"{len(network.nodes)} nodes, {network.n_candidate_edges} candidate edges, "
          f"{len(network.weights)} weighted edges")
    return 0


def cmd_backbone(args) -> int:
    network = read_network_json(_require_file(args.network, "network"))
    if not isinstance(network, WeightedNetwork):
        raise UsageError("--network must be a weighted network document")
    alpha = args.alpha if args.alpha is not None else 0.05
    bb = extract_backbone(network, alpha, args.rule or "or")
    files = {"backbone.json": _json_text(bb.to_mapping())}
    if args.graphml:
        files["backbone.graphml"] = _graphml_text(bb)
    write_outputs(Path(args.out), files)
    print(f"retained {len(bb.edges)} of {len(bb.significance)} edges at alpha={bb.alpha_threshold}")
    return 0


def cmd_coverage(args) -> int:
    inputs = load_inputs(args)
    tally, _ = build_network(inputs)
    config = inputs.config
    rates = device_scan_rates(tally, config.scan_interval)
    summary = coverage_summary(tally, config.coverage_thresholds, config.coverage_method)
    doc = {
        "device_rates": summarize_scan_rates(rates, inputs.roster.os_map()),
        "coverage": summary.to_mapping(),
    }
    write_outputs(Path(args.out), {"coverage.json": _json_text(doc)})
    print(json.dumps(doc["coverage"]))
    return 0


def cmd_survey(args) -> int:
    config = apply_overrides(load_config(_require_file(args.config, "config")), args)
    responses = read_surveys(_require_file(args.surveys, "surveys"))
    inputs = Inputs(config, None, [], IngestReport(), responses, {})
    section = severity_section(inputs)
    files = {"severity.json": _json_text(section)}
    if section["status"] == "present":
        for inst, block in section["instruments"].items():
            files[f"severity_{inst}.csv"] = _csv_text(["band", "count"], block["histogram"].items())
    write_outputs(Path(args.out), files)
    print(json.dumps(section))
    return 0


def cmd_layout(args) -> int:
    bb = read_network_json(_require_file(args.backbone, "backbone"))
    bands = {}
    if args.surveys:
        config = load_config(_require_file(args.config, "config")) if args.config else None
        responses = read_surveys(_require_file(args.surveys, "surveys"))
        table = (config.band_tables if config else DEFAULT_BAND_TABLES)[Instrument.PHQ9]
        bands = {pid: band_score(s, table) for pid, s in survey_scores(responses, Instrument.PHQ9).items()}
    seed = args.seed if args.seed is not None else 0
    iterations = args.iterations if args.iterations is not None else 200
    layout = fruchterman_reingold(bb, seed=seed, iterations=iterations)
    figure = render_figure_data(layout, bands, bb)
    write_outputs(Path(args.out), {
        "layout.json": figure.to_json() + "\n",
        "layout_nodes.csv": _csv_text(["id", "x", "y", "band"], [(r["id"], r["x"], r["y"], r["band"]) for r in figure.nodes]),
        "layout_edges.csv": _csv_text(["i", "j"], [(r["i"], r["j"]) for r in figure.edges]),
    })
    print(f"laid out {len(figure.nodes)} nodes and {len(figure.edges)} edges")
    return 0


def cmd_report(args) -> int:
    report, _ = run_analysis(load_inputs(args))
    write_outputs(Path(args.out), {"report.json": _json_text(report)})
    print(f"report written to {Path(args.out) / 'report.json'}")
    return 0


def cmd_pipeline(args) -> int:
    inputs = load_inputs(args)
    report, files = run_analysis(inputs)
    if inputs.scan_lines is not None:
        files["scans.jsonl"] = "".join(line + "\n" for line in inputs.scan_lines)
    write_outputs(Path(args.out), files)
    counts = report["counts"]
    print(
        f"{counts['participants']} participants, {counts['candidate_edges']} candidate edges, "
        f"{counts['weighted_edges']} weighted, {counts['backbone_edges']} in backbone -> {args.out}"
    )
    return 0


def cmd_export_graphml(args) -> int:
    graph = read_network_json(_require_file(args.network, "network"))
    bands = None
    if args.surveys:
        responses = read_surveys(_require_file(args.surveys, "surveys"))
        table = load_config(_require_file(args.config, "config")).band_tables[Instrument.PHQ9]
        bands = {pid: band_score(s, table) for pid, s in survey_scores(responses, Instrument.PHQ9).items()}
    out = Path(args.out)
    try:
        out.write_text(_graphml_text(graph, bands), encoding="utf-8")
    except OSError as exc:
        raise ProxnetError(f"cannot write {out}: {exc}") from None
    print(f"wrote {out}")
    return 0


# --------------------------------------------------------------------------
# argument parsing


def _add_inputs(p: argparse.ArgumentParser, surveys: bool = False) -> None:
    p.add_argument("--config", help="study config TOML")
    p.add_argument("--scans", help="scan log (JSON Lines)")
    p.add_argument("--roster", help="roster CSV")
    p.add_argument("--scenario", help="simulate from a scenario file instead of reading scans/roster")
    if surveys:
        p.add_argument("--surveys", help="survey CSV")
    p.add_argument("--retain-nonparticipant-scans", action="store_true",
                   help="keep scans that only saw outsiders as empty scans")


def _add_overrides(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, help="backbone significance threshold")
    p.add_argument("--rule", choices=["or", "and"], help="backbone retention rule")
    p.add_argument("--seed", type=int, help="layout seed")
    p.add_argument("--iterations", type=int, help="layout iterations")
    p.add_argument("--coverage-method", choices=["mean", "max_gap"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="proxnet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"proxnet {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a synthetic scan log from a scenario")
    p.add_argument("scenario")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("ingest", help="parse, pseudonymize and filter a scan log")
    _add_inputs(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("weights", help="build the proximity-weighted network")
    _add_inputs(p)
    p.add_argument("--graphml", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("backbone", help="disparity-filter a weighted network JSON")
    p.add_argument("--network", required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--rule", choices=["or", "and"])
    p.add_argument("--graphml", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_backbone)

    p = sub.add_parser("coverage", help="device scan rates and edge coverage")
    _add_inputs(p)
    p.add_argument("--coverage-method", choices=["mean", "max_gap"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("survey", help="severity histograms from a survey CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--surveys", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("layout", help="force-directed layout of a backbone JSON")
    p.add_argument("--backbone", required=True)
    p.add_argument("--surveys")
    p.add_argument("--config")
    p.add_argument("--seed", type=int)
    p.add_argument("--iterations", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("report", help="write the JSON report only")
    _add_inputs(p, surveys=True)
    _add_overrides(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("pipeline", help="run every stage and write all artifacts")
    _add_inputs(p, surveys=True)
    _add_overrides(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("export-graphml", help="convert a network/backbone JSON to GraphML")
    p.add_argument("--network", required=True)
    p.add_argument("--surveys")
    p.add_argument("--config")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_graphml)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"proxnet: error: {exc}", file=sys.stderr)
        return 2
    except (ProxnetError, ValueError) as exc:
        print(f"proxnet: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"proxnet: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
