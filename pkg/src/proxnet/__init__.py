"""Proximity networks from Bluetooth discovery-scan logs."""

__version__ = "0.1.0"

from .analyze import (  # noqa: E402
    attribute_assortativity,
    coverage_summary,
    device_scan_rates,
    severity_histogram,
)
from .backbone import BackboneNetwork, EdgeSignificance, edge_alpha, extract_backbone  # noqa: E402
from .ingest import Roster, filter_to_participants, parse_scan_log, pseudonymize_mac  # noqa: E402
from .layout import LayoutResult, fruchterman_reingold, render_figure_data  # noqa: E402
from .model import (  # noqa: E402
    Instrument,
    ScanEvent,
    SeverityBandTable,
    StudyConfig,
    SurveyResponse,
    band_score,
    score_survey,
)
from .proximity import (  # noqa: E402
    ScanTally,
    WeightedNetwork,
    build_weighted_network,
    edge_weight,
    tally_scans,
    window_series,
)
from .sim import (  # noqa: E402
    CohortSpec,
    ContactSchedule,
    OsProfile,
    generate_office_schedule,
    ground_truth_network,
    simulate_scans,
)

__all__ = [
    "BackboneNetwork", "CohortSpec", "ContactSchedule", "EdgeSignificance",
    "Instrument", "LayoutResult", "OsProfile", "Roster",
    "ScanEvent", "ScanTally", "SeverityBandTable", "StudyConfig", "SurveyResponse",
    "WeightedNetwork", "attribute_assortativity", "band_score", "build_weighted_network",
    "coverage_summary", "device_scan_rates", "edge_alpha", "edge_weight", "extract_backbone",
    "filter_to_participants", "fruchterman_reingold", "generate_office_schedule",
    "ground_truth_network", "parse_scan_log", "pseudonymize_mac", "render_figure_data",
    "score_survey", "severity_histogram", "simulate_scans", "tally_scans", "window_series",
]
