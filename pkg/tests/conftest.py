from datetime import datetime, timedelta, timezone

import pytest

from proxnet.model import StudyConfig


def utc(*args) -> datetime:
    return datetime(*args, tzinfo=timezone.utc)


STUDY_START = utc(2016, 3, 28)
STUDY_END = STUDY_START + timedelta(days=28)


@pytest.fixture
def config():
    return StudyConfig(STUDY_START, STUDY_END, salt=b"test-salt")


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
