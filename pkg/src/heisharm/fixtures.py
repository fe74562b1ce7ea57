"""Access to calibrated constants shipped with the package.

Fixtures are JSON files produced by the calibration entry point
(python -m heisharm.calibrate); each records its grid hash so a report can
state exactly which calibration it used.  An explicit directory (CLI flag
--fixtures) overrides the packaged copies.
"""

import os

from .errors import DomainError
from .jsonio import read_json

__all__ = ["packaged_fixtures_dir", "fixture_path", "load_fixture"]


def packaged_fixtures_dir():
    return os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")


def fixture_path(name, fixtures_dir=None):
    return os.path.join(fixtures_dir or packaged_fixtures_dir(), name)


def load_fixture(name, fixtures_dir=None):
    path = fixture_path(name, fixtures_dir)
    try:
        return read_json(path)
    except OSError as exc:
        raise DomainError(
            f"missing calibration fixture {path!r}; run "
            "'python -m heisharm.calibrate' to regenerate") from exc
