import sys
import warnings
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from paphelp import build_abelian_table, fixture_names, load_fixture  # noqa: E402

ACCEPTANCE_LINES: list[str] = []

SMALL_FIXTURES = ["S3", "D8", "Q8", "A4", "S4", "SL_2_3", "C7xC3"]
ABELIAN_FACTORS = [[n] for n in range(1, 13)] + [[2, 2], [2, 4]]


def get_table(name):
    if isinstance(name, (list, tuple)):
        return build_abelian_table(list(name))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return load_fixture(name)


@pytest.fixture(params=fixture_names())
def any_fixture(request):
    return get_table(request.param)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
