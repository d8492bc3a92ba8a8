from __future__ import annotations

import pytest

from rfuwoc.channels import AlphaMuParams, db_to_linear, get_preset
from rfuwoc.e2e import LinkPair, RelayConfig

PARAMETER_MATRIX = ((1.6, 1.5), (2.1, 1.4), (1.5, 0.8), (2.0, 1.0))
PRESET_LABELS = ("[2.4, 0.05]", "[2.4, 0]", "[4.7, 0]", "[16.5, 0]")

# Filled by tests/test_acceptance.py and reported once at the end of the run.
ACCEPTANCE_LINES: dict[int, str] = {}


def make_setup(alpha, mu, main_db, eve_db, uwoc_db, preset="[2.4, 0.05]", *, r=None):
    """(links, eve, relay) with the same alpha-mu pair on the main and eavesdropper hops."""
    uwoc = get_preset(preset).params.with_mu_r(db_to_linear(uwoc_db))
    if r is not None:
        uwoc = type(uwoc)(uwoc.omega, uwoc.lambda_, uwoc.a, uwoc.b, uwoc.c, r, uwoc.mu_r)
    links = LinkPair(AlphaMuParams.from_db(alpha, mu, main_db), uwoc)
    return links, AlphaMuParams.from_db(alpha, mu, eve_db), RelayConfig()


@pytest.fixture
def fig2_setup():
    return make_setup(1.6, 1.5, 20.0, 10.0, 10.0)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
