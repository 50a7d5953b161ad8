import csv
import json
from pathlib import Path

import numpy as np
import pytest

from greydematel.grey import DEFAULT_SCALE

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"
TABLE5_CODES = ["RSP", "SIN", "OSA", "LCA", "PLE", "INF", "LOS", "ARC", "MNC", "ITRL"]


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def table5():
    return json.loads((FIXTURES / "table5.json").read_text())


@pytest.fixture(scope="session")
def base_edges():
    with (FIXTURES / "table8_base_edges.csv").open(newline="") as fh:
        return [(r["from"], r["to"]) for r in csv.DictReader(fh)]


@pytest.fixture(scope="session")
def synthetic_path():
    return FIXTURES / "synthetic18.json"


def random_codes_matrix(rng, n, p_none=0.3):
    codes = list(DEFAULT_SCALE.codes)
    grid = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j or rng.random() < p_none:
                row.append("N")
            else:
                row.append(codes[rng.integers(1, len(codes))])
        grid.append(row)
    return grid


def random_study_doc(rng, n, k, groups=None):
    doc = {
        "name": "random",
        "barriers": [{"code": f"F{i:02d}"} for i in range(n)],
        "experts": [],
        "assessments": {},
    }
    for e in range(k):
        eid = f"E{e:02d}"
        entry = {"id": eid}
        if groups:
            entry["group"] = groups[e % len(groups)]
        doc["experts"].append(entry)
        doc["assessments"][eid] = random_codes_matrix(rng, n)
    # at least one influence somewhere so normalization is defined
    first = doc["experts"][0]["id"]
    doc["assessments"][first][0][n - 1 if n > 1 else 0] = "H" if n > 1 else "N"
    return doc


def substochastic(rng, n, max_row_sum=0.9):
    x = rng.random((n, n))
    np.fill_diagonal(x, 0.0)
    sums = x.sum(axis=1)
    target = rng.uniform(0.05, max_row_sum)
    return x / sums.max() * target if sums.max() > 0 else x


ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(line)
