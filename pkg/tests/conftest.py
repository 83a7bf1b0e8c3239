import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from signdet.matrix_core import RationalMatrix, SignPattern, parse_matrix

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load(name: str) -> RationalMatrix:
    path = FIXTURES / name
    return parse_matrix(path.read_text(), "json" if path.suffix == ".json" else "csv")


def load_pattern(name: str, tag: str = "A") -> SignPattern:
    M = load(name)
    return SignPattern.from_signs([[(x > 0) - (x < 0) for x in M.row(i)] for i in range(M.nrows)], tag)


def random_signs(rng: random.Random, n_rows: int, n_cols: int, density: float):
    return [[rng.choice((-1, 1)) if rng.random() < density else 0 for _ in range(n_cols)] for _ in range(n_rows)]


def random_stoich(rng: random.Random, d: int, n_base: int, density=0.5, rev_prob=0.4, values=(-2, -1, 1, 3)):
    """Random integer S with some columns followed (after shuffling) by their negations."""
    cols = []
    for _ in range(n_base):
        c = [rng.choice(values) if rng.random() < density else 0 for _ in range(d)]
        cols.append(c)
        if rng.random() < rev_prob:
            cols.append([-x for x in c])
    rng.shuffle(cols)
    return RationalMatrix([[c[i] for c in cols] for i in range(d)])


def with_reverse(rows):
    return RationalMatrix([list(r) + [-x for x in r] for r in rows])


def sign_grids(max_rows=5, max_cols=5, square=False):
    """Hypothesis strategy for small sign grids."""

    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_rows))
        m = n if square else draw(st.integers(1, max_cols))
        cells = draw(st.lists(st.sampled_from((-1, 0, 1)), min_size=n * m, max_size=n * m))
        return [cells[i * m:(i + 1) * m] for i in range(n)]

    return build()


@pytest.fixture
def rng():
    return random.Random(20240611)



# --- per-criterion summary for the acceptance suite -------------------------

_criteria: dict[int, list[tuple[str, str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = mark.args[0]


def pytest_runtest_logreport(report):
    n = getattr(report, "criterion", None)
    if n is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        why = getattr(report, "wasxfail", "")
        outcome = "xfailed" if hasattr(report, "wasxfail") else report.outcome
        _criteria.setdefault(n, []).append((report.nodeid.split("::")[-1], outcome, why))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        bad = [(name, o, why) for name, o, why in _criteria[n] if o != "passed"]
        line = f"criterion {n:2d}: {'FAIL' if bad else 'PASS'}"
        for name, o, why in bad:
            line += f"  [{name} {o}{': ' + why if why else ''}]"
        terminalreporter.write_line(line)
