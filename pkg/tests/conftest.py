import re

import pytest

_CRITERIA: dict[int, list[str]] = {}
_TITLES = {
    1: "orbit LP optimum N^(p-1) attained by extremal_pairwise",
    2: "closed-form dual certificate feasible and tight at {0, N/2, N}",
    3: "independence levels of extremal_pairwise",
    4: "quartic constants N^(1/4) and the p=4 lemma",
    5: "1-wise anchor and Hoelder sandwich",
    6: "folklore collapse at p=4, k>=4",
    7: "orbit and full LP optima agree",
    8: "exact simplex against basis enumeration",
    9: "quartic decomposition identity and Maclaurin equality",
}


def pytest_runtest_logreport(report):
    match = re.search(r"test_criterion_(\d+)_(\w+)", report.nodeid)
    if not match:
        return
    num = int(match.group(1))
    if report.when == "call" or report.outcome != "passed":
        _CRITERIA.setdefault(num, []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        outcomes = _CRITERIA[num]
        verdict = "PASS" if all(o == "passed" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {verdict}  ({_TITLES.get(num, '')})")


@pytest.fixture(scope="session")
def rng():
    import random

    return random.Random(20240601)
