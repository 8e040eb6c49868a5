import pytest
from hypothesis import settings

# exact arithmetic has heavy-tailed runtimes; correctness, not latency, is under test
settings.register_profile("exact", deadline=None)
settings.load_profile("exact")

# intersection matrices used across modules
CASE1 = [[-2, 4], [4, -2]]
CASE2_22 = [[-2, 0, 4], [0, -2, 4], [4, 4, -2]]
CASE2_23 = [[-2, 0, 4], [0, -2, 6], [4, 6, -2]]
CASE3_222 = [[-2, 4, 4], [4, -2, 4], [4, 4, -2]]
CASE4_224 = [[-2, 0, 0, 4], [0, -2, 0, 4], [0, 0, -2, 8], [4, 4, 8, -2]]
CASE4_222 = [[-2, 0, 0, 4], [0, -2, 0, 4], [0, 0, -2, 4], [4, 4, 4, -2]]
NOMATCH = [[-2, 0, 0], [0, -2, 4], [0, 4, -2]]


def case5_gram(m1, m2, m3, m4, m5):
    return [
        [-2, 0, 2 * m1, 2 * m2],
        [0, -2, 2 * m3, 2 * m4],
        [2 * m1, 2 * m3, -2, 2 * m5],
        [2 * m2, 2 * m4, 2 * m5, -2],
    ]


def case6_gram(s12, s13, s14, s23, s24, s34):
    return [
        [-2, 2 * s12, 2 * s13, 2 * s14],
        [2 * s12, -2, 2 * s23, 2 * s24],
        [2 * s13, 2 * s23, -2, 2 * s34],
        [2 * s14, 2 * s24, 2 * s34, -2],
    ]


CASE5_EX = case5_gram(6, 2, 7, 2, 9)
CASE6_EX = case6_gram(2, 3, 3, 3, 2, 2)


@pytest.fixture
def write_json(tmp_path):
    import json

    def _write(obj, name="in.json"):
        path = tmp_path / name
        path.write_text(json.dumps(obj), encoding="utf-8")
        return str(path)

    return _write


# acceptance summary ------------------------------------------------------------

import time

ACCEPTANCE_LINES: list[str] = []
SUITE_BUDGET_S = 120.0
_start = time.perf_counter()


def record_criterion(number: int, passed: bool, detail: str) -> str:
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    return line


def pytest_sessionfinish(session, exitstatus):
    session.config._suite_seconds = time.perf_counter() - _start
    if ACCEPTANCE_LINES and session.config._suite_seconds > SUITE_BUDGET_S and exitstatus == 0:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    secs = getattr(config, "_suite_seconds", 0.0)
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
    ok = secs <= SUITE_BUDGET_S
    terminalreporter.write_line(
        f"criterion 7 (suite time): {'PASS' if ok else 'FAIL'}  full suite {secs:.1f}s, budget {SUITE_BUDGET_S:.0f}s"
    )
