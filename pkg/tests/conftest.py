import pytest

from drxsim.config import load_profile
from drxsim.radio import DutyCycle, FsmTimers, PowerProfile


@pytest.fixture(scope="session")
def default_profile() -> PowerProfile:
    return load_profile("default")


@pytest.fixture(scope="session")
def toy_profile() -> PowerProfile:
    # round numbers so hand-computed energies stay readable
    return PowerProfile(
        p_cr=1.2,
        short_drx=DutyCycle(0.08, 0.01, 0.8, 0.02),
        long_drx=DutyCycle(0.32, 0.01, 0.8, 0.02),
        idle=DutyCycle(1.28, 0.02, 0.5, 0.01),
        timers=FsmTimers(0.1, 0.5, 10.0),
    )


# -- acceptance criteria summary ------------------------------------------------

_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or rep.when != "call":
        return
    number, title = mark.args
    detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
    status = "PASS" if rep.passed else "FAIL"
    line = f"criterion {number} {status}: {title}" + (f" [{detail}]" if detail else "")
    item.config.stash.setdefault(_ACCEPTANCE, {})[number] = line


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
