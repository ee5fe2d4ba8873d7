import pytest

from dsh_sim.scenario import DshConfig, QueueAdvisory

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def record():
    """Log one acceptance criterion outcome for the terminal summary, then assert it."""
    def _record(name: str, passed: bool, detail: str = ""):
        _ACCEPTANCE.append((name, bool(passed), detail))
        assert passed, f"{name}: {detail}"
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {name}  {detail}")


@pytest.fixture
def mil_advisory():
    return QueueAdvisory(queue_start=5200.0, queue_end=5700.0, queue_speed=5.0, comm_range=1000.0)


@pytest.fixture
def dsh_cfg():
    return DshConfig(decel_step=1.0, accel_step=1.0, speed_limit=20.0)
