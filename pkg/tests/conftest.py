import numpy as np
import pytest

_ACCEPTANCE: dict[str, tuple[bool, str]] = {}

WORKED_A = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
WORKED_B = np.array([1.0, 2.0, 3.0])


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


@pytest.fixture
def worked():
    return WORKED_A.copy(), WORKED_B.copy()


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion's outcome for the terminal summary.

    Usage: ``criterion("3. matrix identity", ok, detail)``; the call also
    asserts ``ok``.
    """

    def record(name: str, ok: bool, detail: str = ""):
        _ACCEPTANCE[name] = (bool(ok), detail)
        assert ok, f"{name}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda s: int(s.split(".")[0])):
        ok, detail = _ACCEPTANCE[name]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}  {detail}")
