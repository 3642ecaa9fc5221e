import pytest

# criterion number -> (title, list of [passed, detail]), one entry per test case
_CRITERIA: dict[int, tuple[str, list]] = {}


class CriterionRecorder:
    def __init__(self, number: int, title: str):
        self.number = number
        self.slot = [False, "did not complete"]
        _CRITERIA.setdefault(number, (title, []))[1].append(self.slot)

    def passed(self, detail: str):
        self.slot[:] = [True, detail]
        print(f"criterion {self.number}: PASS  {detail}")


@pytest.fixture
def criterion():
    return CriterionRecorder


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        title, slots = _CRITERIA[k]
        ok = all(s[0] for s in slots)
        detail = "; ".join(s[1] for s in slots)
        terminalreporter.write_line(f"criterion {k} ({title}): {'PASS' if ok else 'FAIL'}  {detail}")
