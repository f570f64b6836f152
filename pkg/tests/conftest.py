import pytest

ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(number, title, ok, detail=''):
        line = f'criterion {number:>2} {"PASS" if ok else "FAIL"}: {title}'
        if detail:
            line += f' ({detail})'
        ACCEPTANCE.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section('acceptance criteria')
    for _, line in sorted(ACCEPTANCE):
        terminalreporter.write_line(line)
