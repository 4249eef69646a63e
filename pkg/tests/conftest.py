import pytest

from flyterm.terms import parse_position, parse_term

# one edge x -> y: leaves x=(leaf 1) at 1111, y=(leaf 2) at 1112, e=(leaf -1) at 112
EDGE_TEXT = "(add -1 2 (add 1 -1 (oplus (oplus (leaf 1) (leaf 2)) (leaf -1))))"
X_POS, Y_POS, E_POS = parse_position("1111"), parse_position("1112"), parse_position("112")

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def t_edge():
    return parse_term(EDGE_TEXT)


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
