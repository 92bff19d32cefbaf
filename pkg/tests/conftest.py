import numpy as np
import pytest

from prefspace import catalog


@pytest.fixture
def pd():
    return catalog.prisoners_dilemma()


@pytest.fixture
def bos():
    return catalog.battle_of_sexes()


@pytest.fixture
def mp():
    return catalog.matching_pennies()


@pytest.fixture
def three():
    return catalog.three_player_game()


@pytest.fixture
def cournot():
    return catalog.cournot_duopoly()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    from criteria import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        passed, detail = RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
