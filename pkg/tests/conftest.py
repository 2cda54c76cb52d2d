from pathlib import Path

import pytest

from lvcert.io import load_system

DATA = Path(__file__).resolve().parent.parent / "data"

EX3 = DATA / "three_species_interior.json"
EX4 = DATA / "four_species_two_survivors.json"
EX5 = DATA / "five_species_cascade.json"


@pytest.fixture(scope="session")
def ex3():
    return load_system(EX3).system()


@pytest.fixture(scope="session")
def ex4():
    return load_system(EX4).system()


@pytest.fixture(scope="session")
def ex5():
    return load_system(EX5).system()


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
