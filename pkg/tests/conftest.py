from pathlib import Path

import pytest

from poissonkit.files import load_structure

DATA = Path(__file__).resolve().parents[1] / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def so3():
    return load_structure(DATA / "so3.json")


@pytest.fixture(scope="session")
def r2():
    return load_structure(DATA / "r2_symplectic.json")


@pytest.fixture(scope="session")
def r4():
    return load_structure(DATA / "r4_symplectic.json")


@pytest.fixture(scope="session")
def singular():
    return load_structure(DATA / "singular_r2.json")


@pytest.fixture(scope="session")
def zero():
    return load_structure(DATA / "zero.json")


@pytest.fixture(scope="session")
def non_jacobi():
    return load_structure(DATA / "non_jacobi.json")


@pytest.fixture(scope="session")
def sphere_chart():
    from poissonkit.files import load_chart

    return load_chart(DATA / "sphere_chart.json")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        ok, detail = RESULTS[number]
        terminalreporter.write_line(f"AC{number:>2} {'PASS' if ok else 'FAIL'}: {detail}")
