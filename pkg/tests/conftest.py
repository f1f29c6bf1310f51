import pathlib

import pytest

from defring.cochain import build_group_complex
from defring.inputs import load_document, load_problem
from defring.transfer import Retract, transfer_products

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def fixture_path(name: str) -> str:
    return str(FIXTURES / name)


class Pipeline:
    def __init__(self, name, d_max, n_arity, profile="stasheff"):
        self.rep = load_problem(load_document(fixture_path(name)))
        self.complex = build_group_complex(self.rep, d_max)
        self.retract = Retract(self.complex)
        self.ainf = transfer_products(self.retract, self.complex, n_arity, profile)


@pytest.fixture(scope="session")
def z2():
    return Pipeline("z2_trivial.json", 3, 4)


@pytest.fixture(scope="session")
def z3():
    return Pipeline("z3_trivial.json", 3, 6)


@pytest.fixture(scope="session")
def z4():
    return Pipeline("z4_trivial.json", 3, 5)


@pytest.fixture(scope="session")
def z5():
    return Pipeline("z5_trivial.json", 3, 6)


@pytest.fixture(scope="session")
def z2f3():
    return Pipeline("z2_over_f3.json", 3, 4)


@pytest.fixture(scope="session")
def s3():
    return Pipeline("s3_natural.json", 2, 4, profile="deg1")


@pytest.fixture(scope="session")
def s3_two():
    return Pipeline("s3_two_chars.json", 2, 6, profile="deg1")


@pytest.fixture(scope="session")
def klein():
    return Pipeline("klein_four.json", 3, 4)
