import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hpexplain.dsl import parse_document
from hpexplain.golden import default_corpus

CORPUS = default_corpus()


def load(name):
    return parse_document((CORPUS / f"{name}.scm-model").read_text(encoding="utf-8"))


@pytest.fixture
def ex1():
    return load("example1")


@pytest.fixture
def ex2():
    return load("example2")


@pytest.fixture
def ex4():
    return load("example4")


@pytest.fixture
def ex5():
    return load("example5")
