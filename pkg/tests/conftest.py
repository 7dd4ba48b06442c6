import random

import pytest

from prodfree.words import Alphabet


@pytest.fixture(scope="session")
def ab() -> Alphabet:
    return Alphabet("ab")


@pytest.fixture(scope="session")
def abc() -> Alphabet:
    return Alphabet("abc")


@pytest.fixture(scope="session")
def unary() -> Alphabet:
    return Alphabet("a")


def seeded_rng(seed: int) -> random.Random:
    return random.Random(seed)
