from __future__ import annotations

import io

import pytest

from pictopipe import Engine, load_lexicon
from pictopipe.resources import (
    bundled_embeddings,
    bundled_lexicon,
    bundled_ruleset,
    bundled_synonyms,
    bundled_tag_resources,
)


@pytest.fixture(scope="session")
def resources():
    return bundled_tag_resources()


@pytest.fixture(scope="session")
def ruleset():
    return bundled_ruleset()


@pytest.fixture(scope="session")
def demo_lexicon():
    return bundled_lexicon()


@pytest.fixture(scope="session")
def embeddings():
    return bundled_embeddings()


@pytest.fixture(scope="session")
def synonyms():
    return bundled_synonyms()


@pytest.fixture(scope="session")
def engine():
    return Engine()


@pytest.fixture
def tiny_lexicon():
    rows = "\n".join(
        [
            "ice cream\timg/ice_cream.svg",
            "ice\timg/ice.svg",
            "cream\timg/cream.svg",
            "eat\timg/eat.svg",
            "i\timg/i.svg",
            "love\timg/love.svg",
            "bts\timg/bts.svg",
        ]
    )
    return load_lexicon(io.StringIO(rows), format="tsv")


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        status = "PASS" if report.passed else "FAIL"
        print(f"\nACCEPTANCE {name}: {status}")
