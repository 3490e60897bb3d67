import pathlib

import pytest

ROOT = pathlib.Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"


@pytest.fixture(scope="session")
def corpus_dir() -> pathlib.Path:
    return CORPUS


@pytest.fixture(scope="session")
def benign_dir() -> pathlib.Path:
    return CORPUS / "benign"


@pytest.fixture(scope="session")
def malicious_dir() -> pathlib.Path:
    return CORPUS / "malicious"


@pytest.fixture(scope="session")
def seeds_dir() -> pathlib.Path:
    return CORPUS / "seeds"


@pytest.fixture(scope="session")
def zips_dir() -> pathlib.Path:
    return CORPUS / "zips"


@pytest.fixture(scope="session")
def ranking_manifest() -> pathlib.Path:
    return CORPUS / "manifests" / "ranking_demo.jsonl"
