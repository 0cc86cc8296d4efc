from pathlib import Path

import pytest

from spades.bidding import Tables
from spades.curves import (
    SCTable,
    TrainConfig,
    generate_dataset,
    load_dataset,
    save_dataset,
    train,
)

ARTIFACTS = Path(__file__).resolve().parent.parent / "build" / "artifacts"

# one fixed self-play corpus backs every curve-dependent test
SC_ROUNDS = 200_000
SC_EXPLORE = 0.15
SC_SEED = 11

_CORPUS_TAG = f"{SC_ROUNDS}-{SC_EXPLORE}-{SC_SEED}"


@pytest.fixture(scope="session")
def tables() -> Tables:
    return Tables.build()


@pytest.fixture(scope="session")
def sc_dataset():
    """Nil-outcome training set, generated once and cached on disk."""
    ARTIFACTS.mkdir(parents=True, exist_ok=True)
    path = ARTIFACTS / f"nil-outcomes-{_CORPUS_TAG}.jsonl"
    if path.exists():
        return load_dataset(path)
    data = generate_dataset(SC_ROUNDS, SC_EXPLORE, seed=SC_SEED)
    save_dataset(path, data)
    return data


@pytest.fixture(scope="session")
def sc_table(sc_table_path) -> SCTable:
    """Success-curve table trained from the cached corpus."""
    return SCTable.load(sc_table_path)


@pytest.fixture(scope="session")
def sc_table_path(sc_dataset) -> str:
    ARTIFACTS.mkdir(parents=True, exist_ok=True)
    path = ARTIFACTS / f"sc-table-{_CORPUS_TAG}.json"
    if not path.exists():
        SCTable.from_model(train(sc_dataset)).save(path)
    return str(path)


@pytest.fixture(scope="session")
def sc_single_path(sc_dataset) -> str:
    """Single shared curve trained from the same corpus, cached as JSON."""
    ARTIFACTS.mkdir(parents=True, exist_ok=True)
    path = ARTIFACTS / f"sc-table-single-{_CORPUS_TAG}.json"
    if not path.exists():
        table = SCTable.from_model(
            train(sc_dataset, TrainConfig(sequence_features=False))
        )
        table.save(path)
    return str(path)
