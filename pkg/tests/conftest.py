import json
from pathlib import Path

import pytest

from eval_advisor.mining import KnowledgeBase, mine_rules
from eval_advisor.store import EvidenceStore
from eval_advisor.taxonomy import StepAttribute, Vocabulary

import eval_advisor

DATA_DIR = Path(eval_advisor.__file__).parent / "data"
FIXTURES = Path(__file__).parent / "fixtures"

VOCAB_PATH = DATA_DIR / "vocab.json"
CORPUS_PATH = DATA_DIR / "corpus.json"
CURATED_PATH = DATA_DIR / "curated.json"


@pytest.fixture(scope="session")
def vocab():
    return Vocabulary.load(VOCAB_PATH)


@pytest.fixture()
def fresh_vocab():
    return Vocabulary.load(VOCAB_PATH)


def build_seed_store(vocab) -> EvidenceStore:
    store = EvidenceStore(vocab)
    with open(CORPUS_PATH, encoding="utf-8") as fh:
        outcome = store.import_corpus(json.load(fh))
    assert outcome["warnings"] == []
    return store


# Per-test store: several tests append or supersede records.
@pytest.fixture()
def seed_store(vocab):
    return build_seed_store(vocab)


@pytest.fixture(scope="session")
def curated_rules(vocab):
    return list(KnowledgeBase.load(CURATED_PATH, vocab))


# The knowledge base is immutable, so one per session is safe.
@pytest.fixture(scope="session")
def seed_kb(vocab, curated_rules):
    return mine_rules(build_seed_store(vocab), curated=curated_rules)


@pytest.fixture(scope="session")
def item(vocab):
    def build(attribute_name: str, value: str):
        return vocab.item(StepAttribute.parse(attribute_name), value)

    return build


def load_fixture_corpus(name: str):
    with open(FIXTURES / name, encoding="utf-8") as fh:
        return json.load(fh)
