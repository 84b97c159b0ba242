"""Randomized vocabularies and corpora for oracle-equivalence and property
runs: up to 20 terms with 0-2 hierarchy levels, up to 40 records of up to
8 items each."""

from __future__ import annotations

import random
from fractions import Fraction

from eval_advisor.store import EvidenceStore
from eval_advisor.taxonomy import StepAttribute, Vocabulary

ATTRIBUTES = list(StepAttribute)


def random_vocabulary(rng: random.Random, max_terms: int = 20) -> Vocabulary:
    vocab = Vocabulary()
    n_terms = rng.randint(2, max_terms)
    created = []  # (term, level)
    for n in range(n_terms):
        attribute = rng.choice(ATTRIBUTES)
        label = f"term {n}"
        parent = None
        # 0-2 hierarchy levels: a new term may hang under an existing
        # same-attribute term that is itself at most one level deep.
        if rng.random() < 0.4:
            candidates = [
                (t, level)
                for t, level in created
                if t.attribute == attribute and level < 2
            ]
            if candidates:
                parent_term, parent_level = rng.choice(candidates)
                parent = parent_term.term_id
        term = vocab.add_term(attribute, label, parent=parent)
        level = 0
        if parent is not None:
            level = next(lv for t, lv in created if t.term_id == parent) + 1
        created.append((term, level))
    return vocab


def random_corpus(
    rng: random.Random,
    vocab: Vocabulary,
    max_records: int = 40,
    max_items: int = 8,
) -> EvidenceStore:
    terms = vocab.terms()
    store = EvidenceStore(vocab)
    for n in range(rng.randint(1, max_records)):
        size = rng.randint(1, min(max_items, len(terms)))
        chosen = rng.sample(terms, size)
        items = {vocab.item(t.attribute, t.label) for t in chosen}
        store.add_record(
            items,
            {"study": f"study-{n}", "provider": "p", "service": "s",
             "year": 2000 + rng.randint(0, 25)},
        )
    return store


def random_thresholds(rng: random.Random):
    min_coverage = rng.randint(1, 4)
    min_accuracy = rng.choice(
        [Fraction(1, 2), Fraction(3, 5), Fraction(2, 3), Fraction(4, 5), Fraction(1)]
    )
    return min_coverage, min_accuracy
