"""Knowledge-base construction: levelwise itemset mining and rule extraction.

Mining runs over hierarchy-expanded records (each record's items plus their
ancestor generalizations), so knowledge is found at the most general level
the data supports. A rule keeps its accuracy as an exact rational; coverage
and accuracy thresholds are configuration, defaulting to 3 and 4/5.

Three rule origins share one shape:

* ``mined``   - extracted from frequent itemsets, accuracy computed exactly;
* ``bridge``  - one per taxonomy parent edge, always accuracy 1;
* ``curated`` - hand-written, preserved across re-mining and winning
  conflicts against mined rules with the same content.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional

from eval_advisor.errors import FormatError, InvalidInputError, NotFoundError
from eval_advisor.store import EvidenceStore
from eval_advisor.taxonomy import Item, StepAttribute, Vocabulary

MINED = "mined"
BRIDGE = "bridge"
CURATED = "curated"


def _content_digest(antecedent: frozenset[Item], consequent: Item) -> str:
    doc = json.dumps(
        [sorted(i.sort_key() for i in antecedent), consequent.sort_key()]
    )
    return hashlib.sha256(doc.encode("utf-8")).hexdigest()[:10]


@dataclass(frozen=True)
class Rule:
    """antecedent item-set -> single consequent item, with provenance."""

    rule_id: str
    antecedent: frozenset[Item]
    consequent: Item
    coverage: int
    accuracy: Fraction
    origin: str

    @classmethod
    def build(cls, antecedent, consequent, coverage, accuracy, origin) -> "Rule":
        antecedent = frozenset(antecedent)
        if not antecedent:
            raise InvalidInputError("a rule needs a non-empty antecedent")
        if consequent in antecedent:
            raise InvalidInputError("consequent may not appear in antecedent")
        accuracy = Fraction(accuracy)
        if not 0 < accuracy <= 1:
            raise InvalidInputError("accuracy must be in (0, 1]")
        rule_id = f"{origin}-{_content_digest(antecedent, consequent)}"
        return cls(rule_id, antecedent, consequent, int(coverage), accuracy, origin)

    def sort_key(self):
        # Spec order: accuracy desc, coverage desc, then rule id.
        return (-self.accuracy, -self.coverage, self.rule_id)


@dataclass(frozen=True)
class MiningConfig:
    min_coverage: int = 3
    min_accuracy: Fraction = Fraction(4, 5)
    max_itemset_size: int = 3

    def __post_init__(self):
        if self.min_coverage < 1:
            raise InvalidInputError("min-coverage must be a positive count")
        acc = Fraction(self.min_accuracy)
        object.__setattr__(self, "min_accuracy", acc)
        if not 0 < acc <= 1:
            raise InvalidInputError("min-accuracy must be in (0, 1]")
        if self.max_itemset_size < 2:
            raise InvalidInputError("max-itemset-size must be at least 2")

    @classmethod
    def from_wire(cls, body: dict) -> "MiningConfig":
        """Accepts both hyphenated and snake_case keys."""
        defaults = cls()

        def pick(name: str, fallback):
            return body.get(name, body.get(name.replace("-", "_"), fallback))

        try:
            accuracy = pick("min-accuracy", defaults.min_accuracy)
            if isinstance(accuracy, dict):
                accuracy = Fraction(int(accuracy["num"]), int(accuracy["den"]))
            else:
                accuracy = Fraction(str(accuracy))
            return cls(
                min_coverage=int(pick("min-coverage", defaults.min_coverage)),
                min_accuracy=accuracy,
                max_itemset_size=int(
                    pick("max-itemset-size", defaults.max_itemset_size)
                ),
            )
        except (TypeError, ValueError, KeyError, ZeroDivisionError) as exc:
            raise InvalidInputError(f"bad mining config: {exc}") from exc


def frequent_itemsets(
    store: EvidenceStore, config: MiningConfig, exact: bool = False
) -> dict[frozenset[Item], int]:
    """All itemsets of size 2..max with coverage >= min-coverage.

    Levelwise generation with anti-monotone pruning: a k-set is a candidate
    only when each of its (k-1)-subsets is frequent.
    """
    sets = _frequent_levels(store, config, exact)
    return {s: c for s, c in sets.items() if len(s) >= 2}


def _record_bags(store: EvidenceStore, exact: bool) -> list[frozenset[Item]]:
    bags = []
    for record in store.records():
        if exact:
            bags.append(frozenset(Item(i.attribute, i.term_id) for i in record.items))
        else:
            bags.append(store.expanded_items(record.record_id))
    return bags


def _frequent_levels(store, config, exact) -> dict[frozenset[Item], int]:
    bags = _record_bags(store, exact)
    counts: dict[frozenset[Item], int] = {}
    singles: dict[Item, int] = {}
    for bag in bags:
        for item in bag:
            singles[item] = singles.get(item, 0) + 1
    level = set()
    for item, count in singles.items():
        if count >= config.min_coverage:
            key = frozenset({item})
            counts[key] = count
            level.add(key)
    frequent_items = sorted((next(iter(s)) for s in level), key=Item.sort_key)
    for _size in range(2, config.max_itemset_size + 1):
        candidates = set()
        for base in level:
            for item in frequent_items:
                if item in base:
                    continue
                candidate = base | {item}
                # Anti-monotone pruning: every (k-1)-subset must be frequent.
                if all(candidate - {member} in counts for member in candidate):
                    candidates.add(candidate)
        level = set()
        for candidate in candidates:
            count = sum(1 for bag in bags if candidate <= bag)
            if count >= config.min_coverage:
                counts[candidate] = count
                level.add(candidate)
        if not level:
            break
    return counts


def _ancestor_of(vocab: Vocabulary, maybe_ancestor: Item, item: Item) -> bool:
    if maybe_ancestor.attribute != item.attribute:
        return False
    return any(
        a.term_id == maybe_ancestor.term_id
        for a in vocab.ancestors(item.term_id)
    )


def _reduce(vocab: Vocabulary, itemset: frozenset[Item]) -> frozenset[Item]:
    """Drop antecedent items implied by a more specific sibling item."""
    return frozenset(
        a
        for a in itemset
        if not any(b != a and _ancestor_of(vocab, a, b) for b in itemset)
    )


def _generalizes(vocab, general: frozenset[Item], specific: frozenset[Item]) -> bool:
    return all(
        any(g == s or _ancestor_of(vocab, g, s) for s in specific)
        for g in general
    )


def extract_rules(
    store: EvidenceStore, config: MiningConfig, exact: bool = False
) -> list[Rule]:
    """Mine rules from frequent itemsets; see the module docstring.

    For each frequent itemset and each single-item consequent partition the
    candidate passes when its exact accuracy meets the threshold and no
    same-attribute ancestor relation links consequent and antecedent. The
    antecedent is reduced (generalizations implied by a sibling item are
    dropped), duplicates keep the larger coverage, and a candidate is
    discarded when a strictly-more-general antecedent predicts the same
    consequent at least as accurately, so knowledge lands at the most
    general level the data supports.
    """
    vocab = store.vocabulary
    sets = _frequent_levels(store, config, exact)
    candidates: dict[tuple[frozenset[Item], Item], tuple[int, Fraction]] = {}
    for itemset, coverage in sets.items():
        if len(itemset) < 2:
            continue
        for consequent in itemset:
            antecedent = itemset - {consequent}
            if any(
                _ancestor_of(vocab, consequent, a)
                or _ancestor_of(vocab, a, consequent)
                for a in antecedent
            ):
                continue
            reduced = _reduce(vocab, antecedent)
            if consequent in reduced or not reduced:
                continue
            # Every subset of a frequent set is frequent, so the reduced
            # antecedent is always present in the level counts.
            denominator = sets[reduced]
            accuracy = Fraction(coverage, denominator)
            if accuracy < config.min_accuracy:
                continue
            key = (reduced, consequent)
            if key not in candidates or coverage > candidates[key][0]:
                candidates[key] = (coverage, accuracy)

    rules = []
    for (antecedent, consequent), (coverage, accuracy) in candidates.items():
        subsumed = any(
            other_c == consequent
            and other_a != antecedent
            and other_acc >= accuracy
            and _generalizes(vocab, other_a, antecedent)
            for (other_a, other_c), (_, other_acc) in candidates.items()
        )
        if not subsumed:
            rules.append(
                Rule.build(antecedent, consequent, coverage, accuracy, MINED)
            )
    rules.sort(key=Rule.sort_key)
    return rules


def materialize_bridge_rules(store: EvidenceStore) -> list[Rule]:
    """One always-true rule per taxonomy parent edge: child implies parent."""
    vocab = store.vocabulary
    rules = []
    for term in vocab.terms():
        if term.parent is None:
            continue
        child = Item(term.attribute, term.term_id)
        parent = Item(term.attribute, term.parent)
        rules.append(
            Rule.build(
                frozenset({child}),
                parent,
                store.coverage({child}) if len(store) else 0,
                Fraction(1),
                BRIDGE,
            )
        )
    rules.sort(key=Rule.sort_key)
    return rules


class KnowledgeBase:
    """Immutable, deterministic rule collection with a content fingerprint."""

    def __init__(self, rules: Iterable[Rule], vocabulary: Vocabulary):
        self._vocab = vocabulary
        self._rules = tuple(sorted(rules, key=Rule.sort_key))
        self._by_id = {r.rule_id: r for r in self._rules}

    def __len__(self) -> int:
        return len(self._rules)

    def __iter__(self):
        return iter(self._rules)

    @property
    def rules(self) -> tuple[Rule, ...]:
        return self._rules

    def get(self, rule_id: str) -> Rule:
        rule = self._by_id.get(rule_id)
        if rule is None:
            raise NotFoundError(f"unknown rule id: {rule_id!r}")
        return rule

    def filter(
        self,
        origin: Optional[str] = None,
        attribute: Optional[StepAttribute] = None,
    ) -> list[Rule]:
        """Browse rules; ``attribute`` matches the consequent's attribute."""
        out = []
        for rule in self._rules:
            if origin is not None and rule.origin != origin:
                continue
            if attribute is not None and rule.consequent.attribute != attribute:
                continue
            out.append(rule)
        return out

    def fingerprint(self) -> str:
        doc = json.dumps(self.to_wire(), sort_keys=True)
        return hashlib.sha256(doc.encode("utf-8")).hexdigest()[:16]

    # -- wire format -------------------------------------------------------

    def rule_to_wire(self, rule: Rule, with_id: bool = False) -> dict:
        wire = {
            "antecedent": [
                {
                    "attribute": i.attribute.value,
                    "value": self._vocab.label(i.term_id),
                }
                for i in sorted(rule.antecedent, key=Item.sort_key)
            ],
            "consequent": {
                "attribute": rule.consequent.attribute.value,
                "value": self._vocab.label(rule.consequent.term_id),
            },
            "coverage": rule.coverage,
            "accuracy": {
                "num": rule.accuracy.numerator,
                "den": rule.accuracy.denominator,
            },
            "origin": rule.origin,
        }
        if with_id:
            wire["id"] = rule.rule_id
        return wire

    def to_wire(self, with_ids: bool = False) -> list[dict]:
        return [self.rule_to_wire(r, with_ids) for r in self._rules]

    @classmethod
    def from_wire(cls, entries, vocabulary: Vocabulary) -> "KnowledgeBase":
        if not isinstance(entries, list):
            raise FormatError("knowledge-base document must be a JSON array")
        rules = []
        for pos, entry in enumerate(entries):
            try:
                antecedent = frozenset(
                    vocabulary.item(
                        StepAttribute.parse(i["attribute"]), i["value"]
                    )
                    for i in entry["antecedent"]
                )
                consequent_raw = entry["consequent"]
                consequent = vocabulary.item(
                    StepAttribute.parse(consequent_raw["attribute"]),
                    consequent_raw["value"],
                )
                accuracy = Fraction(
                    int(entry["accuracy"]["num"]), int(entry["accuracy"]["den"])
                )
                rules.append(
                    Rule.build(
                        antecedent,
                        consequent,
                        int(entry.get("coverage", 0)),
                        accuracy,
                        entry.get("origin", CURATED),
                    )
                )
            except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
                raise FormatError(
                    f"knowledge-base entry {pos} is malformed: {exc}"
                ) from exc
            except (InvalidInputError, NotFoundError) as exc:
                raise FormatError(
                    f"knowledge-base entry {pos} is invalid: {exc.message}"
                ) from exc
        return cls(rules, vocabulary)

    @classmethod
    def load(cls, path, vocabulary: Vocabulary) -> "KnowledgeBase":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                entries = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"knowledge-base file is not valid JSON: {exc}") from exc
        return cls.from_wire(entries, vocabulary)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_wire(), fh, indent=2, ensure_ascii=False)
            fh.write("\n")


def mine_rules(
    store: EvidenceStore,
    config: MiningConfig = MiningConfig(),
    curated: Iterable[Rule] = (),
    exact: bool = False,
) -> KnowledgeBase:
    """Full re-mine: mined + bridge + curated, curated winning conflicts.

    Coverage of bridge and curated rules is refreshed from the store so the
    knowledge base always reports support against the data it was built on;
    curated accuracy is the author's assertion and is left untouched.
    """
    merged: dict[tuple[frozenset[Item], Item], Rule] = {}
    for rule in extract_rules(store, config, exact):
        merged[(rule.antecedent, rule.consequent)] = rule
    for rule in materialize_bridge_rules(store):
        merged[(rule.antecedent, rule.consequent)] = rule
    for rule in curated:
        refreshed = Rule.build(
            rule.antecedent,
            rule.consequent,
            store.coverage(rule.antecedent | {rule.consequent})
            if len(store)
            else rule.coverage,
            rule.accuracy,
            CURATED,
        )
        merged[(rule.antecedent, rule.consequent)] = refreshed
    return KnowledgeBase(merged.values(), store.vocabulary)
