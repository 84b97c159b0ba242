"""Forward chaining over the knowledge base with derivation provenance.

Starting from the enquiry items, rules whose antecedents are satisfied fire
until nothing new can be derived (or chains would exceed the depth limit).
Each derived item keeps its shortest derivation chain; ties break on the
lexicographically smallest rule-id sequence, which prefers bridge rules
("bridge-" sorts before "curated-" and "mined-") and keeps every run of the
engine reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from eval_advisor.errors import InvalidInputError
from eval_advisor.mining import KnowledgeBase, Rule
from eval_advisor.taxonomy import Item

DEFAULT_MAX_DEPTH = 4


@dataclass(frozen=True)
class Derivation:
    """How one item was derived: the ordered rule chain that produced it."""

    item: Item
    chain: tuple[str, ...]

    @property
    def depth(self) -> int:
        return len(self.chain)

    def confidence(self, kb: KnowledgeBase) -> Fraction:
        """Product of chain rule accuracies; reported, never filtered on."""
        result = Fraction(1)
        for rule_id in self.chain:
            result *= kb.get(rule_id).accuracy
        return result


def closure(
    items, kb: KnowledgeBase, max_depth: int = DEFAULT_MAX_DEPTH
) -> dict[Item, tuple[str, ...]]:
    """Fixpoint of rule application; maps each item to its best chain.

    Input items map to the empty chain. A chain is the ordered rule-id
    sequence that, fired left to right from the input set, derives the item;
    no rule repeats within a chain and chains never exceed ``max_depth``.
    For each item the minimal (length, rule-id sequence) chain is kept.
    """
    inputs = {Item(i.attribute, i.term_id) for i in items}
    if not inputs:
        raise InvalidInputError("closure needs at least one input item")
    if max_depth < 1:
        raise InvalidInputError("max-depth must be at least 1")
    best: dict[Item, tuple[str, ...]] = {item: () for item in inputs}

    improved = True
    while improved:
        improved = False
        for rule in kb.rules:
            if rule.consequent in inputs:
                continue
            if not all(a in best for a in rule.antecedent):
                continue
            chain = _merge_chain(best, rule, max_depth)
            if chain is None:
                continue
            current = best.get(rule.consequent)
            if current is None or (len(chain), chain) < (len(current), current):
                best[rule.consequent] = chain
                improved = True
    return best


def _merge_chain(best, rule: Rule, max_depth: int):
    """Concatenate antecedent chains (deduplicated) and append this rule."""
    merged: list[str] = []
    for item in sorted(rule.antecedent, key=Item.sort_key):
        for rule_id in best[item]:
            if rule_id not in merged:
                merged.append(rule_id)
    if rule.rule_id in merged:
        return None  # firing would repeat a rule within the chain
    merged.append(rule.rule_id)
    if len(merged) > max_depth:
        return None
    return tuple(merged)


def derivations(
    items, kb: KnowledgeBase, max_depth: int = DEFAULT_MAX_DEPTH
) -> list[Derivation]:
    """Derived items only (inputs excluded), in deterministic item order."""
    reached = closure(items, kb, max_depth)
    out = [
        Derivation(item, chain)
        for item, chain in reached.items()
        if chain
    ]
    out.sort(key=lambda d: d.item.sort_key())
    return out


def applicable_rules(
    items, kb: KnowledgeBase, max_depth: int = DEFAULT_MAX_DEPTH
) -> list[Rule]:
    """Rules whose antecedents lie inside the closure of the enquiry.

    Ordered by how early the rule becomes fireable (the deepest antecedent
    item's derivation depth), then accuracy desc, coverage desc, rule id.
    """
    reached = closure(items, kb, max_depth)
    out = []
    for rule in kb.rules:
        if all(a in reached for a in rule.antecedent):
            enablement = max(len(reached[a]) for a in rule.antecedent)
            out.append((enablement, rule))
    out.sort(key=lambda pair: (pair[0],) + pair[1].sort_key())
    return [rule for _, rule in out]
