"""Case retrieval in three modes, with automatic escalation.

Precise Mode returns records containing every enquiry item (hierarchy
aware). Heuristic Mode forward-chains the enquiry through the knowledge
base and returns records that carry consequents of the applicable rules,
excluding records Precise Mode already found. Fuzzy Mode drops one enquiry
item at a time and unions Precise and Heuristic results of each subset;
because it works from incomplete enquiries, its results carry an explicit
dropped-items annotation rather than any guarantee of relevance.

Scores only order output and never filter it; all provenance (matched
items, enabling rules, dropped items) is preserved so a consumer can
re-rank.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from eval_advisor.errors import InvalidInputError
from eval_advisor.inference import DEFAULT_MAX_DEPTH, applicable_rules
from eval_advisor.mining import KnowledgeBase
from eval_advisor.store import EvidenceStore, ExperimentRecord
from eval_advisor.taxonomy import Item, StepAttribute

PRECISE = "precise"
HEURISTIC = "heuristic"
FUZZY = "fuzzy"
AUTO = "auto"

MODES = (PRECISE, HEURISTIC, FUZZY, AUTO)


@dataclass(frozen=True)
class Enquiry:
    items: frozenset[Item]
    mode: str = AUTO
    requested_attributes: Optional[frozenset[StepAttribute]] = None

    def __post_init__(self):
        if not self.items:
            raise InvalidInputError("an enquiry needs at least one item")
        if self.mode not in MODES:
            raise InvalidInputError(
                f"mode must be one of {', '.join(MODES)}; got {self.mode!r}"
            )
        if self.requested_attributes is not None and not self.requested_attributes:
            raise InvalidInputError(
                "requested attributes, when given, must be non-empty"
            )

    def sorted_items(self) -> list[Item]:
        return sorted(self.items, key=Item.sort_key)


@dataclass(frozen=True)
class RetrievalResult:
    record: ExperimentRecord
    mode_used: str
    matched_items: frozenset[Item]
    rules_applied: tuple[str, ...] = ()
    dropped_items: frozenset[Item] = frozenset()
    score: Fraction = Fraction(1)


def _store_order(record: ExperimentRecord):
    return (-int(record.provenance.get("year", 0)), record.record_id)


class CaseRetriever:
    """RETRIEVE step over an immutable store snapshot and knowledge base."""

    def __init__(
        self,
        store: EvidenceStore,
        kb: KnowledgeBase,
        max_depth: int = DEFAULT_MAX_DEPTH,
        exact: bool = False,
    ):
        self._store = store
        self._kb = kb
        self._max_depth = max_depth
        self._exact = exact  # debug switch: no hierarchy-aware matching

    # -- modes --------------------------------------------------------------

    def retrieve_precise(self, enquiry: Enquiry) -> list[RetrievalResult]:
        """Records containing every enquiry item, exactly as asked."""
        records = self._store.query_by_items(enquiry.items, exact=self._exact)
        return [
            RetrievalResult(
                record=record,
                mode_used=PRECISE,
                matched_items=frozenset(enquiry.items),
            )
            for record in records
        ]

    def retrieve_heuristic(self, enquiry: Enquiry) -> list[RetrievalResult]:
        """Records carrying consequents of rules the enquiry fires."""
        rules = applicable_rules(enquiry.items, self._kb, self._max_depth)
        consequents = {r.consequent for r in rules}
        if not consequents:
            return []
        precise_ids = {
            r.record.record_id for r in self.retrieve_precise(enquiry)
        }
        results = []
        for record in sorted(self._store.records(), key=_store_order):
            if record.record_id in precise_ids:
                continue
            bare = {Item(i.attribute, i.term_id) for i in record.items}
            matched = frozenset(bare & consequents)
            if not matched:
                continue
            enabling = [r for r in rules if r.consequent in matched]
            score = Fraction(len(matched), len(consequents)) * max(
                r.accuracy for r in enabling
            )
            results.append(
                RetrievalResult(
                    record=record,
                    mode_used=HEURISTIC,
                    matched_items=matched,
                    rules_applied=tuple(r.rule_id for r in enabling),
                    score=score,
                )
            )
        results.sort(key=lambda r: (-r.score,) + _store_order(r.record))
        return results

    def retrieve_fuzzy(self, enquiry: Enquiry) -> list[RetrievalResult]:
        """Leave-one-out retrieval; every result names what was dropped."""
        if len(enquiry.items) < 2:
            raise InvalidInputError(
                "fuzzy retrieval needs at least two enquiry items (nothing to drop)"
            )
        penalty = Fraction(len(enquiry.items) - 1, len(enquiry.items))
        best: dict[str, RetrievalResult] = {}
        for dropped in enquiry.sorted_items():
            subset = Enquiry(
                items=enquiry.items - {dropped},
                mode=FUZZY,
                requested_attributes=enquiry.requested_attributes,
            )
            for base in self.retrieve_precise(subset) + self.retrieve_heuristic(subset):
                candidate = RetrievalResult(
                    record=base.record,
                    mode_used=FUZZY,
                    matched_items=base.matched_items,
                    rules_applied=base.rules_applied,
                    dropped_items=frozenset({Item(dropped.attribute, dropped.term_id)}),
                    score=base.score * penalty,
                )
                held = best.get(base.record.record_id)
                if held is None or candidate.score > held.score:
                    best[base.record.record_id] = candidate
        results = list(best.values())
        results.sort(key=lambda r: (-r.score,) + _store_order(r.record))
        return results

    # -- dispatch -------------------------------------------------------------

    def retrieve(self, enquiry: Enquiry) -> tuple[list[RetrievalResult], list[dict]]:
        """Run the asked mode, or escalate Precise -> Heuristic -> Fuzzy."""
        if enquiry.mode == PRECISE:
            results = self.retrieve_precise(enquiry)
            return results, [{"mode": PRECISE, "results": len(results)}]
        if enquiry.mode == HEURISTIC:
            results = self.retrieve_heuristic(enquiry)
            return results, [{"mode": HEURISTIC, "results": len(results)}]
        if enquiry.mode == FUZZY:
            results = self.retrieve_fuzzy(enquiry)
            return results, [{"mode": FUZZY, "results": len(results)}]

        trace = []
        results = self.retrieve_precise(enquiry)
        trace.append({"mode": PRECISE, "results": len(results)})
        if results:
            return results, trace
        results = self.retrieve_heuristic(enquiry)
        trace.append({"mode": HEURISTIC, "results": len(results)})
        if results:
            return results, trace
        if len(enquiry.items) < 2:
            trace.append({"mode": FUZZY, "skipped": "singleton enquiry"})
            return [], trace
        results = self.retrieve_fuzzy(enquiry)
        trace.append({"mode": FUZZY, "results": len(results)})
        return results, trace
