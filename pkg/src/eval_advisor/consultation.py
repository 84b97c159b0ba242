"""Consultation flow: enquiry in, suggestion report out, experience retained.

A report groups the items derivable from the enquiry by step attribute,
each with its rule chain and confidence, and attaches similar past
experiments as supporting cases. Generalizations of the enquiry's own items
(the bridge intermediates) are not reported: telling an evaluator who asked
about Vertical Scalability that it is a kind of Scalability adds nothing.

Completed experiments are retained as new records; feedback on reports is
appended to a log and never mutates the knowledge base by itself.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from typing import Optional

from eval_advisor.errors import (
    EmptyKnowledgeError,
    InvalidInputError,
    NotFoundError,
)
from eval_advisor.inference import DEFAULT_MAX_DEPTH, derivations
from eval_advisor.mining import KnowledgeBase
from eval_advisor.retrieval import CaseRetriever, Enquiry
from eval_advisor.store import EvidenceStore
from eval_advisor.taxonomy import Item
from eval_advisor.wire import (
    dumps,
    fraction_wire,
    item_wire,
    items_wire,
    result_wire,
)

VERDICTS = ("helpful", "not-helpful")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass(frozen=True)
class SuggestionReport:
    """Materialized consultation result; ``wire`` is the export form."""

    report_id: str
    wire: dict


class JsonLog:
    """Append-only JSONL file with an in-memory view; used for reports
    and feedback so references survive process restarts."""

    def __init__(self, path=None):
        self._path = path
        self._entries: list[dict] = []
        if path is not None:
            try:
                with open(path, "r", encoding="utf-8") as fh:
                    self._entries = [
                        json.loads(line) for line in fh if line.strip()
                    ]
            except FileNotFoundError:
                pass

    def append(self, entry: dict) -> None:
        self._entries.append(entry)
        if self._path is not None:
            with open(self._path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry, sort_keys=True))
                fh.write("\n")

    def entries(self) -> list[dict]:
        return list(self._entries)


class Consultation:
    def __init__(
        self,
        store: EvidenceStore,
        kb: KnowledgeBase,
        report_log: Optional[JsonLog] = None,
        feedback_log: Optional[JsonLog] = None,
        max_depth: int = DEFAULT_MAX_DEPTH,
    ):
        self._store = store
        self._kb = kb
        self._reports = report_log if report_log is not None else JsonLog()
        self._feedback = feedback_log if feedback_log is not None else JsonLog()
        self._max_depth = max_depth

    # -- suggest --------------------------------------------------------------

    def suggest(self, enquiry: Enquiry) -> SuggestionReport:
        if len(self._kb) == 0 and not self._store.records():
            raise EmptyKnowledgeError(
                "no rules and no records: load a corpus or mine first"
            )
        vocab = self._store.vocabulary
        derived = derivations(enquiry.items, self._kb, self._max_depth)

        suggestions: dict[str, list[dict]] = {}
        for derivation in derived:
            item = derivation.item
            if self._generalizes_enquiry(item, enquiry):
                continue
            if (
                enquiry.requested_attributes is not None
                and item.attribute not in enquiry.requested_attributes
            ):
                continue
            entry = {
                "item": item_wire(vocab, item),
                "derivation": {
                    "chain": list(derivation.chain),
                    "depth": derivation.depth,
                },
                "confidence": fraction_wire(derivation.confidence(self._kb)),
            }
            suggestions.setdefault(item.attribute.value, []).append(entry)
        for group in suggestions.values():
            group.sort(key=lambda e: e["item"]["value"])

        retriever = CaseRetriever(self._store, self._kb, self._max_depth)
        results, trace = retriever.retrieve(enquiry)

        enquiry_wire = {
            "items": items_wire(vocab, enquiry.items),
            "mode": enquiry.mode,
            "requested-attributes": sorted(
                a.value for a in enquiry.requested_attributes
            )
            if enquiry.requested_attributes is not None
            else None,
        }
        body = {
            "enquiry": enquiry_wire,
            "suggestions": suggestions,
            "supporting-cases": [result_wire(self._store, r) for r in results],
            "retrieval-trace": trace,
            "kb-fingerprint": self._kb.fingerprint(),
        }
        report_id = "rep-" + hashlib.sha256(
            dumps([body["enquiry"], body["kb-fingerprint"], self._store.fingerprint()]).encode("utf-8")
        ).hexdigest()[:10]
        wire = dict(body)
        wire["id"] = report_id
        wire["generated-at"] = _now()
        report = SuggestionReport(report_id, wire)
        self._reports.append(wire)
        return report

    def _generalizes_enquiry(self, item: Item, enquiry: Enquiry) -> bool:
        vocab = self._store.vocabulary
        for asked in enquiry.items:
            if asked.attribute != item.attribute:
                continue
            if any(
                a.term_id == item.term_id
                for a in vocab.ancestors(asked.term_id)
            ):
                return True
        return False

    # -- retain / feedback ------------------------------------------------------

    def retain(self, items, provenance: dict):
        """Store a completed experiment for future retrieval."""
        marked = dict(provenance)
        marked["origin"] = "retained"
        return self._store.add_record(items, marked)

    def record_feedback(self, report_id: str, verdict: str, note: str = "") -> dict:
        if verdict not in VERDICTS:
            raise InvalidInputError(
                f"verdict must be one of {', '.join(VERDICTS)}; got {verdict!r}"
            )
        if not self.report(report_id):
            raise NotFoundError(f"unknown report id: {report_id!r}")
        entry = {
            "report": report_id,
            "verdict": verdict,
            "note": note,
            "submitted-at": _now(),
        }
        self._feedback.append(entry)
        count = sum(
            1 for e in self._feedback.entries() if e.get("report") == report_id
        )
        return {"status": "recorded", "report": report_id, "feedback-count": count}

    def report(self, report_id: str) -> Optional[dict]:
        for entry in self._reports.entries():
            if entry.get("id") == report_id:
                return entry
        return None

    def feedback_for(self, report_id: str) -> list[dict]:
        return [
            e for e in self._feedback.entries() if e.get("report") == report_id
        ]
