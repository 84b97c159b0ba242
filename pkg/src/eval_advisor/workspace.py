"""Data-directory lifecycle and the operation surface shared by CLI and HTTP.

Layout of a data directory:

    vocab.json     controlled vocabulary (copied in by ``import``)
    records.log    append-only experiment record log
    kb.json        current knowledge base (rewritten atomically by ``mine``)
    reports.log    generated suggestion reports (feedback references these)
    feedback.log   recorded verdicts

Both interface layers call the methods here and serialize the returned
payloads with ``wire.dumps``, which is what makes their bytes identical.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path
from typing import Optional

from eval_advisor.consultation import Consultation, JsonLog
from eval_advisor.errors import FormatError, InvalidInputError
from eval_advisor.mining import (
    CURATED,
    KnowledgeBase,
    MiningConfig,
    mine_rules,
)
from eval_advisor.retrieval import AUTO, CaseRetriever, Enquiry
from eval_advisor.store import EvidenceStore
from eval_advisor.taxonomy import StepAttribute, Vocabulary
from eval_advisor.wire import result_wire

DATA_DIR_ENV = "EVAL_ADVISOR_DATA_DIR"
ADDR_ENV = "EVAL_ADVISOR_ADDR"

VOCAB_FILE = "vocab.json"
KB_FILE = "kb.json"
RECORDS_FILE = "records.log"
REPORTS_FILE = "reports.log"
FEEDBACK_FILE = "feedback.log"


def _load_json(path: Path, what: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InvalidInputError(f"{what} file not found: {path}")
    except json.JSONDecodeError as exc:
        raise FormatError(f"{what} file is not valid JSON: {exc}")


class Workspace:
    """One data directory opened for use."""

    def __init__(self, data_dir):
        self.root = Path(data_dir)
        vocab_path = self.root / VOCAB_FILE
        if not vocab_path.exists():
            raise InvalidInputError(
                f"no vocabulary at {vocab_path}; run import first"
            )
        self.vocab = Vocabulary.load(vocab_path)
        self.store = EvidenceStore(self.vocab, log_path=self.root / RECORDS_FILE)
        kb_path = self.root / KB_FILE
        if kb_path.exists():
            self.kb = KnowledgeBase.load(kb_path, self.vocab)
        else:
            self.kb = KnowledgeBase([], self.vocab)
        self._reports = JsonLog(self.root / REPORTS_FILE)
        self._feedback = JsonLog(self.root / FEEDBACK_FILE)
        self._write_lock = threading.Lock()

    # -- setup ----------------------------------------------------------------

    @classmethod
    def initialize(
        cls,
        data_dir,
        corpus_path,
        vocab_path,
        curated_path=None,
    ) -> tuple["Workspace", dict]:
        """Create/refresh a data directory from corpus + vocabulary files."""
        root = Path(data_dir)
        root.mkdir(parents=True, exist_ok=True)
        vocab = Vocabulary.load(vocab_path)
        vocab.save(root / VOCAB_FILE)
        if curated_path is not None:
            curated_kb = KnowledgeBase.load(curated_path, vocab)
            existing = root / KB_FILE
            if existing.exists():
                merged = {
                    (r.antecedent, r.consequent): r
                    for r in KnowledgeBase.load(existing, vocab)
                }
                for rule in curated_kb:
                    merged[(rule.antecedent, rule.consequent)] = rule
                curated_kb = KnowledgeBase(merged.values(), vocab)
            curated_kb.save(root / KB_FILE)
        workspace = cls(root)
        outcome = workspace.import_corpus(corpus_path)
        return workspace, outcome

    def import_corpus(self, corpus_path) -> dict:
        document = _load_json(Path(corpus_path), "corpus")
        with self._write_lock:
            return self.store.import_corpus(document)

    # -- knowledge base ----------------------------------------------------------

    def mine(self, config: Optional[MiningConfig] = None, exact: bool = False) -> dict:
        config = config if config is not None else MiningConfig()
        with self._write_lock:
            curated = [r for r in self.kb if r.origin == CURATED]
            new_kb = mine_rules(self.store, config, curated, exact=exact)
            tmp = self.root / (KB_FILE + ".tmp")
            new_kb.save(tmp)
            os.replace(tmp, self.root / KB_FILE)
            self.kb = new_kb
        return {"rules": len(new_kb), "kb-fingerprint": new_kb.fingerprint()}

    def rules(self, origin: Optional[str] = None, attribute: Optional[str] = None):
        attr = StepAttribute.parse(attribute) if attribute else None
        if origin is not None and origin not in ("mined", "bridge", "curated"):
            raise InvalidInputError(f"unknown rule origin: {origin!r}")
        return [
            self.kb.rule_to_wire(rule, with_id=True)
            for rule in self.kb.filter(origin=origin, attribute=attr)
        ]

    # -- enquiries ---------------------------------------------------------------

    def parse_enquiry(self, body: dict) -> Enquiry:
        if not isinstance(body, dict):
            raise InvalidInputError("enquiry body must be an object")
        raw_items = body.get("items")
        if not isinstance(raw_items, list) or not raw_items:
            raise InvalidInputError("enquiry needs a non-empty items array")
        items = set()
        for raw in raw_items:
            if not isinstance(raw, dict) or "attribute" not in raw or "value" not in raw:
                raise InvalidInputError(
                    "each enquiry item needs attribute and value"
                )
            attribute = StepAttribute.parse(raw["attribute"])
            items.add(self.vocab.item(attribute, raw["value"]))
        requested = body.get("requested-attributes")
        attributes = None
        if requested is not None:
            if not isinstance(requested, list):
                raise InvalidInputError("requested-attributes must be an array")
            attributes = frozenset(StepAttribute.parse(a) for a in requested)
        mode = body.get("mode", AUTO)
        return Enquiry(
            items=frozenset(items),
            mode=mode,
            requested_attributes=attributes,
        )

    def consultation(self) -> Consultation:
        return Consultation(self.store, self.kb, self._reports, self._feedback)

    def suggest(self, body: dict) -> dict:
        enquiry = self.parse_enquiry(body)
        return self.consultation().suggest(enquiry).wire

    def retrieve(self, body: dict, exact: bool = False) -> dict:
        enquiry = self.parse_enquiry(body)
        retriever = CaseRetriever(self.store, self.kb, exact=exact)
        results, trace = retriever.retrieve(enquiry)
        return {
            "results": [result_wire(self.store, r) for r in results],
            "mode-trace": trace,
        }

    # -- store browsing ------------------------------------------------------------

    def case(self, record_id: str) -> dict:
        return self.store.record_to_wire(self.store.get(record_id))

    def cases(
        self,
        item_filters: Optional[list[str]] = None,
        limit: Optional[int] = None,
        offset: int = 0,
    ) -> list[dict]:
        """With filters: active records matching every A:value item.
        Without: the full corpus export, superseded records included."""
        if item_filters:
            items = set()
            for raw in item_filters:
                attribute, _, value = raw.partition(":")
                if not value:
                    raise InvalidInputError(
                        f"item filter must look like Attribute:value; got {raw!r}"
                    )
                items.add(self.vocab.item(StepAttribute.parse(attribute), value))
            records = [
                self.store.record_to_wire(r)
                for r in self.store.query_by_items(items)
            ]
        else:
            records = self.store.export_corpus()
        if offset:
            records = records[offset:]
        if limit is not None:
            records = records[:limit]
        return records

    def retain(self, body: dict) -> dict:
        if not isinstance(body, dict):
            raise InvalidInputError("case body must be an object")
        raw_items = body.get("items")
        if not isinstance(raw_items, list) or not raw_items:
            raise InvalidInputError("a case needs a non-empty items array")
        items = set()
        for raw in raw_items:
            attribute = StepAttribute.parse(raw.get("attribute", ""))
            items.add(
                self.vocab.item(attribute, raw.get("value", ""), raw.get("original"))
            )
        provenance = body.get("provenance")
        if not isinstance(provenance, dict):
            raise InvalidInputError("a case needs a provenance object")
        record = self.consultation().retain(items, provenance)
        return self.store.record_to_wire(record)

    def feedback(self, body: dict) -> dict:
        if not isinstance(body, dict):
            raise InvalidInputError("feedback body must be an object")
        report = body.get("report")
        if not isinstance(report, str) or not report:
            raise InvalidInputError("feedback needs a report id")
        return self.consultation().record_feedback(
            report, body.get("verdict", ""), body.get("note", "")
        )

    # -- vocabulary ---------------------------------------------------------------

    def vocabulary(self, attribute: Optional[str] = None) -> list[dict]:
        """Terms as hierarchy trees (children nested under parents)."""
        attr = StepAttribute.parse(attribute) if attribute else None
        terms = self.vocab.terms(attr)
        children: dict[str, list] = {}
        for term in terms:
            if term.parent is not None:
                children.setdefault(term.parent, []).append(term)

        def node(term):
            return {
                "attribute": term.attribute.value,
                "label": term.label,
                "synonyms": sorted(term.synonyms),
                "description": term.description,
                "children": [node(c) for c in children.get(term.term_id, [])],
            }

        return [node(t) for t in terms if t.parent is None]

    # -- export ---------------------------------------------------------------------

    def export(self, what: str):
        if what == "rules":
            return self.rules()
        if what == "cases":
            return self.cases()
        if what == "vocab":
            return self.vocab.to_wire()
        raise InvalidInputError(
            f"nothing to export under {what!r}; use rules, cases, or vocab"
        )
