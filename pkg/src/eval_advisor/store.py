"""Versioned storage of decomposed evaluation experiments.

Each record is one isolated experiment represented as a set of items.
Queries are hierarchy-aware by default: a query item matches a record item
whose term equals it or descends from it, so an enquiry about Scalability
finds Vertical/Horizontal Scalability experiments. Mutations append to a
record log; queries run against an immutable snapshot taken at their start.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Optional

from eval_advisor.errors import (
    ConflictError,
    FormatError,
    InvalidInputError,
    NotFoundError,
)
from eval_advisor.taxonomy import Item, StepAttribute, Vocabulary

ACTIVE = "active"
SUPERSEDED = "superseded"


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass(frozen=True)
class ExperimentRecord:
    """One isolated evaluation experiment plus provenance and versioning."""

    record_id: str
    items: frozenset[Item]
    provenance: dict
    created_at: str
    version: int = 1
    status: str = ACTIVE
    supersedes: Optional[str] = None

    def sorted_items(self) -> list[Item]:
        return sorted(self.items, key=Item.sort_key)


@dataclass(frozen=True)
class _Snapshot:
    records: tuple[ExperimentRecord, ...]
    by_id: dict
    expanded: dict  # record_id -> frozenset[Item] incl. ancestor items
    superseded_ids: frozenset

    def active(self) -> list[ExperimentRecord]:
        return [
            r
            for r in self.records
            if r.record_id not in self.superseded_ids
        ]


class EvidenceStore:
    """Record set with coverage counting and Precise-Mode queries."""

    def __init__(self, vocabulary: Vocabulary, log_path=None):
        self._vocab = vocabulary
        self._log_path = log_path
        self._lock = threading.Lock()
        self._snapshot = _Snapshot((), {}, {}, frozenset())
        if log_path is not None:
            self._replay_log()

    @property
    def vocabulary(self) -> Vocabulary:
        return self._vocab

    def __len__(self) -> int:
        return len(self._snapshot.records)

    # -- queries -----------------------------------------------------------

    def coverage(self, itemset: Iterable[Item], exact: bool = False) -> int:
        """Number of active records whose items are a superset of ``itemset``."""
        return len(self.query_by_items(itemset, exact=exact))

    def query_by_items(
        self,
        itemset: Iterable[Item],
        exact: bool = False,
        include_superseded: bool = False,
    ) -> list[ExperimentRecord]:
        """Active records containing every query item, newest year first."""
        query = set(itemset)
        if not query:
            raise InvalidInputError("itemset must be non-empty")
        for item in query:
            self._vocab.get(item.term_id)  # raises not-found on unknown terms
        snap = self._snapshot
        records = snap.records if include_superseded else snap.active()
        out = []
        for record in records:
            haystack = (
                record.items if exact else snap.expanded[record.record_id]
            )
            if query <= haystack:
                out.append(record)
        out.sort(key=lambda r: (-int(r.provenance.get("year", 0)), r.record_id))
        return out

    def get(self, record_id: str) -> ExperimentRecord:
        snap = self._snapshot
        record = snap.by_id.get(record_id)
        if record is None:
            raise NotFoundError(f"unknown record id: {record_id!r}")
        if record.record_id in snap.superseded_ids and record.status == ACTIVE:
            record = _with_status(record, SUPERSEDED)
        return record

    def records(self, include_superseded: bool = False) -> list[ExperimentRecord]:
        snap = self._snapshot
        out = []
        for record in snap.records:
            superseded = record.record_id in snap.superseded_ids
            if superseded and not include_superseded:
                continue
            out.append(_with_status(record, SUPERSEDED) if superseded else record)
        return out

    def expanded_items(self, record_id: str) -> frozenset[Item]:
        snap = self._snapshot
        if record_id not in snap.expanded:
            raise NotFoundError(f"unknown record id: {record_id!r}")
        return snap.expanded[record_id]

    def fingerprint(self) -> str:
        doc = json.dumps(
            [self.record_to_wire(r) for r in self.records(include_superseded=True)],
            sort_keys=True,
        )
        return hashlib.sha256(doc.encode("utf-8")).hexdigest()[:16]

    def vocabulary_fingerprint(self) -> str:
        """Identifies the vocabulary this store canonicalizes against."""
        return self._vocab.fingerprint()

    # -- mutation (single serialized writer) --------------------------------

    def add_record(self, items: Iterable[Item], provenance: dict) -> ExperimentRecord:
        with self._lock:
            record = self._build_record(items, provenance)
            self._install([record], supersede=None)
            return record

    def supersede_record(
        self, old_id: str, items: Iterable[Item], provenance: dict
    ) -> ExperimentRecord:
        with self._lock:
            snap = self._snapshot
            old = snap.by_id.get(old_id)
            if old is None:
                raise NotFoundError(f"unknown record id: {old_id!r}")
            if old_id in snap.superseded_ids:
                raise ConflictError(f"record {old_id!r} is already superseded")
            record = self._build_record(
                items,
                provenance,
                version=old.version + 1,
                supersedes=old_id,
            )
            self._install([record], supersede=old_id)
            return record

    def import_corpus(self, document) -> dict:
        """Import a corpus array; bad records warn and are skipped whole."""
        if not isinstance(document, list):
            raise FormatError("corpus document must be a JSON array")
        with self._lock:
            snap = self._snapshot
            seen_ids = set(snap.by_id)
            accepted: list[ExperimentRecord] = []
            warnings: list[str] = []
            for pos, entry in enumerate(document):
                try:
                    record = self._record_from_wire(entry, pos)
                except ConflictError as exc:
                    warnings.append(str(exc))
                    continue
                except (InvalidInputError, NotFoundError) as exc:
                    rid = entry.get("id", f"#{pos}") if isinstance(entry, dict) else f"#{pos}"
                    warnings.append(f"record {rid!r} skipped: {exc.message}")
                    continue
                if record.record_id in seen_ids:
                    warnings.append(
                        f"record {record.record_id!r} skipped: duplicate id"
                    )
                    continue
                seen_ids.add(record.record_id)
                accepted.append(record)
            self._install(accepted, supersede=None)
            return {"imported": len(accepted), "warnings": warnings}

    # -- internals ----------------------------------------------------------

    def _build_record(
        self,
        items: Iterable[Item],
        provenance: dict,
        version: int = 1,
        supersedes: Optional[str] = None,
    ) -> ExperimentRecord:
        itemset = frozenset(items)
        if not itemset:
            raise InvalidInputError("a record needs at least one item")
        for item in itemset:
            term = self._vocab.get(item.term_id)
            if term.attribute != item.attribute:
                raise InvalidInputError(
                    f"item attribute {item.attribute.value} does not match "
                    f"term {term.term_id!r}"
                )
        if not isinstance(provenance, dict):
            raise InvalidInputError("provenance must be an object")
        digest = hashlib.sha256(
            json.dumps(
                [
                    len(self._snapshot.records),
                    sorted(i.sort_key() for i in itemset),
                    {k: provenance[k] for k in sorted(provenance)},
                ],
                sort_keys=True,
                default=str,
            ).encode("utf-8")
        ).hexdigest()[:10]
        return ExperimentRecord(
            record_id=f"rec-{digest}",
            items=itemset,
            provenance=dict(provenance),
            created_at=_now(),
            version=version,
            supersedes=supersedes,
        )

    def _expand(self, record: ExperimentRecord) -> frozenset[Item]:
        expanded: set[Item] = set()
        for item in record.items:
            expanded.update(self._vocab.expand_item(item))
        return frozenset(expanded)

    def _install(self, new_records, supersede: Optional[str]) -> None:
        snap = self._snapshot
        records = snap.records + tuple(new_records)
        by_id = dict(snap.by_id)
        expanded = dict(snap.expanded)
        superseded = set(snap.superseded_ids)
        if supersede is not None:
            superseded.add(supersede)
        for record in new_records:
            by_id[record.record_id] = record
            expanded[record.record_id] = self._expand(record)
        self._snapshot = _Snapshot(
            records, by_id, expanded, frozenset(superseded)
        )
        if self._log_path is not None:
            with open(self._log_path, "a", encoding="utf-8") as fh:
                for record in new_records:
                    fh.write(json.dumps(self.record_to_wire(record), sort_keys=True))
                    fh.write("\n")

    def _replay_log(self) -> None:
        try:
            fh = open(self._log_path, "r", encoding="utf-8")
        except FileNotFoundError:
            return
        with fh:
            lines = [line for line in fh if line.strip()]
        records = []
        for pos, line in enumerate(lines):
            try:
                entry = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(
                    f"record log line {pos + 1} is not valid JSON: {exc}"
                ) from exc
            records.append(self._record_from_wire(entry, pos, trusted=True))
        by_id = {}
        expanded = {}
        superseded = set()
        for record in records:
            by_id[record.record_id] = record
            expanded[record.record_id] = self._expand(record)
            if record.supersedes:
                superseded.add(record.supersedes)
        self._snapshot = _Snapshot(
            tuple(records), by_id, expanded, frozenset(superseded)
        )

    def _record_from_wire(
        self, entry, pos: int, trusted: bool = False
    ) -> ExperimentRecord:
        if not isinstance(entry, dict):
            raise InvalidInputError(f"corpus entry #{pos} is not an object")
        record_id = entry.get("id")
        if not isinstance(record_id, str) or not record_id:
            raise InvalidInputError(f"corpus entry #{pos} has no id")
        provenance = entry.get("provenance")
        if not isinstance(provenance, dict):
            raise InvalidInputError(f"record {record_id!r} has no provenance")
        raw_items = entry.get("items")
        if not isinstance(raw_items, list) or not raw_items:
            raise InvalidInputError(f"record {record_id!r} has no items")
        items = set()
        for raw in raw_items:
            attribute = StepAttribute.parse(raw.get("attribute", ""))
            value = raw.get("value")
            if not isinstance(value, str) or not value.strip():
                raise InvalidInputError(
                    f"record {record_id!r} has an item without a value"
                )
            items.add(self._vocab.item(attribute, value, raw.get("original")))
        return ExperimentRecord(
            record_id=record_id,
            items=frozenset(items),
            provenance=dict(provenance),
            created_at=entry.get("created-at", _now()) if trusted else _now(),
            version=entry.get("version", 1) if trusted else 1,
            supersedes=entry.get("supersedes") if trusted else None,
        )

    # -- wire format ---------------------------------------------------------

    def item_to_wire(self, item: Item) -> dict:
        wire = {
            "attribute": item.attribute.value,
            "value": self._vocab.label(item.term_id),
        }
        if item.original_text is not None:
            wire["original"] = item.original_text
        return wire

    def record_to_wire(self, record: ExperimentRecord) -> dict:
        snap = self._snapshot
        status = (
            SUPERSEDED
            if record.record_id in snap.superseded_ids
            else record.status
        )
        wire = {
            "id": record.record_id,
            "provenance": record.provenance,
            "items": [self.item_to_wire(i) for i in record.sorted_items()],
            "version": record.version,
            "status": status,
            "created-at": record.created_at,
        }
        if record.supersedes is not None:
            wire["supersedes"] = record.supersedes
        return wire

    def export_corpus(self) -> list[dict]:
        return [
            self.record_to_wire(r)
            for r in self.records(include_superseded=True)
        ]


def _with_status(record: ExperimentRecord, status: str) -> ExperimentRecord:
    return ExperimentRecord(
        record_id=record.record_id,
        items=record.items,
        provenance=record.provenance,
        created_at=record.created_at,
        version=record.version,
        status=status,
        supersedes=record.supersedes,
    )
