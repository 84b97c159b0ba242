"""JSON wire-format helpers shared by the consultation, API, and CLI layers.

Payload bytes must be identical across interfaces for the same snapshot and
request, so every projection funnels through these functions and through
``dumps`` below (sorted keys, compact separators).
"""

from __future__ import annotations

import json
from fractions import Fraction

from eval_advisor.store import EvidenceStore
from eval_advisor.taxonomy import Item, Vocabulary

# Fields carrying wall-clock timestamps, excluded from byte comparisons
# and from report identity.
TIMESTAMP_FIELDS = ("generated-at", "created-at", "submitted-at")


def dumps(payload, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)
    return json.dumps(
        payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False
    )


def fraction_wire(value: Fraction) -> dict:
    return {"num": value.numerator, "den": value.denominator}


def item_wire(vocab: Vocabulary, item: Item) -> dict:
    wire = {"attribute": item.attribute.value, "value": vocab.label(item.term_id)}
    if item.original_text is not None:
        wire["original"] = item.original_text
    return wire


def items_wire(vocab: Vocabulary, items) -> list[dict]:
    return [item_wire(vocab, i) for i in sorted(items, key=Item.sort_key)]


def result_wire(store: EvidenceStore, result) -> dict:
    vocab = store.vocabulary
    return {
        "record": store.record_to_wire(result.record),
        "mode-used": result.mode_used,
        "matched-items": items_wire(vocab, result.matched_items),
        "rules-applied": list(result.rules_applied),
        "dropped-items": items_wire(vocab, result.dropped_items),
        "score": fraction_wire(result.score),
    }


def strip_timestamps(payload):
    """Recursively drop timestamp fields (for byte-level comparisons)."""
    if isinstance(payload, dict):
        return {
            k: strip_timestamps(v)
            for k, v in payload.items()
            if k not in TIMESTAMP_FIELDS
        }
    if isinstance(payload, list):
        return [strip_timestamps(v) for v in payload]
    return payload
