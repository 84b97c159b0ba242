"""Six-step attribute schema and the controlled vocabulary of canonical terms.

Every detail of an evaluation experiment is located by one of six step
attributes (requirement through experimental manipulation). Terms form a
single-parent forest per attribute; a parent edge encodes an always-true
generalization (e.g. Vertical Scalability is a kind of Scalability) that the
inference layer materializes as a bridge rule.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

from eval_advisor.errors import (
    ConflictError,
    FormatError,
    InvalidInputError,
    NotFoundError,
)


class StepAttribute(Enum):
    """The six steps of an evaluation implementation."""

    REQUIREMENT = "Requirement"
    SERVICE_FEATURE = "ServiceFeature"
    METRIC = "Metric"
    BENCHMARK = "Benchmark"
    ENVIRONMENT = "Environment"
    MANIPULATION = "Manipulation"

    @classmethod
    def parse(cls, raw: str) -> "StepAttribute":
        """Accept canonical names (any case) plus documented aliases."""
        if not isinstance(raw, str) or not raw.strip():
            raise InvalidInputError("attribute must be a non-empty string")
        key = " ".join(raw.split()).lower()
        alias = _ATTRIBUTE_ALIASES.get(key)
        if alias is None:
            raise InvalidInputError(f"unknown step attribute: {raw!r}")
        return alias


_ATTRIBUTE_ALIASES = {
    "requirement": StepAttribute.REQUIREMENT,
    "servicefeature": StepAttribute.SERVICE_FEATURE,
    "service feature": StepAttribute.SERVICE_FEATURE,
    "metric": StepAttribute.METRIC,
    "benchmark": StepAttribute.BENCHMARK,
    "environment": StepAttribute.ENVIRONMENT,
    "experimental environment": StepAttribute.ENVIRONMENT,
    "manipulation": StepAttribute.MANIPULATION,
    # "Manipulation" and "experimental operation" name the same step.
    "experimental operation": StepAttribute.MANIPULATION,
    "experimental manipulation": StepAttribute.MANIPULATION,
}

_PUNCT_EDGES = "".join(
    [".,;:!?\"'`()[]{}<>", "‘’“”–—"]
)


def normalize(text: str) -> str:
    """Lowercase, collapse internal whitespace, strip edge punctuation."""
    collapsed = " ".join(text.split()).lower()
    return collapsed.strip(_PUNCT_EDGES + " ")


def _slug(attribute: StepAttribute, label: str) -> str:
    return f"{attribute.value.lower()}:{normalize(label).replace(' ', '-')}"


@dataclass(frozen=True)
class Term:
    """One canonical vocabulary entry within a step attribute."""

    term_id: str
    attribute: StepAttribute
    label: str
    synonyms: frozenset[str] = frozenset()
    parent: Optional[str] = None  # term_id within the same attribute
    description: str = ""


@dataclass(frozen=True)
class Item:
    """An attribute-value pair locating one detail of an experiment.

    Equality and hashing ignore ``original_text``; two items are the same
    detail when they name the same term under the same attribute.
    """

    attribute: StepAttribute
    term_id: str
    original_text: Optional[str] = field(default=None, compare=False)

    def sort_key(self) -> tuple[str, str]:
        return (self.attribute.value, self.term_id)


class Unknown:
    """Sentinel result of canonicalize() when no term matches."""

    def __repr__(self) -> str:  # pragma: no cover
        return "Unknown"


UNKNOWN = Unknown()


class Vocabulary:
    """Controlled vocabulary with a single-parent forest per attribute.

    Reads see a consistent snapshot: mutation happens under a lock and
    replaces the internal maps wholesale (copy-on-write), so a reader that
    grabbed the maps keeps a coherent view for the whole operation.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._terms: dict[str, Term] = {}
        # (attribute, normalized text) -> term_id, covering labels + synonyms
        self._index: dict[tuple[StepAttribute, str], str] = {}

    # -- lookups ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self._terms)

    def terms(self, attribute: Optional[StepAttribute] = None) -> list[Term]:
        terms = self._terms
        out = [
            t
            for t in terms.values()
            if attribute is None or t.attribute == attribute
        ]
        out.sort(key=lambda t: (t.attribute.value, t.term_id))
        return out

    def get(self, term_id: str) -> Term:
        term = self._terms.get(term_id)
        if term is None:
            raise NotFoundError(f"unknown term id: {term_id!r}")
        return term

    def canonicalize(self, attribute: StepAttribute, raw: str):
        """Resolve raw text to its Term, or the Unknown sentinel.

        Matching is case-insensitive, whitespace-normalized, and ignores
        leading/trailing punctuation, over labels and synonyms alike.
        """
        if not isinstance(raw, str) or not raw.strip():
            raise InvalidInputError("term text must be non-empty")
        index, terms = self._index, self._terms
        term_id = index.get((attribute, normalize(raw)))
        if term_id is None:
            return UNKNOWN
        return terms[term_id]

    def ancestors(self, term: Term | str) -> list[Term]:
        """Parent chain from immediate parent to root (possibly empty)."""
        terms = self._terms
        term_id = term.term_id if isinstance(term, Term) else term
        current = terms.get(term_id)
        if current is None:
            raise NotFoundError(f"unknown term id: {term_id!r}")
        chain: list[Term] = []
        while current.parent is not None:
            current = terms[current.parent]
            chain.append(current)
        return chain

    def expand_item(self, item: Item) -> set[Item]:
        """The item plus one item per ancestor term (bridge generalization)."""
        chain = self.ancestors(item.term_id)
        expanded = {Item(item.attribute, item.term_id, item.original_text)}
        expanded.update(Item(item.attribute, a.term_id) for a in chain)
        return expanded

    def item(self, attribute: StepAttribute, value: str,
             original: Optional[str] = None) -> Item:
        """Canonicalize ``value`` and build an Item, or raise not-found."""
        term = self.canonicalize(attribute, value)
        if isinstance(term, Unknown):
            raise NotFoundError(
                f"unknown {attribute.value} term: {value!r}"
            )
        return Item(attribute, term.term_id, original)

    def label(self, term_id: str) -> str:
        return self.get(term_id).label

    def fingerprint(self) -> str:
        import hashlib

        doc = json.dumps(self.to_wire(), sort_keys=True).encode("utf-8")
        return hashlib.sha256(doc).hexdigest()[:16]

    # -- mutation (single writer) ----------------------------------------

    def add_term(
        self,
        attribute: StepAttribute,
        label: str,
        synonyms: Iterable[str] = (),
        parent: Optional[str] = None,
        description: str = "",
    ) -> Term:
        """Add a canonical term; parent is a term_id in the same attribute."""
        if not label or not label.strip():
            raise InvalidInputError("term label must be non-empty")
        with self._lock:
            terms = dict(self._terms)
            index = dict(self._index)
            term_id = _slug(attribute, label)
            keys = [(attribute, normalize(label))]
            for syn in synonyms:
                keys.append((attribute, normalize(syn)))
            if len(set(keys)) != len(keys):
                raise ConflictError(
                    f"label/synonyms of {label!r} collide with each other"
                )
            for key in keys:
                if key in index:
                    raise ConflictError(
                        f"term text {key[1]!r} already used in {attribute.value}"
                    )
            if parent is not None:
                if parent == term_id:
                    raise ConflictError(
                        "a term cannot be its own parent (cycle)"
                    )
                parent_term = terms.get(parent)
                if parent_term is None:
                    raise NotFoundError(f"unknown parent term: {parent!r}")
                if parent_term.attribute != attribute:
                    raise InvalidInputError(
                        "parent term must belong to the same attribute"
                    )
            term = Term(
                term_id=term_id,
                attribute=attribute,
                label=" ".join(label.split()),
                synonyms=frozenset(" ".join(s.split()) for s in synonyms),
                parent=parent,
                description=description,
            )
            terms[term_id] = term
            for key in keys:
                index[key] = term_id
            self._check_forest(terms, term_id)
            self._terms, self._index = terms, index
            return term

    def add_synonym(self, term_id: str, text: str) -> Term:
        if not text or not text.strip():
            raise InvalidInputError("synonym must be non-empty")
        with self._lock:
            terms = dict(self._terms)
            index = dict(self._index)
            term = terms.get(term_id)
            if term is None:
                raise NotFoundError(f"unknown term id: {term_id!r}")
            key = (term.attribute, normalize(text))
            if key in index:
                raise ConflictError(
                    f"synonym {text!r} already used in {term.attribute.value}"
                )
            updated = Term(
                term_id=term.term_id,
                attribute=term.attribute,
                label=term.label,
                synonyms=term.synonyms | {" ".join(text.split())},
                parent=term.parent,
                description=term.description,
            )
            terms[term_id] = updated
            index[key] = term_id
            self._terms, self._index = terms, index
            return updated

    @staticmethod
    def _check_forest(terms: dict[str, Term], start: str) -> None:
        seen = set()
        current = terms[start]
        while current.parent is not None:
            if current.term_id in seen:
                raise ConflictError("parent edge would create a cycle")
            seen.add(current.term_id)
            current = terms[current.parent]

    # -- file format ------------------------------------------------------

    def to_wire(self) -> list[dict]:
        """The vocabulary file format: a JSON array of term objects."""
        entries = []
        for term in self.terms():
            entries.append(
                {
                    "attribute": term.attribute.value,
                    "label": term.label,
                    "synonyms": sorted(term.synonyms),
                    "parent": self.get(term.parent).label if term.parent else None,
                    "description": term.description,
                }
            )
        return entries

    @classmethod
    def from_wire(cls, entries) -> "Vocabulary":
        """Load the file format; parent labels resolve after all entries."""
        if not isinstance(entries, list):
            raise FormatError("vocabulary document must be a JSON array")
        vocab = cls()
        parents: list[tuple[str, str]] = []  # (child term_id, parent label)
        for pos, entry in enumerate(entries):
            if not isinstance(entry, dict):
                raise FormatError(f"vocabulary entry {pos} is not an object")
            try:
                attribute = StepAttribute.parse(entry["attribute"])
                label = entry["label"]
                synonyms = entry.get("synonyms", [])
                parent_label = entry.get("parent")
                description = entry.get("description", "")
            except KeyError as exc:
                raise FormatError(
                    f"vocabulary entry {pos} missing field {exc}"
                ) from exc
            term = vocab.add_term(
                attribute, label, synonyms, parent=None, description=description
            )
            if parent_label is not None:
                parents.append((term.term_id, parent_label))
        # Resolve parent references by label within the same attribute.
        with vocab._lock:
            terms = dict(vocab._terms)
            for child_id, parent_label in parents:
                child = terms[child_id]
                parent = vocab.canonicalize(child.attribute, parent_label)
                if isinstance(parent, Unknown):
                    raise FormatError(
                        f"term {child.label!r} names missing parent "
                        f"{parent_label!r} in {child.attribute.value}"
                    )
                terms[child_id] = Term(
                    term_id=child.term_id,
                    attribute=child.attribute,
                    label=child.label,
                    synonyms=child.synonyms,
                    parent=parent.term_id,
                    description=child.description,
                )
            for child_id, _ in parents:
                Vocabulary._check_forest(terms, child_id)
            vocab._terms = terms
        return vocab

    @classmethod
    def load(cls, path) -> "Vocabulary":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                entries = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"vocabulary file is not valid JSON: {exc}") from exc
        return cls.from_wire(entries)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_wire(), fh, indent=2, ensure_ascii=False)
            fh.write("\n")
