"""Advisory engine for designing evaluations of commercial cloud services.

The engine stores decomposed evaluation experiments, mines rule-based
evaluation knowledge from them, and answers enquiries with suggestions
(scenarios, metrics, benchmarks) plus similar past experiments retrieved
in precise, heuristic, or fuzzy mode.
"""

from eval_advisor.errors import (
    AdvisorError,
    ConflictError,
    EmptyKnowledgeError,
    FormatError,
    InvalidInputError,
    NotFoundError,
)
from eval_advisor.taxonomy import Item, StepAttribute, Term, Vocabulary
from eval_advisor.store import EvidenceStore, ExperimentRecord
from eval_advisor.mining import KnowledgeBase, MiningConfig, Rule, mine_rules
from eval_advisor.inference import Derivation, applicable_rules, closure
from eval_advisor.retrieval import CaseRetriever, Enquiry, RetrievalResult
from eval_advisor.consultation import Consultation, SuggestionReport
from eval_advisor.workspace import Workspace

__version__ = "0.1.0"

__all__ = [
    "AdvisorError",
    "CaseRetriever",
    "ConflictError",
    "Consultation",
    "Derivation",
    "EmptyKnowledgeError",
    "Enquiry",
    "EvidenceStore",
    "ExperimentRecord",
    "FormatError",
    "InvalidInputError",
    "Item",
    "KnowledgeBase",
    "MiningConfig",
    "NotFoundError",
    "RetrievalResult",
    "Rule",
    "StepAttribute",
    "SuggestionReport",
    "Term",
    "Vocabulary",
    "Workspace",
    "applicable_rules",
    "closure",
    "mine_rules",
]
