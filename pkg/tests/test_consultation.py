from fractions import Fraction

import pytest

from eval_advisor.consultation import Consultation
from eval_advisor.errors import (
    EmptyKnowledgeError,
    InvalidInputError,
    NotFoundError,
)
from eval_advisor.inference import closure
from eval_advisor.mining import KnowledgeBase, mine_rules
from eval_advisor.retrieval import Enquiry
from eval_advisor.store import EvidenceStore
from eval_advisor.taxonomy import StepAttribute

from eval_advisor.wire import strip_timestamps


@pytest.fixture()
def consult(seed_store, seed_kb):
    return Consultation(seed_store, seed_kb)


def feature_enquiry(item, *features, mode="auto", attrs=None):
    return Enquiry(
        items=frozenset(item("ServiceFeature", f) for f in features),
        mode=mode,
        requested_attributes=frozenset(StepAttribute.parse(a) for a in attrs)
        if attrs
        else None,
    )


def values(report, attribute):
    return [e["item"]["value"] for e in report.wire["suggestions"].get(attribute, [])]


class TestSuggest:
    def test_vertical_scalability_three_items(self, consult, item):
        report = consult.suggest(feature_enquiry(item, "Vertical Scalability"))
        suggestions = report.wire["suggestions"]
        assert set(suggestions) == {"Environment", "Manipulation", "Metric"}
        assert values(report, "Environment") == ["different types of Cloud resource"]
        assert values(report, "Manipulation") == [
            "varying Cloud resource with the same amount of workload"
        ]
        assert values(report, "Metric") == ["speedup over a baseline"]

    def test_elasticity_case(self, consult, item):
        report = consult.suggest(feature_enquiry(item, "Elasticity"))
        assert values(report, "Metric") == ["VM Boosting Latency"]
        assert values(report, "Manipulation") == ["Workloads rise and fall repeatedly"]
        supporting = [c["record"]["id"] for c in report.wire["supporting-cases"]]
        assert supporting == ["el-brebner-a", "el-brebner-b"]

    def test_variability_case(self, consult, item):
        report = consult.suggest(feature_enquiry(item, "Variability"))
        assert values(report, "Metric") == ["Standard Deviation with Average Value"]
        assert values(report, "Manipulation") == ["Repeat experiment at different time"]

    def test_two_feature_sibling_pattern(self, consult, item):
        report = consult.suggest(feature_enquiry(item, "Storage", "Cost"))
        trace = report.wire["retrieval-trace"]
        assert [t["mode"] for t in trace] == ["precise", "heuristic", "fuzzy"]
        supporting = report.wire["supporting-cases"]
        ids = {c["record"]["id"] for c in supporting}
        assert ids == {"st-kossmann", "co-kossmann-a", "co-kossmann-b"}
        for case in supporting:
            assert case["mode-used"] == "fuzzy"
            assert len(case["dropped-items"]) == 1

    def test_requested_attributes_filter(self, consult, item):
        report = consult.suggest(
            feature_enquiry(item, "Vertical Scalability", attrs=["Metric"])
        )
        assert set(report.wire["suggestions"]) == {"Metric"}

    def test_no_orphan_suggestions(self, consult, seed_kb, vocab, item):
        enquiry = feature_enquiry(item, "Horizontal Scalability")
        report = consult.suggest(enquiry)
        reachable = {
            (i.attribute.value, vocab.label(i.term_id))
            for i in closure(enquiry.items, seed_kb)
        }
        for attribute, entries in report.wire["suggestions"].items():
            for entry in entries:
                assert (attribute, entry["item"]["value"]) in reachable
                assert entry["derivation"]["chain"]

    def test_reports_reproducible(self, consult, item):
        first = consult.suggest(feature_enquiry(item, "Elasticity"))
        second = consult.suggest(feature_enquiry(item, "Elasticity"))
        assert first.report_id == second.report_id
        assert strip_timestamps(first.wire) == strip_timestamps(second.wire)

    def test_kb_fingerprint_identifies_kb(self, consult, seed_kb, item):
        report = consult.suggest(feature_enquiry(item, "Elasticity"))
        assert report.wire["kb-fingerprint"] == seed_kb.fingerprint()

    def test_empty_knowledge_distinct_error(self, vocab, item):
        consult = Consultation(EvidenceStore(vocab), KnowledgeBase([], vocab))
        with pytest.raises(EmptyKnowledgeError):
            consult.suggest(feature_enquiry(item, "Elasticity"))

    def test_records_without_rules_still_answer(self, seed_store, vocab, item):
        consult = Consultation(seed_store, KnowledgeBase([], vocab))
        report = consult.suggest(feature_enquiry(item, "Elasticity"))
        assert report.wire["suggestions"] == {}
        assert report.wire["supporting-cases"]


class TestRetain:
    def test_coverage_increments_by_one(self, seed_store, seed_kb, item):
        consult = Consultation(seed_store, seed_kb)
        variability = {item("ServiceFeature", "Variability")}
        before = seed_store.coverage(variability)
        record = consult.retain(
            {
                item("ServiceFeature", "Variability"),
                item("Manipulation", "Repeat experiment at different time"),
            },
            {"study": "own-exp", "provider": "p", "service": "s", "year": 2026},
        )
        assert seed_store.coverage(variability) == before + 1
        assert record.provenance["origin"] == "retained"

    def test_unknown_term_stores_nothing(self, seed_store, seed_kb, vocab):
        from eval_advisor.taxonomy import Item

        consult = Consultation(seed_store, seed_kb)
        size = len(seed_store)
        with pytest.raises(NotFoundError):
            consult.retain(
                {Item(StepAttribute.METRIC, "metric:frobnication-index")},
                {"study": "x", "provider": "p", "service": "s", "year": 2026},
            )
        assert len(seed_store) == size

    def test_retain_then_remine_only_grows(self, vocab, curated_rules, item):
        from conftest import build_seed_store

        store = build_seed_store(vocab)
        before = {
            (r.antecedent, r.consequent)
            for r in mine_rules(store, curated=curated_rules)
        }
        # a third variability experiment matching the existing pattern
        Consultation(store, KnowledgeBase([], vocab)).retain(
            {
                item("ServiceFeature", "Variability"),
                item("Manipulation", "Repeat experiment at different time"),
                item("Metric", "Standard Deviation with Average Value"),
            },
            {"study": "own", "provider": "p", "service": "s", "year": 2026},
        )
        after = {
            (r.antecedent, r.consequent)
            for r in mine_rules(store, curated=curated_rules)
        }
        assert before <= after


class TestFeedback:
    def test_roundtrip(self, consult, item):
        report = consult.suggest(feature_enquiry(item, "Elasticity"))
        ack = consult.record_feedback(report.report_id, "helpful", "matched our plan")
        assert ack["status"] == "recorded"
        assert ack["feedback-count"] == 1
        stored = consult.feedback_for(report.report_id)
        assert len(stored) == 1
        assert stored[0]["verdict"] == "helpful"

    def test_unknown_report(self, consult):
        with pytest.raises(NotFoundError):
            consult.record_feedback("rep-missing", "helpful")

    def test_two_feedbacks_kept(self, consult, item):
        report = consult.suggest(feature_enquiry(item, "Variability"))
        consult.record_feedback(report.report_id, "helpful")
        ack = consult.record_feedback(report.report_id, "not-helpful", "too generic")
        assert ack["feedback-count"] == 2
        assert len(consult.feedback_for(report.report_id)) == 2

    def test_bad_verdict(self, consult, item):
        report = consult.suggest(feature_enquiry(item, "Variability"))
        with pytest.raises(InvalidInputError):
            consult.record_feedback(report.report_id, "meh")

    def test_logs_survive_reload(self, seed_store, seed_kb, tmp_path, item):
        from eval_advisor.consultation import JsonLog

        reports = tmp_path / "reports.log"
        feedback = tmp_path / "feedback.log"
        consult = Consultation(
            seed_store, seed_kb, JsonLog(reports), JsonLog(feedback)
        )
        report = consult.suggest(feature_enquiry(item, "Elasticity"))
        consult.record_feedback(report.report_id, "helpful")

        reloaded = Consultation(
            seed_store, seed_kb, JsonLog(reports), JsonLog(feedback)
        )
        assert reloaded.report(report.report_id) is not None
        assert len(reloaded.feedback_for(report.report_id)) == 1
