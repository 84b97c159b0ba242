"""Walkthrough 2: consulting the advisor before real measurement.

The requirement "how variable is the measured performance?" maps to the
feature Variability. The report has the same shape as in walkthrough 1,
but the usage order flips: the manipulation (repeat the experiment at
different times) is performed first to produce data, and the metric
(standard deviation with the average value) is applied afterwards to
measure and display the results. The engine does not distinguish the two
usages; the difference is methodological and lives here, in the docs.

The walkthrough then closes the loop: the finished experiment is retained
as a new record and feedback is filed against the report.
"""

from common import fresh_workspace, show_cases, show_suggestions


def run():
    workspace = fresh_workspace()
    report = workspace.suggest(
        {"items": [{"attribute": "ServiceFeature", "value": "Variability"}]}
    )
    print("enquiry: ServiceFeature = Variability")
    print("suggestions:")
    show_suggestions(report)
    print("supporting cases:")
    show_cases(report)

    print("\n... experiment executed; retaining it for future enquiries ...")
    record = workspace.retain(
        {
            "items": [
                {"attribute": "ServiceFeature", "value": "Variability"},
                {"attribute": "Manipulation", "value": "Repeat experiment at different time"},
                {"attribute": "Metric", "value": "Standard Deviation with Average Value"},
                {"attribute": "Environment", "value": "different Cloud providers"},
            ],
            "provenance": {
                "study": "own-variability-2026",
                "provider": "multiple",
                "service": "object storage",
                "year": 2026,
            },
        }
    )
    print(f"retained record {record['id']} (origin: {record['provenance']['origin']})")

    ack = workspace.feedback(
        {"report": report["id"], "verdict": "helpful",
         "note": "matched the measurement plan we ended up using"}
    )
    print(f"feedback recorded (count {ack['feedback-count']})")
    return workspace, report


if __name__ == "__main__":
    workspace, report = run()
    assert workspace.cases(["ServiceFeature:Variability"]) is not None
    print("\nwalkthrough 2 ok")
