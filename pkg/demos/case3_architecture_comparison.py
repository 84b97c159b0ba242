"""Walkthrough 3: indirect help for a decision between architectures.

Choosing an architecture for transaction processing is a resource-usage
decision, and recommending the decision itself is out of scope for the
advisor. What it can do is set up the sibling experiments the decision
needs: given the features the candidate architectures stress (Storage and
Cost), it retrieves the past experiments for each feature so every
candidate is evaluated the same way, and the final comparison happens
outside the system.

With two features in one enquiry there is no single record carrying both,
so escalation walks through Precise and Heuristic and lands in Fuzzy Mode,
whose leave-one-out results are exactly the per-feature sibling sets.
"""

from common import fresh_workspace, show_cases


def run():
    workspace = fresh_workspace()
    report = workspace.suggest(
        {
            "items": [
                {"attribute": "ServiceFeature", "value": "Storage"},
                {"attribute": "ServiceFeature", "value": "Cost"},
            ]
        }
    )
    print("enquiry: ServiceFeature = Storage AND ServiceFeature = Cost")
    print("mode trace:")
    for stage in report["retrieval-trace"]:
        outcome = stage.get("results", stage.get("skipped"))
        print(f"  {stage['mode']}: {outcome}")
    print("sibling experiments per feature:")
    show_cases(report)
    return report


if __name__ == "__main__":
    report = run()
    ids = {c["record"]["id"] for c in report["supporting-cases"]}
    assert ids == {"st-kossmann", "co-kossmann-a", "co-kossmann-b"}
    print("\nwalkthrough 3 ok")
