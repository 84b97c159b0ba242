"""Walkthrough 1: consulting the advisor before analytic modeling.

The requirement "how elastic is this platform?" is translated by hand into
the service feature Elasticity (requirement-to-feature translation stays a
human step). The advisor returns metrics and a scenario; in a modeling
study these are used *before* any experiment runs: the metric (VM Boosting
Latency) becomes a model input to calibrate, and the scenario (workloads
rising and falling repeatedly) shapes the simulated workload. Compare
walkthrough 2, where the same kind of output is used the other way around.
"""

from common import fresh_workspace, show_cases, show_suggestions


def run() -> dict:
    workspace = fresh_workspace()
    report = workspace.suggest(
        {"items": [{"attribute": "ServiceFeature", "value": "Elasticity"}]}
    )
    print("enquiry: ServiceFeature = Elasticity")
    print("suggestions:")
    show_suggestions(report)
    print("supporting cases:")
    show_cases(report)
    print(f"\nreport id {report['id']} (kb {report['kb-fingerprint']})")
    return report


if __name__ == "__main__":
    report = run()
    metrics = [e["item"]["value"] for e in report["suggestions"]["Metric"]]
    assert metrics == ["VM Boosting Latency"]
    print("\nwalkthrough 1 ok")
