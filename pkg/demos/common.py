"""Shared setup for the demo walkthroughs: build a scratch data directory
from the bundled seed corpus and mine the knowledge base."""

import tempfile
from pathlib import Path

import eval_advisor
from eval_advisor.workspace import Workspace

DATA = Path(eval_advisor.__file__).parent / "data"


def fresh_workspace() -> Workspace:
    scratch = Path(tempfile.mkdtemp(prefix="eval-advisor-demo-"))
    workspace, outcome = Workspace.initialize(
        scratch,
        corpus_path=DATA / "corpus.json",
        vocab_path=DATA / "vocab.json",
        curated_path=DATA / "curated.json",
    )
    print(f"data directory: {scratch}")
    print(f"imported {outcome['imported']} experiment records")
    mined = workspace.mine()
    print(f"knowledge base: {mined['rules']} rules "
          f"(fingerprint {mined['kb-fingerprint']})\n")
    return workspace


def show_suggestions(report: dict) -> None:
    for attribute in sorted(report["suggestions"]):
        for entry in report["suggestions"][attribute]:
            conf = entry["confidence"]
            chain = " > ".join(entry["derivation"]["chain"])
            print(f"  {attribute:13} {entry['item']['value']}")
            print(f"                confidence {conf['num']}/{conf['den']}, "
                  f"via {chain}")


def show_cases(report: dict) -> None:
    for case in report["supporting-cases"]:
        record = case["record"]
        extras = ""
        if case["dropped-items"]:
            dropped = ", ".join(i["value"] for i in case["dropped-items"])
            extras = f" [dropped: {dropped}]"
        print(f"  {record['id']:18} ({record['provenance']['study']}, "
              f"mode {case['mode-used']}){extras}")
