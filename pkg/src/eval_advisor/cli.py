"""Command-line front door; machine-readable JSON on stdout by default.

Exit codes: 0 success, 1 invalid input or malformed document, 2 not found.
Errors are emitted as JSON objects {"code", "message"} on stderr.
"""

from __future__ import annotations

import functools
import sys
from fractions import Fraction

import click

from eval_advisor.errors import EXIT_CODE, AdvisorError, InvalidInputError
from eval_advisor.mining import MiningConfig
from eval_advisor.wire import dumps
from eval_advisor.workspace import ADDR_ENV, DATA_DIR_ENV, Workspace


def _emit(ctx, payload) -> None:
    click.echo(dumps(payload, pretty=ctx.obj["pretty"]))


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except AdvisorError as exc:
            click.echo(dumps(exc.to_wire()), err=True)
            sys.exit(EXIT_CODE[exc.code])

    return wrapper


@click.group()
@click.option(
    "--data-dir",
    envvar=DATA_DIR_ENV,
    default=".",
    show_default=True,
    help="Directory holding vocab.json, records.log, kb.json and logs.",
)
@click.option("--pretty", is_flag=True, help="Indent JSON output for humans.")
@click.pass_context
def main(ctx, data_dir, pretty):
    """Evaluation advisor: import experiments, mine rules, ask for advice."""
    ctx.ensure_object(dict)
    ctx.obj["data_dir"] = data_dir
    ctx.obj["pretty"] = pretty


def _workspace(ctx) -> Workspace:
    return Workspace(ctx.obj["data_dir"])


@main.command("import")
@click.option("--corpus", "corpus_path", required=True, type=click.Path())
@click.option("--vocab", "vocab_path", required=True, type=click.Path())
@click.option(
    "--curated",
    "curated_path",
    type=click.Path(),
    default=None,
    help="Seed the knowledge base with hand-written rules (KB file format).",
)
@click.pass_context
@_handle_errors
def import_cmd(ctx, corpus_path, vocab_path, curated_path):
    """Load a corpus file into the data directory."""
    _, outcome = Workspace.initialize(
        ctx.obj["data_dir"], corpus_path, vocab_path, curated_path
    )
    _emit(ctx, outcome)


@main.command()
@click.option("--min-coverage", type=int, default=3, show_default=True)
@click.option(
    "--min-accuracy",
    type=str,
    default="0.8",
    show_default=True,
    help="Decimal or num/den; stored exactly as a rational.",
)
@click.option("--max-size", type=int, default=3, show_default=True)
@click.option("--exact", is_flag=True, help="Disable hierarchy-aware matching.")
@click.pass_context
@_handle_errors
def mine(ctx, min_coverage, min_accuracy, max_size, exact):
    """Re-mine the knowledge base and write kb.json."""
    try:
        accuracy = Fraction(min_accuracy)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInputError(f"bad --min-accuracy: {exc}")
    config = MiningConfig(
        min_coverage=min_coverage,
        min_accuracy=accuracy,
        max_itemset_size=max_size,
    )
    _emit(ctx, _workspace(ctx).mine(config, exact=exact))


@main.command()
@click.option(
    "--feature",
    "features",
    multiple=True,
    required=True,
    help="ServiceFeature value; repeat for multi-feature enquiries.",
)
@click.option(
    "--attr",
    "attrs",
    multiple=True,
    help="Restrict suggestions to these step attributes.",
)
@click.option("--mode", default="auto", show_default=True)
@click.pass_context
@_handle_errors
def ask(ctx, features, attrs, mode):
    """Ask for evaluation suggestions for one or more service features."""
    body = {
        "items": [
            {"attribute": "ServiceFeature", "value": f} for f in features
        ],
        "mode": mode,
    }
    if attrs:
        body["requested-attributes"] = list(attrs)
    _emit(ctx, _workspace(ctx).suggest(body))


@main.command()
@click.option(
    "--item",
    "items",
    multiple=True,
    required=True,
    help="Attribute:value pair, e.g. ServiceFeature:'Horizontal Scalability'.",
)
@click.option(
    "--mode",
    default="auto",
    show_default=True,
    type=click.Choice(["precise", "heuristic", "fuzzy", "auto"]),
)
@click.option("--exact", is_flag=True, help="Disable hierarchy-aware matching.")
@click.pass_context
@_handle_errors
def retrieve(ctx, items, mode, exact):
    """Retrieve similar past experiments for an item combination."""
    parsed = []
    for raw in items:
        attribute, _, value = raw.partition(":")
        if not value:
            raise InvalidInputError(
                f"--item must look like Attribute:value; got {raw!r}"
            )
        parsed.append({"attribute": attribute, "value": value})
    body = {"items": parsed, "mode": mode}
    _emit(ctx, _workspace(ctx).retrieve(body, exact=exact))


@main.command()
@click.option(
    "--addr",
    envvar=ADDR_ENV,
    default="127.0.0.1:8571",
    show_default=True,
    help="host:port to listen on.",
)
@click.pass_context
@_handle_errors
def serve(ctx, addr):
    """Run the HTTP API over this data directory."""
    import uvicorn

    from eval_advisor.api import create_app

    host, _, port = addr.rpartition(":")
    if not host or not port.isdigit():
        raise InvalidInputError(f"--addr must look like host:port; got {addr!r}")
    app = create_app(_workspace(ctx))
    uvicorn.run(app, host=host, port=int(port), log_level="warning")


@main.command()
@click.option(
    "--what",
    required=True,
    type=click.Choice(["rules", "cases", "vocab"]),
)
@click.pass_context
@_handle_errors
def export(ctx, what):
    """Dump the named store as JSON."""
    _emit(ctx, _workspace(ctx).export(what))


if __name__ == "__main__":
    main()
