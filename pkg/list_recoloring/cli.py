import math
import time
import logging
import typing as t
from pathlib import Path

import click

from . import formats
from . import oracle
from . import metrics
from . import detectors
from . import generators
from . import discharging
from . import synthesizers
from .common import (
    Theorem,
    RecoloringError,
    HypothesisError,
    ConfigurationPresentError,
    InstanceParseError,
    GeneratorError,
    StateCapExceeded,
)
from .coloring import validate_sequence
from .utils import format_fraction, parse_fraction, STATE_CAP_ENV


logger = logging.getLogger(__name__)

EXIT_INVALID = 1
EXIT_USAGE = 2
THEOREM_CHOICES = [theorem.value for theorem in Theorem]


def _fail(code: int, message: str) -> t.NoReturn:
    logger.error(message)
    click.get_current_context().exit(code)


def _load(filename: str, complete: bool = False) -> formats.Instance:
    try:
        instance = formats.parse_instance(Path(filename).read_text())
    except InstanceParseError as exc:
        _fail(EXIT_USAGE, f"Cannot parse `{filename}`: {exc}")

    if complete and not instance.is_complete:
        _fail(EXIT_USAGE, f"`{filename}` needs `list`, `alpha` and `beta` lines for this command")
    logger.info(f"Loaded `{filename}` with {instance.graph.n} vertices and {instance.graph.m} edges")
    return instance


def _write(text: str, output: t.Optional[str]):
    if output is None:
        click.echo(text, nl=False)
    else:
        Path(output).write_text(text)
        logger.info(f"Written to `{output}`")


instance_argument = click.argument("filename", type=click.Path(exists=True, dir_okay=False))
output_option = click.option("-o", "--output", type=click.Path(dir_okay=False), default=None, help="Write to a file instead of stdout")


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log per-stage debug traces")
def cli(verbose):
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)


@cli.command()
@instance_argument
@click.option("--theorem", type=click.Choice(THEOREM_CHOICES), required=True)
@output_option
def solve(filename, theorem, output):
    """
    Synthesize a recoloring sequence from alpha to beta under one of the theorems
    """
    instance = _load(filename, complete=True)
    theorem = Theorem.detect(theorem)

    start = time.monotonic()
    try:
        seq = synthesizers.solve(theorem, instance.graph, instance.lists, instance.alpha, instance.beta)
    except HypothesisError as exc:
        _fail(EXIT_INVALID, f"Hypothesis of theorem {theorem.value} does not hold: {exc}")
    except RecoloringError as exc:
        _fail(EXIT_INVALID, f"Synthesis failed: {exc}")
    end = time.monotonic()

    logger.info(
        f"Solve finished in {(end - start):.2f} s: {len(seq)} steps, "
        f"at most {seq.max_count} recolorings per vertex (bound {theorem.bound})"
    )
    _write(formats.emit_sequence(seq), output)


@cli.command()
@instance_argument
@click.argument("sequence", type=click.Path(exists=True, dir_okay=False))
@click.option("--bound", type=int, default=None, help="Maximum recolorings per vertex")
def verify(filename, sequence, bound):
    """
    Replay a sequence from alpha and check it stays proper, ends at beta and respects the bound
    """
    instance = _load(filename, complete=True)
    try:
        seq = formats.parse_sequence(Path(sequence).read_text(), instance.alpha)
    except InstanceParseError as exc:
        _fail(EXIT_USAGE, f"Cannot parse `{sequence}`: {exc}")

    report = validate_sequence(instance.graph, instance.lists, seq, instance.beta, k=bound)
    click.echo(str(report))
    if not report.valid:
        _fail(EXIT_INVALID, f"Sequence `{sequence}` is invalid")


@cli.command()
@instance_argument
@click.option("--enumerate", "use_enumeration", is_flag=True, help="Brute force over vertex subsets instead of min-cuts")
def mad(filename, use_enumeration):
    """
    Exact maximum average degree with a densest-subgraph witness
    """
    g = _load(filename).graph
    start = time.monotonic()
    try:
        report = metrics.mad_enumerate(g) if use_enumeration else metrics.mad_exact(g)
    except RecoloringError as exc:
        _fail(EXIT_INVALID, str(exc))
    end = time.monotonic()

    logger.info(f"mad finished in {(end - start):.2f} s")
    click.echo(f"mad {format_fraction(report.mad)}")
    click.echo(f"witness {' '.join(map(str, sorted(report.witness)))}")


@cli.command()
@instance_argument
def girth(filename):
    """
    Length of a shortest cycle, `inf` for forests
    """
    g = _load(filename).graph
    value = metrics.girth(g)
    click.echo(f"girth {'inf' if math.isinf(value) else value}")


@cli.command()
@instance_argument
@click.option("--theorem", type=click.Choice(THEOREM_CHOICES), required=True)
def find_config(filename, theorem):
    """
    Find a reducible configuration of the theorem and print its extension plan
    """
    instance = _load(filename)
    theorem = Theorem.detect(theorem)
    if theorem is Theorem.BASELINE and instance.lists is None:
        _fail(EXIT_USAGE, "The baseline configuration needs lists")

    try:
        match = detectors.find_config(theorem, instance.graph, instance.lists)
    except RecoloringError as exc:
        _fail(EXIT_INVALID, f"No configuration: {exc}")

    click.echo(str(match))
    for stage in match.stages:
        caps = " ".join(f"{v}:{cap}" for v, cap in stage.caps.items())
        click.echo(f"stage {stage.kind.value} {' '.join(map(str, stage.path))} caps {caps}")


@cli.command()
@instance_argument
@click.option("--lemma", type=click.Choice(sorted(discharging.AUDITS)), required=True)
@click.option("--allow-configs", is_flag=True, help="Run the rules even when a reducible configuration is present")
@output_option
def discharge(filename, lemma, allow_configs, output):
    """
    Run a discharging argument on the graph and report every final charge
    """
    g = _load(filename).graph
    try:
        ledger = discharging.AUDITS[lemma](g, require_config_free=not allow_configs)
    except ConfigurationPresentError as exc:
        click.echo(f"configuration {exc.match}")
        _fail(EXIT_INVALID, str(exc))
    except RecoloringError as exc:
        _fail(EXIT_INVALID, f"Cannot run the {lemma} rules: {exc}")

    _write(ledger.to_text(), output)
    minimum = "none" if ledger.minimum is None else format_fraction(ledger.minimum)
    click.echo(f"minimum {minimum} bound {format_fraction(ledger.bound)} violations {len(ledger.violations)}")
    for note in ledger.notes:
        click.echo(f"note {note}")
    if not ledger.holds:
        _fail(EXIT_INVALID, f"{lemma}: final charges fall below {format_fraction(ledger.bound)}")


@cli.command(name="oracle")
@click.argument("query", type=click.Choice(["space", "distance", "diameter"]))
@instance_argument
@click.option("--cap", type=int, envvar=STATE_CAP_ENV, default=None, help="Maximum number of states to enumerate")
def oracle_command(query, filename, cap):
    """
    Brute-force questions about the recoloring graph of small instances
    """
    instance = _load(filename, complete=query == "distance")
    if instance.lists is None:
        _fail(EXIT_USAGE, f"`{filename}` needs `list` lines for the oracle")

    start = time.monotonic()
    try:
        space = oracle.build_state_space(instance.graph, instance.lists, cap=cap)
    except StateCapExceeded as exc:
        _fail(EXIT_INVALID, str(exc))

    if query == "space":
        click.echo(f"states {len(space)}")
        click.echo(f"components {oracle.component_count(space)}")
    elif query == "distance":
        distance = oracle.bfs_distance(space, instance.alpha, instance.beta)
        click.echo(f"distance {'unreachable' if distance is None else distance}")
        if distance is None:
            _fail(EXIT_INVALID, "beta is not reachable from alpha")
    else:
        value = oracle.diameter(space)
        click.echo(f"diameter {'inf' if value is None else value}")

    end = time.monotonic()
    logger.info(f"Oracle `{query}` over {len(space)} states finished in {(end - start):.2f} s")


@cli.command()
@click.argument("model", type=click.Choice(generators.GRAPH_MODELS))
@click.option("-k", "--list-size", type=int, required=True)
@click.option("-n", "n", type=int, default=6, show_default=True, help="Vertex count for path, cycle, complete and random-sparse")
@click.option("--rows", type=int, default=3, show_default=True)
@click.option("--cols", type=int, default=3, show_default=True)
@click.option("--base", type=click.Choice(generators.BASE_GRAPHS), default="k4", show_default=True)
@click.option("--times", type=int, default=1, show_default=True, help="Interior vertices added to every base edge")
@click.option("--bound", type=str, default=None, help="Strict mad bound for random-sparse, e.g. 22/9")
@click.option("--lists", "list_model", type=click.Choice(generators.LIST_MODELS), default="shared", show_default=True)
@click.option("--coloring", type=click.Choice(generators.COLORING_MODELS), default="disjoint", show_default=True)
@click.option("--palette", type=int, default=None, help="Colors to draw random lists from, twice the list size by default")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--theorem", type=click.Choice(THEOREM_CHOICES), default=None, help="Reject instances outside this theorem's hypothesis")
@output_option
def gen(model, list_size, n, rows, cols, base, times, bound, list_model, coloring, palette, seed, theorem, output):
    """
    Generate an instance from a graph family with lists and two colorings
    """
    try:
        instance = generators.generate(
            model,
            list_size,
            lists=list_model,
            coloring=coloring,
            palette=palette,
            seed=seed,
            theorem=None if theorem is None else Theorem(theorem),
            n=n,
            rows=rows,
            cols=cols,
            base=base,
            times=times,
            bound=None if bound is None else parse_fraction(bound)
        )
    except (GeneratorError, ValueError, ZeroDivisionError) as exc:
        _fail(EXIT_USAGE, f"Cannot generate `{model}`: {exc}")

    _write(formats.emit_instance(instance), output)


if __name__ == "__main__":
    cli()
