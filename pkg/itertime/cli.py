"""itertime command line.

Every domain error ends the run with its status mapping on stderr and
exit status 1; usage errors keep click's exit status 2.
"""

import json
import logging
import sys
from pathlib import Path
from typing import Optional

import click
from dotenv import load_dotenv
from pydantic import ValidationError

from .allen import compose_set, format_relation, parse_relation
from .calendars import Frame
from .categories import classify
from .config import get_settings
from .cti import render
from .denotation import DenoteOptions, compare, denotation_to_dict, evaluate
from .errors import InconsistentNetwork, ItertimeError
from .extractor import Extractor, PatternId, load_vocabulary
from .itermodel import IterationSpec, instantiate as instantiate_iteration
from .network import Verdict, export_chronogram, find_scenario, format_network, parse_network, path_consistency
from .sdt import Clause, Diagnosis, build_structure, encore_deja, to_network

logger = logging.getLogger(__name__)


class ItertimeGroup(click.Group):
    """Turns domain errors raised by any subcommand into exit status 1."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except ItertimeError as exc:
            logger.debug("command failed", exc_info=True)
            click.echo(json.dumps(exc.to_dict(), ensure_ascii=False), err=True)
            ctx.exit(1)


def _dump(data) -> str:
    return json.dumps(data, ensure_ascii=False)


def _frame(start: str, end: str) -> Frame:
    try:
        return Frame.from_iso(start, end)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--from/--to") from exc


def _read_model(model, path: Path):
    try:
        return model.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as exc:
        raise click.BadParameter(str(exc), param_hint=str(path)) from exc


frame_options = [
    click.option("--from", "start", required=True, help="Frame start, ISO-8601."),
    click.option("--to", "end", required=True, help="Frame end (exclusive), ISO-8601."),
]


def with_frame(command):
    for option in reversed(frame_options):
        command = option(command)
    return command


@click.group(cls=ItertimeGroup)
@click.option("--verbose", "-v", is_flag=True, help="Debug logging on stderr.")
def cli(verbose: bool):
    """Iterated temporal reference: series, CTIs, Allen networks, aspect structures."""
    load_dotenv()
    level = logging.DEBUG if verbose else get_settings().log_level
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


@cli.command("eval")
@click.argument("expression")
@with_frame
@click.option("--soft", is_flag=True, help="Clip boundary units instead of dropping them.")
@click.option("--lenient", is_flag=True, help="Skip parent components too small for a ratio.")
@click.option("--flexible-every", is_flag=True, help='Read "tous les n X" as one X per packet of n.')
@click.option("--witness/--family", "witness", default=True, help="Print only the witness, or the family too.")
def eval_command(expression: str, start: str, end: str, soft: bool, lenient: bool, flexible_every: bool, witness: bool):
    """Denotes a CTI over the frame."""
    frame = _frame(start, end)
    denotation = evaluate(expression, frame, DenoteOptions(soft, lenient, flexible_every))
    click.echo(_dump(denotation_to_dict(denotation, frame, family=not witness)))


@cli.command()
@click.argument("first")
@click.argument("second")
@with_frame
@click.option("--json", "as_json", is_flag=True)
def check(first: str, second: str, start: str, end: str, as_json: bool):
    """Compares the denotations of two CTIs."""
    frame = _frame(start, end)
    report = compare(evaluate(first, frame), evaluate(second, frame), frame)
    if as_json:
        click.echo(_dump(report.to_dict(frame)))
        return
    click.echo(f"📋 {first!r} vs {second!r}")
    for flag in report.flags():
        click.echo(f"✅ {flag}")
    click.echo(f"   {len(report.common)} common item(s)")


@cli.group()
def network():
    """Allen constraint networks."""


@network.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--scenario", is_flag=True, help="Also print one atomic scenario.")
@click.option("--chronogram", is_flag=True, help="Also draw a scenario as a timeline.")
@click.option("--json", "as_json", is_flag=True)
def solve(path: Path, scenario: bool, chronogram: bool, as_json: bool):
    """Runs path consistency on a constraint file."""
    net = parse_network(path.read_text(encoding="utf-8"))
    result = path_consistency(net)
    if result.verdict is Verdict.INCONSISTENT:
        if as_json:
            click.echo(_dump({"verdict": result.verdict.value}))
        else:
            click.echo(f"❌ {result.verdict.value}")
        raise InconsistentNetwork(f"{path.name} is inconsistent", revisions=result.revisions)

    data = {"verdict": result.verdict.value, "revisions": result.revisions, "network": format_network(result.network)}
    if scenario:
        data["scenario"] = format_network(find_scenario(result.network))
    if chronogram:
        data["chronogram"] = export_chronogram(result.network)
    if as_json:
        click.echo(_dump(data))
        return
    marker = "✅" if result.verdict is Verdict.CONSISTENT else "⚠️"
    click.echo(f"{marker} {result.verdict.value} after {result.revisions} revision(s)")
    click.echo(data["network"], nl=False)
    for key in ("scenario", "chronogram"):
        if key in data:
            click.echo(f"📋 {key}")
            click.echo(data[key], nl=False)


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--network", "network_path", type=click.Path(dir_okay=False, path_type=Path),
              help="Write the Allen projection of the structure to this file.")
@click.option("--reading", type=click.Choice(["encore", "deja"]), help="Also decide the reading of encore/deja.")
def sdt(path: Path, network_path: Optional[Path], reading: Optional[str]):
    """Builds and diagnoses the aspect structure of a clause record."""
    clause = _read_model(Clause, path)
    structure = build_structure(clause)
    data = structure.model_dump(mode="json")
    if reading:
        data["reading"] = encore_deja(clause, reading).value
    if network_path is not None:
        if structure.diagnosis is Diagnosis.INSOLUBLE:
            click.echo("⚠️ insoluble structure, no network written", err=True)
        else:
            network_path.write_text(format_network(to_network(structure)), encoding="utf-8")
            data["network"] = str(network_path)
    click.echo(_dump(data))


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@with_frame
def instantiate(path: Path, start: str, end: str):
    """Instantiates an iteration spec over the frame."""
    frame = _frame(start, end)
    spec = _read_model(IterationSpec, path)
    iteres = instantiate_iteration(spec.build(frame), frame)
    click.echo(_dump([itere.to_dict(frame) for itere in iteres]))


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--pattern", type=click.Choice([p.value for p in PatternId]), help="Keep one pattern family.")
@click.option("--vocabulary", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="Extra period labels, one per line.")
@click.option("--jobs", default=1, show_default=True, type=click.IntRange(min=1))
@click.option("--json", "as_json", is_flag=True, help="One JSON object per match.")
def extract(path: Path, pattern: Optional[str], vocabulary: Optional[Path], jobs: int, as_json: bool):
    """Finds iterative adverbials in a UTF-8 text file."""
    extractor = Extractor(load_vocabulary(vocabulary) if vocabulary else None)
    text = path.read_text(encoding="utf-8")
    matches = extractor.scan(text, PatternId(pattern) if pattern else None, jobs)
    for match in matches:
        ast = extractor.to_cti(match)
        if as_json:
            data = match.to_dict()
            if ast is not None:
                data["cti"] = render(ast)
            click.echo(_dump(data))
        else:
            start, stop = match.span
            suffix = f" -> {render(ast)}" if ast is not None else ""
            click.echo(f"📋 {match.pattern.value:<16} {start}:{stop} {text[start:stop]!r}{suffix}")
    if not as_json:
        click.echo(f"✅ {len(matches)} match(es)")


@cli.command("classify")
@click.argument("phrase")
@click.option("--json", "as_json", is_flag=True)
def classify_command(phrase: str, as_json: bool):
    """Prints the functional category of a temporal expression."""
    category = classify(phrase)
    if as_json:
        click.echo(_dump({"phrase": phrase, "category": category.kind.value, "subcategory": category.subkind}))
    else:
        click.echo(f"✅ {category.tag}")


@cli.command()
@click.argument("first")
@click.argument("second")
def relation(first: str, second: str):
    """Composes two Allen relations given in textual syntax."""
    click.echo(format_relation(compose_set(parse_relation(first), parse_relation(second))))


if __name__ == "__main__":
    cli()
