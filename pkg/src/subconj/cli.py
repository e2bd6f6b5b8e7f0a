"""Command-line frontend: argument parsing, dispatch and rendering."""

from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Any

from structlog import get_logger

from subconj import __version__
from subconj.blocks import ProjectedSystem, block_coding, hat_substitution
from subconj.catalog import Catalog, CatalogEntry, FactorList
from subconj.core import LetterMap, Substitution, analyze, incidence_matrix, injectivization_steps, language
from subconj.epimorph import brute_force_epis, enumerate_epis
from subconj.graphs import FactorGraph, block_graph, letter_graph
from subconj.parsing import parse_partition, parse_substitution
from subconj.procedures import conjugacy_list, decide_conjugate, factor_list
from subconj.settings import Settings
from subconj.util_classes import Commands, ExitStatus, InvalidInputError, OutputFormat, UnsupportedError, Verdict
from subconj.verify import non_substitutive_evidence

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence
    from logging import Logger

    from subconj.verify import EvidenceRow

_logger: Logger = get_logger(__name__)

_INPUT_COUNT = {Commands.CONJUGATE: 2}


@dataclass(frozen=True)
class CommandRequest:
    """A validated command with its inputs and options."""

    command: Commands
    inputs: tuple[str, ...]
    block_length: int | None = None
    lag: int | None = None
    target_length: int | None = None
    partition: str | None = None
    n_max: int = 3
    output_format: OutputFormat = OutputFormat.TEXT
    settings: Settings = field(default_factory=Settings)


@dataclass
class Rendered:
    """The output of a command in every format it supports."""

    data: dict[str, Any]
    text: str
    dot: str | None = None
    status: ExitStatus = ExitStatus.OK


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser shared by every subcommand."""
    parser = argparse.ArgumentParser(prog="subconj", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in Commands:
        sub = subparsers.add_parser(command.value)
        sub.add_argument("inputs", nargs=_INPUT_COUNT.get(command, 1), help="rules such as 1->12,2->21, or a file")
        sub.add_argument("-N", dest="block_length", type=int, help="block length")
        sub.add_argument("-M", dest="lag", type=int, help="lag (nblock) or residue (graphs, epis)")
        sub.add_argument("-L", dest="target_length", type=int, help="word length of the block graph")
        sub.add_argument("--n-max", dest="n_max", type=int, default=3, help="largest exponent for evidence")
        sub.add_argument("--partition", help="letter map as a partition string, e.g. {1,4,5}{2,3}{6}")
        sub.add_argument("--kmax", dest="k_max", type=int, help="refutation depth")
        sub.add_argument("--jobs", type=int, help="worker processes")
        sub.add_argument("--cache", type=Path, help="persistent catalog file")
        sub.add_argument("--no-symmetry", dest="symmetry", action="store_false", default=None)
        sub.add_argument("--budget", type=float, help="wall-clock cap in seconds")
        sub.add_argument("--format", dest="output_format", choices=[f.value for f in OutputFormat], default="text")
        sub.add_argument("--verbose", action="store_true", help="log progress at INFO")
        sub.add_argument("--log-file", dest="log_file", type=Path, help="also write logs to this file")
    return parser


def request_from_args(args: argparse.Namespace) -> CommandRequest:
    """Turn parsed arguments into a request; flags given on the command line override the environment."""
    overrides = {
        name: getattr(args, name)
        for name in ("k_max", "jobs", "cache", "symmetry", "budget")
        if getattr(args, name) is not None
    }
    if args.verbose:
        overrides["log_level"] = "INFO"
    return CommandRequest(
        command=Commands(args.command),
        inputs=tuple(args.inputs),
        block_length=args.block_length,
        lag=args.lag,
        target_length=args.target_length,
        partition=args.partition,
        n_max=args.n_max,
        output_format=OutputFormat(args.output_format),
        settings=Settings(**overrides),
    )


def read_substitution(argument: str) -> Substitution:
    """Parse rules given inline or stored in a file.

    Raises:
        InvalidInputError: raised if the argument names a file that cannot be read as UTF-8 text.

    """
    if "->" in argument:
        return parse_substitution(argument)
    path = Path(argument)
    try:
        text = path.read_text(encoding="utf-8") if path.is_file() else argument
    except (OSError, UnicodeDecodeError) as e:
        raise InvalidInputError(f"Cannot read substitution file {argument!r}: {e}") from e
    return parse_substitution(text)


# Rendering helpers


def _table(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells = [list(header), *[[str(cell) for cell in row] for row in rows]]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = ("  ".join(cell.ljust(width) for cell, width in zip(row, widths, strict=True)) for row in cells)
    return "\n".join(line.rstrip() for line in lines)


def _entry_row(number: int, entry: CatalogEntry) -> list[Any]:
    provenance = entry.provenance
    partition = provenance.partition.partition_string() if provenance else "-"
    residue = provenance.residue if provenance else "-"
    return [number, partition, residue, entry.standard_form.rules()]


def _render_list(title: str, found: FactorList) -> Rendered:
    header = ("Nr.", "Partition", "M", "Substitution")
    parts = [
        f"{title} of {found.source.rules()} (length {found.length}): {len(found.entries)} entries"
        + ("" if found.complete else ", INCOMPLETE"),
        _table(header, [_entry_row(i, entry) for i, entry in enumerate(found.entries, start=1)]),
    ]
    if found.undecided:
        parts.append(f"Undecided: {len(found.undecided)}")
        parts.append(_table(header, [_entry_row(i, entry) for i, entry in enumerate(found.undecided, start=1)]))
    status = ExitStatus.OK if found.complete and not found.undecided else ExitStatus.UNDECIDED
    return Rendered(found.model_dump(mode="json"), "\n".join(parts), status=status)


def _graph_text(name: str, graph: FactorGraph) -> str:
    edges = " ".join(f"{graph.label(u)}->{graph.label(v)}" for u, v in graph.sorted_edges())
    vertices = " ".join(graph.label(vertex) for vertex in graph.vertices)
    return f"{name}: vertices {vertices}\n  edges {edges}"


def _system(s: Substitution, request: CommandRequest) -> ProjectedSystem:
    n = request.block_length or 1
    generator = hat_substitution(s, n, 0)
    projection = (
        parse_partition(request.partition, generator.alphabet)
        if request.partition
        else LetterMap.identity(generator.alphabet)
    )
    if n == 1:
        return ProjectedSystem(s, projection)
    return ProjectedSystem.block_presentation(s, n, projection)


def _residues(request: CommandRequest, target_length: int) -> range:
    if request.lag is None:
        return range(target_length)
    return range(request.lag, request.lag + 1)


# Commands


def _analyze(request: CommandRequest) -> Rendered:
    s = read_substitution(request.inputs[0])
    report = analyze(s)
    data = {
        "substitution": s.rules(),
        "length": s.length,
        "size": s.size,
        "primitive": report.primitive,
        "injective": report.injective,
        "aperiodic": report.aperiodic.value,
        "standard_form": report.standard_form.rules(),
        "permutation": list(report.permutation),
        "incidence_matrix": incidence_matrix(s).tolist(),
    }
    text = "\n".join(f"{key}: {value}" for key, value in data.items())
    return Rendered(data, text)


def _std(request: CommandRequest) -> Rendered:
    report = analyze(read_substitution(request.inputs[0]))
    data = {"standard_form": report.standard_form.rules(), "permutation": list(report.permutation)}
    return Rendered(data, f"{data['standard_form']}\npermutation: {' '.join(map(str, report.permutation))}")


def _injectivize(request: CommandRequest) -> Rendered:
    s = read_substitution(request.inputs[0])
    steps = injectivization_steps(s)
    rounds = [{"substitution": merged.rules(), "merge": merge.partition_string()} for merged, merge in steps]
    final = steps[-1][0] if steps else s
    data = {"rounds": rounds, "injectivization": final.rules()}
    lines = [f"round {i}: {step['substitution']}  {step['merge']}" for i, step in enumerate(rounds, start=1)]
    lines.append(final.rules())
    return Rendered(data, "\n".join(lines))


def _nblock(request: CommandRequest) -> Rendered:
    s = read_substitution(request.inputs[0])
    n = request.block_length or 2
    lag = request.lag or 0
    hat = hat_substitution(s, n, lag)
    coding = block_coding(s, n)
    data = {"block_length": n, "lag": lag, "coding": coding.to_table(), "substitution": hat.rules()}
    table = _table(("code", "block"), [(row["code"], row["word"]) for row in data["coding"]])
    return Rendered(data, f"{table}\n{hat.rules()}")


def _language(request: CommandRequest) -> Rendered:
    s = read_substitution(request.inputs[0])
    n = request.block_length or 2
    words = [s.alphabet.spell(word) for word in sorted(language(s, n))]
    return Rendered({"length": n, "count": len(words), "words": words}, "\n".join(words))


def _graphs(request: CommandRequest) -> Rendered:
    system = _system(read_substitution(request.inputs[0]), request)
    target_length = request.target_length or system.generator.length
    g1 = letter_graph(system)
    blocks = {residue: block_graph(system, target_length, residue) for residue in _residues(request, target_length)}
    data = {
        "letter_graph": g1.to_json(),
        "block_graphs": [{"length": target_length, "residue": m, **g.to_json()} for m, g in blocks.items()],
    }
    text = "\n".join(
        [_graph_text("G1", g1), *(_graph_text(f"G{target_length},{m}", g) for m, g in blocks.items())]
    )
    dot = "\n".join([g1.to_dot("G1"), *(g.to_dot(f"G{target_length}_{m}") for m, g in blocks.items())])
    return Rendered(data, text, dot)


def _epis(request: CommandRequest) -> Rendered:
    system = _system(read_substitution(request.inputs[0]), request)
    target_length = request.target_length or system.generator.length
    g1 = letter_graph(system)
    results = []
    lines = []
    for residue in _residues(request, target_length):
        glm = block_graph(system, target_length, residue)
        epis, stats = enumerate_epis(g1, glm)
        try:
            agrees: bool | None = brute_force_epis(g1, glm, budget=request.settings.oracle_budget) == epis
        except UnsupportedError:
            agrees = None
        rules = [epi.induced.rules() for epi in epis]
        results.append({"residue": residue, "epimorphisms": rules, "stats": asdict(stats), "oracle_agrees": agrees})
        lines.append(f"M={residue}: {len(rules)} epimorphisms (exhaustive check: {agrees})")
        lines.extend(f"  {rule}" for rule in rules)
    return Rendered({"length": target_length, "results": results}, "\n".join(lines))


def _catalog(request: CommandRequest) -> Catalog | None:
    return Catalog(request.settings.cache) if request.settings.cache else None


def _factors(request: CommandRequest) -> Rendered:
    found = factor_list(read_substitution(request.inputs[0]), request.settings, _catalog(request))
    return _render_list("Factor list", found)


def _conjugacy(request: CommandRequest) -> Rendered:
    found = conjugacy_list(read_substitution(request.inputs[0]), request.settings, _catalog(request))
    return _render_list("Conjugacy list", found)


def _conjugate(request: CommandRequest) -> Rendered:
    alpha, beta = (read_substitution(argument) for argument in request.inputs)
    verdict = decide_conjugate(alpha, beta, request.settings, _catalog(request))
    status = ExitStatus.UNDECIDED if verdict is Verdict.UNDECIDED else ExitStatus.OK
    return Rendered({"verdict": verdict.value}, verdict.value, status=status)


def _evidence(request: CommandRequest) -> Rendered:
    system = _system(read_substitution(request.inputs[0]), request)
    report = non_substitutive_evidence(system, request.n_max)
    rows = [_row_dict(row) for row in report.rows]
    data = {"letter_loops": report.letter_loops, "rows": rows, "non_substitutive": report.non_substitutive}
    table = _table(("n", "M", "loops", "epimorphisms"), [list(row.values()) for row in rows])
    text = f"{table}\nletter graph loops: {report.letter_loops}\nnon-substitutive evidence: {report.non_substitutive}"
    return Rendered(data, text)


def _row_dict(row: EvidenceRow) -> dict[str, int]:
    return {"n": row.exponent, "M": row.residue, "loops": row.loops, "epimorphisms": row.epimorphisms}


_HANDLERS: dict[Commands, Callable[[CommandRequest], Rendered]] = {
    Commands.ANALYZE: _analyze,
    Commands.STD: _std,
    Commands.INJECTIVIZE: _injectivize,
    Commands.NBLOCK: _nblock,
    Commands.LANGUAGE: _language,
    Commands.GRAPHS: _graphs,
    Commands.EPIS: _epis,
    Commands.FACTORS: _factors,
    Commands.CONJUGACY: _conjugacy,
    Commands.CONJUGATE: _conjugate,
    Commands.EVIDENCE: _evidence,
}


def run(request: CommandRequest) -> tuple[ExitStatus, str]:
    """Execute a command.

    Args:
        request: The command and its options.

    Raises:
        InvalidInputError: raised on malformed inputs or a format the command cannot produce.
        UnsupportedError: raised on inputs outside the procedures' domain.

    Returns:
        The exit status and the rendered output.

    """
    _logger.info("Running command", extra={"command": request.command.value, "inputs": list(request.inputs)})
    rendered = _HANDLERS[request.command](request)
    match request.output_format:
        case OutputFormat.JSON:
            output = json.dumps(rendered.data, indent=2)
        case OutputFormat.DOT:
            if rendered.dot is None:
                raise InvalidInputError(f"{request.command.value} has no DOT rendering.")
            output = rendered.dot
        case _:
            output = rendered.text
    return rendered.status, output
