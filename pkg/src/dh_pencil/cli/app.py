"""Command-line interface: check, analyze, condense, stabilize and generate."""

import logging
from dataclasses import dataclass
from enum import StrEnum
from pathlib import Path
from typing import Any

import typer

from ..core.config_validator import AppConfig, ConfigValidator
from ..core.errors import (
    ConfigurationError,
    DhPencilError,
    InvalidInput,
    ParseError,
    SymmetryViolation,
    UnknownFixture,
)
from ..core.logging_config import setup_logging
from ..core.settings import SettingsManager
from ..services import ServiceContainer
from ..stabilization.perturbation import Preset
from .render import render

EXIT_OK = 0
EXIT_HYPOTHESES = 1
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3

INPUT_ERRORS = (InvalidInput, ParseError, SymmetryViolation, UnknownFixture, ConfigurationError)


class OutputFormat(StrEnum):
    text = "text"
    json = "json"


class Which(StrEnum):
    eq = "eq"
    section5 = "section5"
    zero = "zero"  # alias of section5


class Mode(StrEnum):
    zero = "zero"
    mixed = "mixed"
    symmetric_only = "symmetric-only"


@dataclass
class CliState:
    """What the root callback resolves before a command runs."""

    settings_manager: SettingsManager
    config: AppConfig

    def container(self, tol: float | None) -> ServiceContainer:
        return ServiceContainer(self.settings_manager, self.config, tolerance=tol)


app = typer.Typer(
    name="dh-pencil",
    help="Analyze and stabilize dissipative Hamiltonian matrix pencils.",
    no_args_is_help=True,
    add_completion=False,
)
generate_app = typer.Typer(help="Write fixtures or generated pencils as Matrix Market files.")
app.add_typer(generate_app, name="generate")

logger = logging.getLogger(__name__)


def exit_code_for_error(error: DhPencilError) -> int:
    """2 for input and parse errors, 3 for infeasible requests."""
    return EXIT_INPUT if isinstance(error, INPUT_ERRORS) else EXIT_INFEASIBLE


def _fail(error: DhPencilError) -> typer.Exit:
    typer.echo(f"error: {error}", err=True)
    return typer.Exit(exit_code_for_error(error))


def _emit(data: dict[str, Any], output_format: OutputFormat | None, state: CliState) -> None:
    container = state.container(None)
    fmt = container.settings_service.output_format(output_format.value if output_format else None)
    typer.echo(render(data, fmt, container.settings_service.indent))


def _state(ctx: typer.Context) -> CliState:
    state = ctx.obj
    assert isinstance(state, CliState)
    return state


@app.callback()
def root(
    ctx: typer.Context,
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug output on stderr."),
    no_log_file: bool = typer.Option(False, "--no-log-file", help="Do not write log files."),
    config: Path | None = typer.Option(
        None, "--config", help="Configuration file; settings.json is read next to it."
    ),
) -> None:
    """Analyze and stabilize dissipative Hamiltonian matrix pencils."""
    validator = ConfigValidator(config)
    app_config = validator.load_config()
    settings_manager = SettingsManager(validator.config_path.parent / "settings.json")
    log_to_file = settings_manager.get_settings().log_to_file and not no_log_file
    logging_config = setup_logging(log_to_file=log_to_file)
    if verbose or app_config.debug_mode:
        logging_config.set_console_level(logging.DEBUG)
    ctx.obj = CliState(settings_manager, app_config)


@app.command()
def check(
    ctx: typer.Context,
    manifest: Path = typer.Argument(..., help="Pencil manifest (JSON)."),
    tol: float | None = typer.Option(None, "--tol", help="Relative rank tolerance."),
    output_format: OutputFormat | None = typer.Option(None, "--format", help="text or json."),
) -> None:
    """Structural hypotheses of P and the Kronecker data of lambda E - Q."""
    state = _state(ctx)
    try:
        service = state.container(tol).analysis_service
        pencil = service.load(manifest)
        outcome = service.check(pencil)
    except DhPencilError as e:
        raise _fail(e) from e
    _emit({"name": pencil.name} | outcome.to_dict(), output_format, state)
    raise typer.Exit(outcome.exit_code)


@app.command()
def analyze(
    ctx: typer.Context,
    manifest: Path | None = typer.Argument(None, help="Pencil manifest (JSON)."),
    batch: Path | None = typer.Option(None, "--batch", help="Analyze every manifest in DIR."),
    out: Path | None = typer.Option(None, "--out", help="Directory for analysis documents."),
    tol: float | None = typer.Option(None, "--tol", help="Relative rank tolerance."),
    output_format: OutputFormat | None = typer.Option(None, "--format", help="text or json."),
) -> None:
    """Full analysis document: structure, Kronecker data, stability and condensed forms."""
    state = _state(ctx)
    if (manifest is None) == (batch is None):
        typer.echo("error: give either a manifest or --batch DIR", err=True)
        raise typer.Exit(EXIT_INPUT)
    try:
        container = state.container(tol)
        service = container.analysis_service
        if batch is not None:
            items = service.analyze_batch(batch, container.settings_service.batch_pattern)
        else:
            assert manifest is not None
            document = service.analyze(service.load(manifest))
    except DhPencilError as e:
        raise _fail(e) from e

    if batch is None:
        if out is not None:
            document.save(out / f"{Path(manifest or 'pencil').stem}.analysis.json")
        _emit(document.to_dict(), output_format, state)
        raise typer.Exit(service.exit_code_for(document))

    files: list[dict[str, Any]] = []
    for item in items:
        entry = item.to_dict()
        if item.document is not None:
            if out is not None:
                entry["document"] = str(item.document.save(out / f"{item.path.stem}.analysis.json"))
            else:
                entry["document"] = item.document.to_dict()
        else:
            typer.echo(f"error: {item.error}", err=True)
        files.append(entry)
    summary = {"batch": str(batch), "count": len(items), "files": files}
    _emit(summary, output_format, state)
    raise typer.Exit(max((item.exit_code for item in items), default=EXIT_OK))


@app.command()
def condense(
    ctx: typer.Context,
    manifest: Path = typer.Argument(..., help="Pencil manifest (JSON)."),
    which: Which = typer.Option(Which.eq, "--which", help="eq: form of (E, Q); section5 (alias zero): zero-eigenvalue form."),
    out: Path = typer.Option(Path("."), "--out", help="Output directory."),
    tol: float | None = typer.Option(None, "--tol", help="Relative rank tolerance."),
    output_format: OutputFormat | None = typer.Option(None, "--format", help="text or json."),
) -> None:
    """Write a condensed form as Matrix Market files plus a JSON manifest."""
    state = _state(ctx)
    try:
        service = state.container(tol).analysis_service
        result = service.condense(
            service.load(manifest), "eq" if which is Which.eq else "zero", out
        )
    except DhPencilError as e:
        raise _fail(e) from e
    _emit(result, output_format, state)


@app.command()
def stabilize(
    ctx: typer.Context,
    manifest: Path = typer.Argument(..., help="Pencil manifest (JSON)."),
    mode: Mode = typer.Option(Mode.zero, "--mode", help="zero, mixed or symmetric-only."),
    y: Path | None = typer.Option(None, "--y", help="Matrix Market file with Y (mixed mode)."),
    out: Path | None = typer.Option(None, "--out", help="Directory for dJ, dR and the perturbed pencil."),
    tol: float | None = typer.Option(None, "--tol", help="Relative rank tolerance."),
    output_format: OutputFormat | None = typer.Option(None, "--format", help="text or json."),
) -> None:
    """Structure-preserving perturbation making the zero eigenvalue semisimple."""
    state = _state(ctx)
    try:
        service = state.container(tol).analysis_service
        pencil = service.load(manifest)
        choice: Any
        if mode is Mode.mixed:
            if y is None:
                raise InvalidInput("--mode mixed needs --y")
            choice = service.read_matrix(y)
        else:
            if y is not None:
                raise InvalidInput(f"--y only applies to --mode mixed, not {mode.value}")
            preset: Preset = "zero" if mode is Mode.zero else "symmetric_only"
            choice = preset
        result, document = service.stabilize(pencil, choice)
        files = service.write_perturbation(result, out, manifest.stem) if out is not None else {}
    except DhPencilError as e:
        raise _fail(e) from e
    data = document.to_dict()
    if files:
        data["files"] = files
    _emit(data, output_format, state)
    raise typer.Exit(service.exit_code_for(document))


@generate_app.command("list")
def generate_list(ctx: typer.Context) -> None:
    """Registered fixtures and their descriptions."""
    state = _state(ctx)
    for name, description in state.container(None).generator_service.fixture_names():
        typer.echo(f"{name}: {description}")


@generate_app.command("fixture")
def generate_fixture(
    ctx: typer.Context,
    name: str = typer.Argument(..., help="Fixture name (see 'generate list')."),
    param: list[str] | None = typer.Option(None, "--param", "-p", help="key=value; JSON values allowed."),
    out: Path = typer.Option(Path("."), "--out", help="Output directory."),
    output_format: OutputFormat | None = typer.Option(None, "--format", help="text or json."),
) -> None:
    """Export a named fixture."""
    state = _state(ctx)
    generator = state.container(None).generator_service
    try:
        pencil = generator.fixture(name, param or [])
        manifest = generator.export(pencil, out)
    except DhPencilError as e:
        raise _fail(e) from e
    _emit({"name": pencil.name, "manifest": str(manifest)}, output_format, state)


@generate_app.command("left-indices")
def generate_left_indices(
    ctx: typer.Context,
    eta: str = typer.Option(..., "--eta", help="Comma-separated left minimal indices."),
    n: int = typer.Option(..., "--n", help="Rows."),
    m: int = typer.Option(..., "--m", help="Columns."),
    seed: int | None = typer.Option(None, "--seed", help="Scramble with random factors."),
    out: Path = typer.Option(Path("."), "--out", help="Output directory."),
    output_format: OutputFormat | None = typer.Option(None, "--format", help="text or json."),
) -> None:
    """Pair with E*Q = Q*E >= 0 and prescribed left minimal indices (L = -I)."""
    state = _state(ctx)
    generator = state.container(None).generator_service
    try:
        try:
            etas = [int(x) for x in eta.split(",") if x.strip()]
        except ValueError as e:
            raise InvalidInput(f"--eta must be comma-separated integers, got {eta!r}") from e
        pencil = generator.left_indices(etas, n, m, seed)
        manifest = generator.export(pencil, out)
    except DhPencilError as e:
        raise _fail(e) from e
    _emit({"name": pencil.name, "manifest": str(manifest)}, output_format, state)


@generate_app.command("random")
def generate_random(
    ctx: typer.Context,
    n: int = typer.Option(..., "--n", help="Rows."),
    m: int = typer.Option(..., "--m", help="Columns."),
    seed: int | None = typer.Option(None, "--seed", help="Random seed (settings default otherwise)."),
    regular: bool = typer.Option(False, "--regular", help="Square regular lambda E - Q."),
    complex_field: bool = typer.Option(False, "--complex", help="Complex data."),
    out: Path = typer.Option(Path("."), "--out", help="Output directory."),
    output_format: OutputFormat | None = typer.Option(None, "--format", help="text or json."),
) -> None:
    """Random structured pencil with zero left minimal indices in lambda E - Q."""
    state = _state(ctx)
    container = state.container(None)
    try:
        pencil = container.generator_service.random(
            n, m, container.settings_service.seed(seed), regular=regular, complex_field=complex_field
        )
        manifest = container.generator_service.export(pencil, out)
    except DhPencilError as e:
        raise _fail(e) from e
    _emit({"name": pencil.name, "manifest": str(manifest)}, output_format, state)


def main(argv: list[str] | None = None) -> int:
    """Run the application and return its exit code."""
    try:
        app(args=argv, prog_name="dh-pencil")
    except SystemExit as e:
        if e.code is None:
            return EXIT_OK
        return e.code if isinstance(e.code, int) else EXIT_INPUT
    return EXIT_OK


__all__ = ["app", "exit_code_for_error", "main"]
