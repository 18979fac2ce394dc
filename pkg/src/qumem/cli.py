"""
qumem CLI - mutual information of qudit channels with correlated noise.
"""

from pathlib import Path
from typing import Any, Callable, List, Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape
from rich.table import Table
from rich import print as rprint

# Load environment variables early
from dotenv import load_dotenv
load_dotenv()

from .core.config import Config
from .core.runner import ExperimentRunner
from .core.states import max_entangled_alpha, parse_input_selector
from .exceptions import InvalidParameterError, QumemError
from .models.channel import ChannelSpec, Family, eta_from_p
from .models.results import Command, Method, OutputFormat, RunConfig

# Initialize Typer app and Rich console
app = typer.Typer(
    name="qumem",
    help="Mutual information of qudit channels with correlated noise",
    add_completion=False,
    rich_markup_mode="rich",
)
# data goes to stdout, diagnostics to stderr
console = Console(stderr=True)

# Global config instance
config: Optional[Config] = None
config_file_path: Optional[Path] = None
debug_mode: bool = False
thread_count: Optional[int] = None

EXIT_UNEXPECTED = 1
EXIT_INVALID = 2


def get_config() -> Config:
    """Get or initialize global config."""
    global config
    if config is None:
        overrides = {} if thread_count is None else {"threads": thread_count}
        config = Config(config_file=config_file_path, debug=debug_mode, **overrides)
    return config


@app.callback(invoke_without_command=True)
def main(
    ctx: typer.Context,
    version: bool = typer.Option(False, "--version", "-v", help="Show version and exit"),
    config_file: Optional[Path] = typer.Option(None, "--config", "-c", help="Path to config file"),
    debug: bool = typer.Option(False, "--debug", help="Enable debug mode"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads (0 = machine parallelism)", min=0),
):
    """
    qumem - mutual information of qudit channels with correlated noise.

    Compares product and maximally entangled inputs on two uses of a QD or
    QCD channel whose noise is correlated between the uses, and emits CSV or
    JSON for every computation.
    """
    if version:
        from . import __version__
        rprint(f"qumem version {__version__}")
        raise typer.Exit()
    if ctx.invoked_subcommand is None:
        typer.echo(ctx.get_help())
        raise typer.Exit()

    # Set global config parameters
    global config_file_path, debug_mode, thread_count, config
    config_file_path = config_file
    debug_mode = debug
    thread_count = threads
    config = None


def _fail(message: str, code: int) -> None:
    console.print(f"[bold red]Error:[/bold red] {escape(message)}", highlight=False, soft_wrap=True)
    raise typer.Exit(code)


def _one_line(e: Exception) -> str:
    if isinstance(e, ValidationError):
        first = e.errors()[0]
        msg = str(first.get("msg", e)).replace("Value error, ", "")
        loc = ".".join(str(part) for part in first.get("loc", ()))
        return f"{loc}: {msg}" if loc else msg
    return str(e).splitlines()[0] if str(e) else type(e).__name__


def _execute(build: Callable[[Config], RunConfig]) -> None:
    """Build a run configuration, run it, and map failures to exit codes."""
    cfg = get_config()
    try:
        run_config = build(cfg)
        result = ExperimentRunner(cfg).run(run_config)
    except (InvalidParameterError, ValidationError) as e:
        _fail(_one_line(e), EXIT_INVALID)
    except QumemError as e:
        if cfg.debug:
            console.print_exception()
        _fail(_one_line(e), EXIT_UNEXPECTED)
    except Exception as e:
        if cfg.debug:
            console.print_exception()
        _fail(f"{type(e).__name__}: {_one_line(e)}", EXIT_UNEXPECTED)
    else:
        if run_config.out is None:
            typer.echo(result.text, nl=False)
        if result.exit_code:
            _fail(result.message, result.exit_code)


def _resolve_eta(family: Family, d: int, eta: Optional[float], p: Optional[float]) -> float:
    if eta is not None and p is not None:
        raise InvalidParameterError("pass either --eta or --p, not both")
    if p is not None:
        return eta_from_p(family, d, p)
    if eta is None:
        raise InvalidParameterError("missing noise parameter: pass --eta or --p")
    return eta


def _parse_list(text: Optional[str], kind: Callable[[str], Any], name: str) -> List[Any]:
    if not text:
        return []
    try:
        return [kind(item.strip()) for item in text.split(",") if item.strip()]
    except ValueError:
        raise InvalidParameterError(f"could not parse {name} {text!r}")


def _parse_alpha(d: int) -> Callable[[str], float]:
    def parse(item: str) -> float:
        return max_entangled_alpha(d) if item.lower() == "max" else float(item)
    return parse


def _common(
    cfg: Config,
    command: Command,
    family: Family,
    d: int,
    eta: Optional[float],
    p: Optional[float],
    output_format: Optional[OutputFormat],
    out: Optional[Path],
    **fields: Any,
) -> RunConfig:
    resolved = _resolve_eta(family, d, eta, p)
    # fail on the channel parameters before anything runs
    ChannelSpec(family=family, d=d, eta=resolved, mu=fields.get("mu", 0.0), nu=fields.get("nu", 0.0))
    return RunConfig(
        command=command,
        family=family,
        d=d,
        eta=resolved,
        output_format=output_format or OutputFormat(cfg.output_format),
        out=out,
        **fields,
    )


@app.command()
def mi(
    family: Family = typer.Option(Family.QD, "--family", "-f", help="Noise family"),
    d: int = typer.Option(2, "--d", help="Single-use dimension", min=2),
    eta: Optional[float] = typer.Option(None, "--eta", help="Noise parameter"),
    p: Optional[float] = typer.Option(None, "--p", help="Identity weight, converted to eta"),
    mu: float = typer.Option(0.0, "--mu", help="Memory parameter"),
    nu: float = typer.Option(0.0, "--nu", help="Phase-correlation parameter"),
    input_: str = typer.Option("entangled", "--input", "-i", help="product, entangled, ansatz:<alpha|max> or schmidt:<file>"),
    method: Method = typer.Option(Method.AUTO, "--method", help="closed, oracle or auto"),
    per_use: Optional[bool] = typer.Option(None, "--per-use/--total", help="Report I per channel use"),
    allow_large: bool = typer.Option(False, "--allow-large", help="Lift the oracle dimension cap"),
    output_format: Optional[OutputFormat] = typer.Option(None, "--format", help="csv or json"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output file (default stdout)"),
):
    """
    Mutual information, output entropy and spectrum at one point.

    Examples:

        qumem mi --family qd --d 2 --eta 1 --mu 0.5 --input entangled

        qumem mi --family qcd --d 3 --p 0.2 --mu 0.3 --input ansatz:max --format json
    """
    _execute(lambda cfg: _common(
        cfg, Command.MI, family, d, eta, p, output_format, out,
        mu=mu, nu=nu, input=parse_input_selector(input_, d), method=method,
        per_use=cfg.per_use if per_use is None else per_use, allow_large=allow_large,
    ))


@app.command()
def sweep(
    family: Family = typer.Option(Family.QD, "--family", "-f", help="Noise family"),
    d: int = typer.Option(2, "--d", help="Single-use dimension", min=2),
    eta: Optional[float] = typer.Option(None, "--eta", help="Noise parameter"),
    p: Optional[float] = typer.Option(None, "--p", help="Identity weight, converted to eta"),
    nu: float = typer.Option(0.0, "--nu", help="Phase-correlation parameter"),
    input_: str = typer.Option("entangled", "--input", "-i", help="product, entangled, ansatz:<alpha|max> or schmidt:<file>"),
    grid: Optional[int] = typer.Option(None, "--grid", help="Number of mu points", min=2),
    method: Method = typer.Option(Method.AUTO, "--method", help="closed, oracle or auto"),
    per_use: Optional[bool] = typer.Option(None, "--per-use/--total", help="Report I per channel use"),
    allow_large: bool = typer.Option(False, "--allow-large", help="Lift the oracle dimension cap"),
    output_format: Optional[OutputFormat] = typer.Option(None, "--format", help="csv or json"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output file (default stdout)"),
):
    """
    I(mu) on a uniform grid over [0, 1].

    Examples:

        qumem sweep --family qcd --d 2 --eta 0.4 --input product --grid 11
    """
    _execute(lambda cfg: _common(
        cfg, Command.SWEEP, family, d, eta, p, output_format, out,
        nu=nu, input=parse_input_selector(input_, d), grid=grid or cfg.sweep_grid,
        method=method, per_use=cfg.per_use if per_use is None else per_use,
        allow_large=allow_large,
    ))


@app.command()
def crossover(
    family: Family = typer.Option(Family.QD, "--family", "-f", help="Noise family"),
    d: int = typer.Option(2, "--d", help="Single-use dimension", min=2),
    eta: Optional[float] = typer.Option(None, "--eta", help="Noise parameter"),
    p: Optional[float] = typer.Option(None, "--p", help="Identity weight, converted to eta"),
    nu: float = typer.Option(0.0, "--nu", help="Phase-correlation parameter"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Final bracket width"),
    output_format: Optional[OutputFormat] = typer.Option(None, "--format", help="csv or json"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output file (default stdout)"),
):
    """
    Crossover point mu_c where entangled inputs overtake product inputs.

    Examples:

        qumem crossover --family qcd --d 2 --eta 0.4
    """
    _execute(lambda cfg: _common(
        cfg, Command.CROSSOVER, family, d, eta, p, output_format, out,
        nu=nu, tol=tol or cfg.crossover_tol,
    ))


@app.command("crossover-table")
def crossover_table(
    family: Family = typer.Option(Family.QD, "--family", "-f", help="Noise family"),
    d_list: str = typer.Option("2,4,6,8,10", "--d-list", help="Comma-separated dimensions"),
    eta: Optional[float] = typer.Option(None, "--eta", help="Noise parameter"),
    p: Optional[float] = typer.Option(None, "--p", help="Identity weight, converted to eta"),
    nu_list: str = typer.Option("0,1", "--nu-list", help="Comma-separated nu values"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Final bracket width"),
    output_format: Optional[OutputFormat] = typer.Option(None, "--format", help="csv or json"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output file (default stdout)"),
):
    """
    mu_c for every (d, nu) pair.

    Examples:

        qumem crossover-table --eta 0.8 --d-list 2,4,6 --nu-list 0,0.5,1
    """
    def build(cfg: Config) -> RunConfig:
        dims = _parse_list(d_list, int, "--d-list")
        if not dims:
            raise InvalidParameterError("--d-list needs at least one dimension")
        if p is not None and len(set(dims)) > 1:
            raise InvalidParameterError("--p maps to a different eta per dimension; pass --eta")
        return _common(
            cfg, Command.CROSSOVER_TABLE, family, dims[0], eta, p, output_format, out,
            d_list=dims, nu_list=_parse_list(nu_list, float, "--nu-list"),
            tol=tol or cfg.crossover_tol,
        )

    _execute(build)


@app.command("alpha-sweep")
def alpha_sweep(
    family: Family = typer.Option(Family.QCD, "--family", "-f", help="Noise family"),
    d: int = typer.Option(3, "--d", help="Single-use dimension", min=2),
    eta: Optional[float] = typer.Option(0.4, "--eta", help="Noise parameter"),
    p: Optional[float] = typer.Option(None, "--p", help="Identity weight, converted to eta"),
    nu: float = typer.Option(1.0, "--nu", help="Phase-correlation parameter"),
    alpha_list: Optional[str] = typer.Option(None, "--alpha-list", help="Comma-separated angles; 'max' for arccos(1/sqrt(d))"),
    grid: Optional[int] = typer.Option(None, "--grid", help="Number of mu points", min=2),
    per_use: Optional[bool] = typer.Option(None, "--per-use/--total", help="Report I per channel use"),
    output_format: Optional[OutputFormat] = typer.Option(None, "--format", help="csv or json"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output file (default stdout)"),
):
    """
    Ansatz curves cos(a)|00> + sin(a)/sqrt(d-1) sum |jj> for several angles.

    Examples:

        qumem alpha-sweep --d 3 --eta 0.4 --alpha-list 0,0.3927,0.7854,max
    """
    _execute(lambda cfg: _common(
        cfg, Command.ALPHA_SWEEP, family, d, None if p is not None else eta, p,
        output_format, out,
        nu=nu, alpha_list=_parse_list(alpha_list, _parse_alpha(d), "--alpha-list"),
        grid=grid or cfg.sweep_grid, per_use=cfg.per_use if per_use is None else per_use,
    ))


@app.command("validate")
def validate_cmd(
    family: Family = typer.Option(Family.QD, "--family", "-f", help="Noise family"),
    d: int = typer.Option(2, "--d", help="Single-use dimension", min=2),
    eta: Optional[float] = typer.Option(None, "--eta", help="Noise parameter"),
    p: Optional[float] = typer.Option(None, "--p", help="Identity weight, converted to eta"),
    mu: float = typer.Option(0.0, "--mu", help="Memory parameter"),
    nu: float = typer.Option(0.0, "--nu", help="Phase-correlation parameter"),
    input_: str = typer.Option("entangled", "--input", "-i", help="product, entangled, ansatz:<alpha|max> or schmidt:<file>"),
    allow_large: bool = typer.Option(False, "--allow-large", help="Lift the oracle dimension cap"),
    output_format: Optional[OutputFormat] = typer.Option(None, "--format", help="csv or json"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output file (default stdout)"),
):
    """
    Check the closed forms against the brute-force oracle and list errata.

    Exits with status 3 when a deviation exceeds the validation tolerance.

    Examples:

        qumem validate --family qcd --d 5 --eta 0.8 --mu 0.7 --nu 0.3 --input entangled
    """
    _execute(lambda cfg: _common(
        cfg, Command.VALIDATE, family, d, eta, p, output_format, out,
        mu=mu, nu=nu, input=parse_input_selector(input_, d), allow_large=allow_large,
    ))


@app.command()
def figure(
    name: str = typer.Argument(..., help="fig1, fig2, fig3a, fig3b, fig4a, fig4b or fig5"),
    family: Optional[Family] = typer.Option(None, "--family", "-f", help="Override the figure's family"),
    d_max: Optional[int] = typer.Option(None, "--d-max", help="Largest d for fig4a/fig4b", min=2),
    grid: Optional[int] = typer.Option(None, "--grid", help="Number of mu points", min=2),
    tol: Optional[float] = typer.Option(None, "--tol", help="Final bracket width"),
    per_use: Optional[bool] = typer.Option(None, "--per-use/--total", help="Report I per channel use"),
    output_format: Optional[OutputFormat] = typer.Option(None, "--format", help="csv or json"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output file (default stdout)"),
):
    """
    Data behind one of the figures.

    Examples:

        qumem figure fig1 --grid 101

        qumem figure fig4a --d-max 12 --family qcd
    """
    _execute(lambda cfg: RunConfig(
        command=Command.FIGURE,
        figure=name,
        family_override=family,
        d_max=d_max or cfg.figure_d_max,
        grid=grid or cfg.sweep_grid,
        tol=tol or cfg.crossover_tol,
        per_use=cfg.per_use if per_use is None else per_use,
        output_format=output_format or OutputFormat(cfg.output_format),
        out=out,
    ))


@app.command("config")
def config_cmd(
    show: bool = typer.Option(False, "--show", help="Show current configuration"),
    set_key: Optional[str] = typer.Option(None, "--set", help="Set configuration key"),
    value: Optional[str] = typer.Option(None, "--value", help="Configuration value"),
    reset: bool = typer.Option(False, "--reset", help="Reset to default configuration"),
):
    """
    Manage qumem configuration.

    Examples:

        # Show current config
        qumem config --show

        # Use the LAPACK eigensolver
        qumem config --set eigensolver --value lapack

        # Reset configuration
        qumem config --reset
    """
    cfg = get_config()

    try:
        if reset:
            cfg.reset_to_defaults()
            console.print("[green]Configuration reset to defaults.[/green]")
            return

        if set_key:
            if value is None:
                raise InvalidParameterError("--set needs --value")
            cfg.set(set_key, value)
            if not cfg.config_file:
                cfg.save()
            console.print(f"[green]Set {set_key} = {value}[/green]")
            return
    except (ValueError, ValidationError) as e:
        _fail(_one_line(e), EXIT_INVALID)

    show_config(cfg)


def show_config(cfg: Config):
    """Display current configuration."""
    table = Table(title="qumem Configuration")
    table.add_column("Setting", style="bold blue")
    table.add_column("Value", style="green")
    table.add_column("Description", style="dim")

    for name, field in type(cfg).model_fields.items():
        table.add_row(name, str(getattr(cfg, name)), field.description or "")

    console.print(table)
    if cfg.config_file:
        console.print(f"[dim]Loaded from {cfg.config_file}[/dim]")


if __name__ == "__main__":
    app()
