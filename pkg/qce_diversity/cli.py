"""
Command-line interface for QCE Diversity
"""
import functools
import math
import re
import sys
from pathlib import Path

import click
from rich.console import Console
from rich.table import Table

from qce_diversity import __version__
from qce_diversity.exceptions import ConfigError, QceError
from qce_diversity.utils.logging import configure_logging

console = Console()

EXIT_CONFIG_ERROR = 2
EXIT_RUNTIME_ERROR = 3

_LABEL = re.compile(r"N(?P<n>\d+)_M(?P<m>\d+)_L(?P<l>\d+|inf)")


def handle_errors(command):
    """Map configuration errors to exit status 2 and runtime errors to 3"""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except ConfigError as e:
            console.print(f"[bold red]✗ Configuration error: {e}[/bold red]")
            sys.exit(EXIT_CONFIG_ERROR)
        except (QceError, OSError) as e:
            console.print(f"[bold red]✗ {type(e).__name__}: {e}[/bold red]")
            sys.exit(EXIT_RUNTIME_ERROR)

    return wrapper


def system_options(command):
    """Flags shared by commands that build SystemConfig variants"""
    options = [
        click.option('--config', 'config_path', type=click.Path(), help='YAML configuration file'),
        click.option('--n', 'n', type=int, help='Number of transmit antennas N'),
        click.option('--m', 'm', type=int, help='PSK order M'),
        click.option('--l', 'l', help="Quantization levels L: integer, 'inf' or a comma list"),
        click.option('--snr-db', 'snr_db', help='SNR grid in dB: comma list or lo:step:hi'),
        click.option('--total-power', 'total_power', type=float, help='Total transmit power P_T'),
        click.option('--trials', type=int, help='Trials per SNR point'),
        click.option('--seed', type=int, help='Master seed (64-bit unsigned)'),
        click.option('--min-errors', 'min_errors', type=int, help='Early-stop error count (0 disables)'),
        click.option('--workers', type=int, help='Worker threads'),
        click.option('--alpha-samples', 'alpha_samples', type=int,
                     help='Safety-margin samples for the bound columns (0 disables)'),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _load_values(config_path, **overrides):
    from qce_diversity.config import ConfigValues, load_config_file

    if config_path:
        if not Path(config_path).exists():
            raise ConfigError(f"configuration file not found: {config_path}", field='config')
        values = load_config_file(config_path)
        console.print(f"✓ Configuration loaded from {config_path}")
    else:
        values = ConfigValues()
    return values.override(**overrides)


@click.group()
@click.version_option(version=__version__)
@click.option('--verbose', is_flag=True, help='Debug logging')
def main(verbose):
    """QCE Diversity - SER simulation and diversity analysis of quantized constant-envelope precoding"""
    configure_logging(verbose)


@main.command()
@system_options
@click.option('--out', type=click.Path(), help='Output directory')
@click.option('--fit-window', 'fit_window', help='Diversity fit window in dB: lo,hi')
@handle_errors
def run(config_path, out, fit_window, **overrides):
    """Simulate every L variant, write CSVs and a summary"""
    from qce_diversity.analysis.experiment import ExperimentRunner, ExperimentSpec

    values = _load_values(config_path, out=out, fit_window=fit_window, **overrides)
    spec = ExperimentSpec.from_values(values)

    console.print("[bold green]Starting QCE diversity experiment[/bold green]")
    console.print(f"Variants: {', '.join(v.label for v in spec.variants)}")
    runner = ExperimentRunner(spec)
    written = runner.run()

    display_experiment_summary(runner.results)
    console.print(f"\n[bold green]✓ Wrote {len(written)} files to {spec.output_dir}[/bold green]")
    for path in written:
        console.print(f"  • {path}")


@main.command()
@system_options
@click.option('--panels', type=int, default=64, show_default=True, help='Craig quadrature panels')
@handle_errors
def bounds(config_path, panels, **overrides):
    """Print analytic bounds across the SNR grid without simulating"""
    from qce_diversity.config import build_system_configs, load_alpha_samples
    from qce_diversity.simulation.engine import bound_rows
    from qce_diversity.theory.analytics import (
        c0_margin,
        craig_lower_LgtM,
        craig_upper_LgtM,
        diversity_regime,
        predicted_diversity,
    )

    values = _load_values(config_path, **overrides)
    alpha_samples = load_alpha_samples(values)
    for config in build_system_configs(values):
        regime = diversity_regime(config)
        header = f"\n[bold]{config.label}[/bold]: predicted diversity {predicted_diversity(config)} ({regime})"
        if regime == 'full':
            header += f", c0 = {c0_margin(config.psk_order, config.quant_levels):.6f}"
        console.print(header)

        grid = config.snr_grid_db
        rows = bound_rows(config, grid, alpha_samples) if alpha_samples else [None] * len(grid)

        table = Table(show_header=True, header_style="bold magenta")
        for name in ("SNR [dB]", "Lower", "Upper", "up1", "Craig upper", "Craig lower", "lb1", "Floor"):
            table.add_column(name, justify="right")
        for snr_db, row in zip(grid, rows):
            craig = ('-', '-')
            if regime == 'full':
                craig = (_fmt(craig_upper_LgtM(config, snr_db, panels)),
                         _fmt(craig_lower_LgtM(config, snr_db, panels)))
            table.add_row(
                f"{snr_db:g}",
                _fmt(row.lower if row else None),
                _fmt(row.upper if row else None),
                _fmt(row.up1 if row else None),
                *craig,
                _fmt(row.lb1 if row else None),
                _fmt(row.floor if row else None),
            )
        console.print(table)


@main.command()
@click.argument('csv_path', type=click.Path())
@click.option('--n', 'n', type=int, help='Number of antennas (read from the file name if omitted)')
@click.option('--m', 'm', type=int, help='PSK order (read from the file name if omitted)')
@click.option('--l', 'l', help='Quantization levels (read from the file name if omitted)')
@click.option('--fit-window', 'fit_window', help='Diversity fit window in dB: lo,hi')
@click.option('--min-errors', 'min_errors', type=int, default=50, show_default=True,
              help='Errors a point needs to enter the fit')
@handle_errors
def fit(csv_path, n, m, l, fit_window, min_errors):
    """Re-fit diversity order and floor from an emitted CSV"""
    from qce_diversity.analysis.diversity import fit_diversity, floor_detect
    from qce_diversity.config import parse_fit_window
    from qce_diversity.exceptions import InsufficientDataError
    from qce_diversity.generators.report_generator import read_csv

    config = _config_for_csv(Path(csv_path), n, m, l)
    curve = read_csv(csv_path, config)
    window = parse_fit_window(fit_window)

    table = Table(show_header=True, header_style="bold magenta")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", justify="right", style="yellow")
    estimate = fit_diversity(curve, window, min_errors)
    table.add_row("Predicted diversity", str(estimate.predicted))
    table.add_row("Fitted slope", f"{estimate.slope:.4f}")
    table.add_row("Fit window [dB]", f"{estimate.fit_window_db[0]:g} to {estimate.fit_window_db[1]:g}")
    table.add_row("Residual RMS", f"{estimate.residual_rms:.4g}")
    table.add_row("Points", str(estimate.n_points))
    try:
        floor = floor_detect(curve)
        table.add_row("Floor detected", "yes" if floor.detected else "no")
        table.add_row("Floor estimate", f"{floor.floor:.4g}")
    except InsufficientDataError as e:
        table.add_row("Floor detected", f"n/a ({e})")
    console.print(table)


def _config_for_csv(path: Path, n, m, l):
    import pandas as pd

    from qce_diversity.core.model import SystemConfig, parse_levels

    match = _LABEL.search(path.stem)
    if match:
        n = n if n is not None else int(match.group('n'))
        m = m if m is not None else int(match.group('m'))
        l = l if l is not None else match.group('l')
    if n is None or m is None or l is None:
        raise ConfigError("pass --n, --m and --l or use a file named like N2_M4_L5.csv", field='csv')

    from qce_diversity.exceptions import InvalidArgumentError

    try:
        frame = pd.read_csv(path, usecols=['snr_db', 'trials'])
    except ValueError as e:
        raise InvalidArgumentError(f"{path}: {e}") from None
    return SystemConfig(
        n_antennas=n,
        psk_order=m,
        quant_levels=parse_levels(l),
        snr_grid_db=tuple(frame['snr_db']),
        trials=int(frame['trials'].max()),
        seed=0,
    )


def _fmt(value) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "-"
    return f"{value:.4e}"


def display_experiment_summary(results):
    """Display predicted and fitted diversity per variant"""
    console.print("\n[bold]Experiment Summary:[/bold]\n")

    table = Table(show_header=True, header_style="bold magenta")
    table.add_column("Variant", style="cyan")
    table.add_column("Predicted d", justify="right", style="green")
    table.add_column("Fitted slope", justify="right", style="yellow")
    table.add_column("Floor", justify="right")

    for variant in results.get('variants', []):
        diversity = variant.get('diversity')
        floor = variant.get('floor')
        table.add_row(
            variant['label'],
            variant['predicted'],
            f"{diversity['slope']:.3f}" if diversity else "n/a",
            (f"{floor['estimate']:.3g}" if floor['detected'] else "no") if floor else "n/a",
        )

    console.print(table)


if __name__ == '__main__':
    main()
