"""
Command-line harness: correspondence tables, seeded campaigns and the
verification suites.

Exit status: 0 clean, 1 usage or internal error, 2 eavesdropper alarm.
"""

import logging
import sys

import click

from config import Config, merge_settings
from models import Protocol, ProtocolConfig
from utils.campaign import run_campaign
from utils.errors import SimulationError
from utils.reports import REPORT_FORMATS, TABLE_FORMATS, ReportGenerator
from utils.verification import run_verification

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_ALARM = 2


class HarnessGroup(click.Group):
    """Maps click's usage errors to exit status 1 so that 2 stays reserved for the alarm."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            status = super().main(
                args=args, prog_name=prog_name, complete_var=complete_var, standalone_mode=False, **extra
            )
        except click.exceptions.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_ERROR)
        except click.ClickException as e:
            e.show()
            sys.exit(EXIT_ERROR)
        except (SimulationError, OSError) as e:
            click.echo(f"Error: {e}", err=True)
            sys.exit(EXIT_ERROR)
        sys.exit(status if isinstance(status, int) else EXIT_OK)


def _emit(text: str, output) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        click.echo(text, nl=False)


@click.group(cls=HarnessGroup)
@click.option("-v", "--verbose", is_flag=True, help="Log progress at DEBUG level.")
def cli(verbose):
    """Entanglement-swapping key distribution and secret sharing simulator."""
    logging.basicConfig(
        level="DEBUG" if verbose else Config.CLI_LOG_LEVEL,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


@cli.command()
@click.argument("which", type=click.Choice(["I", "II", "III"], case_sensitive=False))
@click.option("--format", "format_type", type=click.Choice(TABLE_FORMATS), default="csv", show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), help="Write here instead of standard output.")
def tables(which, format_type, output):
    """Regenerate correspondence table I, II or III."""
    frame = ReportGenerator.table_frame(which)
    if format_type == "xlsx":
        if not output:
            raise click.UsageError("--format xlsx requires --output")
        ReportGenerator.export_to_excel(frame, output, sheet_name=f"Table {which.upper()}")
        return EXIT_OK
    _emit(ReportGenerator.render_table(frame, format_type), output)
    return EXIT_OK


@cli.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), help="Flat KEY=value settings file.")
@click.option("--protocol", type=click.Choice([p.value for p in Protocol]),
              help=f"Protocol to run [default: {Config.DEFAULT_PROTOCOL}]")
@click.option("--parties", type=int, help="Number of parties including Alice [default: protocol's own]")
@click.option("--rounds", type=int, help=f"Rounds to simulate [default: {Config.DEFAULT_ROUNDS}]")
@click.option("--seed", type=int, help=f"64-bit seed [default: {Config.DEFAULT_SEED}]")
@click.option("--eve", help=f"none, intercept, two_party_intercept or multiparty_intercept [default: {Config.DEFAULT_EVE}]")
@click.option("--eve-policy", help=f"forward_captured, forward_ancilla or random_bell_guess [default: {Config.DEFAULT_EVE_POLICY}]")
@click.option("--eve-targets", help="Comma-separated parties whose channels Eve attacks [default: all]")
@click.option("--ancilla-label", help=f"Bell label of Eve's ancilla pairs [default: {Config.DEFAULT_ANCILLA_LABEL}]")
@click.option("--compare-fraction", type=float,
              help=f"Fraction of kept rounds sacrificed for comparison [default: {Config.DEFAULT_COMPARE_FRACTION}]")
@click.option("--announce-basis/--no-announce-basis", default=None,
              help="GHZ protocol: Alice announces the right measurement [default: off]")
@click.option("--initial-labels", help="Comma-separated public initial labels in layout order [default: all zeros]")
@click.option("--workers", type=int, help=f"Worker threads [default: {Config.DEFAULT_WORKERS}]")
@click.option("--format", "format_type", type=click.Choice(REPORT_FORMATS),
              help=f"Report format [default: {Config.DEFAULT_FORMAT}]")
@click.option("--output", type=click.Path(dir_okay=False), help="Write the report here.")
@click.option("--transcript", type=click.Path(dir_okay=False), help="Write every round as JSON Lines.")
def run(config_path, output, transcript, format_type, **flags):
    """Run a seeded campaign; exits 2 when the key comparison raises the alarm."""
    settings = merge_settings({**flags, "format": format_type}, config_path)
    format_type = settings.pop("format")
    if format_type not in REPORT_FORMATS:
        raise click.UsageError(f"--format must be one of {', '.join(REPORT_FORMATS)}")

    config = ProtocolConfig.from_settings(settings)
    report, records = run_campaign(config)
    _emit(ReportGenerator.render_campaign(report, format_type), output)
    if transcript:
        with open(transcript, "w", encoding="utf-8") as handle:
            for line in ReportGenerator.transcript_lines(records):
                handle.write(line + "\n")
    return EXIT_ALARM if report.alarm else EXIT_OK


@cli.command()
def verify():
    """Run the verification suites; exits 1 if any fails."""
    results = run_verification()
    for result in results:
        click.echo(result.line())
    return EXIT_OK if all(result.passed for result in results) else EXIT_ERROR


@cli.command()
@click.option("--rounds", type=int, default=2000, show_default=True)
@click.option("--seed", type=int, default=Config.DEFAULT_SEED, show_default=True)
@click.option("--output", type=click.Path(dir_okay=False))
def compare(rounds, seed, output):
    """Detection rates of every protocol under intercept-substitute, every kept round compared."""
    reports = []
    for protocol in Protocol:
        config = ProtocolConfig.from_settings({
            "protocol": protocol.value,
            "eve": "intercept",
            "rounds": rounds,
            "seed": seed,
            "compare_fraction": 1.0,
        })
        reports.append(run_campaign(config)[0])
    frame = ReportGenerator.campaign_summary(reports)
    _emit(frame.to_csv(index=False, lineterminator="\n"), output)
    return EXIT_OK


if __name__ == "__main__":
    cli()
