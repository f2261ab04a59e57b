"""Command line entry point: ``gfcech run <session>``."""

from __future__ import annotations

import sys

import click

from .fields import field_from_string
from .runner import run
from .session import SessionError, load_session


@click.group()
@click.version_option(package_name="artifact", prog_name="gfcech")
def main():
    """Čech and generalized-fractions homology workbench."""


@main.command("run")
@click.argument("session", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "json_out", type=click.Path(dir_okay=False), help="Write the JSON report here.")
@click.option("--csv", "csv_dir", type=click.Path(file_okay=False), help="Write one CSV per (task, spot).")
@click.option("--assert-hypotheses", is_flag=True, help="Exit nonzero on any negative verdict.")
@click.option("--seed", type=int, default=None, help="Override every task's seed.")
@click.option("--field", "field_name", default=None, help="Override the field: q or fp:P.")
def run_cmd(session, json_out, csv_dir, assert_hypotheses, seed, field_name):
    """Run every task of SESSION and print (or write) the report."""
    try:
        spec = load_session(session)
    except SessionError as exc:
        click.echo(f"{session}:{exc.line}:{exc.col}: {exc.message}", err=True)
        sys.exit(3)
    if field_name is not None:
        try:
            F = field_from_string(field_name)
        except ValueError as exc:
            raise click.BadParameter(str(exc), param_hint="--field")
        field_name = f"fp:{F.p}" if hasattr(F, "p") else "Q"
    report = run(spec, seed=seed, field_name=field_name)
    text = report.to_json()
    if json_out:
        with open(json_out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)
    if csv_dir:
        report.write_csv(csv_dir)
    for r in report.results:
        line = f"task {r.index} {r.task.kind}: {r.status}"
        line += f" ({r.error})" if r.error else f", verdict {r.verdict}"
        click.echo(line, err=True)
    sys.exit(report.exit_code(assert_hypotheses))


if __name__ == "__main__":
    main()
