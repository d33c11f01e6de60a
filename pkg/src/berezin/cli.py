"""Experiment runner: every verification is a subcommand with pass/fail exit.

Exit codes: 0 all rows pass, 1 a row failed, 2 usage error, 3 a budget or
accuracy error interrupted the computation.  Reports are deterministic for a
fixed config (timestamps live in a separate metadata block).
"""

from __future__ import annotations

import json
import os
import sys

import click

from .experiments import EXPERIMENTS, Report, run_experiment
from .quadrature import AccuracyError

_KNOWN_KEYS = {"experiment", "parameters", "output", "format"}


def _load_config(path):
    with open(path) as fh:
        doc = json.load(fh)
    unknown = set(doc) - _KNOWN_KEYS
    if unknown:
        raise click.UsageError(f"unknown config keys: {sorted(unknown)}")
    params = doc.get("parameters", {})
    if not isinstance(params, dict):
        raise click.UsageError("'parameters' must be an object")
    for key, val in params.items():
        if key.startswith("tol") and not (isinstance(val, (int, float)) and val > 0):
            raise click.UsageError(f"tolerance {key} must be positive")
    return doc


def _parse_overrides(pairs):
    out = {}
    for item in pairs:
        if "=" not in item:
            raise click.UsageError(f"override {item!r} is not key=value")
        key, val = item.split("=", 1)
        try:
            out[key] = json.loads(val)
        except json.JSONDecodeError:
            out[key] = val
    return out


def _emit(report: Report, output, fmt):
    text = report.to_json() if fmt == "json" else report.to_csv()
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    for line in report.summary_lines():
        click.echo(line)
    worker_env = os.environ.get("BEREZIN_WORKERS")
    if worker_env:
        click.echo(f"# workers={worker_env} (informational; evaluation is "
                   "vectorized and deterministic)")
    click.echo(f"# experiment={report.experiment} pass={report.passed} "
               f"runtime={report.runtime_s:.1f}s")


@click.group()
def main():
    """Desk-scale checks for the equivariant Berezin calculus."""


@main.command()
@click.argument("experiment")
@click.option("--config", type=click.Path(exists=True), default=None,
              help="JSON config file; flags override its parameters.")
@click.option("--output", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
              default="json")
@click.option("--profile", type=click.Choice(["smoke", "full"]),
              default="smoke", help="for 'all': caps the heavy integrals")
@click.option("--param", "-p", multiple=True,
              help="parameter override, key=value (JSON-parsed value)")
def check(experiment, config, output, fmt, profile, param):
    """Run one named experiment (or 'all') and exit 0 only if it passes."""
    params = {}
    if config:
        doc = _load_config(config)
        params.update(doc.get("parameters", {}))
        output = output or doc.get("output")
        fmt = doc.get("format", fmt)
    params.update(_parse_overrides(param))

    names = sorted(EXPERIMENTS) if experiment == "all" else [experiment]
    if experiment == "all" and profile == "smoke":
        params.setdefault("configs", 40)
        params.setdefault("samples", 20_000)
        params.setdefault("word_pairs", 25)
    ok = True
    try:
        for name in names:
            if name not in EXPERIMENTS:
                raise click.UsageError(
                    f"unknown experiment {name!r}; known: "
                    f"{', '.join(sorted(EXPERIMENTS))}")
            rep = run_experiment(name, params)
            _emit(rep, output if len(names) == 1 else None, fmt)
            ok = ok and rep.passed
    except AccuracyError as exc:
        click.echo(f"# accuracy/budget error: {exc}", err=True)
        sys.exit(3)
    sys.exit(0 if ok else 1)


@main.command()
@click.argument("experiment")
@click.option("--grid", required=True,
              help="parameter grid, e.g. 'r=8,16,32' or 'r=2,4;s=0.3,0.5'")
@click.option("--output", type=click.Path(), default=None)
def sweep(experiment, grid, output):
    """Run an experiment over a 1- or 2-parameter grid; emit one CSV table."""
    import csv as _csv
    import io
    import itertools

    if experiment not in EXPERIMENTS:
        raise click.UsageError(f"unknown experiment {experiment!r}")
    axes = []
    for part in grid.split(";"):
        key, _, vals = part.partition("=")
        if not vals:
            raise click.UsageError(f"bad grid component {part!r}")
        axes.append((key.strip(), [json.loads(v) for v in vals.split(",")]))
    if len(axes) > 2:
        raise click.UsageError("sweeps cover at most two parameters")

    buf = io.StringIO()
    writer = None
    ok = True
    for combo in itertools.product(*[vals for _, vals in axes]):
        params = {key: val for (key, _), val in zip(axes, combo)}
        rep = run_experiment(experiment, params)
        ok = ok and rep.passed
        for row in rep.rows:
            record = {**{k: v for k, v in params.items()}, **row.as_dict()}
            if writer is None:
                writer = _csv.DictWriter(buf, fieldnames=list(record))
                writer.writeheader()
            writer.writerow(record)
    text = buf.getvalue()
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    click.echo(text, nl=False)
    sys.exit(0 if ok else 1)


@main.group()
def calibrate():
    """Calibration steps that pin frozen constants."""


@calibrate.command("haar")
@click.option("--t-max", type=float, default=0.993)
def calibrate_haar_cmd(t_max):
    """Fix the Haar chart normalization at the r = 4 reference point."""
    from .repn import calibrate_haar

    kappa = calibrate_haar(t_max=t_max)
    click.echo(json.dumps({"kappa": kappa, "reference": "formal dimension "
                           "3/pi at r=4", "closed_form": 1 / (2 * 3.141592653589793)}))


@main.command()
@click.option("--input", "input_", type=click.Path(exists=True), required=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
              default="json")
def report(input_, fmt):
    """Re-emit a stored JSON report as json or csv."""
    with open(input_) as fh:
        doc = json.load(fh)
    if fmt == "json":
        click.echo(json.dumps(doc, indent=2, sort_keys=True))
        return
    import csv as _csv
    import io

    buf = io.StringIO()
    writer = _csv.DictWriter(buf, fieldnames=[
        "name", "observed", "reference", "provenance", "error", "tolerance",
        "pass"])
    writer.writeheader()
    for row in doc.get("rows", []):
        writer.writerow(row)
    click.echo(buf.getvalue(), nl=False)


if __name__ == "__main__":
    main()
