"""Command line entry point: ``predictability <command> [options]``."""

import os
import sys

import click
import numpy as np

from . import _kernels
from .circuits import (
    BELEM_CNOT_ERROR,
    BELEM_READOUT_ERROR,
    NoiseModel,
    build_nrvnm_circuit_1q,
    build_nrvnm_circuit_nq,
    circuit_to_text,
)
from .errors import ConfigError
from .experiments import RunConfig, child_seeds, run_fig4_sweep, run_random_trios, write_csv
from .properties import format_report, run_properties
from .states import b2_basis, fourier_mub_partner, haar_random_pure, haar_random_unitary, random_basis
from .textio import write_matrix


def _noise(noise, cnot_error, readout_error):
    return NoiseModel(cnot_error, readout_error, noise)


def _emit(text, out):
    if out:
        with open(out, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _common(f):
    opts = [
        click.option("--seed", "seed", default=0, show_default=True, help="Master seed."),
        click.option("--shots", default=8192, show_default=True),
        click.option("--repetitions", default=4, show_default=True,
                     help="Independent shot batches averaged per point."),
        click.option("--noise/--no-noise", default=True, show_default=True),
        click.option("--cnot-error", default=BELEM_CNOT_ERROR, show_default=True,
                     help="Two-qubit depolarizing rate after each CNOT."),
        click.option("--readout-error", default=BELEM_READOUT_ERROR, show_default=True,
                     help="Independent bit-flip probability per readout bit."),
        click.option("--out", "out", default=None, help="Output path (default: stdout)."),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


@click.group()
def main():
    """Predictability/coherence simulations and checks."""


@main.command("random-trios")
@_common
@click.option("--trials", default=150, show_default=True)
@click.option("--dim", "dim", default=2, show_default=True, type=click.IntRange(2, 4))
@click.option("--mu/--random-y", default=True, show_default=True,
              help="Pair X with its Fourier partner or with an independent random basis.")
@click.option("--fixtures-dir", default=None,
              help="Also write each trial's state and bases in the matrix text format.")
def random_trios(seed, shots, repetitions, noise, cnot_error, readout_error, out, trials, dim,
                 mu, fixtures_dir):
    """Random (state, X, Y) trios: analytic and shot-estimated P and C."""
    cfg = RunConfig("random-trios", seed, trials, shots, dim, 13,
                    _noise(noise, cnot_error, readout_error), out, mu, repetitions)
    try:
        records = run_random_trios(cfg)
    except ConfigError as exc:
        raise click.UsageError(str(exc)) from exc
    if fixtures_dir:
        _write_fixtures(cfg, fixtures_dir)
    _emit(write_csv(records), out)


def _write_fixtures(cfg, directory):
    os.makedirs(directory, exist_ok=True)
    for i in range(cfg.trials):
        s_state, s_x, s_y, _ = child_seeds(cfg.master_seed + i, 4)
        x = random_basis(cfg.dimension, s_x)
        y = fourier_mub_partner(x) if cfg.mu else random_basis(cfg.dimension, s_y)
        write_matrix(os.path.join(directory, f"trial_{i:04d}_rho.txt"),
                     haar_random_pure(cfg.dimension, s_state))
        write_matrix(os.path.join(directory, f"trial_{i:04d}_x.txt"), x.vectors)
        write_matrix(os.path.join(directory, f"trial_{i:04d}_y.txt"), y.vectors)


@main.command("fig4-sweep")
@_common
@click.option("--theta-steps", default=13, show_default=True)
@click.option("--dim", "dim", default=4, show_default=True)
def fig4_sweep(seed, shots, repetitions, noise, cnot_error, readout_error, out, theta_steps, dim):
    """Two-qubit sweep: P in the computational basis, C of its dephasing in B2."""
    cfg = RunConfig("fig4-sweep", seed, 1, shots, dim, theta_steps,
                    _noise(noise, cnot_error, readout_error), out, True, repetitions)
    try:
        records = run_fig4_sweep(cfg)
    except ConfigError as exc:
        raise click.UsageError(str(exc)) from exc
    _emit(write_csv(records), out)


@main.command("verify")
@click.option("--seed", default=0, show_default=True)
@click.option("--trials", default=100, show_default=True)
@click.option("--tol", "tol", default=None, type=float,
              help="Replace every property's tolerance (useful to force failures).")
@click.option("--out", "out", default=None, help="Also write the residual table here.")
def verify(seed, trials, tol, out):
    """Run the randomized property suite and print a residual table."""
    if trials < 1:
        raise click.UsageError(f"trials must be >= 1, got {trials}")
    results = run_properties(trials, seed, tol)
    table = format_report(results)
    click.echo(table)
    click.echo(f"backend: {_kernels.BACKEND}")
    if out:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(table + "\n")
    failed = [r for r in results if not r.passed]
    click.echo(f"{len(results) - len(failed)}/{len(results)} properties passed")
    sys.exit(1 if failed else 0)


@main.command("circuit-dump")
@click.option("--kind", type=click.Choice(["1q", "nq"]), default="1q", show_default=True)
@click.option("--theta", default=0.0, show_default=True, help="1q: polar angle (radians).")
@click.option("--phi", default=0.0, show_default=True, help="1q: azimuth (radians).")
@click.option("--basis", "basis", type=click.Choice(["identity", "b2", "random"]),
              default="identity", show_default=True, help="nq: measured two-qubit basis.")
@click.option("--seed", default=0, show_default=True, help="nq: seed for --basis random.")
@click.option("--out", "out", default=None)
def circuit_dump(kind, theta, phi, basis, seed, out):
    """Print a non-revealing measurement circuit in the text format."""
    if kind == "1q":
        circuit = build_nrvnm_circuit_1q(theta, phi)
    else:
        v = {"identity": lambda: np.eye(4), "b2": lambda: b2_basis().vectors,
             "random": lambda: haar_random_unitary(4, seed)}[basis]()
        circuit = build_nrvnm_circuit_nq(v)
    _emit(circuit_to_text(circuit), out)


if __name__ == "__main__":  # pragma: no cover
    main()
