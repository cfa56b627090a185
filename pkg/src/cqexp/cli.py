"""Command-line front end.

Exit codes: 0 success, 2 validation failure, 3 numerical failure,
4 resource cap exceeded. CSV goes to stdout (header always included,
numeric fields with 9 significant digits); diagnostics go to stderr.
``--json`` switches to one JSON object per row; ``--nats`` converts
bit-valued outputs to nats on emission only. The CQEXP_THREADS variable
caps internal worker parallelism (0 = auto).
"""

from __future__ import annotations

import dataclasses
import functools
import json as _json
import sys

import click
import numpy as np

from .analysis import ChannelAnalysis, best_type_up_to, holevo_capacity, renyi_mi_channel
from .channel_io import load_channel
from .coding import estimate_exponent
from .config import DEFAULT_CONFIG, LN_BASE
from .divergences import renyi_mi_channel_prior
from .errors import (
    CqexpError,
    NumericalInstability,
    TooLarge,
)

VALIDATION_EXIT = 2
NUMERICAL_EXIT = 3
RESOURCE_EXIT = 4


def _fail(code: int, message) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guard(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except TooLarge as exc:
            _fail(RESOURCE_EXIT, exc)
        except NumericalInstability as exc:
            _fail(NUMERICAL_EXIT, exc)
        except (CqexpError, ValueError) as exc:
            _fail(VALIDATION_EXIT, exc)

    return wrapper


def _config(seed: int = 0, max_dim: int | None = None):
    overrides = {"seed": seed}
    if max_dim is not None:
        overrides["max_dim"] = max_dim
        overrides["max_sim_dim"] = max_dim
    return dataclasses.replace(DEFAULT_CONFIG, **overrides)


def _conv(x: float, nats: bool) -> float:
    return x * LN_BASE if nats else x


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    v = float(x) + 0.0  # normalize -0.0
    return f"{v:.9g}"


def _emit(header: list[str], rows: list[list], json_mode: bool) -> None:
    if json_mode:
        for row in rows:
            obj = {
                k: (v if isinstance(v, (str, int)) else float(v) + 0.0)
                for k, v in zip(header, row)
            }
            click.echo(_json.dumps(obj, separators=(",", ":")))
    else:
        click.echo(",".join(header))
        for row in rows:
            click.echo(",".join(v if isinstance(v, str) else _fmt(v) for v in row))


def _parse_prior(raw: str) -> np.ndarray:
    try:
        return np.asarray([float(tok) for tok in raw.split(",") if tok.strip() != ""])
    except ValueError as exc:
        raise ValueError(f"cannot parse prior {raw!r}: {exc}") from exc


def _parse_n_list(raw: str) -> list[int]:
    try:
        values = [int(tok) for tok in raw.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ValueError(f"cannot parse n list {raw!r}: {exc}") from exc
    if not values or any(n < 1 for n in values):
        raise ValueError("n list must contain positive integers")
    return values


@click.group()
def main() -> None:
    """Error-exponent toolkit for classical-quantum channels."""


@main.command()
@click.argument("channel_file", type=click.Path())
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--max-dim", type=int, default=None)
@click.option("--json", "json_mode", is_flag=True)
@click.option("--nats", is_flag=True)
@_guard
def capacity(channel_file, seed, max_dim, json_mode, nats) -> None:
    """Channel capacity (bits/use) with the optimizing input prior."""
    channel = load_channel(channel_file)
    report = holevo_capacity(channel, _config(seed, max_dim))
    if not report.converged:
        _fail(NUMERICAL_EXIT, "capacity optimization did not converge")
    value = _conv(report.value, nats)
    prior = [float(p) for p in report.prior]
    if json_mode:
        click.echo(_json.dumps({"capacity": value, "prior": prior}, separators=(",", ":")))
    else:
        click.echo(f"capacity: {value:.6f}")
        click.echo("prior: " + ",".join(_fmt(p) for p in prior))


@main.command()
@click.argument("channel_file", type=click.Path())
@click.option("--alpha", type=float, required=True)
@click.option("--prior", "prior_raw", type=str, default=None,
              help="Comma-separated weights; omit to optimize over priors.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--max-dim", type=int, default=None)
@click.option("--json", "json_mode", is_flag=True)
@click.option("--nats", is_flag=True)
@_guard
def renyi(channel_file, alpha, prior_raw, seed, max_dim, json_mode, nats) -> None:
    """Renyi mutual information of order --alpha (alpha=1 gives Holevo)."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    channel = load_channel(channel_file)
    if prior_raw is not None:
        prior = _parse_prior(prior_raw)
        value = _conv(renyi_mi_channel_prior(channel, prior, alpha), nats)
        if json_mode:
            click.echo(_json.dumps(
                {"alpha": alpha, "renyi_mi": value, "prior": [float(p) for p in prior]},
                separators=(",", ":"),
            ))
        else:
            click.echo(f"renyi_mi: {value:.6f}")
    else:
        report = renyi_mi_channel(channel, alpha, _config(seed, max_dim))
        if not report.converged:
            _fail(NUMERICAL_EXIT, "prior optimization did not converge")
        value = _conv(report.value, nats)
        prior = [float(p) for p in report.prior]
        if json_mode:
            click.echo(_json.dumps(
                {"alpha": alpha, "renyi_mi": value, "prior": prior}, separators=(",", ":")
            ))
        else:
            click.echo(f"renyi_mi: {value:.6f}")
            click.echo("prior: " + ",".join(_fmt(p) for p in prior))


@main.command()
@click.argument("channel_file", type=click.Path())
@click.option("--rmin", type=float, required=True)
@click.option("--rmax", type=float, required=True)
@click.option("--steps", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--max-dim", type=int, default=None)
@click.option("--json", "json_mode", is_flag=True)
@click.option("--nats", is_flag=True)
@_guard
def exponent(channel_file, rmin, rmax, steps, seed, max_dim, json_mode, nats) -> None:
    """Reliability-function bounds over a rate grid (CSV to stdout).

    Rows at or above capacity carry zero bounds and the above_capacity flag.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if not 0.0 < rmin < rmax:
        raise ValueError("need 0 < rmin < rmax")
    channel = load_channel(channel_file)
    session = ChannelAnalysis(channel, _config(seed, max_dim))
    cap = session.capacity().value
    rc = session.critical_rate()
    rates = np.linspace(rmin, rmax, steps)
    inside = [float(r) for r in rates if r < cap]
    above = [float(r) for r in rates if r >= cap]
    rows: list[list] = []
    saturated_rates: list[float] = []
    if inside:
        curve = session.curve(inside)
        for row in curve.rows:
            if row.upper_saturated:
                saturated_rates.append(row.rate)
            rows.append([
                _conv(row.rate, nats), _conv(row.lower, nats), _conv(row.upper, nats),
                "1" if row.equal else "0",
                row.alpha_lower, row.alpha_upper,
                _conv(rc, nats), _conv(cap, nats),
            ])
    for r in above:
        rows.append([
            _conv(r, nats), 0.0, 0.0, "above_capacity", 1.0, 1.0,
            _conv(rc, nats), _conv(cap, nats),
        ])
    header = ["r", "lower", "upper", "equal", "alpha_lower", "alpha_upper", "r_c", "capacity"]
    _emit(header, rows, json_mode)
    if saturated_rates:
        click.echo(
            "warning: sphere-packing search saturated at the alpha grid floor for rates "
            + ",".join(f"{r:.6g}" for r in saturated_rates),
            err=True,
        )


@main.command()
@click.argument("channel_file", type=click.Path())
@click.option("--rate", type=float, required=True, help="Communication rate in bits/use.")
@click.option("--n-list", "n_list_raw", type=str, required=True)
@click.option("--trials", type=int, required=True)
@click.option("--seed", type=int, required=True)
@click.option("--max-dim", type=int, default=None)
@click.option("--json", "json_mode", is_flag=True)
@click.option("--nats", is_flag=True)
@_guard
def simulate(channel_file, rate, n_list_raw, trials, seed, max_dim, json_mode, nats) -> None:
    """Exact coding simulation: best/mean PGM errors against the bounds."""
    if rate <= 0:
        raise ValueError("rate must be positive")
    n_list = _parse_n_list(n_list_raw)
    channel = load_channel(channel_file)
    config = _config(seed, max_dim)
    session = ChannelAnalysis(channel, config)
    lower = session.lower_bound(rate).value
    upper = session.upper_bound(rate).value
    estimates = estimate_exponent(
        channel, rate, n_list, trials, seed, config, analysis=session
    )
    header = ["n", "M", "best_pe", "mean_pe", "implied_exponent", "lower_bound", "upper_bound"]
    rows = [
        [
            est.n, est.size, est.best_pe, est.mean_pe,
            _conv(est.implied_exponent, nats), _conv(lower, nats), _conv(upper, nats),
        ]
        for est in estimates
    ]
    _emit(header, rows, json_mode)


@main.command()
@click.argument("channel_file", type=click.Path())
@click.option("--alpha", type=float, required=True)
@click.option("--nmax", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--max-dim", type=int, default=None)
@click.option("--json", "json_mode", is_flag=True)
@click.option("--nats", is_flag=True)
@_guard
def besttype(channel_file, alpha, nmax, seed, max_dim, json_mode, nats) -> None:
    """Best constant-composition information for blocklengths up to n = 1..nmax.

    Each row reports the best type over blocklengths m <= n, so the value
    column is non-decreasing (the exact per-n maximum oscillates with
    blocklength parity).
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie strictly inside (0, 1), got {alpha}")
    if nmax < 1:
        raise ValueError("nmax must be >= 1")
    channel = load_channel(channel_file)
    config = _config(seed, max_dim)
    target = renyi_mi_channel(channel, alpha, config).value
    header = ["n", "best_type", "value_per_use", "I_alpha_target"]
    rows = []
    for n, t, value in best_type_up_to(channel, nmax, alpha, config):
        rows.append([
            n, "|".join(str(c) for c in t.counts),
            _conv(value, nats), _conv(target, nats),
        ])
    _emit(header, rows, json_mode)


if __name__ == "__main__":
    main()
