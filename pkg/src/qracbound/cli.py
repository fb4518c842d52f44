"""Command-line interface.

Every command prints one single-line JSON record on stdout (numbers rounded
to 12 significant digits). Exit codes: 0 ok, 2 usage/parse error, 3 invalid
strategy, 4 I/O error, 5 verification failure.
"""

from __future__ import annotations

import json
import logging
import math
from pathlib import Path

import click
import numpy as np

from .constructions import construct_known
from .errors import StrategyFormatError, UnsupportedConstructionError, ValidationError
from .geometry import geometry_constants, section_radii
from .oracles import CAMPAIGNS, run_campaign
from .qrac import (
    avg_success,
    avg_success_decomposed,
    simulate,
    upper_bound_info,
    worst_case_success,
    xor_randomized_worst_case,
)
from .seesaw import SeesawConfig, seesaw
from .strategy_io import load_strategy, save_strategy, strategy_to_dict

EXIT_USAGE, EXIT_INVALID, EXIT_IO, EXIT_VERIFY = 2, 3, 4, 5

seed_option = click.option(
    "--seed", type=int, default=0, show_default=True, envvar="QRAC_SEED", help="RNG seed (env QRAC_SEED)."
)


def _round(obj):
    if isinstance(obj, float):
        return obj if not math.isfinite(obj) else float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, np.generic):
        return _round(obj.item())
    return obj


def _emit(record: dict) -> None:
    click.echo(json.dumps(_round(record)))


def _fail(msg: str, code: int):
    click.echo(f"error: {msg}", err=True)
    raise SystemExit(code)


def _write(path: Path, writer) -> None:
    try:
        writer(path)
    except OSError as exc:
        _fail(f"cannot write {path}: {exc}", EXIT_IO)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def main(verbose: bool):
    """Bloch-space geometry and (n, m) quantum random access codes."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING)


@main.command()
@click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Number of bits.")
@click.option("--m", "m", type=click.IntRange(1, 4), required=True, help="Number of qubits.")
def bound(n: int, m: int):
    """Upper bound 1/2 + 1/2 sqrt(2^(m-1)/n) on the average success."""
    b = upper_bound_info(n, m)
    _emit({"n": n, "m": m, "bound": b.value, "vacuous": b.vacuous})


@main.command("eval")
@click.argument("strategy_path", type=click.Path(dir_okay=False))
@click.option("--worst-case", is_flag=True, help="Include worst-case and XOR-randomized success.")
@click.option("--decompose", is_flag=True, help="Include the T_x terms and the inequality chain.")
@click.option("--simulate", "trials", type=click.IntRange(min=1), default=None, help="Monte-Carlo trials.")
@seed_option
def eval_cmd(strategy_path, worst_case, decompose, trials, seed):
    """Evaluate a strategy file."""
    try:
        s = load_strategy(strategy_path)
    except OSError as exc:
        _fail(f"cannot read {strategy_path}: {exc}", EXIT_IO)
    except StrategyFormatError as exc:
        _fail(str(exc), EXIT_USAGE)
    except ValidationError as exc:
        _fail(f"invalid strategy: {exc}", EXIT_INVALID)

    record = {"n": s.n, "m": s.m, "p_avg": avg_success(s), "bound": upper_bound_info(s.n, s.m).value}
    if worst_case:
        record["p_worst"] = worst_case_success(s)
        record["p_xor_randomized"] = xor_randomized_worst_case(s)
    if decompose:
        rep = avg_success_decomposed(s)
        record["stages"] = list(rep.stages)
        record["stage_probabilities"] = list(rep.stage_probabilities)
        record["chain_holds"] = rep.chain_holds()
        record["T_norms"] = rep.decomposition_terms
    if trials is not None:
        record["simulated"] = simulate(s, trials, seed)
        record["trials"] = trials
        record["seed"] = seed
    _emit(record)


@main.command()
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--m", "m", type=click.IntRange(1, 4), required=True)
@click.option("--restarts", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--max-iters", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option("--tol", type=float, default=1e-10, show_default=True, help="Convergence tolerance on p_avg.")
@seed_option
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True)
def optimize(n, m, restarts, max_iters, tol, seed, out):
    """See-saw optimization; writes the best strategy to --out."""
    try:
        cfg = SeesawConfig(n, m, restarts, max_iters, tol, seed)
    except ValidationError as exc:
        _fail(str(exc), EXIT_USAGE)
    trace = seesaw(cfg)
    _write(out, lambda p: save_strategy(trace.strategy, p))
    b = upper_bound_info(n, m).value
    p = avg_success(trace.strategy)
    _emit(
        {
            "n": n,
            "m": m,
            "p_avg": p,
            "bound": b,
            "gap": b - p,
            "winner": trace.winner,
            "iterations": trace.iterations[trace.winner],
            "total_iterations": sum(trace.iterations),
            "out": str(out),
        }
    )


@main.command()
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--m", "m", type=click.IntRange(1, 4), required=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
def construct(n, m, out):
    """Known analytic strategy; printed as JSON, or written to --out."""
    try:
        s = construct_known(n, m)
    except UnsupportedConstructionError as exc:
        _fail(str(exc), EXIT_USAGE)
    if out is None:
        click.echo(json.dumps(strategy_to_dict(s)))
        return
    _write(out, lambda p: save_strategy(s, p))
    _emit({"n": n, "m": m, "p_avg": avg_success(s), "bound": upper_bound_info(n, m).value, "out": str(out)})


def _csv_floats(text: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got {text!r}") from None


@main.command()
@click.option("--dim", "dim", type=click.IntRange(2, 16), required=True, help="State dimension N.")
@click.option("--u1", required=True, help="First direction, comma-separated (N^2-1 numbers).")
@click.option("--u2", required=True, help="Second direction, orthogonal to u1.")
@click.option("--points", type=click.IntRange(min=8), default=360, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True)
def section(dim, u1, u2, points, out):
    """Boundary of the Bloch body in the plane spanned by u1, u2, as CSV."""
    a, b = _csv_floats(u1), _csv_floats(u2)
    if a.size != dim * dim - 1 or b.size != dim * dim - 1:
        _fail(f"directions need {dim * dim - 1} coordinates for N={dim}", EXIT_USAGE)
    try:
        thetas, radii = section_radii(a, b, points)
    except ValidationError as exc:
        _fail(str(exc), EXIT_USAGE)
    g = geometry_constants(dim)
    lines = ["theta,radius"]
    lines += [f"{t:.12g},{r:.12g}" for t, r in zip(thetas, radii)]
    lines += [f"# r_N,{g.r:.12g}", f"# R_N,{g.R:.12g}"]
    _write(out, lambda p: p.write_text("\n".join(lines) + "\n"))
    _emit(
        {
            "dim": dim,
            "points": points,
            "min_radius": float(radii.min()),
            "max_radius": float(radii.max()),
            "r_N": g.r,
            "R_N": g.R,
            "out": str(out),
        }
    )


@main.command()
@click.option("--lemma", type=click.Choice(CAMPAIGNS), required=True)
@click.option(
    "--dim",
    "dims",
    type=int,
    multiple=True,
    help="State dimension N (vector count n for mancinska/parseval); repeatable.",
)
@click.option("--samples", type=click.IntRange(min=1), default=1000, show_default=True)
@seed_option
def verify(lemma, dims, samples, seed):
    """Run a randomized lemma campaign; exit 5 on any violation."""
    try:
        report = run_campaign(lemma, dims or None, samples, seed)
    except ValidationError as exc:
        _fail(str(exc), EXIT_USAGE)
    _emit(report.as_record())
    if not report.passed:
        raise SystemExit(EXIT_VERIFY)


if __name__ == "__main__":  # pragma: no cover
    main()
