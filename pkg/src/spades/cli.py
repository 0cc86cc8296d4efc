"""Command-line entry points.

``spades`` is the umbrella command (sim, stats, ablate, serve, play, plus
the ``tables`` and ``sc`` groups); ``tables`` and ``sc`` are also installed
as standalone commands.  The ``play`` command is a thin HTTP client of the
play service — it holds no rules of its own.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import httpx

from .curves import SCTable, TrainConfig, generate_dataset, load_dataset, save_dataset
from .curves import train as train_curves
from .harness import (
    ABLATIONS,
    MatchConfig,
    run_ablation,
    run_match,
    stats_from_file,
    write_figure_csvs,
)
from .probability import CutTable, build_cut_table, diff_cut_tables


@click.group()
def main():
    """Spades bots: simulation, statistics, tables, and live play."""


# ---------------------------------------------------------------------------
# probability tables


@click.group()
def tables():
    """Build and compare the cut probability tables."""


@tables.command("build")
@click.option("--opponents", type=click.Choice(["1", "2", "3"]), required=True)
@click.option("--mode", type=click.Choice(["exact", "mc"]), default="exact", show_default=True)
@click.option("--samples", type=int, default=100_000, show_default=True, help="Monte-Carlo samples per cell (mc mode).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def tables_build(opponents, mode, samples, seed, out):
    """Compute one table and write it as JSON."""
    table = build_cut_table(int(opponents), mode=mode, samples=samples, seed=seed)
    Path(out).write_text(table.to_json())
    click.echo(f"wrote {mode} table for {opponents} opponent(s) to {out}")


@tables.command("diff")
@click.argument("file1", type=click.Path(exists=True, dir_okay=False))
@click.argument("file2", type=click.Path(exists=True, dir_okay=False))
@click.option("--tol", type=float, default=1e-6, show_default=True)
def tables_diff(file1, file2, tol):
    """Compare two table files cell by cell; exit 1 on differences."""
    a = CutTable.from_json(Path(file1).read_text())
    b = CutTable.from_json(Path(file2).read_text())
    bad = diff_cut_tables(a, b, tol)
    for m, k, va, vb in bad:
        click.echo(f"m={m} k={k}: {va:.6f} vs {vb:.6f} (|diff|={abs(va - vb):.2e})")
    if bad:
        raise SystemExit(1)
    click.echo(f"no differences above {tol}")


# ---------------------------------------------------------------------------
# success curves


@click.group()
def sc():
    """Generate nil-outcome data and train success curves."""


@sc.command("gen")
@click.option("--rounds", type=int, default=200_000, show_default=True)
@click.option("--explore", type=float, default=0.15, show_default=True, help="Probability of flipping the nil decision at the exploring seat.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def sc_gen(rounds, explore, seed, out):
    """Self-play rounds with nil exploration, labelled and saved as JSONL."""
    examples = generate_dataset(rounds, explore, seed=seed)
    save_dataset(out, examples)
    click.echo(f"wrote {len(examples)} nil outcomes to {out}")


@sc.command("train")
@click.option("--in", "in_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--epochs", type=int, default=TrainConfig.epochs, show_default=True)
@click.option("--learning-rate", type=float, default=TrainConfig.learning_rate, show_default=True)
@click.option("--l2", type=float, default=TrainConfig.l2, show_default=True)
@click.option("--single", is_flag=True, help="Train one shared curve instead of per-sequence curves.")
def sc_train(in_path, out, epochs, learning_rate, l2, single):
    """Fit the success curves and write the lookup table as JSON."""
    examples = load_dataset(in_path)
    config = TrainConfig(
        learning_rate=learning_rate,
        epochs=epochs,
        l2=l2,
        sequence_features=not single,
    )
    model = train_curves(examples, config)
    SCTable.from_model(model).save(out)
    kind = "single shared curve" if single else "per-sequence curves"
    click.echo(f"trained {kind} on {len(examples)} examples; wrote {out}")


# ---------------------------------------------------------------------------
# simulation and statistics


def _echo_stats(stats, ns_label: str, ew_label: str) -> None:
    click.echo(f"{stats.games} games, {stats.rounds} rounds")
    for team, label in ((0, ns_label), (1, ew_label)):
        click.echo(
            f"  {label}: win rate {stats.win_rate(team):.4f} "
            f"(95% lower bound {stats.win_lower_bound(team):.4f}), "
            f"{stats.points_per_round(team):+.2f} points/round, "
            f"nil {stats.nil_frequency(team):.3f}/bid "
            f"({stats.nil_success_rate(team):.0%} made)"
        )
    if stats.beats(0):
        click.echo("  verdict: the NS line-up beats the EW line-up")
    elif stats.beats(1):
        click.echo("  verdict: the EW line-up beats the NS line-up")
    else:
        click.echo("  verdict: no side clears the 95% bar")
    click.echo(
        f"  mean bid sum {stats.mean_sum_bids():.2f}, "
        f"mean branching {stats.mean_branching():.2f}"
    )


def _write_outputs(stats, stats_path, csv_dir) -> None:
    if stats_path:
        Path(stats_path).write_text(json.dumps(stats.summary(), indent=2))
        click.echo(f"stats written to {stats_path}")
    if csv_dir:
        paths = write_figure_csvs(stats, csv_dir)
        click.echo(f"{len(paths)} CSV files written to {csv_dir}")


@main.command("sim")
@click.option("--ns-bidder", default="bis", show_default=True)
@click.option("--ew-bidder", default="bis", show_default=True)
@click.option("--player", default="srp", show_default=True, help="Playing module for both sides.")
@click.option("--ns-player", default=None, help="Override the NS playing module.")
@click.option("--ew-player", default=None, help="Override the EW playing module.")
@click.option("--games", type=int, default=1000, show_default=True)
@click.option("--goal", type=int, default=200, show_default=True)
@click.option("--lose", type=int, default=-100, show_default=True)
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--logs", type=click.Path(dir_okay=False), default=None, help="Write round logs (JSONL).")
@click.option("--stats", "stats_path", type=click.Path(dir_okay=False), default=None, help="Write aggregate stats (JSON).")
@click.option("--csv-dir", type=click.Path(file_okay=False), default=None, help="Write one CSV per figure.")
@click.option("--sc-table", type=click.Path(exists=True, dir_okay=False), default=None, help="Trained success curves for bis seats.")
@click.option("--no-symmetrize", is_flag=True, help="Do not replay each deal with partnerships swapped.")
@click.option("--blind", is_flag=True, help="Allow blind nil.")
@click.option("--workers", type=int, default=1, show_default=True)
def sim(ns_bidder, ew_bidder, player, ns_player, ew_player, games, goal, lose,
        seed, logs, stats_path, csv_dir, sc_table, no_symmetrize, blind, workers):
    """Play a seeded match and report the statistics."""
    config = MatchConfig(
        ns_bidder=ns_bidder,
        ew_bidder=ew_bidder,
        ns_player=ns_player or player,
        ew_player=ew_player or player,
        n_games=games,
        seed=seed,
        win_goal=goal,
        lose_goal=lose,
        symmetrize=not no_symmetrize,
        blind_allowed=blind,
        sc_table=sc_table,
        log_path=logs,
    )
    try:
        stats = run_match(config, workers=workers)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    _echo_stats(
        stats,
        f"NS {config.ns_bidder}/{config.ns_player}",
        f"EW {config.ew_bidder}/{config.ew_player}",
    )
    if logs:
        click.echo(f"logs written to {logs}")
    _write_outputs(stats, stats_path, csv_dir)


@main.command("stats")
@click.option("--in", "in_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--goal", type=int, default=200, show_default=True)
@click.option("--lose", type=int, default=-100, show_default=True)
@click.option("--stats", "stats_path", type=click.Path(dir_okay=False), default=None)
@click.option("--csv-dir", type=click.Path(file_okay=False), default=None)
def stats_cmd(in_path, goal, lose, stats_path, csv_dir):
    """Recompute match statistics from a JSONL round log."""
    stats, issues = stats_from_file(in_path, win_goal=goal, lose_goal=lose)
    for issue in issues:
        click.echo(f"skipped corrupt log entry: {issue}", err=True)
    _echo_stats(stats, "NS", "EW")
    _write_outputs(stats, stats_path, csv_dir)


@main.command("ablate")
@click.option("--which", type=click.Choice(ABLATIONS), required=True)
@click.option("--player", default="srp", show_default=True)
@click.option("--games", type=int, default=1000, show_default=True)
@click.option("--goal", type=int, default=200, show_default=True)
@click.option("--lose", type=int, default=-100, show_default=True)
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--logs", type=click.Path(dir_okay=False), default=None)
@click.option("--stats", "stats_path", type=click.Path(dir_okay=False), default=None)
@click.option("--csv-dir", type=click.Path(file_okay=False), default=None)
@click.option("--sc-table", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--sc-single", type=click.Path(exists=True, dir_okay=False), default=None, help="Single-curve table for the single-curve ablation.")
@click.option("--workers", type=int, default=1, show_default=True)
def ablate(which, player, games, goal, lose, seed, logs, stats_path, csv_dir,
           sc_table, sc_single, workers):
    """Full bidder line-up versus the same line-up with one part disabled."""
    config = MatchConfig(
        ns_player=player,
        ew_player=player,
        n_games=games,
        seed=seed,
        win_goal=goal,
        lose_goal=lose,
        sc_table=sc_table,
        sc_single=sc_single,
        log_path=logs,
    )
    try:
        stats = run_ablation(config, which, workers=workers)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    _echo_stats(stats, f"NS full/{player}", f"EW {which}/{player}")
    _write_outputs(stats, stats_path, csv_dir)


# ---------------------------------------------------------------------------
# service and thin play client


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--sc-table", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--round-log", type=click.Path(dir_okay=False), default=None, help="Append finished rounds (JSONL).")
def serve(host, port, sc_table, round_log):
    """Run the play service."""
    import uvicorn

    from .api import create_app

    app = create_app(sc_table=sc_table, round_log_path=round_log)
    uvicorn.run(app, host=host, port=port)


def _play_client(url: str) -> httpx.Client:
    return httpx.Client(base_url=url, timeout=60.0)


def _render_view(view: dict) -> None:
    click.echo("")
    click.echo(
        f"round {view['round']}  dealer {view['dealer']}  "
        f"scores NS {view['scores']['NS']} / EW {view['scores']['EW']}  "
        f"bags NS {view['bags']['NS']} / EW {view['bags']['EW']}"
    )
    bids = "  ".join(
        f"{seat}:{'-' if bid is None else bid}{'*' if view['blind'][seat] else ''}"
        for seat, bid in view["bids"].items()
    )
    click.echo(f"bids   {bids}")
    trick = view.get("current_trick")
    if trick and trick["plays"]:
        click.echo(f"trick  led by {trick['leader']}: {' '.join(trick['plays'])}")
    counts = view.get("trick_counts", {})
    if any(counts.values()):
        click.echo("tricks " + "  ".join(f"{s}:{n}" for s, n in counts.items()))
    if view["hand"]:
        click.echo(f"hand   {' '.join(view['hand'])}")
    if view["phase"] == "done":
        click.echo(f"game over: {view['winner']} wins")


@main.command("play")
@click.option("--url", default="http://127.0.0.1:8000", show_default=True)
@click.option("--seat", type=click.Choice(list("NESW")), default="S", show_default=True)
@click.option("--bidder", default="bis", show_default=True)
@click.option("--player", default="srp", show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--goal", type=int, default=200, show_default=True)
@click.option("--lose", type=int, default=-100, show_default=True)
@click.option("--blind", is_flag=True, help="Allow blind nil.")
def play(url, seat, bidder, player, seed, goal, lose, blind):
    """Play one game against the bots over the service API."""
    client = _play_client(url)
    resp = client.post(
        "/sessions",
        json={
            "human_seat": seat,
            "bot_bidder": bidder,
            "bot_player": player,
            "seed": seed,
            "win_goal": goal,
            "lose_goal": lose,
            "blind_nil": blind,
        },
    )
    if resp.status_code != 200:
        raise click.ClickException(f"could not create a session: {resp.text}")
    body = resp.json()
    session = body["session"]
    view = body["view"]
    click.echo(f"session {session}; you sit {view['seat']}  (q to quit)")
    while view["phase"] != "done":
        _render_view(view)
        if view["phase"] == "blind_choice":
            prompt = "peek or blind"
        elif view["phase"] == "bid":
            prompt = "your bid (0 = nil)"
        else:
            prompt = "your card"
        try:
            raw = click.prompt(prompt).strip()
        except click.Abort:
            click.echo("\nleaving the table")
            return
        if raw.lower() in ("q", "quit", "exit"):
            click.echo("leaving the table")
            return
        if view["phase"] == "bid":
            if not raw.isdigit():
                click.echo("enter a number 0..13")
                continue
            resp = client.post(
                f"/sessions/{session}/bid",
                json={"seq": view["seq"], "bid": int(raw)},
            )
        elif view["phase"] == "blind_choice":
            resp = client.post(
                f"/sessions/{session}/bid",
                json={"seq": view["seq"], "action": raw.lower()},
            )
        else:
            resp = client.post(
                f"/sessions/{session}/card",
                json={"seq": view["seq"], "card": raw.upper()},
            )
        if resp.status_code == 200:
            payload = resp.json()
            for event in payload["events"]:
                if event["type"] == "play" and event["seat"] != view["seat"]:
                    click.echo(f"  {event['seat']} plays {event['card']}")
                elif event["type"] == "bid" and event["seat"] != view["seat"]:
                    blind_mark = " blind" if event["blind"] else ""
                    click.echo(f"  {event['seat']} bids {event['bid']}{blind_mark}")
                elif event["type"] == "trick":
                    click.echo(f"  trick to {event['winner']}")
                elif event["type"] == "round":
                    click.echo(
                        f"  round {event['round']} scored: "
                        f"NS {event['points']['NS']:+d}, EW {event['points']['EW']:+d}"
                    )
            view = payload["view"]
        else:
            detail = resp.json().get("detail", resp.text)
            click.echo(f"rejected: {detail}")
            view = client.get(f"/sessions/{session}/view").json()
    _render_view(view)


main.add_command(tables)
main.add_command(sc)


if __name__ == "__main__":
    main()
