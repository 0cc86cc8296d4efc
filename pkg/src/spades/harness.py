"""Seeded match simulator and statistics over round logs.

A match pits the North/South partnership against East/West for a fixed
number of games.  Each game draws its RNG stream from (master seed, game
index), so results are independent of execution order and worker count.
With seat symmetrization (the default) consecutive games replay the same
deals with the partnerships swapped, which halves variance and makes a
mirror match between identical line-ups come out exactly even.

Statistics are accumulated per round from the same log records that are
persisted as JSONL, so recomputing stats from a log file reproduces the
online numbers bit for bit.
"""

from __future__ import annotations

import csv
import json
import math
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Callable, Iterable

from .baselines import IOBidder, MSBidder, RBBidder
from .bidding import BidderConfig, BisBidder, Tables
from .cards import SEAT_CHARS, SIDE_NAMES, parse_card, parse_hand
from .curves import SCTable
from .engine import GameError, RoundLog, RoundState, Rules, play_game
from .players import player_from_name

WILSON_Z = 1.6449  # one-sided 95% confidence
POINTS_BUCKET_WIDTH = 10
DEFAULT_UCT_ITERS = 400

BIDDER_NAMES = ("bis", "rb", "ms", "io")
ABLATIONS = ("single-curve", "no-endgame", "no-conventions")


# ---------------------------------------------------------------------------
# Configuration and agent construction


@dataclass(frozen=True)
class MatchConfig:
    """Everything needed to reproduce a match bit for bit."""

    ns_bidder: str = "bis"
    ew_bidder: str = "bis"
    ns_player: str = "srp"
    ew_player: str = "srp"
    n_games: int = 1000
    seed: int = 0
    win_goal: int = 200
    lose_goal: int = -100
    symmetrize: bool = True
    blind_allowed: bool = False
    uct_iters: int | None = DEFAULT_UCT_ITERS
    sc_table: str | None = None  # trained success curves for "bis" seats
    sc_single: str | None = None  # single-curve table for "bis:single-curve"
    log_path: str | None = None

    def rules(self) -> Rules:
        return Rules(
            win_goal=self.win_goal,
            lose_goal=self.lose_goal,
            blind_allowed=self.blind_allowed,
        )


class AgentResources:
    """Shared read-only tables for the bidders in a match."""

    def __init__(self, sc_table: SCTable | None = None, sc_single: SCTable | None = None):
        self.sc_table = sc_table
        self.sc_single = sc_single
        self._full: Tables | None = None
        self._single: Tables | None = None

    @classmethod
    def from_config(cls, config: MatchConfig) -> "AgentResources":
        return cls(
            sc_table=SCTable.load(config.sc_table) if config.sc_table else None,
            sc_single=SCTable.load(config.sc_single) if config.sc_single else None,
        )

    def full_tables(self) -> Tables:
        if self._full is None:
            lookup = self.sc_table.lookup if self.sc_table else None
            self._full = Tables.build(sc_lookup=lookup)
        return self._full

    def single_tables(self) -> Tables:
        if self.sc_single is None:
            raise ValueError(
                "the single-curve variant needs a single-curve table (sc_single)"
            )
        if self._single is None:
            self._single = Tables.build(sc_lookup=self.sc_single.lookup)
        return self._single


def make_bidder(spec: str, resources: AgentResources):
    """Build a bidding module from its config name.

    Names: bis, rb, ms, io, plus the bis variants bis:single-curve,
    bis:no-endgame and bis:no-conventions.
    """
    base, _, variant = spec.partition(":")
    if base == "rb" and not variant:
        return RBBidder()
    if base == "ms" and not variant:
        return MSBidder()
    if base == "io" and not variant:
        return IOBidder()
    if base == "bis":
        if not variant:
            return BisBidder(resources.full_tables())
        if variant == "single-curve":
            return BisBidder(resources.single_tables())
        if variant == "no-endgame":
            return BisBidder(resources.full_tables(), BidderConfig(endgame=False))
        if variant == "no-conventions":
            return BisBidder(resources.full_tables(), BidderConfig(conventions=False))
    raise ValueError(f"unknown bidding module {spec!r}")


class SeatAgent:
    """One seat's bidder + player pair, as the engine expects."""

    __slots__ = ("bidder", "player")

    def __init__(self, bidder, player):
        self.bidder = bidder
        self.player = player

    def choose_bid(self, ctx):
        return self.bidder.choose_bid(ctx)

    def wants_blind(self, ctx) -> bool:
        fn = getattr(self.bidder, "wants_blind", None)
        return bool(fn(ctx)) if fn is not None else False

    def choose_card(self, state, seat, legal):
        return self.player.choose_card(state, seat, legal)


def _make_player(spec: str, config: MatchConfig, seed: int):
    iters = config.uct_iters if spec.split(":", 1)[0] == "uct" else None
    return player_from_name(spec, seed=seed, iters=iters)


# ---------------------------------------------------------------------------
# Round records: log lines plus match metadata


@dataclass
class RoundRecord:
    """A round log plus which game it belongs to and the seat orientation.

    ``swap`` is True when the configured NS team sat East/West for this
    round (symmetrized replay); team t then maps to physical side t ^ 1.
    """

    log: RoundLog
    game: int | None = None
    swap: bool = False
    line: int | None = None

    def side_of_team(self, team: int) -> int:
        return team ^ int(self.swap)

    def to_json(self) -> str:
        obj = json.loads(self.log.to_json())
        if self.game is not None:
            obj["game"] = self.game
        if self.swap:
            obj["swap"] = True
        return json.dumps(obj, separators=(",", ":"))


def write_records(path, records: Iterable[RoundRecord], append: bool = False) -> None:
    mode = "a" if append else "w"
    with open(path, mode, encoding="utf-8") as fh:
        for rec in records:
            fh.write(rec.to_json() + "\n")


def load_records(path) -> tuple[list[RoundRecord], list[str]]:
    """Read a JSONL log file, skipping corrupt lines.

    Returns (records, issues); each issue names the bad line number.
    """
    records: list[RoundRecord] = []
    issues: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                log = RoundLog.from_json(line)
                game = obj.get("game")
                if game is not None and not isinstance(game, int):
                    raise ValueError(f"bad game index {game!r}")
                records.append(
                    RoundRecord(log, game, bool(obj.get("swap", False)), lineno)
                )
            except Exception as exc:  # corrupt line: report and move on
                issues.append(f"line {lineno}: {exc}")
    return records, issues


# ---------------------------------------------------------------------------
# Statistics


def wilson_lower(wins: int, n: int, z: float = WILSON_Z) -> float:
    """One-sided Wilson lower confidence bound for a win rate."""
    if n == 0:
        return 0.0
    p = wins / n
    z2 = z * z
    center = p + z2 / (2 * n)
    radius = z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n))
    return max(0.0, (center - radius) / (1 + z2 / n))


def rank_correlation(xs, ys) -> float:
    """Spearman rank correlation (average ranks for ties)."""
    if len(xs) != len(ys):
        raise ValueError("length mismatch")
    n = len(xs)
    if n < 2:
        return 0.0

    def ranks(values):
        order = sorted(range(n), key=lambda i: values[i])
        out = [0.0] * n
        i = 0
        while i < n:
            j = i
            while j + 1 < n and values[order[j + 1]] == values[order[i]]:
                j += 1
            avg = (i + j) / 2 + 1
            for k in range(i, j + 1):
                out[order[k]] = avg
            i = j + 1
        return out

    rx, ry = ranks(xs), ranks(ys)
    mx = sum(rx) / n
    my = sum(ry) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = sum((a - mx) ** 2 for a in rx)
    vy = sum((b - my) ** 2 for b in ry)
    if vx == 0 or vy == 0:
        return 0.0
    return cov / math.sqrt(vx * vy)


def points_bucket(points: int) -> int:
    """Lower edge of the width-10 histogram bucket holding ``points``."""
    return (points // POINTS_BUCKET_WIDTH) * POINTS_BUCKET_WIDTH


def _counter_sum(a: Counter, b: Counter) -> Counter:
    """Key-wise sum that, unlike Counter.__add__, keeps zero and negative
    totals (points sums can be negative)."""
    out = Counter(a)
    for key, value in b.items():
        out[key] += value
    return out


@dataclass
class MatchStats:
    """Mergeable counters for a match; team 0 is the configured NS line-up."""

    games: int = 0
    wins: list[int] = field(default_factory=lambda: [0, 0])
    rounds: int = 0
    points: list[int] = field(default_factory=lambda: [0, 0])
    nil_rounds: list[int] = field(default_factory=lambda: [0, 0])
    nil_bids: list[int] = field(default_factory=lambda: [0, 0])
    nil_made: list[int] = field(default_factory=lambda: [0, 0])
    points_hist_nil: Counter = field(default_factory=Counter)
    points_hist_regular: Counter = field(default_factory=Counter)
    sum_bids_hist: Counter = field(default_factory=Counter)
    points_by_sum: Counter = field(default_factory=Counter)
    branching_hist: Counter = field(default_factory=Counter)
    ace4_rounds: Counter = field(default_factory=Counter)
    ace4_with_ace: Counter = field(default_factory=Counter)

    # -- accumulation -------------------------------------------------

    def add_round(self, record: RoundRecord) -> None:
        log = record.log
        # Parse and validate everything before touching any counter so a
        # corrupt record can be skipped without leaving partial counts.
        branching = _replay_branching(log)
        takes = [0, 0, 0, 0]
        for trick in log.tricks:
            takes[SEAT_CHARS.index(trick["winner"])] += 1
        sum_bids = sum(log.bids)
        team_points = [log.scores[SIDE_NAMES[record.side_of_team(t)]] for t in (0, 1)]
        dealer = log.dealer
        first3 = sum(log.bids[s] for s in range(4) if s != dealer)
        has_ace = "AS" in log.hands[dealer]

        self.rounds += 1
        self.sum_bids_hist[sum_bids] += 1
        for team in (0, 1):
            side = record.side_of_team(team)
            pts = team_points[team]
            self.points[team] += pts
            nil_seats = [s for s in (side, side + 2) if log.bids[s] == 0]
            self.nil_bids[team] += len(nil_seats)
            self.nil_made[team] += sum(1 for s in nil_seats if takes[s] == 0)
            hist = self.points_hist_regular
            if nil_seats:
                self.nil_rounds[team] += 1
                hist = self.points_hist_nil
            hist[points_bucket(pts)] += 1
            self.points_by_sum[sum_bids] += pts
        self.branching_hist.update(branching)
        self.ace4_rounds[first3] += 1
        if has_ace:
            self.ace4_with_ace[first3] += 1

    def add_game(self, winning_team: int) -> None:
        self.games += 1
        self.wins[winning_team] += 1

    def merge(self, other: "MatchStats") -> "MatchStats":
        """Combine two partial results; associative and order-insensitive."""
        out = MatchStats()
        out.games = self.games + other.games
        out.rounds = self.rounds + other.rounds
        for t in (0, 1):
            out.wins[t] = self.wins[t] + other.wins[t]
            out.points[t] = self.points[t] + other.points[t]
            out.nil_rounds[t] = self.nil_rounds[t] + other.nil_rounds[t]
            out.nil_bids[t] = self.nil_bids[t] + other.nil_bids[t]
            out.nil_made[t] = self.nil_made[t] + other.nil_made[t]
        out.points_hist_nil = _counter_sum(self.points_hist_nil, other.points_hist_nil)
        out.points_hist_regular = _counter_sum(
            self.points_hist_regular, other.points_hist_regular
        )
        out.sum_bids_hist = _counter_sum(self.sum_bids_hist, other.sum_bids_hist)
        out.points_by_sum = _counter_sum(self.points_by_sum, other.points_by_sum)
        out.branching_hist = _counter_sum(self.branching_hist, other.branching_hist)
        out.ace4_rounds = _counter_sum(self.ace4_rounds, other.ace4_rounds)
        out.ace4_with_ace = _counter_sum(self.ace4_with_ace, other.ace4_with_ace)
        return out

    # -- derived figures ----------------------------------------------

    def win_rate(self, team: int = 0) -> float:
        return self.wins[team] / self.games if self.games else 0.0

    def win_lower_bound(self, team: int = 0) -> float:
        return wilson_lower(self.wins[team], self.games)

    def beats(self, team: int = 0) -> bool:
        """True when the team's one-sided 95% lower bound clears 0.5."""
        return self.win_lower_bound(team) > 0.5

    def points_per_round(self, team: int = 0) -> float:
        return self.points[team] / self.rounds if self.rounds else 0.0

    def nil_frequency(self, team: int = 0) -> float:
        """Nil bids per seat-bid for the team (2 bids per round)."""
        return self.nil_bids[team] / (2 * self.rounds) if self.rounds else 0.0

    def nil_success_rate(self, team: int = 0) -> float:
        return self.nil_made[team] / self.nil_bids[team] if self.nil_bids[team] else 0.0

    def mean_sum_bids(self) -> float:
        total = sum(v * n for v, n in self.sum_bids_hist.items())
        return total / self.rounds if self.rounds else 0.0

    def mean_branching(self) -> float:
        n = sum(self.branching_hist.values())
        total = sum(v * c for v, c in self.branching_hist.items())
        return total / n if n else 0.0

    def avg_points_by_sum(self) -> dict[int, float]:
        """Average partnership points per round, by the table's total bids."""
        return {
            v: self.points_by_sum[v] / (2 * n)
            for v, n in sorted(self.sum_bids_hist.items())
        }

    def ace4_rates(self, min_rounds: int = 1) -> dict[int, float]:
        """P(last bidder was dealt the ace of spades | sum of first 3 bids)."""
        return {
            v: self.ace4_with_ace[v] / n
            for v, n in sorted(self.ace4_rounds.items())
            if n >= min_rounds
        }

    def ace4_rank_correlation(self, min_rounds: int = 1) -> float:
        rates = self.ace4_rates(min_rounds)
        return rank_correlation(list(rates.keys()), list(rates.values()))

    def summary(self) -> dict:
        """JSON-ready digest of the match."""
        teams = {}
        for t, label in enumerate(("ns", "ew")):
            teams[label] = {
                "wins": self.wins[t],
                "win_rate": self.win_rate(t),
                "win_lower_95": self.win_lower_bound(t),
                "beats_other": self.beats(t),
                "points_per_round": self.points_per_round(t),
                "nil_frequency": self.nil_frequency(t),
                "nil_success_rate": self.nil_success_rate(t),
            }
        return {
            "games": self.games,
            "rounds": self.rounds,
            "teams": teams,
            "mean_sum_bids": self.mean_sum_bids(),
            "mean_branching": self.mean_branching(),
            "sum_bids_hist": {str(k): v for k, v in sorted(self.sum_bids_hist.items())},
            "points_hist_nil": {
                str(k): v for k, v in sorted(self.points_hist_nil.items())
            },
            "points_hist_regular": {
                str(k): v for k, v in sorted(self.points_hist_regular.items())
            },
            "avg_points_by_sum": {
                str(k): v for k, v in self.avg_points_by_sum().items()
            },
            "branching_hist": {
                str(k): v for k, v in sorted(self.branching_hist.items())
            },
            "ace4_rates": {str(k): v for k, v in self.ace4_rates().items()},
            "ace4_rank_correlation": self.ace4_rank_correlation(),
        }

    def to_json(self) -> str:
        """Lossless serialization; counterpart of :meth:`from_json`."""
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, Counter):
                value = {str(k): v for k, v in sorted(value.items())}
            out[f.name] = value
        return json.dumps(out)

    @classmethod
    def from_json(cls, text: str) -> "MatchStats":
        raw = json.loads(text)
        kwargs = {}
        for f in fields(cls):
            if f.name not in raw:
                raise ValueError(f"stats record is missing field {f.name!r}")
            value = raw[f.name]
            if isinstance(value, dict):
                value = Counter({int(k): v for k, v in value.items()})
            kwargs[f.name] = value
        return cls(**kwargs)


def _replay_branching(log: RoundLog) -> Counter:
    """Replay the trick play, counting legal-move options at every decision."""
    hands = [parse_hand(h) for h in log.hands]
    state = RoundState(hands, list(log.bids), list(log.blind), (log.dealer + 1) & 3)
    branching: Counter = Counter()
    for trick in log.tricks:
        for code in trick["plays"]:
            seat = state.to_act
            branching[len(state.legal_plays(seat))] += 1
            state.play(seat, parse_card(code))
    if not state.done:
        raise GameError("round log ended before all tricks were played")
    return branching


def compute_stats(
    records: Iterable[RoundRecord],
    win_goal: int = 200,
    lose_goal: int = -100,
    issues: list[str] | None = None,
) -> MatchStats:
    """Rebuild MatchStats from round records.

    Game boundaries come from the records' game indices when present;
    otherwise games are segmented by running the scores to the goals, the
    same rule the simulator plays by.  A trailing unfinished game is
    scored for the current leader.  Records that fail to replay raise,
    unless ``issues`` is given, in which case they are reported there and
    skipped.
    """
    stats = MatchStats()
    current: int | None = None
    team_scores = [0, 0]
    open_rounds = 0
    last_swap = False

    def close_game():
        nonlocal open_rounds
        if open_rounds:
            if team_scores[0] == team_scores[1]:
                # leader rule falls back to physical side 0, as the engine does
                winner = int(last_swap)
            else:
                winner = 0 if team_scores[0] > team_scores[1] else 1
            stats.add_game(winner)
        team_scores[0] = team_scores[1] = 0
        open_rounds = 0

    for rec in records:
        if rec.game is not None and rec.game != current:
            close_game()
        current = rec.game
        try:
            stats.add_round(rec)
        except (GameError, ValueError, KeyError, IndexError) as exc:
            if issues is None:
                raise
            where = f"line {rec.line}" if rec.line is not None else f"seed {rec.log.seed}"
            issues.append(f"{where}: {exc}")
            continue
        open_rounds += 1
        last_swap = rec.swap
        for team in (0, 1):
            team_scores[team] += rec.log.scores[SIDE_NAMES[rec.side_of_team(team)]]
        if rec.game is None:
            over = (
                max(team_scores) >= win_goal or min(team_scores) <= lose_goal
            ) and team_scores[0] != team_scores[1]
            if over:
                close_game()
    close_game()
    return stats


def stats_from_file(
    path, win_goal: int = 200, lose_goal: int = -100
) -> tuple[MatchStats, list[str]]:
    """Load a JSONL log and compute stats, reporting skipped lines."""
    records, issues = load_records(path)
    stats = compute_stats(records, win_goal, lose_goal, issues=issues)
    return stats, issues


# ---------------------------------------------------------------------------
# Running matches


def _game_plan(config: MatchConfig, index: int) -> tuple[int, bool]:
    """(deal index, partnerships swapped?) for game ``index``."""
    if config.symmetrize:
        return index // 2, bool(index & 1)
    return index, False


def play_match_game(
    config: MatchConfig,
    index: int,
    bidders,
    rules: Rules,
) -> tuple[int, list[RoundRecord]]:
    """Play game ``index`` of the match; returns (winning team, records)."""
    deal_index, swap = _game_plan(config, index)
    prng = random.Random(f"{config.seed}:{deal_index}")
    game_seed = prng.getrandbits(60)
    player_seeds = [prng.getrandbits(60) for _ in range(4)]
    player_specs = (config.ns_player, config.ew_player)
    agents = []
    for seat in range(4):
        team = (seat & 1) ^ int(swap)
        agents.append(
            SeatAgent(
                bidders[team],
                _make_player(player_specs[team], config, player_seeds[seat]),
            )
        )
    result = play_game(agents, game_seed, rules, collect_logs=True)
    winner = result.winner ^ int(swap)
    records = [RoundRecord(log, game=index, swap=swap) for log in result.logs]
    return winner, records


def _run_chunk(config: MatchConfig, start: int, count: int) -> tuple[MatchStats, list[str]]:
    """Worker entry: play games [start, start+count) and aggregate them."""
    resources = AgentResources.from_config(config)
    bidders = (
        make_bidder(config.ns_bidder, resources),
        make_bidder(config.ew_bidder, resources),
    )
    rules = config.rules()
    stats = MatchStats()
    lines: list[str] = []
    for index in range(start, start + count):
        winner, records = play_match_game(config, index, bidders, rules)
        stats.add_game(winner)
        for rec in records:
            stats.add_round(rec)
            lines.append(rec.to_json())
    return stats, lines


def run_match(
    config: MatchConfig,
    workers: int = 1,
    on_progress: Callable[[int, int], None] | None = None,
) -> MatchStats:
    """Play the configured match; deterministic for (config, seed).

    Writes JSONL round logs to ``config.log_path`` when set.  With
    ``workers > 1`` games run in parallel processes; per-game RNG streams
    and ordered merging keep the output identical to a serial run.
    """
    if config.n_games < 1:
        raise ValueError("n_games must be positive")
    probe = AgentResources.from_config(config)
    for spec in (config.ns_bidder, config.ew_bidder):
        make_bidder(spec, probe)
    for spec in (config.ns_player, config.ew_player):
        _make_player(spec, config, seed=0)
    chunk = max(1, math.ceil(config.n_games / max(1, workers) / 4))
    starts = list(range(0, config.n_games, chunk))
    jobs = [(s, min(chunk, config.n_games - s)) for s in starts]

    results: list[tuple[MatchStats, list[str]]] = []
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_chunk, config, s, c) for s, c in jobs]
            done = 0
            for fut, (_, c) in zip(futures, jobs):
                results.append(fut.result())
                done += c
                if on_progress:
                    on_progress(done, config.n_games)
    else:
        done = 0
        for s, c in jobs:
            results.append(_run_chunk(config, s, c))
            done += c
            if on_progress:
                on_progress(done, config.n_games)

    stats = MatchStats()
    for part, _ in results:
        stats = stats.merge(part)
    if config.log_path:
        with open(config.log_path, "w", encoding="utf-8") as fh:
            for _, lines in results:
                for line in lines:
                    fh.write(line + "\n")
    return stats


def run_ablation(
    config: MatchConfig, which: str, workers: int = 1
) -> MatchStats:
    """Full bidder line-up (NS) against the same bidder with one part
    disabled (EW), same playing module in all four seats."""
    if which not in ABLATIONS:
        raise ValueError(f"unknown ablation {which!r}; pick one of {ABLATIONS}")
    cfg = replace(
        config,
        ns_bidder="bis",
        ew_bidder=f"bis:{which}",
        ew_player=config.ns_player,
    )
    return run_match(cfg, workers=workers)


# ---------------------------------------------------------------------------
# CSV emission, one file per figure


def write_figure_csvs(stats: MatchStats, out_dir) -> list[Path]:
    """Dump each distribution as a CSV for external plotting."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def dump(name: str, header: list[str], rows: Iterable[list]) -> None:
        path = out / name
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
        written.append(path)

    dump(
        "round-points.csv",
        ["bucket_low", "nil_rounds", "regular_rounds"],
        [
            [b, stats.points_hist_nil.get(b, 0), stats.points_hist_regular.get(b, 0)]
            for b in sorted(set(stats.points_hist_nil) | set(stats.points_hist_regular))
        ],
    )
    dump(
        "points-by-bid-sum.csv",
        ["bid_sum", "rounds", "avg_points"],
        [
            [v, stats.sum_bids_hist[v], avg]
            for v, avg in stats.avg_points_by_sum().items()
        ],
    )
    dump(
        "bid-sums.csv",
        ["bid_sum", "rounds"],
        [[v, n] for v, n in sorted(stats.sum_bids_hist.items())],
    )
    dump(
        "branching.csv",
        ["legal_moves", "decisions"],
        [[v, n] for v, n in sorted(stats.branching_hist.items())],
    )
    dump(
        "ace-fourth-seat.csv",
        ["first3_bid_sum", "rounds", "ace_rate"],
        [
            [v, stats.ace4_rounds[v], stats.ace4_with_ace[v] / stats.ace4_rounds[v]]
            for v in sorted(stats.ace4_rounds)
        ],
    )
    return written
