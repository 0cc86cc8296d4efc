"""Match simulator and statistics: determinism, symmetry, log recompute."""

import json
import math
from collections import Counter

import pytest

from spades.engine import RoundLog
from spades.harness import (
    ABLATIONS,
    MatchConfig,
    MatchStats,
    RoundRecord,
    compute_stats,
    load_records,
    points_bucket,
    rank_correlation,
    run_ablation,
    run_match,
    stats_from_file,
    wilson_lower,
    write_figure_csvs,
)


# ---------------------------------------------------------------------------
# Statistics helpers


class TestWilson:
    def test_empty_sample_is_zero(self):
        assert wilson_lower(0, 0) == 0.0

    def test_matches_score_test_inversion(self):
        # The lower bound is the p0 where the one-sided score test at
        # z = 1.6449 is exactly critical; recover it by bisection.
        for wins, n in [(60, 100), (5300, 10_000), (7, 10), (1, 50)]:
            p_hat = wins / n
            lo, hi = 1e-9, p_hat
            for _ in range(200):
                mid = (lo + hi) / 2
                z = (p_hat - mid) / math.sqrt(mid * (1 - mid) / n)
                if z > 1.6449:
                    lo = mid
                else:
                    hi = mid
            assert wilson_lower(wins, n) == pytest.approx(lo, abs=1e-9)

    def test_below_point_estimate_and_monotone(self):
        prev = -1.0
        for wins in range(0, 101, 10):
            low = wilson_lower(wins, 100)
            assert low <= wins / 100 + 1e-12
            assert low >= prev
            prev = low

    def test_tightens_with_sample_size(self):
        assert wilson_lower(55, 100) < wilson_lower(550, 1000) < wilson_lower(5500, 10_000) < 0.55


class TestRankCorrelation:
    def test_perfectly_monotone(self):
        assert rank_correlation([1, 2, 3, 4], [10, 20, 30, 40]) == pytest.approx(1.0)
        assert rank_correlation([1, 2, 3, 4], [9, 7, 3, 1]) == pytest.approx(-1.0)

    def test_known_value_with_tie(self):
        # ranks x: 1,2,3,4; ranks y: 1, 2.5, 2.5, 4 -> rho = 0.9486...
        rho = rank_correlation([1, 2, 3, 4], [5, 7, 7, 9])
        assert rho == pytest.approx(0.9486832980505138)

    def test_degenerate_inputs(self):
        assert rank_correlation([1], [2]) == 0.0
        assert rank_correlation([1, 2, 3], [5, 5, 5]) == 0.0

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            rank_correlation([1, 2], [1])


def test_points_bucket_width_ten_with_negatives():
    assert points_bucket(0) == 0
    assert points_bucket(9) == 0
    assert points_bucket(10) == 10
    assert points_bucket(-1) == -10
    assert points_bucket(-100) == -100
    assert points_bucket(-105) == -110


# ---------------------------------------------------------------------------
# Shared medium-sized match (bis vs rb) reused across assertions


@pytest.fixture(scope="module")
def match_run(tmp_path_factory):
    log = tmp_path_factory.mktemp("logs") / "match.jsonl"
    cfg = MatchConfig(
        ns_bidder="bis", ew_bidder="rb", n_games=150, seed=41, log_path=str(log)
    )
    stats = run_match(cfg)
    return cfg, stats, log


class TestRunMatch:
    def test_deterministic_stats_and_logs(self, match_run, tmp_path):
        cfg, stats, log = match_run
        rerun_log = tmp_path / "rerun.jsonl"
        rerun = run_match(
            MatchConfig(
                ns_bidder="bis",
                ew_bidder="rb",
                n_games=150,
                seed=41,
                log_path=str(rerun_log),
            )
        )
        assert rerun == stats
        assert rerun_log.read_bytes() == log.read_bytes()

    def test_win_rates_sum_to_one(self, match_run):
        _, stats, _ = match_run
        assert stats.wins[0] + stats.wins[1] == stats.games == 150
        assert stats.win_rate(0) + stats.win_rate(1) == pytest.approx(1.0)

    def test_round_counters_are_consistent(self, match_run):
        _, stats, _ = match_run
        assert sum(stats.sum_bids_hist.values()) == stats.rounds
        assert sum(stats.points_hist_nil.values()) + sum(
            stats.points_hist_regular.values()
        ) == 2 * stats.rounds
        assert sum(stats.branching_hist.values()) == 52 * stats.rounds
        assert sum(stats.ace4_rounds.values()) == stats.rounds
        for value, count in stats.ace4_with_ace.items():
            assert count <= stats.ace4_rounds[value]
        assert stats.nil_made[0] <= stats.nil_bids[0]
        assert stats.nil_made[1] <= stats.nil_bids[1]

    def test_branching_counts_reflect_play(self, match_run):
        _, stats, _ = match_run
        assert min(stats.branching_hist) >= 1
        assert max(stats.branching_hist) <= 13
        # every round contributes four forced final plays (one card left)
        assert stats.branching_hist[1] >= 4 * stats.rounds

    def test_first_ten_games_unchanged_by_extending_the_match(self, tmp_path):
        short = tmp_path / "short.jsonl"
        long = tmp_path / "long.jsonl"
        run_match(MatchConfig(n_games=10, seed=13, log_path=str(short)))
        run_match(MatchConfig(n_games=20, seed=13, log_path=str(long)))
        short_lines = short.read_text().splitlines()
        long_lines = long.read_text().splitlines()
        assert long_lines[: len(short_lines)] == short_lines

    def test_mirror_match_splits_wins_exactly(self):
        stats = run_match(MatchConfig(n_games=40, seed=9))
        assert stats.wins == [20, 20]
        assert stats.win_rate() == 0.5

    def test_symmetrize_off_replays_nothing(self, tmp_path):
        log = tmp_path / "plain.jsonl"
        stats = run_match(
            MatchConfig(
                ns_bidder="bis",
                ew_bidder="rb",
                n_games=30,
                seed=4,
                symmetrize=False,
                log_path=str(log),
            )
        )
        assert stats.games == 30
        records, issues = load_records(log)
        assert not issues
        assert {rec.swap for rec in records} == {False}
        assert len({rec.game for rec in records}) == 30

    def test_goal_one_matches_are_single_rounds(self):
        stats = run_match(
            MatchConfig(
                ns_bidder="rb", ew_bidder="rb", n_games=30, seed=3, win_goal=1, lose_goal=-1
            )
        )
        assert stats.games == 30
        assert stats.rounds == 30

    def test_parallel_workers_change_nothing(self, tmp_path):
        serial_log = tmp_path / "serial.jsonl"
        par_log = tmp_path / "parallel.jsonl"
        serial = run_match(
            MatchConfig(ns_bidder="bis", ew_bidder="rb", n_games=24, seed=8, log_path=str(serial_log))
        )
        parallel = run_match(
            MatchConfig(ns_bidder="bis", ew_bidder="rb", n_games=24, seed=8, log_path=str(par_log)),
            workers=2,
        )
        assert serial == parallel
        assert serial_log.read_bytes() == par_log.read_bytes()

    def test_unknown_names_rejected_before_playing(self):
        with pytest.raises(ValueError):
            run_match(MatchConfig(ns_bidder="zz", n_games=1))
        with pytest.raises(ValueError):
            run_match(MatchConfig(ew_player="frisbee", n_games=1))
        with pytest.raises(ValueError):
            run_match(MatchConfig(n_games=0))


class TestLogsAndRecompute:
    def test_stats_recomputed_from_logs_match_online(self, match_run):
        cfg, stats, log = match_run
        recomputed, issues = stats_from_file(log, cfg.win_goal, cfg.lose_goal)
        assert not issues
        assert recomputed == stats

    def test_round_record_metadata_roundtrip(self, match_run, tmp_path):
        _, _, log = match_run
        records, issues = load_records(log)
        assert not issues
        games = {rec.game for rec in records}
        assert games == set(range(150))
        swapped = {rec.game for rec in records if rec.swap}
        assert swapped == set(range(1, 150, 2))
        copy = tmp_path / "copy.jsonl"
        copy.write_text("".join(rec.to_json() + "\n" for rec in records))
        assert copy.read_bytes() == log.read_bytes()

    def test_goal_segmentation_recovers_games_without_metadata(self, tmp_path):
        log = tmp_path / "nometa.jsonl"
        stats = run_match(
            MatchConfig(
                ns_bidder="bis",
                ew_bidder="rb",
                n_games=30,
                seed=4,
                symmetrize=False,
                log_path=str(log),
            )
        )
        stripped = tmp_path / "stripped.jsonl"
        with open(stripped, "w") as fh:
            for line in log.read_text().splitlines():
                obj = json.loads(line)
                obj.pop("game", None)
                obj.pop("swap", None)
                fh.write(json.dumps(obj, separators=(",", ":")) + "\n")
        records, issues = load_records(stripped)
        assert not issues
        assert all(rec.game is None for rec in records)
        recovered = compute_stats(records, 200, -100)
        assert recovered == stats

    def test_corrupt_lines_reported_and_skipped(self, match_run, tmp_path):
        _, _, log = match_run
        lines = log.read_text().splitlines()
        truncated = json.loads(lines[5])
        truncated["tricks"] = truncated["tricks"][:12]
        lines[2] = lines[2][:30] + "<oops>"
        lines[5] = json.dumps(truncated, separators=(",", ":"))
        lines[9] = '{"seed": 3, "hands": "missing the rest"}'
        bad = tmp_path / "bad.jsonl"
        bad.write_text("\n".join(lines) + "\n")
        stats, issues = stats_from_file(bad)
        assert len(issues) == 3
        assert any("line 3" in msg for msg in issues)
        assert any("line 6" in msg for msg in issues)
        assert any("line 10" in msg for msg in issues)
        assert stats.rounds == len(lines) - 3

    def test_compute_stats_raises_without_issue_collector(self, match_run):
        _, _, log = match_run
        records, _ = load_records(log)
        bad = json.loads(records[0].log.to_json())
        bad["tricks"] = bad["tricks"][:10]
        broken = RoundRecord(RoundLog.from_json(json.dumps(bad)))
        with pytest.raises(Exception):
            compute_stats([broken])

    def test_blank_lines_are_ignored(self, match_run, tmp_path):
        _, _, log = match_run
        padded = tmp_path / "padded.jsonl"
        padded.write_text("\n" + log.read_text().replace("\n", "\n\n"))
        records, issues = load_records(padded)
        assert not issues
        assert len(records) == len(log.read_text().splitlines())


class TestMerging:
    def test_merge_is_associative_and_matches_full_compute(self, match_run):
        cfg, stats, log = match_run
        records, _ = load_records(log)
        thirds = [
            [rec for rec in records if rec.game % 3 == k] for k in range(3)
        ]
        parts = [compute_stats(chunk, cfg.win_goal, cfg.lose_goal) for chunk in thirds]
        left = parts[0].merge(parts[1]).merge(parts[2])
        right = parts[0].merge(parts[1].merge(parts[2]))
        assert left == right
        assert left == stats

    def test_merge_keeps_zero_and_negative_point_totals(self):
        a, b = MatchStats(), MatchStats()
        a.points_by_sum = Counter({14: -300, 11: 40})
        b.points_by_sum = Counter({14: 250, 12: -40, 11: -40})
        merged = a.merge(b)
        assert merged.points_by_sum[14] == -50
        assert merged.points_by_sum[12] == -40
        assert merged.points_by_sum[11] == 0

    def test_empty_merge_is_identity(self, match_run):
        _, stats, _ = match_run
        assert MatchStats().merge(stats) == stats
        assert stats.merge(MatchStats()) == stats


class TestDerivedFigures:
    def test_summary_is_json_ready_and_consistent(self, match_run):
        _, stats, _ = match_run
        summary = json.loads(json.dumps(stats.summary()))
        assert summary["games"] == 150
        assert summary["rounds"] == stats.rounds
        ns, ew = summary["teams"]["ns"], summary["teams"]["ew"]
        assert ns["wins"] + ew["wins"] == 150
        assert 0 <= ns["win_lower_95"] <= ns["win_rate"] <= 1
        assert ns["beats_other"] == (ns["win_lower_95"] > 0.5)
        assert 0 <= ns["nil_frequency"] <= 1
        assert 0 <= ns["nil_success_rate"] <= 1

    def test_stats_json_round_trip_is_lossless(self, match_run):
        _, stats, _ = match_run
        again = MatchStats.from_json(stats.to_json())
        assert again == stats
        assert again.summary() == stats.summary()
        with pytest.raises(ValueError):
            MatchStats.from_json("{}")

    def test_points_per_round_matches_totals(self, match_run):
        _, stats, _ = match_run
        assert stats.points_per_round(0) == pytest.approx(stats.points[0] / stats.rounds)
        by_sum = stats.avg_points_by_sum()
        reconstructed = sum(
            avg * 2 * stats.sum_bids_hist[v] for v, avg in by_sum.items()
        )
        assert reconstructed == pytest.approx(stats.points[0] + stats.points[1])

    def test_mean_sum_bids_in_plausible_band(self, match_run):
        _, stats, _ = match_run
        assert 8.0 <= stats.mean_sum_bids() <= 13.0
        assert 2.0 <= stats.mean_branching() <= 6.0

    def test_figure_csvs_written_and_parseable(self, match_run, tmp_path):
        _, stats, _ = match_run
        paths = write_figure_csvs(stats, tmp_path / "figs")
        names = {p.name for p in paths}
        assert names == {
            "round-points.csv",
            "points-by-bid-sum.csv",
            "bid-sums.csv",
            "branching.csv",
            "ace-fourth-seat.csv",
        }
        import csv as csvmod

        for path in paths:
            with open(path, newline="") as fh:
                rows = list(csvmod.reader(fh))
            assert len(rows) >= 2  # header plus data
        with open(tmp_path / "figs" / "bid-sums.csv", newline="") as fh:
            rows = list(csvmod.DictReader(fh))
        assert sum(int(r["rounds"]) for r in rows) == stats.rounds
        with open(tmp_path / "figs" / "ace-fourth-seat.csv", newline="") as fh:
            rows = list(csvmod.DictReader(fh))
        assert all(0.0 <= float(r["ace_rate"]) <= 1.0 for r in rows)


class TestAblation:
    def test_matchup_wiring(self, sc_table_path, sc_single_path):
        base = MatchConfig(
            n_games=12,
            seed=21,
            sc_table=sc_table_path,
            sc_single=sc_single_path,
            ns_player="srp",
            ew_player="wrp",  # must be overridden: same player all seats
        )
        direct = run_match(
            MatchConfig(
                n_games=12,
                seed=21,
                sc_table=sc_table_path,
                sc_single=sc_single_path,
                ns_bidder="bis",
                ew_bidder="bis:single-curve",
            )
        )
        assert run_ablation(base, "single-curve") == direct

    def test_all_ablation_names_run(self, sc_table_path, sc_single_path):
        base = MatchConfig(
            n_games=4, seed=2, sc_table=sc_table_path, sc_single=sc_single_path
        )
        for which in ABLATIONS:
            stats = run_ablation(base, which)
            assert stats.games == 4

    def test_unknown_ablation_rejected(self):
        with pytest.raises(ValueError):
            run_ablation(MatchConfig(n_games=1), "no-bids")

    def test_single_curve_requires_trained_table(self):
        with pytest.raises(ValueError):
            run_ablation(MatchConfig(n_games=1), "single-curve")
