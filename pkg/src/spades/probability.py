"""Probability tables over the 39 unseen cards.

Everything here models one suit at a time: the agent holds m of its ranks, the
remaining cards of the suit land somewhere in the three hidden 13-card hands.
Two families of questions are answered:

* cut tables: chance that each of 1/2/3 chosen hidden players holds more than
  k cards of the suit (used both for high-card takes and for trump-cut value);
* nil safety: chance that a suit holding never forces the agent to win a
  trick, under fixed worst-case opponent play and best-case partner cover.

Exact values come from enumerating per-player count vectors weighted by the
multivariate hypergeometric over the hidden slots; a seeded Monte-Carlo
sampler and a tiny brute-force universe exist to cross-check the enumeration.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb

HIDDEN_PLAYERS = 3  # left opponent, right opponent, partner


def falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


@dataclass(frozen=True)
class Universe:
    """Size parameters for one suit's unseen-card model.

    ranks: how many ranks the suit has; slots: hidden cards per player.
    The real game is Universe(13, 13); tests shrink it to brute-forceable size.
    """

    ranks: int = 13
    slots: int = 13

    @property
    def total_slots(self) -> int:
        return HIDDEN_PLAYERS * self.slots


def exact_event_prob(bucket_sizes: tuple[int, ...], pred, universe: Universe = Universe()) -> Fraction:
    """Exact probability that the hidden players' bucket counts satisfy pred.

    bucket_sizes partitions the unseen cards of the suit into rank classes.
    pred receives a 3xK count matrix (rows: opp1, opp2, partner). Enumerates
    every composition, weighting by the chance of the underlying size split.
    """
    k = len(bucket_sizes)
    r = sum(bucket_sizes)
    if r > universe.total_slots:
        raise ValueError("more cards than hidden slots")
    slots = universe.slots
    ranges = [range(b + 1) for b in bucket_sizes]
    numerator = 0
    for c1 in product(*ranges):
        r1 = sum(c1)
        if r1 > slots:
            continue
        ways1 = 1
        for b, c in zip(bucket_sizes, c1):
            ways1 *= comb(b, c)
        rem = [b - c for b, c in zip(bucket_sizes, c1)]
        for c2 in product(*[range(b + 1) for b in rem]):
            r2 = sum(c2)
            r3 = r - r1 - r2
            if r2 > slots or r3 > slots:
                continue
            ways2 = 1
            for b, c in zip(rem, c2):
                ways2 *= comb(b, c)
            c3 = tuple(b - c for b, c in zip(rem, c2))
            if pred((c1, c2, c3)):
                numerator += (
                    ways1
                    * ways2
                    * falling(slots, r1)
                    * falling(slots, r2)
                    * falling(slots, r3)
                )
    return Fraction(numerator, falling(universe.total_slots, r))


def brute_force_event_prob(bucket_sizes: tuple[int, ...], pred, universe: Universe) -> Fraction:
    """Independent oracle: enumerate owner assignments card by card.

    Only viable for small universes (3^r assignments); used to validate
    exact_event_prob and the Monte-Carlo sampler against a third derivation.
    """
    r = sum(bucket_sizes)
    cards = []
    for idx, b in enumerate(bucket_sizes):
        cards.extend([idx] * b)
    num = 0
    for owners in product(range(HIDDEN_PLAYERS), repeat=r):
        counts = [[0] * len(bucket_sizes) for _ in range(HIDDEN_PLAYERS)]
        totals = [0] * HIDDEN_PLAYERS
        for card_bucket, owner in zip(cards, owners):
            counts[owner][card_bucket] += 1
            totals[owner] += 1
        if max(totals, default=0) > universe.slots:
            continue
        if pred(tuple(tuple(row) for row in counts)):
            weight = 1
            for t in totals:
                weight *= falling(universe.slots, t)
            num += weight
    return Fraction(num, falling(universe.total_slots, r))


class PlacementSampler:
    """Seeded sampler of unseen suit cards into the three hidden hands."""

    def __init__(self, seed: int, universe: Universe = Universe()):
        self.rng = random.Random(seed)
        self.universe = universe

    def sample_counts(self, bucket_sizes: tuple[int, ...]):
        """One random placement; returns the 3xK bucket-count matrix."""
        r = sum(bucket_sizes)
        slots = self.rng.sample(range(self.universe.total_slots), r)
        counts = [[0] * len(bucket_sizes) for _ in range(HIDDEN_PLAYERS)]
        i = 0
        for idx, b in enumerate(bucket_sizes):
            for _ in range(b):
                counts[slots[i] // self.universe.slots][idx] += 1
                i += 1
        return counts


def mc_event_prob(
    bucket_sizes: tuple[int, ...], pred, samples: int, seed: int, universe: Universe = Universe()
) -> float:
    sampler = PlacementSampler(seed, universe)
    hits = 0
    for _ in range(samples):
        counts = sampler.sample_counts(bucket_sizes)
        if pred(tuple(tuple(row) for row in counts)):
            hits += 1
    return hits / samples


# === Cut tables ===


@dataclass
class CutTable:
    """P(each counted hidden player holds > k cards of a suit), by holding size m.

    rows: m = 0..ranks; columns: k = 0,1,2. flags marks cells where the high
    card cannot survive to trick k+1 (m <= k); those cells keep their raw
    probability for trump-cut valuation but count 0 on the high-card path.
    """

    opponents: int
    mode: str
    values: list[list[float]]
    flags: list[list[bool]]
    samples: int | None = None
    seed: int | None = None
    ranks: int = 13
    slots: int = 13

    def prob(self, m: int, k: int) -> float:
        return self.values[m][k]

    def high_card_value(self, m: int, k: int) -> float:
        return 0.0 if self.flags[m][k] else self.values[m][k]

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": "cut",
                "opponents": self.opponents,
                "mode": self.mode,
                "samples": self.samples,
                "seed": self.seed,
                "ranks": self.ranks,
                "slots": self.slots,
                "values": [[round(v, 6) for v in row] for row in self.values],
                "flags": self.flags,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "CutTable":
        obj = json.loads(text)
        return cls(
            opponents=obj["opponents"],
            mode=obj["mode"],
            values=obj["values"],
            flags=obj["flags"],
            samples=obj.get("samples"),
            seed=obj.get("seed"),
            ranks=obj.get("ranks", 13),
            slots=obj.get("slots", 13),
        )


def build_cut_table(
    opponents: int,
    mode: str = "exact",
    samples: int = 100_000,
    seed: int = 0,
    universe: Universe = Universe(),
) -> CutTable:
    if opponents not in (1, 2, 3):
        raise ValueError("opponents must be 1, 2, or 3")
    values: list[list[float]] = []
    flags: list[list[bool]] = []
    counted = range(opponents)
    for m in range(universe.ranks + 1):
        r = universe.ranks - m
        row: list[float] = []
        for k in (0, 1, 2):
            def pred(counts, _k=k):
                return all(sum(counts[p]) > _k for p in counted)

            if mode == "exact":
                p = float(exact_event_prob((r,), pred, universe))
            elif mode == "mc":
                p = mc_event_prob((r,), pred, samples, seed + 1000 * m + k, universe)
            else:
                raise ValueError(f"unknown mode {mode!r}")
            row.append(p)
        values.append(row)
        flags.append([m <= k for k in (0, 1, 2)])
    return CutTable(
        opponents=opponents,
        mode=mode,
        values=values,
        flags=flags,
        samples=samples if mode == "mc" else None,
        seed=seed if mode == "mc" else None,
        ranks=universe.ranks,
        slots=universe.slots,
    )


def diff_cut_tables(a: CutTable, b: CutTable, tol: float) -> list[tuple[int, int, float, float]]:
    """Cells whose values differ by more than tol."""
    bad = []
    for m, (ra, rb) in enumerate(zip(a.values, b.values)):
        for k, (va, vb) in enumerate(zip(ra, rb)):
            if abs(va - vb) > tol:
                bad.append((m, k, va, vb))
    return bad


# === Nil safety per suit ===

SIDE, TRUMP = "side", "spades"


@dataclass(frozen=True)
class NilSafetyConfig:
    # Literal reading of the two-card case: the partner dooms the second-lowest
    # card when she kept 2+ cards OR lacks two higher ones. The conjunction
    # variant requires both; it is stricter about what partners fail to cover.
    doubleton_partner_requires_both: bool = False
    void_suit_bonus: float = 1.15
    max_safe_spades: int = 3


def _doom_pred(kind: str, active_sets: int, cfg: NilSafetyConfig):
    """Build the per-placement doom predicate.

    Buckets: counts of hidden cards below ref1, between ref1/ref2, between
    ref2/ref3, above ref3 (trailing buckets absent when fewer refs). A trick
    'sets' the agent when both opponents can stay under the agent's card and
    the partner cannot get above it (for side suits, a partner out of cards
    covers by trumping instead).
    """

    def pred(counts) -> bool:
        opp1, opp2, part = counts
        n1, n2, npart = sum(opp1), sum(opp2), sum(part)
        # set at the lowest card
        if active_sets >= 1:
            low1_1 = opp1[0]
            low1_2 = opp2[0]
            part_high1 = npart - part[0]
            opps = (n1 == 0 or low1_1 >= 1) and (n2 == 0 or low1_2 >= 1)
            if kind == TRUMP:
                partner = part_high1 == 0
            else:
                partner = npart >= 1 and part_high1 == 0
            if opps and partner:
                return True
        # set at the second-lowest card
        if active_sets >= 2:
            low2_1 = opp1[0] + opp1[1]
            low2_2 = opp2[0] + opp2[1]
            part_high2 = npart - part[0] - part[1]
            opps = (n1 <= 1 or low2_1 >= 2) and (n2 <= 1 or low2_2 >= 2)
            if kind == TRUMP:
                partner = part_high2 <= 1
            elif cfg.doubleton_partner_requires_both:
                partner = npart >= 2 and part_high2 <= 1
            else:
                partner = npart >= 2 or part_high2 <= 1
            if opps and partner:
                return True
        # set at the third-lowest card
        if active_sets >= 3:
            low3_1 = opp1[0] + opp1[1] + opp1[2]
            low3_2 = opp2[0] + opp2[1] + opp2[2]
            part_high3 = npart - part[0] - part[1] - part[2]
            opps = (n1 <= 2 or low3_1 >= 3) and (n2 <= 2 or low3_2 >= 3)
            if kind == TRUMP:
                partner = part_high3 == 0
            else:
                partner = npart >= 3 and part_high3 == 0
            if opps and partner:
                return True
        return False

    return pred


def _buckets_for_holding(holding: tuple[int, ...], universe: Universe) -> tuple[int, ...]:
    """Sizes of the unseen-rank classes cut by the agent's up-to-3 lowest cards.

    Only the three lowest cards enter the model; any longer holding shares the
    table entry of the 3-card holding with the same low cards.
    """
    refs = holding[:3]
    held = set(refs)
    pool = [rank for rank in range(universe.ranks) if rank not in held]
    sizes = [0] * (len(refs) + 1)
    for rank in pool:
        idx = 0
        for ref in refs:
            if rank > ref:
                idx += 1
        sizes[idx] += 1
    return tuple(sizes)


class NilSafety:
    """Per-suit probability that a holding never forces the agent to take a trick.

    Values are exact by default and cached by (suit kind, number of active set
    events, bucket sizes) since the doom events only read bucketed counts.
    """

    def __init__(
        self,
        config: NilSafetyConfig = NilSafetyConfig(),
        universe: Universe = Universe(),
        mode: str = "exact",
        samples: int = 100_000,
        seed: int = 0,
    ):
        self.config = config
        self.universe = universe
        self.mode = mode
        self.samples = samples
        self.seed = seed
        self._cache: dict[tuple, float] = {}

    def suit_safe_prob(self, kind: str, holding) -> float:
        """Pr(the suit never sets a nil), given the agent's ranks in it."""
        holding = tuple(sorted(holding))
        if not holding:
            return 1.0
        if kind == TRUMP and len(holding) > self.config.max_safe_spades:
            return 0.0
        active = min(len(holding), 3)
        buckets = _buckets_for_holding(holding, self.universe)
        key = (kind, active, buckets)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        pred = _doom_pred(kind, active, self.config)
        if self.mode == "exact":
            doom = float(exact_event_prob(buckets, pred, self.universe))
        else:
            mix = active * 7919 + (1 if kind == TRUMP else 0) * 104729
            for b in buckets:
                mix = mix * 31 + b
            doom = mc_event_prob(buckets, pred, self.samples, self.seed + mix, self.universe)
        safe = 1.0 - doom
        self._cache[key] = safe
        return safe

    def suit_safe_prob_brute(self, kind: str, holding) -> float:
        """Brute-force oracle variant (small universes only)."""
        holding = tuple(sorted(holding))
        if not holding:
            return 1.0
        if kind == TRUMP and len(holding) > self.config.max_safe_spades:
            return 0.0
        active = min(len(holding), 3)
        buckets = _buckets_for_holding(holding, self.universe)
        pred = _doom_pred(kind, active, self.config)
        return 1.0 - float(brute_force_event_prob(buckets, pred, self.universe))

    def suit_safe_prob_mc(self, kind: str, holding, samples: int, seed: int) -> float:
        holding = tuple(sorted(holding))
        if not holding:
            return 1.0
        if kind == TRUMP and len(holding) > self.config.max_safe_spades:
            return 0.0
        active = min(len(holding), 3)
        buckets = _buckets_for_holding(holding, self.universe)
        pred = _doom_pred(kind, active, self.config)
        return 1.0 - mc_event_prob(buckets, pred, samples, seed, self.universe)
