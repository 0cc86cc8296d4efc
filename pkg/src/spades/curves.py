"""Nil success curves learned from self-play.

A hand's nil value is a heuristic duck-every-trick probability; how often a
nil actually survives also depends on the bids already on the table (most of
all the partner's). This module generates labelled nil outcomes by noisy
self-play, fits a logistic-regression calibration model, and freezes it into
a table of success curves, one per possible sequence of previous bids, that
the bidder consults at nil-decision time.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Iterator, NamedTuple

import numpy as np

from .bidding import BidderConfig, BisBidder, Tables, decide_bid
from .engine import play_round
from .players import CompositeAgent, SRPPlayer

MAX_BID = 13
GRID_SIZE = 101  # nil-value grid 0.00 .. 1.00 in steps of 0.01

# feature layout: intercept, nil value, one-hot #previous bidders (0-3),
# partner bid, partner-nil flag, opponents' bid sum, opponent-nil flag
N_FEATURES = 10
_NIL_VALUE_INDEX = 1


class NilExample(NamedTuple):
    """One observed nil attempt: the table context, the hand, the outcome."""

    sequence: tuple[int, ...]  # bids before the niler, chronological
    nil_value: float
    success: bool


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.5
    epochs: int = 2000
    l2: float = 1e-4
    sequence_features: bool = True  # False trains one shared curve


def all_sequences() -> Iterator[tuple[int, ...]]:
    """Every possible previous-bid sequence: lengths 0..3 over bids 0..13."""
    for n in range(4):
        yield from product(range(MAX_BID + 1), repeat=n)


def sequence_key(sequence: Iterable[int]) -> str:
    return "-".join(str(b) for b in sequence)


def featurize(sequence, nil_value: float, *, sequence_features: bool = True) -> np.ndarray:
    x = np.zeros(N_FEATURES)
    x[0] = 1.0
    x[_NIL_VALUE_INDEX] = nil_value
    if sequence_features:
        n = len(sequence)
        x[2 + n] = 1.0
        if n >= 2:
            partner = sequence[-2]  # the seat two before the niler
            x[6] = float(partner)
            x[7] = 1.0 if partner == 0 else 0.0
        opponents = []
        if n >= 1:
            opponents.append(sequence[-1])
        if n == 3:
            opponents.append(sequence[0])
        x[8] = float(sum(opponents))
        x[9] = 1.0 if any(b == 0 for b in opponents) else 0.0
    return x


# --- data generation ----------------------------------------------------------


class _ExploringBidder:
    """Bidder whose nil decision may be flipped once, for data coverage.

    The flip is suppressed when the partner already bid nil, in either
    direction. Records (previous bids, nil value, bid-nil) for the round.
    """

    def __init__(self, tables: Tables, flip: bool):
        self.tables = tables
        self.flip = flip
        self.config = BidderConfig()
        self.record: tuple[tuple[int, ...], float, bool] | None = None

    def choose_bid(self, ctx) -> int:
        dec = decide_bid(ctx, self.tables, self.config)
        nil = dec.nil
        if self.flip and ctx.partner_bid != 0:
            nil = not nil
        self.record = (tuple(ctx.prev_bids), dec.nil_eval.value, nil)
        if nil:
            return 0
        return dec.bid if dec.bid > 0 else max(1, dec.regular.bid)


def generate_dataset(
    n_rounds: int,
    exploration_rate: float,
    seed: int,
    tables: Tables | None = None,
) -> list[NilExample]:
    """Label nil outcomes from self-play rounds.

    All four seats bid from the probability tables with the raw nil value as
    its own success estimate; one rotating seat flips its nil decision with
    the given probability. Only that seat's nil rounds produce examples.
    """
    tables = tables or Tables.build()
    master = random.Random(seed)
    examples: list[NilExample] = []
    for i in range(n_rounds):
        round_seed = master.getrandbits(60)
        flip = master.random() < exploration_rate
        explore_seat = i & 3
        dealer = (i >> 2) & 3
        explorer = _ExploringBidder(tables, flip)
        agents = [
            CompositeAgent(explorer if s == explore_seat else BisBidder(tables), SRPPlayer())
            for s in range(4)
        ]
        _, _, takes = play_round(agents, seed=round_seed, dealer=dealer)
        sequence, nil_value, bid_nil = explorer.record
        if bid_nil:
            examples.append(NilExample(sequence, nil_value, takes[explore_seat] == 0))
    return examples


def save_dataset(path, examples: Iterable[NilExample]) -> None:
    with open(path, "w") as fh:
        for ex in examples:
            fh.write(
                json.dumps(
                    {
                        "sequence": list(ex.sequence),
                        "nilValue": ex.nil_value,
                        "success": ex.success,
                    }
                )
                + "\n"
            )


def load_dataset(path) -> list[NilExample]:
    examples = []
    with open(path) as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            examples.append(
                NilExample(tuple(obj["sequence"]), float(obj["nilValue"]), bool(obj["success"]))
            )
    return examples


# --- model --------------------------------------------------------------------


@dataclass
class SCModel:
    """Logistic model of nil success over (previous bids, nil value)."""

    weights: np.ndarray
    sequence_features: bool = True

    def predict(self, sequence, nil_value: float) -> float:
        x = featurize(sequence, nil_value, sequence_features=self.sequence_features)
        return 1.0 / (1.0 + math.exp(-float(self.weights @ x)))


def _design(examples, sequence_features: bool) -> tuple[np.ndarray, np.ndarray]:
    X = np.array(
        [featurize(ex.sequence, ex.nil_value, sequence_features=sequence_features) for ex in examples]
    )
    y = np.array([1.0 if ex.success else 0.0 for ex in examples])
    return X, y


def log_likelihood(weights: np.ndarray, X: np.ndarray, y: np.ndarray, l2: float) -> float:
    """Bernoulli log-likelihood with an L2 penalty on all non-intercept weights."""
    z = X @ weights
    ll = float(np.sum(y * -np.logaddexp(0.0, -z) + (1.0 - y) * -np.logaddexp(0.0, z)))
    return ll - 0.5 * l2 * float(np.sum(weights[1:] ** 2))


def log_likelihood_grad(weights: np.ndarray, X: np.ndarray, y: np.ndarray, l2: float) -> np.ndarray:
    p = 1.0 / (1.0 + np.exp(-(X @ weights)))
    grad = X.T @ (y - p)
    grad[1:] -= l2 * weights[1:]
    return grad


def train(examples, config: TrainConfig = TrainConfig()) -> SCModel:
    """Fit by full-batch gradient ascent; independent of example order.

    The nil-value weight is projected to be non-negative after every step, so
    every derived curve is monotone non-decreasing by construction.
    """
    if not examples:
        raise ValueError("empty dataset")
    labels = {ex.success for ex in examples}
    if len(labels) < 2:
        raise ValueError("dataset needs both successful and failed nils")
    ordered = sorted(examples, key=lambda ex: (ex.sequence, ex.nil_value, ex.success))
    X, y = _design(ordered, config.sequence_features)
    n = len(ordered)
    w = np.zeros(N_FEATURES)
    for _ in range(config.epochs):
        w += (config.learning_rate / n) * log_likelihood_grad(w, X, y, config.l2)
        if w[_NIL_VALUE_INDEX] < 0.0:
            w[_NIL_VALUE_INDEX] = 0.0
    return SCModel(weights=w, sequence_features=config.sequence_features)


# --- frozen curve table ---------------------------------------------------------


class SCTable:
    """One success curve per previous-bid sequence, on a 101-point grid."""

    __slots__ = ("curves",)

    def __init__(self, curves: dict[str, list[float]]):
        self.curves = curves

    @classmethod
    def from_model(cls, model: SCModel) -> "SCTable":
        grid = np.arange(GRID_SIZE) / (GRID_SIZE - 1)
        slope = model.weights[_NIL_VALUE_INDEX]
        curves: dict[str, list[float]] = {}
        if not model.sequence_features:
            base = featurize((), 0.0, sequence_features=False)
            z = float(model.weights @ base) + slope * grid
            shared = (1.0 / (1.0 + np.exp(-z))).tolist()
            for seq in all_sequences():
                curves[sequence_key(seq)] = shared
            return cls(curves)
        for seq in all_sequences():
            base = featurize(seq, 0.0)
            z = float(model.weights @ base) + slope * grid
            curves[sequence_key(seq)] = (1.0 / (1.0 + np.exp(-z))).tolist()
        return cls(curves)

    def lookup(self, sequence, nil_value: float) -> float:
        """Curve value at the nearest grid point."""
        idx = int(round(nil_value * (GRID_SIZE - 1)))
        idx = 0 if idx < 0 else GRID_SIZE - 1 if idx > GRID_SIZE - 1 else idx
        return self.curves[sequence_key(sequence)][idx]

    def as_lookup(self) -> Callable[[tuple[int, ...], float], float]:
        """Adapter matching the bidder's success-curve hook."""
        return self.lookup

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.curves, fh)

    def load_into_tables(self, tables: Tables) -> Tables:
        tables.sc_lookup = self.lookup
        return tables

    @classmethod
    def load(cls, path) -> "SCTable":
        with open(path) as fh:
            curves = json.load(fh)
        if len(curves) != sum((MAX_BID + 1) ** n for n in range(4)):
            raise ValueError(f"expected a complete curve table, got {len(curves)} sequences")
        return cls(curves)
